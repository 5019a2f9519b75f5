"""JSON, LaTeX and plain-text emitters for pipeline objects, with JSON decoding."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .exact import ExactMatrix, MPoly, NFElem, QElem, QuotientRing
from .exact.nf import ZERO

__all__ = ["EMITTABLE", "FORMATS", "decode", "dumps", "emit", "to_document"]

EMITTABLE = ("basis", "gram-matrix", "slodowy-chart", "transverse", "reduced-n", "potential")
FORMATS = ("json", "latex", "text")


def dumps(doc: Any, compact: bool = False) -> str:
    """Canonical JSON text: sorted keys, ASCII only, trailing newline."""
    if compact:
        return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _mat(rows) -> list:
    return [[x.to_json() for x in row] for row in rows]


def _tensor3(G) -> list:
    return [[[x.to_json() for x in c] for c in b] for b in G]


def _ring_doc(ring: QuotientRing) -> dict:
    return {"variables": list(ring.names), "z": ring.zname,
            "p1": ring.p1.to_json(), "p0": ring.p0.to_json()}


def _ring_from(doc) -> QuotientRing:
    n = len(doc["variables"])
    return QuotientRing(MPoly.from_json(n, doc["p1"]), MPoly.from_json(n, doc["p0"]),
                        names=doc["variables"], zname=doc["z"])


def _structure_doc(ts, names) -> dict:
    return {"variables": names, "F": _mat(ts.F), "g": _mat(ts.g), "Gamma": _tensor3(ts.G)}


def to_document(name: str, st) -> dict:
    """JSON-ready document for an emittable object of a pipeline state."""
    if name not in EMITTABLE:
        raise KeyError(f"unknown object {name!r}; valid objects: {', '.join(EMITTABLE)}")
    doc: dict[str, Any] = {"object": name, "algebra": st.algebra}
    if name == "basis":
        mb = st.mb
        doc["weights"] = list(mb.weights)
        doc["vectors"] = [{"label": list(l), "matrix": _mat(mb[l].entries)} for l in mb.labels]
    elif name == "gram-matrix":
        order = st.oc.antidiagonal_order()
        doc["order"] = [f"y{i}" for i in order]
        doc["matrix"] = _mat(st.oc.gram_in_order(order).entries)
        doc["rho"] = st.oc.rho.to_json()
    elif name == "slodowy-chart":
        ch = st.chart
        doc["weights"] = list(ch.weights)
        doc["t_of_z"] = [p.to_json() for p in ch.t_of_z]
        doc["z_of_t"] = [p.to_json() for p in ch.z_of_t]
        doc["t0"] = ch.t0.to_json()
        doc["t0_scale"] = ch.t0_scale.to_json()
    elif name == "transverse":
        m = st.ts_z.m
        doc["z"] = _structure_doc(st.ts_z, [f"z{i + 1}" for i in range(m)])
        doc["t"] = _structure_doc(st.ts_t, [f"t{i + 1}" for i in range(m)])
    elif name == "reduced-n":
        red = st.red
        doc["ring"] = _ring_doc(red.hyper.ring)
        doc["g"] = _mat(red.g)
        doc["Gamma"] = _tensor3(red.G)
        doc["Fhat_scaled"] = _mat(red.Fhat_scaled)
    elif name == "potential":
        pd, fc = st.potential, st.flat
        doc["ring"] = _ring_doc(pd.ring)
        doc["s_of_t"] = [p.to_json() for p in fc.s_of_t]
        doc["eta_up"] = _mat(pd.eta_up.entries)
        doc["charge"] = str(pd.charge)
        doc["degrees"] = [str(d) for d in pd.degrees]
        doc["F"] = pd.F.to_json()
    return doc


def decode(doc: dict) -> dict:
    """Rebuild exact objects from a document produced by :func:`to_document`."""
    name = doc["object"]
    nfm = lambda rows: ExactMatrix([[NFElem.from_json(x) for x in r] for r in rows], zero=ZERO)  # noqa: E731
    if name == "basis":
        return {"weights": doc["weights"],
                "vectors": {tuple(v["label"]): nfm(v["matrix"]) for v in doc["vectors"]}}
    if name == "gram-matrix":
        return {"order": doc["order"], "matrix": nfm(doc["matrix"]), "rho": NFElem.from_json(doc["rho"])}
    if name == "slodowy-chart":
        n = len(doc["weights"])
        return {"weights": doc["weights"],
                "t_of_z": [MPoly.from_json(n, p) for p in doc["t_of_z"]],
                "z_of_t": [MPoly.from_json(n, p) for p in doc["z_of_t"]],
                "t0": MPoly.from_json(n, doc["t0"]),
                "t0_scale": NFElem.from_json(doc["t0_scale"])}
    if name == "transverse":
        out = {}
        for key in ("z", "t"):
            part = doc[key]
            n = len(part["variables"])
            P = lambda x: MPoly.from_json(n, x)  # noqa: E731
            out[key] = {"F": [[P(x) for x in r] for r in part["F"]],
                        "g": [[P(x) for x in r] for r in part["g"]],
                        "Gamma": [[[P(x) for x in c] for c in b] for b in part["Gamma"]]}
        return out
    if name == "reduced-n":
        ring = _ring_from(doc["ring"])
        Q = lambda x: QElem.from_json(ring, x)  # noqa: E731
        return {"ring": ring, "g": [[Q(x) for x in r] for r in doc["g"]],
                "Gamma": [[[Q(x) for x in c] for c in b] for b in doc["Gamma"]],
                "Fhat_scaled": [[Q(x) for x in r] for r in doc["Fhat_scaled"]]}
    if name == "potential":
        ring = _ring_from(doc["ring"])
        n = ring.nvars
        return {"ring": ring, "F": QElem.from_json(ring, doc["F"]),
                "s_of_t": [MPoly.from_json(n, p) for p in doc["s_of_t"]],
                "eta_up": nfm(doc["eta_up"]), "charge": Fraction(doc["charge"]),
                "degrees": [Fraction(d) for d in doc["degrees"]]}
    raise KeyError(f"unknown object {name!r}")


# -- text and LaTeX ----------------------------------------------------------


def _scalar(x, latex):
    if isinstance(x, NFElem):
        return x.to_latex() if latex else str(x)
    return str(x)


def _tex_name(name: str) -> str:
    return re.sub(r"^([A-Za-z]+)(\d+)$", r"\1_{\2}", name)


def _entry(x, names, latex):
    if isinstance(x, MPoly):
        return x.format(names, latex=latex)
    if isinstance(x, QElem):
        qn = [_tex_name(n) for n in x.ring.names] if latex else None
        return x.format(latex=latex, names=qn)
    return _scalar(x, latex)


def _matrix_block(rows, names, latex) -> str:
    cells = [[_entry(x, names, latex) for x in r] for r in rows]
    if latex:
        body = " \\\\\n".join(" & ".join(r) for r in cells)
        return "\\begin{pmatrix}\n" + body + "\n\\end{pmatrix}"
    return "\n".join("[" + ", ".join(r) + "]" for r in cells)


def _relation(ring: QuotientRing, latex: bool) -> str:
    """The defining relation written as ``Z^2 - p1 Z - p0 = 0``."""
    n = ring.nvars
    idx = list(range(n))
    z = MPoly.var(n + 1, n)
    rel = z * z - ring.p1.embed(n + 1, idx) * z - ring.p0.embed(n + 1, idx)
    names = list(ring.names) + [ring.zname]
    if latex:
        names = [_tex_name(v) for v in names]
    return f"{rel.format(names, latex=latex)} = 0"


def _render(name: str, st, latex: bool) -> str:
    lines: list[str] = []
    eq = (lambda l, r: f"{l} &= {r} \\\\") if latex else (lambda l, r: f"{l} = {r}")
    if name == "basis":
        for l in st.mb.labels:
            tag = f"X^{{{l[0]}}}_{{{l[1]}}}" if latex else f"X[{l[0]},{l[1]}]"
            lines.append(eq(tag, _matrix_block(st.mb[l].entries, None, latex)))
    elif name == "gram-matrix":
        order = st.oc.antidiagonal_order()
        label = ", ".join(f"y_{i}" for i in order) if latex else ", ".join(f"y{i}" for i in order)
        lines.append(eq(f"A({label})", _matrix_block(st.oc.gram_in_order(order).entries, None, latex)))
    elif name == "slodowy-chart":
        ch = st.chart
        zn = [f"z_{i + 1}" if latex else f"z{i + 1}" for i in range(ch.nvars)]
        tn = [f"t_{i + 1}" if latex else f"t{i + 1}" for i in range(ch.nvars)]
        for i, p in enumerate(ch.t_of_z):
            lines.append(eq(tn[i], p.format(zn, latex=latex)))
        lines.append(eq("t_0" if latex else "t0", ch.t0.format(tn, latex=latex)))
    elif name == "transverse":
        for ts, c in ((st.ts_z, "z"), (st.ts_t, "t")):
            names = [f"{c}_{i + 1}" if latex else f"{c}{i + 1}" for i in range(ts.m)]
            lines.append(eq(f"F({c})", _matrix_block(ts.F, names, latex)))
            lines.append(eq(f"g({c})", _matrix_block(ts.g, names, latex)))
            for k in range(ts.m):
                rows = [[ts.G[i][j][k] for j in range(ts.m)] for i in range(ts.m)]
                tag = f"\\Gamma_{{{k + 1}}}({c})" if latex else f"Gamma_{k + 1}({c})"
                lines.append(eq(tag, _matrix_block(rows, names, latex)))
    elif name == "reduced-n":
        red = st.red
        r = red.r
        lines.append(_relation(red.hyper.ring, latex) + (" \\\\" if latex else ""))
        lines.append(eq("\\hat g" if latex else "g_hat", _matrix_block(red.g, None, latex)))
        for k in range(r):
            rows = [[red.G[i][j][k] for j in range(r)] for i in range(r)]
            tag = f"\\hat\\Gamma_{{{k + 1}}}" if latex else f"Gamma_hat_{k + 1}"
            lines.append(eq(tag, _matrix_block(rows, None, latex)))
    elif name == "potential":
        pd, fc = st.potential, st.flat
        tn = [f"t_{i + 1}" if latex else f"t{i + 1}" for i in range(pd.r)]
        for i, p in enumerate(fc.s_of_t):
            lines.append(eq(f"s_{i + 1}" if latex else f"s{i + 1}", p.format(tn, latex=latex)))
        lines.append(eq("\\mathbb{F}" if latex else "F", _entry(pd.F, None, latex)))
        lines.append(_relation(pd.ring, latex))
    if latex:
        return "\\begin{align*}\n" + "\n".join(lines) + "\n\\end{align*}\n"
    return "\n".join(lines) + "\n"


def emit(name: str, st, fmt: str = "json") -> str:
    if name not in EMITTABLE:
        raise KeyError(f"unknown object {name!r}; valid objects: {', '.join(EMITTABLE)}")
    if fmt == "json":
        return dumps(to_document(name, st), compact=True)
    if fmt in ("latex", "text"):
        return _render(name, st, fmt == "latex")
    raise ValueError(f"unknown format {fmt!r}; valid formats: {', '.join(FORMATS)}")
