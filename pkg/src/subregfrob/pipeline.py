"""Staged execution of the full D4 construction with a structured report."""

from __future__ import annotations

import time
import traceback
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import __version__
from . import reference as ref
from .cache import Cache
from .cartan import opposite_cartan, verify_gold_identity
from .exact import ExactMatrix, MPoly, NFElem, nf, rank
from .exact.nf import ZERO
from .frobenius import (assemble_pencil, curvature, flat_coordinates, point_algebra_check,
                        reconstruct_potential, verify_pencil, verify_wdvv)
from .lie import build_d4_basis, dual_basis_and_structure_constants, dynkin_grading
from .poisson import (change_to_t, det_small, dirac_reduce, lie_poisson, omega_block, restrict_to_N,
                      w_identity_failures)
from .slodowy import (build_hypersurface, invariant_polys, milnor_number, normalize_slodowy,
                      slice_weights)

__all__ = ["ALGEBRAS", "STAGES", "PipelineReport", "PipelineState", "StageResult", "UnsupportedAlgebra",
           "run_pipeline"]

ALGEBRAS = ("d4",)
LAMBDAS = (nf(1), nf(-2), nf(Fraction(1, 3)))
UNITY = 2  # 0-based index of t3 = s3


class UnsupportedAlgebra(ValueError):
    pass


def _js(x: Any):
    """JSON-friendly view of scalars and small containers."""
    if isinstance(x, NFElem):
        return x.to_json()
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, MPoly):
        return x.to_json()
    if isinstance(x, ExactMatrix):
        return [[_js(v) for v in row] for row in x.entries]
    if isinstance(x, dict):
        return {str(k): _js(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_js(v) for v in x]
    return x


@dataclass
class StageResult:
    name: str
    status: str  # passed, failed, error, skipped
    seconds: float = 0.0
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)
    error: str | None = None
    runtime: dict[str, Any] = field(default_factory=dict)  # varies run to run

    @property
    def passed(self) -> bool:
        return self.status == "passed"

    def to_json(self, timings: bool = True) -> dict:
        out = {"name": self.name, "status": self.status, "checks": self.checks,
               "details": _js(self.details)}
        if self.error:
            out["error"] = self.error
        if timings:
            out["runtime"] = {"seconds": round(self.seconds, 3), **self.runtime}
        return out


@dataclass
class PipelineState:
    """Every intermediate object, for emitters and verification subcommands."""

    algebra: str
    alg: Any = None
    triple: Any = None
    mb: Any = None
    dual: Any = None
    oc: Any = None
    gold: Any = None
    chart: Any = None
    hyper: Any = None
    lp: Any = None
    ts_z: Any = None
    ts_t: Any = None
    omega: Any = None
    red: Any = None
    flat: Any = None
    pencil: Any = None
    pencil_report: Any = None
    curvature: dict = field(default_factory=dict)
    potential: Any = None
    wdvv: Any = None
    point: Any = None
    diff: Any = None


@dataclass
class PipelineReport:
    algebra: str
    stages: list[StageResult]
    constants: dict[str, Any] = field(default_factory=dict)
    runtime: dict[str, Any] = field(default_factory=dict)  # scratch for the running stage

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.stages)

    def stage(self, name: str) -> StageResult:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_json(self, timings: bool = True) -> dict:
        return {
            "algebra": self.algebra,
            "version": __version__,
            "passed": self.passed,
            "constants": _js(self.constants),
            "stages": [s.to_json(timings) for s in self.stages],
        }


# -- stages ----------------------------------------------------------------
# each returns (checks, details); raising marks the stage as an error


def _stage_lie(st: PipelineState, rep: PipelineReport):
    st.alg, st.triple, st.mb = build_d4_basis()
    alg, tr, mb = st.alg, st.triple, st.mb
    grading = dynkin_grading(alg, tr.h)
    kdim = alg.dim - rank(alg.ad_matrix(tr.e))
    checks = {
        "sl2_relations": tr.relations_hold(),
        "form_normalized": alg.form(tr.e, tr.f) == 1,
        "dimension_28": alg.dim == 28,
        "centralizer_dim_r_plus_2": kdim == len(mb.weights),
        "module_relations": not mb.check_relations(),
        "pairing_law": not mb.check_pairing(),
        "grading_total": sum(len(v) for v in grading.values()) == alg.dim,
    }
    details = {"weights": list(mb.weights), "kappa": mb.kappa, "eta0": mb.eta0,
               "grading": {g: len(v) for g, v in grading.items()}}
    return checks, details


def _stage_dual(st: PipelineState, rep: PipelineReport):
    st.dual = dual = dual_basis_and_structure_constants(st.mb)
    n = dual.size
    form = st.alg.form
    duality = all(form(dual.lower[I], dual.upper[J]) == (1 if I == J else 0) for I in range(n) for J in range(n))
    triples = [(0, 1, 2), (3, 7, 11), (5, 13, 20), (0, 14, 27), (6, 16, 22)]
    jac = all(not dual.jacobi_residual(*t) for t in triples)
    defects = dual.antidiagonal_defects()
    checks = {
        "lowest_weight_first": [l for l in dual.order[:len(st.mb.weights)]]
        == [(i, -st.mb.eta(i)) for i in range(1, len(st.mb.weights) + 1)],
        "duality": duality,
        "jacobi_sample": jac,
        # only the grade-0 block may sit off the antidiagonal
        "antidiagonal_outside_grade0": all(dual.order[i][1] == 0 and dual.order[j][1] == 0 for i, j in defects),
    }
    return checks, {"size": n, "off_antidiagonal_positions": [list(d) for d in defects]}


def _stage_cartan(st: PipelineState, rep: PipelineReport):
    t = time.perf_counter()
    st.oc = oc = opposite_cartan(st.mb)
    st.gold = gold = verify_gold_identity(st.mb, oc)
    secs = time.perf_counter() - t
    gram = oc.gram_in_order(ref.GRAM_ORDER)
    rep.constants["rho"] = oc.rho
    rep.constants["cyclic_element"] = list(oc.a_label)
    checks = {
        "regular_semisimple": oc.certificate.ok,
        "gram_matches_published": gram == ref.GRAM,
        "gold_identity_16": gold.ok and len(gold.entries) == 16,
        "y_components_match_published": oc.components == ref.Y_COMPONENTS,
        "under_30s": secs < 30,
    }
    rep.runtime["seconds_opposite_cartan"] = round(secs, 3)
    return checks, {"gram_order": ref.GRAM_ORDER, "gram": gram, "gold_failures": gold.failures,
                    "kernel_dim": oc.certificate.kernel_dim}


def _stage_slodowy(st: PipelineState, rep: PipelineReport):
    mb = st.mb
    inv = invariant_polys(mb)
    st.chart = chart = normalize_slodowy(mb, inv)
    r = mb.rank
    # the D-type singularity lives in the last three coordinates
    keep = list(range(len(mb.weights) - 3, len(mb.weights)))
    fiber = chart.singular_fiber(keep)
    published = ref.singular_fiber()
    lam = None
    for e, c in published.terms.items():
        lam = fiber.coefficient(e) / c
        break
    proportional = lam is not None and fiber == published * lam
    fz = _project(fiber, keep)
    mu = milnor_number(fz, [slice_weights(mb)[k] for k in keep])
    st.hyper = build_hypersurface(chart, r)
    tz_diff = [ref.diff_poly(a, b).to_json() for a, b in zip(chart.t_of_z, ref.t_of_z())]
    t0_diff = ref.diff_poly(chart.t0, ref.t0(), ref.TYPO_SITES["t0"])
    rep.constants["t0_scale"] = chart.t0_scale
    rep.constants["singular_fiber_lambda"] = lam
    hn = st.hyper
    checks = {
        "quasihomogeneous_coordinates": not chart.quasihomogeneity_defects(),
        "t0_quasihomogeneous": chart.t0.is_quasihomogeneous(chart.weights, 2 * mb.eta0 + 2),
        "singular_fiber_proportional": proportional,
        "lambda_is_one": proportional and lam == 1,
        "milnor_number_equals_rank": mu == r,
        "t_of_z_matches_published": all(not d for d in tz_diff),
        "t0_matches_published": t0_diff.ok,
        "hypersurface_branch": hn.branch_ok(),
    }
    return checks, {"milnor_number": mu, "t0": chart.t0.format([f"t{i + 1}" for i in range(chart.nvars)]),
                    "t0_diff": t0_diff.to_json(),
                    "relation": {"p1": hn.ring.p1.format(hn.ring.names), "p0": hn.ring.p0.format(hn.ring.names)}}


def _project(p: MPoly, keep: list[int]) -> MPoly:
    """Drop variables outside ``keep`` (they must not occur)."""
    terms = {}
    for e, c in p.terms.items():
        terms[tuple(e[i] for i in keep)] = c
    return MPoly.from_terms(len(keep), terms)


def _stage_dirac(st: PipelineState, rep: PipelineReport, cache: Cache | None, route: str):
    m = len(st.mb.weights)
    st.lp = lp = lie_poisson(st.dual, st.triple.e, m)
    key = None
    ts = None
    if cache is not None:
        key = cache.key("dirac", route, lp.m, [[x.to_json() for x in row] for row in lp.Ft],
                        [[x.to_json() for x in row] for row in lp.gram])
        ts = cache.get(key)
    hit = ts is not None
    if ts is None:
        ts = dirac_reduce(lp, route=route)
        if cache is not None:
            cache.put(key, ts)
    st.ts_z = ts
    other = "neumann" if route == "bareiss" else "bareiss"
    rep.runtime["cache_hit"] = hit
    details = {"route": route, "inverse_det": ts.inverse_det}
    checks = {
        "lie_poisson_antisymmetric": lp.antisymmetric(),
        "F_antisymmetric": all(ts.F[i][j] == -ts.F[j][i] for i in range(m) for j in range(m)),
        "g_symmetric": all(ts.g[i][j] == ts.g[j][i] for i in range(m) for j in range(m)),
        "quasihomogeneous_degrees": not ts.degree_failures(slice_weights(st.mb)),
    }
    if other == "neumann":
        # the graded series is cheap, so the cross-check always runs
        alt = dirac_reduce(lp, route=other)
        checks["routes_agree"] = alt.F == ts.F and alt.g == ts.g and alt.G == ts.G
    return checks, details


def _stage_t(st: PipelineState, rep: PipelineReport):
    st.ts_t = tt = change_to_t(st.ts_z, st.chart)
    w_fail = w_identity_failures(tt, st.mb.weights)
    st.omega = om = omega_block(tt, st.chart.t0)
    rep.constants["omega_multiple"] = om.constant
    rep.constants["omega_ratio_to_published"] = om.constant / ref.OMEGA_MULTIPLE if om.constant else None
    checks = {
        "w_algebra_identities": not w_fail,
        "omega_zero_block": om.zero_block_ok,
        "omega_structure": om.omega_ok,
        "quasihomogeneous_degrees": not tt.degree_failures(st.chart.weights),
    }
    return checks, {"w_failures": w_fail}


def _stage_restrict(st: PipelineState, rep: PipelineReport):
    st.red = red = restrict_to_N(st.ts_t, st.hyper)
    d = red.nondegeneracy_det(UNITY)
    oc = st.oc
    A_rho = ExactMatrix([[x / oc.rho for x in row] for row in oc.gram.entries], zero=ZERO)
    target = det_small(A_rho.entries, ZERO)
    g1 = red.unity_derivative(UNITY)
    const_in_t = all(x.is_constant() or x.is_zero() for row in g1 for x in row)
    rep.constants["det_unity_derivative"] = d.constant_value() if d.is_constant() else None
    checks = {
        "F_hat_vanishes": red.fhat_vanishes,
        "levi_civita": not red.levi_civita_failures(),
        "w_identity_on_N": all(red.g[0][n] == st.hyper.ring.var(n) * (st.mb.eta(n + 1) + 1)
                               for n in range(red.r)),
        "nondegeneracy_det": d.is_constant() and d.constant_value() == target,
    }
    return checks, {"det_unity_derivative": d.constant_value() if d.is_constant() else None,
                    "det_A_over_rho": target,
                    "unity_derivative_constant_in_t": const_in_t}


def _stage_flat(st: PipelineState, rep: PipelineReport):
    mb = st.mb
    w = slice_weights(mb)[:mb.rank]
    st.flat = fc = flat_coordinates(st.red, w, st.oc.exponents, mb.kappa, UNITY)
    st.pencil = p = assemble_pencil(st.red, fc, mb.kappa, st.oc.exponents, UNITY)
    diffs = [ref.diff_poly(a, b, ref.TYPO_SITES["s_of_t"] if i == 1 else ()) for i, (a, b)
             in enumerate(zip(fc.s_of_t, ref.s_of_t()))]
    rel_p1, rel_p0 = ref.z_relation()
    checks = {
        "s_of_t_matches_published": all(d.ok for d in diffs),
        "g1_constant_antidiagonal": all(not fc.eta_up[i, j] for i in range(mb.rank) for j in range(mb.rank)
                                        if st.oc.exponents[i] + st.oc.exponents[j] != mb.kappa + 1),
        "relation_matches_published": p.ring.p1 == rel_p1 and p.ring.p0 == rel_p0,
    }
    names = [f"t{i + 1}" for i in range(mb.rank)]
    return checks, {"s_of_t": [s.format(names) for s in fc.s_of_t], "eta_up": fc.eta_up,
                    "s_of_t_diff": [d.to_json() for d in diffs]}


def _stage_pencil(st: PipelineState, rep: PipelineReport):
    p = st.pencil
    st.pencil_report = pr = verify_pencil(p)
    expected_R = [Fraction(e, p.kappa + 1) for e in p.exponents]
    checks = {
        "bracket_e_E": pr.bracket_ok,
        "lie_E_g2": pr.lie_E_g2_ok,
        "lie_e_g2": pr.lie_e_g2_ok,
        "lie_e_g1": pr.lie_e_g1_ok,
        "g1_constant_antidiagonal": pr.g1_constant_antidiagonal,
        "gamma1_vanishes": pr.G1_vanishes,
        "euler_degrees": pr.euler_degrees == [nf(d) for d in p.degrees],
        "unity_is_d_s3": pr.unity_vector == [nf(1) if i == p.unity else ZERO for i in range(p.r)],
        "R_diagonal": pr.R == [[nf(expected_R[i]) if i == j else ZERO for j in range(p.r)] for i in range(p.r)],
        "R_invertible": pr.R_invertible,
    }
    for lam in LAMBDAS:
        comps = curvature(p.metric(lam), p.christoffel(lam))
        st.curvature[str(lam)] = len(comps)
        checks[f"flat_lambda_{lam}"] = not comps
    rep.constants["charge"] = p.charge
    rep.constants["degrees"] = p.degrees
    return checks, {"R": pr.R, "euler_degrees": pr.euler_degrees, "curvature_nonzero": st.curvature}


def _stage_potential(st: PipelineState, rep: PipelineReport):
    st.potential = pd = reconstruct_potential(st.pencil)
    st.wdvv = w = verify_wdvv(pd, st.oc.exponents, st.mb.kappa)
    st.point = pt = point_algebra_check(pd, *_point_on_N(pd))
    st.diff = df = ref.diff_potential(pd.F)
    rep.constants["potential_branch"] = df.best_branch
    rep.constants["z_scale"] = df.z_scale
    checks = {
        "wdvv_256": not w.residuals and w.checked == 256,
        "unity_axiom": w.unity_ok,
        "quasihomogeneity": w.quasihomogeneous,
        "eta_constant_antidiagonal": w.eta_constant_antidiagonal,
        "algebraic": w.algebraic,
        "point_algebra": all(pt.values()),
        "matches_published": df.ok,
    }
    return checks, {"potential": pd.F.format(), "wdvv_nonzero": len(w.residuals), "point_algebra": pt,
                    "diff": df.to_json()}


def _point_on_N(pd):
    """A rational point of N: pick s1, s3, s4 and Z, then solve the relation for s2."""
    ring = pd.ring
    s1, s3, s4, z = nf(Fraction(1, 3)), nf(2), nf(Fraction(-1, 2)), nf(Fraction(3, 7))
    rel = lambda s2: z * z - ring.p1.evaluate([s1, s2, s3, s4]) * z - ring.p0.evaluate([s1, s2, s3, s4])  # noqa: E731
    c0 = rel(ZERO)
    c1 = rel(nf(1)) - c0
    s2 = -c0 / c1
    return [s1, s2, s3, s4], z


STAGES: list[tuple[str, Callable]] = [
    ("lie", _stage_lie),
    ("dual-basis", _stage_dual),
    ("opposite-cartan", _stage_cartan),
    ("slodowy", _stage_slodowy),
    ("dirac", _stage_dirac),
    ("t-coordinates", _stage_t),
    ("restrict-N", _stage_restrict),
    ("flat-coordinates", _stage_flat),
    ("pencil", _stage_pencil),
    ("potential", _stage_potential),
]


def run_pipeline(algebra: str = "d4", cache: Cache | None = None, route: str = "bareiss",
                 until: str | None = None) -> tuple[PipelineReport, PipelineState]:
    """Run the stages in order; a failing or crashing stage stops the chain."""
    if algebra.lower() not in ALGEBRAS:
        raise UnsupportedAlgebra(f"algebra {algebra!r} is not supported; available: {', '.join(ALGEBRAS)}")
    st = PipelineState(algebra.lower())
    rep = PipelineReport(st.algebra, [])
    halted = False
    for name, fn in STAGES:
        if halted:
            rep.stages.append(StageResult(name, "skipped"))
            continue
        t = time.perf_counter()
        rep.runtime = {}
        try:
            if name == "dirac":
                checks, details = fn(st, rep, cache, route)
            else:
                checks, details = fn(st, rep)
            status = "passed" if all(checks.values()) else "failed"
            res = StageResult(name, status, time.perf_counter() - t, checks, details,
                              runtime=dict(rep.runtime))
        except Exception as exc:  # the report carries the diagnostic instead of a traceback
            payload = getattr(exc, "payload", None)
            details = {"payload": str(payload)} if payload is not None else {}
            details["traceback"] = traceback.format_exc(limit=4)
            res = StageResult(name, "error", time.perf_counter() - t, {}, details,
                              f"{type(exc).__name__}: {exc}")
        rep.stages.append(res)
        if res.status == "error":
            halted = True
        if until is not None and name == until:
            break
    return rep, st
