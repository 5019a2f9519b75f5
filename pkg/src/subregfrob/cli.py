"""Command-line interface: ``pipeline run``, ``verify ...`` and ``emit``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import reference as ref
from .cache import Cache
from .frobenius import PotentialData, verify_wdvv
from .pipeline import ALGEBRAS, PipelineReport, UnsupportedAlgebra, run_pipeline
from .serialize import EMITTABLE, FORMATS, dumps, emit

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

VERIFY_STAGES = {
    "opposite-cartan": ["opposite-cartan"],
    "w-algebra": ["t-coordinates", "restrict-N"],
    "pencil": ["flat-coordinates", "pencil"],
    "wdvv": ["potential"],
}
EMIT_UNTIL = {
    "basis": "lie",
    "gram-matrix": "opposite-cartan",
    "slodowy-chart": "slodowy",
    "transverse": "t-coordinates",
    "reduced-n": "restrict-N",
    "potential": "potential",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", default="d4", help="Lie algebra identifier (only d4 ships)")
    common.add_argument("--cache-dir", default=None,
                        help="cache location (default: $SF_CACHE_DIR or ~/.cache/subregfrob)")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the cache")

    p = argparse.ArgumentParser(prog="subregfrob",
                                description="Algebraic Frobenius manifold of the subregular W-algebra of D4.")
    sub = p.add_subparsers(dest="command", required=True)

    pipe = sub.add_parser("pipeline", help="run the full construction")
    pipe_sub = pipe.add_subparsers(dest="action", required=True)
    run = pipe_sub.add_parser("run", parents=[common], help="execute all stages and write a JSON report")
    run.add_argument("--out", type=Path, default=None, help="report path (default: stdout)")
    run.add_argument("--route", choices=["bareiss", "neumann"], default="bareiss",
                     help="inversion route for the transverse block")
    run.add_argument("--no-timings", action="store_true", help="omit timings so reports are byte-identical")

    ver = sub.add_parser("verify", parents=[common], help="run and report one verification")
    ver.add_argument("target", choices=sorted(VERIFY_STAGES))
    ver.add_argument("--potential", choices=["computed", "paper"], default="computed",
                     help="for wdvv: check the reconstructed or the published potential")

    em = sub.add_parser("emit", parents=[common], help="print an intermediate object")
    em.add_argument("--object", required=True, dest="obj", help=f"one of: {', '.join(EMITTABLE)}")
    em.add_argument("--format", choices=FORMATS, default="json")
    em.add_argument("--out", type=Path, default=None)
    return p


def _cache(args) -> Cache | None:
    return None if args.no_cache else Cache(args.cache_dir)


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _stage_lines(rep: PipelineReport, names) -> tuple[list[str], bool]:
    lines, ok = [], True
    for name in names:
        s = rep.stage(name)
        lines.append(f"[{s.status.upper()}] {name}")
        if s.error:
            lines.append(f"    error: {s.error}")
            ok = False
        for check, passed in s.checks.items():
            lines.append(f"    {'PASS' if passed else 'FAIL'}  {check}")
        ok = ok and s.passed
    return lines, ok


def cmd_pipeline(args) -> int:
    rep, _ = run_pipeline(args.algebra, cache=_cache(args), route=args.route)
    _write(dumps(rep.to_json(timings=not args.no_timings)), args.out)
    for s in rep.stages:
        print(f"{s.name}: {s.status}", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _published_wdvv(st) -> tuple[list[str], bool]:
    pd = st.potential
    diff = st.diff
    lines = [f"relation matches published: {diff.relation_match}",
             f"Z rescaling: {diff.z_scale}",
             f"matching branch: {diff.best_branch}"]
    for branch, parts in diff.branches.items():
        for part, d in parts.items():
            lines.append(f"  branch {branch}, {part}: {len(d.mismatches)} mismatches"
                         f" ({len(d.unexplained)} outside typo sites)")
            for e, c, p in d.mismatches:
                lines.append(f"    {e}: computed {c}, published {p}")
    ok = diff.ok
    if diff.relation_match:
        published = PotentialData(pd.ring, ref.potential(pd.ring), pd.eta_up, pd.eta_low,
                                  pd.degrees, pd.charge, pd.unity)
        w = verify_wdvv(published, st.oc.exponents, st.mb.kappa)
        lines.append(f"published potential: {w.checked - len(w.residuals)}/{w.checked} WDVV residuals vanish,"
                     f" unity {w.unity_ok}, quasihomogeneous {w.quasihomogeneous}")
        ok = ok and w.ok
    return lines, ok


def cmd_verify(args) -> int:
    stages = VERIFY_STAGES[args.target]
    rep, st = run_pipeline(args.algebra, cache=_cache(args), until=stages[-1])
    lines, ok = _stage_lines(rep, stages)
    consts = {
        "opposite-cartan": ["rho"],
        "w-algebra": ["omega_multiple", "omega_ratio_to_published", "det_unity_derivative"],
        "pencil": ["charge", "degrees"],
        "wdvv": ["potential_branch", "z_scale"],
    }[args.target]
    for c in consts:
        if c in rep.constants:
            v = rep.constants[c]
            lines.append(f"{c}: {v if not isinstance(v, list) else ', '.join(map(str, v))}")
    if args.target == "wdvv" and args.potential == "paper" and st.potential is not None:
        more, ok2 = _published_wdvv(st)
        lines += more
        ok = ok and ok2
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_emit(args) -> int:
    if args.obj not in EMITTABLE:
        print(f"unknown object {args.obj!r}; valid objects: {', '.join(EMITTABLE)}", file=sys.stderr)
        return EXIT_USAGE
    until = EMIT_UNTIL[args.obj]
    rep, st = run_pipeline(args.algebra, cache=_cache(args), until=until)
    failed = [s for s in rep.stages if s.status == "error"]
    if failed:
        print(f"stage {failed[0].name} failed: {failed[0].error}", file=sys.stderr)
        return EXIT_FAIL
    _write(emit(args.obj, st, args.format), args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.algebra.lower() not in ALGEBRAS:
        print(f"unsupported algebra {args.algebra!r}: only {', '.join(ALGEBRAS)} input data ships",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "pipeline":
            return cmd_pipeline(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_emit(args)
    except UnsupportedAlgebra as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
