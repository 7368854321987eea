"""Command-line front end.

    winding-gate degree --domain annulus.json --psi "z" --out run/
    winding-gate test-extend --domain disc.json --f "conj(z)" --out run/
    winding-gate example puncture --h "1/z" --R 0.95 --rho 0.01 --out run/

Exit codes: 0 success, 2 bad input, 3 numerical failure, 4 failed certificate.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .boundary import BoundaryFunction, load_boundary
from .degree import degree_near_boundary, system_traces
from .dirichlet import SolverConfig, extend_H, field_csv_rows, harmonic_measure
from .errors import CertificateFailed, InputError, WindingGateError
from .examples import (
    Laurent,
    Polynomial,
    PuncturedDiscCase,
    nonnegativity_sweep,
    punctured_degree,
    random_laurents,
    random_polynomials,
    slit_degree,
    slit_extension,
    slit_traces,
)
from .expr import parse_expression
from .extend import only_if_check, random_trials, test_extendibility
from .geometry import CircleDomain, ContourFamily, build_domain, default_schedule, exhausting_contours, interior_grid
from .periods import conjugate_periods, make_single_valued, period_matrix
from .report import write_csv, write_json
from .witness import verify_witness, witness_for

FIELD_PROBES = 256
ONLY_IF_TRIALS = 5
SWEEP_SIZE = 24
TRACE_HEADER = ("t", "re", "im", "phase")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _domain(args) -> CircleDomain:
    if not args.domain:
        raise InputError("--domain is required")
    return build_domain(_read_text(args.domain))


def _boundary(args, domain) -> BoundaryFunction:
    if args.f and args.boundary:
        raise InputError("give either --f or --boundary, not both")
    if args.f:
        f = BoundaryFunction.from_expression(args.f, domain)
    elif args.boundary:
        f = load_boundary(_read_text(args.boundary))
    else:
        raise InputError("boundary data required: --f EXPR or --boundary PATH")
    f.check_domain(domain)
    return f


def _config(args) -> SolverConfig:
    try:
        return SolverConfig(degree=args.N, oversampling=args.oversample)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _schedule(args, domain) -> ContourFamily:
    if args.eps0 is None:
        return ContourFamily(domain)
    return ContourFamily(domain, default_schedule(args.eps0))


def _provenance(args, domain=None, config=None, schedule=None) -> dict:
    out = {"command": args.command, "version": __version__, "seed": args.seed}
    if domain is not None:
        out["domain"] = domain.to_dict()
    if config is not None:
        out["solver"] = {"N": config.degree, "oversampling": config.oversampling, "rcond": config.rcond}
    if schedule is not None:
        out["epsilon_schedule"] = list(schedule.epsilon_schedule)
    return out


def _probes(domain, seed):
    return interior_grid(domain, FIELD_PROBES, margin=0.02 * domain.outer.radius, seed=seed)


def _write_traces(out: Path, prefix: str, traces):
    for k, tr in enumerate(traces):
        write_csv(out / f"{prefix}_{k}.csv", TRACE_HEADER, tr.rows())


# -- subcommands --------------------------------------------------------------

def cmd_solve(args, out: Path) -> str:
    domain = _domain(args)
    config = _config(args)
    f = _boundary(args, domain)
    field = extend_H(f, domain, config)
    write_csv(out / "field.csv", ("x", "y", "re", "im"), field_csv_rows(field, _probes(domain, args.seed)))
    write_json(out / "report.json", {**_provenance(args, domain, config), "boundary": f.to_dict(),
                                     "field": field.to_dict()})
    return f"solve: residual {field.residual:.3e}"


def cmd_measure(args, out: Path) -> str:
    domain = _domain(args)
    config = _config(args)
    if not domain.holes:
        raise InputError("harmonic measures need at least one hole")
    measures = []
    for j in range(len(domain.holes)):
        w = harmonic_measure(domain, j, config)
        measures.append({"hole": j, "field": w.to_dict()})
        write_csv(out / f"measure_{j}.csv", ("x", "y", "re", "im"), field_csv_rows(w, _probes(domain, args.seed)))
    write_json(out / "report.json", {**_provenance(args, domain, config), "measures": measures})
    worst = max(m["field"]["residual"] for m in measures)
    return f"measure: {len(measures)} harmonic measure(s), worst residual {worst:.3e}"


def cmd_periods(args, out: Path) -> str:
    domain = _domain(args)
    config = _config(args)
    if not domain.holes:
        raise InputError("period matrix needs at least one hole")
    pm = period_matrix(domain, config)
    payload = {**_provenance(args, domain, config), "period_matrix": pm.to_dict()}
    if args.f or args.boundary:
        field = extend_H(_boundary(args, domain), domain, config)
        corr = make_single_valued(field, domain, config)
        payload["conjugate_periods"] = list(conjugate_periods(field))
        payload["correction_constants"] = list(corr.constants)
    write_json(out / "report.json", payload)
    return f"periods: condition number {pm.condition:.3e}"


def cmd_degree(args, out: Path) -> str:
    domain = _domain(args)
    if not args.psi:
        raise InputError("--psi is required")
    psi = parse_expression(args.psi)
    schedule = _schedule(args, domain)
    result = degree_near_boundary(domain, psi, schedule)
    _write_traces(out, "trace", system_traces(exhausting_contours(domain, result.epsilon_used), psi))
    write_json(out / "report.json", {**_provenance(args, domain, schedule=schedule), "psi": args.psi,
                                     "degree": result.to_dict()})
    return f"degree: {result.degree} (epsilon {result.epsilon_used:.3g}, min |psi| {result.min_modulus:.3e})"


def _witness_payload(w, domain):
    check = verify_witness(w, domain)
    d = w.to_dict()
    d["verification"] = check.to_dict()
    return d


def cmd_test_extend(args, out: Path) -> str:
    domain = _domain(args)
    config = _config(args)
    f = _boundary(args, domain)
    schedule = _schedule(args, domain)
    report = test_extendibility(f, domain, config, seed=args.seed)
    payload = {**_provenance(args, domain, config, schedule), "boundary": f.to_dict(),
               "extendibility": report.to_dict()}
    if report.extendible:
        trials = random_trials(domain, np.random.default_rng(args.seed), ONLY_IF_TRIALS)
        payload["only_if"] = only_if_check(f, trials, domain, config, schedule).to_dict()
        summary = "test-extend: extendible"
    else:
        w = witness_for(f, domain, config, schedule)
        payload["witness"] = _witness_payload(w, domain)
        summary = f"test-extend: not_extendible, witness degree {w.degree.degree}"
    write_json(out / "report.json", payload)
    return summary


def cmd_witness(args, out: Path) -> str:
    domain = _domain(args)
    config = _config(args)
    f = _boundary(args, domain)
    schedule = _schedule(args, domain)
    report = test_extendibility(f, domain, config, seed=args.seed)
    if report.extendible:
        raise InputError("boundary data extends holomorphically; no witness exists")
    w = witness_for(f, domain, config, schedule)
    payload = {**_provenance(args, domain, config, schedule), "witness": _witness_payload(w, domain)}
    write_json(out / "witness.json", payload)
    write_json(out / "report.json", {**_provenance(args, domain, config, schedule),
                                     "verdict": report.verdict, "witness_degree": w.degree.degree,
                                     "a": w.a, "gamma": w.gamma})
    return f"witness: a = {w.a:.6g}, gamma = {w.gamma:.6g}, degree {w.degree.degree}"


def cmd_example(args, out: Path) -> str:
    kind = args.kind
    if kind == "slit":
        h = parse_expression(args.h or "0")
        r = 0.05 if args.r is None else args.r
        deg = slit_degree(h, r)
        f_tilde = slit_extension()
        _write_traces(out, "slit_trace", slit_traces(lambda z: f_tilde(z) + h(z), r))
        write_json(out / "report.json", {**_provenance(args), "case": "slit", "h": args.h or "0",
                                         "r": r, "degree": deg})
        return f"example slit: degree {deg}"
    if kind == "puncture":
        h = Laurent.from_expression(args.h or "0")
        case = PuncturedDiscCase(h, 0.95 if args.R is None else args.R, 0.01 if args.rho is None else args.rho)
        res = punctured_degree(case)
        write_csv(out / "trace_R.csv", TRACE_HEADER, res.traces["R"].rows())
        write_csv(out / "trace_rho.csv", TRACE_HEADER, res.traces["rho"].rows())
        write_json(out / "report.json", {**_provenance(args), "case": "puncture", "h": h.label(),
                                         "R": case.R, "rho": case.rho, **res.to_dict()})
        return f"example puncture: degree {res.degree}"
    rng = np.random.default_rng(args.seed)
    if kind == "slit-sweep":
        fixed = [Polynomial(c) for c in [(0j,), (3 + 0j,), (5 + 0j, 2 + 0j)]]
        rep = nonnegativity_sweep(fixed + random_polynomials(rng, SWEEP_SIZE), "slit",
                                  r=0.05 if args.r is None else args.r)
    else:
        fixed = [Laurent.from_expression(t) for t in ("2", "1/z", "1/z^2", "z-1/2", "1/z+z")]
        rep = nonnegativity_sweep(fixed + random_laurents(rng, SWEEP_SIZE), "puncture",
                                  R=0.95 if args.R is None else args.R,
                                  rho=0.01 if args.rho is None else args.rho)
    bad = [e for e in rep.entries if e["degree"] != e["oracle"]]
    if bad:
        raise CertificateFailed(f"degree disagrees with the root-count oracle for h = {bad[0]['h']}")
    write_json(out / "sweep.json", {**_provenance(args), **rep.to_dict()})
    write_json(out / "report.json", {**_provenance(args), "kind": rep.kind, "certified": len(rep.entries),
                                     "skipped": len(rep.skipped), "min_degree": min(rep.degrees, default=None)})
    return f"example {kind}: {len(rep.entries)} certified, {len(rep.skipped)} skipped, all degrees >= 0"


COMMANDS = {
    "solve": cmd_solve,
    "measure": cmd_measure,
    "periods": cmd_periods,
    "degree": cmd_degree,
    "test-extend": cmd_test_extend,
    "witness": cmd_witness,
    "example": cmd_example,
}


HELP = {
    "solve": "solve the Dirichlet problem for --f on --domain",
    "measure": "harmonic measures of the holes",
    "periods": "period matrix of the harmonic measures",
    "degree": "degree of --psi near the boundary",
    "test-extend": "decide whether --f extends holomorphically",
    "witness": "build and verify a degree -1 witness for --f",
    "example": "slit and punctured disc examples and sweeps",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", metavar="PATH", help="domain JSON with outer circle and holes")
    src = common.add_mutually_exclusive_group()
    src.add_argument("--f", metavar="EXPR", help="boundary data as an expression in z")
    src.add_argument("--boundary", metavar="PATH", help="boundary data JSON, one entry per component")
    common.add_argument("--psi", metavar="EXPR", help="function whose degree is measured")
    common.add_argument("--h", metavar="EXPR", help="holomorphic function added to the extension")
    common.add_argument("--N", type=int, default=24, help="series truncation degree (default 24)")
    common.add_argument("--oversample", type=int, default=4, help="collocation oversampling (default 4)")
    common.add_argument("--eps0", type=float, help="first offset of the contour schedule")
    common.add_argument("--out", metavar="DIR", default=".", help="output directory (default .)")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--r", type=float, help="slit neighbourhood radius")
    common.add_argument("--R", type=float, help="punctured disc outer radius")
    common.add_argument("--rho", type=float, help="punctured disc inner radius")

    parser = argparse.ArgumentParser(prog="winding-gate", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common], help=HELP[name])
        if name == "example":
            p.add_argument("kind", choices=["slit", "puncture", "slit-sweep", "puncture-sweep"])
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        summary = COMMANDS[args.command](args, Path(args.out))
    except WindingGateError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(summary)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
