"""Command-line interface: ``qes <command> [flags]``.

Machine-readable output goes to stdout (or ``--out``), a short human
summary to stderr.  Exit codes: 0 success, 1 verified mismatch, 2 usage,
3 budget or convergence failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import mpmath

from . import catalog
from .algebra import Surd
from .config import RunConfig, parse_width
from .elimination import Budget, eliminant
from .errors import BudgetExceededError, QESError
from .model import PotentialSpec, ell_from_D
from .recurrence import harmonic_solution, newton_solve
from .verifier import branch_tuple, continuation, cross_validate, schrodinger_residual, seed_candidate

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2, 3

# (q, N) pairs covered by ``verify --all``
ALL_CASES = (
    [(1, N) for N in range(1, 9)]
    + [(2, N) for N in range(1, 7)]
    + [(3, N) for N in range(1, 6)]
    + [(4, N) for N in range(1, 5)]
    + [(5, N) for N in range(1, 4)]
)


def _alphas(text: str) -> tuple:
    return tuple(Fraction(a) for a in text.split(","))


def _dec(x, digits: int = 20) -> str:
    if isinstance(x, Surd):
        with mpmath.workdps(digits + 10):
            return mpmath.nstr(x.to_mpf(), digits)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        with mpmath.workdps(digits + 10):
            return mpmath.nstr(mpmath.mpf(x.numerator) / x.denominator, digits)
    return mpmath.nstr(x, digits)


def _emit(cfg: RunConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- commands -----------------------------------------------------------------------

def cmd_spectrum(args, cfg: RunConfig) -> int:
    q, N = args.q, args.N
    if cfg.format == "json":
        _emit(cfg, catalog.to_json(q, N))
    elif cfg.format == "csv":
        _emit(cfg, catalog.to_csv(q, N))
    elif q == 4:
        entries = catalog.spectrum_q4(N)
        if args.form == "exact":
            _emit(cfg, ", ".join(e.exact_text() for e in entries))
        else:
            _emit(cfg, " ".join(_dec(v) for v in catalog.q4_values(N)))
    else:
        vals = catalog.spectrum(q, N)
        _emit(cfg, " ".join(str(v) if args.form == "exact" else _dec(v) for v in vals))
    return EXIT_OK


def _budget(cfg: RunConfig) -> Budget:
    return Budget(cfg.budget_degree, cfg.budget_terms)


def cmd_eliminant(args, cfg: RunConfig) -> int:
    keep = int(args.var.lstrip("s")) - 1
    if not 0 <= keep < args.q:
        raise argparse.ArgumentTypeError(f"--var must be one of s1..s{args.q}")
    sec = eliminant(args.q, args.N, keep, _budget(cfg), cfg.precision)
    if cfg.format == "json":
        doc = {
            "q": args.q,
            "N": args.N,
            "var": args.var,
            "eliminant": sec.text(),
            "degree": sec.degree,
            "content": 1,
            "z_form": None if sec.F is None else {"e": sec.e, "F": sec.F.with_var("z").to_text()},
            "removed_factor": sec.removed.to_text(),
        }
        _emit(cfg, json.dumps(doc, sort_keys=True))
    else:
        lines = [f"eliminant: {sec.text()}", "content: 1"]
        if sec.F is not None:
            lines.append(f"z-form: {sec.z_text()}")
        _emit(cfg, "\n".join(lines))
    _note(f"q={args.q} N={args.N} {args.var}: degree {sec.degree}, spurious factor removed: {sec.removed.to_text()}")
    return EXIT_OK


def _verify_one(job):
    q, N, width, dps, bd, bt, inject = job
    try:
        return cross_validate(q, N, width, dps, Budget(bd, bt), inject).to_dict()
    except BudgetExceededError as exc:
        return {"q": q, "N": N, "match": False, "error": str(exc), "partial": exc.partial}


def cmd_verify(args, cfg: RunConfig) -> int:
    if args.all:
        cases = ALL_CASES
    elif args.q is None or args.N is None:
        raise argparse.ArgumentTypeError("verify needs --q and --N, or --all")
    else:
        cases = [(args.q, args.N)]
    jobs = [(q, N, cfg.width, cfg.precision, cfg.budget_degree, cfg.budget_terms, args.inject_error) for q, N in cases]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            reports = list(pool.map(_verify_one, jobs))
    else:
        reports = [_verify_one(j) for j in jobs]
    for r in reports:
        status = "match" if r["match"] else "MISMATCH"
        extra = "" if r["match"] else f" extra={r.get('extra')} missing={r.get('missing')}"
        _note(f"q={r['q']} N={r['N']}: {status}{extra}")
    if any("error" in r for r in reports) and all(r["match"] or "error" in r for r in reports):
        code = EXIT_FAILURE
    else:
        code = EXIT_OK if all(r["match"] for r in reports) else EXIT_MISMATCH
    if cfg.format == "json":
        _emit(cfg, json.dumps(reports, sort_keys=True))
    elif cfg.format == "csv":
        rows = ["q,N,match"] + [f"{r['q']},{r['N']},{int(r['match'])}" for r in reports]
        _emit(cfg, "\n".join(rows))
    else:
        _emit(cfg, "\n".join(f"q={r['q']} N={r['N']} {'match' if r['match'] else 'mismatch'}" for r in reports))
    return code


def _grid(Dmin: float, Dmax: float, n: int) -> list[int]:
    if n < 2:
        return [int(Dmin)]
    with mpmath.workdps(30):
        ratio = (mpmath.mpf(Dmax) / Dmin) ** (mpmath.mpf(1) / (n - 1))
        return [int(mpmath.nint(Dmin * ratio**i)) for i in range(n)]


def cmd_continuation(args, cfg: RunConfig) -> int:
    alphas = _alphas(args.alphas) if args.alphas else (Fraction(1),) * (args.q + 1)
    if len(alphas) != args.q + 1:
        raise argparse.ArgumentTypeError("--alphas needs q+1 values")
    grid = _grid(args.Dmin, args.Dmax, args.grid)
    rep = continuation(args.q, args.N, alphas, Fraction(args.branch), grid, cfg.precision)
    if cfg.format == "csv":
        _emit(cfg, rep.to_csv())
    elif cfg.format == "json":
        _emit(cfg, rep.to_json())
    else:
        lines = [f"D={D} s={' '.join(s)} deviation={dev:.6e}" for D, s, dev in zip(rep.D, rep.s, rep.deviation)]
        _emit(cfg, "\n".join(lines) or "no points")
    _note(f"monotone={rep.monotone} truncated={rep.truncated} {rep.message}".rstrip())
    if rep.truncated:
        return EXIT_FAILURE
    return EXIT_OK if rep.monotone else EXIT_MISMATCH


def cmd_table1(args, cfg: RunConfig) -> int:
    text = catalog.render_table1(args.Nmax)
    _emit(cfg, text.rstrip("\n"))
    if args.Nmax == 12:
        same = text == catalog.TABLE1
        _note("table matches the embedded transcription" if same else "table differs from the embedded transcription")
        return EXIT_OK if same else EXIT_MISMATCH
    return EXIT_OK


def cmd_residual(args, cfg: RunConfig) -> int:
    q = args.q
    alphas = _alphas(args.alphas) if args.alphas else (Fraction(1),) * (q + 1)
    if len(alphas) != q + 1:
        raise argparse.ArgumentTypeError("--alphas needs q+1 values")
    ell = Fraction(args.ell) if args.ell is not None else ell_from_D(args.D)
    # the residual uses the candidate's own couplings; spec only carries alphas
    spec = PotentialSpec(q, alphas, (Fraction(0),) * q)
    if q == 0:
        cand = harmonic_solution(alphas[0], ell, args.N)
    else:
        s = branch_tuple(q, args.N, Fraction(args.branch), cfg.precision)
        seed = seed_candidate(q, args.N, args.D, alphas, s, cfg.precision)
        cand = newton_solve(alphas, ell, args.N, seed, dps=cfg.precision)
    res = schrodinger_residual(spec, ell, cand, dps=cfg.precision)
    ok = res < mpmath.mpf(10) ** (-(cfg.precision // 2))
    doc = {"q": q, "N": args.N, "ell": str(ell), "E": _dec(cand.E, 30), "residual": mpmath.nstr(res, 5)}
    if cfg.format == "json":
        _emit(cfg, json.dumps(doc, sort_keys=True))
    else:
        _emit(cfg, f"E={doc['E']} residual={doc['residual']}")
    return EXIT_OK if ok else EXIT_MISMATCH


# -- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields (flags win)")
    common.add_argument("--precision", type=int, help="decimal digits for numerics (>= 32)")
    common.add_argument("--width", type=parse_width, help="root isolation width, e.g. 1e-30")
    common.add_argument("--budget-degree", dest="budget_degree", type=int)
    common.add_argument("--budget-terms", dest="budget_terms", type=int)
    common.add_argument("--format", choices=("json", "csv", "text"))
    common.add_argument("--out", help="write machine output here instead of stdout")
    common.add_argument("--jobs", type=int)

    p = argparse.ArgumentParser(prog="qes", description="Quasi-exact multi-spectra at large dimension.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", parents=[common], help="closed-form spectrum")
    sp.add_argument("--q", type=int, required=True, choices=range(1, 6))
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--form", choices=("exact", "float"), default="exact")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("eliminant", parents=[common], help="secular polynomial by elimination")
    sp.add_argument("--q", type=int, required=True, choices=range(1, 6))
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--var", default="s1")
    sp.set_defaults(func=cmd_eliminant)

    sp = sub.add_parser("verify", parents=[common], help="catalog versus elimination")
    sp.add_argument("--q", type=int, choices=range(1, 6))
    sp.add_argument("--N", type=int)
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--inject-error", dest="inject_error", action="store_true", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("continuation", parents=[common], help="finite-D Newton continuation")
    sp.add_argument("--q", type=int, required=True, choices=range(1, 6))
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--alphas")
    sp.add_argument("--branch", default="1", help="limiting s1 value of the branch")
    sp.add_argument("--Dmin", type=float, default=1e4)
    sp.add_argument("--Dmax", type=float, default=1e8)
    sp.add_argument("--grid", type=int, default=5, help="number of geometric grid points")
    sp.set_defaults(func=cmd_continuation)

    sp = sub.add_parser("table1", parents=[common], help="render the q = 4 root table")
    sp.add_argument("--Nmax", type=int, default=12)
    sp.set_defaults(func=cmd_table1)

    sp = sub.add_parser("residual", parents=[common], help="Schroedinger residual of a finite-D solution")
    sp.add_argument("--q", type=int, required=True, choices=range(0, 6))
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--alphas")
    sp.add_argument("--D", type=int, default=10**4)
    sp.add_argument("--ell", help="angular momentum (overrides --D)")
    sp.add_argument("--branch", default="1")
    sp.set_defaults(func=cmd_residual)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
        cfg = cfg.merged({k: getattr(args, k, None) for k in
                          ("precision", "width", "budget_degree", "budget_terms", "format", "out", "jobs")})
    except (ValueError, OSError) as exc:
        parser.error(str(exc))
    if getattr(args, "N", None) is not None and args.N < 1:
        parser.error("--N must be positive")
    try:
        return args.func(args, cfg)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except BudgetExceededError as exc:
        _note(f"error: {exc}")
        _note(json.dumps(exc.partial, sort_keys=True))
        return EXIT_FAILURE
    except QESError as exc:
        _note(f"error: {exc}")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
