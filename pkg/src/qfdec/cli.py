"""Command-line interface: ``qfdec <command> [flags]``.

Exit codes: 0 success, 2 input error, 3 scale or budget error, 4 failed verification.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, exponents
from .counting import (
    CountRecord,
    append_csv,
    brute_force_energy,
    energy_count,
    fast_count_parabolic,
    fit_exponent,
    point_array,
    read_csv,
    strip_energy,
    strip_energy_formula,
    transversality_overlap,
)
from .errors import InputError, QfdecError
from .estimator import dec_ratio, regime_scan, torus_norm
from .formalg import FormClass, canonical_pair, classify, parse_pair
from .verify import SUITES, run_suite

EXIT_VERIFY = 4
DEFAULT_STORE = Path.home() / ".cache" / "qfdec"


class RunStore:
    """JSON results keyed by (pair hash, command, parameters)."""

    def __init__(self, root, enabled: bool = True):
        self.root = Path(root)
        self.enabled = enabled

    def _path(self, pair_hash: str, command: str, key: str) -> Path:
        return self.root / f"{pair_hash}-{command}-{key}.json"

    def get(self, pair_hash, command, key):
        path = self._path(pair_hash, command, key)
        if not self.enabled or not path.exists():
            return None
        return json.loads(path.read_text())

    def put(self, pair_hash, command, key, payload: dict) -> None:
        if not self.enabled:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        self._path(pair_hash, command, key).write_text(dump(payload))


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _emit(args, payload: dict, lines) -> None:
    if getattr(args, "json", False):
        print(dump(payload))
    else:
        for line in lines:
            print(line)


def _table(rows) -> list:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(str(v).rjust(w) for v, w in zip(r, widths)) for r in rows]


def _pair(args):
    if args.P is None or args.Q is None:
        raise InputError("both --P and --Q are required")
    return parse_pair(args.P, args.Q)


def _frac(q) -> str:
    return str(Fraction(q))


# --- commands ------------------------------------------------------------------

def cmd_classify(args) -> int:
    report = classify(_pair(args))
    d = report.to_dict()
    lines = [f"class: {d['class']}"]
    lines += [f"{k}: {v}" for k, v in sorted(d.items()) if k != "class" and v is not None]
    _emit(args, d, lines)
    return 0


def cmd_gamma(args) -> int:
    if args.cls is not None:
        cls = FormClass.parse(args.cls)
    else:
        cls = classify(_pair(args)).cls
    gamma = exponents.gamma_of_class(cls, args.p)
    payload = {"class": cls.value, "p": args.p, "gamma": _frac(gamma)}
    lines = [f"gamma_{cls.value}({args.p}) = {gamma}"]
    if args.profile:
        prof = exponents.profile_of_class(cls)
        payload["profile"] = prof.to_dict()
        rows = [("1/p from", "1/p to", "gamma")]
        rows += [(_frac(s.lo), _frac(s.hi), f"{s.alpha} - {s.beta}/p") for s in prof.segments]
        lines += _table(rows)
    _emit(args, payload, lines)
    return 0


def _choose_method(method, pair, s):
    if method != "auto":
        return method
    if s == 2 and pair == canonical_pair(FormClass.SQUARE_PARABOLIC):
        return "divisor"
    return "hash"


def cmd_count(args) -> int:
    pair = _pair(args)
    if args.N < 0:
        raise InputError("--N must be >= 0")
    if args.s not in (1, 2, 3):
        raise InputError("--s must be 1, 2 or 3")
    method = _choose_method(args.method, pair, args.s)
    if method == "divisor" and (args.s != 2 or pair != canonical_pair(FormClass.SQUARE_PARABOLIC)):
        raise InputError("the divisor method applies to (r^2, s^2 + r*t) with s = 2")
    store = RunStore(args.store, enabled=not args.no_cache)
    key = f"N{args.N}-s{args.s}-{method}"
    cached = store.get(pair.content_hash(), "count", key)
    if cached is not None:
        rec = CountRecord.from_dict(cached)
    else:
        if method == "divisor":
            rec = fast_count_parabolic(args.N)
        elif method == "brute":
            rec = brute_force_energy(point_array(pair, args.N), args.s)
        else:
            rec = energy_count(point_array(pair, args.N), args.s,
                               memory_budget=args.memory_budget, threads=args.threads)
        rec = CountRecord(args.N, args.s, rec.count, rec.method, rec.wall_time)
        store.put(pair.content_hash(), "count", key, rec.to_dict())
    if args.csv:
        append_csv(args.csv, rec)
    _emit(args, rec.to_dict(),
          [f"J_{args.s}({args.N}) = {rec.count}  [{rec.method.value}, {rec.wall_time:.3f}s]"])
    return 0


def cmd_strip(args) -> int:
    rows, payload = [("N", "count", "closed form")], []
    for N in args.N:
        rec = strip_energy(N)
        formula = strip_energy_formula(N)
        rows.append((N, rec.count, formula))
        payload.append({"N": N, "count": rec.count, "formula": formula})
        if args.csv:
            append_csv(args.csv, rec)
    out = {"rows": payload}
    lines = _table(rows)
    if len(args.N) >= 3:
        slope, res = fit_exponent([(r["N"], r["count"]) for r in payload])
        out.update(slope=slope, residual=res)
        lines.append(f"slope {slope:.4f} (max log residual {res:.3g})")
    _emit(args, out, lines)
    return 0


def cmd_overlap(args) -> int:
    rep = transversality_overlap(args.K, args.grid_inverse, args.j_prime)
    payload = {"K": rep.K, "grid_inverse": rep.grid_inverse, "strips": list(rep.strips),
               "near_pairs": rep.near_pairs, "max_ratio": rep.max_ratio,
               "max_r_ratio": rep.max_r_ratio, "max_t_ratio": rep.max_t_ratio,
               "bounded": rep.bounded}
    _emit(args, payload, [f"{k}: {v}" for k, v in payload.items()])
    return 0


def cmd_estimate(args) -> int:
    pair = _pair(args)
    fn = dec_ratio if args.ratio else torus_norm
    rec = fn(pair, args.N, args.p, args.method, samples=args.samples, seed=args.seed,
             threads=args.threads)
    d = rec.to_dict()
    d["p"] = args.p
    _emit(args, d, [f"{'R' if args.ratio else 'norm'}(N={rec.N}, p={args.p}) = "
                    f"{rec.estimate:.6g} +/- {rec.std_error:.2g}  [{rec.method.value}]"])
    return 0


def cmd_scan(args) -> int:
    pair = _pair(args)
    result = regime_scan(pair, args.p, args.N, args.method, samples=args.samples,
                         seed=args.seed, threads=args.threads)
    rows = result["rows"]
    if args.csv:
        import csv
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["p", "slope", "residual", "target", "method", "heuristic"])
            for r in rows:
                w.writerow([r.p, r.slope, r.residual, r.target, r.method.value, r.heuristic])
    payload = {"class": result["class"], "ordering_consistent": result["ordering_consistent"],
               "rows": [{"p": r.p, "slope": r.slope, "residual": r.residual, "target": r.target,
                         "method": r.method.value, "heuristic": r.heuristic} for r in rows]}
    table = [("p", "slope", "target", "method", "")]
    table += [(f"{r.p:g}", f"{r.slope:.4f}", "-" if r.target is None else f"{r.target:.4f}",
               r.method.value, "heuristic" if r.heuristic else "") for r in rows]
    _emit(args, payload, _table(table) + [f"ordering consistent: {result['ordering_consistent']}"])
    return 0


def cmd_fit(args) -> int:
    records = [r for r in read_csv(args.csv) if args.s is None or r.s == args.s]
    samples = sorted({(r.N, r.count) for r in records if r.N > 0})
    slope, res = fit_exponent(samples)
    _emit(args, {"slope": slope, "residual": res, "points": len(samples)},
          [f"slope {slope:.4f} over {len(samples)} points (max log residual {res:.3g})"])
    return 0


def cmd_verify(args) -> int:
    checks = run_suite(args.suite)
    failed = [c for c in checks if not c.passed]
    payload = {"suite": args.suite, "checks": len(checks), "failed": len(failed),
               "results": [{"suite": c.suite, "name": c.name, "passed": c.passed,
                            "detail": c.detail} for c in checks]}
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.suite:<9} {c.name}"
             + (f"  ({c.detail})" if not c.passed and c.detail else "") for c in checks]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    _emit(args, payload, lines)
    return EXIT_VERIFY if failed else 0


# --- parser ----------------------------------------------------------------------

def _pair_flags(p, required=True):
    p.add_argument("--P", required=required, help='first form, e.g. "r^2"')
    p.add_argument("--Q", required=required, help='second form, e.g. "s^2+r*t"')


def _run_flags(p):
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--json", action="store_true")


def _int_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _p_list(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qfdec", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"qfdec {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a pair of forms")
    _pair_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("gamma", help="sharp decoupling exponent")
    _pair_flags(p, required=False)
    p.add_argument("--class", dest="cls")
    p.add_argument("--p", required=True, help="p >= 2, rational, or inf")
    p.add_argument("--profile", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("count", help="exact solution count J_s(N)")
    _pair_flags(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--method", choices=("auto", "brute", "hash", "divisor"), default="auto")
    p.add_argument("--csv")
    p.add_argument("--memory-budget", type=int, default=8 * 2**30, help="bytes")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--store", default=str(DEFAULT_STORE), help="result cache directory")
    _run_flags(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("strip", help="additive energy of the thin strip")
    p.add_argument("--N", type=_int_list, required=True, help="comma-separated")
    p.add_argument("--csv")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_strip)

    p = sub.add_parser("overlap", help="transversality overlap check")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--grid-inverse", type=int, required=True)
    p.add_argument("--j-prime", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("estimate", help="L^p norm of the exponential sum")
    _pair_flags(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--method", default="auto", help="auto, ExactEvenP, MonteCarlo or Stratified")
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ratio", action="store_true", help="normalise by (N+1)^(3/p)")
    _run_flags(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("scan", help="fitted ratio slopes across p")
    _pair_flags(p)
    p.add_argument("--p", type=_p_list, default=["2", "4", "5", "6"])
    p.add_argument("--N", type=_int_list, default=[4, 5, 6, 7, 8])
    p.add_argument("--method", default="auto")
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv")
    _run_flags(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("fit", help="log-log slope of counts in a CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--s", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify", help="run self-check suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QfdecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
