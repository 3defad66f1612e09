"""Batch command line: triple construction, divisibility scans, verification.

Reports are line-delimited JSON on stdout: one run record, one result
record per row, optional figure records, then one summary record.  Big
integers are serialized as {"decimal": "...", "digits": n} so nothing is
ever truncated.  Identical inputs and flags produce bit-identical output;
no timestamps or host details are ever emitted.

Exit codes: 0 success, 1 usage, 2 missing data (no usable point or an
unreadable generator file), 3 structural assumption violated, 4 internal
verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from math import gcd
from pathlib import Path

from . import __version__
from .aac_classical import aac_flag
from .curve_db import GeneratorRecord, load_records, pick_point, search_points
from .erdos_triples import (
    DegeneratePointError,
    NotErdosEligible,
    TripleConstructionError,
    check_certificate,
    check_triple,
    extract,
    normalize_to_erdos,
)
from .padic_order import (
    MOD_PS_DEFAULT,
    PrecisionExhausted,
    denom_valuation,
    ecaac_check,
    min_multiple_exact,
    min_multiple_mod_ps_retry,
    min_multiple_theory,
)
from .powerful_arith import DIGIT_LIMIT_DEFAULT, factorize, is_prime, is_squarefree
from .rational_ec import CurveParameterError, CurveQ, RatPoint, make_curve, scalar_mul

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_DATA = 2
EXIT_STRUCTURAL = 3
EXIT_INTERNAL = 4

_TABLE_CELL_MAX = 32


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; the report contract reserves 2, so remap."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def big(n: int) -> dict:
    """Lossless big-integer encoding: full decimal plus a digit count."""
    return {"decimal": str(n), "digits": len(str(abs(n)))}


def _decode(obj):
    if isinstance(obj, dict):
        if set(obj.keys()) == {"decimal", "digits"}:
            return int(obj["decimal"])
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


def parse_report(text: str) -> list[dict]:
    """Inverse of the jsonl emitter, big integers decoded back to int."""
    return [_decode(json.loads(line)) for line in text.splitlines() if line.strip()]


def _cell(value) -> str:
    if isinstance(value, dict) and set(value.keys()) == {"decimal", "digits"}:
        dec = value["decimal"]
        return dec if len(dec) <= _TABLE_CELL_MAX else f"[{value['digits']} digits]"
    if isinstance(value, (dict, list)):
        text = json.dumps(value)
        return text if len(text) <= 2 * _TABLE_CELL_MAX else text[: 2 * _TABLE_CELL_MAX - 3] + "..."
    return str(value)


def _print_table(rows: list[dict], summary: dict) -> None:
    if rows:
        cols: list[str] = []
        for row in rows:
            for key in row:
                if key not in cols:
                    cols.append(key)
        grid = [[_cell(row.get(c, "")) for c in cols] for row in rows]
        widths = [max(len(c), *(len(g[i]) for g in grid)) for i, c in enumerate(cols)]
        print("  ".join(c.ljust(w) for c, w in zip(cols, widths)))
        print("  ".join("-" * w for w in widths))
        for g in grid:
            print("  ".join(cell.ljust(w) for cell, w in zip(g, widths)))
    else:
        print("(no results)")
    print()
    for key, value in summary.items():
        print(f"{key}: {_cell(value)}")


def _emit(command: str, params: dict, rows: list[dict], summary: dict,
          fmt: str, figure_paths: list[str] | None = None) -> None:
    if fmt == "table":
        _print_table(rows, summary)
        for path in figure_paths or []:
            print(f"figure: {path}")
        return
    print(json.dumps({"record": "run", "tool": "ecaac", "version": __version__,
                      "command": command, "params": params}))
    for row in rows:
        print(json.dumps({"record": "result", **row}))
    for path in figure_paths or []:
        print(json.dumps({"record": "figure", "path": path}))
    print(json.dumps({"record": "summary", **summary}))


def _load_generator_file(path: str):
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise _CliError(EXIT_NO_DATA, f"cannot read generator file {path}: {exc}")
    return load_records(lines)


def _pick_from_records(records, E: CurveQ):
    """Best usable record point for E, preferring claimed generators."""
    matches = [r for r in records if r.m == E.m and r.mu == E.mu]
    pool = [r for r in matches if r.claimed_generator] or matches
    by_point = {}
    for rec in pool:
        by_point.setdefault(rec.point, rec)
    best = pick_point(by_point.keys(), E)
    if best is None:
        return None
    rec = by_point[best]
    return best, rec.source, rec.claimed_generator


def _resolve_point(E: CurveQ, generators: str | None, d_max: int, u_bound: int):
    """Point for E from a generator file if given, else bounded search.

    Returns (point, source, claimed, warnings); point is None when neither
    source produced a usable non-torsion point.
    """
    warnings: list[str] = []
    if generators:
        records, problems = _load_generator_file(generators)
        warnings += [f"generator file line {p.line_no}: {p.reason}" for p in problems]
        found = _pick_from_records(records, E)
        if found is not None:
            return (*found, warnings)
        warnings.append(f"no usable record for ({E.m}, {E.mu}); falling back to search")
    P = pick_point(search_points(E, d_max, u_bound), E)
    return P, "search", False, warnings


def _point_fields(P: RatPoint, prefix: str = "point_") -> dict:
    return {prefix + "u": big(P.u), prefix + "v": big(P.v), prefix + "d": big(P.d)}


def _make_curve_or_usage(m: int, mu: int) -> CurveQ:
    try:
        return make_curve(m, mu)
    except CurveParameterError as exc:
        raise _CliError(EXIT_USAGE, str(exc))


# ---------------------------------------------------------------- triple

def cmd_triple(args) -> int:
    E = _make_curve_or_usage(args.m, args.mu)
    if args.k < 1:
        raise _CliError(EXIT_USAGE, f"k must be >= 1, got {args.k}")
    P, source, claimed, warnings = _resolve_point(E, args.generators, args.d_max, args.u_bound)
    if P is None:
        raise _CliError(EXIT_NO_DATA,
                        f"no non-torsion point found for ({E.m}, {E.mu}); "
                        "raise --d-max/--u-bound or supply --generators")
    multiplier = 3 * E.m * args.k
    Q = scalar_mul(multiplier, P, E)
    try:
        trip = extract(Q, E)
        powerful = normalize_to_erdos(trip)
    except NotErdosEligible as exc:
        raise _CliError(EXIT_STRUCTURAL,
                        f"multiple {multiplier}*P is not eligible: {exc}; "
                        "this contradicts the 3m-multiplier guarantee")
    except (DegeneratePointError, TripleConstructionError) as exc:
        raise _CliError(EXIT_INTERNAL, f"triple construction failed: {exc}")
    a, b, c = powerful.a, powerful.b, powerful.c
    cert_ok = all(check_certificate(v, ct) for v, ct in zip((a, b, c), powerful.certificates))
    sum_ok = a + b == c
    gcds = (gcd(a, b), gcd(a, c), gcd(b, c))
    if not (cert_ok and sum_ok and all(g == 1 for g in gcds)):
        raise _CliError(EXIT_INTERNAL, "independent re-verification of the triple failed")
    if not claimed:
        warnings.append("point is not a claimed generator; results hold for its multiples regardless")
    m_divisibility = [
        {"p": p, "denominator_valuation": denom_valuation(Q, p)}
        for p, _ in factorize(E.m).factors
    ]
    row = {
        "m": E.m, "mu": E.mu, "k": args.k, "multiplier": multiplier,
        "source": source, "claimed_generator": claimed,
        **_point_fields(P),
        "x": big(trip.x), "y": big(trip.y), "z": big(trip.z),
        "a": big(a), "b": big(b), "c": big(c),
        "certificates": [ct.kind for ct in powerful.certificates],
        "denominator_valuations": m_divisibility,
        "verified": True,
    }
    summary = {"triples": 1, "verdict": "OK", "warnings": warnings}
    _emit("triple", _params(args, "m", "mu", "k", "generators", "d_max", "u_bound"),
          [row], summary, args.format)
    return EXIT_OK


# --------------------------------------------------------- search-points

def cmd_search_points(args) -> int:
    E = _make_curve_or_usage(args.m, args.mu)
    pts = search_points(E, args.d_max, args.u_bound)
    picked = pick_point(pts, E)
    rows = [{"u": big(P.u), "v": big(P.v), "d": P.d} for P in pts]
    summary = {
        "points": len(pts),
        "picked": None if picked is None else {"u": big(picked.u), "v": big(picked.v), "d": picked.d},
    }
    _emit("search-points", _params(args, "m", "mu", "d_max", "u_bound"), rows, summary, args.format)
    return EXIT_OK


# ---------------------------------------------------------- min-multiple

def cmd_min_multiple(args) -> int:
    E = _make_curve_or_usage(args.m, args.mu)
    p = args.p
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise _CliError(EXIT_USAGE, f"--p must be an odd prime, got {p}")
    if args.strategy == "theory" and E.m % p != 0:
        raise _CliError(EXIT_USAGE, f"theory strategy needs p | m, got p = {p}, m = {E.m}")
    P, source, claimed, warnings = _resolve_point(E, args.generators, args.d_max, args.u_bound)
    if P is None:
        raise _CliError(EXIT_NO_DATA, f"no non-torsion point found for ({E.m}, {E.mu})")
    bound = args.bound if args.bound is not None else 3 * p
    try:
        if args.strategy == "exact":
            report = min_multiple_exact(P, E, p, bound)
        elif args.strategy == "theory":
            report = min_multiple_theory(P, E, p)
        else:
            if P.d % p == 0:
                report = min_multiple_exact(P, E, p, 1)
            else:
                report = min_multiple_mod_ps_retry(P, E, p, bound, s=args.precision)
    except PrecisionExhausted as exc:
        raise _CliError(EXIT_INTERNAL, f"{exc}; raise --precision")
    row = {
        "m": E.m, "mu": E.mu, "p": p, "strategy": report.strategy,
        "k_min": report.k_min, "bound": report.bound,
        "assumed_order_3p": report.assumed_order_3p,
        "structural_violation": report.structural_violation,
        "precision": report.precision,
        "source": source, "claimed_generator": claimed,
        **_point_fields(P),
    }
    summary = {"verdict": "VIOLATION" if report.structural_violation else "OK", "warnings": warnings}
    _emit("min-multiple",
          _params(args, "m", "mu", "p", "strategy", "bound", "precision", "generators", "d_max", "u_bound"),
          [row], summary, args.format)
    return EXIT_STRUCTURAL if report.structural_violation else EXIT_OK


# ------------------------------------------------------------ ecaac-scan

def _ecaac_scan_one(payload) -> dict:
    p, mu, strategy, bound, precision, d_max, u_bound, records = payload
    E = make_curve(p, mu)
    found = _pick_from_records(records, E) if records else None
    if found is not None:
        P, source, claimed = found
    else:
        P = pick_point(search_points(E, d_max, u_bound), E)
        source, claimed = "search", False
    row = {"p": p, "p_mod_3": p % 3, "p_mod_9": p % 9}
    if P is None:
        row.update({"verdict": "NO-POINT", "k_min": None, "strategy": None,
                    "source": None, "claimed_generator": False})
        return row
    verdict = ecaac_check(GeneratorRecord(p, mu, P, source, claimed))
    use = strategy if strategy != "auto" else ("exact" if p <= 20 else "mod-ps")
    kb = bound if bound is not None else 3 * p
    if denom_valuation(P, p) > 0:
        rep = min_multiple_exact(P, E, p, 1)
    elif use == "exact":
        rep = min_multiple_exact(P, E, p, kb)
    elif use == "theory":
        rep = min_multiple_theory(P, E, p)
    else:
        rep = min_multiple_mod_ps_retry(P, E, p, kb, s=precision)
    row.update({
        "verdict": verdict.verdict,
        "p_divides_d1": verdict.p_divides_d1,
        "p_divides_d3": verdict.p_divides_d3,
        "k_min": rep.k_min, "strategy": rep.strategy, "bound": rep.bound,
        "precision": rep.precision,
        "assumed_order_3p": rep.assumed_order_3p,
        "structural_violation": rep.structural_violation,
        "source": source, "claimed_generator": claimed,
        **_point_fields(P),
    })
    return row


def cmd_ecaac_scan(args) -> int:
    if args.p_hi < args.p_lo:
        raise _CliError(EXIT_USAGE, "--p-hi must be >= --p-lo")
    records = []
    warnings: list[str] = []
    if args.generators:
        records, problems = _load_generator_file(args.generators)
        warnings += [f"generator file line {p.line_no}: {p.reason}" for p in problems]
    primes = [p for p in range(max(args.p_lo, 3), args.p_hi + 1) if p % 2 and is_prime(p)]
    payloads = [(p, args.mu, args.strategy, args.bound, args.precision,
                 args.d_max, args.u_bound, records) for p in primes]
    if args.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_ecaac_scan_one, payloads))
    else:
        rows = [_ecaac_scan_one(pl) for pl in payloads]
    rows.sort(key=lambda r: r["p"])
    figure_paths = None
    if args.figures:
        from .figures import render_ecaac_scan

        figure_paths = [str(render_ecaac_scan(rows, args.figures))]
    counts = {}
    for row in rows:
        counts[row["verdict"]] = counts.get(row["verdict"], 0) + 1
    violation = any(row.get("structural_violation") for row in rows)
    summary = {"primes": len(rows), "verdicts": counts,
               "structural_violation": violation, "warnings": warnings}
    _emit("ecaac-scan",
          _params(args, "p_lo", "p_hi", "mu", "strategy", "bound", "precision",
                  "generators", "d_max", "u_bound", "jobs"),
          rows, summary, args.format, figure_paths)
    return EXIT_STRUCTURAL if violation else EXIT_OK


# -------------------------------------------------------------- aac-scan

def _aac_scan_one(d: int):
    try:
        flag = aac_flag(d)
    except Exception as exc:
        return d, None, f"{type(exc).__name__}: {exc}"
    return d, flag, None


def cmd_aac_scan(args) -> int:
    if args.d_hi < args.d_lo:
        raise _CliError(EXIT_USAGE, "--d-hi must be >= --d-lo")
    ds = []
    for d in range(max(args.d_lo, 2), args.d_hi + 1):
        if not is_squarefree(d):
            continue
        if args.which == "prime" and not is_prime(d):
            continue
        if args.which == "composite" and is_prime(d):
            continue
        ds.append(d)
    if args.jobs > 1 and len(ds) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_aac_scan_one, ds, chunksize=64))
    else:
        outcomes = [_aac_scan_one(d) for d in ds]
    plain_rows = []
    errors = []
    for d, flag, err in outcomes:
        if err is not None:
            errors.append({"d": d, "error": err})
            continue
        plain_rows.append({"d": d, "d_mod_4": d % 4, "u_reported": flag.u_reported,
                           "u_mod_d": flag.u_reported % d, "divisible": flag.divisible})
    figure_paths = None
    if args.figures:
        from .figures import render_aac_scan

        figure_paths = [str(render_aac_scan(plain_rows, args.figures))]
    rows = [{**r, "u_reported": big(r["u_reported"])} for r in plain_rows]
    flagged = [r["d"] for r in plain_rows if r["divisible"]]
    summary = {"scanned": len(rows), "flagged": flagged, "errors": errors}
    _emit("aac-scan", _params(args, "d_lo", "d_hi", "which", "jobs"),
          rows, summary, args.format, figure_paths)
    return EXIT_OK


# --------------------------------------------------------- verify-triple

def cmd_verify_triple(args) -> int:
    try:
        a, b, c = int(args.a), int(args.b), int(args.c)
    except ValueError:
        raise _CliError(EXIT_USAGE, "a, b, c must be decimal integers")
    if min(a, b, c) < 1:
        raise _CliError(EXIT_USAGE, "a, b, c must be positive")
    report = check_triple(a, b, c, args.digit_limit)
    terms = []
    for name, value, chk in zip("abc", (a, b, c), report.powerful):
        terms.append({"term": name, "digits": chk.n_digits,
                      "powerful": chk.verdict, "method": chk.method})
    row = {
        "a": big(a), "b": big(b), "c": big(c),
        "sum_ok": report.sum_ok, "coprime_ok": report.coprime_ok,
        "gcd_ab": big(report.gcds[0]), "gcd_ac": big(report.gcds[1]), "gcd_bc": big(report.gcds[2]),
        "terms": terms, "passed": report.passed,
    }
    if report.passed:
        verdict = "PASS"
    elif report.sum_ok and report.coprime_ok and all(t["powerful"] is not False for t in terms):
        verdict = "UNDECIDED"
    else:
        verdict = "FAIL"
    _emit("verify-triple", _params(args, "digit_limit"), [row],
          {"verdict": verdict}, args.format)
    return EXIT_OK


# ------------------------------------------------------------- plumbing

def _params(args, *names) -> dict:
    return {name: getattr(args, name) for name in names}


def _which_filter(s: str) -> str:
    """Accept both 'prime'/'primes' and 'composite'/'composites'."""
    return s[:-1] if s in ("primes", "composites") else s


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=("jsonl", "table"), default="jsonl",
                     help="jsonl (default, machine-readable) or table")


def _add_point_source(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--generators", metavar="FILE",
                     help="tab-separated generator records; search is the fallback")
    sub.add_argument("--d-max", type=int, default=8, help="search: max denominator root d")
    sub.add_argument("--u-bound", type=int, default=10_000,
                     help="search: |u| cap is u-bound * d^2")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ecaac",
                     description="3-powerful triples from curve points, and AAC-style scans")
    parser.add_argument("--version", action="version", version=f"ecaac {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    t = subs.add_parser("triple", parents=[], help="build one a + b = c triple from k*(3m)*P")
    t.add_argument("--m", type=int, required=True, help="squarefree curve parameter")
    t.add_argument("--mu", type=int, choices=(2, 4), default=2)
    t.add_argument("--k", type=int, default=1, help="which member of the family (k >= 1)")
    _add_point_source(t)
    _add_common(t)
    t.set_defaults(func=cmd_triple)

    s = subs.add_parser("search-points", help="bounded naive point search on E(m, mu)")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--mu", type=int, choices=(2, 4), default=2)
    s.add_argument("--d-max", type=int, default=8)
    s.add_argument("--u-bound", type=int, default=10_000)
    _add_common(s)
    s.set_defaults(func=cmd_search_points)

    mm = subs.add_parser("min-multiple", help="first k with p dividing den(k*P)")
    mm.add_argument("--m", type=int, required=True)
    mm.add_argument("--mu", type=int, choices=(2, 4), default=2)
    mm.add_argument("--p", type=int, required=True, help="odd prime to test")
    mm.add_argument("--strategy", choices=("exact", "theory", "mod-ps"), default="exact")
    mm.add_argument("--bound", type=int, default=None, help="scan bound (default 3p)")
    mm.add_argument("--precision", type=int, default=MOD_PS_DEFAULT,
                    help="mod-ps starting s; doubles on exhaustion up to 64")
    _add_point_source(mm)
    _add_common(mm)
    mm.set_defaults(func=cmd_min_multiple)

    es = subs.add_parser("ecaac-scan", help="EC-AAC verdicts over a range of odd primes")
    es.add_argument("--p-lo", type=int, default=3)
    es.add_argument("--p-hi", type=int, required=True)
    es.add_argument("--mu", type=int, choices=(2, 4), default=2)
    es.add_argument("--strategy", choices=("exact", "theory", "mod-ps", "auto"), default="auto",
                    help="k_min strategy; auto = exact for p <= 20, mod-ps above")
    es.add_argument("--bound", type=int, default=None, help="k_min scan bound (default 3p)")
    es.add_argument("--precision", type=int, default=MOD_PS_DEFAULT)
    es.add_argument("--jobs", type=int, default=1, help="parallel scan workers")
    es.add_argument("--figures", metavar="DIR", help="also render figures into DIR")
    _add_point_source(es)
    _add_common(es)
    es.set_defaults(func=cmd_ecaac_scan)

    ascan = subs.add_parser("aac-scan", help="classical AAC divisibility over squarefree d")
    ascan.add_argument("--d-lo", type=int, default=2)
    ascan.add_argument("--d-hi", type=int, required=True)
    ascan.add_argument("--which", default="all", type=_which_filter,
                       choices=("all", "prime", "composite"),
                       help="all, prime(s) or composite(s)")
    ascan.add_argument("--jobs", type=int, default=1)
    ascan.add_argument("--figures", metavar="DIR", help="also render figures into DIR")
    _add_common(ascan)
    ascan.set_defaults(func=cmd_aac_scan)

    vt = subs.add_parser("verify-triple", help="independently check a claimed triple")
    vt.add_argument("a")
    vt.add_argument("b")
    vt.add_argument("c")
    vt.add_argument("--digit-limit", type=int, default=DIGIT_LIMIT_DEFAULT,
                    help="factor terms up to this many digits; above, only the cube test")
    _add_common(vt)
    vt.set_defaults(func=cmd_verify_triple)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits; keep main() a plain int function
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"ecaac: {exc}", file=sys.stderr)
        return exc.code
    except BrokenPipeError:
        return EXIT_OK
    except Exception:
        traceback.print_exc()
        print("ecaac: internal error (see traceback above)", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
