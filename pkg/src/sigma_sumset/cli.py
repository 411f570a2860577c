"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget refusal.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

from .bounds import bound_report, d_m, f_d, u_with_argmin
from .constructions import (
    asymmetric_half_witness,
    cyclic_symmetric_witness,
    cyclic_witness_params,
    product_bound,
    product_witness,
)
from .groups import GroupError, groups_up_to, parse_group
from .search import BudgetExceeded, rho_pm_restricted, survey, write_survey_csv
from .sumsets import MAX_H, MAX_ORDER, classify_symmetry, fold_signed_sumset, fold_sumset
from .verify import CHECKS, run_check

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``"2..5"`` -> [2, 3, 4, 5]; ``"2,3"`` -> [2, 3]; items may mix both."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..")
                lo, hi = int(lo), int(hi)
                if hi < lo:
                    raise UsageError(f"empty range {part!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise UsageError(f"cannot parse {part!r} as an integer or a..b range") from None
    if not out:
        raise UsageError(f"empty range {text!r}")
    return out


def _group(text):
    if text is None:
        raise UsageError("--group is required")
    G = parse_group(text)
    if G.order > MAX_ORDER:
        raise UsageError(f"|G| = {G.order} exceeds the cap {MAX_ORDER}")
    return G


def _h_values(text, default):
    hs = parse_range(text) if text else default
    for h in hs:
        if not 0 <= h <= MAX_H:
            raise UsageError(f"h must lie in [0, {MAX_H}], got {h}")
    return hs


def _document(**body) -> str:
    return json.dumps({"v": SCHEMA_VERSION, **body}, indent=2) + "\n"


def _json_only(args):
    if args.format != "json":
        raise UsageError("CSV output is only available for survey")


def cmd_compute(args) -> tuple[int, str]:
    _json_only(args)
    G = _group(args.group)
    if args.m is None:
        raise UsageError("--m is required")
    results = []
    for m in parse_range(args.m):
        if not 1 <= m <= G.order:
            raise UsageError(f"m must lie in [1, {G.order}], got {m}")
        for h in _h_values(args.h, [2]):
            if h < 1:
                raise UsageError("compute needs h >= 1")
            entry = {"group": str(G), "m": m, "h": h}
            if args.mode in ("formula", "both"):
                rep = bound_report(G, m, h)
                entry.update(
                    rho=rep.u_value,
                    u=rep.u_value,
                    u_pm=rep.u_pm_value,
                    d_m=rep.d_m,
                    conjecture=rep.conjecture_value,
                    report=rep.to_json(),
                )
            if args.mode in ("search", "both"):
                out = rho_pm_restricted(G, m, h, budget=args.budget, workers=args.workers)
                entry.update(rho_pm=out.value, search=out.to_json())
            if args.mode == "both":
                entry["match_rho"] = entry["rho_pm"] == entry["rho"]
                conj = entry["conjecture"]
                entry["match"] = None if conj is None else entry["rho_pm"] == conj
            results.append(entry)
    return EXIT_OK, _document(command="compute", mode=args.mode, results=results)


def cmd_witness(args) -> tuple[int, str]:
    _json_only(args)
    G = _group(args.group)
    if args.m is None:
        raise UsageError("--m is required")
    ms = parse_range(args.m)
    h = _h_values(args.h, [2])[0] if args.h else 2
    if h < 1:
        raise UsageError("witness needs h >= 1")
    params = None
    kind = args.construction
    if kind == "cyclic-R":
        if not G.is_cyclic:
            raise UsageError("cyclic-R needs a cyclic group")
        (m,) = _single(ms)
        d = args.d if args.d is not None else u_with_argmin(G.order, m, h)[1]
        A = cyclic_symmetric_witness(G.order, m, d, h)
        params = cyclic_witness_params(G.order, m, d).to_json()
        bound = f_d(m, h, d)
    elif kind == "product":
        if len(ms) != G.rank:
            raise UsageError(f"product needs --m with {G.rank} comma-separated entries")
        A = product_witness(G, ms, h)
        m, d = ms, None
        bound = product_bound(G, ms, h)
    elif kind == "asymmetric-half":
        (m,) = _single(ms)
        d = args.d if args.d is not None else d_m(G, m)
        if d is None:
            raise UsageError(f"no odd divisor of {G.order} is at least {2 * m + 1}")
        A = asymmetric_half_witness(G, m, d)
        bound = d - 1 if h == 2 else None
    else:
        raise UsageError("--construction must be one of cyclic-R, product, asymmetric-half")
    body = dict(
        command="witness",
        construction=kind,
        group=str(G),
        m=m,
        h=h,
        d=d,
        params=params,
        witness=A.to_json(),
        witness_indices=list(A.indices),
        size=A.size,
        symmetry_class=str(classify_symmetry(G, A)),
        achieved=fold_signed_sumset(G, A, h).size,
        plain_sumset_size=fold_sumset(G, A, h).size,
        bound=bound,
    )
    return EXIT_OK, _document(**body)


def _single(ms):
    if len(ms) != 1:
        raise UsageError("--m takes a single value for this construction")
    return ms


def cmd_survey(args) -> tuple[int, str]:
    if args.group:
        groups = [_group(g) for g in args.group]
    elif args.max_order:
        groups = groups_up_to(args.max_order)
    else:
        raise UsageError("survey needs --group or --max-order")
    m_range = parse_range(args.m) if args.m else None
    hs = _h_values(args.h, [2, 3])
    if any(h < 1 for h in hs):
        raise UsageError("survey needs h >= 1")
    rows = survey(groups, m_range, hs, budget=args.budget, workers=args.workers)
    if args.format == "csv":
        buf = io.StringIO()
        write_survey_csv(rows, buf)
        return EXIT_OK, buf.getvalue()
    return EXIT_OK, _document(command="survey", rows=[r.to_json() for r in rows])


def cmd_verify(args) -> tuple[int, str]:
    _json_only(args)
    if args.check not in CHECKS:
        raise UsageError(f"unknown check {args.check!r}; choose from {', '.join(CHECKS)}")
    hs = _h_values(args.h, None) if args.h else None
    m_max = None
    if args.m:
        m_max = max(parse_range(args.m))
    report = run_check(args.check, args.max_order, hs, m_max=m_max, budget=args.budget, workers=args.workers)
    code = EXIT_OK if report.passed else EXIT_FAIL
    return code, _document(command="verify", **report.to_json())


COMMANDS = {"compute": cmd_compute, "witness": cmd_witness, "survey": cmd_survey, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sigma-sumset", description="Sumsets and signed sumsets in finite abelian groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="json"):
        p.add_argument("--budget", type=int, default=None, help="max candidate sets per search (env SIGMA_SUMSET_BUDGET)")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--format", choices=("json", "csv"), default=fmt_default)
        p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("compute", help="bounds and exact values for one group")
    p.add_argument("--group")
    p.add_argument("--m")
    p.add_argument("--h")
    p.add_argument("--mode", choices=("formula", "search", "both"), default="both")
    common(p)

    p = sub.add_parser("witness", help="build an explicit witness set")
    p.add_argument("--construction", required=True, choices=("cyclic-R", "product", "asymmetric-half"))
    p.add_argument("--group")
    p.add_argument("--m")
    p.add_argument("--h")
    p.add_argument("--d", type=int)
    common(p)

    p = sub.add_parser("survey", help="sweep groups, m and h")
    p.add_argument("--group", action="append")
    p.add_argument("--max-order", type=int)
    p.add_argument("--m")
    p.add_argument("--h")
    common(p, "csv")

    p = sub.add_parser("verify", help="run a named verification sweep")
    p.add_argument("--check", required=True)
    p.add_argument("--max-order", type=int)
    p.add_argument("--h")
    p.add_argument("--m", help="cap on m (default: all m, or 5 for the symmetry check)")
    common(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.budget is not None and args.budget < 1:
        print("error: --budget must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if args.workers < 1:
        print("error: --workers must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        code, text = COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, GroupError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
