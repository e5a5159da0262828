"""Command-line front end.

Subcommands: lemma, converge, eigen, tinv, separate, oracle.
Exit codes: 0 ok, 1 verification failure, 2 usage/domain error, 3 malformed
input file.  JSON (sorted keys) is the canonical machine format; CSV columns
are fixed per subcommand.  Rationals print both as "p/q" and as decimals at
the configured precision; decimals never feed back into computation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import characters, measures, suspension
from .measures import (
    BernoulliParam,
    CylinderState,
    InvalidStateError,
    TVInterval,
    brute_force_tv_pow2,
    rn_integral_check,
    state_from_json,
    tv_pushforward_pow2,
    tv_sigma_vs_identity,
)
from .rationals import decimal_str, format_rational, parse_rational
from .suspension import SuspensionState, flow_limit_table, suspension_state_from_json

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_MALFORMED = 3

DEFAULT_DEPTH_CAP = 20


class UsageError(ValueError):
    pass


class VerificationFailure(RuntimeError):
    pass


def _rat(value: str) -> Fraction:
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _param(value: str) -> BernoulliParam:
    try:
        return BernoulliParam(_rat(value))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _pair(x: Fraction, precision: int) -> dict:
    return {"rational": format_rational(x), "decimal": decimal_str(x, precision)}


def _emit(payload: dict, rows: list[dict], columns: list[str], args) -> None:
    """Write either canonical JSON (payload, with rows embedded) or CSV of
    the row table."""
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({c: row.get(c, "") for c in columns})
        text = buf.getvalue()
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_state(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidStateError(f"cannot read state file: {exc}") from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidStateError(f"not JSON: {exc}") from exc
    if isinstance(payload, dict) and "base_depth" in payload:
        return suspension_state_from_json(text)
    return state_from_json(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_lemma(args) -> int:
    param = _param(args.a)
    gap = tv_sigma_vs_identity(param)
    partial, tail = rn_integral_check(param, args.terms)
    p = args.precision
    payload = {
        "a": format_rational(param.a),
        "value": _pair(gap.total, p),
        "positive_half": _pair(gap.positive_half, p),
        "negative_half": _pair(gap.negative_half, p),
        "rn_integral": {
            "terms": args.terms,
            "partial": format_rational(partial),
            "tail": format_rational(tail),
            "total": format_rational(partial + tail),
        },
    }
    rows = [
        {
            "a": format_rational(param.a),
            "value": format_rational(gap.total),
            "positive_half": format_rational(gap.positive_half),
            "negative_half": format_rational(gap.negative_half),
            "rn_total": format_rational(partial + tail),
        }
    ]
    _emit(payload, rows, ["a", "value", "positive_half", "negative_half", "rn_total"], args)
    return EXIT_OK


def _interval_row(n: int, iv: TVInterval, t: Fraction, precision: int) -> dict:
    return {
        "n": n,
        "lo": format_rational(iv.lo),
        "hi": format_rational(iv.hi),
        "decimal_lo": decimal_str(iv.lo, precision),
        "decimal_hi": decimal_str(iv.hi, precision),
        "stabilized": iv.degenerate and iv.lo == t,
    }


def cmd_converge(args) -> int:
    state = _load_state(args.state)
    t = state.param.flow_parameter
    rows = []
    if isinstance(state, SuspensionState):
        if args.n_max < state.base_depth:
            raise UsageError("--n-max must be at least the state's base depth")
        for n, iv in flow_limit_table(state, args.n_max, args.depth):
            rows.append(_interval_row(n, iv, t, args.precision))
    else:
        for n in range(args.n_max + 1):
            d = max(args.depth, state.depth, n + 1)
            _check_depth_cap(d, args)
            iv = tv_pushforward_pow2(state, n, d)
            rows.append(_interval_row(n, iv, t, args.precision))
    payload = {
        "a": format_rational(state.param.a),
        "t": format_rational(t),
        "rows": rows,
    }
    _emit(payload, rows, ["n", "lo", "hi", "decimal_lo", "decimal_hi", "stabilized"], args)
    return EXIT_OK


def cmd_eigen(args) -> int:
    if args.n < 1 or args.n > 16:
        raise UsageError("--n must lie in 1..16")
    if not 0 <= args.k < (1 << args.n):
        raise UsageError(f"--k must lie in [0, 2^{args.n})")
    u = characters.eigen_unitary(args.n, args.k)
    base_ok = characters.verify_sigma_eigen(u, args.n, args.k)
    verdicts = {"sigma_eigen": base_ok}
    if args.suspension:
        s_values = [_rat(s) for s in args.s.split(",")] if args.s else [Fraction(1)]
        grid = characters.sample_grid(args.n, args.grid)
        for s in s_values:
            ok = characters.suspension_eigen_check(args.n, args.k, s, grid)
            verdicts[f"flow_eigen[s={format_rational(s)}]"] = ok
    payload = {
        "n": args.n,
        "k": args.k,
        "tau": f"2*pi*{args.k}/{1 << args.n}",
        "exponents": {str(j): e for j, e in sorted(u.exponents.items())},
        "verdicts": verdicts,
        "pass": all(verdicts.values()),
    }
    rows = [{"check": name, "verdict": ok} for name, ok in verdicts.items()]
    _emit(payload, rows, ["check", "verdict"], args)
    return EXIT_OK if all(verdicts.values()) else EXIT_VERIFICATION


def cmd_tinv(args) -> int:
    rows = []
    for spec_tau in args.tau:
        x = _rat(spec_tau)
        tau = characters.DyadicAngle.from_fraction(x)
        member = characters.dyadic_membership(tau)
        span = max(2 * tau.q.bit_length(), 4)
        profile = characters.orbit_distance_profile(tau, 0, span)
        residues = [c.residue for c in profile]
        rows.append(
            {
                "tau": f"{tau.p}/{tau.q}",
                "member": member,
                "residues": ",".join(str(r) for r in residues[:12]),
                "eventually_zero": all(c.is_zero for c in profile[-2:]),
                "last_distance_sq": profile[-1].exact is not None
                and format_rational(profile[-1].exact)
                or profile[-1].decimal(args.precision),
            }
        )
    payload = {
        "note": "membership depends only on the angle, not on the flow parameter",
        "rows": rows,
    }
    _emit(payload, rows, ["tau", "member", "residues", "eventually_zero", "last_distance_sq"], args)
    return EXIT_OK


def cmd_separate(args) -> int:
    p1 = _param(args.a1)
    p2 = _param(args.a2)
    if p1.a == p2.a:
        raise UsageError("a1 and a2 must differ")
    values = {}
    for name, param in (("t1", p1), ("t2", p2)):
        base = CylinderState.bernoulli(param, args.state_depth)
        st = SuspensionState.product(base, time_depth=2)
        table = flow_limit_table(st, max(args.n_max, args.state_depth), args.depth)
        stabilized = [iv for n, iv in table if n >= st.base_depth]
        assert all(iv.degenerate and iv.lo == param.flow_parameter for iv in stabilized)
        values[name] = param.flow_parameter
    gap = abs(values["t1"] - values["t2"])
    p = args.precision
    payload = {
        "a1": format_rational(p1.a),
        "a2": format_rational(p2.a),
        "t1": _pair(values["t1"], p),
        "t2": _pair(values["t2"], p),
        "gap": _pair(gap, p),
    }
    rows = [
        {
            "a1": format_rational(p1.a),
            "a2": format_rational(p2.a),
            "t1": format_rational(values["t1"]),
            "t2": format_rational(values["t2"]),
            "gap": format_rational(gap),
        }
    ]
    _emit(payload, rows, ["a1", "a2", "t1", "t2", "gap"], args)
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.state:
        state = _load_state(args.state)
        if isinstance(state, SuspensionState):
            raise UsageError("oracle cross-checks run on base states only")
    else:
        state = CylinderState.bernoulli(_param(args.a), args.state_depth)
    rows = []
    all_ok = True
    for m in args.m:
        d = max(args.depth, state.depth, m + 1)
        _check_depth_cap(d, args)
        engine = tv_pushforward_pow2(state, m, d)
        oracle = brute_force_tv_pow2(state, m, d)
        ok = engine.intersects(oracle)
        all_ok = all_ok and ok
        rows.append(
            {
                "m": m,
                "engine_lo": format_rational(engine.lo),
                "engine_hi": format_rational(engine.hi),
                "oracle_lo": format_rational(oracle.lo),
                "oracle_hi": format_rational(oracle.hi),
                "intersect": ok,
            }
        )
    payload = {"a": format_rational(state.param.a), "depth": state.depth, "rows": rows}
    _emit(
        payload,
        rows,
        ["m", "engine_lo", "engine_hi", "oracle_lo", "oracle_hi", "intersect"],
        args,
    )
    return EXIT_OK if all_ok else EXIT_VERIFICATION


def _check_depth_cap(d: int, args) -> None:
    if d > args.depth_cap:
        raise UsageError(
            f"working depth {d} exceeds the cap {args.depth_cap} "
            "(raise --depth-cap explicitly to allow it)"
        )


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="odoflow",
        description="Exact odometer / suspension-flow calculations.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--precision", type=int, default=12)
    common.add_argument("--depth", type=int, default=12, help="working depth D")
    common.add_argument("--depth-cap", type=int, default=DEFAULT_DEPTH_CAP)
    common.add_argument("--out", default=None, help="write output to a file")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lemma", parents=[common], help="exact pushforward distance of the Bernoulli state")
    p.add_argument("--a", required=True)
    p.add_argument("--terms", type=int, default=8)
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("converge", parents=[common], help="distance table along times 2^n")
    p.add_argument("--state", required=True, help="state file (base or suspension JSON)")
    p.add_argument("--n-max", type=int, default=8)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("eigen", parents=[common], help="root-of-unity eigenfunction checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--suspension", action="store_true")
    p.add_argument("--s", default=None, help="comma list of rational flow times")
    p.add_argument("--grid", type=int, default=64)
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("tinv", parents=[common], help="dyadic-angle membership table")
    p.add_argument("--tau", action="append", required=True, help="angle as p/q (meaning 2*pi*p/q); repeatable")
    p.set_defaults(func=cmd_tinv)

    p = sub.add_parser("separate", parents=[common], help="distinct flow parameters yield distinct limits")
    p.add_argument("--a1", required=True)
    p.add_argument("--a2", required=True)
    p.add_argument("--state-depth", type=int, default=2)
    p.add_argument("--n-max", type=int, default=6)
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("oracle", parents=[common], help="engine vs brute-force cross-check")
    p.add_argument("--a", default="1/3")
    p.add_argument("--state", default=None)
    p.add_argument("--state-depth", type=int, default=3)
    p.add_argument("--m", type=int, action="append", default=None)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if getattr(args, "m", None) is None and args.command == "oracle":
        args.m = [0, 1, 2]
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except ValueError as exc:
        # domain errors from the library surface as usage errors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
