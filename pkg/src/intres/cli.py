"""``intres`` command-line interface.

Exit codes: 0 success, 2 input error, 3 resolution depth exceeded,
4 missing join, 5 internal invariant violation. Errors are also printed to
stdout as ``{"error": ..., "type": ...}``.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import io
from .approx import euler_profile, interval_dimension, interval_resolution
from .artrans import intgldim_detail, tau, tau_inverse
from .errors import InputError, IntresError
from .fflinalg import check_modulus
from .ladder import compress, interval_approximation_delta, require_ladder
from .module import CommutativityError
from .poset import enumerate_intervals, make_chain, make_grid
from .testkit import oracle_top, perturbed_module, plant


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--field", type=int, default=2, metavar="P", help="prime field size (default 2)")
    parser.add_argument("--seed", type=int, default=0, help="seed for random generation")
    parser.add_argument("--max-depth", type=int, default=None, metavar="D", help="resolution step budget")
    parser.add_argument("--jobs", type=int, default=1, metavar="J", help="worker processes")
    parser.add_argument("--format", choices=("json", "tsv"), default="json")


def _poset_args(parser: argparse.ArgumentParser) -> None:
    g = parser.add_mutually_exclusive_group()
    g.add_argument("--grid", type=int, nargs=2, metavar=("M", "N"))
    g.add_argument("--chain", type=int, metavar="N")
    g.add_argument("--poset", metavar="FILE", help="poset JSON file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="intres", description="Interval resolutions of persistence modules.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("intervals", help="list the intervals of a poset")
    _poset_args(p)
    _common(p)

    for name, helptext in (
        ("resolve", "minimal interval resolution of a module"),
        ("intdim", "interval resolution dimension of a module"),
        ("delta", "compressed multiplicities and their Moebius inversion (ladders)"),
        ("check", "run the invariant suite on a module"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("module", help="module JSON file, or - for stdin")
        _common(p)

    p = sub.add_parser("tau", help="Auslander-Reiten translate of a module")
    p.add_argument("module")
    p.add_argument("--inverse", action="store_true", help="compute tau inverse instead")
    _common(p)

    p = sub.add_parser("compress", help="restrict a ladder module along xi_I")
    p.add_argument("module")
    p.add_argument("--interval", required=True, help='interval JSON, e.g. {"members":["2,1","3,1"]}, or labels separated by ;')
    _common(p)

    p = sub.add_parser("intgldim", help="interval resolution global dimension of a grid")
    p.add_argument("m", type=int, nargs="?")
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("--grid", type=int, nargs=2, metavar=("M", "N"))
    _common(p)

    p = sub.add_parser("random", help="generate a random module")
    _poset_args(p)
    p.add_argument("--mode", choices=("planted", "perturbed"), default="planted")
    p.add_argument("--budget", type=int, default=3, help="planted: number of distinct intervals at most")
    p.add_argument("--max-dim", type=int, default=2, help="perturbed: largest vertex dimension")
    _common(p)
    return ap


# -- helpers ------------------------------------------------------------------


def _poset(args):
    if args.grid:
        return make_grid(*args.grid)
    if args.chain:
        return make_chain(args.chain)
    if args.poset:
        return io.poset_from_json(io.load_json(args.poset))
    raise InputError("a poset is required (--grid M N, --chain N or --poset FILE)")


def _module(path):
    try:
        return io.module_from_json(io.load_json(path))
    except CommutativityError as exc:
        raise InputError(str(exc)) from exc


def _emit(args, obj, tsv_lines=None) -> None:
    if args.format == "tsv" and tsv_lines is not None:
        sys.stdout.write("".join(line + "\n" for line in tsv_lines))
    else:
        sys.stdout.write(io.dumps(obj))


def _members(P, iv) -> str:
    return ";".join(P.labels[x] for x in iv.members)


# -- commands -----------------------------------------------------------------


def cmd_intervals(args) -> int:
    P = _poset(args)
    ip = enumerate_intervals(P)
    rows = [io.interval_to_json(P, iv) for iv in ip]
    _emit(args, {"count": len(ip), "intervals": rows}, [f"{k}\t{_members(P, iv)}" for k, iv in enumerate(ip)])
    return 0


def cmd_resolve(args) -> int:
    M = _module(args.module)
    ip = enumerate_intervals(M.poset)
    R = interval_resolution(M, ip, args.max_depth, verify=True)
    lines = [f"{_members(M.poset, iv)}\t" + "\t".join(map(str, ds)) for iv, ds in R.table.items()]
    _emit(args, io.resolution_to_json(R), [f"length\t{R.length}"] + lines)
    return 0


def cmd_intdim(args) -> int:
    M = _module(args.module)
    d = interval_dimension(M, enumerate_intervals(M.poset), args.max_depth)
    _emit(args, {"intdim": d}, [str(d)])
    return 0


def cmd_intgldim(args) -> int:
    if args.grid:
        m, n = args.grid
    elif args.m is not None and args.n is not None:
        m, n = args.m, args.n
    else:
        raise InputError("give the grid as M N or --grid M N")
    if m < 1 or n < 1:
        raise InputError("grid sides must be positive")
    p = check_modulus(args.field)
    P = make_grid(m, n)
    res = intgldim_detail(P, p=p, max_depth=args.max_depth, jobs=max(1, args.jobs))
    per = [
        {
            "interval": io.interval_to_json(P, iv),
            "tau": res.tau_dims[k],
            "tau_inverse": res.tau_inverse_dims[k],
            "tau_inverse_co": res.tau_inverse_codims[k],
        }
        for k, iv in enumerate(res.intervals)
    ]
    obj = {
        "grid": [m, n],
        "field": p,
        "intgldim": res.value,
        "tau_max": res.tau_max,
        "tau_inverse_max": res.tau_inverse_max,
        "tau_inverse_comax": res.tau_inverse_comax,
        "per_interval": per,
    }
    lines = [str(res.value)] + [
        f"{_members(P, iv)}\t{res.tau_dims[k]}\t{res.tau_inverse_dims[k]}\t{res.tau_inverse_codims[k]}"
        for k, iv in enumerate(res.intervals)
    ]
    _emit(args, obj, lines)
    return 0


def cmd_tau(args) -> int:
    M = _module(args.module)
    T = tau_inverse(M) if args.inverse else tau(M)
    _emit(args, io.module_to_json(T))
    return 0


def _interval_arg(P, text):
    import json

    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        obj = [s for s in text.split(";") if s]
    return io.interval_from_json(P, obj)


def cmd_compress(args) -> int:
    M = _module(args.module)
    require_ladder(M.poset)
    I = _interval_arg(M.poset, args.interval)
    Z = compress(M, I)
    obj = io.module_to_json(Z)
    _emit(args, obj, ["dims\t" + "\t".join(map(str, Z.dims))])
    return 0


def cmd_delta(args) -> int:
    M = _module(args.module)
    require_ladder(M.poset)
    ip = enumerate_intervals(M.poset)
    prof = interval_approximation_delta(M, ip, jobs=max(1, args.jobs))
    lines = [f"{_members(M.poset, I)}\t{prof.c[I]}\t{prof.delta[I]}" for I in ip]
    _emit(args, io.profile_to_json(M.poset, prof, ip), lines)
    return 0


def cmd_random(args) -> int:
    P = _poset(args)
    p = check_modulus(args.field)
    if args.mode == "planted":
        ip = enumerate_intervals(P)
        M = plant(ip, args.budget, seed=args.seed, p=p).module
    else:
        M = perturbed_module(P, args.max_dim, seed=args.seed, p=p)
    _emit(args, io.module_to_json(M))
    return 0


ORACLE_LIMIT = 9


def run_checks(M, max_depth=None) -> dict[str, bool]:
    """Every invariant that applies to ``M``; the resolution checks always run."""
    checks = {"commutative": M.check_commutativity()}
    ip = enumerate_intervals(M.poset)
    R = interval_resolution(M, ip, max_depth, verify=False)
    from .approx import check_step

    for name in ("surjective", "approximation", "exact"):
        checks[name] = True
    for step in R.steps:
        for name, ok in check_step(step, ip).items():
            checks[name] = checks[name] and ok
    checks["minimal_length"] = all(not s.kernel.is_zero() for s in R.steps[:-1]) and R.steps[-1].kernel.is_zero()
    total = sum(d * len(iv) for iv, d in euler_profile(R).items())
    checks["euler_dimension"] = total == M.total_dim()
    if M.poset.n <= ORACLE_LIMIT:
        checks["oracle_top"] = R.steps[0].multiplicities == oracle_top(M, ip)
    try:
        require_ladder(M.poset)
    except InputError:
        return checks
    prof = interval_approximation_delta(M, ip)
    e = euler_profile(R)
    checks["compressed_multiplicity"] = all(
        prof.c[I] == sum(e.get(J, 0) for J in ip.supersets(I)) for I in ip
    )
    checks["delta_equals_euler"] = all(prof.delta[I] == e.get(I, 0) for I in ip)
    return checks


def cmd_check(args) -> int:
    M = _module(args.module)
    checks = run_checks(M, args.max_depth)
    ok = all(checks.values())
    _emit(args, {"ok": ok, "checks": checks}, [f"{k}\t{'ok' if v else 'FAIL'}" for k, v in checks.items()])
    return 0 if ok else 5


COMMANDS = {
    "intervals": cmd_intervals,
    "resolve": cmd_resolve,
    "intdim": cmd_intdim,
    "intgldim": cmd_intgldim,
    "tau": cmd_tau,
    "compress": cmd_compress,
    "delta": cmd_delta,
    "random": cmd_random,
    "check": cmd_check,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.jobs < 1:
            raise InputError("--jobs must be at least 1")
        if args.max_depth is not None and args.max_depth < 0:
            raise InputError("--max-depth must be nonnegative")
        check_modulus(args.field)
        return COMMANDS[args.command](args)
    except IntresError as exc:
        sys.stdout.write(io.dumps({"error": str(exc), "type": type(exc).__name__}))
        return exc.exit_code
    except ValueError as exc:
        sys.stdout.write(io.dumps({"error": str(exc), "type": "InputError"}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
