"""Command-line front end.

Exit codes: 0 on success (payload on stdout or --out), 1 on usage errors
(bad flags, missing files) with a message on stderr, 2 on numeric or
size-limit errors.  Nothing is written to the payload stream on a nonzero
exit.  Every stochastic subcommand requires an explicit --seed; nothing is
ever seeded from the clock.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .combinatorics import (
    SpinSpec,
    bunching_bound,
    capped_fraction,
    count_capped,
    count_collision_free,
    count_total,
)
from .dynamics import error_norm_vs_reference
from .exceptions import (
    ConservationError,
    DimensionError,
    NormalizationError,
    OperatorError,
    SizeLimitError,
)
from .linalg import derive_seed, haar_unitary
from .matrix_functions import hafnian, permanent, torontonian
from .matrix_io import read_matrix
from .sampling import birthday_experiment, draw_samples, exact_distribution, post_select
from .scaling import growth_exponent, required_sites
from .sweeps import error_sweep


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _format_float(x: float) -> str:
    return format(float(x) + 0.0, ".17g")


def _format_complex(z: complex) -> str:
    return f"{_format_float(z.real)} {_format_float(z.imag)}"


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from exc
    if not values:
        raise UsageError("the list must not be empty")
    return values


def _spin_list(text: str) -> list[SpinSpec]:
    specs = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            specs.append(SpinSpec.parse(part))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if not specs:
        raise UsageError("the spin list must not be empty")
    return specs


def _parse_config(text: str, sites: int) -> tuple[int, ...]:
    values = _int_list(text)
    if len(values) != sites:
        raise UsageError(f"the configuration must list {sites} occupations")
    return tuple(values)


def _load_unitary(args, sites: int, stream: int):
    if getattr(args, "unitary", None):
        u = read_matrix(args.unitary)
        if u.shape[0] != sites:
            raise UsageError(
                f"unitary file is {u.shape[0]}x{u.shape[1]} but --sites is {sites}"
            )
        return u
    if getattr(args, "seed", None) is None:
        raise UsageError("either --unitary FILE or --seed is required")
    return haar_unitary(sites, derive_seed(args.seed, stream))


def _default_input(args, sites: int) -> tuple[int, ...]:
    if getattr(args, "input", None):
        config = _parse_config(args.input, sites)
        if sum(config) != args.particles:
            raise UsageError(
                f"--input sums to {sum(config)} but --particles is {args.particles}"
            )
        return config
    n = args.particles
    if n > sites:
        raise UsageError("the default input places one excitation per site; pass --input instead")
    return (1,) * n + (0,) * (sites - n)


def _matrix_function_payload(args, fn) -> str:
    value = fn(read_matrix(args.matrix))
    return _format_complex(value)


def _cmd_perm(args) -> str:
    return _matrix_function_payload(args, permanent)


def _cmd_haf(args) -> str:
    return _matrix_function_payload(args, hafnian)


def _cmd_tor(args) -> str:
    return _matrix_function_payload(args, torontonian)


def _cmd_count(args) -> str:
    spin = SpinSpec.parse(args.twice_spin)
    payload = {
        "sites": args.sites,
        "particles": args.particles,
        "twice_spin": spin.twice_spin,
        "total": count_total(args.sites, args.particles),
        "collision_free": count_collision_free(args.sites, args.particles),
        "capped": count_capped(args.sites, args.particles, spin),
        "capped_fraction": capped_fraction(args.sites, args.particles, spin),
        "bunching_bound": bunching_bound(args.sites, args.particles, spin),
    }
    return json.dumps(payload, indent=2)


def distribution_payload(d, m: int, n: int, cap: int | None) -> dict:
    return {
        "m": m,
        "n": n,
        "twice_spin": cap,
        "entries": [
            {"config": list(c), "p": float(p)}
            for c, p in zip(d.configs, d.probabilities)
        ],
        "total_mass": float(d.total_mass),
        "discarded_mass": float(d.discarded_mass),
    }


def _cmd_distribution(args) -> str:
    u = _load_unitary(args, args.sites, stream=0)
    input_config = _default_input(args, args.sites)
    d = exact_distribution(u, input_config, cap=args.cap)
    if args.post_select:
        d = post_select(d)
    return json.dumps(distribution_payload(d, args.sites, sum(input_config), args.cap), indent=2)


def _cmd_sample(args) -> str:
    u = _load_unitary(args, args.sites, stream=0)
    input_config = _default_input(args, args.sites)
    d = exact_distribution(u, input_config, cap=args.cap)
    if args.cap is not None:
        d = post_select(d)
    batch = draw_samples(d, derive_seed(args.seed, 1), args.draws)
    return "\n".join(json.dumps(list(map(int, row))) for row in batch.configs)


def _cmd_evolve(args) -> str:
    spin = SpinSpec.parse(args.twice_spin)
    u = _load_unitary(args, args.sites, stream=0)
    report = error_norm_vs_reference(
        u, args.sites, args.particles, spin, args.time,
        algebra_kind=args.algebra, seed=args.seed,
    )
    return json.dumps(report.to_dict(), indent=2)


def _csv_line(values) -> str:
    parts = []
    for v in values:
        parts.append(_format_float(v) if isinstance(v, float) else str(v))
    return ",".join(parts)


def _cmd_error_sweep(args) -> str:
    spin = SpinSpec.parse(args.twice_spin)
    rows, _ = error_sweep(
        _int_list(args.sites), args.particles, spin, args.seeds, args.seed,
        args.time, algebra_kind=args.algebra, workers=args.workers,
    )
    lines = ["m,n,twice_spin,mean_delta,se_delta,mean_tvd,slope_fit"]
    for row in rows:
        lines.append(_csv_line([row.m, row.n, row.twice_spin, row.mean_delta,
                                row.se_delta, row.mean_tvd, row.slope_fit]))
    return "\n".join(lines)


def _cmd_scaling(args) -> str:
    spins = _spin_list(args.spins)
    n_values = _int_list(args.n)
    lines = ["n,twice_spin,epsilon,slope,required_m,bound_constant,eps_target,time"]
    for spin in spins:
        slope = growth_exponent(spin)
        for n in n_values:
            m = required_sites(n, spin, args.eps_target, args.time, args.constant)
            lines.append(_csv_line([
                n, spin.twice_spin, 3.0 / spin.twice_spin, slope, m,
                args.constant, args.eps_target, args.time,
            ]))
    return "\n".join(lines)


def _cmd_birthday(args) -> str:
    result = birthday_experiment(args.modes, args.particles, args.trials, args.seed)
    return json.dumps(result, indent=2)


def build_parser() -> _Parser:
    parser = _Parser(prog="spinsampler",
                     description="Exact sampling distributions, counting bounds and "
                                 "capped-occupancy dynamics at desk scale.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add_out(p):
        p.add_argument("--out", help="write the payload to this file instead of stdout")

    for name, handler, doc in (
        ("perm", _cmd_perm, "matrix permanent"),
        ("haf", _cmd_haf, "matrix hafnian"),
        ("tor", _cmd_tor, "matrix torontonian"),
    ):
        p = sub.add_parser(name, help=f"print the {doc} of a matrix JSON file as 're im'")
        p.add_argument("matrix", help="path to the matrix JSON file")
        add_out(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("count", help="configuration counts and bunching bound")
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--particles", type=int, required=True)
    p.add_argument("--twice-spin", dest="twice_spin", required=True,
                   help="2S as an integer, or a spin literal such as 1/2 or 3/2")
    add_out(p)
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("distribution", help="exact output distribution of a linear network")
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--particles", type=int, required=True)
    p.add_argument("--input", help="comma-separated input occupations (default: one per site)")
    p.add_argument("--cap", type=int, default=None, help="per-site occupancy cap (2S)")
    p.add_argument("--unitary", help="matrix JSON file; omit to draw a Haar unitary from --seed")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--post-select", dest="post_select", action="store_true",
                   help="renormalize the capped distribution")
    add_out(p)
    p.set_defaults(handler=_cmd_distribution)

    p = sub.add_parser("sample", help="draw configurations from the exact distribution")
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--particles", type=int, required=True)
    p.add_argument("--input", help="comma-separated input occupations (default: one per site)")
    p.add_argument("--cap", type=int, default=None, help="per-site occupancy cap (2S)")
    p.add_argument("--unitary", help="matrix JSON file; omit to draw a Haar unitary from --seed")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--draws", type=int, required=True)
    add_out(p)
    p.set_defaults(handler=_cmd_sample)

    p = sub.add_parser("evolve", help="capped evolution report against the exact reference")
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--particles", type=int, required=True)
    p.add_argument("--twice-spin", dest="twice_spin", required=True)
    p.add_argument("--unitary", help="matrix JSON file; omit to draw a Haar unitary from --seed")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--time", type=float, default=math.pi / 2)
    p.add_argument("--algebra", choices=("spin", "truncated"), default="truncated")
    add_out(p)
    p.set_defaults(handler=_cmd_evolve)

    p = sub.add_parser("error-sweep", help="Haar-averaged evolution error across site counts")
    p.add_argument("--sites", required=True, help="comma-separated site counts, e.g. 4,8,16")
    p.add_argument("--particles", type=int, required=True)
    p.add_argument("--twice-spin", dest="twice_spin", required=True)
    p.add_argument("--seeds", type=int, required=True, help="repetitions per site count")
    p.add_argument("--seed", type=int, required=True, help="base seed for the Haar draws")
    p.add_argument("--time", type=float, default=math.pi / 2)
    p.add_argument("--algebra", choices=("spin", "truncated"), default="truncated")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers (default: SPINSAMPLER_WORKERS env var, else serial)")
    add_out(p)
    p.set_defaults(handler=_cmd_error_sweep)

    p = sub.add_parser("scaling", help="required-site curves over excitation numbers and spins")
    p.add_argument("--spins", required=True, help="comma-separated twice-spin values, e.g. 1,3,12")
    p.add_argument("--n", required=True, help="comma-separated excitation numbers")
    p.add_argument("--eps-target", dest="eps_target", type=float, default=0.1)
    p.add_argument("--time", type=float, default=math.pi / 2)
    p.add_argument("--constant", type=float, default=1.0)
    add_out(p)
    p.set_defaults(handler=_cmd_scaling)

    p = sub.add_parser("birthday", help="classical collision probability, exact vs Monte Carlo")
    p.add_argument("--modes", type=int, required=True)
    p.add_argument("--particles", type=int, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    add_out(p)
    p.set_defaults(handler=_cmd_birthday)

    return parser


def _emit(payload: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(payload)
            fh.write("\n")
    else:
        sys.stdout.write(payload + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if getattr(args, "handler", None) is None:
        print("error: a subcommand is required (see --help)", file=sys.stderr)
        return 1
    try:
        payload = args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SizeLimitError, DimensionError, OperatorError, ConservationError,
            NormalizationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(payload, getattr(args, "out", None))
    return 0


if __name__ == "__main__":
    sys.exit(main())
