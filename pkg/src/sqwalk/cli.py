"""Command-line front end for batch experiments and report generation.

One subcommand per artifact class: ``field-report`` builds a quotient
algebra and dumps its chain data, ``mixing`` sweeps the closed-form
bounds over a parameter grid, ``modp`` emits exact stationary vectors or
the zero census, and ``simulate`` runs the seeded Monte Carlo harness
against the exact law when one is computable. Every output embeds the
run configuration and tool version. With --out the data lands in a file
and a companion .png is rendered next to it (suppress with
--no-figures); without --out the data goes to stdout and no figure is
drawn.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .algebra import make_algebra, squaring_matrix
from .chain import (
    CHAR_POLY_CAP,
    DENSE_STATE_CAP,
    Distribution,
    WalkSpec,
    build_add_only,
    build_modp,
    build_square_add,
    char_poly,
    evolve,
    is_aperiodic,
    simulate,
    stationary,
    tv_distance,
)
from .chain import is_irreducible as chain_is_irreducible
from .gf2poly import (
    BinaryPolynomial,
    is_squarefree,
    is_two_primitive_root,
    order_of_two,
)
from .gf2poly import is_irreducible as poly_is_irreducible
from .modp import stationary_integer, zero_census
from .serialize import (
    census_csv,
    census_payload,
    distribution_csv,
    distribution_payload,
    dump_json,
    format_fraction,
    matrix_payload,
    mixing_csv,
    mixing_payload,
    stationary_csv,
    stationary_payload,
)
from .spectral import l2_bound_and_tv

# exact reference law is only computed when the evolve cost stays small
EXACT_COMPARE_STEPS = 64


def _parse_poly(text: str) -> BinaryPolynomial:
    return BinaryPolynomial.parse(text)


def _parse_basis(alg, text: str):
    pieces = [piece for piece in text.split(";") if piece.strip()]
    return [alg.element(BinaryPolynomial.parse(piece).bits) for piece in pieces]


def _power_basis(alg):
    return [alg.element(1 << i) for i in range(alg.d)]


def _float_grid(text: str) -> list:
    values = [float(piece) for piece in text.split(",") if piece.strip()]
    if not values:
        raise ValueError("empty parameter grid")
    return values


def _bit_rows(A) -> list:
    return [[(A.cols[j] >> i) & 1 for j in range(A.d)] for i in range(A.d)]


def _config(args, **parameters) -> dict:
    return {
        "subcommand": args.subcommand,
        "parameters": parameters,
        "out": args.out,
        "format": args.format,
    }


def _csv_preamble(config: dict) -> str:
    line = json.dumps(config, sort_keys=True)
    return f"# sqwalk {__version__}\n# config {line}\n"


def _emit(args, config: dict, payload: dict, csv_text: str, draw) -> None:
    if args.format == "json":
        text = dump_json({"version": __version__, "config": config, **payload})
    else:
        text = _csv_preamble(config) + csv_text
    if args.out:
        out = Path(args.out)
        out.write_text(text)
        if draw is not None and not args.no_figures:
            draw(out.with_suffix(".png"))
    else:
        sys.stdout.write(text)


# -- field-report ----------------------------------------------------------

def _run_field_report(args) -> None:
    f = _parse_poly(args.modulus)
    if f.degree >= 1 and not is_squarefree(f):
        raise ValueError("modulus not squarefree")
    alg = make_algebra(f)
    basis = _parse_basis(alg, args.basis) if args.basis else _power_basis(alg)
    K = build_square_add(alg, basis)
    A = squaring_matrix(alg)
    pi, unique = stationary(K)
    poly = (None if K.n > CHAR_POLY_CAP
            else [format_fraction(coef) for coef in char_poly(K)])
    if unique:
        stationary_part = {"unique": True, "distribution": distribution_payload(pi)}
    else:
        stationary_part = {"unique": False, "dimension": len(pi)}
    payload = {
        "modulus": str(f),
        "d": alg.d,
        "q": alg.q,
        "squarefree": True,
        "irreducible": poly_is_irreducible(f),
        "basis": [str(BinaryPolynomial(b.bits)) for b in basis],
        "squaring_matrix": _bit_rows(A),
        "transition_matrix": matrix_payload(K),
        "char_poly": poly,
        "stationary": stationary_part,
        "chain_irreducible": chain_is_irreducible(K),
        "chain_aperiodic": is_aperiodic(K),
    }
    if args.format == "csv" and not unique:
        raise ValueError(
            "stationary space is not one-dimensional; no table to emit")
    csv_text = distribution_csv(pi) if unique else ""
    config = _config(args, modulus=args.modulus, basis=args.basis)

    def draw(path):
        from .figures import matrix_figure
        matrix_figure(K, path)

    _emit(args, config, payload, csv_text, draw)


# -- mixing ----------------------------------------------------------------

def _run_mixing(args) -> None:
    if args.p is not None:
        if not is_two_primitive_root(args.p):
            raise ValueError(
                f"2 is not a primitive root: order of 2 mod {args.p} "
                f"is {order_of_two(args.p)}")
        d = args.p - 1
    else:
        d = args.d
    if args.c_grid is not None:
        cs = _float_grid(args.c_grid)
        reports = [
            l2_bound_and_tv(d, (math.log(d) + c) / 2, c) for c in cs
        ]
    else:
        reports = [l2_bound_and_tv(d, m) for m in _float_grid(args.m_grid)]
    payload = {"rows": [mixing_payload(r) for r in reports]}
    config = _config(args, d=args.d, p=args.p,
                     c_grid=args.c_grid, m_grid=args.m_grid)

    def draw(path):
        from .figures import mixing_figure
        mixing_figure(reports, path)

    _emit(args, config, payload, mixing_csv(reports), draw)


# -- modp ------------------------------------------------------------------

def _parse_range(text: str) -> tuple:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise ValueError("range must look like LOW:HIGH")
    return int(lo), int(hi)


def _run_modp(args) -> None:
    if args.p is not None:
        report = stationary_integer(args.p)
        if args.format == "csv" and not report.unique:
            raise ValueError(
                "stationary space is not one-dimensional; no table to emit")
        payload = {"report": stationary_payload(report)}
        csv_text = stationary_csv(report) if report.unique else ""
        config = _config(args, p=args.p, range=None, threads=args.threads)

        def draw(path):
            from .figures import stationary_figure
            stationary_figure(report, path)

        _emit(args, config, payload, csv_text, draw)
        return
    lo, hi = _parse_range(args.range)
    census = zero_census(lo, hi, threads=args.threads)
    payload = {"census": census_payload(census)}
    config = _config(args, p=None, range=args.range, threads=args.threads)

    def draw(path):
        from .figures import census_figure
        census_figure(census, path)

    _emit(args, config, payload, census_csv(census), draw)


# -- simulate --------------------------------------------------------------

def _exact_law(spec: WalkSpec, steps: int):
    if steps > EXACT_COMPARE_STEPS or spec.state_count > DENSE_STATE_CAP:
        return None
    if spec.modulus is not None:
        K = build_modp(spec.modulus)
    elif spec.squaring:
        K = build_square_add(spec.algebra,
                             [spec.algebra.element(b) for b in spec.basis])
    else:
        K = build_add_only(spec.algebra,
                           [spec.algebra.element(b) for b in spec.basis])
    return evolve(Distribution.point_mass(K.states, 0), K, steps)


def _run_simulate(args) -> None:
    if args.p is not None:
        spec = WalkSpec.modp_walk(args.p)
    else:
        alg = make_algebra(_parse_poly(args.f))
        basis = _parse_basis(alg, args.basis) if args.basis else _power_basis(alg)
        spec = WalkSpec.field_walk(alg, basis, squaring=not args.add_only)
    empirical = simulate(spec, args.steps, args.trials, args.seed,
                         threads=args.threads)
    exact = _exact_law(spec, args.steps)
    tv = tv_distance(empirical, exact) if exact is not None else None
    payload = {
        "empirical": distribution_payload(empirical),
        "exact": None if exact is None else distribution_payload(exact),
        "tv_to_exact": None if tv is None else format_fraction(tv),
    }
    csv_text = distribution_csv(empirical)
    if tv is not None:
        csv_text = f"# tv_to_exact {format_fraction(tv)}\n" + csv_text
    config = _config(args, f=args.f, basis=args.basis, p=args.p,
                     add_only=args.add_only, steps=args.steps,
                     trials=args.trials, seed=args.seed, threads=args.threads)

    def draw(path):
        from .figures import simulate_figure
        simulate_figure(empirical, exact, path)

    _emit(args, config, payload, csv_text, draw)


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0,
                        help="random seed for sampling commands")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--no-figures", action="store_true",
                        help="skip the companion .png next to --out")

    parser = argparse.ArgumentParser(
        prog="sqwalk",
        description="square-and-add walk toolkit")
    parser.add_argument("--version", action="version",
                        version=f"sqwalk {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    field = sub.add_parser(
        "field-report", parents=[common],
        help="algebra, matrices, spectrum, and stationary law for one modulus")
    field.add_argument("modulus", help="polynomial text, e.g. 0,1,3 or 0xb")
    field.add_argument("--basis",
                       help="semicolon-separated elements, e.g. '0;1;2'")
    field.set_defaults(run=_run_field_report)

    mixing = sub.add_parser(
        "mixing", parents=[common],
        help="closed-form mixing bounds over a c- or m-grid")
    which = mixing.add_mutually_exclusive_group(required=True)
    which.add_argument("--d", type=int, help="dimension")
    which.add_argument("--p", type=int,
                       help="prime with 2 a primitive root; uses d = p-1")
    grid = mixing.add_mutually_exclusive_group(required=True)
    grid.add_argument("--c-grid", help="comma-separated c values")
    grid.add_argument("--m-grid", help="comma-separated m values")
    mixing.set_defaults(run=_run_mixing)

    modp = sub.add_parser(
        "modp", parents=[common],
        help="exact stationary vector for one prime, or a census over a range")
    target = modp.add_mutually_exclusive_group(required=True)
    target.add_argument("--p", type=int)
    target.add_argument("--range", help="census range LOW:HIGH")
    modp.set_defaults(run=_run_modp)

    sim = sub.add_parser(
        "simulate", parents=[common],
        help="seeded empirical law, with exact comparison when cheap")
    walk = sim.add_mutually_exclusive_group(required=True)
    walk.add_argument("--f", help="field modulus polynomial text")
    walk.add_argument("--p", type=int, help="odd prime for the mod-p walk")
    sim.add_argument("--basis", help="semicolon-separated field basis")
    sim.add_argument("--add-only", action="store_true",
                     help="drop the squaring step")
    sim.add_argument("--steps", type=int, required=True)
    sim.add_argument("--trials", type=int, required=True)
    sim.set_defaults(run=_run_simulate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.run(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
