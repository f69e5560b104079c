"""Command-line interface: blocks, spectrum, wavefunction, verify.

All numeric output is printed with 17 significant digits ("%.17g"), which
round-trips binary64 exactly, and the emitters below are hand-rolled so the
byte stream is deterministic for identical flags.  Exit codes: 0 success,
2 parameter error, 3 precision failure, 4 selection error, 5 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, List, Optional, Sequence

import numpy as np

from . import models, verification
from .errors import ParameterError, PrecisionError, SelectionError
from .models import BlockSpec, BlockResult, Example, ModelConfig

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_PRECISION = 3
EXIT_SELECTION = 4
EXIT_VERIFICATION = 5


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _json_value(value: Any, indent: int) -> str:
    pad = "  " * indent
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return _fmt(value)
    if isinstance(value, complex):
        return f"[{_fmt(value.real)}, {_fmt(value.imag)}]"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        inner = ",\n".join(
            pad + "  " + _json_value(v, indent + 1) for v in value
        )
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = ",\n".join(
            pad + "  " + json.dumps(k) + ": " + _json_value(v, indent + 1)
            for k, v in value.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    raise TypeError(f"unserializable value {value!r}")


def _config_from(args: argparse.Namespace) -> ModelConfig:
    return ModelConfig(
        example=Example(args.example),
        variant=args.case,
        k=args.k,
        epsilon=args.epsilon,
    )


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--example", type=int, choices=(1, 2), required=True,
                        help="1: repulsive polynomial field; 2: non-rational field")
    parser.add_argument("--case", required=True,
                        choices=("a", "b", "first", "second"),
                        help="solvable family within the example")
    parser.add_argument("--k", type=int, required=True,
                        help="integer field-strength parameter")
    parser.add_argument("--epsilon", type=float, default=0.0,
                        help="dimensionless field parameter (default 0)")


def cmd_blocks(args: argparse.Namespace) -> int:
    config = _config_from(args)
    blocks = models.permissible_blocks(config, n_max=args.n_max)
    print(
        f"example={int(config.example)} case={config.variant} k={config.k} "
        f"epsilon={_fmt(config.epsilon)} n_max={args.n_max}"
    )
    print("n l sigma")
    for b in blocks:
        print(f"{b.n} {b.l} {'+1' if b.sigma > 0 else '-1'}")
    print(f"{len(blocks)} block{'s' if len(blocks) != 1 else ''}")
    return EXIT_OK


def _root_json(root: models.SpectralRoot) -> dict:
    coeffs = None
    if root.eigenvector is not None:
        coeffs = [float(c) for c in root.eigenvector.coeffs]
    value: Any = root.value
    if isinstance(value, complex):
        value = value if value.imag != 0 else value.real
    return {
        "value": value,
        "energy": root.energy,
        "physical": root.physical,
        "residual": float(root.residual),
        "coefficients": coeffs,
    }


def _spectrum_results(
    config: ModelConfig, blocks: List[BlockSpec], jobs: int
) -> List[BlockResult]:
    if jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda b: models.solve_block(config, b), blocks))
    return [models.solve_block(config, b) for b in blocks]


def cmd_spectrum(args: argparse.Namespace) -> int:
    config = _config_from(args)
    blocks = models.permissible_blocks(config, n_max=args.n_max)
    results = _spectrum_results(config, blocks, args.jobs)
    if args.format == "json":
        report = {
            "example": int(config.example),
            "case": config.variant,
            "k": config.k,
            "epsilon": config.epsilon,
            "blocks": [
                {
                    "n": res.block.n,
                    "l": res.block.l,
                    "sigma": res.block.sigma,
                    "roots": [_root_json(r) for r in res.roots],
                }
                for res in results
            ],
            "filtered_root_count": sum(res.filtered_count for res in results),
            "precision_bits": max(
                (res.precision_bits for res in results), default=53
            ),
        }
        print(_json_value(report, 0))
        return EXIT_OK
    print("n,l,sigma,root,energy,physical,residual")
    for res in results:
        b = res.block
        for r in res.roots:
            if isinstance(r.value, complex) and r.value.imag != 0:
                root_cell = f"{_fmt(r.value.real)}{r.value.imag:+.17g}j"
            else:
                root_cell = _fmt(complex(r.value).real)
            energy_cell = "" if r.energy is None else _fmt(r.energy)
            print(
                f"{b.n},{b.l},{b.sigma},{root_cell},{energy_cell},"
                f"{'true' if r.physical else 'false'},{_fmt(r.residual)}"
            )
    return EXIT_OK


def cmd_wavefunction(args: argparse.Namespace) -> int:
    config = _config_from(args)
    block = models.make_block(config, args.n, args.l)
    roots = models.spectrum(config, block)
    if not (0 <= args.index < len(roots)):
        raise SelectionError(
            f"--index {args.index} out of range; block has {len(roots)} roots"
        )
    root = roots[args.index]
    if not root.physical:
        raise SelectionError(
            f"root #{args.index} (value {root.value!r}) is not physical; "
            "wavefunctions exist only for physical roots"
        )
    if args.samples < 2:
        raise ParameterError("--samples must be at least 2")
    if not args.rho_max > 0:
        raise ParameterError("--rho-max must be positive")
    grid = np.linspace(0.0, args.rho_max, args.samples)
    profile = models.radial_profile(
        config, block, root, grid, phi=args.phi, normalize=args.normalize
    )
    print("rho,re,im,abs2")
    for rho, val in zip(profile.grid, profile.values):
        print(
            f"{_fmt(rho)},{_fmt(val.real)},{_fmt(val.imag)},"
            f"{_fmt(abs(val) ** 2)}"
        )
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    results = verification.run_checks(
        level=args.level, seed=args.seed, corrupt_check=args.corrupt_check
    )
    failed = [r for r in results if not r.passed]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name} ({r.seconds:.2f} s): {r.detail}")
    if failed:
        print(f"verification failed: {', '.join(r.name for r in failed)}")
        return EXIT_VERIFICATION
    print(f"verification passed: {len(results)} checks")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heun-spectra",
        description="Bound-state spectra of two integrable planar magnetic systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_blocks = sub.add_parser("blocks", help="list permissible angular blocks")
    _add_config_flags(p_blocks)
    p_blocks.add_argument("--n-max", type=int, default=10,
                          help="degree budget (block-count budget for example 2 first)")
    p_blocks.set_defaults(func=cmd_blocks)

    p_spec = sub.add_parser("spectrum", help="solve every block and print the roots")
    _add_config_flags(p_spec)
    p_spec.add_argument("--n-max", type=int, default=10)
    p_spec.add_argument("--format", choices=("json", "csv"), default="json")
    p_spec.add_argument("--jobs", type=int, default=1,
                        help="solve independent blocks in parallel")
    p_spec.set_defaults(func=cmd_spectrum)

    p_wf = sub.add_parser("wavefunction", help="sample one bound state on a radial grid")
    _add_config_flags(p_wf)
    p_wf.add_argument("--n", type=int, required=True, help="block degree")
    p_wf.add_argument("--l", type=int, default=None,
                      help="angular number (needed when n does not fix the block)")
    p_wf.add_argument("--index", type=int, default=0,
                      help="root index within the block, ascending energy")
    p_wf.add_argument("--phi", type=float, default=0.0)
    p_wf.add_argument("--samples", type=int, default=500)
    p_wf.add_argument("--rho-max", type=float, default=8.0)
    p_wf.add_argument("--normalize", action="store_true",
                      help="scale so the radial density integrates to 1")
    p_wf.set_defaults(func=cmd_wavefunction)

    p_ver = sub.add_parser("verify", help="run the self-check suite")
    p_ver.add_argument("--level", choices=("quick", "full"), default="quick")
    p_ver.add_argument("--seed", type=int, default=verification.DEFAULT_SEED)
    p_ver.add_argument("--corrupt-check", default=None, help=argparse.SUPPRESS)
    p_ver.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except PrecisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except SelectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SELECTION


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
