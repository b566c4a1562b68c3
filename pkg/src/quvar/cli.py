"""Command-line front end.

Subcommands::

    quvar bounds    variance envelope table as CSV (t, lower, upper, sql_line)
    quvar extremal  saturating-state record as JSON
    quvar oracle    grid-oracle comparison against the closed forms
    quvar ozawa     repeated-measurement protocol trace as CSV

Exit codes: 0 success, 1 verification/tolerance failure, 2 usage or config
error. Floats are printed with 17 significant digits so every emitted value
re-parses to the identical double. Identical invocations produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .bounds import (
    contraction_phase_osc,
    contraction_time_free,
    free_mass_bounds,
    oscillator_bounds_dimensional,
    oscillator_bounds_x,
    sql_reference,
)
from .extremal import (
    ExtremalSpec,
    bogoliubov_eigenvalue,
    complex_width_from_variances,
    gaussian_from_extremal,
    squeeze_from_complex_width,
)
from .gaussian import DimensionlessOscillator, FreeMass, Oscillator
from .gridsim import ConvergenceError, GridError, sample_extremal, verify_bounds_oracle, wavefn_csv, Grid
from .ozawa import ConfigError, OzawaConfig, check_regime, run_protocol

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _render_json(obj, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits (round-trip exact)."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}{json.dumps(k)}: {_render_json(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{_render_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, complex):
        return _render_json({"re": obj.real, "im": obj.imag}, indent)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot render {obj!r}")


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _sign_value(sign: str) -> int:
    return 1 if sign == "+" else -1


def _cmd_bounds(args) -> int:
    if args.t_max <= 0:
        print("--t-max must be > 0", file=sys.stderr)
        return EXIT_USAGE
    if args.steps < 1:
        print("--steps must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    lines = ["t,lower,upper,sql_line"]
    try:
        for j in range(args.steps + 1):
            t = j * args.t_max / args.steps
            if args.system == "free":
                pair = free_mass_bounds(args.vxx0, args.vpp0, args.m, args.hbar, t)
                sql = _fmt(sql_reference(args.m, args.hbar, t))
            elif args.system == "osc":
                pair = oscillator_bounds_dimensional(
                    args.vxx0, args.vpp0, args.m, args.omega, args.hbar, t
                )
                sql = ""
            else:  # osc-dimless
                pair = oscillator_bounds_x(args.vxx0, args.vpp0, args.omega * t)
                sql = ""
            lines.append(f"{_fmt(t)},{_fmt(pair.lower)},{_fmt(pair.upper)},{sql}")
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    _write_output("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _cmd_extremal(args) -> int:
    sign = _sign_value(args.sign)
    try:
        if args.system == "free":
            hbar = args.hbar
            width = complex_width_from_variances(args.vxx0, args.vpp0, hbar, sign)
            spec = ExtremalSpec(width=width, sign=sign)
            state = gaussian_from_extremal(spec, args.mean_x, args.mean_p, hbar)
            contraction = {"t_contract": contraction_time_free(args.vxx0, args.vpp0, args.m, hbar)}
            # Squeeze labels live in dimensionless quadratures; scale by √ħ
            # (fictitious unit-frequency oscillator). For ħ = 1 the reported
            # width is unchanged.
            w_dimless = complex_width_from_variances(
                args.vxx0 / hbar, args.vpp0 / hbar, 1.0, sign
            )
            alpha = complex(args.mean_x, args.mean_p) / math.sqrt(2.0 * hbar)
        else:  # osc-dimless
            hbar = 1.0
            width = complex_width_from_variances(args.vxx0, args.vpp0, 1.0, sign)
            spec = ExtremalSpec(width=width, sign=sign)
            state = gaussian_from_extremal(spec, args.mean_x, args.mean_p, 1.0)
            contraction = {"phase_contract": contraction_phase_osc(args.vxx0, args.vpp0)}
            w_dimless = width
            alpha = complex(args.mean_x, args.mean_p) / math.sqrt(2.0)
        r, theta = squeeze_from_complex_width(w_dimless)
        beta = bogoliubov_eigenvalue(alpha, r, theta)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    record = {
        "system": args.system,
        "sign": args.sign,
        "hbar": hbar,
        "width": width,
        "state": state.to_dict(),
        **contraction,
        "squeeze": {"r": r, "theta": theta, "alpha": alpha, "beta": beta},
    }
    _write_output(_render_json(record) + "\n", args.output)
    return EXIT_OK


def _parse_times(args) -> list[float]:
    if args.times:
        return [float(tok) for tok in args.times.split(",") if tok.strip()]
    return [j * args.t_max / args.steps for j in range(args.steps + 1)]


def _cmd_oracle(args) -> int:
    sign = _sign_value(args.sign)
    try:
        if args.system == "free":
            model = FreeMass(m=args.m)
            hbar = args.hbar
        elif args.system == "osc":
            model = Oscillator(m=args.m, omega=args.omega)
            hbar = args.hbar
        else:
            model = DimensionlessOscillator(omega=args.omega)
            hbar = 1.0
        times = _parse_times(args)
        spec = ExtremalSpec.from_variances(args.vxx0, args.vpp0, hbar, sign)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    try:
        report = verify_bounds_oracle(
            spec,
            model,
            times,
            mean_x=args.mean_x,
            mean_p=args.mean_p,
            hbar=hbar,
            n=args.n,
            domain_sigmas=args.domain_sigmas,
            n_steps=args.n_steps,
            tolerance=args.tolerance,
        )
        if args.dump_psi:
            sigma = math.sqrt(args.vxx0)
            grid = Grid.centered(args.mean_x, args.domain_sigmas * sigma, args.n)
            psi = sample_extremal(spec, args.mean_x, args.mean_p, grid, hbar)
            _write_output(wavefn_csv(psi), args.dump_psi)
    except (GridError, ConvergenceError) as exc:
        print(f"oracle failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    print(report.render())
    return EXIT_OK if report.ok else EXIT_VERIFY


def _cmd_ozawa(args) -> int:
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except json.JSONDecodeError as exc:
        print(f"config is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        config = OzawaConfig.from_dict(raw)
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    warnings = check_regime(config)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    try:
        trace = run_protocol(config)
    except ConfigError as exc:
        # e.g. auto schedule with a zero-horizon (minimal-uncertainty) meter
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, RuntimeError) as exc:
        print(f"protocol failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    _write_output(trace.to_csv(), args.output)
    if args.strict and warnings:
        return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quvar",
        description="Variance envelopes, contractive states, and measurement protocol tools.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pb = sub.add_parser("bounds", help="envelope table as CSV")
    pb.add_argument("--system", choices=["free", "osc", "osc-dimless"], default="free")
    pb.add_argument("--m", type=float, default=1.0)
    pb.add_argument("--omega", type=float, default=1.0)
    pb.add_argument("--hbar", type=float, default=1.0)
    pb.add_argument("--vxx0", type=float, default=1.0)
    pb.add_argument("--vpp0", type=float, default=1.0)
    pb.add_argument("--t-max", type=float, default=2.0)
    pb.add_argument("--steps", type=int, default=100)
    pb.add_argument("--output", default=None)
    pb.set_defaults(func=_cmd_bounds)

    pe = sub.add_parser("extremal", help="saturating-state record as JSON")
    pe.add_argument("--system", choices=["free", "osc-dimless"], default="osc-dimless")
    pe.add_argument("--sign", choices=["+", "-"], default="+")
    pe.add_argument("--m", type=float, default=1.0)
    pe.add_argument("--hbar", type=float, default=1.0)
    pe.add_argument("--vxx0", type=float, default=1.0)
    pe.add_argument("--vpp0", type=float, default=1.0)
    pe.add_argument("--mean-x", type=float, default=0.0)
    pe.add_argument("--mean-p", type=float, default=0.0)
    pe.add_argument("--output", default=None)
    pe.set_defaults(func=_cmd_extremal)

    po = sub.add_parser("oracle", help="grid-oracle comparison run")
    po.add_argument("--system", choices=["free", "osc", "osc-dimless"], default="free")
    po.add_argument("--m", type=float, default=1.0)
    po.add_argument("--omega", type=float, default=1.0)
    po.add_argument("--hbar", type=float, default=1.0)
    po.add_argument("--vxx0", type=float, default=1.0)
    po.add_argument("--vpp0", type=float, default=1.0)
    po.add_argument("--sign", choices=["+", "-"], default="+")
    po.add_argument("--mean-x", type=float, default=0.0)
    po.add_argument("--mean-p", type=float, default=0.0)
    po.add_argument("--t-max", type=float, default=math.sqrt(3.0))
    po.add_argument("--steps", type=int, default=4)
    po.add_argument("--times", default=None, help="comma-separated list overriding --t-max/--steps")
    po.add_argument("--n", type=int, default=2**14)
    po.add_argument("--domain-sigmas", type=float, default=40.0)
    po.add_argument("--tolerance", type=float, default=1e-8)
    po.add_argument(
        "--n-steps",
        type=int,
        default=None,
        help="split-step count for oscillators; default auto-refines from 4096",
    )
    po.add_argument("--dump-psi", default=None, help="write the initial |psi|^2 as CSV")
    po.set_defaults(func=_cmd_oracle)

    pz = sub.add_parser("ozawa", help="repeated-measurement protocol trace as CSV")
    pz.add_argument("--config", required=True, help="JSON config (see schemas/)")
    pz.add_argument("--strict", action="store_true", help="promote regime warnings to exit 1")
    pz.add_argument("--output", default=None)
    pz.set_defaults(func=_cmd_ozawa)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
