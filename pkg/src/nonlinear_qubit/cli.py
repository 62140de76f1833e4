"""Command-line front end: curve data and crossover reports as CSV or JSON.

Exit codes: 0 success, 1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .integrate import DEFAULT_QUAD, FunctionalFormError, QuadratureSpec
from .optimize import NoCrossingError
from .scenarios import (
    DEFAULT_POINTS,
    ScenarioRequest,
    crossover_report,
    parse_scheme,
    run,
    scheme_label,
    sweep,
)

OPTIMUM_COLUMNS = ("opt_value", "opt_x", "opt_y", "opt_z_re", "opt_z_im", "chi", "regime")
CROSSOVER_COLUMNS = ("family", "curve_a", "curve_b", "location")


class UsageError(Exception):
    pass


def fmt(value) -> str:
    if isinstance(value, str):
        return value
    return f"{value:.12g}"


def _json_value(value):
    if isinstance(value, str):
        return value
    return float(fmt(value))


def parse_range(text: str, flag: str) -> tuple[float, float, int]:
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise UsageError(f"{flag}: expected lo:hi:n, got {text!r}") from None
    if n < 2 or not hi > lo or not (math.isfinite(lo) and math.isfinite(hi)):
        raise UsageError(f"{flag}: need lo < hi and n >= 2")
    return lo, hi, n


def _add_common(p: argparse.ArgumentParser, default_schemes: str) -> None:
    p.add_argument("--schemes", default=default_schemes, help="comma-separated: rho1,rho2,rho3,sigma1,sigma2,quantum_optimal,quantum_fixed:x:y:re:im")
    p.add_argument("--quad-order", type=int, default=None, help="node count for every quadrature axis (default 64)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default="-", help="output path (default stdout)")


def _add_param(p: argparse.ArgumentParser, name: str, default: float | None, help_text: str) -> None:
    p.add_argument(f"--{name}", type=float, default=default, help=help_text)
    p.add_argument(f"--sweep-{name}", metavar="LO:HI:N", default=None, help=f"sweep {name} over LO..HI with N points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonlinear-qubit", description="Optimal average fidelities of nonlinear qubit maps (angles in radians).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rotation", help="rotate theta < delta by +beta and the rest by -beta")
    _add_param(p, "delta", math.pi / 2, "cap boundary in [0, pi]")
    _add_param(p, "beta", 0.0, "rotation angle")
    _add_common(p, "quantum_optimal")

    p = sub.add_parser("orthog", help="ORTHOG on the polar caps theta < delta and theta > pi - delta")
    _add_param(p, "delta", math.pi / 2, "cap half-angle in [0, pi/2]")
    p.add_argument("--crossovers", action="store_true", help="report identity/bit_flip and best-preparation switches")
    _add_common(p, "quantum_optimal")

    p = sub.add_parser("general", help="theta -> theta - alpha on theta < delta, identity elsewhere")
    _add_param(p, "delta", math.pi, "cap boundary in [0, pi]")
    _add_param(p, "alpha", None, "polar shift in [0, pi]")
    p.add_argument("--compare-universal", action="store_true", help="add the cos^2(alpha/2) identity baseline column")
    p.add_argument("--crossovers", action="store_true", help="report best-preparation switches over delta (or the universal departure with --sweep-alpha)")
    _add_common(p, "quantum_optimal")

    p = sub.add_parser("baseline", help="whole-sphere shift theta -> theta - alpha")
    _add_param(p, "alpha", None, "polar shift in [0, pi]")
    _add_common(p, "sigma1,sigma2")
    return parser


def _quad(args) -> QuadratureSpec:
    if args.quad_order is None:
        return DEFAULT_QUAD
    if args.quad_order < 4:
        raise UsageError("--quad-order must be at least 4")
    return QuadratureSpec.of_order(args.quad_order)


def _schemes(args, family: str) -> tuple:
    try:
        schemes = tuple(parse_scheme(tok) for tok in args.schemes.split(",") if tok.strip())
    except ValueError as exc:
        raise UsageError(f"--schemes: {exc}") from None
    if not schemes:
        raise UsageError("--schemes: at least one scheme is required")
    if "rho3" in schemes and family != "rotation":
        raise UsageError("--schemes: rho3 is only available for rotation")
    return schemes


_LIMITS = {
    ("rotation", "delta"): (0.0, math.pi),
    ("orthog", "delta"): (0.0, math.pi / 2),
    ("general", "delta"): (0.0, math.pi),
    ("general", "alpha"): (0.0, math.pi),
    ("linear_baseline", "alpha"): (0.0, math.pi),
}


def _check_range(family: str, name: str, lo: float, hi: float) -> None:
    limits = _LIMITS.get((family, name))
    if limits is None:
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise UsageError(f"--{name} must be finite")
        return
    a, b = limits
    if lo < a - 1e-12 or hi > b + 1e-6 or not (math.isfinite(lo) and math.isfinite(hi)):
        raise UsageError(f"--{name} must lie in [{a:.6g}, {b:.6g}]")


def _resolve(args, family: str, names: tuple[str, ...]):
    """Fixed parameter values plus at most one sweep ``(name, lo, hi, n)``."""
    fixed, swept = {}, None
    for name in names:
        value = getattr(args, name)
        rng = getattr(args, f"sweep_{name}")
        if rng is not None:
            if swept is not None:
                raise UsageError(f"--sweep-{name}: only one parameter can be swept")
            lo, hi, n = parse_range(rng, f"--sweep-{name}")
            _check_range(family, name, lo, hi)
            swept = (name, lo, hi, n)
            fixed[name] = lo
        elif value is None:
            raise UsageError(f"--{name} or --sweep-{name} is required")
        else:
            _check_range(family, name, value, value)
            fixed[name] = value
    return fixed, swept


def _points(template: ScenarioRequest, swept, abscissa_name: str):
    if swept is None:
        return [run(template, abscissa=getattr(template, abscissa_name))]
    name, lo, hi, n = swept
    return sweep(template, name, lo, hi, n)


def _rows(points, param_names, template: ScenarioRequest, swept, universal: bool):
    labels = [scheme_label(s) for s in template.schemes]
    has_opt = "quantum_optimal" in labels
    header = ["abscissa", *param_names, *labels]
    if universal:
        header.append("universal")
    if has_opt:
        header.extend(OPTIMUM_COLUMNS)
    rows = []
    for pt in points:
        params = {name: getattr(template, name) for name in param_names}
        if swept is not None:
            params[swept[0]] = pt.abscissa
        row = {"abscissa": pt.abscissa, **params}
        row.update({k: pt.fidelities[k] for k in labels})
        if universal:
            row["universal"] = math.cos(params["alpha"] / 2) ** 2
        if has_opt:
            opt = pt.optimum
            row.update(
                opt_value=opt.value,
                opt_x=opt.best.x,
                opt_y=opt.best.y,
                opt_z_re=opt.best.z.real,
                opt_z_im=opt.best.z.imag,
                chi=opt.chi,
                regime=opt.regime,
            )
        rows.append(row)
    return header, rows


def render(header, rows, fmt_name: str) -> str:
    if fmt_name == "json":
        data = [{k: _json_value(r[k]) for k in header} for r in rows]
        return json.dumps(data, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([fmt(r[k]) for k in header])
    return buf.getvalue()


def _crossover_rows(family: str, report):
    rows = [{"family": family, "curve_a": a, "curve_b": b, "location": loc} for (a, b), loc in report]
    return list(CROSSOVER_COLUMNS), rows


def _curve_command(args, family: str, names: tuple[str, ...], abscissa_name: str):
    quad = _quad(args)
    schemes = _schemes(args, family)
    fixed, swept = _resolve(args, family, names)
    template = ScenarioRequest(family=family, schemes=schemes, quad=quad, **fixed)
    points = _points(template, swept, swept[0] if swept else abscissa_name)
    universal = getattr(args, "compare_universal", False)
    return _rows(points, names, template, swept, universal)


def cmd_rotation(args):
    return _curve_command(args, "rotation", ("delta", "beta"), "delta")


def cmd_orthog(args):
    if args.crossovers:
        return _crossover_rows("orthog", crossover_report("orthog", q=_quad(args)))
    return _curve_command(args, "orthog", ("delta",), "delta")


def cmd_general(args):
    if args.crossovers:
        quad = _quad(args)
        if args.sweep_alpha is not None or args.alpha is None:
            return _crossover_rows("general", crossover_report("general", q=quad))
        _check_range("general", "alpha", args.alpha, args.alpha)
        return _crossover_rows("general", crossover_report("general", alpha=args.alpha, q=quad))
    return _curve_command(args, "general", ("delta", "alpha"), "delta")


def cmd_baseline(args):
    if args.alpha is None and args.sweep_alpha is None:
        args.sweep_alpha = f"0:{math.pi!r}:{DEFAULT_POINTS}"
    return _curve_command(args, "linear_baseline", ("alpha",), "alpha")


COMMANDS = {"rotation": cmd_rotation, "orthog": cmd_orthog, "general": cmd_general, "baseline": cmd_baseline}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        header, rows = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (FunctionalFormError, NoCrossingError, ArithmeticError) as exc:
        print(f"nonlinear-qubit: numerical failure: {exc}", file=sys.stderr)
        return 1
    text = render(header, rows, args.format)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
