"""Command-line front end.

    ninepoints dim CONFIG -t 2 -d 6
    ninepoints alpha CONFIG --t-range 1-3
    ninepoints verify CONFIG --t-max 8 [--json] [--out report.json]
    ninepoints generate --order 3 [--field 101] [--curve curve.json] [--seed 0]
    ninepoints support --orders 1,2,3,4,5 [--field rationals] [--t-max 8]

Exit codes: 0 success, 2 malformed input, 3 failed mathematical precondition.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from ninepoints import catalog
from ninepoints.cubic import (
    DEFAULT_TORSION_BOUND,
    FINITE_FIELD_NOTE,
    GroupContext,
    PlaneCubic,
    enumerate_points,
    generate_torsion_config,
    ninth_point,
    torsion_order,
)
from ninepoints.errors import CollisionError, InputError, MathError
from ninepoints.fatpoints import alpha_t, dim_symbolic_component
from ninepoints.linalg import QQ, Field
from ninepoints.nineverify import DEFAULT_T_MAX, support_experiment, verify_config
from ninepoints.projective import PointConfiguration, normalize

EXIT_INPUT = 2
EXIT_MATH = 3


@dataclass
class RunConfig:
    command: str
    field: Field | None
    input: Path | None
    out: Path | None
    t_max: int
    d_max: int | None
    seed: int
    bound: int


def parse_field(value) -> Field:
    """'rationals' / 'QQ' or a prime (int, numeric string, or {"prime": p})."""
    if isinstance(value, dict):
        if set(value) != {"prime"}:
            raise InputError(f"bad field object: {value!r}")
        value = value["prime"]
    if isinstance(value, str):
        if value.strip().lower() in ("rationals", "qq", "q"):
            return QQ
        if not value.strip().isdigit():
            raise InputError(f"bad field: {value!r}")
        value = int(value)
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"bad field: {value!r}")
    return Field(value)


def field_to_json(F: Field):
    return "rationals" if F.is_rational else {"prime": F.p}


def _load_json(path: Path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    return data


def load_config(path: Path, field: Field | None = None) -> tuple[PointConfiguration, int | None]:
    """Parse a configuration file; returns the configuration and its uniform multiplicity."""
    data = _load_json(path)
    file_field = parse_field(data.get("field", "rationals"))
    points = data.get("points")
    if not isinstance(points, list):
        raise InputError("'points' must be a list of coordinate lists")
    n = data.get("n")
    if points:
        lengths = {len(p) if isinstance(p, list) else -1 for p in points}
        if len(lengths) != 1 or -1 in lengths:
            raise InputError("every point must be a coordinate list of the same length")
        if n is not None and n != lengths.pop() - 1:
            raise InputError("'n' disagrees with the point coordinates")
    elif n is None:
        n = 2
    t = data.get("multiplicity")
    if t is not None and (isinstance(t, bool) or not isinstance(t, int) or t < 1):
        raise InputError("'multiplicity' must be a positive integer")
    coords = [[file_field(x) for x in p] for p in points]
    F = field or file_field
    if F != file_field:
        coords = [[F(x) for x in p] for p in coords]
    mult = None if t is None else [t] * len(coords)
    return PointConfiguration.from_coords(coords, F, mult, n), t


def config_to_json(config: PointConfiguration, meta: dict | None = None) -> dict:
    out = {"field": field_to_json(config.field),
           "points": [[str(x) for x in P.coords] for P in config.points],
           "multiplicity": config.multiplicities[0] if config.points else 1}
    if meta:
        out["meta"] = meta
    return out


def parse_range(text: str) -> list[int]:
    """'1-3' or '1,2,5'."""
    try:
        if "-" in text:
            lo, hi = text.split("-", 1)
            values = list(range(int(lo), int(hi) + 1))
        else:
            values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"bad range: {text!r}") from exc
    if not values or min(values) < 1:
        raise InputError(f"range must be nonempty and positive: {text!r}")
    return values


def dump_json(obj, indent: int = 0) -> str:
    """JSON with flat lists of scalars kept on one line."""
    pad, inner = " " * indent, " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dump_json(v, indent + 2)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return json.dumps(obj)
        items = [inner + dump_json(v, indent + 2) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj)


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_dim(args, run: RunConfig):
    config, file_t = load_config(run.input, run.field)
    t = args.t if args.t is not None else (file_t or 1)
    if args.d is None:
        raise InputError("dim needs a degree (-d)")
    _emit(f"{dim_symbolic_component(config, t, args.d)}\n", run.out)


def cmd_alpha(args, run: RunConfig):
    config, _ = load_config(run.input, run.field)
    lines = ["t,alpha_t"]
    for t in parse_range(args.t_range):
        a = alpha_t(config, t, run.d_max)
        lines.append(f"{t},{'' if a is None else a}")
    _emit("\n".join(lines) + "\n", run.out)


def cmd_verify(args, run: RunConfig):
    config, _ = load_config(run.input, run.field)
    report = verify_config(config, run.t_max, run.bound)
    payload = dump_json(report.to_dict()) + "\n"
    if run.out is not None:
        Path(run.out).write_text(payload)
    sys.stdout.write(payload if args.json else report.table())


def _generate_from_curve_file(path: Path, order: int | None, seed: int, bound: int):
    data = _load_json(path)
    F = parse_field(data.get("field", "rationals"))
    form = data.get("curve")
    if not isinstance(form, dict):
        raise InputError("curve file needs a 'curve' object")
    if "weierstrass" in form:
        ainvs = [F(x) for x in form["weierstrass"]]
        if len(ainvs) != 5:
            raise InputError("'weierstrass' takes [a1, a2, a3, a4, a6]")
        curve = PlaneCubic.weierstrass(*ainvs, field=F)
    elif "coefficients" in form:
        curve = PlaneCubic(tuple(F(x) for x in form["coefficients"]), F)
    else:
        raise InputError("'curve' needs 'weierstrass' or 'coefficients'")
    base = normalize(data.get("base", [0, 1, 0]), F)
    ctx = GroupContext(curve, base)
    if "target" not in data:
        raise InputError("curve file needs a 'target' point")
    target = ctx.check(normalize(data["target"], F))
    report = torsion_order(ctx, target, max(bound, order or 1))
    if report.order is None or (order is not None and report.order != order):
        raise MathError(f"target point has order {report.order}, expected {order}")
    if "points" in data:
        pool = [ctx.check(normalize(p, F)) for p in data["points"]]
    elif not F.is_rational:
        pool = [P for P in enumerate_points(curve) if P != base]
    else:
        raise InputError("over the rationals the curve file must list seed 'points'")
    pool = sorted(set(pool) - {base}, key=lambda P: str(P.coords))
    if len(pool) < 8:
        raise InputError("need at least eight seed points")
    rng = random.Random(seed)
    for _ in range(50):
        seeds = rng.sample(pool, 8)
        if ninth_point(ctx, seeds, target) not in seeds:
            config = generate_torsion_config(ctx, seeds, target, max(bound, report.order))
            return config, curve, target, report.order
    raise CollisionError("could not avoid a collision between seeds and the ninth point")


def cmd_generate(args, run: RunConfig):
    if args.curve is not None:
        config, curve, target, order = _generate_from_curve_file(
            args.curve, args.order, run.seed, run.bound)
        F = config.field
    else:
        if args.order is None:
            raise InputError("generate needs --order or --curve")
        gen = catalog.generate_config(args.order, run.field or QQ, run.seed)
        config, curve, target, order, F = gen.config, gen.curve, gen.target, gen.order, gen.field
    meta = {"order": order, "field": field_to_json(F),
            "curve": [str(c) for c in curve.coeffs],
            "target": [str(x) for x in target.coords]}
    if not F.is_rational:
        meta["note"] = FINITE_FIELD_NOTE
    _emit(dump_json(config_to_json(config, meta)) + "\n", run.out)


def cmd_support(args, run: RunConfig):
    orders = parse_range(args.orders) if args.orders else []
    summary = support_experiment(orders, run.field or QQ, run.t_max, run.seed)
    _emit(summary.to_csv(), run.out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="'rationals' or a prime p (default: from input)")
    common.add_argument("--t-max", type=int, default=DEFAULT_T_MAX)
    common.add_argument("--d-max", type=int, default=None)
    common.add_argument("--bound", type=int, default=DEFAULT_TORSION_BOUND,
                        help="torsion search bound K")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", type=Path, default=None)

    parser = argparse.ArgumentParser(
        prog="ninepoints",
        description="Symbolic powers of fat points and nine points on plane cubics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", parents=[common], help="dim of [I^(t)]_d")
    p.add_argument("config", type=Path)
    p.add_argument("-t", type=int, default=None)
    p.add_argument("-d", type=int, default=None)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("alpha", parents=[common], help="alpha_t table as CSV")
    p.add_argument("config", type=Path)
    p.add_argument("--t-range", default="1-3")
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("verify", parents=[common], help="group law vs rank oracle")
    p.add_argument("config", type=Path)
    p.add_argument("--json", action="store_true", help="print the JSON report instead of a table")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", parents=[common], help="configuration with prescribed torsion")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--curve", type=Path, default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("support", parents=[common], help="first-jump thresholds per torsion order")
    p.add_argument("--orders", default="")
    p.set_defaults(func=cmd_support)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        for name in ("t_max", "bound"):
            if getattr(args, name) < 1:
                raise InputError(f"--{name.replace('_', '-')} must be at least 1")
        if args.d_max is not None and args.d_max < 1:
            raise InputError("--d-max must be at least 1")
        run = RunConfig(
            command=args.command,
            field=parse_field(args.field) if args.field is not None else None,
            input=getattr(args, "config", None),
            out=args.out,
            t_max=args.t_max,
            d_max=args.d_max,
            seed=args.seed,
            bound=args.bound,
        )
        args.func(args, run)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    return 0


if __name__ == "__main__":
    sys.exit(main())
