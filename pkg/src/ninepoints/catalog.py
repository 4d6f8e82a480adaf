"""Curves carrying torsion points of prescribed order, and nine-point configurations on them.

Over QQ the curves are Tate normal forms E(b, c) (plus two classical families
for orders 2 and 3) chosen so that the Mordell-Weil group has positive rank and
a generator of small height; every datum is re-verified when a setup is built.
Over GF(p) curves are drawn at random until the group order is divisible by
the target order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from ninepoints.cubic import (
    DEFAULT_TORSION_BOUND,
    FINITE_FIELD_NOTE,
    GroupContext,
    PlaneCubic,
    enumerate_points,
    generate_torsion_config,
    is_smooth,
    ninth_point,
    torsion_order,
)
from ninepoints.errors import CollisionError, InconsistencyError, MathError, RealizabilityError
from ninepoints.linalg import QQ, Field, is_prime
from ninepoints.projective import PointConfiguration, ProjectivePoint, integral_coords, normalize


@dataclass(frozen=True)
class CatalogCurve:
    """Weierstrass curve over QQ with a point of exact order ``order`` and a point of infinite order."""

    order: int
    ainvs: tuple  # (a1, a2, a3, a4, a6)
    torsion_point: tuple
    generator: tuple


def _q(*xs):
    return tuple(Fraction(x) for x in xs)


RATIONAL_CURVES = {
    2: CatalogCurve(2, _q(0, -2, 0, -4, 0), (0, 0, 1), (-1, 1, 1)),
    3: CatalogCurve(3, _q(-2, 0, 2, 0, 0), (0, 0, 1), (1, 1, 1)),
    4: CatalogCurve(4, _q(1, "3/2", "3/2", 0, 0), (0, 0, 1), (1, 1, -1)),
    5: CatalogCurve(5, _q("2/3", "-1/3", "-1/3", 0, 0), (0, 0, 1), (1, -1, 1)),
    6: CatalogCurve(6, _q("-1/2", "-15/4", "-15/4", 0, 0), (0, 0, 1), (3, 3, 1)),
    7: CatalogCurve(7, _q("-61/16", "539/64", "539/64", 0, 0), (0, 0, 1), (11, "-11/2", -2)),
    8: CatalogCurve(8, _q("17/2", "-15/8", "-15/8", 0, 0), (0, 0, 1), (5, "-5/2", -2)),
    9: CatalogCurve(9, _q("-1/8", "-63/32", "-63/32", 0, 0), (0, 0, 1), (3, "3/2", 2)),
    10: CatalogCurve(10, _q("221/11", "-10290/121", "-10290/121", 0, 0), (0, 0, 1),
                     (140, 350, 1)),
    12: CatalogCurve(12, _q("1/27", "-130/81", "-130/81", 0, 0), (0, 0, 1), (10, "-100/9", 3)),
}


def rational_orders() -> tuple:
    """Orders realizable from the catalog over QQ (1 uses the trivial class)."""
    return (1,) + tuple(sorted(RATIONAL_CURVES))


@dataclass(frozen=True)
class TorsionSetup:
    ctx: GroupContext
    target: ProjectivePoint
    order: int
    pool: tuple  # candidate seed points, smallest height first


@dataclass(frozen=True)
class GeneratedConfig:
    config: PointConfiguration
    curve: PlaneCubic
    target: ProjectivePoint
    order: int
    field: Field

    @property
    def scope_note(self) -> str:
        return "" if self.field.is_rational else FINITE_FIELD_NOTE


def height(P: ProjectivePoint) -> int:
    if P.field.is_rational:
        return max(abs(v) for v in integral_coords(P))
    return 0


def _catalog_curve_for(order: int) -> CatalogCurve:
    if order in RATIONAL_CURVES:
        return RATIONAL_CURVES[order]
    # orders dividing a catalog order use a multiple of its torsion point
    for d in sorted(RATIONAL_CURVES):
        if d % order == 0:
            return RATIONAL_CURVES[d]
    raise RealizabilityError(f"no catalog curve over QQ has a rational point of order {order}")


def rational_setup(order: int, radius: int | None = None) -> TorsionSetup:
    if order == 1:
        entry = RATIONAL_CURVES[5]
    else:
        entry = _catalog_curve_for(order)
    curve = PlaneCubic.weierstrass(*entry.ainvs)
    ctx = GroupContext(curve, normalize([0, 1, 0]))
    T0 = normalize(entry.torsion_point)
    G = ctx.check(normalize(entry.generator))
    if torsion_order(ctx, T0).order != entry.order:
        raise InconsistencyError(f"catalog torsion point for order {entry.order} is wrong")
    if not torsion_order(ctx, G).infinite:
        raise InconsistencyError(f"catalog generator for order {entry.order} is torsion")
    target = ctx.mul(entry.order // order, T0) if order > 1 else ctx.base
    if radius is None:
        radius = 2 if entry.order >= 4 else 3
    pool = set()
    torsion = [ctx.mul(j, T0) for j in range(entry.order)]
    for k in range(-radius, radius + 1):
        kG = ctx.mul(k, G)
        for tj in torsion:
            pool.add(ctx.add(kG, tj))
    pool.discard(ctx.base)
    ordered = sorted(pool, key=lambda P: (height(P), str(P)))
    return TorsionSetup(ctx, target, order, tuple(ordered))


def finite_field_setup(order: int, field: Field | None = None, rng: random.Random | None = None,
                       start_p: int = 101, curve_tries: int = 60) -> TorsionSetup:
    """Random Weierstrass curve over GF(p) with a point of exact order ``order``.

    When ``field`` is None, primes are scanned upward from ``start_p``.
    """
    rng = rng or random.Random(0)
    if field is not None:
        if field.is_rational:
            raise RealizabilityError("finite_field_setup needs a prime field")
        primes = [field.p]
    else:
        primes = _primes_from(max(start_p, 5), 40)
    for p in primes:
        # need room for nine distinct points besides O
        if p + 1 + 2 * int(p ** 0.5) < max(order, 12):
            continue
        F = Field(p)
        for _ in range(curve_tries):
            ainvs = [rng.randrange(p) for _ in range(5)]
            curve = PlaneCubic.weierstrass(*ainvs, field=F)
            if not is_smooth(curve):
                continue
            pts = enumerate_points(curve)
            N = len(pts)
            if N % order or N < 12:
                continue
            ctx = GroupContext(curve, normalize([0, 1, 0], F))
            target = _point_of_order(ctx, pts, N, order, rng)
            if target is None:
                continue
            pool = tuple(P for P in pts if P != ctx.base)
            return TorsionSetup(ctx, target, order, pool)
    where = str(field) if field is not None else f"primes from {start_p}"
    raise RealizabilityError(f"no curve with a point of order {order} found over {where}")


def _primes_from(start: int, count: int) -> list[int]:
    out, q = [], start
    while len(out) < count:
        if is_prime(q):
            out.append(q)
        q += 1
    return out


def _point_of_order(ctx: GroupContext, pts, N: int, order: int, rng: random.Random):
    if order == 1:
        return ctx.base
    for _ in range(20):
        T = ctx.mul(N // order, rng.choice(pts))
        rep = torsion_order(ctx, T, max(order, DEFAULT_TORSION_BOUND))
        if rep.order == order:
            return T
    return None


def generate(setup: TorsionSetup, seed: int = 0, tries: int = 40) -> GeneratedConfig:
    """Pick eight seeds from the pool and complete them to a configuration of class ``target``.

    Over QQ the lowest-height candidate among ``tries`` random draws is kept,
    which keeps the interpolation matrices small.
    """
    ctx = setup.ctx
    rng = random.Random(seed)
    pool = list(setup.pool)
    if len(pool) < 8:
        raise RealizabilityError("seed pool has fewer than eight points")
    best = None
    for _ in range(tries):
        seeds = rng.sample(pool, 8)
        P9 = ninth_point(ctx, seeds, setup.target)
        if P9 in seeds:
            continue
        h = max(height(P) for P in seeds + [P9])
        if best is None or h < best[0]:
            best = (h, seeds)
        if not ctx.field.is_rational:
            break
    if best is None:
        raise CollisionError("every seed draw collided with its ninth point")
    config = generate_torsion_config(ctx, best[1], setup.target,
                                     max(setup.order, DEFAULT_TORSION_BOUND))
    return GeneratedConfig(config, ctx.curve, setup.target, setup.order, ctx.field)


def generate_config(order: int, field: Field = QQ, seed: int = 0) -> GeneratedConfig:
    """Configuration whose class has exact order ``order``.

    Over QQ, orders outside the catalog route to a finite field automatically.
    """
    if order < 1:
        raise RealizabilityError(f"torsion order must be positive, got {order}")
    if field.is_rational:
        try:
            setup = rational_setup(order)
        except RealizabilityError:
            setup = finite_field_setup(order, None, random.Random(seed))
    else:
        setup = finite_field_setup(order, field, random.Random(seed))
    for attempt in range(5):
        try:
            return generate(setup, seed + attempt)
        except (CollisionError, MathError) as exc:
            last = exc
    raise last
