"""Plane cubics: fitting, smoothness, the chord-tangent group law, and Pic^0 classes.

Curve points are ordinary :class:`ProjectivePoint` values lying on the cubic.
The group law uses an arbitrary base point O:

    P * Q   third intersection of the line PQ (tangent if P = Q) with C
    P + Q = O * (P * Q),    -P = P * (O * O)

so no inflection point is needed.  Under the Abel map with base O a point Q
stands for the degree-zero class Q - O.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from ninepoints.errors import (
    AmbiguousCubicError,
    CoincidentPointsError,
    CollisionError,
    InconsistencyError,
    InputError,
    InsufficientBoundError,
    InvalidDivisorError,
    NotOnCurveError,
    RealizabilityError,
    SingularCubicError,
)
from ninepoints.fatpoints import conditions_matrix
from ninepoints.linalg import QQ, ExactMatrix, Field, nullspace, rank
from ninepoints.projective import PointConfiguration, ProjectivePoint, monomials, normalize

CUBIC_MONOMIALS = monomials(2, 3)
# largest torsion order of a rational point on an elliptic curve over QQ (Mazur)
MAZUR_BOUND = 12
MAZUR_ORDERS = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12)
DEFAULT_TORSION_BOUND = 36
# results over GF(p) go beyond the proven (characteristic-zero) setting
FINITE_FIELD_NOTE = "extension beyond proven scope (finite field)"


@dataclass(frozen=True)
class PlaneCubic:
    """Ternary cubic form; coefficients follow ``monomials(2, 3)`` and the first
    nonzero one is scaled to 1."""

    coeffs: tuple
    field: Field = field(default=QQ, compare=False)

    def __post_init__(self):
        if len(self.coeffs) != 10:
            raise InputError("a ternary cubic has 10 coefficients")
        cs = [self.field(c) for c in self.coeffs]
        lead = next((c for c in cs if c), None)
        if lead is None:
            raise InputError("the zero form is not a cubic")
        object.__setattr__(self, "coeffs", tuple(c / lead for c in cs))

    @classmethod
    def weierstrass(cls, a1=0, a2=0, a3=0, a4=0, a6=0, field: Field = QQ) -> "PlaneCubic":
        """y^2 z + a1 xyz + a3 yz^2 = x^3 + a2 x^2 z + a4 xz^2 + a6 z^3 in (x : y : z)."""
        terms = {(0, 2, 1): 1, (1, 1, 1): a1, (0, 1, 2): a3,
                 (3, 0, 0): -1, (2, 0, 1): -a2, (1, 0, 2): -a4, (0, 0, 3): -a6}
        return cls(tuple(field(terms.get(m, 0)) for m in CUBIC_MONOMIALS), field)

    def __call__(self, P) -> object:
        x = P.coords if isinstance(P, ProjectivePoint) else tuple(P)
        s = self.field.zero
        for c, (i, j, k) in zip(self.coeffs, CUBIC_MONOMIALS):
            if c:
                s += c * x[0] ** i * x[1] ** j * x[2] ** k
        return s

    @cached_property
    def _partials(self):
        # partials[v] = list of (coefficient, exponent) for dF/dx_v
        out = []
        for v in range(3):
            terms = []
            for c, m in zip(self.coeffs, CUBIC_MONOMIALS):
                if c and m[v]:
                    e = list(m)
                    e[v] -= 1
                    terms.append((c * m[v], tuple(e)))
            out.append(terms)
        return out

    def gradient(self, P) -> tuple:
        x = P.coords if isinstance(P, ProjectivePoint) else tuple(P)
        F = self.field
        out = []
        for terms in self._partials:
            s = F.zero
            for c, (i, j, k) in terms:
                s += c * x[0] ** i * x[1] ** j * x[2] ** k
            out.append(s)
        return tuple(out)

    def partial_quadrics(self) -> list[list]:
        """Coefficients of the three partial derivatives in the ``monomials(2, 2)`` basis."""
        quad = monomials(2, 2)
        F = self.field
        out = []
        for terms in self._partials:
            row = [F.zero] * len(quad)
            for c, e in terms:
                row[quad.index(e)] += c
            out.append(row)
        return out

    def contains(self, P) -> bool:
        return not self(P)

    def __str__(self):
        names = ("x", "y", "z")
        parts = []
        for c, m in zip(self.coeffs, CUBIC_MONOMIALS):
            if not c:
                continue
            mono = "*".join(f"{names[v]}^{e}" if e > 1 else names[v]
                            for v, e in enumerate(m) if e)
            parts.append(f"({c})*{mono}")
        return " + ".join(parts)


def cubics_through(points: Sequence[ProjectivePoint]) -> list[PlaneCubic]:
    """Basis of the cubic forms vanishing at the given simple points."""
    pts = tuple(points)
    if len(set(pts)) != len(pts):
        raise CoincidentPointsError("points must be pairwise distinct")
    field = pts[0].field if pts else QQ
    config = PointConfiguration(2, pts, None, field)
    basis = nullspace(conditions_matrix(config, 3).matrix)
    return [PlaneCubic(tuple(v), field) for v in basis]


def fit_cubic(points: Sequence[ProjectivePoint]) -> PlaneCubic:
    """The unique cubic through nine distinct points."""
    if len(points) != 9:
        raise InputError("fit_cubic expects exactly nine points")
    basis = cubics_through(points)
    if len(basis) != 1:
        raise AmbiguousCubicError(
            f"{len(basis)}-dimensional space of cubics through the points", basis)
    return basis[0]


def macaulay_matrix(C: PlaneCubic) -> ExactMatrix:
    """Quadric multiples of the partials of C, as an 18 x 15 matrix on degree-4 monomials."""
    quad, quart = monomials(2, 2), monomials(2, 4)
    index = {m: i for i, m in enumerate(quart)}
    F = C.field
    rows = []
    for partial in C.partial_quadrics():
        for g in quad:
            row = [F.zero] * len(quart)
            for c, e in zip(partial, quad):
                if c:
                    row[index[tuple(a + b for a, b in zip(g, e))]] += c
            rows.append(row)
    return ExactMatrix.from_rows(rows, F)


def is_smooth(C: PlaneCubic) -> bool:
    """True iff the partials of C have no common zero over the algebraic closure.

    Three ternary quadrics without common zero form a regular sequence, so their
    quadric multiples span all quartics; a common zero P confines the span to
    quartics vanishing at P.  Hence smoothness is equivalent to full rank 15.
    """
    return rank(macaulay_matrix(C)) == 15


def singular_points_scan(C: PlaneCubic) -> list[ProjectivePoint]:
    """GF(p)-rational points where all partials vanish (exhaustive)."""
    p = C.field.p
    if p is None:
        raise InputError("exhaustive scan needs a prime field")
    out = []
    for P in _all_points_p2(C.field):
        if C.contains(P) and not any(C.gradient(P)):
            out.append(P)
    return out


def _all_points_p2(F: Field):
    p = F.p
    yield normalize([0, 0, 1], F)
    for y in range(p):
        yield normalize([0, 1, y], F)
    for y in range(p):
        for z in range(p):
            yield normalize([1, y, z], F)


def _on_curve(C: PlaneCubic, P: ProjectivePoint):
    if not C.contains(P):
        raise NotOnCurveError(f"{P} is not on the cubic")


def third_intersection(C: PlaneCubic, P: ProjectivePoint, Q: ProjectivePoint) -> ProjectivePoint:
    """Third point where the line PQ (the tangent at P when P = Q) meets C.

    Restricted to the line {lam*P + mu*R}, F becomes
    lam^3 F(P) + lam^2 mu (R . grad F(P)) + lam mu^2 (P . grad F(R)) + mu^3 F(R).
    """
    F = C.field
    if P != Q:
        a = _dot(Q.coords, C.gradient(P))
        b = _dot(P.coords, C.gradient(Q))
        if not a and not b:
            raise SingularCubicError(f"the line through {P} and {Q} lies on the cubic")
        return normalize([b * x - a * y for x, y in zip(P.coords, Q.coords)], F)
    g = C.gradient(P)
    if not any(g):
        raise SingularCubicError(f"{P} is a singular point")
    R = _second_point_on_line(g, P, F)
    fr = C(R)
    b = _dot(P.coords, C.gradient(R))
    if not fr and not b:
        raise SingularCubicError(f"the tangent at {P} lies on the cubic")
    return normalize([fr * x - b * y for x, y in zip(P.coords, R)], F)


def _dot(u, v):
    s = u[0] * v[0]
    for x, y in zip(u[1:], v[1:]):
        s += x * y
    return s


def _second_point_on_line(g, P: ProjectivePoint, F: Field) -> tuple:
    # points of the line g . X = 0 are cross products of g with coordinate vectors
    for i in range(3):
        e = [F.zero] * 3
        e[i] = F.one
        R = (g[1] * e[2] - g[2] * e[1], g[2] * e[0] - g[0] * e[2], g[0] * e[1] - g[1] * e[0])
        if any(R) and normalize(R, F) != P:
            return R
    raise InconsistencyError("degenerate tangent line")


@dataclass(frozen=True)
class GroupContext:
    """A smooth plane cubic with a chosen base point."""

    curve: PlaneCubic
    base: ProjectivePoint

    def __post_init__(self):
        if not is_smooth(self.curve):
            raise SingularCubicError("the cubic is singular")
        _on_curve(self.curve, self.base)

    @property
    def field(self) -> Field:
        return self.curve.field

    @property
    def zero(self) -> ProjectivePoint:
        return self.base

    def check(self, P: ProjectivePoint) -> ProjectivePoint:
        _on_curve(self.curve, P)
        return P

    def star(self, P, Q):
        return third_intersection(self.curve, P, Q)

    def add(self, P, Q):
        return self.star(self.base, self.star(P, Q))

    def neg(self, P):
        return self.star(P, self.star(self.base, self.base))

    def sub(self, P, Q):
        return self.add(P, self.neg(Q))

    def mul(self, k: int, P):
        """k-fold sum of P by double-and-add; negative k uses -P."""
        if k < 0:
            return self.mul(-k, self.neg(P))
        result, addend = self.base, P
        while k:
            if k & 1:
                result = self.add(result, addend)
            k >>= 1
            if k:
                addend = self.add(addend, addend)
        return result

    def sum(self, points) -> ProjectivePoint:
        acc = self.base
        for P in points:
            acc = self.add(acc, P)
        return acc


def add(ctx: GroupContext, P, Q):
    return ctx.add(P, Q)


def neg(ctx: GroupContext, P):
    return ctx.neg(P)


def scalar_mul(ctx: GroupContext, k: int, P):
    return ctx.mul(k, P)


def divisor_class(ctx: GroupContext, D: Sequence[tuple[ProjectivePoint, int]]) -> ProjectivePoint:
    """The point w with sum(n_i Q_i) ~ w - O, for a degree-zero divisor."""
    if sum(n for _, n in D) != 0:
        raise InvalidDivisorError("divisor must have degree zero")
    acc = ctx.base
    for Q, n in D:
        ctx.check(Q)
        if n:
            acc = ctx.add(acc, ctx.mul(n, Q))
    return acc


def hyperplane_class(ctx: GroupContext, A, B) -> ProjectivePoint:
    """Class of H - 3O, with H cut out by the line through A and B."""
    return ctx.add(ctx.add(A, B), ctx.star(A, B))


def lclass(ctx: GroupContext, S: Sequence[ProjectivePoint], line: tuple[int, int] = (0, 1)):
    """Class of 3H - (P_1 + ... + P_9) in Pic^0 of the curve, as a point.

    H is realized by the line through S[line[0]] and S[line[1]]; the class does
    not depend on that choice.
    """
    if len(S) != 9 or len(set(S)) != 9:
        raise CoincidentPointsError("lclass expects nine distinct points")
    for P in S:
        ctx.check(P)
    A, B = S[line[0]], S[line[1]]
    H = [(A, 3), (B, 3), (ctx.star(A, B), 3)]
    return divisor_class(ctx, H + [(P, -1) for P in S])


@dataclass(frozen=True)
class TorsionReport:
    """Order of a class point, searched up to a bound.

    Over QQ, ``infinite`` certifies non-torsion: no multiple up to 12 vanished,
    and a rational torsion point on an elliptic curve over QQ has order at
    most 12 (Mazur).  ``searched`` is the largest multiple actually tested.
    """

    point: ProjectivePoint
    order: int | None
    bound: int
    searched: int
    infinite: bool = False

    def to_dict(self) -> dict:
        return {"point": [str(x) for x in self.point.coords], "order": self.order,
                "bound": self.bound, "searched": self.searched, "infinite": self.infinite}


def torsion_order(ctx: GroupContext, w: ProjectivePoint, K: int = DEFAULT_TORSION_BOUND):
    if K < 1:
        raise InputError("torsion bound must be positive")
    ctx.check(w)
    limit = MAZUR_BOUND if ctx.field.is_rational else K
    acc = w
    for k in range(1, limit + 1):
        if acc == ctx.base:
            return TorsionReport(w, k, K, k)
        acc = ctx.add(acc, w)
    return TorsionReport(w, None, K, limit, infinite=ctx.field.is_rational)


def gamma(report: TorsionReport, k: int) -> int:
    """1 iff k times the class vanishes."""
    if k < 1:
        raise InputError("k must be positive")
    if report.order is not None:
        return int(k % report.order == 0)
    if report.infinite or k <= report.searched:
        return 0
    raise InsufficientBoundError(f"no torsion found up to {report.searched}; k={k} is beyond it")


def ninth_point(ctx: GroupContext, seeds: Sequence[ProjectivePoint], T: ProjectivePoint):
    """The point P_9 with 3H - (P_1 + ... + P_9) ~ T - O."""
    h = hyperplane_class(ctx, seeds[0], seeds[1])
    return ctx.sub(ctx.sub(ctx.mul(3, h), ctx.sum(seeds)), T)


def generate_torsion_config(ctx: GroupContext, seeds: Sequence[ProjectivePoint],
                            T: ProjectivePoint, K: int = DEFAULT_TORSION_BOUND):
    """Nine points on the curve whose class 3H - sum(P_i) equals T.

    When T = O the nine points are the base locus of a pencil of cubics; the
    check then asks for exactly a pencil containing the curve.
    """
    seeds = tuple(ctx.check(P) for P in seeds)
    if len(seeds) != 8 or len(set(seeds)) != 8:
        raise CoincidentPointsError("need eight distinct seed points")
    report = torsion_order(ctx, ctx.check(T), K)
    if report.order is None:
        raise RealizabilityError("target class has no finite order within the bound")
    P9 = ninth_point(ctx, seeds, T)
    if P9 in seeds:
        raise CollisionError(f"ninth point {P9} collides with a seed")
    S = seeds + (P9,)
    basis = cubics_through(S)
    expected = 2 if report.order == 1 else 1
    if len(basis) != expected:
        raise AmbiguousCubicError(f"{len(basis)}-dimensional space of cubics; expected {expected}",
                                  basis)
    if expected == 1 and basis[0] != ctx.curve:
        raise InconsistencyError("fitted cubic differs from the generating curve")
    if expected == 2 and not _in_span(ctx.curve, basis):
        raise InconsistencyError("generating curve is not in the pencil through the points")
    if lclass(ctx, S) != T:
        raise InconsistencyError("class of the generated configuration is not the target")
    return PointConfiguration(2, S, None, ctx.field)


def _in_span(C: PlaneCubic, basis: Sequence[PlaneCubic]) -> bool:
    rows = [list(B.coeffs) for B in basis]
    return rank(ExactMatrix.from_rows(rows + [list(C.coeffs)], C.field)) == len(rows)


def smooth_member(basis: Sequence[PlaneCubic], tries: int = 50) -> PlaneCubic | None:
    """A smooth cubic in the span of ``basis``: F, then F + cG for c = 1, -1, 2, ..., then G."""
    F0 = basis[0]
    if len(basis) == 1:
        return F0 if is_smooth(F0) else None
    G = basis[1]
    field = F0.field
    for s in [0] + [c * sign for c in range(1, tries) for sign in (1, -1)]:
        coeffs = [a + field(s) * b for a, b in zip(F0.coeffs, G.coeffs)]
        if any(coeffs) and is_smooth(PlaneCubic(tuple(coeffs), field)):
            return PlaneCubic(tuple(coeffs), field)
    return G if is_smooth(G) else None


def enumerate_points(C: PlaneCubic, max_p: int = 10**4) -> list[ProjectivePoint]:
    """All GF(p)-rational points of C, scanning the lines x = const in z = 1 and z = 0."""
    F = C.field
    p = F.p
    if p is None:
        raise InputError("point enumeration needs a prime field")
    if p > max_p:
        raise InputError(f"p = {p} exceeds the enumeration limit {max_p}")
    ys = np.arange(p, dtype=np.int64)
    found = []

    def roots_in_y(x0: int, x2: int):
        # coefficients of F(x0, y, x2) as a polynomial in y
        c = [0, 0, 0, 0]
        for coeff, (i, j, k) in zip(C.coeffs, CUBIC_MONOMIALS):
            if coeff:
                c[j] = (c[j] + coeff.v * pow(x0, i, p) * pow(x2, k, p)) % p
        vals = np.full(p, c[3], dtype=np.int64)
        for e in (2, 1, 0):
            vals = (vals * ys + c[e]) % p
        return np.flatnonzero(vals == 0).tolist()

    for x in range(p):
        for y in roots_in_y(x, 1):
            found.append(normalize([x, y, 1], F))
    for y in roots_in_y(1, 0):
        found.append(normalize([1, y, 0], F))
    if not C((F.zero, F.one, F.zero)):
        found.append(normalize([0, 1, 0], F))
    return sorted(set(found), key=lambda P: tuple(x.v for x in P.coords))
