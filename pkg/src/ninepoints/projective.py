"""Points of projective space, monomial bases, Hasse derivatives, and projective frames."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb, gcd
from typing import Sequence

from ninepoints.errors import (
    CoincidentPointsError,
    InputError,
    InvalidPointError,
    InvalidTransformError,
    NotInGeneralPositionError,
    UnsupportedSizeError,
)
from ninepoints.linalg import QQ, ExactMatrix, Field, _infer_field, inverse, rank


@dataclass(frozen=True)
class ProjectivePoint:
    """Homogeneous coordinates with the first nonzero coordinate equal to 1.

    Build instances with :func:`normalize`; the constructor trusts its input.
    """

    coords: tuple

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    @property
    def field(self) -> Field:
        return Field.of(self.coords[0])

    @property
    def chart(self) -> int:
        """Index of the coordinate normalized to 1."""
        return next(i for i, x in enumerate(self.coords) if x)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __str__(self):
        return "(" + ":".join(str(x) for x in self.coords) + ")"


def normalize(raw: Sequence, field: Field | None = None) -> ProjectivePoint:
    """Scale ``raw`` so that its first nonzero coordinate is 1."""
    if isinstance(raw, ProjectivePoint):
        raw = raw.coords
    if field is None:
        field = _infer_field(raw)
    xs = [field(x) for x in raw]
    if len(xs) < 2:
        raise InputError("a projective point needs at least two coordinates")
    lead = next((x for x in xs if x), None)
    if lead is None:
        raise InvalidPointError("all coordinates are zero")
    inv = field.one / lead
    return ProjectivePoint(tuple(x * inv for x in xs))


def integral_coords(P: ProjectivePoint) -> tuple[int, ...]:
    """Primitive integer representative of a point over QQ."""
    den = 1
    for x in P.coords:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [x.numerator * (den // x.denominator) for x in P.coords]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(v // g for v in ints)


@dataclass(frozen=True)
class PointConfiguration:
    """Distinct points of P^n with positive multiplicities."""

    n: int
    points: tuple
    multiplicities: tuple = None
    field: Field = field(default=QQ)

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        mult = self.multiplicities
        mult = (1,) * len(pts) if mult is None else tuple(mult)
        object.__setattr__(self, "multiplicities", mult)
        if self.n < 1:
            raise InputError("ambient dimension must be at least 1")
        if len(mult) != len(pts):
            raise InputError("one multiplicity per point is required")
        if any((not isinstance(t, int)) or t < 1 for t in mult):
            raise InputError("multiplicities must be positive integers")
        for P in pts:
            if not isinstance(P, ProjectivePoint):
                raise InputError("points must be ProjectivePoint instances")
            if P.n != self.n:
                raise InputError(f"point {P} does not live in P^{self.n}")
            if P.field != self.field:
                raise InputError(f"point {P} is not defined over {self.field}")
        if len(set(pts)) != len(pts):
            raise CoincidentPointsError("configuration points must be pairwise distinct")

    @classmethod
    def from_coords(cls, coords: Sequence[Sequence], field: Field = QQ,
                    multiplicities: Sequence[int] | None = None,
                    n: int | None = None) -> "PointConfiguration":
        pts = tuple(normalize(c, field) for c in coords)
        if n is None:
            if not pts:
                raise InputError("ambient dimension needed for an empty configuration")
            n = pts[0].n
        return cls(n, pts, multiplicities, field)

    def __len__(self):
        return len(self.points)

    def with_multiplicity(self, t: int) -> "PointConfiguration":
        return PointConfiguration(self.n, self.points, (t,) * len(self.points), self.field)


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple:
    """Exponent vectors of degree ``d`` in n+1 variables, graded-lex, x_0 largest first."""
    if n < 0 or d < 0:
        raise InputError("monomials need n >= 0 and d >= 0")
    if n == 0:
        return ((d,),)
    return tuple((e,) + rest for e in range(d, -1, -1) for rest in monomials(n - 1, d - e))


def hasse_deriv_eval(a: Sequence[int], b: Sequence[int], P: ProjectivePoint | Sequence):
    """Value at P of the Hasse derivative D^(b) applied to the monomial x^a."""
    coords = P.coords if isinstance(P, ProjectivePoint) else tuple(P)
    if not (len(a) == len(b) == len(coords)):
        raise InputError("exponent vectors and point must have the same length")
    F = Field.of(coords[0])
    c = 1
    for ai, bi in zip(a, b):
        if bi > ai:
            return F.zero
        c *= comb(ai, bi)
    val = F(c)
    for ai, bi, x in zip(a, b, coords):
        if ai > bi:
            val = val * x ** (ai - bi)
    return val


def general_position(config: PointConfiguration) -> bool:
    """True iff every subset of at most n+1 points is linearly independent."""
    n, m = config.n, len(config)
    if m > n + 2:
        raise UnsupportedSizeError(f"general_position supports at most n+2 = {n + 2} points")
    k = min(m, n + 1)
    for subset in combinations(config.points, k):
        if rank(ExactMatrix.from_rows([P.coords for P in subset], config.field)) < k:
            return False
    return True


def pgl_standard_frame(config: PointConfiguration) -> ExactMatrix:
    """Matrix T sending the points to the first m of e_0, ..., e_n, (1, ..., 1)."""
    n, m, F = config.n, len(config), config.field
    if not general_position(config):
        raise NotInGeneralPositionError("points are not in general linear position")
    cols = [list(P.coords) for P in config.points[:n + 1]]
    # pad with coordinate vectors to a basis
    for j in range(n + 1):
        if len(cols) == n + 1:
            break
        e = [F(int(i == j)) for i in range(n + 1)]
        trial = cols + [e]
        if rank(ExactMatrix.from_rows(trial, F)) == len(trial):
            cols.append(e)
    A = ExactMatrix.from_rows(cols, F).transpose()
    Ainv = inverse(A)
    if m < n + 2:
        return Ainv
    # rescale rows so that the last point lands on (1, ..., 1)
    lam = Ainv @ config.points[n + 1].coords
    rows = [[x / lam[i] for x in Ainv.row(i)] for i in range(n + 1)]
    return ExactMatrix.from_rows(rows, F)


def apply_pgl(T: ExactMatrix, config: PointConfiguration) -> PointConfiguration:
    n = config.n
    if T.rows != n + 1 or T.cols != n + 1:
        raise InvalidTransformError(f"transform must be {n + 1}x{n + 1}")
    if T.field != config.field:
        raise InputError(f"transform over {T.field} applied to points over {config.field}")
    if rank(T) < n + 1:
        raise InvalidTransformError("singular transform")
    pts = tuple(normalize(T @ P.coords, config.field) for P in config.points)
    return PointConfiguration(n, pts, config.multiplicities, config.field)


def standard_frame(n: int, m: int, field: Field = QQ) -> tuple:
    """First m points of e_0, ..., e_n, (1, ..., 1)."""
    pts = [normalize([int(i == j) for i in range(n + 1)], field) for j in range(n + 1)]
    pts.append(normalize([1] * (n + 1), field))
    return tuple(pts[:m])
