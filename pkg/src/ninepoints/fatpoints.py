"""Interpolation conditions for fat points and graded pieces of symbolic powers.

A form of degree d lies in the t-th symbolic power of the ideal of a point P
exactly when every Hasse derivative of order < t vanishes at P.  Derivatives
are taken in the affine chart where P has coordinate 1, which gives
C(n + t - 1, n) conditions per point.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable, Iterable

from ninepoints.errors import InconsistencyError, InputError
from ninepoints.linalg import ExactMatrix, rank_integer_rows, rank_mod_p
from ninepoints.projective import (
    PointConfiguration,
    hasse_deriv_eval,
    integral_coords,
    monomials,
)


@dataclass(frozen=True)
class InterpolationMatrix:
    matrix: ExactMatrix
    row_labels: tuple  # (point index, derivative exponent vector)
    col_labels: tuple  # monomials(n, d)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.rows, self.matrix.cols


def derivative_orders(n: int, t: int, chart: int) -> list[tuple]:
    """Exponent vectors b with |b| < t and b[chart] = 0, by degree then graded-lex."""
    return [b for s in range(t) for b in monomials(n, s) if b[chart] == 0]


def conditions_matrix(config: PointConfiguration, d: int) -> InterpolationMatrix:
    """Hasse-derivative vanishing conditions (rows) against degree-d monomials (columns)."""
    if d < 0:
        raise InputError("degree must be nonnegative")
    cols = monomials(config.n, d)
    labels, rows = [], []
    for i, (P, t) in enumerate(zip(config.points, config.multiplicities)):
        for b in derivative_orders(config.n, t, P.chart):
            labels.append((i, b))
            rows.append([hasse_deriv_eval(a, b, P) for a in cols])
    M = ExactMatrix.from_rows(rows, config.field, cols=len(cols))
    return InterpolationMatrix(M, tuple(labels), cols)


def _integer_condition_rows(config: PointConfiguration, d: int, p: int | None):
    """Rows of the conditions matrix as Python ints.

    Over QQ each point is replaced by its primitive integer representative;
    this rescales every row by a nonzero constant, so the rank is unchanged.
    Over GF(p) the entries are residues.
    """
    n = config.n
    cols = monomials(n, d)
    rows = []
    for P, t in zip(config.points, config.multiplicities):
        if p is None:
            c = integral_coords(P)
        else:
            c = tuple(x.v for x in P.coords)
        powers = [[1] * (d + 1) for _ in c]
        for k, x in enumerate(c):
            for e in range(1, d + 1):
                powers[k][e] = powers[k][e - 1] * x if p is None else powers[k][e - 1] * x % p
        for b in derivative_orders(n, t, P.chart):
            row = []
            for a in cols:
                v = 1
                for k in range(n + 1):
                    if b[k] > a[k]:
                        v = 0
                        break
                    v *= comb(a[k], b[k]) * powers[k][a[k] - b[k]]
                row.append(v if p is None else v % p)
            rows.append(row)
    return rows, len(cols)


def dim_symbolic_component(config: PointConfiguration, t: int, d: int) -> int:
    """dim of the degree-d piece of the t-th symbolic power (uniform multiplicity t)."""
    if t < 0 or d < 0:
        raise InputError("t and d must be nonnegative")
    ncols = comb(d + config.n, config.n)
    if t == 0 or not config.points:
        return ncols
    rows, ncols = _integer_condition_rows(config.with_multiplicity(t), d, config.field.p)
    if config.field.is_rational:
        r = rank_integer_rows(rows, ncols)
    else:
        r = rank_mod_p(rows, ncols, config.field.p)
    return ncols - r


def default_alpha_bound(config: PointConfiguration, t: int) -> int:
    """Search ceiling for alpha_t: 3t+3 for nine points in P^2, t(n+1) otherwise,
    raised if needed to the least degree where a dimension count forces a form."""
    n = config.n
    if n == 2 and len(config) == 9:
        bound = 3 * t + 3
    else:
        bound = t * (n + 1)
    conditions = len(config) * comb(n + t - 1, n)
    forced = 0
    while comb(forced + n, n) <= conditions:
        forced += 1
    return max(bound, forced)


def alpha_t(config: PointConfiguration, t: int, d_max: int | None = None) -> int | None:
    """Least degree of a nonzero form vanishing to order t at every point, or None."""
    if t < 1:
        raise InputError("t must be positive")
    if d_max is None:
        d_max = default_alpha_bound(config, t)
    # a nonzero form of degree d has multiplicity <= d at any point
    start = t if config.points else 0
    for d in range(start, d_max + 1):
        if dim_symbolic_component(config, t, d) > 0:
            return d
    return None


def euler_char_nine(t: int) -> int:
    """chi(I_S^t(3t)) for nine points in P^2: C(3t+2, 2) - 9 C(t+1, 2)."""
    if t < 1:
        raise InputError("t must be positive")
    return comb(3 * t + 2, 2) - 9 * comb(t + 1, 2)


def _is_nine_plane(config: PointConfiguration) -> bool:
    return config.n == 2 and len(config) == 9


def h1_nine(config: PointConfiguration, t: int) -> int:
    """h^1(I_S^t(3t)) = h^0 - chi = h^0 - 1, using that h^2 vanishes."""
    if not _is_nine_plane(config):
        raise InputError("h1_nine needs nine points in P^2")
    h1 = dim_symbolic_component(config, t, 3 * t) - euler_char_nine(t)
    if h1 < 0:
        raise InconsistencyError(f"negative h^1 at t={t}; configuration not admissible")
    return h1


@dataclass(frozen=True)
class HilbertRecord:
    t: int
    d: int
    dim: int
    h1: int | None = None


@dataclass(frozen=True)
class HilbertTable:
    config: PointConfiguration
    records: tuple

    def dims(self) -> list[int]:
        return [r.dim for r in self.records]

    def to_csv(self) -> str:
        lines = ["t,d,dim,h1"]
        for r in self.records:
            lines.append(f"{r.t},{r.d},{r.dim},{'' if r.h1 is None else r.h1}")
        return "\n".join(lines) + "\n"


def hilbert_table(config: PointConfiguration, t_range: Iterable[int],
                  d_rule: Callable[[int], int | Iterable[int]] = lambda t: 3 * t) -> HilbertTable:
    """dims of [I^(t)]_d over (t, d) cells; h^1 is filled in for nine plane points at d = 3t."""
    ts = sorted(set(t_range))
    if not ts:
        raise InputError("empty t range")
    records = []
    for t in ts:
        ds = d_rule(t)
        ds = [ds] if isinstance(ds, int) else sorted(set(ds))
        for d in ds:
            dim = dim_symbolic_component(config, t, d)
            h1 = None
            if t >= 1 and d == 3 * t and _is_nine_plane(config):
                h1 = dim - euler_char_nine(t)
                if h1 < 0:
                    raise InconsistencyError(f"negative h^1 at t={t}")
            records.append(HilbertRecord(t, d, dim, h1))
    return HilbertTable(config, tuple(records))
