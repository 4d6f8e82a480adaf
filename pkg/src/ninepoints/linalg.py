"""Exact scalars and exact linear algebra over QQ and prime fields.

Scalars are plain ``fractions.Fraction`` values over QQ and ``Fp`` values over
GF(p).  Rank and kernel computations come in two flavours:

* small-scale reference routines in pure Python: fraction-free (Bareiss)
  elimination over QQ and Gaussian elimination over GF(p);
* large-scale routines used for interpolation matrices: vectorised Gaussian
  elimination mod p (numpy, p < 2**31) and a certified multimodular rank over
  QQ.  The multimodular rank is exact: a rank mod p is a lower bound for the
  rational rank, and a kernel basis reconstructed from several primes is
  checked exactly over the integers, which gives the matching upper bound.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Sequence

import numpy as np

from ninepoints.errors import InputError

# numpy elimination keeps products of two residues inside int64
NUMPY_PRIME_LIMIT = 2**31
# pure-Python Bareiss is used below this many entries, multimodular above
BAREISS_ENTRY_LIMIT = 2500


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Fp:
    """Element of the prime field GF(p), stored as a residue in [0, p)."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other) -> int:
        if isinstance(other, Fp):
            if other.p != self.p:
                raise InputError(f"cannot mix GF({self.p}) and GF({other.p})")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            raise InputError(f"cannot mix GF({self.p}) and QQ")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return Fp(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o, self.p) / self

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            if self.v == 0:
                raise ZeroDivisionError(f"division by zero in GF({self.p})")
            return Fp(pow(self.v, -1, self.p) ** -k, self.p)
        return Fp(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


@dataclass(frozen=True)
class Field:
    """QQ when ``p`` is None, otherwise GF(p) for an odd prime p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or self.p < 3 or not is_prime(self.p):
                raise InputError(f"field characteristic must be an odd prime, got {self.p!r}")

    @property
    def kind(self) -> str:
        return "Rationals" if self.p is None else "PrimeField"

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __call__(self, x):
        """Coerce ``x`` (int, Fraction, "a/b" string, or element) into this field."""
        if isinstance(x, str):
            if not re.fullmatch(r"\s*[+-]?\d+(\s*/\s*\d+)?\s*", x):
                raise InputError(f"not an exact rational: {x!r}")
            try:
                x = Fraction(x.replace(" ", ""))
            except ZeroDivisionError as exc:
                raise InputError(f"zero denominator: {x!r}") from exc
        if isinstance(x, bool) or not isinstance(x, (int, Fraction, Fp)):
            raise InputError(f"not an exact scalar: {x!r}")
        if self.p is None:
            if isinstance(x, Fp):
                raise InputError("cannot coerce a GF(p) element into QQ")
            return Fraction(x)
        if isinstance(x, Fp):
            if x.p != self.p:
                raise InputError(f"cannot coerce GF({x.p}) element into GF({self.p})")
            return x
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise InputError(f"{x} has no image in GF({self.p})")
            return Fp(x.numerator * pow(x.denominator, -1, self.p), self.p)
        return Fp(x, self.p)

    def contains(self, x) -> bool:
        if self.p is None:
            return isinstance(x, Fraction)
        return isinstance(x, Fp) and x.p == self.p

    @staticmethod
    def of(x) -> "Field":
        if isinstance(x, Fp):
            return Field(x.p)
        if isinstance(x, (Fraction, int)):
            return QQ
        raise InputError(f"not an exact scalar: {x!r}")

    def __str__(self):
        return "QQ" if self.p is None else f"GF({self.p})"


QQ = Field()


def GF(p: int) -> Field:
    return Field(p)


def scalar_to_int_mod(x, p: int) -> int:
    """Image of an exact scalar in Z/p (raises if a denominator vanishes mod p)."""
    if isinstance(x, Fp):
        return x.v % p
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, p) % p


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple
    field: Field

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0 or len(self.entries) != self.rows * self.cols:
            raise InputError(
                f"{len(self.entries)} entries do not fill a {self.rows}x{self.cols} matrix")
        for x in self.entries:
            if not self.field.contains(x):
                raise InputError(f"entry {x!r} does not belong to {self.field}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field | None = None,
                  cols: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise InputError("ragged matrix rows")
        if field is None:
            field = _infer_field(x for r in rows for x in r)
        else:
            for r in rows:
                for x in r:
                    if isinstance(x, (Fp, Fraction)) and not field.contains(x):
                        raise InputError(f"entry {x!r} does not belong to {field}")
        entries = tuple(field(x) for r in rows for x in r)
        return cls(len(rows), cols, entries, field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "ExactMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = QQ) -> "ExactMatrix":
        return cls(rows, cols, (field.zero,) * (rows * cols), field)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "ExactMatrix":
        e = tuple(self[i, j] for j in range(self.cols) for i in range(self.rows))
        return ExactMatrix(self.cols, self.rows, e, self.field)

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows or self.field != other.field:
                raise InputError("incompatible matrices")
            cols = [[other[k, j] for k in range(other.rows)] for j in range(other.cols)]
            e = tuple(_dot(self.row(i), c, self.field)
                      for i in range(self.rows) for c in cols)
            return ExactMatrix(self.rows, other.cols, e, self.field)
        v = [self.field(x) for x in other]
        if len(v) != self.cols:
            raise InputError("vector length does not match matrix")
        return tuple(_dot(self.row(i), v, self.field) for i in range(self.rows))


def _dot(a, b, field):
    s = field.zero
    for x, y in zip(a, b):
        s += x * y
    return s


def _infer_field(values: Iterable) -> Field:
    field = None
    for x in values:
        if isinstance(x, Fp):
            f = Field(x.p)
        elif isinstance(x, Fraction):
            f = QQ
        else:
            continue
        if field is None:
            field = f
        elif field != f:
            raise InputError(f"mixed-field entries: {field} and {f}")
    return field or QQ


# ---------------------------------------------------------------------------
# public API


def rank(M: ExactMatrix) -> int:
    """Rank of ``M`` over its field."""
    _check(M)
    if M.rows == 0 or M.cols == 0:
        return 0
    if M.field.is_rational:
        return rank_integer_rows(_integer_rows(M), M.cols)
    return rank_mod_p([[x.v for x in M.row(i)] for i in range(M.rows)], M.cols, M.field.p)


def nullspace(M: ExactMatrix) -> list[tuple]:
    """Basis of the right kernel.

    The basis is canonical: with the pivot columns of the reduced row echelon
    form, vector k has a 1 in the k-th free column and 0 in the other free
    columns.
    """
    _check(M)
    if M.cols == 0:
        return []
    if M.rows == 0:
        return [tuple(M.field(int(i == j)) for i in range(M.cols)) for j in range(M.cols)]
    if M.field.is_rational:
        _, basis = kernel_integer_rows(_integer_rows(M), M.cols)
        return [tuple(v) for v in basis]
    p = M.field.p
    _, basis = kernel_mod_p([[x.v for x in M.row(i)] for i in range(M.rows)], M.cols, p)
    return [tuple(Fp(x, p) for x in v) for v in basis]


def inverse(M: ExactMatrix) -> ExactMatrix:
    """Inverse of a small square matrix by Gauss-Jordan elimination."""
    _check(M)
    n = M.rows
    if n != M.cols:
        raise InputError("inverse of a non-square matrix")
    F = M.field
    A = [list(M.row(i)) + [F(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        inv = F.one / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return ExactMatrix.from_rows([r[n:] for r in A], F)


def _check(M: ExactMatrix):
    if not isinstance(M, ExactMatrix):
        raise InputError(f"expected ExactMatrix, got {type(M).__name__}")
    for x in M.entries:
        if not M.field.contains(x):
            raise InputError(f"mixed-field entry {x!r} in a matrix over {M.field}")


def _integer_rows(M: ExactMatrix) -> list[list[int]]:
    # clearing denominators row by row keeps rank and kernel
    out = []
    for i in range(M.rows):
        r = M.row(i)
        den = 1
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([x.numerator * (den // x.denominator) for x in r])
    return out


# ---------------------------------------------------------------------------
# prime fields


def rank_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int) -> int:
    if not rows or ncols == 0:
        return 0
    if p < NUMPY_PRIME_LIMIT:
        A = np.array(rows, dtype=np.int64).reshape(len(rows), ncols) % p
        return _echelon_numpy(A, p, reduced=False)[0]
    return len(_rref_python([list(r) for r in rows], ncols, p)[0])


def kernel_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int):
    """(pivot columns, canonical kernel basis as lists of residues)."""
    if not rows:
        return [], [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    if p < NUMPY_PRIME_LIMIT:
        A = np.array(rows, dtype=np.int64).reshape(len(rows), ncols) % p
        r, pivots, R = _echelon_numpy(A, p, reduced=True)
        R = R[:r].tolist()
    else:
        pivots, R = _rref_python([list(r) for r in rows], ncols, p)
    return pivots, _kernel_from_rref(R, pivots, ncols, p)


def gauss_rank_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int) -> int:
    """Reference pure-Python Gaussian elimination (no numpy)."""
    return len(_rref_python([list(r) for r in rows], ncols, p)[0])


def _rref_python(A: list[list[int]], ncols: int, p: int):
    A = [[x % p for x in r] for r in A]
    m = len(A)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        pr = [x * inv % p for x in A[r]]
        A[r] = pr
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], pr)]
        pivots.append(c)
        r += 1
    return pivots, A[:r]


def _echelon_numpy(A: np.ndarray, p: int, reduced: bool):
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = A[r, c:] * inv % p
        lo = 0 if reduced else r + 1
        col = A[lo:, c].copy()
        if reduced:
            col[r] = 0
        touched = np.flatnonzero(col)
        if touched.size:
            rows_idx = touched + lo
            A[rows_idx, c:] = (A[rows_idx, c:] - np.outer(col[touched], A[r, c:]) % p) % p
        pivots.append(c)
        r += 1
    return r, pivots, A


def _kernel_from_rref(R: list[list[int]], pivots: list[int], ncols: int, p: int):
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for k, pc in enumerate(pivots):
            v[pc] = (-R[k][f]) % p
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# rationals


def bareiss_echelon(rows: Sequence[Sequence[int]], ncols: int):
    """Fraction-free forward elimination; returns (pivot columns, echelon rows)."""
    A = [list(r) for r in rows]
    m = len(A)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pr = A[r]
        pv = pr[c]
        for i in range(r + 1, m):
            row = A[i]
            a = row[c]
            if a:
                row[c:] = [(pv * x - a * y) // prev for x, y in zip(row[c:], pr[c:])]
            else:
                row[c:] = [pv * x // prev for x in row[c:]]
        prev = pv
        pivots.append(c)
        r += 1
    return pivots, A[:r]


def bareiss_rank(rows: Sequence[Sequence[int]], ncols: int) -> int:
    return len(bareiss_echelon(rows, ncols)[0])


def bareiss_kernel(rows: Sequence[Sequence[int]], ncols: int):
    pivots, E = bareiss_echelon(rows, ncols)
    pset = set(pivots)
    basis = []
    for f in (c for c in range(ncols) if c not in pset):
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for k in range(len(pivots) - 1, -1, -1):
            pc = pivots[k]
            s = sum((E[k][j] * v[j] for j in range(pc + 1, ncols) if v[j]), Fraction(0))
            v[pc] = -s / E[k][pc]
        basis.append(v)
    return pivots, basis


def rank_integer_rows(rows: Sequence[Sequence[int]], ncols: int) -> int:
    """Exact rank over QQ of an integer matrix."""
    if not rows or ncols == 0:
        return 0
    if len(rows) * ncols <= BAREISS_ENTRY_LIMIT:
        return bareiss_rank(rows, ncols)
    return multimodular_kernel(rows, ncols, want_kernel=False)[0]


def kernel_integer_rows(rows: Sequence[Sequence[int]], ncols: int):
    """(rank, canonical kernel basis with Fraction entries) over QQ."""
    if len(rows) * ncols <= BAREISS_ENTRY_LIMIT:
        pivots, basis = bareiss_kernel(rows, ncols)
        return len(pivots), basis
    return multimodular_kernel(rows, ncols, want_kernel=True)


@lru_cache(maxsize=1)
def _prime_list(count: int = 400) -> tuple:
    out = []
    q = NUMPY_PRIME_LIMIT - 1
    while len(out) < count:
        if is_prime(q):
            out.append(q)
        q -= 2
    return tuple(out)


def rational_reconstruction(a: int, m: int) -> Fraction | None:
    """n/d with |n|, d <= sqrt(m/2) and n = a*d mod m, or None."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def multimodular_kernel(rows: Sequence[Sequence[int]], ncols: int, want_kernel: bool = True,
                        max_primes: int = 400):
    """Certified rank (and canonical kernel) over QQ of an integer matrix.

    The rank mod p never exceeds the rational rank, and primes that keep it
    are the ones with the lexicographically earliest pivot columns.  Kernel
    residues from such primes are combined by CRT, rationally reconstructed,
    and verified exactly; the verified kernel bounds the rank from above.
    """
    m = len(rows)
    best_rank = -1
    best_pivots: list[int] = []
    residues: list[list[int]] = []
    modulus = 1
    used = 0
    checkpoint = 1
    previous = None
    for p in _prime_list()[:max_primes]:
        A = np.array([[x % p for x in r] for r in rows], dtype=np.int64).reshape(m, ncols)
        r, pivots, R = _echelon_numpy(A, p, reduced=True)
        if r < best_rank or (r == best_rank and pivots > best_pivots):
            continue
        if r > best_rank or pivots < best_pivots:
            best_rank, best_pivots = r, pivots
            residues, modulus, used, checkpoint, previous = [], 1, 0, 1, None
        if r == ncols or r == m and not want_kernel:
            break
        basis = _kernel_from_rref(R[:r].tolist(), pivots, ncols, p)
        if not residues:
            residues = [list(v) for v in basis]
        else:
            minv = pow(modulus, -1, p)
            for acc, v in zip(residues, basis):
                for j in best_pivots:
                    x = acc[j]
                    acc[j] = x + modulus * ((v[j] - x) * minv % p)
        modulus *= p
        used += 1
        if used < checkpoint:
            continue
        checkpoint = used + max(1, used // 2)
        candidate = _reconstruct(residues, best_pivots, modulus)
        if candidate is None:
            continue
        if candidate != previous:
            previous = candidate
            continue
        if all(_annihilates(rows, v) for v in candidate):
            return best_rank, candidate if want_kernel else None
    else:
        raise ArithmeticError("multimodular rank did not certify within the prime budget")
    if r == ncols:
        return ncols, []
    return best_rank, None


def _reconstruct(residues, pivots, modulus):
    out = []
    for acc in residues:
        v = [Fraction(x) for x in acc]
        for j in pivots:
            q = rational_reconstruction(acc[j], modulus)
            if q is None:
                return None
            v[j] = q
        out.append(v)
    return out


def _annihilates(rows, v) -> bool:
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    w = [(x.numerator * (den // x.denominator), j) for j, x in enumerate(v) if x]
    for r in rows:
        if sum(r[j] * x for x, j in w):
            return False
    return True
