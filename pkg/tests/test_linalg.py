import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ninepoints.errors import InputError
from ninepoints.linalg import (
    GF,
    QQ,
    ExactMatrix,
    Field,
    Fp,
    bareiss_kernel,
    bareiss_rank,
    gauss_rank_mod_p,
    inverse,
    is_prime,
    kernel_integer_rows,
    multimodular_kernel,
    nullspace,
    rank,
    rank_mod_p,
    rational_reconstruction,
)

small_ints = st.integers(min_value=-6, max_value=6)


@st.composite
def int_matrices(draw, max_dim=6):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r))
    return rows, c


def low_rank_rows(rng, r, c, k, lo=-5, hi=5):
    """r x c integer rows of rank <= k (products of random factors)."""
    A = [[rng.randint(lo, hi) for _ in range(k)] for _ in range(r)]
    B = [[rng.randint(lo, hi) for _ in range(c)] for _ in range(k)]
    return [[sum(A[i][s] * B[s][j] for s in range(k)) for j in range(c)] for i in range(r)]


# --- fields and scalars ---------------------------------------------------

def test_field_validation():
    assert str(QQ) == "QQ" and str(GF(7)) == "GF(7)"
    for bad in (2, 4, 1, 0, -3, 9):
        with pytest.raises(InputError):
            Field(bad)


def test_field_coercion():
    assert QQ("3/6") == Fraction(1, 2)
    assert QQ(" -4 ") == -4
    assert GF(5)("1/2") == Fp(3, 5)
    assert GF(7)(-1) == Fp(6, 7)
    for bad in ("0.5", "1e3", 1.5, "abc", True):
        with pytest.raises(InputError):
            QQ(bad)
    with pytest.raises(InputError):
        GF(5)("1/5")


def test_fp_arithmetic():
    a, b = Fp(3, 7), Fp(5, 7)
    assert a + b == Fp(1, 7)
    assert a * b == Fp(1, 7)
    assert a / b == Fp(2, 7)
    assert -a == Fp(4, 7)
    assert a ** -1 == Fp(5, 7)
    with pytest.raises(InputError):
        a + Fp(1, 11)
    with pytest.raises(InputError):
        a + Fraction(1, 2)
    with pytest.raises(ZeroDivisionError):
        a / Fp(0, 7)


def test_is_prime():
    primes = [p for p in range(100) if is_prime(p)]
    assert primes[:10] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2**31 - 1) and not is_prime(2**31 + 1)


# --- matrices -------------------------------------------------------------

def test_matrix_validation():
    with pytest.raises(InputError):
        ExactMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(InputError):
        ExactMatrix.from_rows([[Fp(1, 5), Fp(1, 7)]])
    with pytest.raises(InputError):
        ExactMatrix.from_rows([[Fp(1, 5), Fraction(1, 2)]])


def test_rank_examples():
    assert rank(ExactMatrix.identity(4)) == 4
    assert rank(ExactMatrix.zeros(3, 5)) == 0
    assert rank(ExactMatrix.from_rows([[1, 2, 3], [2, 4, 6], [0, 1, 1]])) == 2


def test_nullspace_examples():
    assert nullspace(ExactMatrix.identity(2)) == []
    basis = nullspace(ExactMatrix.from_rows([[1, 1, 1]]))
    assert len(basis) == 2 and all(sum(v) == 0 for v in basis)
    (v,) = nullspace(ExactMatrix.from_rows([[1, 2], [2, 4]]))
    assert v[0] == -2 * v[1] and v[1] != 0


def test_rank_mod_p_differs_from_rational():
    M = [[1, 2], [3, 1]]  # det = -5
    assert rank(ExactMatrix.from_rows(M)) == 2
    assert rank(ExactMatrix.from_rows(M, GF(5))) == 1
    assert rank_mod_p(M, 2, 5) == 1


def test_inverse():
    M = ExactMatrix.from_rows([[2, 1], [1, 1]])
    assert (inverse(M) @ M) == ExactMatrix.identity(2)
    with pytest.raises(ZeroDivisionError):
        inverse(ExactMatrix.from_rows([[1, 2], [2, 4]]))


@settings(max_examples=150, deadline=None)
@given(int_matrices())
def test_rank_transpose(mc):
    rows, c = mc
    M = ExactMatrix.from_rows(rows)
    assert rank(M) == rank(M.transpose())


@settings(max_examples=150, deadline=None)
@given(int_matrices(), st.randoms(use_true_random=False))
def test_rank_row_operation_invariance(mc, rnd):
    rows, c = mc
    r0 = rank(ExactMatrix.from_rows(rows))
    rows = [list(map(Fraction, r)) for r in rows]
    for _ in range(5):
        i, j = rnd.randrange(len(rows)), rnd.randrange(len(rows))
        op = rnd.randrange(3)
        if op == 0:
            rows[i], rows[j] = rows[j], rows[i]
        elif op == 1:
            s = Fraction(rnd.choice([-3, -2, -1, 1, 2, 3]), rnd.randint(1, 4))
            rows[i] = [s * x for x in rows[i]]
        elif i != j:
            s = Fraction(rnd.randint(-4, 4), rnd.randint(1, 3))
            rows[i] = [x + s * y for x, y in zip(rows[i], rows[j])]
    assert rank(ExactMatrix.from_rows(rows)) == r0


@settings(max_examples=150, deadline=None)
@given(int_matrices(), st.sampled_from([None, 3, 5, 101]))
def test_nullspace_annihilates_and_rank_nullity(mc, p):
    rows, c = mc
    M = ExactMatrix.from_rows(rows, QQ if p is None else GF(p))
    basis = nullspace(M)
    assert rank(M) + len(basis) == c
    for v in basis:
        assert all(x == 0 for x in M @ v)
    if basis:
        assert rank(ExactMatrix.from_rows(basis, M.field)) == len(basis)


@settings(max_examples=150, deadline=None)
@given(int_matrices(), st.sampled_from([3, 5, 7, 11]))
def test_rank_mod_p_at_most_rational(mc, p):
    rows, c = mc
    assert rank_mod_p(rows, c, p) <= rank(ExactMatrix.from_rows(rows))


@settings(max_examples=100, deadline=None)
@given(int_matrices(max_dim=8), st.sampled_from([3, 7, 65521, 2**31 - 1, 2**61 - 1]))
def test_numpy_and_python_elimination_agree(mc, p):
    rows, c = mc
    assert rank_mod_p(rows, c, p) == gauss_rank_mod_p(rows, c, p)


@settings(max_examples=100, deadline=None)
@given(int_matrices(max_dim=7))
def test_bareiss_matches_fraction_elimination(mc):
    rows, c = mc
    assert bareiss_rank(rows, c) == rank(ExactMatrix.from_rows(rows))
    pivots, basis = bareiss_kernel(rows, c)
    assert len(pivots) + len(basis) == c
    for v in basis:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


def test_multimodular_matches_bareiss():
    rng = random.Random(7)
    for trial in range(25):
        r, c = rng.randint(3, 30), rng.randint(3, 30)
        k = rng.randint(0, min(r, c))
        rows = low_rank_rows(rng, r, c, k, -40, 40)
        rk, ker = multimodular_kernel(rows, c)
        assert rk == bareiss_rank(rows, c)
        assert len(ker) == c - rk
        for v in ker:
            assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in rows)


def test_multimodular_large_entries():
    # entries far above any single prime; rank deficiency only visible over QQ
    rng = random.Random(3)
    big = 10**30
    rows = low_rank_rows(rng, 12, 15, 9, -big, big)
    assert multimodular_kernel(rows, 15, want_kernel=False)[0] == bareiss_rank(rows, 15) == 9


def test_kernel_integer_rows_dispatch():
    rng = random.Random(11)
    rows = low_rank_rows(rng, 60, 70, 50)  # above the Bareiss size cutoff
    rk, ker = kernel_integer_rows(rows, 70)
    assert rk == 50 and len(ker) == 20
    for v in ker:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in rows)


def test_rational_reconstruction():
    m = 2**31 - 1
    for q in (Fraction(3, 7), Fraction(-22, 5), Fraction(0), Fraction(1000, 999)):
        a = q.numerator * pow(q.denominator, -1, m) % m
        assert rational_reconstruction(a, m) == q
