import random
from math import comb

import pytest

from ninepoints.errors import InputError
from ninepoints.fatpoints import (
    alpha_t,
    conditions_matrix,
    default_alpha_bound,
    dim_symbolic_component,
    euler_char_nine,
    h1_nine,
    hilbert_table,
)
from ninepoints.linalg import GF, QQ, rank
from ninepoints.projective import PointConfiguration, normalize

EMPTY = PointConfiguration(2, ())
COORD3 = PointConfiguration.from_coords([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
FOUR = PointConfiguration.from_coords([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]])


def random_config(rng, m, field=QQ, n=2, h=5):
    pts = set()
    while len(pts) < m:
        v = [rng.randint(-h, h) for _ in range(n + 1)]
        if any(x % field.p for x in v) if field.p else any(v):
            pts.add(normalize(v, field))
    return PointConfiguration(n, tuple(sorted(pts, key=str)), None, field)


# --- conditions matrix ----------------------------------------------------

def test_single_point_matrix():
    c = PointConfiguration.from_coords([[2, 3, 5]])
    M = conditions_matrix(c, 1)
    assert M.shape == (1, 3)
    assert M.matrix.row(0) == (1, normalize([2, 3, 5])[1], normalize([2, 3, 5])[2])


def test_matrix_shapes(general9):
    assert conditions_matrix(general9, 3).shape == (9, 10)
    for t in (2, 3):
        M = conditions_matrix(general9.with_multiplicity(t), 3 * t)
        assert M.shape == (9 * t * (t + 1) // 2, comb(3 * t + 2, 2))


def test_mixed_multiplicity_rows():
    c = PointConfiguration.from_coords([[1, 0, 0], [0, 1, 0], [1, 2, 3]], multiplicities=[1, 2, 3])
    M = conditions_matrix(c, 4)
    assert M.shape == (1 + 3 + 6, 15)
    assert [i for i, _ in M.row_labels] == [0, 1, 1, 1, 2, 2, 2, 2, 2, 2]
    # derivatives never run in the chart coordinate
    assert all(b[c.points[i].chart] == 0 for i, b in M.row_labels)


@pytest.mark.parametrize("field", [QQ, GF(7), GF(101)])
def test_fast_rank_agrees_with_literal_matrix(field):
    rng = random.Random(field.p or 0)
    for _ in range(12):
        c = random_config(rng, rng.randint(1, 7), field)
        t, d = rng.randint(1, 3), rng.randint(0, 7)
        M = conditions_matrix(c.with_multiplicity(t), d).matrix
        assert dim_symbolic_component(c, t, d) == M.cols - rank(M)


# --- dimensions -----------------------------------------------------------

def test_dim_empty_and_t0(general9):
    for d in range(6):
        assert dim_symbolic_component(EMPTY, 3, d) == comb(d + 2, 2)
        assert dim_symbolic_component(general9, 0, d) == comb(d + 2, 2)


def test_dim_general_nine(general9):
    assert dim_symbolic_component(general9, 1, 3) == 1
    assert dim_symbolic_component(general9, 1, 2) == 0


def test_dim_pencil(pencil9):
    for t in (1, 2, 3):
        assert dim_symbolic_component(pencil9, t, 3 * t) == t + 1


def test_single_fat_point_any_characteristic():
    # a point of multiplicity t imposes C(t+1, 2) independent conditions once d >= t - 1;
    # this needs divided-power derivatives when p <= t
    for field in (QQ, GF(3), GF(5)):
        c = PointConfiguration.from_coords([[1, 2, 1]], field)
        for t in range(1, 7):
            for d in range(t - 1, t + 3):
                assert dim_symbolic_component(c, t, d) == comb(d + 2, 2) - comb(t + 1, 2)


def test_dim_rejects_negative():
    with pytest.raises(InputError):
        dim_symbolic_component(COORD3, -1, 2)


# --- alpha ----------------------------------------------------------------

def test_alpha_examples():
    one = PointConfiguration.from_coords([[1, 2, 3]])
    assert [alpha_t(one, t) for t in (1, 2, 3)] == [1, 2, 3]
    assert alpha_t(FOUR, 1) == 2
    assert alpha_t(COORD3, 1) == 2
    assert alpha_t(COORD3, 2) == 3


def test_alpha_general_nine(general9):
    assert alpha_t(general9, 1) == 3
    assert alpha_t(general9, 2) == 6


def test_alpha_not_found():
    assert alpha_t(FOUR, 2, d_max=3) is None
    assert alpha_t(FOUR, 2, d_max=4) == 4


def test_default_alpha_bound(general9):
    assert default_alpha_bound(general9, 2) == 9
    assert default_alpha_bound(COORD3, 2) == 6
    # 20 simple points force nothing below degree 5
    many = random_config(random.Random(0), 20)
    assert default_alpha_bound(many, 1) == 5
    assert alpha_t(many, 1) == 5


# --- Euler characteristic and h^1 -------------------------------------------

def test_euler_char_nine():
    assert euler_char_nine(1) == 10 - 9
    assert euler_char_nine(2) == 28 - 27
    assert all(euler_char_nine(t) == 1 for t in range(1, 51))
    with pytest.raises(InputError):
        euler_char_nine(0)


def test_h1(general9, torsion2, pencil9):
    assert [h1_nine(general9, t) for t in (1, 2, 3)] == [0, 0, 0]
    assert h1_nine(torsion2, 2) == 1
    assert h1_nine(pencil9, 3) == 3
    with pytest.raises(InputError):
        h1_nine(FOUR, 1)


# --- Hilbert tables --------------------------------------------------------

def test_hilbert_table_examples(torsion2, general9):
    assert hilbert_table(torsion2, range(1, 5)).dims() == [1, 2, 2, 3]
    tab = hilbert_table(general9, range(1, 5))
    assert tab.dims() == [1, 1, 1, 1]
    assert [r.h1 for r in tab.records] == [0, 0, 0, 0]
    assert hilbert_table(general9, [0], lambda t: 4).dims() == [15]


def test_hilbert_table_csv_and_order():
    tab = hilbert_table(FOUR, [2, 1], lambda t: range(t, t + 2))
    assert [(r.t, r.d) for r in tab.records] == [(1, 1), (1, 2), (2, 2), (2, 3)]
    assert tab.to_csv() == "t,d,dim,h1\n1,1,0,\n1,2,2,\n2,2,0,\n2,3,0,\n"
    with pytest.raises(InputError):
        hilbert_table(FOUR, [])


# --- invariants on random configurations -----------------------------------

@pytest.mark.parametrize("seed", range(6))
def test_monotonicity(seed):
    rng = random.Random(seed)
    c = random_config(rng, rng.randint(1, 9))
    dims = {(t, d): dim_symbolic_component(c, t, d) for t in range(1, 4) for d in range(0, 9)}
    for (t, d), v in dims.items():
        if (t + 1, d) in dims:
            assert dims[(t + 1, d)] <= v
        if (t, d + 1) in dims:
            assert dims[(t, d + 1)] >= v


@pytest.mark.parametrize("seed", range(6))
def test_alpha_subadditive(seed):
    rng = random.Random(seed)
    c = random_config(rng, rng.randint(1, 8))
    a = {t: alpha_t(c, t) for t in range(1, 5)}
    for t1 in range(1, 4):
        for t2 in range(1, 5 - t1):
            assert a[t1 + t2] <= a[t1] + a[t2]
