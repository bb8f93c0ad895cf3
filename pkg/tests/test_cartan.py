from fractions import Fraction
from math import comb

import pytest

from crystalpaths.cartan import (
    Family,
    WeightP,
    cartan_data,
    classical_root_decomposition,
    dominant_weights_of_level,
    format_weight,
    level,
    parse_weight,
    sigma,
    weight_from_json,
    weight_to_json,
)

CASES = [(Family.A, n) for n in (2, 3, 4, 5)] + [(Family.C, n) for n in (1, 2, 3, 4)]


@pytest.mark.parametrize("family,n", CASES)
def test_marks_annihilate_cartan(family, n):
    cd = cartan_data(family, n)
    assert cd.marks[0] == 1
    assert cd.comarks == (1,) * cd.size
    for i in cd.nodes:
        assert sum(cd.cartan_affine[i][j] * cd.marks[j] for j in cd.nodes) == 0
    for i in cd.nodes:
        assert cd.cartan_affine[i][i] == 2


def test_type_c_matrix():
    cd = cartan_data("C", 3)
    assert cd.cartan_affine == (
        (2, -1, 0, 0),
        (-2, 2, -1, 0),
        (0, -1, 2, -2),
        (0, 0, -1, 2),
    )
    assert cd.marks == (1, 2, 2, 1)


def test_rank_two_matrices():
    for cd in (cartan_data("A", 2), cartan_data("C", 1)):
        assert cd.cartan_affine == ((2, -2), (-2, 2))


def test_levels():
    assert level(cartan_data("A", 3), (1, 0, 0)) == 1
    assert level(cartan_data("C", 2), (1, 1, 0)) == 2
    assert level(cartan_data("C", 2), (0, 0, 0)) == 0


@pytest.mark.parametrize("family,n", CASES)
@pytest.mark.parametrize("lev", [0, 1, 2, 3])
def test_dominant_weights_count(family, n, lev):
    cd = cartan_data(family, n)
    ws = dominant_weights_of_level(cd, lev)
    assert len(ws) == comb(lev + cd.size - 1, cd.size - 1)
    assert len(set(ws)) == len(ws)
    assert all(min(w) >= 0 and level(cd, w) == lev for w in ws)


def test_dominant_weights_examples():
    assert set(dominant_weights_of_level(cartan_data("A", 3), 1)) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert dominant_weights_of_level(cartan_data("A", 3), 0) == [(0, 0, 0)]
    assert len(dominant_weights_of_level(cartan_data("C", 2), 2)) == 6


def test_root_decomposition():
    a3 = cartan_data("A", 3)
    assert classical_root_decomposition(a3, (0, 0, 0)) == (0, 0)
    assert classical_root_decomposition(a3, a3.simple_root(1)) == (1, 0)
    c2 = cartan_data("C", 2)
    # 3L1 - L1 differ by 2 alpha_1 + alpha_2 in C_2
    assert classical_root_decomposition(c2, (0, -2, 0)) == (Fraction(-2), Fraction(-1))
    a2 = cartan_data("A", 3)
    assert classical_root_decomposition(a2, (0, 1, 0)) == (Fraction(2, 3), Fraction(1, 3))


def test_sigma():
    cd = cartan_data("A", 3)
    assert sigma(cd, (1, 0, 0)) == (0, 0, 1)
    w = (2, 1, 0)
    for _ in range(3):
        w = sigma(cd, w)
    assert w == (2, 1, 0)
    with pytest.raises(ValueError):
        sigma(cartan_data("C", 2), (1, 0, 0))


def test_weight_io():
    cd = cartan_data("C", 2)
    assert parse_weight(cd, "1,0,2") == (1, 0, 2)
    with pytest.raises(ValueError):
        parse_weight(cd, "1,0")
    with pytest.raises(ValueError):
        parse_weight(cd, "a,b,c")
    obj = weight_to_json(cd, (1, 0, 2), delta=-3)
    assert weight_from_json(obj) == (cd, WeightP((1, 0, 2), -3))
    assert format_weight((1, 0, 2)) == "L0+2L2"
    assert format_weight((-1, 2, 0)) == "-L0+2L1"
    assert format_weight((0, 0, 0)) == "0"


def test_invalid_rank():
    with pytest.raises(ValueError):
        cartan_data("A", 1)
    with pytest.raises(ValueError):
        cartan_data("C", 0)
