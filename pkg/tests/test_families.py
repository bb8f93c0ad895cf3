from math import comb

import pytest

from crystalpaths.cartan import dominant_weights_of_level
from crystalpaths.crystal import check_axioms, level_and_minimal
from crystalpaths.families import (
    ARow,
    ClassLabel,
    CSpin,
    KRCrystalA,
    KRCrystalC,
    b_dagger,
    b_le,
    c_minimal_class,
    kr_crystal,
)


def c_size(n, l):
    return sum(comb(s + 2 * n - 1, 2 * n - 1) for s in range(l, 0, -2))


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("l", [0, 1, 2, 3])
def test_type_a_basics(n, l):
    B = KRCrystalA(n, l)
    assert len(B) == comb(l + n - 1, n - 1)
    lev, bmin = level_and_minimal(B)
    assert lev == l and len(bmin) == len(B)  # every element is minimal


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("l", [1, 3, 5])
def test_type_c_basics(n, l):
    B = KRCrystalC(n, l)
    assert len(B) == c_size(n, l)
    assert check_axioms(B) == []
    assert level_and_minimal(B)[0] == (l + 1) // 2


def test_type_a_operators():
    B = KRCrystalA(3, 2)
    b = ARow((1, 1, 0))
    assert B.e(1, b) == ARow((2, 0, 0))
    assert B.f(1, b) == ARow((0, 2, 0))
    assert B.e(2, b) is None
    assert B.epsilon(b) == (1, 1, 0)
    assert B.phi(b) == (0, 1, 1)


def test_type_c_operators():
    B = KRCrystalC(2, 3)
    b = CSpin((1, 0), (0, 0))
    assert B.label(b) == "(1,0|0,0)"
    assert B.epsilon(b) == (2, 0, 0)
    assert B.phi(b) == (1, 1, 0)
    # e_0 on x_1 = xbar_1 + 1 trades x_1 for xbar_1
    assert B.e(0, b) == CSpin((0, 0), (1, 0))
    assert B.f(0, b) == CSpin((3, 0), (0, 0))
    assert B.f(1, b) == CSpin((0, 1), (0, 0))
    assert B.e(1, b) is None


def test_type_c_rejects_even():
    with pytest.raises(ValueError):
        KRCrystalC(2, 2)
    with pytest.raises(ValueError):
        kr_crystal("C", 2, 4)


def test_json_roundtrip():
    for B in (KRCrystalA(3, 2), KRCrystalC(2, 3)):
        for b in B:
            assert B.from_json(B.to_json(b)) == b
    with pytest.raises(ValueError):
        KRCrystalC(2, 3).from_json([1, 1, 0, 0])  # s = 2 has the wrong parity
    with pytest.raises(ValueError):
        KRCrystalA(3, 2).from_json([1, 0, 0])


def test_minimal_class_examples():
    B = KRCrystalC(2, 3)
    cls = c_minimal_class(B, (2, 0, 0))
    assert {str(k): B.label(b) for k, b in cls.items()} == {"1": "(1,0|0,0)"}
    cls = c_minimal_class(B, (1, 1, 0))
    assert {str(k): B.label(b) for k, b in cls.items()} == {
        "1": "(2,0|0,1)",
        "2": "(0,1|0,0)",
        "1bar": "(0,0|0,1)",
    }
    with pytest.raises(ValueError):
        c_minimal_class(B, (1, 0, 0))


@pytest.mark.parametrize("n,l", [(2, 1), (2, 3), (2, 5), (3, 3)])
def test_minimal_classes_partition(n, l):
    B = KRCrystalC(n, l)
    lev, bmin = level_and_minimal(B)
    seen = []
    for mu in dominant_weights_of_level(B.cartan, lev):
        cls = c_minimal_class(B, mu)
        assert set(cls.values()) == set(b_le(B, mu))
        seen.extend(cls.values())
    assert len(seen) == len(set(seen)) and set(seen) == bmin


def test_dagger_elements():
    assert b_dagger(2, ClassLabel(1, False)) == CSpin((1, 0), (0, 0))
    assert b_dagger(2, ClassLabel(2, True)) == CSpin((0, 0), (0, 1))
    Bd = KRCrystalC(3, 1)
    for mu in dominant_weights_of_level(Bd.cartan, 1):
        got = {b_dagger(3, lab) for lab in c_minimal_class(Bd, mu)}
        assert got == set(b_le(Bd, mu))
