import json

import pytest

from crystalpaths.cache import TableCache
from crystalpaths.crystal import TensorElem, TensorProduct, level_and_minimal
from crystalpaths.families import ARow, KRCrystalA, KRCrystalC
from crystalpaths.rmatrix import (
    EnergyError,
    closed_H_A,
    closed_H_C,
    compute_H_bfs,
    compute_R,
    decompose_H,
    default_anchor,
    energy_table,
    get_R,
)

A_PAIRS = [(n, l, m) for n in (2, 3) for l in (1, 2, 3) for m in (1, 2, 3) if l != m]


def commutes(R, nodes):
    for x, y in R.items():
        for i in nodes:
            for op in ("e", "f"):
                x2 = getattr(R.domain, op)(i, x)
                y2 = getattr(R.codomain, op)(i, y)
                if (x2 is None) != (y2 is None) or (x2 is not None and R(x2) != y2):
                    return False
    return True


@pytest.mark.parametrize("n,l,m", A_PAIRS)
def test_r_matrix_type_a(n, l, m):
    b1, b2 = KRCrystalA(n, l), KRCrystalA(n, m)
    R = compute_R(b1, b2)
    assert commutes(R, b1.cartan.nodes)
    R21 = compute_R(b2, b1)
    assert all(R21(R(x)) == x for x in R.domain)


def test_r_matrix_minimal_rule_example():
    R = compute_R(KRCrystalA(2, 2), KRCrystalA(2, 1))
    assert R(TensorElem(ARow((1, 1)), ARow((1, 0)))) == TensorElem(ARow((0, 1)), ARow((2, 0)))


@pytest.mark.parametrize("n,l,m", [(3, 2, 1), (3, 3, 2), (2, 3, 1)])
def test_r_matrix_minimal_rule(n, l, m):
    b1, b2 = KRCrystalA(n, l), KRCrystalA(n, m)
    R = compute_R(b1, b2)
    _, bmin = level_and_minimal(R.domain)
    for x in bmin:
        a, b = x.left.a, x.right.a
        assert R(x) == TensorElem(
            ARow(tuple(b[(i + 1) % n] for i in range(n))),
            ARow(tuple(a[i] - b[(i + 1) % n] + b[i] for i in range(n))),
        )


def test_r_identity_and_type_c():
    B = KRCrystalC(2, 3)
    assert compute_R(B, B).is_identity()
    R = compute_R(B, KRCrystalC(2, 1))
    assert commutes(R, B.cartan.nodes)


def closed_constants(b1, b2, closed):
    H = compute_H_bfs(b1, b2)
    return {closed(x.left, x.right) - H[x] for x in TensorProduct(b1, b2)}


@pytest.mark.parametrize("n,l,m", [(n, l, m) for n in (2, 3) for l in (1, 2, 3) for m in (1, 2, 3)])
def test_energy_type_a_matches_closed(n, l, m):
    assert len(closed_constants(KRCrystalA(n, l), KRCrystalA(n, m), closed_H_A)) == 1


@pytest.mark.parametrize("l", [1, 3])
def test_energy_type_c_matches_closed(l):
    B = KRCrystalC(2, l)
    assert len(closed_constants(B, B, closed_H_C)) == 1


def test_closed_values():
    # frozen from the max formulas
    assert closed_H_A(ARow((1, 0, 0)), ARow((1, 0, 0))) == 1
    assert closed_H_A(ARow((1, 0, 0)), ARow((0, 1, 0))) == 0
    assert closed_H_A(ARow((0, 1, 0)), ARow((1, 0, 0))) == 1
    B = KRCrystalC(2, 3)
    b = B.from_json([1, 0, 0, 0])
    # eta'_1 = x_1 - xbar_1 = 1 dominates
    assert closed_H_C(b, b) == 1
    # s' - s = 2; eta'_1 = 3 - 1 = 2
    assert closed_H_C(b, B.from_json([3, 0, 0, 0])) == 2


def test_energy_table_anchored_to_closed():
    b1, b2 = KRCrystalA(3, 2), KRCrystalA(3, 1)
    H = energy_table(b1, b2)
    assert all(H[x] == closed_H_A(x.left, x.right) for x in TensorProduct(b1, b2))
    anchor = (default_anchor(b1, b2), 7)
    H7 = energy_table(b1, b2, anchor=anchor)
    assert {H7[x] - H[x] for x in H.values} == {7 - H[anchor[0]]}


def test_energy_detects_bad_r():
    b1, b2 = KRCrystalA(3, 2), KRCrystalA(3, 1)
    R = compute_R(b1, b2)
    # naive factor swap is a bijection but not a crystal morphism
    R.pairs = {x: TensorElem(x.right, x.left) for x in R.pairs}
    with pytest.raises(EnergyError):
        compute_H_bfs(b1, b2, R)


@pytest.mark.parametrize("n", [2, 3])
def test_hoftensor(n):
    b1, b2 = KRCrystalA(n, 2), KRCrystalA(n, 1)
    main = decompose_H(b1, b2)
    alt = decompose_H(b1, b2, alternative=True)
    assert main.ok and alt.ok
    assert main.checked == (len(b1) * len(b2)) ** 2


def test_cache_roundtrip(tmp_path, fresh_memo):
    cache = TableCache(tmp_path)
    b1, b2 = KRCrystalA(3, 2), KRCrystalA(3, 1)
    cold = energy_table(b1, b2, cache)
    R_cold = get_R(b1, b2, cache)
    assert cache.misses >= 2
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files and all(f.endswith(".json") for f in files)
    warm_cache = TableCache(tmp_path)
    warm = energy_table(b1, b2, warm_cache)
    assert warm_cache.hits >= 1
    assert warm.values == cold.values
    assert get_R(b1, b2, warm_cache).pairs == R_cold.pairs


def test_cache_rejects_garbage(tmp_path):
    cache = TableCache(tmp_path)
    cache.store("H", {"k": 1}, {"values": []})
    path = next(tmp_path.iterdir())
    path.write_text("{not json")
    assert cache.load("H", {"k": 1}) is None
    path.write_text(json.dumps({"key": {"k": 2}}))
    assert cache.load("H", {"k": 1}) is None
