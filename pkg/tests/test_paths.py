import pytest

from crystalpaths.cartan import WeightP, add, sub
from crystalpaths.crystal import LOWER, RAISE
from crystalpaths.families import ARow, CSpin, KRCrystalC
from crystalpaths.paths import (
    Path,
    ReferencePathError,
    RefPath,
    all_paths,
    energy_E,
    enumerate_hw_paths,
    enumerate_hw_paths_oracle,
    enumerate_restricted,
    is_highest,
    is_restricted,
    is_restricted_oracle,
    lambda_sequence,
    make_ref_A,
    make_ref_A_single,
    make_ref_C,
    make_ref_multi,
    path_epsilon,
    path_from_json,
    path_phi,
    path_step,
    path_wt,
    raise_to_highest,
    weight_W,
    wt_tail,
)
from crystalpaths.rmatrix import energy_table


def refs():
    return {
        "C2l3": make_ref_C(KRCrystalC(2, 3), (1, 0, 0)),
        "C2l1": make_ref_C(KRCrystalC(2, 1), (0, 0, 0)),
        "A3l1": make_ref_A_single(3, (1, 0, 0), 1),
        "A3l2m1": make_ref_A(3, (1, 0, 0), (1, 0, 0), 2, 1),
        "A4l2": make_ref_A_single(4, (1, 1, 0, 0), 2),
    }


REFS = refs()


def table(ref):
    return energy_table(ref.crystal, ref.crystal)


def test_ref_c_example():
    ref = REFS["C2l3"]
    B = ref.crystal
    assert len(ref.period) == 4
    assert B.label(ref.at(1)) == "(0,0|0,1)"
    assert B.epsilon(ref.at(1)) == (1, 1, 0)
    assert B.phi(ref.at(1)) == (2, 0, 0)
    assert ref.at(5) == ref.at(1)


def test_ref_a_examples():
    ref = REFS["A3l2m1"]
    assert ref.crystal.label(ref.at(1)) == "(0,1,1)⊗(0,0,1)"
    assert REFS["A3l1"].at(1) == ARow((0, 0, 1))


def test_ref_multi_specializes():
    assert make_ref_multi(3, [(1, 0, 0), (0, 1, 0)], [2, 1]) == make_ref_A(3, (1, 0, 0), (0, 1, 0), 2, 1)
    assert make_ref_multi(3, [(0, 1, 1)], [2]) == make_ref_A_single(3, (0, 1, 1), 2)
    ref = make_ref_multi(2, [(1, 0), (1, 0), (0, 1)], [3, 2, 1])
    assert ref.problems() == []


def test_ref_validation_errors():
    B = KRCrystalC(2, 3)
    with pytest.raises(ReferencePathError):
        RefPath(B, (CSpin((3, 0), (0, 0)),)).validated()
    with pytest.raises(ReferencePathError):
        make_ref_C(B, (2, 0, 0))
    with pytest.raises(ReferencePathError):
        make_ref_A(3, (1, 0, 0), (1, 0, 0), 3, 1)


@pytest.mark.parametrize("name", sorted(REFS))
def test_reference_is_highest(name):
    ref = REFS[name]
    p = Path.reference(ref)
    assert is_highest(p)
    H = table(ref)
    assert energy_E(p, H) == 0
    assert weight_W(p, H) == WeightP(ref.crystal.phi(ref.at(1)), 0)


def test_lower_first_acts_at_position_one():
    ref = REFS["A3l1"]
    p = Path.reference(ref)
    admissible = [i for i in ref.crystal.cartan.nodes if path_step(LOWER, i, p) is not None]
    assert admissible == [0]
    q = path_step(LOWER, 0, p)
    assert q.cells == (ARow((1, 0, 0)),)


@pytest.mark.parametrize("name", sorted(REFS))
def test_raise_lower_inverse(name):
    ref = REFS[name]
    nodes = ref.crystal.cartan.nodes
    for p in all_paths(ref, 2):
        for i in nodes:
            q = path_step(LOWER, i, p)
            if q is not None:
                assert path_step(RAISE, i, q) == p
            r = path_step(RAISE, i, p)
            if r is not None:
                assert path_step(LOWER, i, r) == p


@pytest.mark.parametrize("name", ["C2l3", "A3l2m1"])
def test_energy_and_weight_steps(name):
    ref = REFS[name]
    H = table(ref)
    cartan = ref.crystal.cartan
    for p in all_paths(ref, 2):
        w = weight_W(p, H)
        eps, phi = path_epsilon(p), path_phi(p)
        assert w.cl == sub(phi, eps)
        for i in cartan.nodes:
            q = path_step(RAISE, i, p)
            if q is None:
                continue
            wq = weight_W(q, H)
            assert energy_E(q, H) == energy_E(p, H) - (i == 0)
            assert wq.cl == add(w.cl, cartan.simple_root(i))
            assert wq.delta == w.delta + (i == 0)


@pytest.mark.parametrize("name", ["C2l3", "A3l2m1", "A3l1"])
def test_retruncation_invariance(name):
    ref = REFS[name]
    H = table(ref)
    for p in all_paths(ref, 2):
        for window in (3, 4):
            assert energy_E(p, H, window) == energy_E(p, H)
            assert path_wt(p, window) == path_wt(p)
            assert path_epsilon(p, window) == path_epsilon(p)
            for i in ref.crystal.cartan.nodes:
                for d in (RAISE, LOWER):
                    assert path_step(d, i, p, window) == path_step(d, i, p)


@pytest.mark.parametrize("name", sorted(REFS))
@pytest.mark.parametrize("N", [0, 1, 2, 3])
def test_hw_enumeration_matches_oracle(name, N):
    ref = REFS[name]
    fast = enumerate_hw_paths(ref, N)
    assert len(fast) == len(set(fast))
    assert set(fast) == set(enumerate_hw_paths_oracle(ref, N))
    for p in fast:
        for j in range(N + 1):
            assert wt_tail(p, j) == ref.crystal.phi(p.at(j + 1))


def test_hw_counts_frozen():
    assert [len(enumerate_hw_paths(REFS["C2l3"], d)) for d in range(5)] == [1, 3, 6, 15, 15]
    assert [len(enumerate_hw_paths(REFS["A3l2m1"], d)) for d in range(5)] == [1, 2, 3, 3, 8]
    assert [len(enumerate_hw_paths(REFS["A3l1"], d)) for d in range(7)] == [1] * 7
    assert enumerate_hw_paths(REFS["A3l1"], 0) == [Path.reference(REFS["A3l1"])]


@pytest.mark.parametrize("name", ["C2l3", "A3l2m1", "A3l1"])
def test_every_path_reaches_highest(name):
    ref = REFS[name]
    for p in all_paths(ref, 3):
        top, word = raise_to_highest(p)
        assert is_highest(top)


def test_lambda_sequence():
    ref = REFS["A3l2m1"]
    lam = (1, 0, 0)
    for p in all_paths(ref, 2):
        seq = lambda_sequence(lam, p)
        for j in range(1, len(seq)):
            assert seq[j - 1] == add(seq[j], ref.crystal.weight(p.at(j)))
            assert seq[j] == add(lam, wt_tail(p, j))


@pytest.mark.parametrize("name,lam", [
    ("A3l1", (0, 0, 0)), ("A3l1", (1, 0, 0)), ("A3l1", (1, 1, 0)),
    ("C2l1", (0, 0, 0)), ("C2l1", (1, 0, 0)), ("C2l1", (1, 1, 0)),
    ("C2l3", (1, 0, 0)),
])
def test_restricted_matches_oracle(name, lam):
    ref = REFS[name]
    paths = list(all_paths(ref, 3))
    defn = {p for p in paths if is_restricted(lam, p)}
    assert defn == {p for p in paths if is_restricted_oracle(lam, p)}
    assert defn == set(enumerate_restricted(lam, ref, 3))


def test_restricted_extremes():
    ref = REFS["C2l1"]
    big = (9, 9, 9)
    assert len(enumerate_restricted(big, ref, 3)) == len(ref.crystal) ** 3
    for name in ("C2l1", "A3l1", "A3l2m1"):
        r = REFS[name]
        zero = r.crystal.cartan.zero()
        for N in range(4):
            assert set(enumerate_restricted(zero, r, N)) == set(enumerate_hw_paths(r, N))


def test_restricted_counts_frozen():
    assert [len(enumerate_restricted((1, 0, 0), REFS["C2l1"], d)) for d in range(5)] == [1, 3, 6, 15, 15]
    assert [len(enumerate_restricted((1, 1, 0), REFS["C2l1"], d)) for d in range(5)] == [1, 3, 10, 22, 44]
    assert [len(enumerate_restricted((1, 0, 0), REFS["A3l1"], d)) for d in range(5)] == [1, 2, 3, 3, 8]


def test_path_json_roundtrip():
    ref = REFS["C2l3"]
    for p in all_paths(ref, 2):
        obj = p.to_json()
        assert len(obj["entries"]) == p.depth
        assert path_from_json(ref, obj) == p
    p = Path.make(ref, [CSpin((3, 0), (0, 0)), ref.at(2)])
    assert p.depth == 1
    assert p.entries(window=2) == [ref.at(2), CSpin((3, 0), (0, 0))]
