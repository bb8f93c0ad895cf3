"""Combinatorial R-matrix and energy functions.

The R-matrix B1 (x) B2 -> B2 (x) B1 is found by seeding a weight of
multiplicity one on both sides and propagating along every arrow; the
energy function is then filled in by breadth-first search over raising
arrows.  Closed formulas for H are available for homogeneous products of
the family crystals and serve as the canonical normalization.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Callable

from .cache import TableCache
from .cartan import add
from .crystal import (
    LOWER,
    RAISE,
    Crystal,
    CrystalError,
    TensorElem,
    TensorProduct,
    classical_components,
    extremal_weight,
)
from .families import KRCrystalA, KRCrystalC


class RMatrixError(CrystalError):
    pass


class EnergyError(CrystalError):
    pass


class RMap:
    """A crystal isomorphism B1 (x) B2 -> B2 (x) B1 stored as a lookup table."""

    def __init__(self, domain: TensorProduct, codomain: TensorProduct, pairs: dict):
        self.domain = domain
        self.codomain = codomain
        self.pairs = pairs

    def __call__(self, x):
        return self.pairs[x]

    def __len__(self):
        return len(self.pairs)

    def items(self):
        return self.pairs.items()

    def inverse(self) -> "RMap":
        return RMap(self.codomain, self.domain, {y: x for x, y in self.pairs.items()})

    def is_identity(self) -> bool:
        return all(x == y for x, y in self.pairs.items())

    def to_json(self) -> dict:
        return {
            "pairs": [
                [self.domain.to_json(x), self.codomain.to_json(y)]
                for x, y in self.pairs.items()
            ]
        }


def _seed_weight(dom: TensorProduct, cod: TensorProduct, b1: Crystal, b2: Crystal):
    md = Counter(dom.weight(x) for x in dom)
    mc = Counter(cod.weight(y) for y in cod)
    cand = add(extremal_weight(b1), extremal_weight(b2))
    if md[cand] == 1 and mc[cand] == 1:
        return cand
    ones = [w for w, k in md.items() if k == 1 and mc[w] == 1]
    if not ones:
        raise RMatrixError("no weight of multiplicity one on both sides")
    return max(ones)


def compute_R(b1: Crystal, b2: Crystal) -> RMap:
    dom = TensorProduct(b1, b2)
    cod = TensorProduct(b2, b1)
    if b1 == b2:
        return RMap(dom, cod, {x: x for x in dom})
    w = _seed_weight(dom, cod, b1, b2)
    x0 = next(x for x in dom if dom.weight(x) == w)
    y0 = next(y for y in cod if cod.weight(y) == w)
    pairs = {x0: y0}
    inverse = {y0: x0}
    queue = deque([x0])
    nodes = b1.cartan.nodes
    while queue:
        x = queue.popleft()
        y = pairs[x]
        for i in nodes:
            for direction in (RAISE, LOWER):
                x2 = dom.step(direction, i, x)
                y2 = cod.step(direction, i, y)
                if (x2 is None) != (y2 is None):
                    raise RMatrixError(
                        f"{direction}_{i} defined on only one side of "
                        f"{dom.label(x)} -> {cod.label(y)}"
                    )
                if x2 is None:
                    continue
                if x2 in pairs:
                    if pairs[x2] != y2:
                        raise RMatrixError(f"conflicting images for {dom.label(x2)}")
                    continue
                if y2 in inverse:
                    raise RMatrixError(f"{cod.label(y2)} hit twice")
                pairs[x2] = y2
                inverse[y2] = x2
                queue.append(x2)
    if len(pairs) != len(dom) or len(inverse) != len(cod):
        raise RMatrixError("propagation did not cover both products; not connected")
    for x, y in pairs.items():
        if dom.weight(x) != cod.weight(y):
            raise RMatrixError(f"weight not preserved at {dom.label(x)}")
    return RMap(dom, cod, pairs)


# -- closed forms -----------------------------------------------------------


def closed_H_A(b, b2) -> int:
    """max_j ( sum_{k<j} (b2_k - b_k) + b2_j ) for type A rows b (x) b2."""
    best = None
    run = 0
    for j in range(len(b.a)):
        val = run + b2.a[j]
        best = val if best is None else max(best, val)
        run += b2.a[j] - b.a[j]
    return best


def closed_H_C(b, b2) -> int:
    """Energy of B^{1,l} (x) B^{1,l} for C_n^(1) as a max of four families of linear forms."""
    n = len(b.x)
    half = (b2.s - b.s) // 2
    best = None
    sbar = 0  # sum_{k<j} (xbar_k - xbar'_k)
    sx = 0  # sum_{k<j} (x'_k - x_k)
    for j in range(n):
        theta = sbar + half
        theta2 = sx - half
        eta = sbar + (b.xbar[j] - b.x[j]) + half
        eta2 = sx + (b2.x[j] - b2.xbar[j]) - half
        m = max(theta, theta2, eta, eta2)
        best = m if best is None else max(best, m)
        sbar += b.xbar[j] - b2.xbar[j]
        sx += b2.x[j] - b.x[j]
    return best


def closed_form(b1: Crystal, b2: Crystal) -> Callable | None:
    if isinstance(b1, KRCrystalA) and isinstance(b2, KRCrystalA):
        return closed_H_A
    if isinstance(b1, KRCrystalC) and b1 == b2:
        return closed_H_C
    return None


# -- energy by breadth-first search -----------------------------------------


@dataclass
class HTable:
    values: dict
    anchor: tuple

    def __getitem__(self, x) -> int:
        return self.values[x]

    def __len__(self):
        return len(self.values)

    def shifted(self, c: int) -> "HTable":
        return HTable({x: v + c for x, v in self.values.items()}, (self.anchor[0], self.anchor[1] + c))


def default_anchor(b1: Crystal, b2: Crystal) -> TensorElem:
    """Pair of principal classical highest weight elements."""
    return TensorElem(classical_components(b1)[0].highest, classical_components(b2)[0].highest)


def energy_step(i: int, x: TensorElem, rx: TensorElem, b1: Crystal, b2: Crystal) -> int:
    """H(e_i x) - H(x) given x and its R-image rx = bt2 (x) bt1."""
    if i != 0:
        return 0
    left = b1.phi(x.left)[0] >= b2.epsilon(x.right)[0]
    left_r = b2.phi(rx.left)[0] >= b1.epsilon(rx.right)[0]
    if left and left_r:
        return 1
    if not left and not left_r:
        return -1
    return 0


def compute_H_bfs(b1: Crystal, b2: Crystal, R: RMap | None = None, anchor=None) -> HTable:
    dom = TensorProduct(b1, b2)
    if R is None:
        R = compute_R(b1, b2)
    if anchor is None:
        anchor = (default_anchor(b1, b2), 0)
    x0, v0 = anchor
    values = {x0: v0}
    queue = deque([x0])
    nodes = b1.cartan.nodes

    def assign(x, v):
        old = values.get(x)
        if old is None:
            values[x] = v
            queue.append(x)
        elif old != v:
            raise EnergyError(f"inconsistent energy at {dom.label(x)}: {old} vs {v}")

    while queue:
        x = queue.popleft()
        h = values[x]
        for i in nodes:
            y = dom.e(i, x)
            if y is not None:
                assign(y, h + energy_step(i, x, R(x), b1, b2))
            z = dom.f(i, x)
            if z is not None:
                assign(z, h - energy_step(i, z, R(z), b1, b2))
    if len(values) != len(dom):
        raise EnergyError("tensor product is not connected")
    return HTable(values, anchor)


# -- normalized tables with memo and disk cache -----------------------------

_R_MEMO: dict = {}
_H_MEMO: dict = {}


def get_R(b1: Crystal, b2: Crystal, cache: TableCache | None = None) -> RMap:
    key = (b1.key, b2.key)
    if key in _R_MEMO and cache is None:
        return _R_MEMO[key]
    dom, cod = TensorProduct(b1, b2), TensorProduct(b2, b1)
    payload = cache.load("R", {"left": b1.key, "right": b2.key}) if cache else None
    if payload is not None:
        R = RMap(dom, cod, {dom.from_json(a): cod.from_json(b) for a, b in payload["pairs"]})
    else:
        R = compute_R(b1, b2)
        if cache is not None:
            cache.store("R", {"left": b1.key, "right": b2.key}, R.to_json())
    _R_MEMO[key] = R
    return R


def energy_table(b1: Crystal, b2: Crystal, cache: TableCache | None = None, anchor=None) -> HTable:
    """Energy function of B1 (x) B2 in its canonical normalization.

    When a closed formula exists the BFS table is shifted to agree with it at
    the anchor; otherwise the anchor gets the value 0 (or the given value).
    """
    dom = TensorProduct(b1, b2)
    closed = closed_form(b1, b2)
    if anchor is None:
        x0 = default_anchor(b1, b2)
        anchor = (x0, closed(x0.left, x0.right) if closed else 0)
    key = (b1.key, b2.key, anchor)
    if key in _H_MEMO and cache is None:
        return _H_MEMO[key]
    ckey = {"left": b1.key, "right": b2.key, "anchor": [dom.to_json(anchor[0]), anchor[1]]}
    payload = cache.load("H", ckey) if cache else None
    if payload is not None:
        table = HTable({dom.from_json(a): v for a, v in payload["values"]}, anchor)
    else:
        table = compute_H_bfs(b1, b2, get_R(b1, b2, cache), anchor)
        if cache is not None:
            cache.store("H", ckey, {
                "anchor": [dom.to_json(anchor[0]), anchor[1]],
                "values": [[dom.to_json(x), table[x]] for x in dom],
            })
    _H_MEMO[key] = table
    return table


def clear_memo() -> None:
    _R_MEMO.clear()
    _H_MEMO.clear()


# -- energy of a tensor product from its factors ----------------------------


@dataclass
class DecompositionReport:
    ok: bool
    constant: int | None
    checked: int
    discrepancies: list


def decompose_H(b1: Crystal, b2: Crystal, alternative: bool = False) -> DecompositionReport:
    """Check that H_BB for B = B1 (x) B2 splits into four factor energies.

    The default split is H12(b1 b2) + H11(bt1 b1') + H22(b2 bt2') + H12(b1' b2')
    with R(b1 b2) = bt2 bt1 and R(b1' b2') = bt2' bt1'.  The alternative split
    is H21(b2 b1') + H11(b1 bc1') + H22(bc2 b2') + H12(bc1' bc2) where
    R21(b2 b1') = bc1' bc2.  Equality is required up to one global constant.
    """
    big = TensorProduct(b1, b2)
    hbb = energy_table(big, big)
    h12 = energy_table(b1, b2)
    h11 = energy_table(b1, b1)
    h22 = energy_table(b2, b2)
    r12 = get_R(b1, b2)
    if alternative:
        h21 = energy_table(b2, b1)
        r21 = get_R(b2, b1)
    diffs = Counter()
    witness = {}
    for x in big:
        for y in big:
            if not alternative:
                bt2, bt1 = r12(x)
                bt2p, _ = r12(y)
                total = (h12[x] + h11[TensorElem(bt1, y.left)]
                         + h22[TensorElem(x.right, bt2p)] + h12[y])
            else:
                bc1p, bc2 = r21(TensorElem(x.right, y.left))
                total = (h21[TensorElem(x.right, y.left)] + h11[TensorElem(x.left, bc1p)]
                         + h22[TensorElem(bc2, y.right)] + h12[TensorElem(bc1p, bc2)])
            d = hbb[TensorElem(x, y)] - total
            diffs[d] += 1
            witness.setdefault(d, (big.label(x), big.label(y)))
    checked = sum(diffs.values())
    if len(diffs) == 1:
        return DecompositionReport(True, next(iter(diffs)), checked, [])
    common = diffs.most_common(1)[0][0]
    bad = [(d, witness[d]) for d in diffs if d != common]
    return DecompositionReport(False, None, checked, bad)
