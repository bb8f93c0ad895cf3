"""Finite crystals, tensor products and the decision procedures run on them.

A crystal is anything implementing the :class:`Crystal` interface: a finite
element universe, partial operators ``e``/``f`` per Dynkin node returning
``None`` for the zero element, and closed-form ``epsilon``/``phi``/``weight``.
The checkers in this module never trust the closed forms: they recount
epsilon/phi by iterating the operators.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, NamedTuple

from .cartan import (
    AffineCartanData,
    Weight,
    add,
    classical_root_decomposition,
    dominant_weights_of_level,
    level,
    sub,
)

RAISE = "raise"
LOWER = "lower"


class CrystalError(Exception):
    """A crystal oracle violated a structural identity it must satisfy."""


class Crystal:
    """Base class of finite crystals.

    Subclasses provide ``_build_elements``, ``e``, ``f``, ``epsilon``, ``phi``,
    ``label`` and ``key``; ``weight`` defaults to ``phi - epsilon``.
    """

    cartan: AffineCartanData

    def _build_elements(self) -> tuple:
        raise NotImplementedError

    def elements(self) -> tuple:
        try:
            return self._elements
        except AttributeError:
            self._elements = tuple(self._build_elements())
            return self._elements

    def __iter__(self):
        return iter(self.elements())

    def __len__(self):
        return len(self.elements())

    def __contains__(self, b):
        try:
            members = self._members
        except AttributeError:
            members = self._members = frozenset(self.elements())
        return b in members

    def index(self, b) -> int:
        try:
            idx = self._index
        except AttributeError:
            idx = self._index = {x: k for k, x in enumerate(self.elements())}
        return idx[b]

    @property
    def key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Crystal) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"{type(self).__name__}({self.key!r})"

    def e(self, i: int, b):
        raise NotImplementedError

    def f(self, i: int, b):
        raise NotImplementedError

    def step(self, direction: str, i: int, b):
        return self.e(i, b) if direction == RAISE else self.f(i, b)

    def epsilon(self, b) -> Weight:
        raise NotImplementedError

    def phi(self, b) -> Weight:
        raise NotImplementedError

    def weight(self, b) -> Weight:
        return sub(self.phi(b), self.epsilon(b))

    def label(self, b) -> str:
        return str(b)

    def to_json(self, b):
        raise NotImplementedError

    def from_json(self, obj):
        raise NotImplementedError


class TensorElem(NamedTuple):
    left: object
    right: object


def tensor_step(direction: str, i: int, x: TensorElem, b1: Crystal, b2: Crystal):
    """Signature rule: raise acts left iff phi_i(left) >= eps_i(right),
    lower acts left iff phi_i(left) > eps_i(right)."""
    left, right = x
    p = b1.phi(left)[i]
    q = b2.epsilon(right)[i]
    if direction == RAISE:
        if p >= q:
            y = b1.e(i, left)
            return None if y is None else TensorElem(y, right)
        y = b2.e(i, right)
        return None if y is None else TensorElem(left, y)
    if p > q:
        y = b1.f(i, left)
        return None if y is None else TensorElem(y, right)
    y = b2.f(i, right)
    return None if y is None else TensorElem(left, y)


def tensor_stats(x: TensorElem, b1: Crystal, b2: Crystal):
    """(epsilon, phi, weight) of ``x`` from the statistics of its factors."""
    e1, p1 = b1.epsilon(x.left), b1.phi(x.left)
    e2, p2 = b2.epsilon(x.right), b2.phi(x.right)
    eps = tuple(max(a, a + c - b) for a, b, c in zip(e1, p1, e2))
    phi = tuple(max(d, b + d - c) for b, c, d in zip(p1, e2, p2))
    wt = add(b1.weight(x.left), b2.weight(x.right))
    return eps, phi, wt


class TensorProduct(Crystal):
    """B1 (x) B2; longer products are built by nesting on the left."""

    def __init__(self, left: Crystal, right: Crystal):
        if left.cartan != right.cartan:
            raise ValueError("tensor factors must share Cartan data")
        self.cartan = left.cartan
        self.left = left
        self.right = right
        self._stats: dict = {}

    @property
    def key(self):
        return ("tensor", self.left.key, self.right.key)

    def _build_elements(self):
        return [TensorElem(a, b) for a in self.left for b in self.right]

    def _stat(self, x):
        s = self._stats.get(x)
        if s is None:
            s = self._stats[x] = tensor_stats(x, self.left, self.right)
        return s

    def e(self, i, x):
        return tensor_step(RAISE, i, x, self.left, self.right)

    def f(self, i, x):
        return tensor_step(LOWER, i, x, self.left, self.right)

    def epsilon(self, x):
        return self._stat(x)[0]

    def phi(self, x):
        return self._stat(x)[1]

    def weight(self, x):
        return self._stat(x)[2]

    def label(self, x):
        return f"{self.left.label(x.left)}⊗{self.right.label(x.right)}"

    def to_json(self, x):
        return [self.left.to_json(x.left), self.right.to_json(x.right)]

    def from_json(self, obj):
        return TensorElem(self.left.from_json(obj[0]), self.right.from_json(obj[1]))

    def factors(self) -> list[Crystal]:
        """Flattened list of the left-nested factors."""
        out = []
        node = self
        while isinstance(node, TensorProduct):
            out.append(node.right)
            node = node.left
        out.append(node)
        return out[::-1]


def tensor(*crystals: Crystal) -> Crystal:
    """Left-nested tensor product of one or more crystals."""
    out = crystals[0]
    for c in crystals[1:]:
        out = TensorProduct(out, c)
    return out


# -- axiom checking ---------------------------------------------------------


class Violation(NamedTuple):
    element: str
    node: int | None
    message: str


def count_steps(crystal: Crystal, direction: str, i: int, b) -> int | None:
    """Number of times the operator applies to ``b``; None if it never stops."""
    cap = len(crystal) + 1
    k = 0
    y = crystal.step(direction, i, b)
    while y is not None:
        k += 1
        if k > cap:
            return None
        y = crystal.step(direction, i, y)
    return k


def check_axioms(crystal: Crystal) -> list[Violation]:
    """Exhaustively check the crystal axioms; an empty list means pass."""
    out = []
    cartan = crystal.cartan
    for b in crystal:
        lab = crystal.label(b)
        eps, phi, wt = crystal.epsilon(b), crystal.phi(b), crystal.weight(b)
        for i in cartan.nodes:
            for direction, back in ((RAISE, LOWER), (LOWER, RAISE)):
                y = crystal.step(direction, i, b)
                if y is None:
                    continue
                if y not in crystal:
                    out.append(Violation(lab, i, f"{direction} leaves the crystal"))
                    continue
                if crystal.step(back, i, y) != b:
                    out.append(Violation(lab, i, f"{direction} is not inverted by {back}"))
            ce = count_steps(crystal, RAISE, i, b)
            cp = count_steps(crystal, LOWER, i, b)
            if ce != eps[i]:
                out.append(Violation(lab, i, f"epsilon={eps[i]} but raise count={ce}"))
            if cp != phi[i]:
                out.append(Violation(lab, i, f"phi={phi[i]} but lower count={cp}"))
            if wt[i] != phi[i] - eps[i]:
                out.append(Violation(lab, i, f"<h_i,wt>={wt[i]} != phi-eps={phi[i] - eps[i]}"))
            y = crystal.e(i, b)
            if y is not None and y in crystal:
                if sub(crystal.weight(y), wt) != cartan.simple_root(i):
                    out.append(Violation(lab, i, "raise does not shift weight by alpha_i"))
    return out


# -- level and minimal elements --------------------------------------------


def level_and_minimal(crystal: Crystal) -> tuple[int, frozenset]:
    cartan = crystal.cartan
    levels = {}
    for b in crystal:
        le = level(cartan, crystal.epsilon(b))
        lp = level(cartan, crystal.phi(b))
        if le != lp:
            raise CrystalError(
                f"<c,eps>={le} but <c,phi>={lp} at {crystal.label(b)}"
            )
        levels[b] = le
    lev = min(levels.values())
    return lev, frozenset(b for b, v in levels.items() if v == lev)


def minimal_of_tensor(b1: Crystal, b2: Crystal) -> frozenset:
    """(B1 (x) B2)_min from the minimal sets of the factors."""
    l1, m1 = level_and_minimal(b1)
    l2, m2 = level_and_minimal(b2)
    out = set()
    if l1 >= l2:
        for x in m1:
            p = b1.phi(x)
            out.update(TensorElem(x, y) for y in b2 if all(a >= c for a, c in zip(p, b2.epsilon(y))))
    if l1 <= l2:
        for y in m2:
            e = b2.epsilon(y)
            out.update(TensorElem(x, y) for x in b1 if all(a <= c for a, c in zip(b1.phi(x), e)))
    return frozenset(out)


# -- connectivity, classical decomposition, simplicity ---------------------


def components(crystal: Crystal, colors: Iterable[int]) -> list[list]:
    """Connected components of the graph using only arrows of ``colors``."""
    colors = list(colors)
    seen = set()
    out = []
    for b in crystal:
        if b in seen:
            continue
        comp = []
        seen.add(b)
        queue = deque([b])
        while queue:
            x = queue.popleft()
            comp.append(x)
            for i in colors:
                for y in (crystal.e(i, x), crystal.f(i, x)):
                    if y is not None and y not in seen:
                        seen.add(y)
                        queue.append(y)
        out.append(comp)
    return out


def is_connected(crystal: Crystal) -> bool:
    return len(components(crystal, crystal.cartan.nodes)) == 1


class ClassicalComponent(NamedTuple):
    highest: object
    weight: Weight  # classical highest weight, nodes 1..
    size: int


def classical_components(crystal: Crystal) -> list[ClassicalComponent]:
    """Decompose into I minus {0} components, largest highest weight first."""
    colors = [i for i in crystal.cartan.nodes if i != 0]
    out = []
    for comp in components(crystal, colors):
        tops = [b for b in comp if all(crystal.e(i, b) is None for i in colors)]
        if len(tops) != 1:
            raise CrystalError(
                f"classical component of size {len(comp)} has {len(tops)} highest weight elements"
            )
        out.append(ClassicalComponent(tops[0], crystal.weight(tops[0])[1:], len(comp)))
    out.sort(key=lambda c: (c.weight, -c.size), reverse=True)
    return out


class SimplicityReport(NamedTuple):
    simple: bool
    principal: ClassicalComponent | None
    witness: list[str]


def is_simple(crystal: Crystal) -> SimplicityReport:
    """Sufficient criterion for simplicity through the classical decomposition.

    (1) every other classical highest weight lies strictly below the
    principal one in the classical root lattice, and (2) the highest weight
    element of every other component is not 0-extremal.
    """
    comps = classical_components(crystal)
    if len(comps) == 1:
        return SimplicityReport(True, comps[0], [])
    cartan = crystal.cartan
    witness = []
    principal = None
    for cand in comps:
        bad = []
        for other in comps:
            if other is cand:
                continue
            diff = (0,) + sub(other.weight, cand.weight)
            coeffs = classical_root_decomposition(cartan, diff)
            if coeffs is None or any(c.denominator != 1 or c > 0 for c in coeffs):
                bad.append(f"{other.weight} not below {cand.weight}: {coeffs}")
            elif all(c == 0 for c in coeffs):
                bad.append(f"repeated classical highest weight {other.weight}")
        if not bad:
            principal = cand
            break
        witness.extend(bad)
    if principal is None:
        return SimplicityReport(False, None, witness)
    witness = []
    for other in comps:
        if other is principal:
            continue
        b = other.highest
        if crystal.e(0, b) is None or crystal.f(0, b) is None:
            witness.append(f"highest weight element {crystal.label(b)} is 0-extremal")
    return SimplicityReport(not witness, principal, witness)


def extremal_weight(crystal: Crystal) -> Weight:
    """P_cl weight of the principal classical highest weight element."""
    report = is_simple(crystal)
    comp = report.principal or classical_components(crystal)[0]
    return crystal.weight(comp.highest)


def weight_multiplicity(crystal: Crystal, w: Weight) -> int:
    return sum(1 for b in crystal if crystal.weight(b) == w)


# -- eps and phi on minimal elements --------------------------------------


class CfinReport(NamedTuple):
    ok: bool
    level: int
    missed_epsilon: list[Weight]
    missed_phi: list[Weight]


def check_cfin_condition3(crystal: Crystal) -> CfinReport:
    """epsilon and phi restricted to B_min hit every dominant weight of level lev B.

    With all comarks equal to 1 this is the level condition on finite crystals.
    """
    lev, bmin = level_and_minimal(crystal)
    targets = dominant_weights_of_level(crystal.cartan, lev)
    eps_img = {crystal.epsilon(b) for b in bmin}
    phi_img = {crystal.phi(b) for b in bmin}
    me = [w for w in targets if w not in eps_img]
    mp = [w for w in targets if w not in phi_img]
    return CfinReport(not me and not mp, lev, me, mp)


# -- Weyl group action ------------------------------------------------------


def weyl_reflect(crystal: Crystal, i: int, b):
    if i not in crystal.cartan.nodes:
        raise ValueError(f"node {i} out of range")
    k = crystal.weight(b)[i]
    direction = LOWER if k >= 0 else RAISE
    for _ in range(abs(k)):
        b = crystal.step(direction, i, b)
        if b is None:
            raise CrystalError("string too short for the reflection; crystal not regular")
    return b


def weyl_act(crystal: Crystal, word: Iterable[int], b):
    """S_w b for w = s_{word[0]} ... s_{word[-1]} (rightmost letter acts first)."""
    for i in reversed(list(word)):
        b = weyl_reflect(crystal, i, b)
    return b


def is_i_extremal(crystal: Crystal, i: int, b) -> bool:
    return crystal.e(i, b) is None or crystal.f(i, b) is None


def is_extremal_bounded(crystal: Crystal, b, maxlen: int = 8) -> bool:
    """Check i-extremality on every S_w b with len(w) <= maxlen."""
    nodes = crystal.cartan.nodes
    seen = {b}
    frontier = [b]
    for _ in range(maxlen + 1):
        nxt = []
        for x in frontier:
            if not all(is_i_extremal(crystal, i, x) for i in nodes):
                return False
            for i in nodes:
                y = weyl_reflect(crystal, i, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        if not frontier:
            break
    return True


# -- rank 2 diagnostic ------------------------------------------------------


def _rank2_dimension(aij: int, aji: int, a: int, b: int) -> int | None:
    """Dimension of the irreducible module of the rank 2 subalgebra on {i, j}."""
    prod = aij * aji
    if prod == 0:
        return (a + 1) * (b + 1)
    if prod == 1:
        return (a + 1) * (b + 1) * (a + b + 2) // 2
    if prod == 2:
        # i short when <h_i, alpha_j> = -2
        if aij != -2:
            a, b = b, a
        return (a + 1) * (b + 1) * (a + b + 2) * (a + 2 * b + 3) // 6
    return None


def rank2_diagnostic(crystal: Crystal) -> list[Violation]:
    """Bounded regularity diagnostic over every finite-type pair of nodes.

    Each {i,j}-component must have a single highest weight element and the
    size predicted by the Weyl dimension formula.  Affine pairs are skipped.
    """
    cm = crystal.cartan.cartan_affine
    out = []
    nodes = list(crystal.cartan.nodes)
    for x, i in enumerate(nodes):
        for j in nodes[x + 1:]:
            if cm[i][j] * cm[j][i] >= 4:
                continue
            for comp in components(crystal, (i, j)):
                tops = [b for b in comp if crystal.e(i, b) is None and crystal.e(j, b) is None]
                if len(tops) != 1:
                    out.append(Violation(crystal.label(comp[0]), None, f"{{{i},{j}}}-component has {len(tops)} tops"))
                    continue
                w = crystal.weight(tops[0])
                dim = _rank2_dimension(cm[i][j], cm[j][i], w[i], w[j])
                if dim != len(comp):
                    out.append(Violation(crystal.label(tops[0]), None,
                                         f"{{{i},{j}}}-component size {len(comp)} != {dim}"))
    return out


# -- wrappers used for fault injection and counterexamples ------------------


class CorruptedCrystal(Crystal):
    """Redirects one lowering arrow; every other query goes to ``base``."""

    def __init__(self, base: Crystal, node: int, element, target):
        self.base = base
        self.cartan = base.cartan
        self.node = node
        self.element = element
        self.target = target

    @property
    def key(self):
        return ("corrupt", self.base.key, self.node, self.element, self.target)

    def _build_elements(self):
        return self.base.elements()

    def e(self, i, b):
        return self.base.e(i, b)

    def f(self, i, b):
        if i == self.node and b == self.element:
            return self.target
        return self.base.f(i, b)

    def epsilon(self, b):
        return self.base.epsilon(b)

    def phi(self, b):
        return self.base.phi(b)

    def weight(self, b):
        return self.base.weight(b)

    def label(self, b):
        return self.base.label(b)

    def to_json(self, b):
        return self.base.to_json(b)

    def from_json(self, obj):
        return self.base.from_json(obj)


class WithoutElements(CorruptedCrystal):
    """``base`` with some elements deleted; arrows into them become None."""

    def __init__(self, base: Crystal, removed: Iterable):
        self.base = base
        self.cartan = base.cartan
        self.removed = frozenset(removed)

    @property
    def key(self):
        return ("without", self.base.key, tuple(sorted(map(self.base.label, self.removed))))

    def _build_elements(self):
        return [b for b in self.base if b not in self.removed]

    def e(self, i, b):
        y = self.base.e(i, b)
        return None if y in self.removed else y

    def f(self, i, b):
        y = self.base.f(i, b)
        return None if y in self.removed else y


class DisjointUnion(Crystal):
    """``copies`` disjoint copies of ``base``; elements are (copy, b)."""

    def __init__(self, base: Crystal, copies: int = 2):
        self.base = base
        self.cartan = base.cartan
        self.copies = copies

    @property
    def key(self):
        return ("union", self.base.key, self.copies)

    def _build_elements(self):
        return [(k, b) for k in range(self.copies) for b in self.base]

    def e(self, i, x):
        y = self.base.e(i, x[1])
        return None if y is None else (x[0], y)

    def f(self, i, x):
        y = self.base.f(i, x[1])
        return None if y is None else (x[0], y)

    def epsilon(self, x):
        return self.base.epsilon(x[1])

    def phi(self, x):
        return self.base.phi(x[1])

    def weight(self, x):
        return self.base.weight(x[1])

    def label(self, x):
        return f"{x[0]}:{self.base.label(x[1])}"

    def to_json(self, x):
        return [x[0], self.base.to_json(x[1])]

    def from_json(self, obj):
        return (obj[0], self.base.from_json(obj[1]))


# -- graph export -----------------------------------------------------------


def graph_json(crystal: Crystal) -> dict:
    elems = crystal.elements()
    edges = []
    for k, b in enumerate(elems):
        for i in crystal.cartan.nodes:
            y = crystal.f(i, b)
            if y is not None:
                edges.append({"from": k, "to": crystal.index(y), "color": i})
    return {"elements": [crystal.label(b) for b in elems], "edges": edges}


def to_dot(crystal: Crystal, name: str = "crystal") -> str:
    g = graph_json(crystal)
    lines = [f"digraph {name} {{"]
    for k, lab in enumerate(g["elements"]):
        lines.append(f'  n{k} [label="{lab}"];')
    for edge in g["edges"]:
        lines.append(f'  n{edge["from"]} -> n{edge["to"]} [label="{edge["color"]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
