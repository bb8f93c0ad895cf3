"""Rule-backed crystals B^{1,l} of A_{n-1}^(1) and C_n^(1) (l odd)."""

from __future__ import annotations

from typing import NamedTuple

from .cartan import Family, Weight, cartan_data, level
from .crystal import Crystal


class ARow(NamedTuple):
    """Element (a_0, ..., a_{n-1}) of the symmetric tensor crystal."""

    a: tuple[int, ...]


class CSpin(NamedTuple):
    """Element (x_1..x_n | xbar_n..xbar_1); ``xbar[k-1]`` holds xbar_k."""

    x: tuple[int, ...]
    xbar: tuple[int, ...]

    @property
    def s(self) -> int:
        return sum(self.x) + sum(self.xbar)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class KRCrystalA(Crystal):
    def __init__(self, n: int, l: int):
        if l < 0:
            raise ValueError("l must be nonnegative")
        self.cartan = cartan_data(Family.A, n)
        self.n = n
        self.l = l

    @property
    def key(self):
        return ("A", self.n, self.l)

    def _build_elements(self):
        return [ARow(c) for c in _compositions(self.l, self.n)]

    def e(self, r, b):
        a = b.a
        if a[r] == 0:
            return None
        new = list(a)
        new[r] -= 1
        new[(r - 1) % self.n] += 1
        return ARow(tuple(new))

    def f(self, r, b):
        a = b.a
        if a[(r - 1) % self.n] == 0:
            return None
        new = list(a)
        new[r] += 1
        new[(r - 1) % self.n] -= 1
        return ARow(tuple(new))

    def epsilon(self, b):
        return b.a

    def phi(self, b):
        a = b.a
        return tuple(a[(i - 1) % self.n] for i in range(self.n))

    def label(self, b):
        return "(" + ",".join(map(str, b.a)) + ")"

    def to_json(self, b):
        return list(b.a)

    def from_json(self, obj):
        b = ARow(tuple(int(v) for v in obj))
        if len(b.a) != self.n or sum(b.a) != self.l or min(b.a) < 0:
            raise ValueError(f"{obj} is not an element of B^(1,{self.l})")
        return b


class KRCrystalC(Crystal):
    def __init__(self, n: int, l: int):
        if l < 1 or l % 2 == 0:
            raise ValueError(f"type C B^(1,l) needs odd l >= 1, got {l}")
        self.cartan = cartan_data(Family.C, n)
        self.n = n
        self.l = l

    @property
    def key(self):
        return ("C", self.n, self.l)

    def _build_elements(self):
        n = self.n
        out = []
        for s in range(self.l, 0, -2):
            for c in _compositions(s, 2 * n):
                out.append(CSpin(c[:n], c[n:][::-1]))
        return out

    def _make(self, x, xbar):
        if min(x) < 0 or min(xbar) < 0 or sum(x) + sum(xbar) > self.l:
            return None
        return CSpin(tuple(x), tuple(xbar))

    def e(self, i, b):
        x, xb = list(b.x), list(b.xbar)
        n = self.n
        if i == 0:
            if x[0] >= xb[0] + 2:
                x[0] -= 2
            elif x[0] == xb[0] + 1:
                x[0] -= 1
                xb[0] += 1
            else:
                xb[0] += 2
        elif i == n:
            x[n - 1] += 1
            xb[n - 1] -= 1
        else:
            if x[i] > xb[i]:
                x[i - 1] += 1
                x[i] -= 1
            else:
                xb[i] += 1
                xb[i - 1] -= 1
        return self._make(x, xb)

    def f(self, i, b):
        x, xb = list(b.x), list(b.xbar)
        n = self.n
        if i == 0:
            if x[0] >= xb[0]:
                x[0] += 2
            elif x[0] == xb[0] - 1:
                x[0] += 1
                xb[0] -= 1
            else:
                xb[0] -= 2
        elif i == n:
            x[n - 1] -= 1
            xb[n - 1] += 1
        else:
            if x[i] >= xb[i]:
                x[i - 1] -= 1
                x[i] += 1
            else:
                xb[i] -= 1
                xb[i - 1] += 1
        return self._make(x, xb)

    def epsilon(self, b):
        x, xb, n = b.x, b.xbar, self.n
        out = [(self.l - b.s) // 2 + max(x[0] - xb[0], 0)]
        out += [xb[i - 1] + max(x[i] - xb[i], 0) for i in range(1, n)]
        out.append(xb[n - 1])
        return tuple(out)

    def phi(self, b):
        x, xb, n = b.x, b.xbar, self.n
        out = [(self.l - b.s) // 2 + max(xb[0] - x[0], 0)]
        out += [x[i - 1] + max(xb[i] - x[i], 0) for i in range(1, n)]
        out.append(x[n - 1])
        return tuple(out)

    def label(self, b):
        return "(" + ",".join(map(str, b.x)) + "|" + ",".join(map(str, b.xbar[::-1])) + ")"

    def to_json(self, b):
        return list(b.x) + list(b.xbar[::-1])

    def from_json(self, obj):
        vals = [int(v) for v in obj]
        n = self.n
        if len(vals) != 2 * n:
            raise ValueError(f"{obj} does not have {2 * n} coordinates")
        b = CSpin(tuple(vals[:n]), tuple(vals[n:][::-1]))
        if min(vals) < 0 or b.s > self.l or (self.l - b.s) % 2:
            raise ValueError(f"{obj} is not an element of B^(1,{self.l})")
        return b


def kr_crystal(family, n: int, l: int) -> Crystal:
    return KRCrystalA(n, l) if Family(family) is Family.A else KRCrystalC(n, l)


class ClassLabel(NamedTuple):
    """Index k of b^mu_k (``bar=False``) or b^mu_{kbar} (``bar=True``)."""

    k: int
    bar: bool

    def __str__(self):
        return f"{self.k}bar" if self.bar else str(self.k)


def c_minimal_class(crystal: KRCrystalC, mu: Weight) -> dict[ClassLabel, CSpin]:
    """B^{<=mu} for mu of level (l+1)/2, keyed by the class label.

    Every element built from the coordinate formulas is checked against
    eps(b) <= mu and the highest weight property e_i^{mu_i+1} b = 0.
    """
    n, l = crystal.n, crystal.l
    cartan = crystal.cartan
    mu = cartan.check_weight(mu)
    if min(mu) < 0 or level(cartan, mu) != (l + 1) // 2:
        raise ValueError(f"mu={mu} is not dominant of level {(l + 1) // 2}")
    out = {}
    for k in range(1, n + 1):
        if mu[k - 1] > 0:
            x = list(mu[1:])
            xb = list(mu[1:])
            x[k - 1] += 1
            if k >= 2:
                x[k - 2] -= 1
                xb[k - 2] -= 1
            out[ClassLabel(k, False)] = CSpin(tuple(x), tuple(xb))
    for k in range(1, n + 1):
        if mu[k] > 0:
            x = list(mu[1:])
            x[k - 1] -= 1
            out[ClassLabel(k, True)] = CSpin(tuple(x), tuple(mu[1:]))
    for lab, b in out.items():
        if b not in crystal:
            raise AssertionError(f"b^mu_{lab} = {b} is not in B^(1,{l})")
        eps = crystal.epsilon(b)
        if any(e > m for e, m in zip(eps, mu)):
            raise AssertionError(f"b^mu_{lab}: eps={eps} not <= mu={mu}")
        for i in cartan.nodes:
            y = b
            for _ in range(mu[i] + 1):
                y = crystal.e(i, y) if y is not None else None
            if y is not None:
                raise AssertionError(f"b^mu_{lab} survives e_{i}^{mu[i] + 1}")
    return out


def b_dagger(n: int, lab: ClassLabel) -> CSpin:
    """Element of B^{1,1} with a single 1 at x_k (or xbar_k)."""
    unit = tuple(int(i == lab.k - 1) for i in range(n))
    zero = (0,) * n
    return CSpin(zero, unit) if lab.bar else CSpin(unit, zero)


def b_le(crystal: Crystal, mu: Weight) -> list:
    """B^{<=mu} = {b : eps(b) <= mu}, i.e. e_i^{<h_i,mu>+1} b = 0 for all i."""
    return [b for b in crystal if all(e <= m for e, m in zip(crystal.epsilon(b), mu))]
