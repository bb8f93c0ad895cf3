"""Affine Cartan data and weight arithmetic for A_{n-1}^(1) and C_n^(1).

Classical weights (elements of P_cl) are plain tuples of integers indexed by
the Dynkin nodes: ``w[i]`` is the coefficient of the fundamental weight
Lambda_i, which is also the pairing <h_i, w>.  Affine weights carry an extra
integer coefficient of the null root delta (see :class:`WeightP`).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cache, cached_property
from itertools import combinations_with_replacement
from typing import NamedTuple

Weight = tuple[int, ...]


class Family(str, Enum):
    A = "A"
    C = "C"


@dataclass(frozen=True)
class AffineCartanData:
    """Cartan data of A_{n-1}^(1) (``family=A``) or C_n^(1) (``family=C``).

    Node 0 is always the affine node.  For type A the nodes are 0..n-1, for
    type C they are 0..n with the short/long conventions of Kac, so that
    ``cartan_affine[i][j] = <h_i, alpha_j>``.
    """

    family: Family
    n: int

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.family is Family.A and self.n < 2:
            raise ValueError(f"type A needs n >= 2, got {self.n}")
        if self.family is Family.C and self.n < 1:
            raise ValueError(f"type C needs n >= 1, got {self.n}")

    @property
    def size(self) -> int:
        return self.n if self.family is Family.A else self.n + 1

    @property
    def nodes(self) -> range:
        return range(self.size)

    @property
    def rank(self) -> int:
        """Number of Dynkin nodes (affine node included)."""
        return self.size

    @cached_property
    def marks(self) -> Weight:
        if self.family is Family.A or self.n == 1:
            return (1,) * self.size
        return (1,) + (2,) * (self.n - 1) + (1,)

    @cached_property
    def comarks(self) -> Weight:
        return (1,) * self.size

    @cached_property
    def cartan_affine(self) -> tuple[Weight, ...]:
        k = self.size
        a = [[2 if i == j else 0 for j in range(k)] for i in range(k)]
        if k == 2:
            a[0][1] = a[1][0] = -2
        elif self.family is Family.A:
            for i in range(k):
                a[i][(i + 1) % k] = a[(i + 1) % k][i] = -1
        else:
            n = self.n
            for i in range(1, n - 1):
                a[i][i + 1] = a[i + 1][i] = -1
            a[0][1], a[1][0] = -1, -2
            a[n - 1][n], a[n][n - 1] = -2, -1
        return tuple(tuple(row) for row in a)

    @cached_property
    def cartan_classical(self) -> tuple[Weight, ...]:
        return tuple(row[1:] for row in self.cartan_affine[1:])

    def simple_root(self, i: int) -> Weight:
        """alpha_i as an element of P_cl: its pairings with every h_j."""
        return tuple(self.cartan_affine[j][i] for j in self.nodes)

    def fundamental(self, i: int) -> Weight:
        return tuple(int(j == i) for j in self.nodes)

    def zero(self) -> Weight:
        return (0,) * self.size

    def check_weight(self, w) -> Weight:
        w = tuple(int(c) for c in w)
        if len(w) != self.size:
            raise ValueError(
                f"weight {w} has {len(w)} coefficients, expected {self.size}"
            )
        return w


@cache
def cartan_data(family, n: int) -> AffineCartanData:
    return AffineCartanData(Family(family), n)


class WeightP(NamedTuple):
    """Affine weight: classical part plus coefficient of delta."""

    cl: Weight
    delta: int = 0


def add(u: Weight, v: Weight) -> Weight:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Weight, v: Weight) -> Weight:
    return tuple(a - b for a, b in zip(u, v))


def leq(u: Weight, v: Weight) -> bool:
    """u <= v in P_cl, i.e. v - u is dominant."""
    return all(a <= b for a, b in zip(u, v))


def is_dominant(w: Weight) -> bool:
    return all(c >= 0 for c in w)


def level(cartan: AffineCartanData, w: Weight) -> int:
    return sum(a * c for a, c in zip(cartan.comarks, w))


def dominant_weights_of_level(cartan: AffineCartanData, lev: int) -> list[Weight]:
    """All of (P_cl^+)_lev, in lexicographically decreasing order."""
    if lev < 0:
        raise ValueError("level must be nonnegative")
    if any(a != 1 for a in cartan.comarks):
        raise NotImplementedError("only comarks equal to 1 are supported")
    out = []
    for combo in combinations_with_replacement(cartan.nodes, lev):
        w = [0] * cartan.size
        for i in combo:
            w[i] += 1
        out.append(tuple(w))
    return sorted(out, reverse=True)


def sigma(cartan: AffineCartanData, w: Weight) -> Weight:
    """Diagram rotation Lambda_i -> Lambda_{i-1} of A_{n-1}^(1)."""
    if cartan.family is not Family.A:
        raise ValueError("sigma is only defined for type A")
    k = cartan.size
    return tuple(w[(i + 1) % k] for i in range(k))


def classical_root_decomposition(cartan: AffineCartanData, w: Weight):
    """Write the classical part of ``w`` in the basis of classical simple roots.

    The node-0 coordinate is dropped and the remaining pairings are solved
    against the classical Cartan matrix.  Returns a tuple of Fractions, or
    None when the system has no rational solution.
    """
    from sympy import Matrix, Rational

    if cartan.size == 1:
        return ()
    a = Matrix(cartan.cartan_classical)
    assert a.det() != 0, "classical Cartan matrix must be nonsingular"
    rhs = Matrix([Rational(c) for c in w[1:]])
    try:
        sol = a.LUsolve(rhs)
    except ValueError:
        return None
    return tuple(Fraction(int(c.p), int(c.q)) for c in sol)


def weight_to_json(cartan: AffineCartanData, w, delta: int | None = None) -> dict:
    obj = {"family": cartan.family.value, "n": cartan.n, "coeffs": list(w)}
    if delta is not None:
        obj["delta"] = delta
    return obj


def weight_from_json(obj: dict):
    cartan = cartan_data(obj["family"], obj["n"])
    w = cartan.check_weight(obj["coeffs"])
    if "delta" in obj:
        return cartan, WeightP(w, int(obj["delta"]))
    return cartan, w


def parse_weight(cartan: AffineCartanData, text: str) -> Weight:
    """Parse a comma separated coefficient list such as ``"1,0,0"``."""
    try:
        coeffs = [int(c) for c in text.split(",") if c.strip()]
    except ValueError as exc:
        raise ValueError(f"bad weight {text!r}") from exc
    return cartan.check_weight(coeffs)


def format_weight(w: Weight) -> str:
    terms = []
    for i, c in enumerate(w):
        if c == 0:
            continue
        coef = "" if c == 1 else ("-" if c == -1 else str(c))
        terms.append(f"{coef}L{i}")
    if not terms:
        return "0"
    return "+".join(terms).replace("+-", "-")
