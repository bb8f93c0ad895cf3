"""Semi-infinite paths over a finite crystal with a periodic reference tail.

A path is stored by its finitely many deviating positions; everything
beyond ``depth`` coincides with the reference path.  Crystal operators act
through the signature rule on the finite window, with the tail reduced to
phi_i(ref(N+1)) unmatched plus signs (the reference chain cancels the rest).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product

from .cartan import Family, Weight, WeightP, add, cartan_data, level, sigma, sub
from .crystal import RAISE, Crystal, TensorElem, level_and_minimal, tensor
from .families import ARow, KRCrystalA, KRCrystalC, c_minimal_class


class ReferencePathError(ValueError):
    pass


@dataclass(frozen=True)
class RefPath:
    """Periodic reference path: ref(j) = period[(j - 1) % len(period)]."""

    crystal: Crystal
    period: tuple

    def at(self, j: int):
        return self.period[(j - 1) % len(self.period)]

    def problems(self) -> list[str]:
        B = self.crystal
        _, bmin = level_and_minimal(B)
        out = []
        for j, b in enumerate(self.period, start=1):
            if b not in bmin:
                out.append(f"ref({j}) = {B.label(b)} is not minimal")
            if B.phi(self.at(j + 1)) != B.epsilon(b):
                out.append(f"phi(ref({j + 1})) != eps(ref({j}))")
        return out

    def validated(self) -> "RefPath":
        bad = self.problems()
        if bad:
            raise ReferencePathError("; ".join(bad))
        return self

    def to_json(self) -> dict:
        return {"crystal": self.crystal.key, "period": [self.crystal.to_json(b) for b in self.period]}


def make_ref_C(crystal: KRCrystalC, lam: Weight) -> RefPath:
    """Reference path of B^{1,l} built from lam of level (l-1)/2, period 2n."""
    n, l = crystal.n, crystal.l
    cartan = crystal.cartan
    lam = cartan.check_weight(lam)
    if min(lam) < 0 or level(cartan, lam) != (l - 1) // 2:
        raise ReferencePathError(f"lambda={lam} is not dominant of level {(l - 1) // 2}")
    from .families import ClassLabel

    period = []
    for j in range(1, 2 * n + 1):
        if j <= n:
            i = j
            mu = add(lam, cartan.fundamental(i))
            period.append(c_minimal_class(crystal, mu)[ClassLabel(i, True)])
        else:
            i = 2 * n + 1 - j  # j = 1 - i mod 2n
            mu = add(lam, cartan.fundamental(i - 1))
            period.append(c_minimal_class(crystal, mu)[ClassLabel(i, False)])
    return RefPath(crystal, tuple(period)).validated()


def _check_level(cartan, w, lev, name):
    w = cartan.check_weight(w)
    if min(w) < 0 or level(cartan, w) != lev:
        raise ReferencePathError(f"{name}={w} is not dominant of level {lev}")
    return w


def make_ref_multi(n: int, lams, ls) -> RefPath:
    """Reference path of B^{1,l_1} (x) ... (x) B^{1,l_s} with l_1 >= ... >= l_s.

    lams[k] has level l_k - l_{k+1}.  The k-th factor of ref(j) has
    coordinate i equal to sum_{r >= k} lams[r]_{i + r j - k + 1} (1-based k, r).
    """
    cartan = cartan_data(Family.A, n)
    ls = list(ls)
    if any(a < b for a, b in zip(ls, ls[1:])) or ls[-1] < 0:
        raise ReferencePathError(f"levels {ls} must be non-increasing and nonnegative")
    s = len(ls)
    lams = [
        _check_level(cartan, lam, ls[k] - (ls[k + 1] if k + 1 < s else 0), f"lambda{k + 1}")
        for k, lam in enumerate(lams)
    ]
    factors = [KRCrystalA(n, l) for l in ls]
    crystal = tensor(*factors)
    period = []
    for j in range(1, n + 1):
        rows = []
        for k in range(1, s + 1):
            row = tuple(
                sum(lams[r - 1][(i + r * j - k + 1) % n] for r in range(k, s + 1))
                for i in range(n)
            )
            rows.append(ARow(row))
        elem = rows[0]
        for row in rows[1:]:
            elem = TensorElem(elem, row)
        period.append(elem)
    return RefPath(crystal, tuple(period)).validated()


def make_ref_A(n: int, lam: Weight, mu: Weight, l: int, m: int) -> RefPath:
    """ref(j) = (lam_{i+j} + mu_{i+2j}) (x) (mu_{i+2j-1}) in B^{1,l} (x) B^{1,m}."""
    ref = make_ref_multi(n, [lam, mu], [l, m])
    cartan = ref.crystal.cartan
    for j in range(1, n + 1):
        want = add(_power(sigma, cartan, lam, j), _power(sigma, cartan, mu, 2 * j))
        if ref.crystal.epsilon(ref.at(j)) != want:
            raise ReferencePathError(f"eps(ref({j})) != sigma^j lam + sigma^2j mu")
    return ref


def make_ref_A_single(n: int, mu: Weight, m: int) -> RefPath:
    """ref(j) = (mu_{i+j}) in the perfect crystal B^{1,m}."""
    return make_ref_multi(n, [mu], [m])


def _power(fn, cartan, w, k):
    for _ in range(k):
        w = fn(cartan, w)
    return w


# -- paths ------------------------------------------------------------------


@dataclass(frozen=True)
class Path:
    """cells[k - 1] = p(k) for 1 <= k <= depth; canonical (p(depth) != ref(depth))."""

    ref: RefPath
    cells: tuple

    @classmethod
    def make(cls, ref: RefPath, cells) -> "Path":
        cells = list(cells)
        while cells and cells[-1] == ref.at(len(cells)):
            cells.pop()
        return cls(ref, tuple(cells))

    @classmethod
    def reference(cls, ref: RefPath) -> "Path":
        return cls(ref, ())

    @property
    def depth(self) -> int:
        return len(self.cells)

    def at(self, k: int):
        if k <= len(self.cells):
            return self.cells[k - 1]
        return self.ref.at(k)

    def entries(self, window: int | None = None) -> list:
        """Explicit entries p(N), ..., p(1), position descending."""
        n = max(self.depth, window or 0)
        return [self.at(k) for k in range(n, 0, -1)]

    def to_json(self) -> dict:
        B = self.ref.crystal
        return {"ref": self.ref.to_json(), "entries": [B.to_json(b) for b in self.entries()]}

    def label(self) -> str:
        B = self.ref.crystal
        return "..." + "".join("⊗" + B.label(b) for b in self.entries())

    def replace(self, k: int, b) -> "Path":
        cells = [self.at(j) for j in range(1, max(self.depth, k) + 1)]
        cells[k - 1] = b
        return Path.make(self.ref, cells)


def path_from_json(ref: RefPath, obj: dict) -> Path:
    B = ref.crystal
    return Path.make(ref, [B.from_json(b) for b in reversed(obj["entries"])])


def _raise_scan(B: Crystal, at, i: int, window: int, plus: int):
    """Rightmost unmatched minus sign; returns (position or None, epsilon)."""
    target = None
    eps = 0
    for k in range(window, 0, -1):
        b = at(k)
        e = B.epsilon(b)[i]
        c = min(plus, e)
        if e > c:
            target = k
            eps += e - c
        plus += B.phi(b)[i] - c
    return target, eps


def _lower_scan(B: Crystal, at, i: int, window: int, tail_plus: int):
    """Leftmost unmatched plus sign (window + 1 means the tail); returns (position, phi)."""
    target = None
    phi = 0
    minus = 0
    for k in range(1, window + 1):
        b = at(k)
        ph = B.phi(b)[i]
        c = min(ph, minus)
        if ph > c:
            target = k
            phi += ph - c
        minus += B.epsilon(b)[i] - c
    c = min(tail_plus, minus)
    if tail_plus > c:
        target = window + 1
        phi += tail_plus - c
    return target, phi


def path_step(direction: str, i: int, p: Path, window: int | None = None) -> Path | None:
    """Apply e_i or f_i to a path; None is the zero element.

    A raise whose unmatched minus signs are all absorbed by the tail is zero.
    A lower landing past the window acts on the first tail position.
    """
    B = p.ref.crystal
    n = max(p.depth, window or 0)
    tail_plus = B.phi(p.ref.at(n + 1))[i]
    if direction == RAISE:
        k, _ = _raise_scan(B, p.at, i, n, tail_plus)
        if k is None:
            return None
        return p.replace(k, B.e(i, p.at(k)))
    k, _ = _lower_scan(B, p.at, i, n, tail_plus)
    if k is None:
        return None
    return p.replace(k, B.f(i, p.at(k)))


def path_epsilon(p: Path, window: int | None = None) -> Weight:
    B = p.ref.crystal
    n = max(p.depth, window or 0)
    tail = B.phi(p.ref.at(n + 1))
    return tuple(_raise_scan(B, p.at, i, n, tail[i])[1] for i in B.cartan.nodes)


def path_phi(p: Path, window: int | None = None) -> Weight:
    B = p.ref.crystal
    n = max(p.depth, window or 0)
    tail = B.phi(p.ref.at(n + 1))
    return tuple(_lower_scan(B, p.at, i, n, tail[i])[1] for i in B.cartan.nodes)


def is_highest(p: Path) -> bool:
    return all(path_step(RAISE, i, p) is None for i in p.ref.crystal.cartan.nodes)


def raise_to_highest(p: Path, max_steps: int = 100000):
    """Apply raising operators greedily until a highest weight path is reached.

    Returns (highest path, word of nodes applied) or None on a cycle/overrun.
    """
    nodes = p.ref.crystal.cartan.nodes
    seen = {p}
    word = []
    for _ in range(max_steps):
        for i in nodes:
            q = path_step(RAISE, i, p)
            if q is not None:
                break
        else:
            return p, word
        if q in seen:
            return None
        seen.add(q)
        word.append(i)
        p = q
    return None


# -- energy and weight ------------------------------------------------------


def energy_E(p: Path, H, window: int | None = None) -> int:
    """sum_j j (H(p(j+1) (x) p(j)) - H(ref(j+1) (x) ref(j))); H is indexed by TensorElem."""
    ref = p.ref
    n = max(p.depth, window or 0)
    total = 0
    for j in range(1, n + 1):
        total += j * (H[TensorElem(p.at(j + 1), p.at(j))] - H[TensorElem(ref.at(j + 1), ref.at(j))])
    return total


def path_wt(p: Path, window: int | None = None) -> Weight:
    """Classical weight phi(ref(1)) + sum_j (wt p(j) - wt ref(j))."""
    B = p.ref.crystal
    w = B.phi(p.ref.at(1))
    for j in range(1, max(p.depth, window or 0) + 1):
        w = add(w, sub(B.weight(p.at(j)), B.weight(p.ref.at(j))))
    return w


def weight_W(p: Path, H, window: int | None = None) -> WeightP:
    return WeightP(path_wt(p, window), -energy_E(p, H, window))


def wt_tail(p: Path, j: int) -> Weight:
    """wt p[j]: weight of the semi-infinite part ... (x) p(j+2) (x) p(j+1)."""
    B = p.ref.crystal
    m = max(p.depth, j)
    w = B.phi(p.ref.at(m + 1))
    for k in range(j + 1, m + 1):
        w = add(w, B.weight(p.at(k)))
    return w


# -- highest weight paths ---------------------------------------------------


def enumerate_hw_paths(ref: RefPath, N: int, check: bool = True) -> list[Path]:
    """Highest weight paths of depth <= N from the minimal-chain characterization.

    Built backwards from position N: p(k) runs over minimal elements with
    eps(p(k)) = phi(p(k+1)).
    """
    B = ref.crystal
    _, bmin = level_and_minimal(B)
    by_eps: dict = {}
    for b in B:
        if b in bmin:
            by_eps.setdefault(B.epsilon(b), []).append(b)
    out = []

    def rec(k, prev, cells):
        if k == 0:
            out.append(Path.make(ref, cells[::-1]))
            return
        for b in by_eps.get(B.phi(prev), ()):
            cells.append(b)
            rec(k - 1, b, cells)
            cells.pop()

    rec(N, ref.at(N + 1), [])
    if check:
        for p in out:
            for j in range(0, N + 1):
                if wt_tail(p, j) != B.phi(p.at(j + 1)):
                    raise AssertionError(f"wt p[{j}] != phi(p({j + 1})) for {p.label()}")
    return out


def all_paths(ref: RefPath, N: int):
    """Every path of depth <= N, each exactly once."""
    B = ref.crystal
    for combo in product(B.elements(), repeat=N):
        yield Path.make(ref, combo[::-1])


def enumerate_hw_paths_oracle(ref: RefPath, N: int) -> list[Path]:
    """Highest weight paths of depth <= N by testing every raise on every path."""
    B = ref.crystal
    nodes = B.cartan.nodes
    tail = B.phi(ref.at(N + 1))
    out = []
    for combo in product(B.elements(), repeat=N):
        # combo[0] is position N
        at = lambda k, c=combo: c[N - k]  # noqa: E731
        if all(_raise_scan(B, at, i, N, tail[i])[0] is None for i in nodes):
            out.append(Path.make(ref, combo[::-1]))
    return out


# -- restricted paths -------------------------------------------------------


def lambda_sequence(lam: Weight, p: Path, window: int | None = None) -> list[Weight]:
    """[lambda_0(p), ..., lambda_N(p)] with lambda_N = lam + phi(ref(N+1))."""
    B = p.ref.crystal
    n = max(p.depth, window or 0)
    seq = [add(lam, B.phi(p.ref.at(n + 1)))]
    for j in range(n, 0, -1):
        seq.append(add(seq[-1], B.weight(p.at(j))))
    return seq[::-1]


def is_restricted(lam: Weight, p: Path) -> bool:
    """eps(p(j)) <= lambda_j(p) for every position j."""
    B = p.ref.crystal
    seq = lambda_sequence(lam, p)
    return all(
        all(e <= m for e, m in zip(B.epsilon(p.at(j)), seq[j]))
        for j in range(1, p.depth + 1)
    )


def is_restricted_oracle(lam: Weight, p: Path) -> bool:
    """u_lam (x) p is killed by every raise (u_lam contributes lam_i plus signs)."""
    B = p.ref.crystal
    n = p.depth
    tail = B.phi(p.ref.at(n + 1))
    return all(_raise_scan(B, p.at, i, n, lam[i] + tail[i])[0] is None for i in B.cartan.nodes)


def enumerate_restricted(lam: Weight, ref: RefPath, N: int) -> list[Path]:
    """Restricted paths of depth <= N, built backwards carrying lambda_j."""
    B = ref.crystal
    elems = [(b, B.epsilon(b), B.weight(b)) for b in B]
    out = []

    def rec(k, lam_k, cells):
        if k == 0:
            out.append(Path.make(ref, cells[::-1]))
            return
        for b, eps, wt in elems:
            if all(e <= m for e, m in zip(eps, lam_k)):
                cells.append(b)
                rec(k - 1, add(lam_k, wt), cells)
                cells.pop()

    rec(N, add(lam, B.phi(ref.at(N + 1))), [])
    return out


# -- census -----------------------------------------------------------------


def census(paths, H) -> list[tuple[int, Weight, int, int]]:
    """Rows (depth, classical weight, delta degree, count), sorted."""
    counts = Counter()
    for p in paths:
        w = weight_W(p, H)
        counts[(p.depth, w.cl, w.delta)] += 1
    return sorted((d, w, dl, c) for (d, w, dl), c in counts.items())
