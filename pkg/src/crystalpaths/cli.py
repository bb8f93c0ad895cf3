"""Command line interface.

Exit codes: 0 pass, 1 verified failure (a witness is printed), 2 usage error.
All output is exact integers and deterministic for a given configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .cache import ENV_VAR, TableCache
from .cartan import Family, cartan_data, format_weight, level, parse_weight
from .crystal import (
    CorruptedCrystal,
    TensorElem,
    TensorProduct,
    check_axioms,
    check_cfin_condition3,
    graph_json,
    is_connected,
    is_simple,
    level_and_minimal,
    to_dot,
)
from .families import ARow, KRCrystalA, kr_crystal
from .isomorphism import (
    BijectionReport,
    identity_instance,
    perfect_census,
    verify_case1,
    verify_ex2,
    verify_multi_experimental,
)
from .paths import (
    census,
    enumerate_hw_paths,
    enumerate_restricted,
    make_ref_A,
    make_ref_A_single,
    make_ref_C,
)
from .rmatrix import (
    closed_form,
    compute_H_bfs,
    decompose_H,
    default_anchor,
    energy_table,
    get_R,
)

SUITES = ("axioms", "simple", "cfin", "rmatrix", "energy", "hoftensor", "case1", "ex2", "main", "kmn2", "multi")


class UsageError(Exception):
    pass


# -- configuration ----------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", default="A", help="A (A_{n-1}^(1)) or C (C_n^(1))")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--m", type=int, default=None, help="second tensor factor B^{1,m} (type A)")
    p.add_argument("--lambda", dest="lam", default=None, help="coefficients, e.g. 1,0,0")
    p.add_argument("--mu", default=None, help="coefficients, e.g. 1,0,0")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--cache-dir", default=None, help=f"table cache directory (or ${ENV_VAR})")
    p.add_argument("--format", default="pretty", choices=("pretty", "json", "tsv", "dot"))
    p.add_argument("--anchor", type=int, default=None, help="energy value at the default anchor")
    p.add_argument("--experimental", action="store_true", help="allow rank-2 algebras and multi-factor checks")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crystalpaths", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    g = sub.add_parser("graph", help="export the crystal graph (DOT or JSON)")
    _add_common(g)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    _add_common(v)
    v.add_argument("--ls", default=None, help="multi suite: factor sizes, e.g. 3,2,1")
    v.add_argument("--lambdas", default=None, help="multi suite: weights separated by ';'")
    c = sub.add_parser("census", help="TSV census of highest weight or restricted paths")
    _add_common(c)
    c.add_argument("--restrict", default=None, help="census restricted paths for this dominant weight")
    for name in ("rmatrix", "energy"):
        t = sub.add_parser(name, help=f"print the {name} table of B^(1,l) (x) B^(1,m)")
        _add_common(t)
    return parser


class Config:
    def __init__(self, args):
        try:
            self.family = Family(args.family.upper())
        except ValueError:
            raise UsageError(f"unknown family {args.family!r}") from None
        self.n = args.n
        try:
            self.cartan = cartan_data(self.family, self.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        self.l = args.l
        self.m = args.m
        self.depth = args.depth
        self.format = args.format
        self.experimental = args.experimental
        if self.l < 0 or (self.m is not None and self.m < 0) or self.depth < 0:
            raise UsageError("l, m and depth must be nonnegative")
        if self.family is Family.C:
            if self.l % 2 == 0:
                raise UsageError("type C needs odd l")
            if self.m is not None:
                raise UsageError("--m is only supported for type A")
        if self.m is not None and self.l < self.m:
            raise UsageError("need l >= m")
        self.lam = self._weight(args.lam)
        self.mu = self._weight(args.mu)
        root = args.cache_dir or os.environ.get(ENV_VAR)
        self.cache = TableCache(root) if root else None
        self.anchor = args.anchor
        self.inject_fault = args.inject_fault

    def _weight(self, text):
        if text is None:
            return None
        try:
            w = parse_weight(self.cartan, text)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if min(w) < 0:
            raise UsageError(f"weight {text} is not dominant")
        return w

    def need(self, name):
        val = getattr(self, name)
        if val is None:
            raise UsageError(f"--{'lambda' if name == 'lam' else name} is required")
        return val

    def require_rank(self):
        if self.cartan.size <= 2 and not self.experimental:
            raise UsageError("path results assume at least three nodes; pass --experimental for rank 2")

    def crystal(self):
        B = kr_crystal(self.family, self.n, self.l)
        if self.m is not None:
            B = TensorProduct(B, KRCrystalA(self.n, self.m))
        return B

    def reference(self):
        if self.family is Family.C:
            return make_ref_C(self.crystal(), self.need("lam"))
        if self.m is not None:
            return make_ref_A(self.n, self.need("lam"), self.need("mu"), self.l, self.m)
        return make_ref_A_single(self.n, self.need("mu"), self.l)

    def check_level(self, w, lev, name):
        if level(self.cartan, w) != lev:
            raise UsageError(f"{name} must have level {lev}")


# -- output helpers ---------------------------------------------------------


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _simple_result(cfg: Config, name: str, ok: bool, lines: list[str], data: dict) -> int:
    if cfg.format == "json":
        _emit(_dump({"suite": name, "passed": ok, **data}))
    else:
        _emit(f"{name}: {'PASS' if ok else 'FAIL'}")
        for line in lines:
            _emit(f"  {line}")
    return 0 if ok else 1


def _bijection_result(cfg: Config, report: BijectionReport) -> int:
    if cfg.format == "json":
        _emit(_dump(report.to_json()))
        return 0 if report.passed else 1
    _emit(f"{report.name}: {'PASS' if report.passed else 'FAIL'}")
    for cond, ok in report.conditions.items():
        _emit(f"  [{'ok' if ok else 'FAIL'}] {cond}")
    _emit("  depth\t|P_0|\t|P^(lam)|\tmatched\tstatus")
    for r in report.rows:
        _emit(f"  {r.depth}\t{r.source}\t{r.target}\t{r.matched}\t{'ok' if r.ok else 'FAIL'}")
    for msg in report.counterexamples:
        _emit(f"  witness: {msg}")
    return 0 if report.passed else 1


# -- commands ---------------------------------------------------------------


def cmd_graph(cfg: Config) -> int:
    B = cfg.crystal()
    if cfg.format == "json":
        _emit(_dump(graph_json(B)))
    else:
        _emit(to_dot(B))
    return 0


def _energy_table(cfg: Config, b1, b2):
    anchor = None
    if cfg.anchor is not None:
        anchor = (default_anchor(b1, b2), cfg.anchor)
    return energy_table(b1, b2, cfg.cache, anchor)


def _factors(cfg: Config):
    b1 = kr_crystal(cfg.family, cfg.n, cfg.l)
    b2 = KRCrystalA(cfg.n, cfg.m) if cfg.m is not None else kr_crystal(cfg.family, cfg.n, cfg.l)
    return b1, b2


def cmd_table(cfg: Config, kind: str) -> int:
    b1, b2 = _factors(cfg)
    dom = TensorProduct(b1, b2)
    if kind == "rmatrix":
        R = get_R(b1, b2, cfg.cache)
        cod = R.codomain
        rows = [(dom.label(x), cod.label(R(x))) for x in dom]
    else:
        H = _energy_table(cfg, b1, b2)
        rows = [(dom.label(x), str(H[x])) for x in dom]
    if cfg.format == "json":
        _emit(_dump([list(r) for r in rows]))
    else:
        for r in rows:
            _emit("\t".join(r))
    return 0


def _verify_axioms(cfg: Config) -> int:
    B = cfg.crystal()
    if cfg.inject_fault:
        b = next(x for x in B if B.f(1, x) is not None)
        B = CorruptedCrystal(B, 1, b, b)
    bad = check_axioms(B)
    lines = [f"{len(B)} elements checked"] + [f"{v.element} node {v.node}: {v.message}" for v in bad[:10]]
    return _simple_result(cfg, "axioms", not bad, lines, {"elements": len(B), "violations": [list(v) for v in bad]})


def _verify_simple(cfg: Config) -> int:
    B = cfg.crystal()
    if cfg.m is not None:
        ok = is_connected(B)
        return _simple_result(cfg, "simple", ok, ["tensor product: connectivity checked"], {"connected": ok})
    rep = is_simple(B)
    lines = [f"principal highest weight {rep.principal.weight}" if rep.principal else "no principal component"]
    lines += rep.witness
    return _simple_result(cfg, "simple", rep.simple, lines, {"witness": rep.witness})


def _verify_cfin(cfg: Config) -> int:
    rep = check_cfin_condition3(cfg.crystal())
    lines = [f"level {rep.level}"] + [f"eps misses {w}" for w in rep.missed_epsilon] + [
        f"phi misses {w}" for w in rep.missed_phi]
    return _simple_result(cfg, "cfin", rep.ok, lines, {"level": rep.level,
                          "missed_epsilon": rep.missed_epsilon, "missed_phi": rep.missed_phi})


def _verify_rmatrix(cfg: Config) -> int:
    if cfg.m is None or cfg.family is not Family.A:
        raise UsageError("rmatrix suite needs type A with --m")
    b1, b2 = _factors(cfg)
    R12 = get_R(b1, b2, cfg.cache)
    R21 = get_R(b2, b1, cfg.cache)
    lines = []
    inverse_ok = all(R21(R12(x)) == x for x in R12.domain)
    n = cfg.n
    _, bmin = level_and_minimal(R12.domain)
    rule_ok = True
    for x in bmin:
        a, b = x.left.a, x.right.a
        want = TensorElem(ARow(tuple(b[(i + 1) % n] for i in range(n))),
                          ARow(tuple(a[i] - b[(i + 1) % n] + b[i] for i in range(n))))
        if R12(x) != want:
            rule_ok = False
            lines.append(f"R({R12.domain.label(x)}) = {R12.codomain.label(R12(x))}")
    lines.insert(0, f"R21 o R12 = id: {inverse_ok}; minimal-element rule: {rule_ok}")
    return _simple_result(cfg, "rmatrix", inverse_ok and rule_ok, lines,
                          {"inverse": inverse_ok, "minimal_rule": rule_ok})


def _verify_energy(cfg: Config) -> int:
    b1, b2 = _factors(cfg)
    closed = closed_form(b1, b2)
    if closed is None:
        raise UsageError("no closed energy formula for this product")
    H = compute_H_bfs(b1, b2, get_R(b1, b2, cfg.cache))
    consts = sorted({closed(x.left, x.right) - H[x] for x in TensorProduct(b1, b2)})
    ok = len(consts) == 1
    return _simple_result(cfg, "energy", ok, [f"closed - bfs takes values {consts}"], {"constants": consts})


def _verify_hoftensor(cfg: Config) -> int:
    if cfg.m is None or cfg.family is not Family.A:
        raise UsageError("hoftensor suite needs type A with --m")
    b1, b2 = _factors(cfg)
    main = decompose_H(b1, b2)
    alt = decompose_H(b1, b2, alternative=True)
    lines = [f"default: ok={main.ok} constant={main.constant} pairs={main.checked}",
             f"alternative: ok={alt.ok} constant={alt.constant} pairs={alt.checked}"]
    lines += [f"discrepancy {d} at {w}" for d, w in main.discrepancies + alt.discrepancies]
    return _simple_result(cfg, "hoftensor", main.ok and alt.ok, lines,
                          {"default": main.constant, "alternative": alt.constant, "pairs": main.checked})


def _verify_case1(cfg: Config) -> int:
    if cfg.family is not Family.C:
        raise UsageError("case1 suite needs type C")
    cfg.require_rank()
    lam = cfg.need("lam")
    cfg.check_level(lam, (cfg.l - 1) // 2, "lambda")
    return _bijection_result(cfg, verify_case1(lam, cfg.l, cfg.n, cfg.depth))


def _verify_ex2(cfg: Config) -> int:
    if cfg.family is not Family.A or cfg.m is None:
        raise UsageError("ex2 suite needs type A with --m")
    cfg.require_rank()
    lam, mu = cfg.need("lam"), cfg.need("mu")
    cfg.check_level(lam, cfg.l - cfg.m, "lambda")
    cfg.check_level(mu, cfg.m, "mu")
    return _bijection_result(cfg, verify_ex2(lam, mu, cfg.l, cfg.m, cfg.n, cfg.depth))


def _verify_main(cfg: Config) -> int:
    if cfg.family is Family.C:
        return _verify_case1(cfg)
    if cfg.m is not None:
        return _verify_ex2(cfg)
    cfg.require_rank()
    return _bijection_result(cfg, identity_instance(cfg.reference(), cfg.depth))


def _verify_perfect(cfg: Config) -> int:
    if cfg.family is not Family.A or cfg.m is not None:
        raise UsageError("kmn2 suite needs a single type A factor")
    cfg.require_rank()
    mu = cfg.need("mu")
    cfg.check_level(mu, cfg.l, "mu")
    counts = perfect_census(mu, cfg.l, cfg.n, cfg.depth)
    ok = all(c == 1 for c in counts)
    return _simple_result(cfg, "kmn2", ok, [f"hw paths per depth: {counts}"], {"counts": counts})


def _verify_multi(cfg: Config, args) -> int:
    if not cfg.experimental:
        raise UsageError("multi suite is experimental; pass --experimental")
    if cfg.family is not Family.A or not args.ls or not args.lambdas:
        raise UsageError("multi suite needs type A with --ls and --lambdas")
    ls = [int(x) for x in args.ls.split(",")]
    lams = [cfg._weight(t) for t in args.lambdas.split(";")]
    if len(lams) != len(ls):
        raise UsageError("--ls and --lambdas lengths differ")
    try:
        report = verify_multi_experimental(lams, ls, cfg.n, cfg.depth)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return _bijection_result(cfg, report)


def cmd_verify(cfg: Config, args) -> int:
    suite = args.suite
    if suite == "multi":
        return _verify_multi(cfg, args)
    handler = {
        "axioms": _verify_axioms, "simple": _verify_simple, "cfin": _verify_cfin,
        "rmatrix": _verify_rmatrix, "energy": _verify_energy, "hoftensor": _verify_hoftensor,
        "case1": _verify_case1, "ex2": _verify_ex2, "main": _verify_main, "kmn2": _verify_perfect,
    }[suite]
    return handler(cfg)


def cmd_census(cfg: Config, args) -> int:
    cfg.require_rank()
    ref = cfg.reference()
    B = ref.crystal
    H = _energy_table(cfg, B, B)
    if args.restrict is not None:
        paths = enumerate_restricted(cfg._weight(args.restrict), ref, cfg.depth)
    else:
        paths = enumerate_hw_paths(ref, cfg.depth)
    rows = census(paths, H)
    if cfg.format == "json":
        _emit(_dump([{"depth": d, "weight": list(w), "delta": dl, "count": c} for d, w, dl, c in rows]))
        return 0
    _emit("depth\tweight\tdelta\tcount")
    for d, w, dl, c in rows:
        _emit(f"{d}\t{format_weight(w)}\t{dl}\t{c}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = Config(args)
        if args.command == "graph":
            return cmd_graph(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args)
        if args.command == "census":
            return cmd_census(cfg, args)
        return cmd_table(cfg, args.command)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
