"""
The involution Psi on tensor products and the canonical basis built from it.

For two factors Psi = Theta o (bar (x) bar).  For N factors

    Psi_N = Theta^{[1..N-1], N} o (Psi_{N-1} (x) bar),

the minus part of Theta acting on the first N-1 factors through the iterated
coproduct.  ``psi_alt`` brackets the other way and serves as a check.

Pure tensors of factor canonical basis elements are ordered by the heights of
their factor depths, lexicographically from the left: t < t' when the first
factor where they differ is deeper in t'.  For two factors this is exactly
"the first factor is strictly deeper".  The element c_t is the unique
Psi-fixed vector t + sum_{t' > t} pi_{t'} t' with pi in v^-1 Z[v^-1].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from . import hwmodule, linalg
from .arith import LaurentPoly, RationalFunc, as_rf, in_negative_lattice
from .cartan import DimVector, dim_add, dims_below, tr
from .errors import ConsistencyError
from .falgebra import enumerate_words, word_degree
from .hwmodule import HWModule, ModuleVector
from .tensor import (Key, TensorModule, TensorVector, act_tensor, act_word, bar_tensor,
                     order_key, tensor_form, total_depth)
from .theta import apply_component, theta, degrees_for

ZERO = RationalFunc(0)
ONE = RationalFunc(1)


# --- Psi ---------------------------------------------------------------------------------

def _psi_pure(tm: TensorModule, key: Key) -> TensorVector:
    cache = tm.__dict__.setdefault("_psi_cache", {})
    hit = cache.get(key)
    if hit is not None:
        return hit
    if tm.n == 1:
        out = tm.pure(key)
    else:
        # (Psi_{N-1} (x) bar) on a pure tensor, then Theta^{[1..N-1], N}
        if tm.n == 2:
            inner = tm.pure(key)
        else:
            sub = _sub_module(tm, tm.n - 1)
            y = _psi_pure(sub, key[:-1])
            inner = TensorVector(tm, {k + (key[-1],): c for k, c in y.coords.items()})
        out = _theta_full(inner)
    cache[key] = out
    return out


def _sub_module(tm: TensorModule, n: int) -> TensorModule:
    cache = tm.__dict__.setdefault("_subs", {})
    if n not in cache:
        cache[n] = TensorModule(tm.factors[:n])
    return cache[n]


def _theta_full(x: TensorVector) -> TensorVector:
    d = x.module.datum
    out = TensorVector(x.module, {})
    for nu in degrees_for(x):
        out = out + apply_component(theta(d, nu), x)
    return out


def psi(x: TensorVector) -> TensorVector:
    """Psi on a tensor vector (antilinear: coefficients are conjugated)."""
    tm = x.module
    out = TensorVector(tm, {})
    for key, c in x.coords.items():
        out = out + _psi_pure(tm, key).scale(c.bar())
    return out


def _theta_split(x: TensorVector, split: int) -> TensorVector:
    """Theta with the minus part on factors [0, split) and the plus part on [split, N)."""
    d = x.module.datum
    n = x.module.n
    bound = None
    for key in x.coords:
        dep = key[split][0]
        for k in key[split + 1:]:
            dep = dim_add(dep, k[0])
        bound = dep if bound is None else tuple(max(a, b) for a, b in zip(bound, dep))
    out = TensorVector(x.module, {})
    if bound is None:
        return out
    for nu in dims_below(bound):
        comp = theta(d, nu)
        for k, l, c in comp.nonzero():
            y = act_word(x, comp.pivots[l], "E", split, n)
            if y.is_zero():
                continue
            y = act_word(y, comp.pivots[k], "F", 0, split)
            out = out + y.scale(c)
    return out


def psi_alt(x: TensorVector) -> TensorVector:
    """Psi bracketed from the right: Theta^{1, [2..N]} o (bar (x) Psi_{[2..N]})."""
    tm = x.module
    if tm.n <= 2:
        return psi(x)
    sub = TensorModule(tm.factors[1:])
    out = TensorVector(tm, {})
    for key, c in x.coords.items():
        y = psi_alt(sub.pure(key[1:]))
        inner = TensorVector(tm, {(key[0],) + k: e for k, e in y.coords.items()})
        out = out + _theta_split(inner, 1).scale(c.bar())
    return out


# --- order ---------------------------------------------------------------------------------

def heights(key: Key) -> tuple:
    return tuple(tr(nu) for nu, _ in key)


def order_leq(t: Key, t2: Key) -> str:
    """'equal', 'less', 'greater' or 'incomparable' for two pure tensors."""
    if tuple(t) == tuple(t2):
        return "equal"
    if total_depth(t) != total_depth(t2):
        return "incomparable"
    h1, h2 = heights(t), heights(t2)
    for a, b in zip(h1, h2):
        if a != b:
            return "less" if a < b else "greater"
    return "incomparable"


# --- canonical-basis frame -------------------------------------------------------------

class CBFrame:
    """Factor canonical bases and coordinate changes between pivot and canonical coordinates."""

    def __init__(self, tm: TensorModule):
        self.tm = tm
        self.cb = []  # per factor: nu -> list of ModuleVector
        self.inv = []  # per factor: nu -> inverse of the column matrix
        for m in tm.factors:
            per: dict = {}
            for x in hwmodule.factor_cb(m):
                (nu,) = x.coords.keys()
                per.setdefault(nu, []).append(x)
            inv = {}
            for nu, xs in per.items():
                cols = [x.coords[nu] for x in xs]
                inv[nu] = linalg.inverse(linalg.transpose(cols))
            self.cb.append(per)
            self.inv.append(inv)

    def keys(self) -> list:
        per_factor = [[(nu, j) for nu in sorted(cb, key=lambda n: (tr(n), n)) for j in range(len(cb[nu]))]
                      for cb in self.cb]
        return list(product(*per_factor))

    def vector(self, key: Key) -> TensorVector:
        return self.tm.tensor_of([self.cb[p][nu][j] for p, (nu, j) in enumerate(key)])

    def to_cb(self, x: TensorVector) -> dict:
        """Coordinates of x over pure tensors of canonical basis elements."""
        out: dict = {}
        for key, c in x.coords.items():
            parts = []
            for p, (nu, k) in enumerate(key):
                col = [row[k] for row in self.inv[p][nu]]
                parts.append([((nu, j), e) for j, e in enumerate(col) if e])
            for combo in product(*parts):
                ck = tuple(kc[0] for kc in combo)
                e = c
                for kc in combo:
                    e = e * kc[1]
                out[ck] = out.get(ck, ZERO) + e
        return {k: c for k, c in out.items() if c}


@dataclass
class DiamondBasis:
    frame: CBFrame
    order: list  # canonical-basis pure tensors, ascending within blocks
    elements: dict  # key -> TensorVector (pivot coordinates)
    transition: dict  # (t, t') -> LaurentPoly, c_t = sum_t' pi[t, t'] t'
    blocks: dict = field(default_factory=dict)  # total depth -> keys ascending

    def element_cb(self, key: Key) -> dict:
        return {t2: p for (t, t2), p in self.transition.items() if t == key}


def _solve_bar_equation(rhs: RationalFunc, where: str) -> LaurentPoly:
    """pi - bar(pi) = rhs with pi in v^-1 Z[v^-1]."""
    if not rhs.is_laurent():
        raise ConsistencyError(f"non-integral correction term at {where}")
    r = rhs.to_laurent()
    if r.coeff(0) != 0 or r + r.bar():
        raise ConsistencyError(f"correction equation not solvable at {where}: {r}")
    return LaurentPoly({k: c for k, c in r.items() if k < 0})


def diamond_basis(tm: TensorModule) -> DiamondBasis:
    frame = CBFrame(tm)
    keys = frame.keys()
    blocks: dict = {}
    for k in keys:
        blocks.setdefault(total_depth(k), []).append(k)
    for b in blocks.values():
        b.sort(key=lambda k: (heights(k), k))
    blocks = dict(sorted(blocks.items(), key=lambda kv: (tr(kv[0]), kv[0])))
    rho: dict = {}
    for k in keys:
        img = frame.to_cb(psi(frame.vector(k)))
        for k2, c in img.items():
            if not c.is_laurent():
                raise ConsistencyError("Psi is not integral on canonical pure tensors")
        rho[k] = img
    transition: dict = {}
    elements: dict = {}
    order: list = []
    for blk in blocks.values():
        order.extend(blk)
        for t in blk:
            if rho[t].get(t) != ONE:
                raise ConsistencyError("Psi is not unitriangular: diagonal entry differs from 1")
            pi = {t: LaurentPoly(1)}
            ht = heights(t)
            for t2 in blk:
                if t2 == t:
                    continue
                r = rho[t].get(t2, ZERO)
                if heights(t2) <= ht:
                    if r:
                        raise ConsistencyError("Psi is not triangular for the order")
                    continue
                acc = r
                for t1, p in pi.items():
                    if t1 != t and p:
                        e = rho[t1].get(t2)
                        if e:
                            acc = acc + as_rf(p.bar()) * e
                val = _solve_bar_equation(acc, f"{t} -> {t2}")
                if val:
                    pi[t2] = val
            for t2, p in pi.items():
                transition[(t, t2)] = p
            vec = TensorVector(tm, {})
            for t2, p in pi.items():
                vec = vec + frame.vector(t2).scale(as_rf(p))
            if psi(vec) != vec:
                raise ConsistencyError(f"element for {t} is not Psi-fixed")
            elements[t] = vec
    return DiamondBasis(frame, order, elements, transition, blocks)


def nfold_diamond(tm: TensorModule) -> DiamondBasis:
    if tm.n < 3:
        raise ValueError("nfold_diamond expects at least three factors")
    return diamond_basis(tm)


def transition_matrix(db: DiamondBasis, block: DimVector | None = None) -> list:
    """Rows = canonical elements, columns = pure tensors, both ascending."""
    keys = db.order if block is None else db.blocks[tuple(block)]
    return [[db.transition.get((t, t2), LaurentPoly()) for t2 in keys] for t in keys]


def transition_report(db: DiamondBasis) -> dict:
    unit = True
    lattice = True
    positive = True
    for (t, t2), p in db.transition.items():
        if t == t2:
            unit &= p == LaurentPoly(1)
        else:
            lattice &= all(k < 0 for k, _ in p.items())
            positive &= all(c >= 0 for _, c in p.items())
    return {"unitriangular": unit, "off_diagonal_in_negative_lattice": lattice, "positive": positive}


def almost_orthonormal(db: DiamondBasis, order: int = 10) -> bool:
    els = [db.elements[t] for t in db.order]
    for a, x in enumerate(els):
        for b, y in enumerate(els):
            if b < a:
                continue
            f = tensor_form(x, y)
            if not in_negative_lattice(f, order=order, constant=1 if a == b else 0):
                return False
    return True


# --- standard classes ------------------------------------------------------------------

def flag_class(tm: TensorModule, words: Sequence) -> TensorVector:
    """
    m_{nu^1,...,nu^N}: words[0] is the outermost word.  The last word acts on
    the first tensor factor alone, then each earlier word acts through the
    coproduct on one more factor.
    """
    n = tm.n
    if len(words) != n:
        raise ValueError("one word per factor expected")
    x = tm.top()
    for r in range(1, n + 1):
        x = act_word(x, tuple(words[n - r]), "F", 0, r)
        if x.is_zero():
            break
    return x


def flag_leading(tm: TensorModule, words: Sequence) -> TensorVector:
    """F^{nu^N} v (x) ... (x) F^{nu^1} v: the term of the flag class with the shallowest left factors."""
    vecs = []
    for p, m in enumerate(tm.factors):
        w = tuple(words[tm.n - 1 - p])
        vecs.append(m.word_vector(w))
    return tm.tensor_of(vecs)


def flag_triangular(tm: TensorModule, words: Sequence) -> bool:
    lead = flag_leading(tm, words)
    if lead.is_zero():
        return True
    rest = flag_class(tm, words) - lead
    h = [tr(word_degree(tm.datum, tuple(words[tm.n - 1 - p]))) for p in range(tm.n)]
    return all(_lex_gt(heights(k), tuple(h)) for k in rest.coords)


def _lex_gt(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x != y:
            return x > y
    return False


def _splits(total: DimVector, n: int):
    if n == 1:
        yield (total,)
        return
    for a in dims_below(total):
        for rest in _splits(tuple(x - y for x, y in zip(total, a)), n - 1):
            yield (a,) + rest


def span_check(tm: TensorModule) -> list:
    """Per weight block: dimension and rank of the flag classes landing in it."""
    d = tm.datum
    blocks = tm.blocks()
    report = []
    for mu, keys in blocks.items():
        vecs = []
        for parts in _splits(mu, tm.n):
            # parts[p] is the degree of words[p]; words[0] is outermost
            for words in product(*(enumerate_words(d, nu) for nu in parts)):
                x = flag_class(tm, words)
                if not x.is_zero():
                    vecs.append(x.flat(keys))
        r = linalg.rank(vecs)
        report.append({"block": list(mu), "dim": len(keys), "rank": r, "ok": r == len(keys)})
    return report
