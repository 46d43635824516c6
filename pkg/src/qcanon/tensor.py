"""
Tensor products of highest-weight modules under the coproduct

    Delta(F_i) = F_i (x) K_i^-1 + 1 (x) F_i
    Delta(E_i) = E_i (x) 1 + K_i (x) E_i
    Delta(K_i) = K_i (x) K_i

Iterating, F_i acting on factor p picks up K_i^-1 on every later factor and
E_i acting on factor p picks up K_i on every earlier factor.

A basis vector of a factor is addressed by ``(nu, k)``: pivot ``k`` of the
weight space at depth ``nu``.  A tensor basis vector is a tuple of those.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from . import hwmodule, linalg
from .arith import LaurentPoly, RationalFunc, Scalar, as_rf, qfact
from .cartan import DimVector, dim_add, tr
from .hwmodule import HWModule, ModuleVector

ZERO = RationalFunc(0)
ONE = RationalFunc(1)
V = LaurentPoly.v()

Key = tuple


class TensorModule:
    """Ordered tensor product M_1 (x) ... (x) M_N, factors listed left to right."""

    def __init__(self, factors: Sequence[HWModule]):
        factors = list(factors)
        if not factors:
            raise ValueError("need at least one factor")
        d = factors[0].datum
        if any(m.datum != d for m in factors):
            raise ValueError("all factors must share one Cartan datum")
        self.factors = factors
        self.datum = d
        self._basis = None

    @property
    def n(self) -> int:
        return len(self.factors)

    def basis_keys(self) -> list:
        if self._basis is None:
            self._basis = list(product(*(m.basis_index() for m in self.factors)))
        return self._basis

    def dim(self) -> int:
        return len(self.basis_keys())

    def blocks(self) -> dict:
        """total depth -> keys, keys sorted by factor depths (deepest first factor first)."""
        out: dict = {}
        for key in self.basis_keys():
            out.setdefault(total_depth(key), []).append(key)
        for keys in out.values():
            keys.sort(key=order_key, reverse=True)
        return dict(sorted(out.items(), key=lambda kv: (tr(kv[0]), kv[0])))

    def vector(self, coords: dict) -> "TensorVector":
        return TensorVector(self, {k: as_rf(c) for k, c in coords.items() if c})

    def pure(self, key: Key) -> "TensorVector":
        return TensorVector(self, {tuple(key): ONE})

    def top(self) -> "TensorVector":
        z = self.datum.zero()
        return self.pure(tuple((z, 0) for _ in self.factors))

    def tensor_of(self, vectors: Sequence[ModuleVector]) -> "TensorVector":
        out: dict = {}
        parts = []
        for v in vectors:
            parts.append([((nu, k), c) for nu, cs in v.coords.items() for k, c in enumerate(cs) if c])
        for combo in product(*parts):
            key = tuple(kc[0] for kc in combo)
            c = ONE
            for kc in combo:
                c = c * kc[1]
            out[key] = out.get(key, ZERO) + c
        return TensorVector(self, out)._clean()

    def sub(self, lo: int, hi: int) -> "TensorModule":
        return TensorModule(self.factors[lo:hi])


def total_depth(key: Key) -> DimVector:
    out = key[0][0]
    for nu, _ in key[1:]:
        out = dim_add(out, nu)
    return out


def order_key(key: Key) -> tuple:
    """Factor depths by height, left to right, then the pivot indices."""
    return tuple(tr(nu) for nu, _ in key) + tuple(nu for nu, _ in key) + tuple(k for _, k in key)


@dataclass
class TensorVector:
    module: TensorModule
    coords: dict = field(default_factory=dict)

    def _clean(self) -> "TensorVector":
        self.coords = {k: c for k, c in self.coords.items() if c}
        return self

    def __add__(self, other: "TensorVector") -> "TensorVector":
        out = dict(self.coords)
        for k, c in other.coords.items():
            out[k] = out.get(k, ZERO) + c
        return TensorVector(self.module, out)._clean()

    def __neg__(self):
        return TensorVector(self.module, {k: -c for k, c in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Scalar) -> "TensorVector":
        c = as_rf(c)
        return TensorVector(self.module, {k: c * x for k, x in self.coords.items()})._clean()

    def is_zero(self) -> bool:
        return not self.coords

    def __eq__(self, other):
        if not isinstance(other, TensorVector):
            return NotImplemented
        return (self - other).is_zero()

    def coeff(self, key: Key) -> RationalFunc:
        return self.coords.get(tuple(key), ZERO)

    def flat(self, keys: Sequence[Key] | None = None) -> list:
        keys = self.module.basis_keys() if keys is None else keys
        return [self.coords.get(k, ZERO) for k in keys]

    def render(self) -> str:
        if not self.coords:
            return "0"
        return " + ".join(f"[{c}]{key_str(self.module, k)}" for k, c in sorted(self.coords.items(), key=lambda kc: order_key(kc[0])))


def key_str(tm: TensorModule, key: Key) -> str:
    return " (x) ".join(f"b{list(nu)}_{k}" for nu, k in key)


# --- factor-level cached actions ----------------------------------------------------------

def _factor_action(m: HWModule, kind: str, i: int, n: int, bk: tuple) -> list:
    cache = m.__dict__.setdefault("_basis_action", {})
    key = (kind, i, n, bk)
    hit = cache.get(key)
    if hit is None:
        x = m.pivot_vector(*bk)
        y = hwmodule.act_f(i, n, x) if kind == "F" else hwmodule.act_e(i, n, x)
        hit = [((nu, k), c) for nu, cs in y.coords.items() for k, c in enumerate(cs) if c]
        cache[key] = hit
    return hit


def _kexp(m: HWModule, nu: DimVector, i: int) -> int:
    return -m.pairing(nu, i) if m.lowest else m.pairing(nu, i)


def _single(x: TensorVector, kind: str, i: int, lo: int, hi: int) -> TensorVector:
    """One E_i or F_i through the iterated coproduct on factors lo..hi-1."""
    factors = x.module.factors
    out: dict = {}
    for key, c in x.coords.items():
        exps = [_kexp(factors[p], key[p][0], i) for p in range(len(key))]
        for p in range(lo, hi):
            if kind == "F":
                shift = -sum(exps[p + 1:hi])
            else:
                shift = sum(exps[lo:p])
            scal = c * as_rf(V ** shift) if shift else c
            for bk, e in _factor_action(factors[p], kind, i, 1, key[p]):
                k2 = key[:p] + (bk,) + key[p + 1:]
                out[k2] = out.get(k2, ZERO) + scal * e
    return TensorVector(x.module, out)._clean()


def act_tensor(gen: str, i: int, x: TensorVector, n: int = 1, lo: int = 0, hi: int | None = None) -> TensorVector:
    """
    Generator action on a tensor vector.  ``gen`` is 'E', 'F', 'K' or 'Kinv';
    ``n`` gives the divided power for E/F (computed as X^n / [n]!).  ``lo``/``hi``
    restrict the action to a consecutive range of factors.
    """
    hi = x.module.n if hi is None else hi
    if gen in ("K", "Kinv"):
        s = 1 if gen == "K" else -1
        factors = x.module.factors
        out = {}
        for key, c in x.coords.items():
            e = s * n * sum(_kexp(factors[p], key[p][0], i) for p in range(lo, hi))
            out[key] = c * as_rf(V ** e)
        return TensorVector(x.module, out)
    if gen not in ("E", "F"):
        raise ValueError(f"unknown generator {gen!r}")
    if hi - lo == 1:
        # a single factor: use the stored divided-power matrices directly
        factors = x.module.factors
        out: dict = {}
        for key, c in x.coords.items():
            for bk, e in _factor_action(factors[lo], gen, i, n, key[lo]):
                k2 = key[:lo] + (bk,) + key[lo + 1:]
                out[k2] = out.get(k2, ZERO) + c * e
        return TensorVector(x.module, out)._clean()
    y = x
    for _ in range(n):
        y = _single(y, gen, i, lo, hi)
    if n > 1:
        y = y.scale(as_rf(qfact(n)).inverse())
    return y


def act_word(x: TensorVector, word, kind: str = "F", lo: int = 0, hi: int | None = None) -> TensorVector:
    """Apply a divided-power word (rightmost letter first) of E's or F's."""
    for i, a in reversed(word):
        x = act_tensor(kind, i, x, a, lo, hi)
        if x.is_zero():
            break
    return x


def bar_tensor(x: TensorVector) -> TensorVector:
    """Factorwise bar; pivot vectors are bar-invariant so only coefficients change."""
    return TensorVector(x.module, {k: c.bar() for k, c in x.coords.items()})


def tensor_form(x: TensorVector, y: TensorVector) -> RationalFunc:
    """Product of the factor contravariant forms."""
    factors = x.module.factors
    s = ZERO
    by_depth: dict = {}
    for k, c in y.coords.items():
        by_depth.setdefault(tuple(nu for nu, _ in k), []).append((k, c))
    for k1, c1 in x.coords.items():
        for k2, c2 in by_depth.get(tuple(nu for nu, _ in k1), []):
            g = ONE
            for p, m in enumerate(factors):
                g = g * m.gram(k1[p][0])[k1[p][1]][k2[p][1]]
                if not g:
                    break
            if g:
                s = s + c1 * c2 * g
    return s


def operator_matrix(tm: TensorModule, op, keys: Sequence[Key] | None = None,
                    target: TensorModule | None = None, target_keys: Sequence[Key] | None = None) -> list:
    """Matrix (rows = target keys, columns = source keys) of a linear map on tensor vectors."""
    keys = tm.basis_keys() if keys is None else keys
    target = tm if target is None else target
    target_keys = target.basis_keys() if target_keys is None else target_keys
    idx = {k: r for r, k in enumerate(target_keys)}
    m = linalg.zeros(len(target_keys), len(keys))
    for c, key in enumerate(keys):
        y = op(tm.pure(key))
        for k2, e in y.coords.items():
            m[idx[k2]][c] = e
    return m
