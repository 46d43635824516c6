"""
Integrable highest-weight modules L(Lambda) with exact generator actions.

Weight spaces are built level by level.  A vector of L(Lambda)_{Lambda-nu}
with nu != 0 is determined by the tuple (E_j x)_j of lower vectors (no
highest-weight vectors sit below the top of a simple module), so candidate
F-word images are compared through that embedding and the lexicographically
first independent words become the pivots of the weight space.

Matrices are stored column-wise: ``cols[k]`` is the image of pivot ``k``.

Generator conventions (on a vector of weight lambda):

* K_i acts by v^{<lambda, alpha_i>}
* E_i F_i^{(a)} = F_i^{(a)} E_i + [<lambda, alpha_i> - a + 1] F_i^{(a-1)}
* contravariant form: (F_i x, y) = (x, v K_i^{-1} E_i y), (v_Lambda, v_Lambda) = 1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import linalg
from .arith import LaurentPoly, RationalFunc, Scalar, as_rf, in_negative_lattice, qfact, qint_signed
from .cartan import (CartanDatum, DimVector, dim_add, dim_le, dim_sub, dims_below, is_nonneg,
                     pairing, sym_form, tr)
from .errors import ConsistencyError, DepthError, UnsupportedError
from . import falgebra
from .falgebra import FElement, Word, enumerate_words

ZERO = RationalFunc(0)
ONE = RationalFunc(1)
V = LaurentPoly.v()

_HEIGHT_CAP = 200


@dataclass
class WeightSpace:
    depth: DimVector
    pivots: list  # pivot words
    word_coords: dict  # every word of this degree -> coordinate vector

    @property
    def dim(self) -> int:
        return len(self.pivots)


class HWModule:
    """L(anchor) computed on all depths nu <= depth (or completely when depth is None)."""

    def __init__(self, datum: CartanDatum, anchor, depth: DimVector | None = None, lowest: bool = False):
        anchor = tuple(int(x) for x in anchor)
        if len(anchor) != datum.rank:
            raise ValueError("highest weight has the wrong number of coordinates")
        if any(x < 0 for x in anchor):
            raise ValueError(f"highest weight {anchor} is not dominant")
        self.datum = datum
        self.anchor = anchor
        self.depth = None if depth is None else tuple(depth)
        self.lowest = lowest
        self.spaces: dict[DimVector, WeightSpace] = {}
        self._f: dict = {}  # (i, a, nu_src) -> columns in nu_src + a alpha_i
        self._e: dict = {}  # (i, nu_src) -> columns in nu_src - alpha_i
        self._gram: dict = {}
        self._free_form: dict = {}
        self._build()

    # ------------------------------------------------------------------ build
    def _levels(self):
        if self.depth is not None:
            by_height: dict = {}
            for nu in dims_below(self.depth):
                by_height.setdefault(tr(nu), []).append(nu)
            for h in sorted(by_height):
                yield by_height[h]
            return
        if not self.datum.is_finite_type() and any(self.anchor):
            raise DepthError("L(Lambda) is infinite-dimensional for this Cartan datum; pass a depth")
        level = [self.datum.zero()]
        h = 0
        while level:
            yield level
            nxt = set()
            for nu in level:
                if nu in self.spaces and self.spaces[nu].dim:
                    for i in range(self.datum.rank):
                        nxt.add(dim_add(nu, self.datum.simple(i)))
            level = sorted(nxt)
            h += 1
            if h > _HEIGHT_CAP:
                raise DepthError("module does not terminate within the height cap; pass a depth")

    def _build(self):
        d = self.datum
        for level in self._levels():
            for nu in level:
                if not any(nu):
                    self.spaces[nu] = WeightSpace(nu, [()], {(): [ONE]})
                    continue
                self._build_space(nu)
        self.complete = self.depth is None

    def pairing(self, nu: DimVector, i: int) -> int:
        """<Lambda - nu, alpha_i^vee>"""
        return pairing(self.datum, self.anchor, nu, i)

    def dim(self, nu: DimVector) -> int:
        sp = self.spaces.get(tuple(nu))
        return sp.dim if sp else 0

    def dims(self) -> dict:
        return {nu: sp.dim for nu, sp in self.spaces.items() if sp.dim}

    def total_dim(self) -> int:
        return sum(self.dims().values())

    def within(self, nu: DimVector) -> bool:
        if not is_nonneg(nu):
            return True
        return self.depth is None or dim_le(nu, self.depth)

    def _space(self, nu: DimVector) -> WeightSpace | None:
        if not is_nonneg(nu):
            return None
        return self.spaces.get(nu)

    def _embed_f(self, i: int, a: int, nu_src: DimVector, y: list) -> list:
        """(E_j F_i^{(a)} y)_j concatenated over j, y a vector at nu_src."""
        d = self.datum
        target = dim_add(nu_src, d.simple(i, a))
        out = []
        for j in range(d.rank):
            below = dim_sub(target, d.simple(j))
            sp = self._space(below)
            if sp is None or sp.dim == 0:
                continue
            acc = [ZERO] * sp.dim
            ey = self.apply_e_raw(j, nu_src, y)  # E_j y at nu_src - alpha_j
            if ey is not None:
                acc = _add(acc, self.apply_f_raw(i, a, dim_sub(nu_src, d.simple(j)), ey))
            if j == i:
                c = qint_signed(self.pairing(nu_src, i) - a + 1)
                if c:
                    fy = y if a == 1 else self.apply_f_raw(i, a - 1, nu_src, y)
                    acc = _add(acc, linalg.scale(as_rf(c), fy))
            out.extend(acc)
        return out

    def _build_space(self, nu: DimVector):
        d = self.datum
        words = enumerate_words(d, nu)
        # embeddings of F_i^{(a)} on pivots of lower spaces, computed once
        emb_cache: dict = {}

        def emb_letter(i, a):
            key = (i, a)
            if key not in emb_cache:
                src = dim_sub(nu, d.simple(i, a))
                sp = self._space(src)
                if sp is None or sp.dim == 0:
                    emb_cache[key] = None
                else:
                    emb_cache[key] = [self._embed_f(i, a, src, _unit(sp.dim, k)) for k in range(sp.dim)]
            return emb_cache[key]

        length = sum(self.dim(dim_sub(nu, d.simple(j))) for j in range(d.rank)
                     if is_nonneg(dim_sub(nu, d.simple(j))))
        basis = linalg.EchelonBasis(length)
        pivots: list = []
        word_emb: list = []
        for w in words:
            (i, a), rest = w[0], w[1:]
            cols = emb_letter(i, a)
            src = dim_sub(nu, d.simple(i, a))
            if cols is None:
                word_emb.append(None)
                continue
            rc = self.spaces[src].word_coords[rest]
            e = _combine(cols, rc, length)
            word_emb.append(e)
            if length and basis.add(e):
                pivots.append(w)
        coords = {}
        for w, e in zip(words, word_emb):
            coords[w] = [ZERO] * len(pivots) if e is None else basis.express(e)
        self.spaces[nu] = WeightSpace(nu, pivots, coords)
        if not pivots:
            return
        # record F^{(a)} into nu and E_j out of nu
        for i in range(d.rank):
            for a in range(1, nu[i] + 1):
                cols = emb_letter(i, a)
                if cols is not None:
                    self._f[(i, a, dim_sub(nu, d.simple(i, a)))] = [basis.express(c) for c in cols]
        offset = 0
        piv_emb = [word_emb[words.index(p)] for p in pivots]
        for j in range(d.rank):
            below = dim_sub(nu, d.simple(j))
            if not is_nonneg(below):
                continue
            n = self.dim(below)
            if n == 0:
                continue
            self._e[(j, nu)] = [e[offset:offset + n] for e in piv_emb]
            offset += n

    # ----------------------------------------------------------- raw actions
    def apply_f_raw(self, i: int, a: int, nu_src: DimVector, y: list) -> list | None:
        """F_i^{(a)} on coordinates y at nu_src; None when the target space is zero."""
        if a == 0:
            return list(y)
        target = dim_add(nu_src, self.datum.simple(i, a))
        if not self.within(target):
            raise DepthError(f"F_{self.datum.vertices[i]}^({a}) leaves the computed depth at {target}")
        cols = self._f.get((i, a, nu_src))
        if cols is None:
            return None
        return _combine(cols, y, self.dim(target))

    def apply_e_raw(self, j: int, nu_src: DimVector, y: list) -> list | None:
        cols = self._e.get((j, nu_src))
        if cols is None:
            return None
        return _combine(cols, y, self.dim(dim_sub(nu_src, self.datum.simple(j))))

    # ------------------------------------------------------------- vectors
    def vector(self, nu: DimVector, coords) -> "ModuleVector":
        nu = tuple(nu)
        return ModuleVector(self, {nu: [as_rf(c) for c in coords]})._clean()

    def highest(self) -> "ModuleVector":
        return self.vector(self.datum.zero(), [1])

    def pivot_vector(self, nu: DimVector, k: int) -> "ModuleVector":
        return self.vector(nu, _unit(self.dim(nu), k))

    def basis(self) -> list:
        """All pivot vectors, ordered by depth (height, then lexicographic)."""
        out = []
        for nu in sorted(self.dims(), key=lambda n: (tr(n), n)):
            out.extend(self.pivot_vector(nu, k) for k in range(self.dim(nu)))
        return out

    def basis_index(self) -> list:
        return [(nu, k) for nu in sorted(self.dims(), key=lambda n: (tr(n), n)) for k in range(self.dim(nu))]

    def word_vector(self, w: Word) -> "ModuleVector":
        nu = falgebra.word_degree(self.datum, w)
        if not self.within(nu):
            raise DepthError(f"word of degree {nu} is outside the computed depth")
        sp = self.spaces.get(nu)
        if sp is None:
            return ModuleVector(self, {})
        return self.vector(nu, sp.word_coords[w])

    def f_image(self, x: FElement) -> "ModuleVector":
        """x^- v_Lambda for an element x of f."""
        out = ModuleVector(self, {})
        for w, c in x.coeffs.items():
            out = out + self.word_vector(w).scale(c)
        return out

    # ------------------------------------------------------------------ forms
    def free_form(self, w1: Word, w2: Word) -> RationalFunc:
        """Contravariant form of two F-word images, by the E-past-F recursion on words."""
        if falgebra.word_degree(self.datum, w1) != falgebra.word_degree(self.datum, w2):
            return ZERO
        key = (w1, w2)
        hit = self._free_form.get(key)
        if hit is not None:
            return hit
        if not w1:
            val = ONE
        else:
            (i, a), rest = w1[0], w1[1:]
            # (F^{(a)} x, y) = (x, v^{a^2} K^{-a} E^{(a)} y)
            nu_rest = falgebra.word_degree(self.datum, rest)
            k_exp = -a * self.pairing(nu_rest, i)
            val = ZERO
            for w, c in _e_divided_on_word(self, i, a, w2).items():
                f = self.free_form(rest, w)
                if f:
                    val = val + c * f
            val = val * as_rf(V ** (a * a + k_exp))
        self._free_form[key] = val
        return val

    def gram(self, nu: DimVector) -> list:
        nu = tuple(nu)
        if nu not in self._gram:
            piv = self.spaces[nu].pivots if nu in self.spaces else []
            self._gram[nu] = [[self.free_form(p, q) for q in piv] for p in piv]
        return self._gram[nu]

    def word_gram(self, nu: DimVector) -> list:
        ws = enumerate_words(self.datum, nu)
        return [[self.free_form(p, q) for q in ws] for p in ws]

    def to_json(self) -> dict:
        d = self.datum
        spaces = []
        for nu in sorted(self.spaces, key=lambda n: (tr(n), n)):
            sp = self.spaces[nu]
            if not sp.dim:
                continue
            spaces.append({
                "depth": list(nu),
                "dim": sp.dim,
                "pivots": [falgebra.word_to_json(d, w) for w in sp.pivots],
                "gram": linalg.mat_to_json(self.gram(nu)),
            })
        return {"highest_weight": list(self.anchor),
                "depth": None if self.depth is None else list(self.depth),
                "total_dim": self.total_dim(),
                "weight_spaces": spaces}


def _e_divided_on_word(m: HWModule, i: int, a: int, w: Word) -> dict:
    """E_i^{(a)} (w v_Lambda) as a combination of F-words, computed letter by letter."""
    terms = {w: ONE}
    for _ in range(a):
        nxt: dict = {}
        for word, c in terms.items():
            for w2, e in _e_on_word(m, i, word).items():
                s = nxt.get(w2, ZERO) + c * e
                if s:
                    nxt[w2] = s
                else:
                    nxt.pop(w2, None)
        terms = nxt
    if a > 1:
        inv = as_rf(qfact(a)).inverse()
        terms = {w2: c * inv for w2, c in terms.items()}
    return terms


def _e_on_word(m: HWModule, i: int, w: Word) -> dict:
    cache = m.__dict__.setdefault("_e_word_cache", {})
    key = (i, w)
    if key in cache:
        return cache[key]
    out: dict = {}
    if w:
        (j, b), rest = w[0], w[1:]
        for w2, c in _e_on_word(m, i, rest).items():
            key2 = ((j, b),) + w2
            out[key2] = out.get(key2, ZERO) + c
        if j == i:
            nu_rest = falgebra.word_degree(m.datum, rest)
            c = qint_signed(m.pairing(nu_rest, i) - b + 1)
            if c:
                key2 = (((j, b - 1),) if b > 1 else ()) + rest
                out[key2] = out.get(key2, ZERO) + as_rf(c)
        out = {k: c for k, c in out.items() if c}
    cache[key] = out
    return out


def _unit(n: int, k: int) -> list:
    return [ONE if j == k else ZERO for j in range(n)]


def _add(x: list, y: list) -> list:
    return [a + b for a, b in zip(x, y)]


def _combine(cols: list, y: list, n: int) -> list:
    out = [ZERO] * n
    for c, col in zip(y, cols):
        if c:
            for r, e in enumerate(col):
                if e:
                    out[r] = out[r] + c * e
    return out


# ---------------------------------------------------------------- vectors

@dataclass
class ModuleVector:
    module: HWModule
    coords: dict = field(default_factory=dict)  # nu -> coefficient list

    def _clean(self) -> "ModuleVector":
        self.coords = {nu: c for nu, c in self.coords.items() if not linalg.is_zero_vec(c)}
        return self

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        out = {nu: list(c) for nu, c in self.coords.items()}
        for nu, c in other.coords.items():
            out[nu] = _add(out[nu], c) if nu in out else list(c)
        return ModuleVector(self.module, out)._clean()

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Scalar) -> "ModuleVector":
        c = as_rf(c)
        return ModuleVector(self.module, {nu: linalg.scale(c, x) for nu, x in self.coords.items()})._clean()

    def is_zero(self) -> bool:
        return not self.coords

    def __eq__(self, other):
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self.module is other.module and (self - other).is_zero()

    def flat(self) -> list:
        """Coordinates over module.basis_index()."""
        out = []
        for nu, k in self.module.basis_index():
            c = self.coords.get(nu)
            out.append(c[k] if c else ZERO)
        return out

    def render(self) -> str:
        d = self.module.datum
        parts = []
        for nu in sorted(self.coords, key=lambda n: (tr(n), n)):
            piv = self.module.spaces[nu].pivots
            for w, c in zip(piv, self.coords[nu]):
                if c:
                    vec = f"F{falgebra.word_str(d, w)}v" if w else "v"
                    parts.append(f"[{c}]{vec}")
        return " + ".join(parts) if parts else "0"


def build(datum: CartanDatum, anchor, depth: DimVector | None = None, lowest: bool = False) -> HWModule:
    return HWModule(datum, anchor, depth, lowest)


def _lower(m: HWModule, i: int, n: int, x: ModuleVector) -> ModuleVector:
    out: dict = {}
    for nu, c in x.coords.items():
        y = m.apply_f_raw(i, n, nu, c)
        if y is not None:
            tgt = dim_add(nu, m.datum.simple(i, n))
            out[tgt] = _add(out[tgt], y) if tgt in out else y
    return ModuleVector(m, out)._clean()


def _raise(m: HWModule, i: int, n: int, x: ModuleVector) -> ModuleVector:
    for _ in range(n):
        out: dict = {}
        for nu, c in x.coords.items():
            y = m.apply_e_raw(i, nu, c)
            if y is not None:
                tgt = dim_sub(nu, m.datum.simple(i))
                out[tgt] = _add(out[tgt], y) if tgt in out else y
        x = ModuleVector(m, out)._clean()
    if n > 1:
        x = x.scale(as_rf(qfact(n)).inverse())
    return x


def act_f(i: int, n: int, x: ModuleVector) -> ModuleVector:
    """F_i^{(n)} x (for a lowest-weight module the raising operator plays this role)."""
    m = x.module
    return _raise(m, i, n, x) if m.lowest else _lower(m, i, n, x)


def act_e(i: int, n: int, x: ModuleVector) -> ModuleVector:
    m = x.module
    return _lower(m, i, n, x) if m.lowest else _raise(m, i, n, x)


def act_k(i: int, sign: int, x: ModuleVector) -> ModuleVector:
    m = x.module
    s = -sign if m.lowest else sign
    return ModuleVector(m, {nu: linalg.scale(as_rf(V ** (s * m.pairing(nu, i))), c)
                            for nu, c in x.coords.items()})


def shapovalov(x: ModuleVector, y: ModuleVector) -> RationalFunc:
    if x.module is not y.module:
        raise ValueError("vectors from different modules")
    m = x.module
    s = ZERO
    for nu, cx in x.coords.items():
        cy = y.coords.get(nu)
        if cy is None:
            continue
        g = m.gram(nu)
        s = s + linalg.dot(cx, linalg.matvec(g, cy))
    return s


def bar_module(x: ModuleVector) -> ModuleVector:
    return ModuleVector(x.module, {nu: [c.bar() for c in cs] for nu, cs in x.coords.items()})


def factor_cb(m: HWModule) -> list:
    """Canonical basis of L(Lambda) in pivot coordinates, ordered by depth."""
    d = m.datum
    out = []
    if falgebra.canonical_basis_supported(d):
        for nu in sorted(m.dims(), key=lambda n: (tr(n), n)):
            found = []
            for b in falgebra.canonical_basis_f(d, nu):
                x = m.f_image(b)
                if not x.is_zero() and x not in found:
                    found.append(x)
            if linalg.rank([y.coords[nu] for y in found]) != m.dim(nu) or len(found) != m.dim(nu):
                raise ConsistencyError(f"canonical basis images do not form a basis at depth {nu}")
            for x in found:
                if bar_module(x) != x:
                    raise ConsistencyError("canonical basis element is not bar-invariant")
            out.extend(found)
        return out
    for nu in sorted(m.dims(), key=lambda n: (tr(n), n)):
        if m.dim(nu) > 1:
            raise UnsupportedError(
                f"canonical basis unavailable: weight space at depth {nu} has dimension {m.dim(nu)}")
        x = m.pivot_vector(nu, 0)
        if not in_negative_lattice(shapovalov(x, x), constant=1):
            raise ConsistencyError(f"pivot at depth {nu} is not almost orthonormal")
        out.append(x)
    return out
