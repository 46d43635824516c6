"""
The half quantum algebra f, degree by degree.

f_nu is realized as the span of divided-power words of degree nu modulo the
radical of the standard bilinear form.  Nothing is rewritten by Serre relations:
they show up as radical elements, which ``serre_radical_check`` confirms.

A word is a tuple of letters ``(i, a)`` (vertex position, exponent >= 1) and
stands for theta_{i_1}^{(a_1)} ... theta_{i_m}^{(a_m)}.

Conventions:

* (theta_i, theta_i) = 1 / (1 - v^-2)
* r(theta_i) = theta_i (x) 1 + 1 (x) theta_i, multiplicative for the twisted
  product (x1 (x) x2)(y1 (x) y2) = v^{(|x2|, |y1|)} x1 y1 (x) x2 y2
* (x, y' y'') = (r(x), y' (x) y'')
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from . import linalg
from .arith import LaurentPoly, RationalFunc, Scalar, as_rf, qfact
from .cartan import CartanDatum, DimVector, dim_add, dim_sub, sym_form, tr
from .errors import ConsistencyError, UnsupportedError

Word = tuple

V = LaurentPoly.v()
ONE = RationalFunc(1)
ZERO = RationalFunc(0)
THETA_NORM = RationalFunc(1, 1 - V ** -2)  # (theta_i, theta_i)


# --- words -----------------------------------------------------------------------

def word_degree(d: CartanDatum, w: Word) -> DimVector:
    nu = [0] * d.rank
    for i, a in w:
        nu[i] += a
    return tuple(nu)


def word_str(d: CartanDatum, w: Word) -> str:
    if not w:
        return "1"
    return "".join(f"({d.vertices[i]}^{a})" if a > 1 else f"({d.vertices[i]})" for i, a in w)


def word_to_json(d: CartanDatum, w: Word) -> list:
    return [[d.vertices[i], a] for i, a in w]


def expand(w: Word) -> tuple:
    """Divided-power word -> plain letter sequence."""
    return tuple(i for i, a in w for _ in range(a))


def divided_factor(w: Word) -> LaurentPoly:
    """prod [a]! over the letters, so that word = plain(word) / factor."""
    out = LaurentPoly(1)
    for _, a in w:
        if a > 1:
            out = out * qfact(a)
    return out


def enumerate_words(d: CartanDatum, nu: DimVector) -> list[Word]:
    """All words of degree nu in lexicographic order (vertex order, larger exponent first)."""
    out: list[Word] = []

    def rec(prefix: list, left: list):
        if not any(left):
            out.append(tuple(prefix))
            return
        for i in range(d.rank):
            for a in range(left[i], 0, -1):
                left[i] -= a
                prefix.append((i, a))
                rec(prefix, left)
                prefix.pop()
                left[i] += a

    rec([], list(nu))
    return out


# --- elements of f -------------------------------------------------------------------

@dataclass(frozen=True)
class FElement:
    """sum coeff * word, all words of one degree."""

    degree: DimVector
    coeffs: Mapping  # Word -> RationalFunc

    @classmethod
    def word(cls, d: CartanDatum, w: Word, c: Scalar = 1) -> "FElement":
        return cls(word_degree(d, w), {w: as_rf(c)})

    @classmethod
    def zero(cls, degree: DimVector) -> "FElement":
        return cls(degree, {})

    def __add__(self, other: "FElement") -> "FElement":
        if self.degree != other.degree:
            raise ValueError("adding elements of different degrees")
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            s = out.get(w, ZERO) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return FElement(self.degree, out)

    def __neg__(self) -> "FElement":
        return FElement(self.degree, {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other: "FElement") -> "FElement":
        return self + (-other)

    def scale(self, c: Scalar) -> "FElement":
        c = as_rf(c)
        if not c:
            return FElement(self.degree, {})
        return FElement(self.degree, {w: c * x for w, x in self.coeffs.items()})

    def __mul__(self, other: "FElement") -> "FElement":
        out: dict = {}
        for w1, c1 in self.coeffs.items():
            for w2, c2 in other.coeffs.items():
                w = w1 + w2
                s = out.get(w, ZERO) + c1 * c2
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return FElement(dim_add(self.degree, other.degree), out)

    def is_zero_formally(self) -> bool:
        return not self.coeffs

    def to_json(self, d: CartanDatum) -> list:
        return [{"word": word_to_json(d, w), "coeff": str(c)}
                for w, c in sorted(self.coeffs.items())]

    def render(self, d: CartanDatum) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for w, c in sorted(self.coeffs.items()):
            parts.append(word_str(d, w) if c == ONE else f"[{c}]{word_str(d, w)}")
        return " + ".join(parts)


def bar_f(x: FElement) -> FElement:
    """Bar involution: words are fixed, coefficients are conjugated."""
    return FElement(x.degree, {w: c.bar() for w, c in x.coeffs.items()})


def theta(d: CartanDatum, i: int, a: int = 1) -> FElement:
    return FElement.word(d, ((i, a),) if a else ())


def one(d: CartanDatum) -> FElement:
    return FElement.word(d, ())


# --- twisted coproduct --------------------------------------------------------------

TensorF = dict  # (Word, Word) -> RationalFunc


def _twisted_mul(d: CartanDatum, x: TensorF, y: TensorF) -> TensorF:
    out: dict = {}
    for (x1, x2), c in x.items():
        deg_x2 = word_degree(d, x2)
        for (y1, y2), e in y.items():
            k = sym_form(d, deg_x2, word_degree(d, y1))
            coeff = c * e * V ** k
            key = (x1 + y1, x2 + y2)
            s = out.get(key, ZERO) + coeff
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _r_letter(i: int, a: int) -> TensorF:
    # r(theta_i^(a)) = sum_t v^{t(a-t)} theta_i^(t) (x) theta_i^(a-t)
    out = {}
    for t in range(a + 1):
        left = ((i, t),) if t else ()
        right = ((i, a - t),) if a - t else ()
        out[(left, right)] = as_rf(V ** (t * (a - t)))
    return out


def r_word(d: CartanDatum, w: Word) -> TensorF:
    acc: TensorF = {((), ()): ONE}
    for i, a in w:
        acc = _twisted_mul(d, acc, _r_letter(i, a))
    return acc


def r_coproduct(d: CartanDatum, x: FElement) -> TensorF:
    """r(x) in the twisted tensor square, as a map (word, word) -> coefficient."""
    out: dict = {}
    for w, c in x.coeffs.items():
        for key, e in r_word(d, w).items():
            s = out.get(key, ZERO) + c * e
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


# --- the bilinear form ------------------------------------------------------------------

class HalfAlgebra:
    """Per-datum caches for the form, Gram data and dual bases of f."""

    def __init__(self, d: CartanDatum):
        self.d = d
        self._plain: dict = {}
        self._basis: dict = {}

    # The form on plain words is  (1 - v^-2)^-n * P(x, y)  with P Laurent.
    def plain_pairing(self, x: tuple, y: tuple) -> LaurentPoly:
        if len(x) != len(y):
            return LaurentPoly()
        if not x:
            return LaurentPoly(1)
        key = (x, y)
        hit = self._plain.get(key)
        if hit is not None:
            return hit
        if sorted(x) != sorted(y):
            self._plain[key] = LaurentPoly()
            return self._plain[key]
        j = y[0]
        rest = y[1:]
        a = self.d.matrix
        total = LaurentPoly()
        twist = 0
        for p, xp in enumerate(x):
            if xp == j:
                sub = self.plain_pairing(x[:p] + x[p + 1:], rest)
                if sub:
                    total = total + sub.shift(twist)
            twist += a[xp][j]
        self._plain[key] = total
        return total

    def word_form(self, w1: Word, w2: Word) -> RationalFunc:
        x, y = expand(w1), expand(w2)
        p = self.plain_pairing(x, y)
        if not p:
            return ZERO
        n = len(x)
        return RationalFunc(p, (1 - V ** -2) ** n * divided_factor(w1) * divided_factor(w2))

    def form(self, x: FElement, y: FElement) -> RationalFunc:
        if x.degree != y.degree:
            return ZERO
        s = ZERO
        for w1, c1 in x.coeffs.items():
            for w2, c2 in y.coeffs.items():
                f = self.word_form(w1, w2)
                if f:
                    s = s + c1 * c2 * f
        return s

    def word_gram(self, words: list[Word]) -> list[list[RationalFunc]]:
        return [[self.word_form(a, b) for b in words] for a in words]

    def basis(self, nu: DimVector) -> "FBasisData":
        nu = tuple(nu)
        hit = self._basis.get(nu)
        if hit is None:
            hit = self._basis[nu] = _build_basis(self, nu)
        return hit


@dataclass
class FBasisData:
    degree: DimVector
    words: list  # all words of the degree
    pivot_words: list
    gram: list  # form on pivots
    gram_inverse: list
    _alg: HalfAlgebra = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return len(self.pivot_words)

    def pivots(self) -> list[FElement]:
        return [FElement.word(self._alg.d, w) for w in self.pivot_words]

    def coords(self, x: FElement) -> list[RationalFunc]:
        """Coordinates of x (mod radical) in the pivot basis."""
        if x.degree != self.degree:
            raise ValueError("degree mismatch")
        rhs = [self._alg.form(FElement.word(self._alg.d, p), x) for p in self.pivot_words]
        return linalg.matvec(self.gram_inverse, rhs)

    def element(self, coords) -> FElement:
        out = {}
        for w, c in zip(self.pivot_words, coords):
            if c:
                out[w] = as_rf(c)
        return FElement(self.degree, out)


def _scaled_rows(alg: HalfAlgebra, words: list[Word]) -> list[list[RationalFunc]]:
    # Gram rows up to nonzero row/column scalings: same rank, Laurent entries
    plain = [expand(w) for w in words]
    return [[RationalFunc.from_laurent(alg.plain_pairing(a, b)) for b in plain] for a in plain]


def _build_basis(alg: HalfAlgebra, nu: DimVector) -> FBasisData:
    words = enumerate_words(alg.d, nu)
    rows = _scaled_rows(alg, words)
    piv = linalg.independent_rows(rows)
    # second elimination order as an internal consistency check
    rev = linalg.independent_rows(rows[::-1])
    if len(rev) != len(piv):
        raise ConsistencyError(f"Gram rank disagrees between elimination orders at degree {nu}")
    pivot_words = [words[k] for k in piv]
    gram = alg.word_gram(pivot_words)
    try:
        ginv = linalg.inverse(gram) if gram else []
    except linalg.SingularMatrixError:
        raise ConsistencyError(f"pivot Gram matrix singular at degree {nu}") from None
    return FBasisData(tuple(nu), words, pivot_words, gram, ginv, alg)


@lru_cache(maxsize=None)
def half_algebra(d: CartanDatum) -> HalfAlgebra:
    return HalfAlgebra(d)


def form(d: CartanDatum, x: FElement, y: FElement) -> RationalFunc:
    return half_algebra(d).form(x, y)


def basis_and_gram(d: CartanDatum, nu: DimVector) -> FBasisData:
    return half_algebra(d).basis(nu)


def dual_basis(d: CartanDatum, nu: DimVector) -> list[FElement]:
    """Elements b*_k with (pivot_j, b*_k) = delta_jk."""
    data = basis_and_gram(d, nu)
    n = data.dim
    return [data.element([data.gram_inverse[j][k] for j in range(n)]) for k in range(n)]


def in_radical(d: CartanDatum, x: FElement) -> bool:
    """x pairs to zero with every word of its degree."""
    alg = half_algebra(d)
    return all(not alg.form(FElement.word(d, w), x) for w in enumerate_words(d, x.degree))


def serre_element(d: CartanDatum, i: int, j: int, sign_flip: bool = False) -> FElement:
    n = 1 - d.a(i, j)
    total = None
    for m in range(n + 1):
        w = tuple(l for l in ((i, m), (j, 1), (i, n - m)) if l[1])
        s = -1 if m % 2 else 1
        if sign_flip and m == 1:
            s = -s
        term = FElement.word(d, w, s)
        total = term if total is None else total + term
    return total


def serre_radical_check(d: CartanDatum, i: int, j: int, sign_flip: bool = False) -> bool:
    if i == j:
        raise ValueError("Serre relation needs i != j")
    return in_radical(d, serre_element(d, i, j, sign_flip))


# --- canonical basis for small rank -----------------------------------------------------

def _supported_kind(d: CartanDatum) -> str | None:
    if d.rank == 1:
        return "rank1"
    if d.rank == 2:
        m = d.edge_mult(0, 1)
        if m == 0:
            return "A1xA1"
        if m == 1:
            return "A2"
    return None


def canonical_basis_supported(d: CartanDatum) -> bool:
    return _supported_kind(d) is not None


def canonical_basis_f(d: CartanDatum, nu: DimVector) -> list[FElement]:
    """
    Canonical basis of f_nu for rank one and simply-laced rank two:
    divided powers, commuting products, and the monomials
    theta_i^(a) theta_j^(b) theta_i^(c) with b >= a + c for A2.
    Each element is checked to be bar-invariant with Laurent pivot coordinates.
    """
    kind = _supported_kind(d)
    if kind is None:
        raise UnsupportedError("canonical basis of f unavailable for this Cartan datum")
    nu = tuple(nu)

    def mono(*letters) -> Word:
        return tuple((i, a) for i, a in letters if a)

    words: list[Word] = []
    if kind == "rank1":
        words = [mono((0, nu[0]))]
    elif kind == "A1xA1":
        words = [mono((0, nu[0]), (1, nu[1]))]
    else:
        for i, j in ((0, 1), (1, 0)):
            n_i, b = nu[i], nu[j]
            # with nu_1 == nu_2 the second ordering repeats the first
            if b < n_i or (i == 1 and nu[0] == nu[1]):
                continue
            for a in range(n_i, -1, -1):
                words.append(mono((i, a), (j, b), (i, n_i - a)))
    data = basis_and_gram(d, nu)
    out = []
    for w in words:
        x = FElement.word(d, w)
        coords = data.coords(x)
        if not all(c.is_laurent() for c in coords):
            raise ConsistencyError(f"canonical element {word_str(d, w)} is not integral in the pivot basis")
        if not in_radical(d, bar_f(x) - x):
            raise ConsistencyError(f"canonical element {word_str(d, w)} is not bar-invariant")
        out.append(x)
    if len(out) != data.dim:
        raise ConsistencyError(f"canonical basis size {len(out)} != dim f_nu = {data.dim} at {nu}")
    return out
