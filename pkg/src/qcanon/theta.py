"""
The quasi-R-matrix Theta = sum_nu Theta_nu, degree by degree.

Theta_nu is the canonical element of the form on f_nu,

    Theta_nu = s_nu * sum_k  p_k^- (x) p_k^{*+},     s_nu = (-1)^{tr nu} v^{tr nu},

stored in pivot coordinates: ``coeffs[k][l]`` multiplies p_k^- (x) p_l^+.
The scalar s_nu is not taken on trust: ``resolve_convention`` recovers it by
comparing against ``theta_by_intertwiner``, which solves

    Delta(u) Theta = Theta Delta-bar(u),   u in {E_i, F_i},

degreewise as a linear system on probe tensor products, with no reference to
the form on f.  ``CONVENTION`` records the resolved values.

Minus parts act on the first tensor factor(s), plus parts on the last one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import falgebra, linalg
from .arith import LaurentPoly, RationalFunc, as_rf
from .cartan import CartanDatum, DimVector, dim_add, dim_le, dim_sub, dims_below, is_nonneg, tr
from .errors import ConsistencyError, DepthError
from .falgebra import FElement
from .hwmodule import HWModule
from .tensor import TensorModule, TensorVector, act_tensor, act_word

ZERO = RationalFunc(0)
ONE = RationalFunc(1)
V = LaurentPoly.v()

# Frozen after resolution against the intertwiner oracle (see resolve_convention).
CONVENTION = {
    "coproduct": "Delta(F_i) = F_i (x) K_i^-1 + 1 (x) F_i; Delta(E_i) = E_i (x) 1 + K_i (x) E_i; Delta(K_i) = K_i (x) K_i",
    "form": "(theta_i, theta_i) = 1/(1 - v^-2); (x, y'y'') = (r(x), y' (x) y'')",
    "theta_scalar": "(-1)^{tr nu} v^{tr nu}",
    "theta_sign": -1,
    "theta_v_exponent": 1,
    "theta_sides": "minus part on the first factor, plus part on the second",
}


@dataclass(frozen=True)
class ThetaComponent:
    degree: DimVector
    pivots: tuple  # pivot words of f_nu
    coeffs: tuple  # square matrix over RationalFunc

    def terms(self, d: CartanDatum) -> list:
        """(minus, plus) pairs with the scalar folded into the plus side."""
        out = []
        for k, p in enumerate(self.pivots):
            plus = FElement(self.degree, {q: c for q, c in zip(self.pivots, self.coeffs[k]) if c})
            if plus.coeffs:
                out.append((FElement.word(d, p), plus))
        return out

    def nonzero(self):
        for k, row in enumerate(self.coeffs):
            for l, c in enumerate(row):
                if c:
                    yield k, l, c

    def in_basis(self, d: CartanDatum, words) -> list:
        """Coefficient matrix of the same tensor over another basis of f_nu given by words."""
        data = falgebra.basis_and_gram(d, self.degree)
        alg = falgebra.half_algebra(d)
        words = list(words)
        # coordinates of the old pivots in the new words: solve via the Gram of the new words
        g_new = alg.word_gram(words)
        g_inv = linalg.inverse(g_new)
        t = []
        for p in self.pivots:
            rhs = [alg.word_form(w, p) for w in words]
            t.append(linalg.matvec(g_inv, rhs))  # p = sum_m t[m] w_m
        tt = linalg.transpose(t)
        return linalg.matmul(linalg.matmul(tt, [list(r) for r in self.coeffs]), t)

    def bar(self) -> "ThetaComponent":
        return ThetaComponent(self.degree, self.pivots, tuple(tuple(c.bar() for c in r) for r in self.coeffs))

    def is_zero(self) -> bool:
        return not any(True for _ in self.nonzero())

    def to_json(self, d: CartanDatum) -> dict:
        return {
            "degree": list(self.degree),
            "terms": [{"minus": m.to_json(d), "plus": p.to_json(d)} for m, p in self.terms(d)],
        }


def _scalar(nu: DimVector, sign: int, vexp: int) -> RationalFunc:
    h = tr(nu)
    return as_rf(LaurentPoly.monomial(vexp * h, sign ** h))


@lru_cache(maxsize=None)
def theta(d: CartanDatum, nu: DimVector, sign: int = CONVENTION["theta_sign"],
          vexp: int = CONVENTION["theta_v_exponent"]) -> ThetaComponent:
    """Theta_nu from the dual basis of the pivot basis of f_nu."""
    nu = tuple(nu)
    data = falgebra.basis_and_gram(d, nu)
    s = _scalar(nu, sign, vexp)
    coeffs = tuple(tuple(s * c for c in row) for row in data.gram_inverse)
    return ThetaComponent(nu, tuple(data.pivot_words), coeffs)


def theta_from_words(d: CartanDatum, nu: DimVector, words) -> ThetaComponent:
    """Theta_nu built from an arbitrary basis of f_nu given by words (for basis-independence checks)."""
    alg = falgebra.half_algebra(d)
    words = tuple(words)
    g = alg.word_gram(list(words))
    try:
        ginv = linalg.inverse(g)
    except linalg.SingularMatrixError:
        raise ValueError("words do not form a basis of f_nu") from None
    s = _scalar(nu, CONVENTION["theta_sign"], CONVENTION["theta_v_exponent"])
    return ThetaComponent(tuple(nu), words, tuple(tuple(s * c for c in r) for r in ginv))


def zero_component(d: CartanDatum, nu: DimVector) -> ThetaComponent:
    data = falgebra.basis_and_gram(d, nu)
    n = data.dim
    return ThetaComponent(tuple(nu), tuple(data.pivot_words), tuple((ZERO,) * n for _ in range(n)))


# --- products in U^- (x) U^+ -------------------------------------------------------------

def _word_coords(d: CartanDatum, w) -> list:
    data = falgebra.basis_and_gram(d, falgebra.word_degree(d, w))
    return data.coords(FElement.word(d, w))


def convolve(d: CartanDatum, a: ThetaComponent, b: ThetaComponent) -> ThetaComponent:
    """(sum a) * (sum b) in U^- (x) U^+ restricted to one pair of degrees; factorwise product."""
    nu = dim_add(a.degree, b.degree)
    data = falgebra.basis_and_gram(d, nu)
    n = data.dim
    out = linalg.zeros(n, n)
    cache: dict = {}

    def coords(w):
        if w not in cache:
            cache[w] = _word_coords(d, w)
        return cache[w]

    for k, l, c in a.nonzero():
        for m, q, e in b.nonzero():
            left = coords(a.pivots[k] + b.pivots[m])
            right = coords(a.pivots[l] + b.pivots[q])
            ce = c * e
            for x, lx in enumerate(left):
                if lx:
                    f = ce * lx
                    for y, ry in enumerate(right):
                        if ry:
                            out[x][y] = out[x][y] + f * ry
    return ThetaComponent(nu, tuple(data.pivot_words), tuple(tuple(r) for r in out))


def _sum_components(d, nu, comps) -> ThetaComponent:
    acc = zero_component(d, nu)
    rows = [list(r) for r in acc.coeffs]
    for c in comps:
        if c.pivots != acc.pivots:
            raise ConsistencyError("pivot mismatch while summing components")
        for k, l, e in c.nonzero():
            rows[k][l] = rows[k][l] + e
    return ThetaComponent(acc.degree, acc.pivots, tuple(tuple(r) for r in rows))


def _splits(nu: DimVector):
    for a in dims_below(nu):
        yield a, dim_sub(nu, a)


@lru_cache(maxsize=None)
def theta_inverse(d: CartanDatum, nu: DimVector) -> ThetaComponent:
    """Degree-nu part of Theta^-1 from sum_{a+b=nu} Theta_a Theta^-1_b = 0."""
    nu = tuple(nu)
    if not any(nu):
        return theta(d, nu)
    parts = []
    for a, b in _splits(nu):
        if any(a):
            parts.append(convolve(d, theta(d, a), theta_inverse(d, b)))
    s = _sum_components(d, nu, parts)
    return ThetaComponent(nu, s.pivots, tuple(tuple(-c for c in r) for r in s.coeffs))


def check_inverse(d: CartanDatum, nu: DimVector) -> bool:
    """Theta * bar(Theta) vanishes in degree nu != 0 (and is 1 (x) 1 in degree 0)."""
    nu = tuple(nu)
    parts = [convolve(d, theta(d, a), theta(d, b).bar()) for a, b in _splits(nu)]
    s = _sum_components(d, nu, parts)
    if not any(nu):
        return s.coeffs == ((ONE,),)
    return s.is_zero()


def components_equal(d: CartanDatum, a: ThetaComponent, b: ThetaComponent) -> bool:
    if a.degree != b.degree:
        return False
    if a.pivots == b.pivots:
        return a.coeffs == b.coeffs
    return linalg.mat_equal(a.in_basis(d, b.pivots), [list(r) for r in b.coeffs])


# --- application -----------------------------------------------------------------------

def _plus_on_factor(m: HWModule, word, bk) -> list:
    cache = m.__dict__.setdefault("_eword_cache", {})
    key = (word, bk)
    hit = cache.get(key)
    if hit is None:
        from . import hwmodule
        x = m.pivot_vector(*bk)
        for i, a in reversed(word):
            x = hwmodule.act_e(i, a, x)
            if x.is_zero():
                break
        hit = [((nu, k), c) for nu, cs in x.coords.items() for k, c in enumerate(cs) if c]
        cache[key] = hit
    return hit


def apply_component(comp: ThetaComponent, x: TensorVector) -> TensorVector:
    """Theta_nu applied to x: minus words on factors 0..N-2 (through the coproduct), plus on factor N-1."""
    tm = x.module
    last = tm.n - 1
    m_last = tm.factors[last]
    out = TensorVector(tm, {})
    for key, c in x.coords.items():
        if not dim_le(comp.degree, key[last][0]):
            continue
        plus = [_plus_on_factor(m_last, p, key[last]) for p in comp.pivots]
        for k, row in enumerate(comp.coeffs):
            # sum_l C_kl p_l^+ y
            w: dict = {}
            for l, e in enumerate(row):
                if e:
                    for bk, f in plus[l]:
                        w[bk] = w.get(bk, ZERO) + e * f
            w = {bk: f for bk, f in w.items() if f}
            if not w:
                continue
            head = act_word(TensorVector(tm, {key: c}), comp.pivots[k], "F", 0, last)
            for hk, h in head.coords.items():
                acc = {}
                for bk, f in w.items():
                    acc[hk[:last] + (bk,)] = h * f
                out = out + TensorVector(tm, acc)
    return out


def degrees_for(x: TensorVector) -> list:
    """All nu that can act nontrivially on x (bounded by the last factor's depths)."""
    last = x.module.n - 1
    seen = set()
    for key in x.coords:
        for nu in dims_below(key[last][0]):
            seen.add(nu)
    return sorted(seen, key=lambda n: (tr(n), n))


def apply_theta(x: TensorVector, comps=None) -> TensorVector:
    """Theta applied to x; ``comps`` maps degree -> component (defaults to the frozen Theta)."""
    d = x.module.datum
    out = TensorVector(x.module, {})
    for nu in degrees_for(x):
        comp = comps[nu] if comps is not None else theta(d, nu)
        out = out + apply_component(comp, x)
    return out


def apply_theta_inverse(x: TensorVector) -> TensorVector:
    d = x.module.datum
    return apply_theta(x, {nu: theta_inverse(d, nu) for nu in degrees_for(x)})


# --- the intertwiner oracle ---------------------------------------------------------------

_oracle_cache: dict = {}


def _probe(d: CartanDatum, c: int, nu: DimVector) -> TensorModule:
    anchor = tuple(c for _ in range(d.rank))
    depth = tuple(x + 1 for x in nu)
    m = HWModule(d, anchor, depth)
    return TensorModule([m, m])


def theta_by_intertwiner(d: CartanDatum, nu: DimVector, max_escalation: int = 3) -> ThetaComponent:
    """
    Solve for Theta_nu from the intertwining property alone, using lower
    degrees from this same oracle.  The probe L(c rho) (x) L(c rho) is escalated
    in c until the linear system has a unique solution.
    """
    nu = tuple(nu)
    key = (d, nu)
    if key in _oracle_cache:
        return _oracle_cache[key]
    data = falgebra.basis_and_gram(d, nu)
    n = data.dim
    pivots = tuple(data.pivot_words)
    if not any(nu):
        comp = ThetaComponent(nu, pivots, ((ONE,),))
        _oracle_cache[key] = comp
        return comp
    if n == 0:
        comp = ThetaComponent(nu, (), ())
        _oracle_cache[key] = comp
        return comp
    lower = {}
    for i in range(d.rank):
        mu = dim_sub(nu, d.simple(i))
        if is_nonneg(mu):
            lower[i] = theta_by_intertwiner(d, mu, max_escalation)
    base = max(nu)
    last_rank = None
    for c in range(base, base + max_escalation + 1):
        tm = _probe(d, c, nu)
        sol, rank = _solve_probe(d, tm, nu, pivots, lower)
        last_rank = rank
        if sol is not None:
            comp = ThetaComponent(nu, pivots, tuple(tuple(sol[k * n:(k + 1) * n]) for k in range(n)))
            _oracle_cache[key] = comp
            return comp
    raise DepthError(f"intertwiner system underdetermined at degree {nu} (rank {last_rank} < {n * n}); "
                     "deeper probes needed")


def _unit_component(nu, pivots, k, l) -> ThetaComponent:
    n = len(pivots)
    rows = tuple(tuple(ONE if (a, b) == (k, l) else ZERO for b in range(n)) for a in range(n))
    return ThetaComponent(nu, pivots, rows)


def _solve_probe(d, tm: TensorModule, nu, pivots, lower):
    n = len(pivots)
    m = tm.factors[0]
    top = (d.zero(), 0)
    probes = []
    wanted = {nu} | {dim_sub(nu, d.simple(i)) for i in range(d.rank)}
    for bk in m.basis_index():
        if bk[0] in wanted:
            probes.append(tm.pure((top, bk)))
    unknowns = [(k, l) for k in range(n) for l in range(n)]
    units = [_unit_component(nu, pivots, k, l) for k, l in unknowns]
    rows: dict = {}  # (tag, probe, key) -> (coeff list, rhs)

    def record(tag, vec_list, known):
        keys = set(known.coords)
        for v in vec_list:
            keys |= set(v.coords)
        for key in keys:
            rows[(tag, key)] = ([v.coeff(key) for v in vec_list], -known.coeff(key))

    for pi, z in enumerate(probes):
        for i in range(d.rank):
            # F_i:  (1(x)F) T - T (1(x)F)  +  (F(x)K^-1) Th' - Th' (F(x)K)  = 0
            fz = act_tensor("F", i, z, lo=1, hi=2)
            vecs = []
            for u in units:
                a = act_tensor("F", i, apply_component(u, z), lo=1, hi=2)
                vecs.append(a - apply_component(u, fz))
            known = TensorVector(tm, {})
            if i in lower:
                th = lower[i]
                t1 = act_tensor("Kinv", i, act_tensor("F", i, apply_component(th, z), lo=0, hi=1), lo=1, hi=2)
                t2 = apply_component(th, act_tensor("K", i, act_tensor("F", i, z, lo=0, hi=1), lo=1, hi=2))
                known = t1 - t2
            record(("F", i, pi), vecs, known)
            # E_i:  (E(x)1) T - T (E(x)1)  +  (K(x)E) Th' - Th' (K^-1(x)E)  = 0
            ez = act_tensor("E", i, z, lo=0, hi=1)
            vecs = []
            for u in units:
                a = act_tensor("E", i, apply_component(u, z), lo=0, hi=1)
                vecs.append(a - apply_component(u, ez))
            known = TensorVector(tm, {})
            if i in lower:
                th = lower[i]
                t1 = act_tensor("K", i, act_tensor("E", i, apply_component(th, z), lo=1, hi=2), lo=0, hi=1)
                t2 = apply_component(th, act_tensor("Kinv", i, act_tensor("E", i, z, lo=1, hi=2), lo=0, hi=1))
                known = t1 - t2
            record(("E", i, pi), vecs, known)
    ordered = sorted(rows.items(), key=lambda kv: repr(kv[0]))
    a = [r[0] for _, r in ordered]
    b = [r[1] for _, r in ordered]
    rank = linalg.rank(a) if a else 0
    if rank < len(unknowns):
        return None, rank
    try:
        sol = linalg.solve(a, b)
    except linalg.SingularMatrixError as exc:
        raise ConsistencyError(f"intertwiner system at degree {nu} is inconsistent: {exc}") from None
    return sol, rank


def resolve_convention(d: CartanDatum, max_height: int = 2) -> list:
    """All (sign, v-exponent) ansatz values that reproduce the oracle up to the given height."""
    good = []
    degrees = [nu for h in range(1, max_height + 1) for nu in _degrees_of_height(d, h)]
    for sign in (1, -1):
        for vexp in (-2, -1, 0, 1, 2):
            if all(components_equal(d, theta(d, nu, sign, vexp), theta_by_intertwiner(d, nu))
                   for nu in degrees):
                good.append((sign, vexp))
    return good


def _degrees_of_height(d: CartanDatum, h: int) -> list:
    from .cartan import dims_of_height
    return dims_of_height(d.rank, h)
