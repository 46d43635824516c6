"""
The commutor R: M_a (x) M_b -> M_b (x) M_a and the Yang-Baxter equation.

Construction through Theta:

    R(x (x) y) = Theta( v^{-t} y (x) x ),   t = twist_exponent(Lambda_b, nu_y, Lambda_a, nu_x),

with Theta acting on M_b (x) M_a.  The twist is the diagonal operator that
conjugates the barred coproduct into the opposite one, so the composite is
U-linear; the constant part of the twist is fixed by R(v_a (x) v_b) = v_b (x) v_a.
Both properties are re-verified on every build.

Construction without Theta (``commutor_oracle``): M_a (x) M_b is spanned by
F-words applied to the vectors v_a (x) y.  On those, R is forced to be
v^{(Lambda_a, nu_y)} y (x) v_a (Theta has nothing to act with when the right
factor is a highest-weight vector), and U-linearity extends it.  The
extension is checked for consistency over the whole spanning set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from . import linalg
from .arith import LaurentPoly, RationalFunc, as_rf
from .cartan import CartanDatum, dim_le, tr, twist_exponent, type_a
from .errors import ConsistencyError
from .falgebra import enumerate_words
from .hwmodule import HWModule
from .tensor import Key, TensorModule, TensorVector, act_tensor, act_word, operator_matrix, total_depth
from .theta import apply_theta

ZERO = RationalFunc(0)
ONE = RationalFunc(1)
V = LaurentPoly.v()

GENERATORS = ("E", "F", "K", "Kinv")


@dataclass
class CommutorMatrix:
    source: TensorModule
    target: TensorModule
    images: dict = field(default_factory=dict)  # source key -> TensorVector in target

    def apply(self, x: TensorVector) -> TensorVector:
        out = TensorVector(self.target, {})
        for k, c in x.coords.items():
            out = out + self.images[k].scale(c)
        return out

    def matrix(self) -> list:
        return operator_matrix(self.source, self.apply, target=self.target)

    def blocks(self) -> dict:
        """total depth -> square matrix over the block's keys (source order, target order)."""
        out = {}
        src_blocks: dict = {}
        for k in self.source.basis_keys():
            src_blocks.setdefault(total_depth(k), []).append(k)
        tgt_blocks: dict = {}
        for k in self.target.basis_keys():
            tgt_blocks.setdefault(total_depth(k), []).append(k)
        for mu, keys in src_blocks.items():
            tk = tgt_blocks[mu]
            out[mu] = operator_matrix(self.source, self.apply, keys, self.target, tk)
        return out

    def equals(self, other: "CommutorMatrix") -> bool:
        return all(self.images[k] == other.images[k] for k in self.source.basis_keys())


def swapped(tm: TensorModule) -> TensorModule:
    return TensorModule(list(reversed(tm.factors)))


def commutor(ma: HWModule, mb: HWModule, verify: bool = True, twist_sign: int = 1) -> CommutorMatrix:
    """R via Theta; ``twist_sign=-1`` flips the twist (a deliberately wrong variant for negative controls)."""
    d = ma.datum
    src = TensorModule([ma, mb])
    tgt = TensorModule([mb, ma])
    images = {}
    for key in src.basis_keys():
        (nx, kx), (ny, ky) = key
        t = twist_exponent(d, mb.anchor, ny, ma.anchor, nx)
        swapped_vec = TensorVector(tgt, {((ny, ky), (nx, kx)): as_rf(V ** (-twist_sign * t))})
        images[key] = apply_theta(swapped_vec)
    r = CommutorMatrix(src, tgt, images)
    if verify:
        if not normalized(r):
            raise ConsistencyError("commutor does not send the top vector to the swapped top vector")
        bad = linearity_residuals(r)
        if bad:
            raise ConsistencyError(f"commutor is not U-linear for {bad[0]}")
    return r


def normalized(r: CommutorMatrix) -> bool:
    return r.apply(r.source.top()) == r.target.top()


def linearity_residuals(r: CommutorMatrix) -> list:
    """Generators (and basis vectors) on which R u != u R."""
    bad = []
    d = r.source.datum
    for key in r.source.basis_keys():
        x = r.source.pure(key)
        rx = r.apply(x)
        for g in GENERATORS:
            for i in range(d.rank):
                lhs = r.apply(act_tensor(g, i, x))
                rhs = act_tensor(g, i, rx)
                if lhs != rhs:
                    bad.append((g, d.vertices[i], key))
    return bad


def commutor_oracle(ma: HWModule, mb: HWModule) -> CommutorMatrix:
    d = ma.datum
    src = TensorModule([ma, mb])
    tgt = TensorModule([mb, ma])
    top = (d.zero(), 0)
    keys = src.basis_keys()
    idx = {k: n for n, k in enumerate(keys)}
    blocks: dict = {}
    for k in keys:
        blocks.setdefault(total_depth(k), []).append(k)
    pairs = []
    for y in mb.basis_index():
        ny = y[0]
        gen_src = src.pure((top, y))
        pair_exp = sum(a * n for a, n in zip(ma.anchor, ny))
        gen_tgt = TensorVector(tgt, {(y, top): as_rf(V ** pair_exp)})
        for mu in blocks:
            if not dim_le(ny, mu):
                continue
            deg = tuple(a - b for a, b in zip(mu, ny))
            for w in enumerate_words(d, deg):
                s = act_word(gen_src, w, "F")
                if s.is_zero():
                    continue
                pairs.append((s, act_word(gen_tgt, w, "F")))
    # choose a spanning subset, then check every other pair against it
    basis = linalg.EchelonBasis(len(keys))
    chosen = []
    for s, t in pairs:
        if basis.add(s.flat(keys)):
            chosen.append((s, t))
    if basis.rank != len(keys):
        raise ConsistencyError(f"F-words on v_a (x) y span only {basis.rank} of {len(keys)} dimensions")
    images: dict = {}
    for key in keys:
        e = [ONE if k == key else ZERO for k in keys]
        comb = basis.express(e)
        out = TensorVector(tgt, {})
        for c, (_, t) in zip(comb, chosen):
            if c:
                out = out + t.scale(c)
        images[key] = out
    r = CommutorMatrix(src, tgt, images)
    for s, t in pairs:
        if r.apply(s) != t:
            raise ConsistencyError("spanning data is inconsistent with a single U-linear map")
    return r


# --- Yang-Baxter ---------------------------------------------------------------------------

def _apply_adjacent(r: CommutorMatrix, x: TensorVector, p: int, target: TensorModule) -> TensorVector:
    out: dict = {}
    for key, c in x.coords.items():
        img = r.images[(key[p], key[p + 1])]
        for k2, e in img.coords.items():
            nk = key[:p] + k2 + key[p + 2:]
            out[nk] = out.get(nk, ZERO) + c * e
    return TensorVector(target, {k: c for k, c in out.items() if c})


def _path(mods: list, steps: list, cache: dict) -> callable:
    """Compose adjacent commutors; steps are positions, labels are tracked along the way."""
    labels = [0, 1, 2]
    plan = []
    for p in steps:
        a, b = labels[p], labels[p + 1]
        key = (a, b)
        if key not in cache:
            cache[key] = commutor(mods[a], mods[b])
        labels = labels[:p] + [b, a] + labels[p + 2:]
        plan.append((cache[key], p, TensorModule([mods[l] for l in labels])))

    def run(x: TensorVector) -> TensorVector:
        for r, p, tgt in plan:
            x = _apply_adjacent(r, x, p, tgt)
        return x

    return run


def _max_degree(entries) -> int:
    best = 0
    for c in entries:
        if not c:
            continue
        num = c.num
        den = c.den
        best = max(best, max(abs(num.min_exp()), abs(num.max_exp())) + max(abs(den.min_exp()), abs(den.max_exp())))
    return best


def ybe_check(datum: CartanDatum, anchors, depth=None) -> dict:
    mods = [HWModule(datum, a, depth) for a in anchors]
    src = TensorModule(mods)
    cache: dict = {}
    path1 = _path(mods, [0, 1, 0], cache)  # 123 -> 213 -> 231 -> 321
    path2 = _path(mods, [1, 0, 1], cache)  # 123 -> 132 -> 312 -> 321
    residuals = []
    blocks: dict = {}
    for key in src.basis_keys():
        x = src.pure(key)
        diff = path1(x) - path2(x)
        mu = total_depth(key)
        blocks.setdefault(mu, [0, 0])
        blocks[mu][0] += 1
        if not diff.is_zero():
            blocks[mu][1] += 1
            residuals.extend(diff.coords.values())
    return {
        "dim": src.dim(),
        "equal": not residuals,
        "max_residual_degree": _max_degree(residuals),
        "blocks": [{"block": list(mu), "vectors": n, "mismatches": bad}
                   for mu, (n, bad) in sorted(blocks.items(), key=lambda kv: (tr(kv[0]), kv[0]))],
    }


# --- Schur-Weyl ---------------------------------------------------------------------------

def minimal_polynomial(m: list) -> list:
    """Coefficients c_0..c_k (monic, c_k = 1) of the minimal polynomial of a square matrix."""
    n = len(m)
    powers = [linalg.identity(n)]
    basis = linalg.EchelonBasis(n * n)
    flat = lambda a: [x for row in a for x in row]
    basis.add(flat(powers[0]))
    while True:
        nxt = linalg.matmul(powers[-1], m)
        f = flat(nxt)
        if basis.contains(f):
            comb = basis.express(f)
            return [-c for c in comb] + [ONE]
        basis.add(f)
        powers.append(nxt)


def monomial_roots(poly: list, span: int = 4) -> list:
    """Roots of the form +-v^k (|k| <= span), with multiplicity one each."""
    roots = []
    for k in range(-span, span + 1):
        for s in (1, -1):
            r = as_rf(LaurentPoly.monomial(k, s))
            val = ZERO
            for c in reversed(poly):
                val = val * r + c
            if not val:
                roots.append(str(r))
    return roots


def schur_weyl_demo(m: int, n: int) -> dict:
    d = type_a(m)
    anchor = tuple(1 if i == 0 else 0 for i in range(m))
    mod = HWModule(d, anchor)
    tm = TensorModule([mod] * n)
    r = commutor(mod, mod)
    keys = tm.basis_keys()

    def s(p):
        return lambda x: _apply_adjacent(r, x, p, tm)

    mats = [operator_matrix(tm, s(p)) for p in range(n - 1)]
    braid = []
    for p in range(n - 2):
        a, b = mats[p], mats[p + 1]
        lhs = linalg.matmul(linalg.matmul(a, b), a)
        rhs = linalg.matmul(linalg.matmul(b, a), b)
        braid.append({"i": p + 1, "holds": linalg.mat_equal(lhs, rhs)})
    pair = TensorModule([mod, mod])
    s_pair = operator_matrix(pair, r.apply)
    poly = minimal_polynomial(s_pair)
    return {
        "type": f"A{m}",
        "factors": n,
        "dim": len(keys),
        "braid": braid,
        "braid_holds": all(b["holds"] for b in braid),
        "minimal_polynomial": [str(c) for c in poly],
        "minimal_polynomial_degree": len(poly) - 1,
        "eigenvalues": monomial_roots(poly),
    }
