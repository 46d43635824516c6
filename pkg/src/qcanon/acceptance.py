"""
The acceptance gate: every criterion as a function returning ``(passed, details)``.

``run_all`` produces the report consumed by ``qcanon selftest``.  Details hold
only exact, reproducible data (no timings) so the serialized report is
byte-identical across runs.
"""

from __future__ import annotations

import json
import random
from itertools import product

from . import falgebra, hwmodule, linalg, rmatrix, tensorcb, theta
from .arith import LaurentPoly, RationalFunc, as_rf, qfact
from .cartan import CartanDatum, a1xa1, dim_add, dim_sub, dims_of_height, is_nonneg, sym_form, type_a
from .falgebra import enumerate_words
from .freudenthal import freudenthal_dims
from .hwmodule import HWModule, ModuleVector, act_e, act_f, act_k, shapovalov
from .tensor import TensorModule, TensorVector, act_tensor, bar_tensor, tensor_form

V = LaurentPoly.v()
ZERO = RationalFunc(0)
ONE = RationalFunc(1)

A1, A2, AA = type_a(1), type_a(2), a1xa1()

RELATION_MODULES = [
    ("A1", A1, (1,)), ("A1", A1, (2,)), ("A1", A1, (3,)),
    ("A2", A2, (1, 0)), ("A2", A2, (0, 1)), ("A2", A2, (1, 1)),
    ("A1xA1", AA, (1, 1)), ("A1xA1", AA, (2, 1)),
]

PSI_MODULES = [
    ("A1 V(1)xV(1)", A1, [(1,), (1,)]),
    ("A1 V(2)xV(1)", A1, [(2,), (1,)]),
    ("A2 L(w1)xL(w2)", A2, [(1, 0), (0, 1)]),
]

_module_cache: dict = {}


def module(d: CartanDatum, anchor) -> HWModule:
    key = (d, tuple(anchor))
    if key not in _module_cache:
        _module_cache[key] = HWModule(d, anchor)
    return _module_cache[key]


def tensor_module(d: CartanDatum, anchors) -> TensorModule:
    return TensorModule([module(d, a) for a in anchors])


def reset_caches():
    """Forget every memoized object so that a rerun recomputes from scratch."""
    _module_cache.clear()
    falgebra.half_algebra.cache_clear()
    theta.theta.cache_clear()
    theta.theta_inverse.cache_clear()
    theta._oracle_cache.clear()


# --- operator helpers on a single module -----------------------------------------------

def _op_matrix(m: HWModule, f) -> list:
    keys = m.basis_index()
    idx = {k: n for n, k in enumerate(keys)}
    out = linalg.zeros(len(keys), len(keys))
    for c, bk in enumerate(keys):
        y = f(m.pivot_vector(*bk))
        for nu, cs in y.coords.items():
            for k, e in enumerate(cs):
                if e:
                    out[idx[(nu, k)]][c] = e
    return out


def module_relations(m: HWModule) -> dict:
    """Check the defining relations and integrability of U on a whole module."""
    d = m.datum
    n = d.rank
    keys = m.basis_index()
    size = len(keys)
    mm = linalg.matmul
    E = [_op_matrix(m, lambda x, i=i: act_e(i, 1, x)) for i in range(n)]
    F = [_op_matrix(m, lambda x, i=i: act_f(i, 1, x)) for i in range(n)]
    K = [_op_matrix(m, lambda x, i=i: act_k(i, 1, x)) for i in range(n)]
    Ki = [_op_matrix(m, lambda x, i=i: act_k(i, -1, x)) for i in range(n)]
    eye = linalg.identity(size)
    eq = linalg.mat_equal
    sub = lambda a, b: [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]
    sc = lambda c, a: [[c * x for x in r] for r in a]
    checks = {"K": True, "KE": True, "KF": True, "EF": True, "divided_powers": True,
              "serre_E": True, "serre_F": True, "integrable": True}
    for i in range(n):
        checks["K"] &= eq(mm(K[i], Ki[i]), eye)
        for j in range(n):
            checks["K"] &= eq(mm(K[i], K[j]), mm(K[j], K[i]))
            q = as_rf(V ** d.a(i, j))
            checks["KE"] &= eq(mm(mm(K[i], E[j]), Ki[i]), sc(q, E[j]))
            checks["KF"] &= eq(mm(mm(K[i], F[j]), Ki[i]), sc(q.inverse(), F[j]))
            comm = sub(mm(E[i], F[j]), mm(F[j], E[i]))
            if i == j:
                want = sc(as_rf(V - V ** -1).inverse(), sub(K[i], Ki[i]))
            else:
                want = linalg.zeros(size, size)
            checks["EF"] &= eq(comm, want)
        top = max(m.anchor[i] + 2, 4)
        fpow, epow = eye, eye
        for a in range(1, top + 1):
            fpow, epow = mm(F[i], fpow), mm(E[i], epow)
            c = as_rf(qfact(a))
            fd = _op_matrix(m, lambda x, i=i, a=a: act_f(i, a, x))
            ed = _op_matrix(m, lambda x, i=i, a=a: act_e(i, a, x))
            checks["divided_powers"] &= eq(sc(c, fd), fpow) and eq(sc(c, ed), epow)
        for j in range(n):
            if i == j:
                continue
            b = 1 - d.a(i, j)
            se = linalg.zeros(size, size)
            sf = linalg.zeros(size, size)
            for s in range(b + 1):
                sign = ONE if s % 2 == 0 else -ONE
                fl = _op_matrix(m, lambda x, i=i, s=s: act_f(i, s, x))
                fr = _op_matrix(m, lambda x, i=i, s=s: act_f(i, b - s, x))
                el = _op_matrix(m, lambda x, i=i, s=s: act_e(i, s, x))
                er = _op_matrix(m, lambda x, i=i, s=s: act_e(i, b - s, x))
                sf = [[x + sign * y for x, y in zip(r1, r2)] for r1, r2 in zip(sf, mm(mm(fl, F[j]), fr))]
                se = [[x + sign * y for x, y in zip(r1, r2)] for r1, r2 in zip(se, mm(mm(el, E[j]), er))]
            checks["serre_F"] &= eq(sf, linalg.zeros(size, size))
            checks["serre_E"] &= eq(se, linalg.zeros(size, size))
    # integrability: F_i^(m) dies beyond <lambda, i> + nu_i, E_i^(m) beyond nu_i
    for nu, k in keys:
        x = m.pivot_vector(nu, k)
        for i in range(n):
            bound = m.pairing(nu, i) + nu[i]
            checks["integrable"] &= act_f(i, bound + 1, x).is_zero()
            checks["integrable"] &= act_e(i, nu[i] + 1, x).is_zero()
    return checks


# --- the criteria ---------------------------------------------------------------------

def criterion_1():
    details = []
    ok = True
    for name, d, lam in RELATION_MODULES:
        m = module(d, lam)
        checks = module_relations(m)
        good = all(checks.values())
        ok &= good
        details.append({"type": name, "highest_weight": list(lam), "dim": m.total_dim(),
                        "max_height": max(sum(nu) for nu in m.dims()), "checks": checks, "passed": good})
    return ok, details


def criterion_2():
    details = []
    ok = True
    for name, d, lam in RELATION_MODULES:
        m = module(d, lam)
        fr = freudenthal_dims(d, lam)
        dims = m.dims()
        ranks = all(linalg.rank(m.word_gram(nu)) == dims[nu] for nu in dims)
        invertible = all(linalg.rank(m.gram(nu)) == dims[nu] for nu in dims)
        good = dims == fr and ranks and invertible
        ok &= good
        details.append({"type": name, "highest_weight": list(lam),
                        "dims": {",".join(map(str, nu)): n for nu, n in sorted(dims.items())},
                        "freudenthal_agrees": dims == fr, "word_gram_rank_agrees": ranks,
                        "pivot_gram_invertible": invertible})
    adj = module(A2, (1, 1)).dim((1, 1))
    ok &= adj == 2
    details.append({"A2 adjoint multiplicity at a1+a2": adj})
    return ok, details


def criterion_3(max_height: int = 4):
    details = []
    ok = True
    for name, d in (("A1", A1), ("A2", A2), ("A1xA1", AA)):
        agree = inverse_ok = bar_ok = True
        count = 0
        for h in range(0, max_height + 1):
            for nu in dims_of_height(d.rank, h):
                count += 1
                t = theta.theta(d, nu)
                agree &= theta.components_equal(d, t, theta.theta_by_intertwiner(d, nu))
                inverse_ok &= theta.check_inverse(d, nu)
                bar_ok &= theta.components_equal(d, theta.theta_inverse(d, nu), t.bar())
        zero = theta.theta(d, d.zero()).coeffs == ((ONE,),)
        resolved = theta.resolve_convention(d, 2)
        frozen = [(theta.CONVENTION["theta_sign"], theta.CONVENTION["theta_v_exponent"])]
        good = agree and inverse_ok and bar_ok and zero and resolved == frozen
        ok &= good
        details.append({"type": name, "degrees": count, "dual_basis_equals_intertwiner": agree,
                        "theta_times_inverse_is_one": inverse_ok, "inverse_equals_bar": bar_ok,
                        "theta_zero_is_one": zero, "resolved_convention": [list(r) for r in resolved]})
    return ok, details


def _psi_checks(tm: TensorModule) -> dict:
    d = tm.datum
    sq = True
    lin = True
    for key in tm.basis_keys():
        x = tm.pure(key)
        sq &= tensorcb.psi(tensorcb.psi(x)) == x
        px = tensorcb.psi(x)
        for i in range(d.rank):
            for g, gb in (("E", "E"), ("F", "F"), ("K", "Kinv"), ("Kinv", "K")):
                lin &= act_tensor(g, i, px) == tensorcb.psi(act_tensor(gb, i, x))
    # antilinearity on a vector with non-symmetric coefficients
    keys = tm.basis_keys()
    x = TensorVector(tm, {k: as_rf(V ** (n + 1) + 2) for n, k in enumerate(keys)})
    anti = tensorcb.psi(tensorcb.psi(x)) == x
    return {"psi_squared_is_identity": sq and anti, "u_psi_equals_psi_ubar": lin}


def criterion_4():
    details = []
    ok = True
    for name, d, lams in PSI_MODULES:
        tm = tensor_module(d, lams)
        c = _psi_checks(tm)
        good = all(c.values())
        ok &= good
        details.append({"instance": name, "dim": tm.dim(), **c})
    return ok, details


def criterion_5():
    details = []
    ok = True
    for name, d, lams in PSI_MODULES:
        tm = tensor_module(d, lams)
        db = tensorcb.diamond_basis(tm)
        rep = tensorcb.transition_report(db)
        fixed = all(tensorcb.psi(x) == x for x in db.elements.values())
        good = fixed and all(rep.values())
        entry = {"instance": name, "psi_fixed": fixed, **rep}
        if name.startswith("A1 V(1)xV(1)"):
            mid = tensorcb.transition_matrix(db, (1,))
            entry["middle_block"] = [[str(x) for x in r] for r in mid]
            good &= mid[0][1] == LaurentPoly({-1: 1}) and mid[1][0] == LaurentPoly()
        ok &= good
        details.append(entry)
    return ok, details


def _random_module_vector(m: HWModule, nu, rng: random.Random) -> ModuleVector:
    coords = [as_rf(LaurentPoly({rng.randint(-2, 2): rng.randint(-3, 3), rng.randint(-2, 2): rng.randint(-3, 3)}))
              for _ in range(m.dim(nu))]
    return m.vector(nu, coords)


def _random_tensor(tm: TensorModule, keys, rng: random.Random) -> TensorVector:
    return TensorVector(tm, {k: as_rf(LaurentPoly({rng.randint(-2, 2): rng.randint(-3, 3)})) for k in keys})._clean()


def _contravariance_module(m: HWModule, pairs: int, rng: random.Random) -> bool:
    d = m.datum
    spots = [(nu, i) for nu in m.dims() for i in range(d.rank) if m.dim(dim_add(nu, d.simple(i)))]
    if not spots:
        return True
    for _ in range(pairs):
        nu, i = rng.choice(spots)
        x = _random_module_vector(m, nu, rng)
        y = _random_module_vector(m, dim_add(nu, d.simple(i)), rng)
        lhs = shapovalov(act_f(i, 1, x), y)
        rhs = shapovalov(x, act_k(i, -1, act_e(i, 1, y)).scale(V))
        if lhs != rhs:
            return False
    return True


def _contravariance_tensor(tm: TensorModule, pairs: int, rng: random.Random) -> bool:
    d = tm.datum
    blocks = tm.blocks()
    spots = [(mu, i) for mu in blocks for i in range(d.rank) if dim_add(mu, d.simple(i)) in blocks]
    for _ in range(pairs):
        mu, i = rng.choice(spots)
        x = _random_tensor(tm, blocks[mu], rng)
        y = _random_tensor(tm, blocks[dim_add(mu, d.simple(i))], rng)
        lhs = tensor_form(act_tensor("F", i, x), y)
        rhs = tensor_form(x, act_tensor("Kinv", i, act_tensor("E", i, y)).scale(V))
        if lhs != rhs:
            return False
    return True


def criterion_6(pairs: int = 100, seed: int = 20240531):
    rng = random.Random(seed)
    details = []
    ok = True
    for name, d, lam in RELATION_MODULES:
        good = _contravariance_module(module(d, lam), pairs, rng)
        ok &= good
        details.append({"module": f"{name} {list(lam)}", "contravariant": good})
    for name, d, lams in PSI_MODULES:
        tm = tensor_module(d, lams)
        contra = _contravariance_tensor(tm, pairs, rng)
        ortho = tensorcb.almost_orthonormal(tensorcb.diamond_basis(tm), order=10)
        ok &= contra and ortho
        details.append({"tensor": name, "contravariant": contra, "almost_orthonormal": ortho})
    return ok, details


def criterion_7():
    details = []
    ok = True
    for name, d, lams in PSI_MODULES:
        tm = tensor_module(d, lams)
        rep = tensorcb.span_check(tm)
        spans = all(r["ok"] for r in rep)
        tri = True
        for mu in tm.blocks():
            for parts in tensorcb._splits(mu, tm.n):
                for words in product(*(enumerate_words(d, nu) for nu in parts)):
                    tri &= tensorcb.flag_triangular(tm, words)
        ok &= spans and tri
        details.append({"instance": name, "blocks": rep, "leading_terms_unitriangular": tri})
    return ok, details


def criterion_8():
    details = []
    ok = True
    for name, d, a, b in (("A1 w1 x w1", A1, (1,), (1,)), ("A2 w1 x w2", A2, (1, 0), (0, 1))):
        ma, mb = module(d, a), module(d, b)
        r = rmatrix.commutor(ma, mb, verify=False)
        o = rmatrix.commutor_oracle(ma, mb)
        agree = r.equals(o)
        lin = not rmatrix.linearity_residuals(r) and not rmatrix.linearity_residuals(o)
        norm = rmatrix.normalized(r) and rmatrix.normalized(o)
        good = agree and lin and norm
        ok &= good
        details.append({"instance": name, "constructions_agree": agree, "u_linear": lin, "normalized": norm})
    return ok, details


def criterion_9():
    details = []
    ok = True
    for name, d, lams in (("A1 w1^3", A1, [(1,)] * 3), ("A2 w1^3", A2, [(1, 0)] * 3)):
        rep = rmatrix.ybe_check(d, lams)
        ok &= rep["equal"]
        details.append({"instance": name, "dim": rep["dim"], "equal": rep["equal"],
                        "max_residual_degree": rep["max_residual_degree"]})
    sw = rmatrix.schur_weyl_demo(2, 3)
    ok &= sw["braid_holds"]
    details.append({"schur_weyl": sw})
    return ok, details


CRITERIA = [
    (1, "relations suite", criterion_1),
    (2, "multiplicity oracle", criterion_2),
    (3, "theta consistency", criterion_3),
    (4, "psi suite", criterion_4),
    (5, "canonical basis", criterion_5),
    (6, "form suite", criterion_6),
    (7, "standard-basis span", criterion_7),
    (8, "R-matrix", criterion_8),
    (9, "Yang-Baxter", criterion_9),
]


def run_all(only=None) -> dict:
    results = []
    for num, name, fn in CRITERIA:
        if only and num not in only:
            continue
        passed, details = fn()
        results.append({"id": num, "name": name, "passed": bool(passed), "details": details})
    return {"conventions": theta.CONVENTION, "criteria": results,
            "passed": all(r["passed"] for r in results)}


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"


def determinism_check() -> tuple[bool, dict]:
    """Criterion 10 in-process: recompute the report from empty caches and compare bytes."""
    reset_caches()
    first = dumps(run_all())
    reset_caches()
    second = dumps(run_all())
    return first == second, {"bytes": len(first)}
