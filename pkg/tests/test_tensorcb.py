from itertools import product

import pytest

from qcanon import tensorcb as cb
from qcanon.arith import LaurentPoly, as_rf
from qcanon.cartan import type_a
from qcanon.falgebra import enumerate_words
from qcanon.hwmodule import HWModule
from qcanon.tensor import TensorModule, act_tensor, bar_tensor

V = LaurentPoly.v()
BAR_GEN = {"E": "E", "F": "F", "K": "Kinv", "Kinv": "K"}


def tensor(d, *anchors):
    return TensorModule([HWModule(d, a) for a in anchors])


INSTANCES = {
    "V1V1": lambda: tensor(type_a(1), (1,), (1,)),
    "V2V1": lambda: tensor(type_a(1), (2,), (1,)),
    "w1w2": lambda: tensor(type_a(2), (1, 0), (0, 1)),
}


def b(nu, k=0):
    return ((nu,), k) if isinstance(nu, int) else (nu, k)


def test_v1v1_transition():
    db = cb.diamond_basis(INSTANCES["V1V1"]())
    assert cb.transition_matrix(db, (1,)) == [[LaurentPoly(1), V ** -1], [LaurentPoly(), LaurentPoly(1)]]


def test_v1v1_element_is_f_of_top():
    """The canonical element at depth one in the top component is F(v (x) v)."""
    tm = INSTANCES["V1V1"]()
    db = cb.diamond_basis(tm)
    low = db.blocks[(1,)][0]
    assert db.elements[low] == act_tensor("F", 0, tm.top())


def test_three_fold_first_row_is_f_of_top():
    d = type_a(1)
    tm = tensor(d, (1,), (1,), (1,))
    db = cb.nfold_diamond(tm)
    mat = cb.transition_matrix(db, (1,))
    one, zero = LaurentPoly(1), LaurentPoly()
    assert mat == [[one, V ** -1, V ** -2], [zero, one, V ** -1], [zero, zero, one]]
    assert db.elements[db.blocks[(1,)][0]] == act_tensor("F", 0, tm.top())


@pytest.mark.parametrize("name", sorted(INSTANCES))
def test_psi_is_involution(name):
    tm = INSTANCES[name]()
    for key in tm.basis_keys():
        x = tm.pure(key)
        assert cb.psi(cb.psi(x)) == x


@pytest.mark.parametrize("name", sorted(INSTANCES))
def test_psi_is_antilinear_intertwiner(name):
    """u Psi(x) = Psi(bar(u) x)"""
    tm = INSTANCES[name]()
    for key in tm.basis_keys():
        x = tm.pure(key)
        px = cb.psi(x)
        for gen in ("E", "F", "K"):
            for i in range(tm.datum.rank):
                assert act_tensor(gen, i, px) == cb.psi(act_tensor(BAR_GEN[gen], i, x))


def test_psi_antilinear_in_scalars():
    tm = INSTANCES["V2V1"]()
    x = tm.pure(tm.basis_keys()[2])
    assert cb.psi(x.scale(as_rf(V))) == cb.psi(x).scale(as_rf(V ** -1))


def test_psi_bracketings_agree():
    tm = tensor(type_a(1), (1,), (1,), (1,))
    for key in tm.basis_keys():
        x = tm.pure(key)
        assert cb.psi(x) == cb.psi_alt(x)


@pytest.mark.parametrize("name", sorted(INSTANCES))
def test_diamond_basis_properties(name):
    db = cb.diamond_basis(INSTANCES[name]())
    for t in db.order:
        assert cb.psi(db.elements[t]) == db.elements[t]
    rep = cb.transition_report(db)
    assert rep == {"unitriangular": True, "off_diagonal_in_negative_lattice": True, "positive": True}
    assert cb.almost_orthonormal(db)


def test_perturbed_element_not_fixed():
    tm = INSTANCES["V1V1"]()
    db = cb.diamond_basis(tm)
    lo, hi = db.blocks[(1,)]
    wrong = tm.pure(lo) + tm.pure(hi).scale(as_rf(V))
    assert cb.psi(wrong) != wrong


def test_order_relation():
    t0 = (((0,), 0), ((1,), 0))
    t1 = (((1,), 0), ((0,), 0))
    assert cb.order_leq(t0, t1) == "less"
    assert cb.order_leq(t1, t0) == "greater"
    assert cb.order_leq(t0, t0) == "equal"


@pytest.mark.parametrize("name", sorted(INSTANCES))
def test_flag_classes_span(name):
    tm = INSTANCES[name]()
    assert all(r["ok"] for r in cb.span_check(tm))


def test_flag_classes_triangular():
    tm = INSTANCES["w1w2"]()
    d = tm.datum
    for nu1, nu2 in product(((0, 0), (1, 0), (0, 1), (1, 1)), repeat=2):
        for w1 in enumerate_words(d, nu1):
            for w2 in enumerate_words(d, nu2):
                assert cb.flag_triangular(tm, (w1, w2))


def test_flag_class_two_factor_formula():
    """m_{(i),()} = Delta(F_i)(v (x) v) and m_{(),(i)} = F_i v (x) v."""
    tm = INSTANCES["V1V1"]()
    w = ((0, 1),)
    assert cb.flag_class(tm, (w, ())) == act_tensor("F", 0, tm.top())
    assert cb.flag_class(tm, ((), w)) == tm.pure((((1,), 0), ((0,), 0)))
