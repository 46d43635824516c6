import json

import pytest
from hypothesis import given, strategies as st

from qcanon.cartan import (CartanDatum, datum_from_json, dims_below, dims_of_height, load_datum, named_datum,
                           pairing, parse_dimvector, parse_weights, sym_form, twist_exponent, type_a)
from qcanon.errors import ConfigError


def test_a2_matrix():
    assert type_a(2).matrix == ((2, -1), (-1, 2))


def test_a3_matrix_and_finite_type():
    d = type_a(3)
    assert d.matrix == ((2, -1, 0), (-1, 2, -1), (0, -1, 2))
    assert d.is_finite_type()


def test_kronecker_not_finite():
    d = named_datum("Kronecker")
    assert d.matrix == ((2, -2), (-2, 2))
    assert not d.is_finite_type()


def test_named_lookup_case_insensitive():
    assert named_datum("a1xa1").matrix == ((2, 0), (0, 2))
    assert named_datum("A4").rank == 4
    with pytest.raises(ConfigError):
        named_datum("E8x")


def test_multi_edges_merge():
    d = CartanDatum.from_edges(["a", "b"], [("a", "b", 1), ("b", "a", 1)])
    assert d.matrix == ((2, -2), (-2, 2))


@given(st.lists(st.integers(0, 3), min_size=2, max_size=2), st.lists(st.integers(0, 3), min_size=2, max_size=2))
def test_sym_form_symmetric_and_bilinear(a, b):
    d = type_a(2)
    a, b = tuple(a), tuple(b)
    assert sym_form(d, a, b) == sym_form(d, b, a)
    assert sym_form(d, a, a) % 2 == 0
    doubled = tuple(2 * x for x in a)
    assert sym_form(d, doubled, b) == 2 * sym_form(d, a, b)


def test_pairing():
    d = type_a(2)
    # <omega_1 - alpha_1, alpha_1^vee> = 1 - 2
    assert pairing(d, (1, 0), (1, 0), 0) == -1
    assert pairing(d, (1, 0), (1, 0), 1) == 1


def test_twist_exponent_a1():
    # on A1, (omega, omega) = 1/2 and (alpha, omega) = 1; for weights
    # lam1 = omega - alpha, lam2 = omega the twist is (lam1, lam2) - (omega, omega) = -1
    d = type_a(1)
    assert twist_exponent(d, (1,), (1,), (1,), (0,)) == -1
    assert twist_exponent(d, (1,), (0,), (1,), (0,)) == 0
    assert twist_exponent(d, (1,), (1,), (1,), (1,)) == 0


def test_dims_below_height_order():
    out = list(dims_below((1, 1)))
    assert out == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert sorted(dims_of_height(2, 2)) == [(0, 2), (1, 1), (2, 0)]


def test_parse_weights_and_depth():
    d = type_a(2)
    assert parse_weights("1,0;0,1", d) == [(1, 0), (0, 1)]
    assert parse_dimvector("3,3", d) == (3, 3)


def test_negative_weight_names_coordinate():
    with pytest.raises(ConfigError, match="coordinate 1"):
        parse_weights("-1,0", type_a(2))


def test_wrong_arity():
    with pytest.raises(ConfigError):
        parse_weights("1,0,0", type_a(2))
    with pytest.raises(ConfigError):
        parse_dimvector("1", type_a(2))


def test_load_datum_errors(tmp_path):
    missing = tmp_path / "nope.json"
    with pytest.raises(ConfigError, match="not found"):
        load_datum(missing)
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ConfigError, match="malformed"):
        load_datum(bad)
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"vertices": ["1", "2"], "edges": [["1", "3"]]}))
    with pytest.raises(ConfigError, match="unknown vertex"):
        load_datum(unknown)


def test_datum_json_roundtrip(tmp_path):
    d = type_a(3)
    p = tmp_path / "a3.json"
    p.write_text(json.dumps(d.to_json()))
    assert load_datum(p).matrix == d.matrix


def test_loops_rejected():
    with pytest.raises(ConfigError):
        datum_from_json({"vertices": ["1"], "edges": [["1", "1"]]})
