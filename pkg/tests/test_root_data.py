import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pmasf.errors import InputError, InvalidCartan
from pmasf.root_data import (
    PRESETS,
    RootDatum,
    build_root_datum,
    dominance_leq,
    dominant_conjugate,
    is_dominant,
    pi1_class,
    weyl_group,
)

from _helpers import PRESET_NAMES, box, datum


def test_gl2_roots_and_rho():
    d = datum("GL2")
    assert set(d.roots) == {(1, -1), (-1, 1)}
    assert d.two_rho == (1, -1)


@pytest.mark.parametrize("name,n_roots,order", [("SL3", 6, 6), ("Sp4", 8, 8), ("GL3", 6, 6), ("PGL2", 2, 2)])
def test_root_and_weyl_counts(name, n_roots, order):
    d = datum(name)
    assert len(d.roots) == n_roots
    assert d.weyl_order() == order


def test_weyl_group_lengths():
    assert [w.length() for w in weyl_group(datum("GL2"))] == [0, 1]
    assert sorted(w.length() for w in weyl_group(datum("SL3"))) == [0, 1, 1, 2, 2, 3]
    s = weyl_group(datum("SL2"))[1]
    assert (s * s).is_identity()


def test_dominant_conjugate_examples():
    gl2 = datum("GL2")
    mu, w = dominant_conjugate(gl2, (0, 1))
    assert mu == (1, 0) and w.length() == 1
    mu, w = dominant_conjugate(gl2, (1, 0))
    assert mu == (1, 0) and w.is_identity()
    sl3 = datum("SL3")
    mu, w = dominant_conjugate(sl3, (-1, -1, 2))
    assert mu == (2, -1, -1) and w.length() == 2
    assert w.act((-1, -1, 2)) == (2, -1, -1)


def test_dominance_examples():
    d = datum("GL2")
    assert dominance_leq(d, (0, 1), (1, 0))
    assert dominance_leq(d, (1, 0), (1, 0))
    assert not dominance_leq(d, (0, 0), (1, 0))


def test_pi1_examples():
    assert pi1_class(datum("GL2"), (1, 0)) == (1,)
    assert pi1_class(datum("SL2"), (1, -1)) == ()
    assert pi1_class(datum("SL3"), (0, 1, -1)) == pi1_class(datum("SL3"), (0, 0, 0))


def test_json_round_trip():
    for name in PRESET_NAMES:
        d = datum(name)
        doc = json.loads(json.dumps(d.to_json()))
        assert {"rank", "simple_roots", "simple_coroots", "pairing"} <= set(doc)
        e = RootDatum.from_json(doc)
        assert set(e.roots) == set(d.roots)
        assert e.cartan == d.cartan


def test_invalid_cartan_rejected():
    with pytest.raises(InvalidCartan):
        build_root_datum({"simple_roots": [(1, -1), (0, 1)], "simple_coroots": [(1, -1), (0, 3)]})
    with pytest.raises(InputError):
        build_root_datum("E9")


def test_sl_coweights_must_satisfy_constraint():
    with pytest.raises(InputError):
        datum("SL2").check_coweight((1, 0))


def test_custom_datum_matches_preset():
    d = build_root_datum(dict(PRESETS["Sp4"]))
    assert set(d.roots) == set(datum("Sp4").roots)


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_weyl_group_invariants(name):
    d = datum(name)
    ws = d.weyl_elements()
    w0 = d.longest_element()
    assert w0.length() == len(d.positive_roots)
    assert sum(1 for w in ws if w.length() == w0.length()) == 1
    mats = {w.matrix for w in ws}
    assert len(mats) == len(ws)
    for w in ws:
        assert (w * w.inverse()).is_identity()
        # W permutes the roots
        assert {w.act_weight(a) for a in d.roots} == set(d.roots)


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_pairing_invariant_under_weyl(name):
    d = datum(name)
    for w in d.weyl_elements():
        for a in d.roots:
            for mu in box(d, -1, 1)[:9]:
                assert d.pair(w.act_weight(a), w.act(mu)) == d.pair(a, mu)


@given(st.sampled_from(PRESET_NAMES), st.data())
def test_dominant_conjugate_properties(name, data):
    d = datum(name)
    mu = data.draw(st.sampled_from(box(d, -3, 3)))
    lam, w = dominant_conjugate(d, mu)
    assert is_dominant(d, lam)
    assert w.act(mu) == lam
    # dominant conjugate is the maximum of the orbit in dominance order
    for v in d.weyl_elements():
        assert dominance_leq(d, v.act(mu), lam)
    assert pi1_class(d, mu) == pi1_class(d, lam)


@given(st.sampled_from(PRESET_NAMES), st.data())
def test_dominance_is_a_partial_order(name, data):
    d = datum(name)
    pts = box(d, -2, 2)
    a, b, c = (data.draw(st.sampled_from(pts)) for _ in range(3))
    assert dominance_leq(d, a, a)
    if dominance_leq(d, a, b) and dominance_leq(d, b, a):
        assert a == b
    if dominance_leq(d, a, b) and dominance_leq(d, b, c):
        assert dominance_leq(d, a, c)
    if dominance_leq(d, a, b):
        assert pi1_class(d, a) == pi1_class(d, b)
