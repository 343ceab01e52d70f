import pytest

from pmasf.affine_weyl import AffineWeylElement, aw_length, bruhat_leq, omega_element, parse_element, translation
from pmasf.errors import InputError, LengthBound, NotDominant, UnsupportedCharacteristic, UnsupportedType
from pmasf.invariants import FiberQuery, dim_fiber, newton_point, nonempty
from pmasf.laurent import exact
from pmasf.oracle import (
    bruhat_subword_oracle,
    census_nonempty,
    fiber_census,
    iwahori_monoid_census,
    iwahori_monoid_sweep,
    reduced_words,
    surjectivity_check,
)

from _helpers import box, datum, split

GL2 = datum("GL2")
SL2 = datum("SL2")
SL2_UNITS = [exact((1, 1)), exact((1, 1)).inverse()]


def elements(d, bound):
    from pmasf.affine_weyl import elements_up_to_length

    omegas = sorted({omega_element(d, mu) for mu in box(d, -1, 1)}, key=AffineWeylElement.sort_key)
    return elements_up_to_length(d, bound, omegas)


def test_subword_oracle_examples():
    tau = parse_element(GL2, "s1*t^[1,0]")
    assert bruhat_subword_oracle(tau, translation(GL2, (1, 0)))
    assert bruhat_subword_oracle(translation(SL2, (0, 0)), translation(SL2, (1, -1)))
    assert not bruhat_subword_oracle(translation(GL2, (1, 0)), tau)
    with pytest.raises(LengthBound):
        bruhat_subword_oracle(translation(SL2, (0, 0)), translation(SL2, (5, -5)))
    with pytest.raises(InputError):
        bruhat_subword_oracle(tau, translation(GL2, (1, 0)), word=(0, 1, 0))


@pytest.mark.parametrize("name", ["GL2", "SL2", "SL3"])
def test_subword_oracle_matches_bruhat_leq(name):
    d = datum(name)
    elems = elements(d, 3)
    for y in elems:
        for x in elems:
            assert bruhat_subword_oracle(x, y) == bruhat_leq(x, y), (str(x), str(y))


@pytest.mark.parametrize("name", ["SL2", "SL3"])
def test_subword_oracle_independent_of_reduced_word(name):
    d = datum(name)
    for y in elements(d, 3):
        words = reduced_words(y)
        assert words and all(len(w) == aw_length(y) for w in words)
        for x in elements(d, aw_length(y)):
            verdicts = {bruhat_subword_oracle(x, y, word=w) for w in words}
            assert len(verdicts) == 1


def test_census_dimension_zero_example():
    g = split(GL2, (1, 0), ["1 + t", "2"])
    assert dim_fiber(FiberQuery(GL2, (1, 0), gamma=g, level="iwahori")) == 0
    totals = set()
    for n in (2, 3, 4):
        r = fiber_census(g, (1, 0), "iwahori", "open", q=3, jet_level=n)
        assert r.exact and not r.empty and r.dimension_estimate == 0
        totals.add(r.total)
    assert len(totals) == 1
    r = fiber_census(g, (1, 0), "iwahori", "open", q=3, jet_level=4)
    assert r.counts == {"e": 1, "s1": 1} and r.total == 2
    assert r.to_json()["counts"] == {"e": 1, "s1": 1}


def test_census_empty_query():
    g = split(GL2, (1, 0), ["1", "2"])
    r = fiber_census(g, (1, 1), "iwahori", "closed", q=3, jet_level=3)
    assert r.empty and r.total == 0 and r.counts == {} and r.dimension_estimate is None


def test_census_errors():
    g = split(GL2, (1, 0), ["1", "2"])
    with pytest.raises(UnsupportedCharacteristic):
        fiber_census(g, (1, 0), q=2)
    with pytest.raises(UnsupportedCharacteristic):
        fiber_census(g, (1, 0), q=4)
    with pytest.raises(UnsupportedType):
        fiber_census(split(datum("GL3"), (1, 0, 0), ["1", "2", "3"]), (1, 0, 0))
    with pytest.raises(NotDominant):
        fiber_census(g, (0, 1))
    with pytest.raises(InputError):
        fiber_census(g, (1, 0), level="parahoric")
    with pytest.raises(InputError):
        fiber_census(g, (1, 0), jet_level=9)


@pytest.mark.parametrize("gamma,lam", [
    (("GL2", (1, 0), ["1 + t", "2"]), (1, 0)),
    (("SL2", (0, 0), SL2_UNITS), (1, -1)),
    (("GL2", (0, 0), ["1", "2"]), (1, -1)),
])
def test_census_matches_dimension(gamma, lam):
    name, mu, units = gamma
    d = datum(name)
    g = split(d, mu, units)
    for level in ("spherical", "iwahori"):
        q = FiberQuery(d, lam, gamma=g, level=level)
        r = fiber_census(g, lam, level, "closed", q=3, jet_level=4)
        assert (r.total > 0) == nonempty(q)
        assert r.dimension_estimate == dim_fiber(q)


def test_iwahori_census_dominates_spherical():
    g = split(SL2, (0, 0), SL2_UNITS)
    rep = surjectivity_check(g, (1, -1), "closed", q=3, jet_level=4)
    assert rep.iwahori_total >= rep.spherical_total > 0
    assert rep.projection_ok and rep.lift_ok and not rep.failures


@pytest.mark.parametrize("name,mu,units,lam", [
    ("GL2", (1, 0), ["1", "2"], (1, 0)),
    ("GL2", (2, 0), ["1", "2"], (2, 0)),
    ("SL2", (1, -1), SL2_UNITS, (1, -1)),
    ("SL2", (0, 0), SL2_UNITS, (2, -2)),
])
def test_census_agrees_with_nonempty_closed(name, mu, units, lam):
    d = datum(name)
    g = split(d, mu, units)
    for level in ("spherical", "iwahori"):
        expected = nonempty(FiberQuery(d, lam, gamma=g, level=level, variant="closed"))
        assert census_nonempty(g, lam, level, "closed", q=3, jet_level=3) == expected


@pytest.mark.parametrize("name,mu,units,lam", [
    ("GL2", (1, 0), ["1", "2"], (1, 0)),
    ("SL2", (1, -1), ["2", "1/2"], (1, -1)),
    ("SL2", (1, -1), ["2", "1/2"], (2, -2)),
    ("SL2", (0, 0), SL2_UNITS, (1, -1)),
])
def test_iwahori_open_census_needs_newton_equal_lambda(name, mu, units, lam):
    """t^lam with lam regular is straight: every element of I t^lam I is
    conjugate to t^lam * i, whose eigenvalue valuations are lam.  The
    census finds the open Iwahori fiber empty unless nu = lam."""
    d = datum(name)
    g = split(d, mu, units)
    found = census_nonempty(g, lam, "iwahori", "open", q=3, jet_level=3)
    assert found == (newton_point(g) == tuple(lam))
    assert census_nonempty(g, lam, "spherical", "open", q=3, jet_level=3)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_iwahori_monoid_census_matches_bruhat_closure(n):
    reports = iwahori_monoid_census(n, q=3, jet_level=4, samples=8)
    assert reports and all(r.matches for r in reports)
    assert any(r.predicted for r in reports) and any(not r.predicted for r in reports)


def test_iwahori_monoid_open_locus_contains_length_zero_cell():
    """The open Iwahori label also covers the length-0 cell t^(0,1) s1,
    which is not a translation t^(w(1,0))."""
    reports = {r.cell: r for r in iwahori_monoid_census(1, q=3, jet_level=4, samples=8)}
    tau = reports["t^[0,1]*s1"]
    assert tau.observed == ("iwahori_open",) and not tau.predicted_open
    assert reports["t^[1,0]"].open_matches and reports["t^[0,1]"].open_matches


def test_iwahori_monoid_sweep():
    checked, bad = iwahori_monoid_sweep(1, q=3, degree=1)
    assert checked > 0 and bad == []
