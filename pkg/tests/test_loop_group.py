from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pmasf.affine_weyl import AffineWeylElement, admissible_set, adm_maximal, omega_element
from pmasf.errors import InputError, InsufficientPrecision, NotDominant
from pmasf.laurent import GF, QQ, exact, parse_series
from pmasf.loop_group import (
    LoopMatrix,
    determinantal_divisors,
    iwahori_cell,
    iwahori_membership,
    monomial_matrix,
    smith_cartan,
    spherical_membership,
    type_a_datum,
)
from pmasf.root_data import dominant_conjugate

from _helpers import box, datum

TYPE_A = ("GL2", "SL2", "GL3", "SL3")


def elementary(d, i, j, x, field):
    n = d.weight_lattice_rank
    zero, one = exact((), field=field), exact((1,), field=field)
    rows = [[one if r == c else zero for c in range(n)] for r in range(n)]
    rows[i][j] = x
    return LoopMatrix(d, rows, check=False)


def torus(d, consts, field):
    n = d.weight_lattice_rank
    zero = exact((), field=field)
    rows = [[zero] * n for _ in range(n)]
    for k, c in enumerate(consts):
        rows[k][k] = exact((c,), field=field)
    return LoopMatrix(d, rows, check=False)


@st.composite
def o_elements(draw, field, min_val=0):
    cs = draw(st.lists(st.integers(-2, 2), max_size=3))
    return exact(cs, min_val, field)


@st.composite
def iwahori_elements(draw, d, field, parahoric=False):
    """Products of root subgroup elements of I (or of G(O)) and a constant torus part."""
    n = d.weight_lattice_rank
    g = LoopMatrix.identity(d, field)
    for _ in range(draw(st.integers(1, 4))):
        i, j = draw(st.sampled_from([(i, j) for i in range(n) for j in range(n) if i != j]))
        low = 0 if (i < j or parahoric) else 1
        g = g * elementary(d, i, j, draw(o_elements(field, low)), field)
    consts = [draw(st.sampled_from((1, 2, -1, 3))) for _ in range(n)]
    if d.constraints:
        consts[-1] = Fraction(1)
        for c in consts[:-1]:
            consts[-1] /= c
        if field.characteristic:
            consts = [field(c.numerator) * field.inv(field(c.denominator)) if isinstance(c, Fraction) else c
                      for c in consts]
    return g * torus(d, consts, field)


def all_small_elements(d, lo=-1, hi=1):
    return [AffineWeylElement(mu, w, d) for mu in box(d, lo, hi) for w in d.weyl_elements()]


def test_smith_examples():
    assert smith_cartan(LoopMatrix.from_strings("GL2", [["t", "0"], ["0", "1"]])) == (1, 0)
    assert smith_cartan(LoopMatrix.from_strings("GL2", [["t", "0"], ["0", "t"]])) == (1, 1)
    for n in (1, 2, 3):
        # the det-t^n matrix [[1/(1 - t^n), 1], [1 - t^n, 1 - t^n]]
        a = parse_series("1 - t^%d" % n)
        g = LoopMatrix(type_a_datum(2), [[a.inverse(), exact((1,))], [a, a]])
        assert smith_cartan(g) == (n, 0)
        assert determinantal_divisors(g) == (n, 0)


def test_cell_examples():
    d = type_a_datum(2)
    g = LoopMatrix.from_strings(d, [["0", "1"], ["t", "0"]])
    x = iwahori_cell(g)
    assert str(x) == "t^[0,1]*s1" and x.length() == 0
    assert str(iwahori_cell(LoopMatrix.identity(d))) == "e"
    for name in TYPE_A:
        dd = datum(name)
        for x in all_small_elements(dd):
            assert iwahori_cell(monomial_matrix(x)) == x


def test_spherical_membership_examples():
    d = type_a_datum(2)
    e = LoopMatrix.identity(d)
    gamma = LoopMatrix.from_strings(d, [["t", "0"], ["0", "1"]])
    assert spherical_membership(e, gamma, (1, 0), "open")
    assert not spherical_membership(e, LoopMatrix.from_strings(d, [["1", "0"], ["0", "2"]]), (1, 0), "closed")
    with pytest.raises(NotDominant):
        spherical_membership(e, gamma, (0, 1))


def test_sl2_membership_by_hand():
    """g = [[1, t^-1], [0, 1]], gamma = diag(1+t, (1+t)^-1): g^-1 gamma g is
    [[a, t^-1 (a - b)], [0, b]] with a - b of valuation 1, so it lies in K."""
    d = type_a_datum(2, True)
    a = parse_series("1 + t")
    gamma = LoopMatrix(d, [[a, exact(())], [exact(()), a.inverse()]], check=False)
    g = LoopMatrix.from_strings(d, [["1", "t^{-1}"], ["0", "1"]])
    assert smith_cartan(gamma.conjugate_by(g)) == (0, 0)
    assert spherical_membership(g, gamma, (1, -1), "closed")
    assert not spherical_membership(g, gamma, (1, -1), "open")


def test_iwahori_membership_examples():
    d = type_a_datum(2)
    e = LoopMatrix.identity(d)
    gamma = LoopMatrix.from_strings(d, [["t", "0"], ["0", "2"]])
    assert iwahori_membership(e, gamma, (1, 0), "open")
    assert iwahori_cell(gamma) == AffineWeylElement((1, 0), d.identity(), d)
    assert not iwahori_membership(e, gamma, (2, -1), "open")
    assert iwahori_membership(e, gamma, (1, 0), "closed")


def test_matrix_validation():
    with pytest.raises(InputError):
        LoopMatrix.from_strings("GL2", [["t", "t"], ["t", "t"]])
    with pytest.raises(InputError):
        LoopMatrix.from_strings("SL2", [["t", "0"], ["0", "1"]])
    with pytest.raises(InputError):
        LoopMatrix.from_strings("GL2", [["1", "0", "0"], ["0", "1"]])
    with pytest.raises(InputError):
        iwahori_cell(LoopMatrix.identity("GL2"), method="guess")


def test_insufficient_precision():
    g = LoopMatrix.from_strings("GL2", [["O(t^2)", "1"], ["1", "O(t^3)"]])
    assert smith_cartan(g) == (0, 0)
    g = LoopMatrix.from_strings("GL2", [["O(t^2)", "O(t^2)"], ["O(t^2)", "1"]], check=False)
    with pytest.raises(InsufficientPrecision):
        smith_cartan(g)


@pytest.mark.parametrize("name", TYPE_A)
@given(data=st.data())
def test_cell_of_double_coset_element(name, data):
    """i1 * x * i2 lies in I x I for random Iwahori elements; both routes agree."""
    d = datum(name)
    x = data.draw(st.sampled_from(all_small_elements(d)))
    field = data.draw(st.sampled_from((QQ, GF(5), GF(7))))
    i1 = data.draw(iwahori_elements(d, field))
    i2 = data.draw(iwahori_elements(d, field))
    g = i1 * monomial_matrix(x, field) * i2
    assert iwahori_cell(g, method="lattice") == x
    assert iwahori_cell(g, method="pivot") == x


@pytest.mark.parametrize("name", TYPE_A)
@given(data=st.data())
def test_smith_of_double_coset_element(name, data):
    d = datum(name)
    mu = data.draw(st.sampled_from(box(d, -2, 2)))
    k1 = data.draw(iwahori_elements(d, QQ, parahoric=True))
    k2 = data.draw(iwahori_elements(d, QQ, parahoric=True))
    g = k1 * monomial_matrix(AffineWeylElement(mu, d.identity(), d)) * k2
    expected = dominant_conjugate(d, mu)[0]
    assert smith_cartan(g) == expected
    assert determinantal_divisors(g) == expected


@pytest.mark.parametrize("name", TYPE_A)
def test_cell_is_compatible_with_cartan_cell(name):
    d = datum(name)
    for x in all_small_elements(d):
        g = monomial_matrix(x)
        assert smith_cartan(g) == dominant_conjugate(d, x.translation)[0]


@pytest.mark.parametrize("name", ["GL2", "SL2"])
def test_membership_matches_adm(name):
    d = datum(name)
    e = LoopMatrix.identity(d)
    lam = (1, 0) if name == "GL2" else (1, -1)
    adm = set(admissible_set(d, lam))
    top = set(adm_maximal(d, lam))
    for x in all_small_elements(d, -2, 2):
        g = monomial_matrix(x)
        assert iwahori_membership(e, g, lam, "closed") == (x in adm)
        assert iwahori_membership(e, g, lam, "open") == (x in top)
        assert iwahori_membership(e, g, lam, "closed", method="pivot") == (x in adm)


def test_omega_generator_is_its_own_cell():
    d = datum("GL3")
    tau = omega_element(d, (1, 0, 0))
    assert tau.length() == 0
    assert iwahori_cell(monomial_matrix(tau)) == tau
