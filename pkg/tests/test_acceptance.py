"""The ten acceptance criteria.  Each test prints one PASS/FAIL line."""

import random
from fractions import Fraction

from pmasf.affine_weyl import (
    AffineWeylElement,
    admissible_set,
    aw_length,
    aw_reduced_word,
    bruhat_leq,
    double_coset_support,
    elements_up_to_length,
    omega_element,
    translation,
)
from pmasf.errors import InputError, MathError
from pmasf.invariants import (
    FiberQuery,
    SplitElement,
    dim_fiber,
    discriminant_valuation,
    mv_dimension,
    newton_point,
    nonempty,
)
from pmasf.laurent import GF, exact, parse_series
from pmasf.loop_group import LoopMatrix, smith_cartan, type_a_datum
from pmasf.oracle import _reduce_gamma, _subword_products, census_nonempty, fiber_census, iwahori_monoid_census, surjectivity_check
from pmasf.root_data import dominance_leq, dominant_conjugate, is_dominant
from pmasf.vinberg import VinbergSL2Point, sl2_chi_plus, sl2_ext_discriminant, sl2_gamma_lambda, sl2_monoid_membership

from _helpers import PRESET_NAMES, box, datum, dominant_box


JET = 4


def report(n, ok, detail=""):
    print("CRITERION %d: %s%s" % (n, "PASS" if ok else "FAIL", " (%s)" % detail if detail else ""), flush=True)
    assert ok, detail


def random_gl2_sl2_queries(count, seed):
    """Random (gamma, lam, level, variant, q) queries; about two thirds
    have lam compatible with kappa(gamma)."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        name = rng.choice(["GL2", "SL2"])
        d = datum(name)
        if name == "GL2":
            mu = (rng.randint(-2, 2), rng.randint(-2, 2))
            units = [exact((rng.choice([1, 2]), rng.randint(-2, 2))) for _ in range(2)]
            low = rng.randint(-2, 2)
            lam = (low + rng.randint(0, 2), low)
            s, a = sum(mu), rng.randint(0, 2)
            if rng.random() < 0.7 and (s + a) % 2 == 0:
                lam = ((s + a) // 2, (s - a) // 2)
        else:
            m = rng.randint(-2, 2)
            mu = (m, -m)
            u = exact((1, rng.choice([1, 2, -1]), rng.randint(-2, 2)))
            units = [u, u.inverse()]
            a = rng.randint(0, 3)
            lam = (a, -a)
        q = rng.choice([3, 5])
        try:
            g = SplitElement(d, mu, units)
            # the census needs gamma regular after reduction mod q
            _reduce_gamma(g, GF(q), JET)
        except (MathError, InputError):
            continue
        out.append((g, lam, rng.choice(["spherical", "iwahori"]), rng.choice(["open", "closed"]), q))
    return out


# 1 ----------------------------------------------------------------------------

def test_criterion_1_gl2_admissible_set():
    d = datum("GL2")
    got = {str(x) for x in admissible_set(d, (1, 0))}
    # s t^(1,0) = t^(0,1) s
    expected = {"t^[1,0]", "t^[0,1]", str(AffineWeylElement((0, 0), d.weyl_elements()[1], d) * translation(d, (1, 0)))}
    report(1, got == expected, "got %s" % sorted(got))


# 2 ----------------------------------------------------------------------------

def test_criterion_2_closure_identity():
    bad = []
    checked = 0
    for name in PRESET_NAMES:
        d = datum(name)
        for lam in dominant_box(d, -2, 2):
            parts = {dominant_conjugate(d, x.translation)[0] for x in admissible_set(d, lam)}
            below = {mu for mu in box(d, -2, 2) if is_dominant(d, mu) and dominance_leq(d, mu, lam)}
            checked += 1
            if parts != below or parts != set(double_coset_support(d, lam)):
                bad.append((name, lam))
    report(2, not bad, "%d weights checked, mismatches %s" % (checked, bad))


# 3 ----------------------------------------------------------------------------

def test_criterion_3_bruhat_oracle_equivalence():
    bad = []
    pairs = 0
    for name in ("GL2", "SL2", "SL3"):
        d = datum(name)
        omegas = sorted({omega_element(d, mu) for mu in box(d, -1, 1)}, key=AffineWeylElement.sort_key)
        elems = elements_up_to_length(d, 6, omegas)
        for y in elems:
            omega, word = aw_reduced_word(y)
            below = _subword_products(omega, word)
            for x in elems:
                pairs += 1
                if (x in below) != bruhat_leq(x, y):
                    bad.append((str(x), str(y)))
    report(3, not bad, "%d pairs, mismatches %s" % (pairs, bad[:5]))


# 4 ----------------------------------------------------------------------------

def test_criterion_4_length_law():
    bad = []
    for name in PRESET_NAMES:
        d = datum(name)
        for lam in dominant_box(d, 0, 3):
            if aw_length(translation(d, lam)) != d.pair(d.two_rho, lam):
                bad.append((name, lam))
    report(4, not bad, "mismatches %s" % bad)


# 5 ----------------------------------------------------------------------------

def random_split(d, rng):
    while True:
        mu = [rng.randint(-2, 2) for _ in range(d.weight_lattice_rank)]
        consts = rng.sample((2, 3, 5, 7, 11), d.weight_lattice_rank)
        units = [exact((c, rng.randint(-2, 2))) for c in consts]
        if d.constraints:
            mu[-1] = -sum(mu[:-1])
            prod = exact((1,))
            for u in units[:-1]:
                prod = prod * u
            units[-1] = prod.inverse()
        try:
            return SplitElement(d, tuple(mu), units)
        except MathError:
            continue


def test_criterion_5_maximization_identity():
    bad = []
    rng = random.Random(5)
    for name in PRESET_NAMES:
        d = datum(name)
        for lam in dominant_box(d, 0, 3):
            stab = d.stabilizer_simple(lam)
            best = max(d.min_coset_rep(w, stab).length() for w in d.weyl_elements())
            # dim G/P_lam counts the positive roots not orthogonal to lam
            flag_dim = sum(1 for a in d.positive_roots if d.pair(a, lam) != 0)
            if best != flag_dim:
                bad.append(("L0", name, lam))
        done = 0
        while done < 20:
            g = random_split(d, rng)
            nu = dominant_conjugate(d, g.mu)[0]
            lam = rng.choice([mu for mu in dominant_box(d, -3, 4) if dominance_leq(d, nu, mu)] or [nu])
            q = FiberQuery(d, lam, gamma=g)
            if not nonempty(q):
                continue
            done += 1
            half = Fraction(discriminant_valuation(g), 2)
            expr = max(mv_dimension(d, lam, d.zero(), w) for w in d.weyl_elements()) + half
            if expr != d.rho_pair(lam) + half or expr != dim_fiber(q):
                bad.append(("mv", name, g.mu, lam))
    report(5, not bad, "mismatches %s" % bad[:5])


# 6 ----------------------------------------------------------------------------

QUERIES = random_gl2_sl2_queries(60, seed=1)


def test_criterion_6_nonemptiness_equivalence():
    bad = []
    for g, lam, level, variant, q in QUERIES:
        predicted = nonempty(FiberQuery(g.datum, lam, gamma=g, level=level, variant=variant))
        found = census_nonempty(g, lam, level, variant, q=q, jet_level=JET)
        if predicted != found:
            bad.append("%s mu=%s lam=%s %s/%s nu=%s: formula %s, census %s" % (
                g.datum.name, g.mu, lam, level, variant, newton_point(g), predicted, found))
    report(6, not bad, "%d queries, %d disagreements: %s" % (len(QUERIES), len(bad), "; ".join(bad)))


# 7 ----------------------------------------------------------------------------

# strata up to this size are enumerated in full
FULL = 50000


def test_criterion_7_dimension_zero_census():
    d = datum("GL2")
    g = SplitElement(d, (1, 0), [parse_series("1 + t"), parse_series("2 - t")])
    notes = []
    ok = dim_fiber(FiberQuery(d, (1, 0), gamma=g, level="iwahori")) == 0
    ok &= dim_fiber(FiberQuery(d, (1, 0), gamma=g, level="spherical")) == 0
    for q in (3, 5):
        totals = []
        for n in (2, 3, 4):
            r = fiber_census(g, (1, 0), "iwahori", "closed", q=q, jet_level=n, cap=FULL)
            ok &= r.exact and r.total > 0 and r.dimension_estimate == 0
            totals.append(r.total)
        ok &= len(set(totals)) == 1
        sph = fiber_census(g, (1, 0), "spherical", "closed", q=q, jet_level=4, cap=FULL)
        ok &= sph.exact and sph.total > 0 and sph.dimension_estimate == 0
        notes.append("q=%d iwahori %s spherical %d" % (q, totals, sph.total))
    report(7, ok, "; ".join(notes))


# 8 ----------------------------------------------------------------------------

def test_criterion_8_extended_discriminant():
    d = datum("SL2")
    rng = random.Random(8)
    bad = []
    done = 0
    while done < 60:
        m = rng.randint(-3, 3)
        u = exact((rng.choice([2, 3, -2, 1]), rng.randint(-3, 3), rng.randint(-3, 3)))
        try:
            g = SplitElement(d, (m, -m), [u, u.inverse()])
        except MathError:
            continue
        a = rng.randint(abs(m), abs(m) + 3)
        lam = (a, -a)
        det, tr = sl2_chi_plus(VinbergSL2Point(sl2_gamma_lambda(g, lam)))
        done += 1
        if sl2_ext_discriminant(det, tr) != d.pair(d.two_rho, lam) + discriminant_valuation(g):
            bad.append((m, str(u), lam))
    report(8, not bad, "%d elements, mismatches %s" % (done, bad))


# 9 ----------------------------------------------------------------------------

def test_criterion_9_vinberg_membership():
    gl2 = type_a_datum(2)
    notes = []
    ok = True
    for n in (1, 2, 3):
        a = parse_series("1 - t^%d" % n)
        p = VinbergSL2Point(LoopMatrix(gl2, [[a.inverse(), exact((1,))], [a, a]], check=False))
        label = sl2_monoid_membership(p, n).label
        cartan = smith_cartan(p.A)
        ok &= label == "open_locus" and cartan == (n, 0)
        notes.append("n=%d %s %s" % (n, label, cartan))
    for n in (0, 1, 2):
        reports = iwahori_monoid_census(n, q=3, jet_level=4, samples=20)
        ok &= all(r.matches for r in reports)
        notes.append("n=%d %d cells" % (n, len(reports)))
    report(9, ok, "; ".join(notes))


# 10 ---------------------------------------------------------------------------

def test_criterion_10_surjectivity():
    seen = set()
    failures = []
    runs = 0
    for g, lam, _, variant, q in QUERIES:
        key = (g.datum.name, g.mu, tuple(str(u) for u in g.units), lam, variant)
        if key in seen:
            continue
        seen.add(key)
        rep = surjectivity_check(g, lam, variant, q=q, jet_level=JET)
        runs += 1
        if not (rep.projection_ok and rep.lift_ok):
            failures.append("%s mu=%s lam=%s %s: projection %s, lift %s" % (
                g.datum.name, g.mu, lam, variant, rep.projection_ok, rep.lift_ok))
    report(10, not failures, "%d censuses, %d failures: %s" % (runs, len(failures), "; ".join(failures)))

