"""Brute-force oracles: subword enumeration for the Bruhat order and
finite-field point censuses of fibers.

Census model.  For split gamma the lattice t^{X_*(T)} centralizes gamma and
acts freely on every fiber, so the census counts points of the quotient.
By the Iwasawa decomposition its points are

    Fl:  U_alpha(y) * w,  w in W,  y in F / (O if w = e else tO)
    Gr:  U_alpha(y),      y in F / O

with y a polynomial in t^-1 (GL2 and SL2 have a single positive root).
The slice bounds the pole order of y by L = <2rho, lam> + 2|d| + slack.
gamma's unit part is truncated mod t^N to a polynomial (the jet model).

    >>> from pmasf.root_data import build_root_datum
    >>> from pmasf.invariants import SplitElement
    >>> from pmasf.laurent import parse_series as P
    >>> d = build_root_datum("GL2")
    >>> g = SplitElement(d, (1, 0), [P("1"), P("1")])
    >>> r = fiber_census(g, (1, 0), "iwahori", "open", q=3, jet_level=3)
    >>> r.total, r.dimension_estimate, r.exact
    (2, 0, True)
"""

import logging
import math
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .affine_weyl import (
    AffineWeylElement,
    admissible_set,
    adm_maximal,
    aw_length,
    aw_reduced_word,
    simple_reflection,
)
from .errors import (
    BudgetExceeded,
    InputError,
    LengthBound,
    NotDominant,
    UnsupportedCharacteristic,
    UnsupportedType,
)
from .invariants import SplitElement, discriminant_valuation
from .laurent import GF, LaurentSeries, check_field_for_datum, exact, working_precision
from .loop_group import LoopMatrix, iwahori_cell, smith_cartan, type_a_datum
from .root_data import dominance_leq, is_dominant
from .vinberg import VinbergSL2Point, sl2_monoid_membership

__all__ = [
    "bruhat_subword_oracle",
    "reduced_words",
    "CensusReport",
    "fiber_census",
    "SurjectivityReport",
    "surjectivity_check",
    "MonoidCellReport",
    "iwahori_monoid_census",
    "iwahori_monoid_sweep",
]

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10 ** 7


# -- Bruhat order by subwords ------------------------------------------------

def reduced_words(y: AffineWeylElement) -> List[Tuple[int, ...]]:
    """All reduced words of y (as index tuples, y = omega * s_w1 * s_w2 ...)."""
    from .affine_weyl import affine_simple_reflections

    out = set()

    def rec(cur, suffix):
        ell = aw_length(cur)
        if ell == 0:
            out.add(tuple(reversed(suffix)))
            return
        for i, s in affine_simple_reflections(y.datum):
            z = cur * s
            if aw_length(z) < ell:
                rec(z, suffix + [i])

    rec(y, [])
    return sorted(out)


def bruhat_subword_oracle(x: AffineWeylElement, y: AffineWeylElement, bound: int = 8,
                          word: Optional[Sequence[int]] = None) -> bool:
    """x <= y iff x is the product of omega and a subword of a reduced word
    of y.  Enumerates all 2^l(y) subwords literally."""
    ell = aw_length(y)
    if ell > bound:
        raise LengthBound("l(y) = %d exceeds the oracle bound %d" % (ell, bound))
    omega, default = aw_reduced_word(y)
    word = tuple(default if word is None else word)
    if len(word) != ell:
        raise InputError("word %r is not reduced for %s" % (word, y))
    return x in _subword_products(omega, word)


def _subword_products(omega: AffineWeylElement, word: Tuple[int, ...]) -> set:
    gens = [simple_reflection(omega.datum, i) for i in word]
    out = set()
    for mask in range(1 << len(word)):
        cur = omega
        for k, s in enumerate(gens):
            if mask >> k & 1:
                cur = cur * s
        out.add(cur)
    return out


# -- fiber census ------------------------------------------------------------

@dataclass(frozen=True)
class CensusReport:
    q: int
    jet_level: int
    level: str
    variant: str
    slice_bound: int
    counts: Dict[str, int]
    total: int
    dimension_estimate: Optional[int]
    exact: bool
    empty: bool
    enumerated: int
    boundary: int

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "jet_level": self.jet_level,
            "level": self.level,
            "variant": self.variant,
            "slice_bound": self.slice_bound,
            "counts": dict(sorted(self.counts.items())),
            "total": self.total,
            "dimension_estimate": self.dimension_estimate,
            "exact": self.exact,
            "empty": self.empty,
            "enumerated": self.enumerated,
            "boundary": self.boundary,
        }


@dataclass
class _Setup:
    datum: object
    field: object
    gamma: LoopMatrix
    lam: Tuple[int, ...]
    weyl: List[LoopMatrix]
    slice_bound: int
    d: int


def _check_q(q: int, datum) -> object:
    if q == 2:
        f = GF(2)
        check_field_for_datum(f, datum)
    if q not in (3, 5, 7):
        raise UnsupportedCharacteristic("census primes are 3, 5 and 7, not %r" % (q,))
    f = GF(q)
    check_field_for_datum(f, datum)
    return f


def _reduce_gamma(gamma: SplitElement, f, jet_level: int) -> SplitElement:
    """gamma over F_q with its units truncated mod t^N to polynomials."""
    d = gamma.datum
    units = []
    for u in gamma.units:
        u = u.change_field(f).truncate(jet_level)
        units.append(LaurentSeries(u.coeffs, u.lowest, None, f))
    if d.constraints:
        units[1] = units[0].inverse()
    return SplitElement(d, gamma.mu, units)


def _setup(gamma, lam, q, jet_level, slack) -> _Setup:
    d = gamma.datum if isinstance(gamma, SplitElement) else gamma.datum
    if d.name not in ("GL2", "SL2"):
        raise UnsupportedType("censuses exist for GL2 and SL2 only, not %s" % d.name)
    f = _check_q(q, d)
    if not 1 <= jet_level <= 6:
        raise InputError("jet level must be between 1 and 6")
    if isinstance(gamma, LoopMatrix):
        gamma = _split_from_matrix(gamma)
    lam = d.check_coweight(lam)
    if not is_dominant(d, lam):
        raise NotDominant("%r is not dominant" % (lam,))
    g = _reduce_gamma(gamma, f, jet_level)
    dval = discriminant_valuation(g)
    zero = exact((), field=f)
    a, b = g.entries()
    gm = LoopMatrix(d, [[a, zero], [zero, b]], check=False)
    one = exact((1,), field=f)
    if d.constraints:
        s = LoopMatrix(d, [[zero, -one], [one, zero]], check=False)
    else:
        s = LoopMatrix(d, [[zero, one], [one, zero]], check=False)
    ident = LoopMatrix(d, [[one, zero], [zero, one]], check=False)
    bound = d.pair(d.two_rho, lam) + 2 * abs(dval) + slack
    return _Setup(d, f, gm, lam, [ident, s], bound, dval)


def _split_from_matrix(m: LoopMatrix) -> SplitElement:
    if not (m[0, 1].is_exact_zero() and m[1, 0].is_exact_zero()):
        raise InputError("census needs a diagonal (split) gamma")
    entries = [m[0, 0], m[1, 1]]
    mu = tuple(x.valuation() for x in entries)
    return SplitElement(m.datum, mu, [x.shift(-v) for x, v in zip(entries, mu)])


def _root_group(s: _Setup, y: LaurentSeries, sign: int = 1) -> LoopMatrix:
    f = s.field
    one = exact((1,), field=f)
    zero = exact((), field=f)
    return LoopMatrix(s.datum, [[one, y if sign > 0 else -y], [zero, one]], check=False)


def _strata(s: _Setup, level: str):
    """(w-index, low, high): y ranges over sum_{k=low}^{high} c_k t^k."""
    L = s.slice_bound
    out = [(0, -L, -1)]
    if level == "iwahori":
        out.append((1, -L, 0))
    return out


def _stratum_points(f, q: int, k: int, high: int):
    """All y with val(y) = k and degree <= high."""
    for lead in range(1, q):
        for rest in iproduct(range(q), repeat=high - k):
            yield LaurentSeries((lead,) + rest, k, None, f)


def _sample_point(f, q: int, k: int, high: int, rng) -> LaurentSeries:
    cs = [rng.randrange(1, q)] + [rng.randrange(q) for _ in range(high - k)]
    return LaurentSeries(cs, k, None, f)


def _slice_size(q: int, L: int, level: str) -> int:
    return q ** L + (q ** (L + 1) if level == "iwahori" else 0)


def _conjugated(s: _Setup, y: LaurentSeries, w: int) -> LoopMatrix:
    """g^-1 gamma g for g = U_alpha(y) * w, without inverting numerically."""
    wm = s.weyl[w]
    winv = wm.transpose() if w == 0 else _weyl_inverse(s, w)
    return winv * _root_group(s, y, -1) * s.gamma * _root_group(s, y) * wm


def _weyl_inverse(s: _Setup, w: int) -> LoopMatrix:
    wm = s.weyl[w]
    if s.datum.constraints:
        return LoopMatrix(s.datum, [[wm[0, 0], -wm[0, 1]], [-wm[1, 0], wm[1, 1]]], check=False)
    return wm.transpose()


def _point_matrix(s: _Setup, y: LaurentSeries, w: int) -> LoopMatrix:
    return _root_group(s, y) * s.weyl[w]


def _is_solution(s: _Setup, h: LoopMatrix, level: str, variant: str, adm, maximal) -> bool:
    if level == "spherical":
        mu = smith_cartan(h)
        if variant == "open":
            return mu == s.lam
        return dominance_leq(s.datum, mu, s.lam)
    cell = iwahori_cell(h, "pivot")
    return cell in (maximal if variant == "open" else adm)


def _cell_label(s: _Setup, g: LoopMatrix, level: str) -> str:
    if level == "spherical":
        return "[%s]" % ",".join(str(x) for x in smith_cartan(g))
    return str(iwahori_cell(g, "pivot"))


@dataclass
class _RunResult:
    total: int
    solutions: List[Tuple[LaurentSeries, int]]
    exhaustive: bool
    enumerated: int
    boundary: int
    size: int


def _run(s: _Setup, q: int, level: str, variant: str, budget: int, cap: int, samples: int,
         seed: int = 0) -> _RunResult:
    """Census by valuation strata of y.

    A stratum with at most ``cap`` points is enumerated; a larger one is
    sampled and its verdict must be constant on the sample, otherwise it is
    enumerated after all.
    """
    import random

    rng = random.Random(seed)
    adm = set(admissible_set(s.datum, s.lam))
    maximal = set(adm_maximal(s.datum, s.lam))
    f = s.field
    total = 0
    enumerated = 0
    boundary = 0
    exhaustive = True
    sols: List[Tuple[LaurentSeries, int]] = []

    def test(y, w):
        nonlocal enumerated
        enumerated += 1
        if enumerated > budget:
            raise BudgetExceeded("census exceeded its budget of %d points" % budget)
        return _is_solution(s, _conjugated(s, y, w), level, variant, adm, maximal)

    for w, low, high in _strata(s, level):
        zero = exact((), field=f)
        if test(zero, w):
            total += 1
            sols.append((zero, w))
        for k in range(low, high + 1):
            size = (q - 1) * q ** (high - k)
            found = []
            if size > cap:
                pts = [_sample_point(f, q, k, high, rng) for _ in range(samples)]
                verdicts = [test(y, w) for y in pts]
                if all(verdicts) or not any(verdicts):
                    exhaustive = False
                    if verdicts[0]:
                        total += size
                        found = pts
                        if k == low:
                            boundary += size
                    sols.extend((y, w) for y in found)
                    continue
            for y in _stratum_points(f, q, k, high):
                if test(y, w):
                    found.append(y)
            total += len(found)
            if k == low:
                boundary += len(found)
            sols.extend((y, w) for y in found)
    return _RunResult(total, sols, exhaustive, enumerated, boundary,
                      _slice_size(q, s.slice_bound, level))


def _pole_order(y: LaurentSeries) -> int:
    return max(0, -y.lowest) if y.coeffs else 0


def fiber_census(gamma, lam: Sequence[int], level: str = "iwahori", variant: str = "closed",
                 q: int = 3, jet_level: int = 4, slack: int = 2, budget: int = DEFAULT_BUDGET,
                 companion_q: Optional[int] = None, cap: int = 2000, samples: int = 40) -> CensusReport:
    """Count points of the fiber over F_q in the slice.

    The dimension estimate compares totals with a second prime
    (``companion_q``, default the other of 3 and 5).  ``exact`` is set when
    every stratum was enumerated in full.
    """
    if level not in ("spherical", "iwahori") or variant not in ("open", "closed"):
        raise InputError("level must be spherical|iwahori and variant open|closed")
    s = _setup(gamma, lam, q, jet_level, slack)
    with working_precision(max(16, 4 * s.slice_bound + 8)):
        run = _run(s, q, level, variant, budget, cap, samples)
        counts = _count_by_cell(s, run, level, q)
        est = None
        if run.total:
            cq = companion_q if companion_q is not None else (5 if q == 3 else 3)
            if cq != q:
                s2 = _setup(gamma, lam, cq, jet_level, slack)
                other = _run(s2, cq, level, variant, budget, cap, samples)
                if other.total:
                    ratio = math.log(other.total / run.total) / math.log(cq / q)
                    est = max(0, round(ratio))
    log.debug("census q=%d N=%d: %d solutions, %d points tested", q, jet_level, run.total, run.enumerated)
    return CensusReport(q, jet_level, level, variant, s.slice_bound, counts, run.total, est,
                        run.exhaustive, run.total == 0, run.enumerated, run.boundary)


def _count_by_cell(s: _Setup, run: _RunResult, level: str, q: int) -> Dict[str, int]:
    """Solutions per cell of g; a sampled stratum lies in one cell, the cell
    of its sampled points (all of them share the valuation of y)."""
    by_stratum: Dict[tuple, List[str]] = {}
    for y, w in run.solutions:
        by_stratum.setdefault((w, y.lowest if y.coeffs else None), []).append(
            _cell_label(s, _point_matrix(s, y, w), level))
    counts: Dict[str, int] = {}
    for (w, k), keys in by_stratum.items():
        size = 1 if k is None else (q - 1) * q ** ((-1 if w == 0 else 0) - k)
        if len(keys) < size:
            if len(set(keys)) != 1:
                raise AssertionError("sampled stratum meets several cells: %s" % sorted(set(keys)))
            counts[keys[0]] = counts.get(keys[0], 0) + size
        else:
            for key in keys:
                counts[key] = counts.get(key, 0) + 1
    return dict(sorted(counts.items()))


@dataclass(frozen=True)
class SurjectivityReport:
    spherical_total: int
    iwahori_total: int
    projection_ok: bool
    lift_ok: bool
    tested: int
    failures: Tuple[str, ...] = field(default=())


def surjectivity_check(gamma, lam: Sequence[int], variant: str = "closed", q: int = 3,
                       jet_level: int = 4, slack: int = 2, budget: int = DEFAULT_BUDGET,
                       cap: int = 2000, samples: int = 40) -> SurjectivityReport:
    """Fl -> Gr on tested solutions: every iwahori solution projects to a
    spherical one and every spherical solution gK has a lift g k I, k in K/I."""
    s = _setup(gamma, lam, q, jet_level, slack)
    failures = []
    with working_precision(max(16, 4 * s.slice_bound + 8)):
        iw = _run(s, q, "iwahori", variant, budget, cap, samples)
        sp = _run(s, q, "spherical", variant, budget, cap, samples)
        adm = set(admissible_set(s.datum, s.lam))
        maximal = set(adm_maximal(s.datum, s.lam))
        proj_ok = True
        for y, w in iw.solutions:
            # U(y) w K = U(y) K
            if not _is_solution(s, _conjugated(s, y, 0), "spherical", variant, adm, maximal):
                proj_ok = False
                failures.append("projection of (%s, %d)" % (y, w))
        lift_ok = True
        f = s.field
        for y, _ in sp.solutions:
            lifts = [(y, 0)] + [(y + exact((c,), field=f), 1) for c in range(q)]
            if not any(_is_solution(s, _conjugated(s, yy, ww), "iwahori", variant, adm, maximal)
                       for yy, ww in lifts):
                lift_ok = False
                failures.append("no lift of %s" % y)
    return SurjectivityReport(sp.total, iw.total, proj_ok, lift_ok,
                              len(iw.solutions) + len(sp.solutions), tuple(failures))


def census_nonempty(gamma, lam, level="spherical", variant="closed", q=3, jet_level=4, slack=2) -> bool:
    return fiber_census(gamma, lam, level, variant, q, jet_level, slack, companion_q=q).total > 0


# -- Iwahori submonoid (SL2 Vinberg monoid, unit group GL2) -------------------

@dataclass(frozen=True)
class MonoidCellReport:
    n: int
    cell: str
    predicted: bool
    predicted_open: bool
    observed: Tuple[str, ...]
    samples: int

    @property
    def matches(self) -> bool:
        iw = {"iwahori_closure", "iwahori_open"}
        return all((lab in iw) == self.predicted for lab in self.observed)

    @property
    def open_matches(self) -> bool:
        return all((lab == "iwahori_open") == self.predicted_open for lab in self.observed)


def _random_iwahori(f, q: int, jet_level: int, rng) -> LoopMatrix:
    d = type_a_datum(2)
    rows = []
    for i in range(2):
        row = []
        for j in range(2):
            cs = [rng.randrange(q) for _ in range(jet_level)]
            if i == j:
                cs[0] = rng.randrange(1, q)
            if i > j:
                cs[0] = 0
            row.append(LaurentSeries(cs, 0, None, f))
        rows.append(row)
    return LoopMatrix(d, rows, check=False)


def _monomial(w: AffineWeylElement, f) -> LoopMatrix:
    from .loop_group import monomial_matrix

    return monomial_matrix(w, f)


def _cells_with_det_valuation(n: int):
    """GL2 cells t^mu sigma with mu_1 + mu_2 = n and coordinates in [-1, n+1]."""
    d = type_a_datum(2)
    out = []
    for m1 in range(-1, n + 2):
        mu = (m1, n - m1)
        for w in d.weyl_elements():
            out.append(AffineWeylElement(mu, w, d))
    return sorted(out, key=AffineWeylElement.sort_key)


def iwahori_monoid_census(n: int, q: int = 3, jet_level: int = 4, samples: int = 20,
                          seed: int = 0) -> List[MonoidCellReport]:
    """Cell-by-cell: classify i1 * w * i2 for random Iwahori jets i1, i2 and
    compare with w in Adm((n, 0)) (closure) and w in {t^(n,0), t^(0,n)} (open)."""
    import random

    if n < 0:
        raise InputError("n must be non-negative")
    f = GF(q)
    rng = random.Random(seed)
    d = type_a_datum(2)
    adm = set(admissible_set(d, (n, 0)))
    maximal = set(adm_maximal(d, (n, 0)))
    out = []
    for w in _cells_with_det_valuation(n):
        labels = set()
        wm = _monomial(w, f)
        for _ in range(samples):
            pt = _random_iwahori(f, q, jet_level, rng) * wm * _random_iwahori(f, q, jet_level, rng)
            if iwahori_cell(pt, "pivot") != w:
                raise AssertionError("sampled point left the cell %s" % w)
            labels.add(sl2_monoid_membership(VinbergSL2Point(pt), n).label)
        out.append(MonoidCellReport(n, str(w), w in adm, w in maximal, tuple(sorted(labels)), samples))
    return out


def iwahori_monoid_sweep(n: int, q: int = 3, degree: int = 1):
    """Every 2x2 polynomial matrix over F_q of degree <= ``degree`` with
    det of valuation n: (iwahori label) == (cell in Adm((n,0))).

    Returns (checked, mismatches) where mismatches lists (matrix, label, cell).
    """
    f = GF(q)
    d = type_a_datum(2)
    adm = set(admissible_set(d, (n, 0)))
    polys = [LaurentSeries(cs, 0, None, f) for cs in iproduct(range(q), repeat=degree + 1)]
    checked = 0
    bad = []
    for a, b, c, e in iproduct(polys, repeat=4):
        m = LoopMatrix(d, [[a, b], [c, e]], check=False)
        det = m.det()
        if not det.coeffs or det.lowest != n:
            continue
        checked += 1
        label = sl2_monoid_membership(VinbergSL2Point(m), n).label
        cell = iwahori_cell(m, "pivot")
        if (label in ("iwahori_closure", "iwahori_open")) != (cell in adm):
            bad.append((m, label, cell))
    return checked, bad
