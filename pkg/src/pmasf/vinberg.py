"""Explicit Vinberg monoid models for SL2 and SL3.

For SL2 the monoid is End(k^2) with abelianization det and unit group GL2.
For SL3 a point is (x, y, A1, A2) subject to

    A1^T A2 = A1 A2^T = xy I,   L2(A1) = x A2,   L2(A2) = y A1,

where L2 is the second exterior power, i.e. the cofactor matrix.

    >>> from pmasf.laurent import parse_series as P
    >>> a = VinbergSL2Point.from_strings([["1", "0"], ["0", "t"]])
    >>> [str(x) for x in sl2_chi_plus(a)]
    ['t', '1 + t']
    >>> sl2_ext_discriminant(P("1"), P("2 + t"))
    1
    >>> sl2_monoid_membership(a, 1).label
    'iwahori_open'
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from . import _lattice as lat
from .errors import (
    CharTwo,
    InputError,
    InsufficientPrecision,
    KottwitzMismatch,
    NotDominant,
    NotRegular,
    NotUnimodular,
)
from .invariants import SplitElement
from .laurent import QQ, LaurentSeries, exact, parse_series
from .loop_group import LoopMatrix, type_a_datum
from .root_data import RootDatum, build_root_datum

__all__ = [
    "VinbergSL2Point",
    "VinbergSL3Point",
    "MonoidMembership",
    "AdjointTorusElement",
    "TPlusElement",
    "sl2_chi_plus",
    "sl2_steinberg_section",
    "sl2_ext_discriminant",
    "sl2_monoid_membership",
    "sl2_gamma_lambda",
    "sl3_vinberg_check",
    "sl3_embed",
    "cofactor",
    "adjoint_coweight",
    "gamma_lambda_lift",
]

_GL2 = type_a_datum(2)
_GL3 = type_a_datum(3)


def _matrix(datum, rows) -> LoopMatrix:
    return LoopMatrix(datum, rows, check=False)


@dataclass(frozen=True)
class VinbergSL2Point:
    """A 2x2 matrix over F; the abelianization coordinate is det A."""

    A: LoopMatrix

    @classmethod
    def from_strings(cls, rows, field=QQ) -> "VinbergSL2Point":
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise InputError("an SL2 Vinberg point is a 2x2 matrix")
        return cls(_matrix(_GL2, [[parse_series(str(x), field) for x in r] for r in rows]))


@dataclass(frozen=True)
class VinbergSL3Point:
    x: LaurentSeries
    y: LaurentSeries
    A1: LoopMatrix
    A2: LoopMatrix

    def to_strings(self):
        return {"x": str(self.x), "y": str(self.y), "A1": self.A1.to_strings(), "A2": self.A2.to_strings()}


@dataclass(frozen=True)
class MonoidMembership:
    label: str
    integral: bool
    det_valuation: Optional[int]
    reduction_nonzero: bool
    reduction_upper: bool

    # The label is the most refined locus; a zero reduction is upper
    # triangular, so "closure" alone never wins over "iwahori_closure".
    @property
    def in_closure(self) -> bool:
        return self.label != "outside"

    @property
    def in_open_locus(self) -> bool:
        return self.label in ("open_locus", "iwahori_open")

    @property
    def in_iwahori_closure(self) -> bool:
        return self.label in ("iwahori_closure", "iwahori_open")

    @property
    def in_iwahori_open(self) -> bool:
        return self.label == "iwahori_open"


# -- SL2 ---------------------------------------------------------------------

def sl2_chi_plus(p: VinbergSL2Point) -> Tuple[LaurentSeries, LaurentSeries]:
    """(det A, trace A)."""
    a = p.A
    return a.det(), a[0, 0] + a[1, 1]


def sl2_steinberg_section(a: LaurentSeries, c: LaurentSeries) -> VinbergSL2Point:
    """The companion matrix [[0, -1], [a, c]]."""
    f = a.field
    return VinbergSL2Point(_matrix(_GL2, [[exact((), field=f), exact((-1,), field=f)], [a, c]]))


def sl2_ext_discriminant(a: LaurentSeries, c: LaurentSeries) -> int:
    """val(c^2 - 4a)."""
    if a.field.characteristic == 2:
        raise CharTwo("the SL2 discriminant c^2 - 4a needs characteristic != 2")
    disc = c * c - a * 4
    if disc.is_exact_zero():
        raise NotRegular("c^2 - 4a vanishes identically")
    return disc.valuation()


def _reduction(x: LaurentSeries):
    """Constant term of an element of O."""
    return x.coefficient(0)


def sl2_monoid_membership(p: VinbergSL2Point, n: int) -> MonoidMembership:
    """Classify A against V^n(O), its non-degenerate locus and the Iwahori
    submonoids.

    Labels, from the most special: outside, closure, open_locus,
    iwahori_closure, iwahori_open.  The iwahori labels refine closure:
    reduction mod t upper triangular (and nonzero for iwahori_open).
    """
    if n < 0:
        raise InputError("n must be non-negative")
    a = p.A
    entries = [a[i, j] for i in range(2) for j in range(2)]
    for x in entries:
        if x.valuation_bound() < 0 and x.coeffs:
            return MonoidMembership("outside", False, None, False, False)
    for x in entries:
        if not x.coeffs and x.precision is not None and x.precision <= 0:
            raise InsufficientPrecision("entry %s is not known to lie in O" % x)
    det = a.det()
    dv = det.valuation_bound()
    if not det.coeffs and det.precision is not None and det.precision <= n:
        raise InsufficientPrecision("det vanishes to O(t^%d), cannot compare with t^%d" % (det.precision, n))
    if det.is_exact_zero() or dv != n:
        return MonoidMembership("outside", True, None if det.is_exact_zero() else dv, False, False)
    red = [_reduction(x) for x in entries]
    nonzero = any(c != 0 for c in red)
    upper = red[2] == 0
    if upper:
        label = "iwahori_open" if nonzero else "iwahori_closure"
    else:
        label = "open_locus" if nonzero else "closure"
    return MonoidMembership(label, True, dv, nonzero, upper)


def sl2_gamma_lambda(gamma: SplitElement, lam: Sequence[int]) -> LoopMatrix:
    """t^m * gamma in GL2(F) for SL2 data gamma = diag(x, x^-1), lam = (m, -m).

    Its image in PGL2 is that of gamma and det = t^(2m) = t^(-w0(lam_ad)).
    """
    d = gamma.datum
    if d.name != "SL2":
        raise InputError("sl2_gamma_lambda needs SL2 data")
    lam = d.check_coweight(lam)
    if lam[0] < lam[1]:
        raise NotDominant("%r is not dominant" % (lam,))
    m = lam[0]
    x, y = gamma.entries()
    f = gamma.field
    zero = exact((), field=f)
    return _matrix(_GL2, [[x.shift(m), zero], [zero, y.shift(m)]])


# -- SL3 ---------------------------------------------------------------------

def cofactor(a: LoopMatrix) -> LoopMatrix:
    """Cofactor matrix: the second exterior power in the basis
    e2^e3, e3^e1, e1^e2."""
    n = a.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            rs = [r for r in range(n) if r != i]
            cs = [c for c in range(n) if c != j]
            m = a.minor(rs, cs)
            row.append(-m if (i + j) % 2 else m)
        rows.append(row)
    return _matrix(a.datum, rows)


def _scale(c: LaurentSeries, a: LoopMatrix) -> LoopMatrix:
    return _matrix(a.datum, [[c * x for x in r] for r in a.rows])


def _vanishes(a: LoopMatrix, b: LoopMatrix) -> bool:
    return all(not (x - y).coeffs for rx, ry in zip(a.rows, b.rows) for x, y in zip(rx, ry))


def sl3_vinberg_check(p: VinbergSL3Point) -> bool:
    """All four defining relations hold up to precision."""
    ident = LoopMatrix.identity(_GL3, p.x.field)
    xy = _scale(p.x * p.y, ident)
    if not _vanishes(p.A1.transpose() * p.A2, xy):
        return False
    if not _vanishes(p.A1 * p.A2.transpose(), xy):
        return False
    if not _vanishes(cofactor(p.A1), _scale(p.x, p.A2)):
        return False
    return _vanishes(cofactor(p.A2), _scale(p.y, p.A1))


def sl3_embed(t1: LaurentSeries, t2: LaurentSeries, g: LoopMatrix) -> VinbergSL3Point:
    """(t1 t2^-1, t1 t2^2, t1 g, t1 t2 (g^-1)^T) for g in SL3(F).

    The scalar on A1 is omega_1(t) = t1 and the one on A2 is
    omega_2(t) = t1 t2; with these the image satisfies all four relations.
    """
    if g.n != 3:
        raise InputError("sl3_embed needs a 3x3 matrix")
    if (g.det() - 1).coeffs:
        raise NotUnimodular("det g = %s is not 1" % g.det())
    for u in (t1, t2):
        if u.is_exact_zero() or not u.coeffs:
            raise InputError("torus coordinates must be invertible")
    g = _matrix(_GL3, g.rows)
    x = t1 / t2
    y = t1 * t2 * t2
    a1 = _scale(t1, g)
    a2 = _scale(t1 * t2, g.inverse().transpose())
    return VinbergSL3Point(x, y, a1, a2)


# -- gamma_lambda ----------------------------------------------------------

@dataclass(frozen=True)
class AdjointTorusElement:
    """Element of T_ad(F) given by the simple-root values t^coweight[i] * units[i]."""

    coweight: Tuple[int, ...]
    units: Tuple[LaurentSeries, ...]


@dataclass(frozen=True)
class TPlusElement:
    """Element of T_+(F) inside T_ad(F) x T_ad(F): (abelianization, adjoint part)."""

    first: AdjointTorusElement
    second: AdjointTorusElement

    @property
    def coweight(self):
        return (self.first.coweight, self.second.coweight)


def adjoint_coweight(d: RootDatum, mu: Sequence[int]) -> Tuple[int, ...]:
    """Coordinates of the image of mu in X_*(T_ad): <alpha_i, mu>."""
    mu = d.check_coweight(mu)
    return tuple(d.pair(a, mu) for a in d.simple_roots)


def _to_adjoint(gamma: SplitElement) -> AdjointTorusElement:
    d = gamma.datum
    units = tuple(
        _unit_part(gamma.root_value(a), d.pair(a, gamma.mu)) for a in d.simple_roots
    )
    return AdjointTorusElement(adjoint_coweight(d, gamma.mu), units)


def _unit_part(x: LaurentSeries, v: int) -> LaurentSeries:
    return x.shift(-v)


def _image_contains(d: RootDatum, v: Sequence[int]) -> bool:
    """Is v in the image of X_*(T) -> X_*(T_ad)?"""
    m = d.weight_lattice_rank
    basis = lat.integer_kernel([list(c) for c in d.constraints], m) if d.constraints else [
        tuple(r) for r in lat.identity(m)
    ]
    cols = [adjoint_coweight(d, b) for b in basis]
    r = d.rank
    mat = [[cols[k][i] for k in range(len(cols))] for i in range(r)]
    u, dm, _ = lat.smith(mat)
    uv = lat.matvec(u, list(v))
    for i in range(r):
        di = dm[i][i] if i < len(dm[i]) else 0
        if di == 0:
            if uv[i] != 0:
                return False
        elif uv[i] % di:
            return False
    return True


def _minus_w0_adjoint(d: RootDatum, lam_ad: Sequence[int]) -> Tuple[int, ...]:
    """-w0 on adjoint coordinates: a permutation of the simple indices."""
    w0 = d.longest_element()
    perm = []
    for a in d.simple_roots:
        img = tuple(-x for x in w0.act_weight(a))
        perm.append(d.simple_roots.index(img))
    return tuple(lam_ad[perm[i]] for i in range(d.rank))


def gamma_lambda_lift(d: RootDatum, gamma, lam_ad: Sequence[int]) -> TPlusElement:
    """The element gamma_lambda of T_+(F) with adjoint part gamma_ad and
    abelianization t^(-w0(lam_ad)), center component chosen trivial.

    ``gamma`` is a SplitElement of G or an AdjointTorusElement; ``lam_ad``
    is a dominant adjoint coweight (coordinates <alpha_i, lam>).
    """
    d = build_root_datum(d)
    if isinstance(gamma, SplitElement):
        gamma = _to_adjoint(gamma)
    lam_ad = tuple(int(x) for x in lam_ad)
    if len(lam_ad) != d.rank or len(gamma.coweight) != d.rank:
        raise InputError("adjoint coweights of %s have %d coordinates" % (d.name, d.rank))
    if any(x < 0 for x in lam_ad):
        raise NotDominant("%r is not dominant" % (lam_ad,))
    first = _minus_w0_adjoint(d, lam_ad)
    total = tuple(a + b for a, b in zip(first, gamma.coweight))
    if not _image_contains(d, total):
        raise KottwitzMismatch("kappa(gamma) != p(lambda): %r is not in X_*(T)" % (total,))
    f = gamma.units[0].field if gamma.units else QQ
    one = tuple(exact((1,), field=f) for _ in range(d.rank))
    return TPlusElement(AdjointTorusElement(first, one), AdjointTorusElement(tuple(gamma.coweight), tuple(gamma.units)))
