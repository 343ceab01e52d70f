"""Newton points, Kottwitz classes, discriminant valuations and dimensions.

A split regular semisimple element is gamma = t^mu * u with u in T(O),
given by the coweight mu and the torus coordinates of u (units).

    >>> from pmasf.root_data import build_root_datum
    >>> from pmasf.laurent import parse_series
    >>> d = build_root_datum("GL2")
    >>> g = SplitElement(d, (1, 0), [parse_series("1"), parse_series("1")])
    >>> discriminant_valuation(g)
    -1
    >>> q = FiberQuery(d, (1, 0), gamma=g, level="iwahori")
    >>> nonempty(q), dim_fiber(q)
    (True, 0)
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import (
    EmptyFiber,
    InputError,
    InvalidParabolic,
    NegativeC,
    NonIntegralDimension,
    NotDominant,
    NotRegular,
)
from .laurent import LaurentSeries, char_eval, t_power
from .root_data import (
    RootDatum,
    WeylElement,
    coroot_coefficients,
    dominant_conjugate,
    is_dominant,
    pi1_class,
)

__all__ = [
    "SplitElement",
    "InvariantBundle",
    "FiberQuery",
    "newton_point",
    "kottwitz_class",
    "nonempty",
    "discriminant_valuation",
    "extended_discriminant_valuation",
    "c_invariant",
    "dim_fiber",
    "mv_dimension",
    "r_N_valuation",
    "parabolic_dimension",
]

VARIANTS = ("open", "closed")
LEVELS = ("spherical", "iwahori")


class SplitElement:
    """gamma = t^mu * u in T(F), regular semisimple."""

    def __init__(self, datum: RootDatum, mu: Sequence[int], units: Sequence[LaurentSeries]):
        self.datum = datum
        self.mu = datum.check_coweight(mu)
        units = tuple(units)
        if len(units) != datum.weight_lattice_rank:
            raise InputError("need %d unit coordinates, got %d" % (datum.weight_lattice_rank, len(units)))
        for u in units:
            if not isinstance(u, LaurentSeries):
                raise InputError("unit coordinates must be Laurent series")
            if u.is_exact_zero() or u.valuation() != 0:
                raise InputError("unit coordinate %s does not have valuation 0" % u)
        if len({u.field for u in units}) != 1:
            raise InputError("unit coordinates over different fields")
        self.units = units
        self.field = units[0].field
        if datum.constraints:
            for c in datum.constraints:
                prod = t_power(0, self.field)
                for ci, u in zip(c, units):
                    if ci:
                        prod = prod * u ** ci
                if (prod - 1).coeffs:
                    raise InputError("unit part does not lie in the torus of %s" % datum.name)
        self._root_terms = None
        self.root_valuations()  # regularity check

    def entries(self) -> Tuple[LaurentSeries, ...]:
        """Torus coordinates t^mu_b * u_b."""
        return tuple(u.shift(m) for u, m in zip(self.units, self.mu))

    def root_value(self, alpha) -> LaurentSeries:
        return char_eval(self.datum, alpha, self.entries())

    def root_valuations(self):
        """{alpha: val(1 - alpha(gamma))} over all roots."""
        if self._root_terms is None:
            out = {}
            for a in self.datum.roots:
                x = 1 - self.root_value(a)
                if not x.coeffs:
                    raise NotRegular("alpha(gamma) = 1 for alpha = %r (up to precision)" % (a,))
                out[a] = x.valuation()
            self._root_terms = out
        return self._root_terms

    def conjugate(self, w: WeylElement) -> "SplitElement":
        """w gamma w^-1: permute the torus coordinates through w."""
        m = self.datum.weight_lattice_rank
        mu = w.act(self.mu)
        # action of w on the torus: coordinate b of w(x) is prod_c x_c^{M[b][c]}
        units = []
        for b in range(m):
            val = t_power(0, self.field)
            for c in range(m):
                e = w.matrix[b][c]
                if e:
                    val = val * self.units[c] ** e
            units.append(val)
        return SplitElement(self.datum, mu, units)

    def __repr__(self):
        return "SplitElement(%s, mu=%r, units=[%s])" % (
            self.datum.name, self.mu, ", ".join(str(u) for u in self.units))


@dataclass(frozen=True)
class InvariantBundle:
    """Invariants of a (possibly non-split) element supplied by the caller."""

    nu: Tuple[Fraction, ...]
    kappa: Tuple[int, ...]
    d: int
    c: int = 0

    def __post_init__(self):
        if self.c < 0:
            raise NegativeC("c must be non-negative, got %d" % self.c)


class FiberQuery:
    def __init__(self, datum: RootDatum, lam: Sequence[int], gamma: Optional[SplitElement] = None,
                 bundle: Optional[InvariantBundle] = None, variant: str = "closed", level: str = "spherical"):
        if (gamma is None) == (bundle is None):
            raise InputError("give exactly one of gamma or an invariant bundle")
        if variant not in VARIANTS:
            raise InputError("variant must be one of %s" % (VARIANTS,))
        if level not in LEVELS:
            raise InputError("level must be one of %s" % (LEVELS,))
        self.datum = datum
        self.lam = datum.check_coweight(lam)
        if not is_dominant(datum, self.lam):
            raise NotDominant("%r is not dominant" % (self.lam,))
        self.gamma = gamma
        self.bundle = bundle
        self.variant = variant
        self.level = level

    def newton(self):
        if self.gamma is not None:
            return newton_point(self.gamma)
        return self.bundle.nu

    def kappa(self):
        if self.gamma is not None:
            return kottwitz_class(self.gamma)
        return self.bundle.kappa

    def d(self) -> int:
        if self.gamma is not None:
            return discriminant_valuation(self.gamma)
        return self.bundle.d

    def c(self) -> int:
        return c_invariant(self.gamma if self.gamma is not None else self.bundle)


def newton_point(gamma: SplitElement) -> Tuple[int, ...]:
    return dominant_conjugate(gamma.datum, gamma.mu)[0]


def kottwitz_class(gamma: SplitElement) -> Tuple[int, ...]:
    return pi1_class(gamma.datum, gamma.mu)


def _rational_leq(d: RootDatum, nu, lam) -> bool:
    diff = tuple(Fraction(b) - Fraction(a) for a, b in zip(nu, lam))
    coeffs = coroot_coefficients(d, diff)
    return coeffs is not None and all(c >= 0 for c in coeffs)


def nonempty(q: FiberQuery) -> bool:
    """kappa(gamma) = p(lambda) and nu_gamma <= lambda rationally.

    The verdict does not depend on the level or the variant.
    """
    d = q.datum
    if tuple(q.kappa()) != pi1_class(d, q.lam):
        return False
    return _rational_leq(d, q.newton(), q.lam)


def discriminant_valuation(gamma: SplitElement) -> int:
    """sum over all roots of val(1 - alpha(gamma)); may be negative."""
    return sum(gamma.root_valuations().values())


def extended_discriminant_valuation(q: FiberQuery) -> int:
    if not nonempty(q):
        raise EmptyFiber("fiber is empty")
    dp = q.datum.pair(q.datum.two_rho, q.lam) + q.d()
    if dp < 0:
        raise AssertionError("<2rho, lambda> + d = %d < 0 on a non-empty fiber" % dp)
    return dp


def c_invariant(x) -> int:
    if isinstance(x, SplitElement):
        return 0
    if isinstance(x, InvariantBundle):
        return x.c
    c = int(x)
    if c < 0:
        raise NegativeC("c must be non-negative, got %d" % c)
    return c


def dim_fiber(q: FiberQuery) -> int:
    """<rho, lambda> + (d - c)/2, the same for both levels and variants."""
    if not nonempty(q):
        raise EmptyFiber("fiber is empty")
    val = q.datum.rho_pair(q.lam) + Fraction(q.d() - q.c(), 2)
    if val.denominator != 1 or val < 0:
        raise NonIntegralDimension("dimension %s is not a non-negative integer" % val)
    return int(val)


def parabolic_dimension(d: RootDatum, lam: Sequence[int]) -> int:
    """l(w_0) - l(longest element of W_lam), i.e. dim G/P_lam."""
    lam = d.check_coweight(lam)
    if not is_dominant(d, lam):
        raise NotDominant("%r is not dominant" % (lam,))
    return d.longest_element().length() - d.longest_element(d.stabilizer_simple(lam)).length()


def mv_dimension(d: RootDatum, lam: Sequence[int], mu: Sequence[int], w: WeylElement) -> Fraction:
    """<lam + mu, rho> - L0 + l(w^lam), w^lam the minimal representative
    of w W_lam and L0 = dim G/P_lam."""
    lam = d.check_coweight(lam)
    if not is_dominant(d, lam):
        raise NotDominant("%r is not dominant" % (lam,))
    mu = d.check_coweight(mu)
    stab = d.stabilizer_simple(lam)
    wl = d.min_coset_rep(w, stab)
    total = tuple(a + b for a, b in zip(lam, mu))
    return d.rho_pair(total) - parabolic_dimension(d, lam) + wl.length()


def _standard_radicals(d: RootDatum):
    """Root sets of unipotent radicals of standard parabolics and of their
    opposites."""
    out = []
    r = d.rank
    for mask in range(1 << r):
        J = [i for i in range(r) if mask >> i & 1]
        levi = {
            a for a in d.positive_roots
            if all(c == 0 for k, c in enumerate(d.root_coords[a]) if k not in J)
        }
        rad = frozenset(a for a in d.positive_roots if a not in levi)
        out.append(rad)
        out.append(frozenset(tuple(-x for x in a) for a in rad))
    return out


def r_N_valuation(gamma: SplitElement, n_roots) -> int:
    """sum over beta in N of val(1 - beta(gamma))."""
    n_roots = frozenset(tuple(a) for a in n_roots)
    if n_roots not in _standard_radicals(gamma.datum):
        raise InvalidParabolic("%r is not the root set of a standard unipotent radical" % sorted(n_roots))
    vals = gamma.root_valuations()
    return sum(vals[a] for a in n_roots)


def negative_roots(d: RootDatum):
    return [tuple(-x for x in a) for a in d.positive_roots]
