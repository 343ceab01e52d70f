"""The extended affine Weyl group W~ = W x| X_*(T).

Elements are written t^mu * w with product

    (t^mu1 w1)(t^mu2 w2) = t^(mu1 + w1(mu2)) w1 w2.

The Iwahori subgroup is the preimage of the upper triangular Borel, and
t^mu corresponds to the loop t^mu.  With these conventions the length is

    l(t^mu w) = sum over alpha > 0 with w^-1(alpha) > 0 of |<alpha, mu>|
              + sum over alpha > 0 with w^-1(alpha) < 0 of |<alpha, mu> + 1|

so that for GL2 the element s*t^(1,0) = t^(0,1)*s has length 0.

    >>> from pmasf.root_data import build_root_datum
    >>> d = build_root_datum("GL2")
    >>> [str(x) for x in admissible_set(d, (1, 0))]
    ['t^[0,1]*s1', 't^[0,1]', 't^[1,0]']
"""

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterable, List, Sequence, Tuple

from .errors import InputError, NotDominant
from .root_data import (
    RootDatum,
    WeylElement,
    coroot_coefficients,
    dominance_leq,
    is_dominant,
    pi1_class,
)

__all__ = [
    "AffineWeylElement",
    "translation",
    "finite",
    "aw_product",
    "aw_length",
    "aw_reduced_word",
    "affine_simple_reflections",
    "bruhat_leq",
    "admissible_set",
    "adm_maximal",
    "double_coset_support",
    "parse_element",
    "elements_up_to_length",
]

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class AffineWeylElement:
    """t^translation * finite."""

    translation: Vector
    finite: WeylElement
    datum: RootDatum = field(compare=False, repr=False)

    def __mul__(self, other: "AffineWeylElement") -> "AffineWeylElement":
        return aw_product(self, other)

    def inverse(self) -> "AffineWeylElement":
        winv = self.finite.inverse()
        mu = winv.act(tuple(-x for x in self.translation))
        return AffineWeylElement(mu, winv, self.datum)

    def length(self) -> int:
        return aw_length(self)

    @property
    def omega_class(self) -> Tuple[int, ...]:
        return pi1_class(self.datum, self.translation)

    def sort_key(self):
        return (self.length(), self.translation, self.finite.word)

    def is_translation(self) -> bool:
        return self.finite.is_identity()

    def __str__(self):
        parts = []
        if any(self.translation):
            parts.append("t^[%s]" % ",".join(str(x) for x in self.translation))
        if self.finite.word:
            parts.append(str(self.finite))
        return "*".join(parts) if parts else "e"

    def __repr__(self):
        return "<%s>" % self


def translation(d: RootDatum, mu: Sequence[int]) -> AffineWeylElement:
    return AffineWeylElement(d.check_coweight(mu), d.identity(), d)


def finite(d: RootDatum, w: WeylElement) -> AffineWeylElement:
    return AffineWeylElement(d.zero(), w, d)


def aw_product(x: AffineWeylElement, y: AffineWeylElement) -> AffineWeylElement:
    mu = tuple(a + b for a, b in zip(x.translation, x.finite.act(y.translation)))
    return AffineWeylElement(mu, x.finite * y.finite, x.datum)


@lru_cache(maxsize=200000)
def _length(d: RootDatum, mu: Vector, wmat) -> int:
    w = d._weyl_index()[wmat]
    winv = w.inverse()
    total = 0
    for a in d.positive_roots:
        p = d.pair(a, mu)
        if d.is_positive(winv.act_weight(a)):
            total += abs(p)
        else:
            total += abs(p + 1)
    return total


def aw_length(x: AffineWeylElement) -> int:
    return _length(x.datum, x.translation, x.finite.matrix)


def affine_simple_reflections(d: RootDatum) -> List[Tuple[int, AffineWeylElement]]:
    """(index, element) for s_1..s_r and one affine node per component.

    The affine node of the k-th irreducible component gets index -k, so a
    simple group has s_0, s_1, ..., s_r.
    """
    if "affine_simple" not in d._cache:
        out = []
        for k, theta in enumerate(d.highest_roots()):
            cor = d.coroot_of[theta]
            s_theta = _reflection_of_root(d, theta)
            cands = [
                AffineWeylElement(tuple(-c for c in cor), s_theta, d),
                AffineWeylElement(tuple(cor), s_theta, d),
            ]
            s0 = next(c for c in cands if aw_length(c) == 1)
            out.append((-k, s0))
        for i in range(d.rank):
            out.append((i + 1, AffineWeylElement(d.zero(), d.weyl_element((i,)), d)))
        out.sort(key=lambda p: (p[0] < 0, abs(p[0])))
        d._cache["affine_simple"] = out
    return d._cache["affine_simple"]


def _reflection_of_root(d: RootDatum, root) -> WeylElement:
    cor = d.coroot_of[tuple(root)]
    for w in d.weyl_elements():
        mu_test = [tuple(1 if k == j else 0 for k in range(d.weight_lattice_rank)) for j in range(d.weight_lattice_rank)]
        if all(
            w.act(e) == tuple(x - d.pair(root, e) * c for x, c in zip(e, cor))
            for e in mu_test
        ):
            return w
    raise AssertionError("reflection for root %r not found" % (root,))


def _simple_label(i: int) -> str:
    if i > 0:
        return "s%d" % i
    return "s0" if i == 0 else "s0_%d" % (-i)


def aw_reduced_word(x: AffineWeylElement) -> Tuple[AffineWeylElement, Tuple[int, ...]]:
    """Return (omega, word) with x = omega * s_{word[0]} * ... and
    len(word) = l(x), omega of length 0."""
    simple = affine_simple_reflections(x.datum)
    word: List[int] = []
    cur = x
    ell = aw_length(cur)
    while ell > 0:
        for i, s in simple:
            y = cur * s
            ly = aw_length(y)
            if ly < ell:
                word.append(i)
                cur, ell = y, ly
                break
        else:
            raise AssertionError("no descent found for %s" % x)
    return cur, tuple(reversed(word))


def simple_reflection(d: RootDatum, i: int) -> AffineWeylElement:
    for j, s in affine_simple_reflections(d):
        if j == i:
            return s
    raise InputError("no affine simple reflection with index %d" % i)


def word_product(omega: AffineWeylElement, word: Iterable[int]) -> AffineWeylElement:
    cur = omega
    for i in word:
        cur = cur * simple_reflection(omega.datum, i)
    return cur


def bruhat_leq(x: AffineWeylElement, y: AffineWeylElement) -> bool:
    """Bruhat order on W~; false across different Omega classes."""
    if x.omega_class != y.omega_class:
        return False
    return _bruhat(x.datum, x, y)


@lru_cache(maxsize=500000)
def _bruhat(d: RootDatum, x: AffineWeylElement, y: AffineWeylElement) -> bool:
    if x == y:
        return True
    lx, ly = aw_length(x), aw_length(y)
    if lx >= ly:
        return False
    for _, s in affine_simple_reflections(y.datum):
        sy = s * y
        if aw_length(sy) < ly:
            sx = s * x
            if aw_length(sx) < lx:
                return _bruhat(d, sx, sy)
            return _bruhat(d, x, sy)
    raise AssertionError("element of positive length without left descent")


def _require_dominant(d: RootDatum, lam: Sequence[int]) -> Vector:
    lam = d.check_coweight(lam)
    if not is_dominant(d, lam):
        raise NotDominant("%r is not dominant for %s" % (lam, d.name))
    return lam


def adm_maximal(d: RootDatum, lam: Sequence[int]) -> List[AffineWeylElement]:
    """The translations t^{x(lam)}, x in W, sorted."""
    lam = _require_dominant(d, lam)
    orbit = {w.act(lam) for w in d.weyl_elements()}
    return sorted((translation(d, mu) for mu in orbit), key=AffineWeylElement.sort_key)


def lower_ideal(y: AffineWeylElement) -> set:
    """{x : x <= y}, by subword closure of one reduced word of y."""
    omega, word = aw_reduced_word(y)
    ideal = {omega}
    for i in word:
        s = simple_reflection(y.datum, i)
        ideal |= {z * s for z in ideal}
    return ideal


def admissible_set(d: RootDatum, lam: Sequence[int]) -> List[AffineWeylElement]:
    """Adm(lam) = {w : w <= t^{x(lam)} for some x in W}, sorted canonically."""
    out = set()
    for m in adm_maximal(d, lam):
        out |= lower_ideal(m)
    return sorted(out, key=AffineWeylElement.sort_key)


def double_coset_support(d: RootDatum, lam: Sequence[int]) -> List[Vector]:
    """Dominant mu with mu <= lam, sorted by decreasing <2rho, mu> then lex."""
    lam = _require_dominant(d, lam)
    w0 = d.longest_element()
    low = w0.act(lam)
    span = coroot_coefficients(d, tuple(a - b for a, b in zip(lam, low)))
    bounds = [int(c) for c in span]
    out = []
    for cs in iproduct(*(range(b + 1) for b in bounds)):
        mu = list(lam)
        for c, a in zip(cs, d.simple_coroots):
            for k in range(len(mu)):
                mu[k] -= c * a[k]
        mu = tuple(mu)
        if is_dominant(d, mu) and dominance_leq(d, mu, lam):
            out.append(mu)
    return sorted(set(out), key=lambda m: (-d.pair(d.two_rho, m), tuple(-x for x in m)))


def omega_element(d: RootDatum, mu: Sequence[int]) -> AffineWeylElement:
    """The length-zero element in the Omega class of t^mu."""
    return aw_reduced_word(translation(d, mu))[0]


def elements_up_to_length(d: RootDatum, bound: int, omegas: Sequence[AffineWeylElement] = None):
    """All x = omega * (element of W_aff) with l(x) <= bound.

    ``omegas`` defaults to the identity only.  Returns a list sorted
    canonically.
    """
    if omegas is None:
        omegas = [translation(d, d.zero())]
    simple = [s for _, s in affine_simple_reflections(d)]
    out = set(omegas)
    layer = set(omegas)
    for ell in range(1, bound + 1):
        nxt = set()
        for x in layer:
            for s in simple:
                y = x * s
                if aw_length(y) == ell:
                    nxt.add(y)
        out |= nxt
        layer = nxt
    return sorted(out, key=AffineWeylElement.sort_key)


_FACTOR = re.compile(r"^(?:t\^\[(?P<mu>[-+\d,\s]*)\]|s(?P<s>\d+)(?:_(?P<c>\d+))?|(?P<e>e))$")


def parse_element(d: RootDatum, text: str) -> AffineWeylElement:
    """Parse products like ``s1*t^[1,0]`` or ``t^[0,1]*s1``.

    ``s0`` is the affine simple reflection, ``s1..sr`` the finite ones.
    """
    cur = translation(d, d.zero())
    for tok in text.replace(" ", "").split("*"):
        m = _FACTOR.match(tok)
        if not m:
            raise InputError("cannot parse %r in %r" % (tok, text))
        if m.group("mu") is not None:
            try:
                mu = tuple(int(v) for v in m.group("mu").split(","))
            except ValueError:
                raise InputError("bad coweight in %r" % tok) from None
            cur = cur * translation(d, mu)
        elif m.group("s") is not None:
            i = int(m.group("s"))
            if m.group("c"):
                if i != 0:
                    raise InputError("only s0 carries a component suffix: %r" % tok)
                i = -int(m.group("c"))
            if i > d.rank:
                raise InputError("%s has only %d finite simple reflections" % (d.name, d.rank))
            cur = cur * simple_reflection(d, i)
    return cur
