"""Root data of split reductive groups, with exact integer arithmetic.

A datum is given by simple roots in X^* and simple coroots in X_*, both as
integer vectors of a common length ``m`` (the weight lattice rank), and an
integer pairing matrix ``P`` so that <chi, mu> = chi^T P mu.  For the
semisimple type A presets the coweight lattice is cut out of ZZ^n by linear
constraints (the coordinates of an SL_n coweight sum to zero).

    >>> d = build_root_datum("GL2")
    >>> sorted(d.roots)
    [(-1, 1), (1, -1)]
    >>> d.two_rho
    (1, -1)
    >>> dominant_conjugate(d, (0, 1))[0]
    (1, 0)
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import _lattice as lat
from .errors import InputError, InvalidCartan

__all__ = [
    "PRESETS",
    "RootDatum",
    "WeylElement",
    "build_root_datum",
    "weyl_group",
    "dominant_conjugate",
    "dominance_leq",
    "pi1_class",
    "is_dominant",
]

Vector = Tuple[int, ...]

SCHEMA_VERSION = 1

PRESETS = {
    "GL2": dict(simple_roots=[(1, -1)], simple_coroots=[(1, -1)]),
    "SL2": dict(simple_roots=[(1, -1)], simple_coroots=[(1, -1)], constraints=[(1, 1)]),
    "PGL2": dict(simple_roots=[(1,)], simple_coroots=[(2,)]),
    "GL3": dict(simple_roots=[(1, -1, 0), (0, 1, -1)], simple_coroots=[(1, -1, 0), (0, 1, -1)]),
    "SL3": dict(
        simple_roots=[(1, -1, 0), (0, 1, -1)],
        simple_coroots=[(1, -1, 0), (0, 1, -1)],
        constraints=[(1, 1, 1)],
    ),
    "Sp4": dict(simple_roots=[(1, -1), (0, 2)], simple_coroots=[(1, -1), (0, 1)]),
}

# Safety cap for the root closure; finite root systems of rank <= 8 have at
# most 240 roots.
_MAX_ROOTS = 2000


@dataclass(frozen=True)
class WeylElement:
    """An element of the finite Weyl group.

    ``matrix`` is the action on X_* (columns are images of basis vectors),
    ``word`` a reduced word in the simple reflections (0-based indices).
    """

    matrix: Tuple[Vector, ...]
    word: Tuple[int, ...] = field(compare=False)
    datum: "RootDatum" = field(compare=False, repr=False)

    def act(self, mu: Sequence[int]) -> Vector:
        return lat.matvec(self.matrix, mu)

    def act_weight(self, chi: Sequence[int]) -> Vector:
        v = tuple(chi)
        for i in reversed(self.word):
            v = self.datum.reflect_weight(i, v)
        return v

    def length(self) -> int:
        return len(self.word)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return self.datum.weyl_element(self.word + other.word)

    def inverse(self) -> "WeylElement":
        return self.datum.weyl_element(tuple(reversed(self.word)))

    def is_identity(self) -> bool:
        return not self.word

    def __str__(self):
        if not self.word:
            return "e"
        return "*".join("s%d" % (i + 1) for i in self.word)


@dataclass(frozen=True)
class RootDatum:
    name: str
    simple_roots: Tuple[Vector, ...]
    simple_coroots: Tuple[Vector, ...]
    pairing: Tuple[Vector, ...]
    constraints: Tuple[Vector, ...] = ()

    # derived data, filled in by __post_init__
    rank: int = field(init=False, compare=False)
    weight_lattice_rank: int = field(init=False, compare=False)
    cartan: Tuple[Vector, ...] = field(init=False, compare=False, repr=False)
    roots: Tuple[Vector, ...] = field(init=False, compare=False, repr=False)
    positive_roots: Tuple[Vector, ...] = field(init=False, compare=False, repr=False)
    coroot_of: Dict[Vector, Vector] = field(init=False, compare=False, repr=False)
    root_coords: Dict[Vector, Vector] = field(init=False, compare=False, repr=False)
    two_rho: Vector = field(init=False, compare=False, repr=False)
    fundamental_coweights: Tuple[Tuple[Fraction, ...], ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        s = object.__setattr__
        m = len(self.pairing)
        s(self, "_dot", self.pairing == lat.identity(m))
        r = len(self.simple_roots)
        s(self, "rank", r)
        s(self, "weight_lattice_rank", m)
        _validate_shapes(self)
        cartan = tuple(
            tuple(self.pair(self.simple_roots[j], self.simple_coroots[i]) for j in range(r)) for i in range(r)
        )
        s(self, "cartan", cartan)
        _validate_cartan(cartan)
        coords = _root_closure(cartan)
        roots, pos, coroot_of, root_coords = [], [], {}, {}
        for c, dc in coords:
            v = tuple(sum(ci * a[k] for ci, a in zip(c, self.simple_roots)) for k in range(m))
            cv = tuple(sum(di * a[k] for di, a in zip(dc, self.simple_coroots)) for k in range(m))
            roots.append(v)
            coroot_of[v] = cv
            root_coords[v] = c
            if all(x >= 0 for x in c):
                pos.append(v)
        s(self, "roots", tuple(sorted(roots)))
        s(self, "positive_roots", tuple(sorted(pos, key=lambda v: (sum(root_coords[v]), root_coords[v]))))
        s(self, "coroot_of", coroot_of)
        s(self, "root_coords", root_coords)
        s(self, "two_rho", tuple(sum(a[k] for a in pos) for k in range(m)))
        fund = []
        for i in range(r):
            target = tuple(1 if j == i else 0 for j in range(r))
            cols = [tuple(cartan[k][j] for j in range(r)) for k in range(r)]
            x = lat.solve_q(cols, target)
            fund.append(tuple(sum(x[k] * self.simple_coroots[k][c] for k in range(r)) for c in range(m)))
        s(self, "fundamental_coweights", tuple(fund))
        s(self, "_cache", {})

    # -- pairings and reflections -------------------------------------------
    def pair(self, chi: Sequence[int], mu: Sequence[int]) -> int:
        if self._dot:
            return sum(x * y for x, y in zip(chi, mu))
        return sum(chi[a] * self.pairing[a][b] * mu[b] for a in range(len(chi)) for b in range(len(mu)))

    def rho_pair(self, mu: Sequence[int]) -> Fraction:
        """<rho, mu> as an exact rational."""
        return Fraction(self.pair(self.two_rho, mu), 2)

    def reflect(self, i: int, mu: Sequence[int]) -> Vector:
        a = self.pair(self.simple_roots[i], mu)
        return tuple(x - a * y for x, y in zip(mu, self.simple_coroots[i]))

    def reflect_weight(self, i: int, chi: Sequence[int]) -> Vector:
        a = self.pair(chi, self.simple_coroots[i])
        return tuple(x - a * y for x, y in zip(chi, self.simple_roots[i]))

    def is_positive(self, root: Sequence[int]) -> bool:
        return all(c >= 0 for c in self.root_coords[tuple(root)])

    # -- coweights -----------------------------------------------------------
    def check_coweight(self, mu: Sequence[int]) -> Vector:
        mu = tuple(int(x) for x in mu)
        if len(mu) != self.weight_lattice_rank:
            raise InputError(
                "coweight %r has length %d, expected %d" % (mu, len(mu), self.weight_lattice_rank)
            )
        for c in self.constraints:
            if lat.dot(c, mu) != 0:
                raise InputError("coweight %r is not in X_*(T) of %s" % (mu, self.name))
        return mu

    def zero(self) -> Vector:
        return (0,) * self.weight_lattice_rank

    # -- Weyl group ----------------------------------------------------------
    def reflection_matrix(self, i: int) -> Tuple[Vector, ...]:
        key = ("refl", i)
        if key not in self._cache:
            m = self.weight_lattice_rank
            cols = [self.reflect(i, tuple(1 if k == j else 0 for k in range(m))) for j in range(m)]
            self._cache[key] = lat.transpose(cols)
        return self._cache[key]

    def weyl_element(self, word: Sequence[int]) -> WeylElement:
        """The element s_{i1} ... s_{ik}, carrying a reduced word."""
        mat = lat.identity(self.weight_lattice_rank)
        for i in word:
            mat = lat.matmul(mat, self.reflection_matrix(i))
        return self._weyl_index()[mat]

    def identity(self) -> WeylElement:
        return self.weyl_element(())

    def _weyl_index(self) -> Dict[Tuple[Vector, ...], WeylElement]:
        if "weyl" not in self._cache:
            self._cache["weyl"] = _enumerate_weyl(self)
        return self._cache["weyl"]

    def weyl_elements(self) -> List[WeylElement]:
        return sorted(self._weyl_index().values(), key=lambda w: (len(w.word), w.word))

    def weyl_order(self) -> int:
        return len(self._weyl_index())

    def longest_element(self, subset: Optional[Sequence[int]] = None) -> WeylElement:
        """Longest element of W, or of the parabolic subgroup W_J."""
        if subset is None:
            return max(self.weyl_elements(), key=lambda w: (len(w.word), w.word))
        subset = tuple(sorted(set(subset)))
        key = ("longest", subset)
        if key not in self._cache:
            seen = {self.identity().matrix: self.identity()}
            frontier = [self.identity()]
            while frontier:
                nxt = []
                for w in frontier:
                    for j in subset:
                        u = self.weyl_element(w.word + (j,))
                        if u.matrix not in seen:
                            seen[u.matrix] = u
                            nxt.append(u)
                frontier = nxt
            self._cache[key] = max(seen.values(), key=lambda w: (len(w.word), w.word))
        return self._cache[key]

    def stabilizer_simple(self, mu: Sequence[int]) -> Tuple[int, ...]:
        """Simple reflections fixing mu (these generate W_mu for dominant mu)."""
        return tuple(i for i in range(self.rank) if self.pair(self.simple_roots[i], mu) == 0)

    def min_coset_rep(self, w: WeylElement, subset: Sequence[int]) -> WeylElement:
        """Minimal length representative of the coset w W_J."""
        cur = w
        changed = True
        while changed:
            changed = False
            for j in subset:
                u = self.weyl_element(cur.word + (j,))
                if len(u.word) < len(cur.word):
                    cur = u
                    changed = True
        return cur

    def root_length(self, w: WeylElement) -> int:
        """#{alpha > 0 : w(alpha) < 0}."""
        return sum(1 for a in self.positive_roots if not self.is_positive(w.act_weight(a)))

    # -- components and highest roots -----------------------------------------
    def components(self) -> List[Tuple[int, ...]]:
        r = self.rank
        seen, comps = set(), []
        for i in range(r):
            if i in seen:
                continue
            comp, stack = set(), [i]
            while stack:
                k = stack.pop()
                if k in comp:
                    continue
                comp.add(k)
                stack.extend(j for j in range(r) if j != k and self.cartan[k][j] != 0)
            seen |= comp
            comps.append(tuple(sorted(comp)))
        return comps

    def highest_roots(self) -> List[Vector]:
        out = []
        for comp in self.components():
            cands = [
                a for a in self.positive_roots
                if all(c == 0 for k, c in enumerate(self.root_coords[a]) if k not in comp)
            ]
            out.append(max(cands, key=lambda a: (sum(self.root_coords[a]), self.root_coords[a])))
        return out

    # -- fundamental group ----------------------------------------------------
    def _pi1_data(self):
        if "pi1" not in self._cache:
            m = self.weight_lattice_rank
            basis = lat.integer_kernel([list(c) for c in self.constraints], m) if self.constraints else [
                tuple(1 if k == j else 0 for k in range(m)) for j in range(m)
            ]
            coords = [_integral_coords(basis, a) for a in self.simple_coroots]
            cmat = lat.transpose(coords) if coords else tuple(() for _ in basis)
            b = len(basis)
            if self.rank:
                u, dmat, _ = lat.smith(cmat)
            else:
                u, dmat = lat.identity(b), tuple(() for _ in range(b))
            u = [list(row) for row in u]
            factors = []
            for i in range(b):
                d = dmat[i][i] if i < len(dmat) and i < len(dmat[i]) else 0
                factors.append(d)
                if d == 0:
                    lead = next((x for x in u[i] if x), 1)
                    if lead < 0:
                        u[i] = [-x for x in u[i]]
            self._cache["pi1"] = (basis, tuple(map(tuple, u)), tuple(factors))
        return self._cache["pi1"]

    def pi1_invariants(self) -> Tuple[int, ...]:
        """Invariant factors of pi_1 (0 stands for a free ZZ summand)."""
        return tuple(d for d in self._pi1_data()[2] if d != 1)

    # -- serialization ---------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "name": self.name,
            "rank": self.rank,
            "weight_lattice_rank": self.weight_lattice_rank,
            "simple_roots": [list(a) for a in self.simple_roots],
            "simple_coroots": [list(a) for a in self.simple_coroots],
            "pairing": [list(r) for r in self.pairing],
            "constraints": [list(c) for c in self.constraints],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RootDatum":
        if not isinstance(data, dict):
            raise InputError("root datum JSON must be an object")
        missing = [k for k in ("rank", "simple_roots", "simple_coroots", "pairing") if k not in data]
        if missing:
            raise InputError("root datum JSON lacks fields %s" % missing)
        d = build_root_datum(
            dict(
                simple_roots=data["simple_roots"],
                simple_coroots=data["simple_coroots"],
                pairing=data["pairing"],
                constraints=data.get("constraints", []),
            ),
            name=data.get("name", "custom"),
        )
        if d.rank != data["rank"]:
            raise InputError("declared rank %r does not match %d simple roots" % (data["rank"], d.rank))
        return d


def _integral_coords(basis, v):
    x = lat.solve_q(basis, v)
    if x is None or any(c.denominator != 1 for c in x):
        raise InvalidCartan("vector %r does not lie in the coweight lattice" % (v,))
    return tuple(int(c) for c in x)


def _validate_shapes(d: RootDatum):
    m = d.weight_lattice_rank
    if m <= 0 or any(len(row) != m for row in d.pairing):
        raise InvalidCartan("pairing must be a non-empty square matrix")
    if len(d.simple_roots) != len(d.simple_coroots):
        raise InvalidCartan("need as many simple coroots as simple roots")
    for v in d.simple_roots + d.simple_coroots + d.constraints:
        if len(v) != m:
            raise InvalidCartan("vector %r has wrong length (expected %d)" % (v, m))
    if d.simple_roots and lat.rank_q(d.simple_roots) != len(d.simple_roots):
        raise InvalidCartan("simple roots must be linearly independent")
    for a in d.simple_coroots:
        for c in d.constraints:
            if lat.dot(c, a) != 0:
                raise InvalidCartan("simple coroot %r violates lattice constraint %r" % (a, c))


def _validate_cartan(a):
    r = len(a)
    for i in range(r):
        if a[i][i] != 2:
            raise InvalidCartan("diagonal Cartan entry %d is %d, expected 2" % (i, a[i][i]))
        for j in range(r):
            if i == j:
                continue
            if a[i][j] > 0:
                raise InvalidCartan("positive off-diagonal Cartan entry at (%d,%d)" % (i, j))
            if (a[i][j] == 0) != (a[j][i] == 0):
                raise InvalidCartan("Cartan matrix zero pattern is not symmetric")
    for i in range(r):
        for j in range(r):
            for k in range(r):
                if len({i, j, k}) == 3 and a[i][j] * a[j][k] * a[k][i] != a[j][i] * a[k][j] * a[i][k]:
                    raise InvalidCartan("Cartan matrix is not symmetrizable")


def _root_closure(cartan):
    """Orbit of (simple root, simple coroot) pairs under simple reflections.

    Works in simple-root / simple-coroot coordinates.  Returns a list of
    (root coords, coroot coords).
    """
    r = len(cartan)
    start = []
    for i in range(r):
        e = tuple(1 if k == i else 0 for k in range(r))
        start.append((e, e))
    seen = {}
    queue = deque(start)
    while queue:
        c, d = queue.popleft()
        if c in seen:
            continue
        seen[c] = d
        if len(seen) > _MAX_ROOTS:
            raise InvalidCartan("root system is not finite")
        for i in range(r):
            p = sum(c[j] * cartan[i][j] for j in range(r))  # <beta, alpha_i^vee>
            q = sum(d[j] * cartan[j][i] for j in range(r))  # <alpha_i, beta^vee>
            c2 = tuple(x - (p if k == i else 0) for k, x in enumerate(c))
            d2 = tuple(x - (q if k == i else 0) for k, x in enumerate(d))
            if c2 not in seen:
                queue.append((c2, d2))
    return sorted(seen.items())


def _enumerate_weyl(d: RootDatum):
    ident = lat.identity(d.weight_lattice_rank)
    refl = [d.reflection_matrix(i) for i in range(d.rank)]
    found = {ident: ()}
    frontier = [ident]
    while frontier:
        nxt = []
        for mat in frontier:
            for i, s in enumerate(refl):
                u = lat.matmul(mat, s)
                if u not in found:
                    found[u] = found[mat] + (i,)
                    nxt.append(u)
        frontier = nxt
    return {mat: WeylElement(mat, word, d) for mat, word in found.items()}


def build_root_datum(preset, name: Optional[str] = None) -> RootDatum:
    """Build a datum from a preset label or from custom data.

    Custom data is a mapping with ``simple_roots``, ``simple_coroots`` and
    optionally ``pairing`` (default: the dot product) and ``constraints``.
    """
    if isinstance(preset, RootDatum):
        return preset
    if isinstance(preset, str):
        if preset not in PRESETS:
            raise InputError("unknown preset %r (known: %s)" % (preset, ", ".join(PRESETS)))
        data = PRESETS[preset]
        name = preset
    else:
        data = preset
        name = name or "custom"
    try:
        roots = tuple(tuple(int(x) for x in v) for v in data["simple_roots"])
        coroots = tuple(tuple(int(x) for x in v) for v in data["simple_coroots"])
        m = len(roots[0]) if roots else len(data.get("pairing") or [])
        pairing = data.get("pairing") or lat.identity(m)
        pairing = tuple(tuple(int(x) for x in row) for row in pairing)
        constraints = tuple(tuple(int(x) for x in c) for c in data.get("constraints", ()))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidCartan("malformed root datum data: %s" % exc) from None
    return RootDatum(name, roots, coroots, pairing, constraints)


def weyl_group(d: RootDatum) -> List[WeylElement]:
    """All elements of W, sorted by length then word."""
    return d.weyl_elements()


def is_dominant(d: RootDatum, mu: Sequence[int]) -> bool:
    return all(d.pair(a, mu) >= 0 for a in d.simple_roots)


def dominant_conjugate(d: RootDatum, mu: Sequence[int]) -> Tuple[Vector, WeylElement]:
    """Return (mu_+, w) with mu_+ dominant and w(mu) = mu_+."""
    cur = tuple(mu)
    applied: List[int] = []
    while True:
        bad = next((i for i in range(d.rank) if d.pair(d.simple_roots[i], cur) < 0), None)
        if bad is None:
            break
        cur = d.reflect(bad, cur)
        applied.append(bad)
    return cur, d.weyl_element(tuple(reversed(applied)))


def pi1_class(d: RootDatum, mu: Sequence[int]) -> Tuple[int, ...]:
    """Canonical label of mu in X_*(T) / (coroot lattice).

    One entry per nontrivial invariant factor of pi_1: a residue in
    [0, d) for a torsion factor, an integer for a free factor.
    """
    basis, u, factors = d._pi1_data()
    x = _integral_coords(basis, tuple(mu))
    y = lat.matvec(u, x)
    out = []
    for yi, f in zip(y, factors):
        if f == 1:
            continue
        out.append(yi if f == 0 else yi % f)
    return tuple(out)


def coroot_coefficients(d: RootDatum, v: Sequence[int]) -> Optional[List[Fraction]]:
    """Rational coefficients of v in the simple coroots, or None."""
    if d.rank == 0:
        return [] if all(x == 0 for x in v) else None
    return lat.solve_q(d.simple_coroots, tuple(v))


def dominance_leq(d: RootDatum, mu: Sequence[int], lam: Sequence[int], rational: bool = False) -> bool:
    """mu <= lam: lam - mu is a non-negative (integer or rational) combination
    of simple coroots, and mu, lam have the same image in pi_1."""
    diff = tuple(b - a for a, b in zip(mu, lam))
    coeffs = coroot_coefficients(d, diff)
    if coeffs is None or any(c < 0 for c in coeffs):
        return False
    if not rational and any(c.denominator != 1 for c in coeffs):
        return False
    return pi1_class(d, mu) == pi1_class(d, lam)
