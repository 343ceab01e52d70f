"""Matrices over F = k((t)) for GL_n and SL_n: Cartan and Iwahori cells.

The Iwahori subgroup I is the set of g in G(O) that are upper triangular
mod t.  Cells are found two ways:

* lattice-chain invariants (the reference method): for the standard chain
  Lambda_0 = O^n > Lambda_1 > ... > Lambda_{n-1} > t Lambda_0 stabilized by I
  and a window of shifts a, the indices [t^a Lambda_i + g Lambda_j : g Lambda_j]
  are I x I invariants of g; they are read off from valuations of minors
  of g and matched against the monomial candidates;
* valuation-pivot elimination (fast path).

    >>> from pmasf.laurent import parse_series as P
    >>> g = LoopMatrix.from_strings("GL2", [["0", "1"], ["t", "0"]])
    >>> str(iwahori_cell(g)), iwahori_cell(g).length()
    ('t^[0,1]*s1', 0)
    >>> smith_cartan(LoopMatrix.from_strings("GL2", [["t", "0"], ["0", "1"]]))
    (1, 0)
"""

from functools import lru_cache
from itertools import combinations, permutations
from typing import Sequence, Tuple

from .affine_weyl import AffineWeylElement, adm_maximal, admissible_set
from .errors import InputError, InsufficientPrecision, NotDominant, UnsupportedType
from .laurent import INFINITY, QQ, LaurentSeries, exact, parse_series
from .root_data import RootDatum, build_root_datum, dominance_leq, is_dominant

__all__ = [
    "LoopMatrix",
    "type_a_datum",
    "smith_cartan",
    "determinantal_divisors",
    "iwahori_cell",
    "spherical_membership",
    "iwahori_membership",
    "monomial_matrix",
]


@lru_cache(maxsize=None)
def type_a_datum(n: int, special: bool = False) -> RootDatum:
    name = ("SL%d" if special else "GL%d") % n
    try:
        return build_root_datum(name)
    except InputError:
        roots = [tuple(1 if k == i else -1 if k == i + 1 else 0 for k in range(n)) for i in range(n - 1)]
        data = dict(simple_roots=roots, simple_coroots=roots)
        if special:
            data["constraints"] = [(1,) * n]
        return build_root_datum(data, name=name)


def _type_a_size(d: RootDatum) -> Tuple[int, bool]:
    if "type_a" in d._cache:
        return d._cache["type_a"]
    n = d.weight_lattice_rank
    ident = type_a_datum(n, bool(d.constraints))
    if (d.simple_roots, d.simple_coroots, d.pairing, d.constraints) != (
        ident.simple_roots, ident.simple_coroots, ident.pairing, ident.constraints
    ):
        raise UnsupportedType("matrix models exist only for GL_n and SL_n, not %s" % d.name)
    d._cache["type_a"] = (n, bool(d.constraints))
    return d._cache["type_a"]


def _det(rows) -> LaurentSeries:
    n = len(rows)
    if n == 0:
        return exact((1,))
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for c in range(n):
        if rows[0][c].is_exact_zero():
            continue
        sub = [r[:c] + r[c + 1:] for r in rows[1:]]
        term = rows[0][c] * _det(sub)
        if c % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return exact((), field=rows[0][0].field)
    return total


class LoopMatrix:
    """Square matrix of Laurent series, attached to a GL_n or SL_n datum."""

    def __init__(self, datum, rows: Sequence[Sequence[LaurentSeries]], check: bool = True):
        if isinstance(datum, str):
            datum = build_root_datum(datum)
        self.datum = datum
        n, special = _type_a_size(datum)
        rows = tuple(tuple(r) for r in rows)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InputError("%s needs a %dx%d matrix" % (datum.name, n, n))
        self.n = n
        self.rows = rows
        self.field = rows[0][0].field
        if check:
            det = self.det()
            if not det.coeffs:
                raise InputError("matrix is not invertible over F (determinant %s)" % det)
            if special and (det - 1).coeffs:
                raise InputError("determinant %s is not 1" % det)

    @classmethod
    def from_strings(cls, datum, rows, field=QQ, check=True):
        try:
            return cls(datum, [[parse_series(str(x), field) for x in r] for r in rows], check)
        except TypeError:
            raise InputError("matrix must be a list of rows of series strings") from None

    @classmethod
    def identity(cls, datum, field=QQ):
        datum = build_root_datum(datum) if isinstance(datum, str) else datum
        n = datum.weight_lattice_rank
        return cls(datum, [[exact((1 if i == j else 0,), field=field) for j in range(n)] for i in range(n)], False)

    def __getitem__(self, rc):
        r, c = rc
        return self.rows[r][c]

    def __mul__(self, other: "LoopMatrix") -> "LoopMatrix":
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = None
                for k in range(n):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if a.is_exact_zero() or b.is_exact_zero():
                        continue
                    p = a * b
                    acc = p if acc is None else acc + p
                row.append(acc if acc is not None else exact((), field=self.field))
            out.append(row)
        return LoopMatrix(self.datum, out, check=False)

    def det(self) -> LaurentSeries:
        return _det(self.rows)

    def minor(self, rows, cols) -> LaurentSeries:
        return _det([[self.rows[r][c] for c in cols] for r in rows])

    def inverse(self) -> "LoopMatrix":
        n = self.n
        det = self.det()
        dinv = det.inverse()
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                rs = [r for r in range(n) if r != j]
                cs = [c for c in range(n) if c != i]
                m = self.minor(rs, cs)
                if (i + j) % 2:
                    m = -m
                row.append(m * dinv if not m.is_exact_zero() else m)
            out.append(row)
        return LoopMatrix(self.datum, out, check=False)

    def transpose(self) -> "LoopMatrix":
        return LoopMatrix(self.datum, list(zip(*self.rows)), check=False)

    def conjugate_by(self, g: "LoopMatrix") -> "LoopMatrix":
        """g^-1 * self * g."""
        return g.inverse() * self * g

    def to_strings(self):
        return [[str(x) for x in r] for r in self.rows]

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "]"

    __repr__ = __str__


def monomial_matrix(w: AffineWeylElement, field=QQ) -> LoopMatrix:
    """The loop t^mu * P_sigma for w = t^mu * sigma (SL_n: signed so det = 1)."""
    d = w.datum
    n, special = _type_a_size(d)
    p = w.finite.matrix
    rows = [[exact((), field=field) for _ in range(n)] for _ in range(n)]
    for r in range(n):
        for c in range(n):
            if p[r][c]:
                rows[r][c] = exact((1,), w.translation[r], field)
    m = LoopMatrix(d, rows, check=False)
    if special:
        det = m.det()
        if det.coeffs and det.coeffs[0] != field(1):
            # flip the sign of one nonzero entry to land in SL_n
            c = next(c for c in range(n) if p[0][c])
            rows[0][c] = -rows[0][c]
            m = LoopMatrix(d, rows, check=False)
    return m


# -- Cartan cell -----------------------------------------------------------

def _val_or_bound(x: LaurentSeries):
    """(valuation, certain) where certain=False means a lower bound only."""
    if x.coeffs:
        return x.lowest, True
    if x.precision is None:
        return INFINITY, True
    return x.precision, False


def smith_cartan(g: LoopMatrix) -> Tuple[int, ...]:
    """Elementary divisor valuations, largest first."""
    n = g.n
    m = [list(r) for r in g.rows]
    rows, cols = list(range(n)), list(range(n))
    vals = []
    while rows:
        best = None
        for r in rows:
            for c in cols:
                v, certain = _val_or_bound(m[r][c])
                if v is INFINITY:
                    continue
                if best is None or v < best[0] or (v == best[0] and certain and not best[3]):
                    best = (v, r, c, certain)
        if best is None:
            raise InputError("matrix is singular")
        v, r, c, certain = best
        if not certain:
            raise InsufficientPrecision("cannot certify a pivot below O(t^%d)" % v)
        piv_inv = m[r][c].inverse()
        for r2 in rows:
            if r2 == r or m[r2][c].is_exact_zero():
                continue
            f = m[r2][c] * piv_inv
            for c2 in cols:
                if not m[r][c2].is_exact_zero():
                    m[r2][c2] = m[r2][c2] - f * m[r][c2]
            m[r2][c] = exact((), field=g.field)
        for c2 in cols:
            if c2 == c or m[r][c2].is_exact_zero():
                continue
            m[r][c2] = exact((), field=g.field)
        vals.append(v)
        rows.remove(r)
        cols.remove(c)
    return tuple(sorted(vals, reverse=True))


def determinantal_divisors(g: LoopMatrix) -> Tuple[int, ...]:
    """Elementary divisors from minors: d_1 + ... + d_k = min val of k x k minors."""
    n = g.n
    prev = 0
    out = []
    for k in range(1, n + 1):
        best = None
        for rs in combinations(range(n), k):
            for cs in combinations(range(n), k):
                v, certain = _val_or_bound(g.minor(rs, cs))
                if v is INFINITY:
                    continue
                if not certain:
                    raise InsufficientPrecision("minor vanishes to precision")
                best = v if best is None else min(best, v)
        out.append(best - prev)
        prev = best
    return tuple(sorted(out, reverse=True))


# -- Iwahori cell ----------------------------------------------------------

def _permutation_element(d: RootDatum, sigma: Sequence[int]):
    """Weyl element whose matrix sends e_c to e_sigma(c)."""
    n = len(sigma)
    mat = tuple(tuple(1 if sigma[c] == r else 0 for c in range(n)) for r in range(n))
    return d._weyl_index()[mat]


def _pivot_cell(g: LoopMatrix) -> AffineWeylElement:
    n = g.n
    m = [list(r) for r in g.rows]
    rows, cols = list(range(n)), list(range(n))
    sigma = [None] * n
    mu = [None] * n
    while rows:
        best = None
        for r in rows:
            for c in cols:
                v, certain = _val_or_bound(m[r][c])
                if v is INFINITY:
                    continue
                key = (n * v - r + c, r)
                if best is None or key < best[0] or (key == best[0] and certain and not best[4]):
                    best = (key, r, c, v, certain)
        if best is None:
            raise InputError("matrix is singular")
        _, r, c, v, certain = best
        if not certain:
            raise InsufficientPrecision("cannot certify a pivot below O(t^%d)" % v)
        piv_inv = m[r][c].inverse()
        for r2 in rows:
            if r2 == r or m[r2][c].is_exact_zero():
                continue
            f = m[r2][c] * piv_inv
            for c2 in cols:
                if c2 != c and not m[r][c2].is_exact_zero():
                    m[r2][c2] = m[r2][c2] - f * m[r][c2]
            m[r2][c] = exact((), field=g.field)
        for c2 in cols:
            m[r][c2] = exact((), field=g.field) if c2 != c else m[r][c2]
        sigma[c] = r
        mu[r] = v
        rows.remove(r)
        cols.remove(c)
    d = g.datum
    return AffineWeylElement(tuple(mu), _permutation_element(d, sigma), d)


def _minor_valuations(g: LoopMatrix):
    n = g.n
    out = {((), ()): 0}
    for k in range(1, n + 1):
        for rs in combinations(range(n), k):
            for cs in combinations(range(n), k):
                v, certain = _val_or_bound(g.minor(rs, cs))
                if not certain:
                    raise InsufficientPrecision("minor %r x %r vanishes to precision" % (rs, cs))
                out[(rs, cs)] = v
    return out


def _monomial_minor_valuations(n, mu, sigma):
    out = {((), ()): 0}
    for k in range(1, n + 1):
        for cs in combinations(range(n), k):
            img = tuple(sorted(sigma[c] for c in cs))
            for rs in combinations(range(n), k):
                out[(rs, cs)] = sum(mu[r] for r in rs) if rs == img else INFINITY
    return out


def _chain_offsets(n, i):
    """Lambda_i = O e_1 + ... + O e_{n-i} + t O e_{n-i+1} + ... (0-based rows)."""
    return tuple(0 if r < n - i else 1 for r in range(n))


def _chain_invariant(n, minors, a, i, j):
    """[t^a Lambda_i + g Lambda_j : g Lambda_j] from the minor valuations of g."""
    full = tuple(range(n))
    di, dj = _chain_offsets(n, i), _chain_offsets(n, j)
    best = None
    for k in range(n + 1):
        for rs in combinations(range(n), k):
            rest = tuple(r for r in range(n) if r not in rs)
            head = sum(a + di[r] for r in rs)
            for cs in combinations(range(n), n - k):
                v = minors[(rest, cs)]
                if v is INFINITY:
                    continue
                tot = head + v + sum(dj[c] for c in cs)
                if best is None or tot < best:
                    best = tot
    return minors[(full, full)] + sum(dj) - best


def _chain_invariants(n, minors, window):
    return {(a, i, j): _chain_invariant(n, minors, a, i, j)
            for a in window for i in range(n) for j in range(n)}


def _lattice_cell(g: LoopMatrix) -> AffineWeylElement:
    d = g.datum
    n = g.n
    minors = _minor_valuations(g)
    divisors = determinantal_divisors(g)
    h = max(d.pair(d.two_rho, divisors), max(abs(x) for x in divisors))
    window = range(-(h + 2), h + 3)
    target = _chain_invariants(n, minors, window)
    matches = []
    orbit = sorted(set(permutations(divisors)))
    for mu in orbit:
        for sigma in permutations(range(n)):
            cand = _monomial_minor_valuations(n, mu, sigma)
            if all(_chain_invariant(n, cand, *key) == val for key, val in target.items()):
                matches.append(AffineWeylElement(tuple(mu), _permutation_element(d, sigma), d))
    if len(matches) != 1:
        raise AssertionError("lattice invariants matched %d candidates" % len(matches))
    return matches[0]


def iwahori_cell(g: LoopMatrix, method: str = "lattice") -> AffineWeylElement:
    """The w~ with g in I w~ I.  ``method`` is "lattice" (reference) or
    "pivot" (elimination fast path)."""
    if method == "lattice":
        return _lattice_cell(g)
    if method == "pivot":
        return _pivot_cell(g)
    raise InputError("unknown method %r" % method)


def _check_lambda(d, lam):
    lam = d.check_coweight(lam)
    if not is_dominant(d, lam):
        raise NotDominant("%r is not dominant" % (lam,))
    return lam


def spherical_membership(g: LoopMatrix, gamma: LoopMatrix, lam, variant: str = "closed") -> bool:
    d = g.datum
    lam = _check_lambda(d, lam)
    mu = smith_cartan(gamma.conjugate_by(g))
    if variant == "open":
        return mu == lam
    if variant == "closed":
        return dominance_leq(d, mu, lam)
    raise InputError("variant must be open or closed")


def iwahori_membership(g: LoopMatrix, gamma: LoopMatrix, lam, variant: str = "closed",
                       method: str = "lattice") -> bool:
    d = g.datum
    lam = _check_lambda(d, lam)
    w = iwahori_cell(gamma.conjugate_by(g), method)
    if variant == "open":
        return w in set(adm_maximal(d, lam))
    if variant == "closed":
        return w in set(admissible_set(d, lam))
    raise InputError("variant must be open or closed")
