"""Truncated Laurent series over QQ or a prime field, with tracked precision.

A series is ``t^lowest * (c_0 + c_1 t + ...) + O(t^precision)``.  The
precision is absolute; ``None`` marks an exactly known Laurent polynomial.
Valuations never silently guess: a series whose stored coefficients all
vanish below its precision raises ``InsufficientPrecision``, and only the
exact zero has valuation ``INFINITY``.

    >>> s = parse_series("t^{-1} + 2 + 3*t + O(t^5)")
    >>> s.valuation()
    -1
    >>> str(s * s)
    't^{-2} + 4*t^{-1} + 10 + 12*t + 9*t^2 + O(t^4)'
    >>> (ONE - t_power(1)).inverse(prec=4)
    1 + t + t^2 + t^3 + O(t^4)
"""

import contextlib
import contextvars
import re
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Optional, Sequence

from .errors import InputError, InsufficientPrecision, NonUnitEntry, UnsupportedCharacteristic

__all__ = [
    "DEFAULT_PRECISION",
    "INFINITY",
    "QQ",
    "GF",
    "LaurentSeries",
    "series",
    "exact",
    "t_power",
    "parse_series",
    "char_eval",
    "working_precision",
    "get_precision",
    "check_field_for_datum",
]

DEFAULT_PRECISION = 16

_PRECISION = contextvars.ContextVar("pmasf_precision", default=DEFAULT_PRECISION)


def get_precision() -> int:
    """Relative precision used when an exact input has to be inverted."""
    return _PRECISION.get()


@contextlib.contextmanager
def working_precision(prec: int):
    if prec < 1:
        raise InputError("precision must be positive, got %r" % prec)
    token = _PRECISION.set(prec)
    try:
        yield prec
    finally:
        _PRECISION.reset(token)


@total_ordering
class _Infinity:
    """Valuation of the exact zero.  Compares above every integer."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("pmasf-infinity")

    def __repr__(self):
        return "INFINITY"

    __str__ = __repr__


INFINITY = _Infinity()


# -- coefficient fields ----------------------------------------------------

class Rationals:
    name = "QQ"
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            try:
                return Fraction(x.strip())
            except (ValueError, ZeroDivisionError):
                raise InputError("bad rational coefficient %r" % x) from None
        return Fraction(x)

    def inv(self, x):
        return 1 / x

    def red(self, x):
        return x

    def to_str(self, x):
        return str(x)

    def is_negative(self, x):
        return x < 0

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")


class PrimeField:
    def __init__(self, p: int):
        if not _is_prime(p):
            raise UnsupportedCharacteristic("%r is not a prime" % p)
        self.p = p
        self.characteristic = p
        self.name = "GF(%d)" % p

    def __call__(self, x):
        p = self.p
        if isinstance(x, str):
            x = Rationals()(x)
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise InputError("coefficient %s is not %d-integral" % (x, p))
            return x.numerator * pow(x.denominator, -1, p) % p
        return int(x) % p

    def inv(self, x):
        return pow(x, -1, self.p)

    def red(self, x):
        return x % self.p

    def to_str(self, x):
        return str(x)

    def is_negative(self, x):
        return False

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = Rationals()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str):
    if name == "QQ":
        return QQ
    m = re.fullmatch(r"GF\((\d+)\)", name.strip())
    if not m:
        raise InputError("unknown coefficient field %r" % name)
    return GF(int(m.group(1)))


def _is_prime(p) -> bool:
    if not isinstance(p, int) or p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def check_field_for_datum(field, datum) -> None:
    """Refuse a prime field whose characteristic divides |W|."""
    from .errors import CharDividesWeylOrder

    p = field.characteristic
    if p and datum.weyl_order() % p == 0:
        raise CharDividesWeylOrder(
            "characteristic %d divides |W| = %d for %s" % (p, datum.weyl_order(), datum.name)
        )


# -- series ----------------------------------------------------------------

def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class LaurentSeries:
    __slots__ = ("field", "lowest", "coeffs", "precision")

    def __init__(self, coeffs=(), lowest: int = 0, precision: Optional[int] = None, field=QQ):
        f = field
        cs = [f(c) for c in coeffs]
        if precision is not None:
            keep = max(0, precision - lowest)
            cs = cs[:keep]
        start = 0
        while start < len(cs) and cs[start] == 0:
            start += 1
        end = len(cs)
        while end > start and cs[end - 1] == 0:
            end -= 1
        self.field = f
        self.coeffs = tuple(cs[start:end])
        if self.coeffs:
            self.lowest = lowest + start
        else:
            self.lowest = precision if precision is not None else 0
        self.precision = precision

    @classmethod
    def _raw(cls, field, lowest, coeffs, precision):
        """Build from already-reduced coefficients (strips zeros)."""
        obj = cls.__new__(cls)
        start = 0
        n = len(coeffs)
        while start < n and coeffs[start] == 0:
            start += 1
        end = n
        while end > start and coeffs[end - 1] == 0:
            end -= 1
        obj.field = field
        obj.coeffs = tuple(coeffs[start:end])
        obj.lowest = lowest + start if obj.coeffs else (precision if precision is not None else 0)
        obj.precision = precision
        return obj

    # -- predicates --------------------------------------------------------
    def is_exact(self) -> bool:
        return self.precision is None

    def is_exact_zero(self) -> bool:
        return self.precision is None and not self.coeffs

    def is_zero_to_precision(self) -> bool:
        return not self.coeffs

    def valuation(self):
        if self.coeffs:
            return self.lowest
        if self.precision is None:
            return INFINITY
        raise InsufficientPrecision("series vanishes to its precision O(t^%d)" % self.precision)

    def valuation_bound(self):
        """Known lower bound for the valuation (INFINITY for exact zero)."""
        if self.coeffs:
            return self.lowest
        return INFINITY if self.precision is None else self.precision

    def leading_coefficient(self):
        self.valuation()
        return self.coeffs[0]

    def coefficient(self, k: int):
        if self.precision is not None and k >= self.precision:
            raise InsufficientPrecision("coefficient of t^%d unknown at O(t^%d)" % (k, self.precision))
        i = k - self.lowest
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field(0)

    def is_unit_in_O(self) -> bool:
        return self.valuation() == 0

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            if other.field != self.field:
                raise InputError("mixing coefficient fields %r and %r" % (self.field, other.field))
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentSeries((other,), 0, None, self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = _min_prec(self.precision, other.precision)
        if not self.coeffs and not other.coeffs:
            return LaurentSeries._raw(self.field, 0, (), prec)
        lo = min(x.lowest for x in (self, other) if x.coeffs)
        hi = max(x.lowest + len(x.coeffs) for x in (self, other) if x.coeffs)
        if prec is not None:
            hi = min(hi, prec)
        if hi <= lo:
            return LaurentSeries._raw(self.field, 0, (), prec)
        out = [0] * (hi - lo)
        for x in (self, other):
            off = x.lowest - lo
            for i, c in enumerate(x.coeffs):
                j = off + i
                if 0 <= j < len(out):
                    out[j] += c
        red = self.field.red
        return LaurentSeries._raw(self.field, lo, [red(c) for c in out], prec)

    __radd__ = __add__

    def __neg__(self):
        red = self.field.red
        return LaurentSeries._raw(self.field, self.lowest, [red(-c) for c in self.coeffs], self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact_zero() or other.is_exact_zero():
            return LaurentSeries._raw(self.field, 0, (), None)
        va, vb = self.valuation_bound(), other.valuation_bound()
        prec = None
        if self.precision is not None:
            prec = self.precision + vb
        if other.precision is not None:
            p2 = other.precision + va
            prec = p2 if prec is None else min(prec, p2)
        if not self.coeffs or not other.coeffs:
            return LaurentSeries._raw(self.field, 0, (), prec)
        lo = self.lowest + other.lowest
        n = len(self.coeffs) + len(other.coeffs) - 1
        if prec is not None:
            n = min(n, prec - lo)
        if n <= 0:
            return LaurentSeries._raw(self.field, 0, (), prec)
        a, b = self.coeffs, other.coeffs
        out = [0] * n
        lb = len(b)
        for i, x in enumerate(a):
            if i >= n:
                break
            if x == 0:
                continue
            for j in range(min(lb, n - i)):
                out[i + j] += x * b[j]
        red = self.field.red
        return LaurentSeries._raw(self.field, lo, [red(c) for c in out], prec)

    __rmul__ = __mul__

    def inverse(self, prec: Optional[int] = None):
        """Multiplicative inverse.

        For an inexact series the result precision follows from the input.
        For an exact Laurent polynomial that is not a monomial, the inverse
        carries relative precision ``prec`` (default: the working precision).
        """
        if self.is_exact_zero():
            raise ZeroDivisionError("inverse of exact zero")
        v = self.valuation()
        f = self.field
        if self.precision is None and len(self.coeffs) == 1:
            return LaurentSeries._raw(f, -v, (f.inv(self.coeffs[0]),), None)
        if self.precision is None:
            rel = prec if prec is not None else get_precision()
        else:
            rel = self.precision - v
        a = self.coeffs
        inv0 = f.inv(a[0])
        out = [inv0]
        red = f.red
        for k in range(1, rel):
            s = 0
            for j in range(1, min(k, len(a) - 1) + 1):
                s += a[j] * out[k - j]
            out.append(red(-s * inv0))
        return LaurentSeries._raw(f, -v, out, -v + rel)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentSeries._raw(self.field, 0, (self.field(1),), None)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def truncate(self, prec: int):
        """Forget everything from t^prec on."""
        return LaurentSeries(self.coeffs, self.lowest, _min_prec(self.precision, prec), self.field)

    def shift(self, k: int):
        """Multiply by t^k (exact)."""
        p = None if self.precision is None else self.precision + k
        return LaurentSeries._raw(self.field, self.lowest + k, self.coeffs, p)

    def change_field(self, field):
        return LaurentSeries(self.coeffs, self.lowest, self.precision, field)

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentSeries((other,), 0, None, self.field)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.field == other.field
            and self.precision == other.precision
            and self.coeffs == other.coeffs
            and (self.lowest == other.lowest or not self.coeffs)
        )

    def __hash__(self):
        return hash((self.field, self.precision, self.coeffs, self.lowest if self.coeffs else None))

    def agrees_with(self, other) -> bool:
        """Equal up to the smaller of the two precisions."""
        diff = self - other
        return not diff.coeffs

    # -- text and JSON -----------------------------------------------------
    def __str__(self):
        f = self.field
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            e = self.lowest + i
            neg = f.is_negative(c)
            mag = -c if neg else c
            parts.append((neg, _term(f.to_str(mag), e)))
        if self.precision is not None:
            parts.append((False, "O(%s)" % _tpow(self.precision)))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self):
        return str(self)

    def to_json(self) -> dict:
        return {
            "lowest": self.lowest,
            "coeffs": [self.field.to_str(c) for c in self.coeffs],
            "precision": self.precision,
            "field": self.field.name,
        }

    @classmethod
    def from_json(cls, data: dict):
        try:
            f = field_from_name(data.get("field", "QQ"))
            return cls([f(str(c)) for c in data["coeffs"]], int(data["lowest"]), data.get("precision"), f)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("malformed series JSON: %s" % exc) from None


def _tpow(e: int) -> str:
    if e == 1:
        return "t"
    if e < 0:
        return "t^{%d}" % e
    return "t^%d" % e


def _term(coef: str, e: int) -> str:
    if e == 0:
        return coef
    if coef == "1":
        return _tpow(e)
    return "%s*%s" % (coef, _tpow(e))


_TERM_RE = re.compile(
    r"""^(?:
        O\(\s*(?:t\s*\^\s*(?:\{\s*(?P<oe1>[+-]?\d+)\s*\}|(?P<oe2>[+-]?\d+))|(?P<ot>t)|(?P<one>1))\s*\)
      | (?P<coef>\d+(?:/\d+)?)?\s*\*?\s*(?P<t>t(?:\s*\^\s*(?:\{\s*(?P<e1>[+-]?\d+)\s*\}|(?P<e2>[+-]?\d+)))?)?
    )$""",
    re.X,
)


def parse_series(text: str, field=QQ, precision: Optional[int] = None) -> LaurentSeries:
    """Parse the text form, e.g. ``t^{-1} + 2 + 3*t + O(t^5)``.

    A string without an ``O(...)`` term is an exact Laurent polynomial unless
    ``precision`` is given.
    """
    if not isinstance(text, str):
        raise InputError("series text must be a string")
    s = text.strip()
    if not s:
        raise InputError("empty series text")
    # split on top-level + and - (not inside braces or the exponent)
    tokens = []
    sign = 1
    buf = ""
    depth = 0
    i = 0
    while i < len(s):
        ch = s[i]
        if ch in "{(":
            depth += 1
        elif ch in "})":
            depth -= 1
        if depth == 0 and ch in "+-" and not buf.rstrip().endswith("^"):
            if buf.strip():
                tokens.append((sign, buf.strip()))
                buf = ""
                sign = 1
            elif tokens or sign < 0:
                raise InputError("empty term in %r" % text)
            if ch == "-":
                sign = -sign
        else:
            buf += ch
        i += 1
    if buf.strip():
        tokens.append((sign, buf.strip()))
    terms = {}
    prec = None
    for sg, tok in tokens:
        m = _TERM_RE.match(tok)
        if not m or (m.group("coef") is None and m.group("t") is None and not tok.startswith("O")):
            raise InputError("cannot parse series term %r in %r" % (tok, text))
        if tok.startswith("O"):
            if sg < 0:
                raise InputError("negative O-term in %r" % text)
            if m.group("one"):
                p = 0
            elif m.group("ot"):
                p = 1
            else:
                p = int(m.group("oe1") or m.group("oe2"))
            prec = p if prec is None else min(prec, p)
            continue
        c = field(m.group("coef") or "1")
        if sg < 0:
            c = field.red(-c)
        if m.group("t"):
            e = m.group("e1") or m.group("e2")
            e = int(e) if e is not None else 1
        else:
            e = 0
        terms[e] = field.red(terms.get(e, 0) + c)
    if precision is not None:
        prec = precision if prec is None else min(prec, precision)
    if not terms:
        return LaurentSeries((), 0, prec, field)
    lo = min(terms)
    hi = max(terms)
    coeffs = [terms.get(e, 0) for e in range(lo, hi + 1)]
    return LaurentSeries(coeffs, lo, prec, field)


def series(coeffs: Sequence, lowest: int = 0, precision: Optional[int] = DEFAULT_PRECISION, field=QQ):
    """Series with the given coefficients and (default) precision 16."""
    return LaurentSeries(coeffs, lowest, precision, field)


def exact(coeffs: Sequence, lowest: int = 0, field=QQ) -> LaurentSeries:
    """Exactly known Laurent polynomial."""
    return LaurentSeries(coeffs, lowest, None, field)


def t_power(k: int, field=QQ) -> LaurentSeries:
    return LaurentSeries((1,), k, None, field)


ONE = exact((1,))
ZERO = exact(())


def char_eval(datum, chi: Sequence[int], entries: Sequence[LaurentSeries]) -> LaurentSeries:
    """Evaluate the character chi on the torus element with the given
    coordinates: prod_b entries[b] ** (P^T chi)_b."""
    if len(entries) != datum.weight_lattice_rank:
        raise InputError("torus element needs %d entries" % datum.weight_lattice_rank)
    m = datum.weight_lattice_rank
    exps = [sum(chi[a] * datum.pairing[a][b] for a in range(m)) for b in range(m)]
    f = entries[0].field
    out = LaurentSeries._raw(f, 0, (f(1),), None)
    for e, x in zip(exps, entries):
        if x.is_exact_zero():
            raise NonUnitEntry("torus coordinate is exactly zero")
        if e:
            out = out * (x ** e)
    return out
