"""Exception hierarchy.

Two families: ``InputError`` for malformed or out-of-range input (CLI exit 2)
and ``MathError`` for inputs that are well formed but mathematically
degenerate or beyond the working precision (CLI exit 3).
"""


class PmasfError(Exception):
    pass


class InputError(PmasfError, ValueError):
    pass


class MathError(PmasfError, ArithmeticError):
    pass


class InvalidCartan(InputError):
    pass


class NotDominant(InputError):
    pass


class NegativeC(InputError):
    pass


class InvalidParabolic(InputError):
    pass


class UnsupportedType(InputError):
    pass


class UnsupportedCharacteristic(InputError):
    pass


class CharDividesWeylOrder(UnsupportedCharacteristic):
    pass


class LengthBound(InputError):
    pass


class NonUnitEntry(MathError):
    pass


class InsufficientPrecision(MathError):
    pass


class NotRegular(MathError):
    pass


class EmptyFiber(MathError):
    pass


class NonIntegralDimension(MathError):
    pass


class CharTwo(MathError):
    pass


class NotUnimodular(MathError):
    pass


class KottwitzMismatch(MathError):
    pass


class BudgetExceeded(MathError):
    pass
