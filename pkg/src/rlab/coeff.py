"""Exact coefficient fields: the rationals and prime fields F_p.

Polynomial code works on raw coefficients (``int`` residues for F_p,
``Fraction`` for QQ) through the helpers on :class:`FieldSpec`; the
:class:`FieldElem` wrapper is the checked public face of a scalar.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "FieldSpec",
    "FieldElem",
    "FieldMismatch",
    "QQ",
    "GF",
    "field_arithmetic",
    "parse_field",
]

_MAX_CHAR = 2**31


class FieldMismatch(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A coefficient field; ``characteristic == 0`` means QQ."""

    characteristic: int

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and not (_is_prime(p) and p < _MAX_CHAR):
            raise ValueError(f"characteristic must be 0 or a prime < 2^31, got {p}")

    @property
    def kind(self) -> str:
        return "Rationals" if self.characteristic == 0 else "PrimeField"

    @property
    def name(self) -> str:
        return "QQ" if self.characteristic == 0 else f"F{self.characteristic}"

    def __str__(self):
        return self.name

    # raw-coefficient helpers used by the polynomial layer

    def convert(self, value):
        p = self.characteristic
        if p:
            if isinstance(value, Fraction):
                if value.denominator % p == 0:
                    raise ZeroDivisionError("denominator vanishes in F_%d" % p)
                return value.numerator * pow(value.denominator, -1, p) % p
            return int(value) % p
        return Fraction(value)

    def zero(self):
        return 0 if self.characteristic else Fraction(0)

    def one(self):
        return 1 if self.characteristic else Fraction(1)

    def normalize(self, c):
        p = self.characteristic
        if p:
            return c % p
        return c if isinstance(c, Fraction) else Fraction(c)

    def inv(self, c):
        if not c:
            raise ZeroDivisionError("division by zero in %s" % self.name)
        p = self.characteristic
        return pow(c, -1, p) if p else 1 / Fraction(c)

    def random_element(self, rng, nonzero=False):
        p = self.characteristic
        if p:
            lo = 1 if nonzero else 0
            return rng.randrange(lo, p)
        while True:
            c = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            if c or not nonzero:
                return c

    def elem(self, value) -> "FieldElem":
        return FieldElem(self, self.convert(value))


QQ = FieldSpec(0)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


def parse_field(text: str) -> FieldSpec:
    """Parse ``QQ`` or ``F<p>`` (e.g. ``F101``)."""
    t = text.strip()
    if t == "QQ":
        return QQ
    if t.startswith("F") and t[1:].isdigit():
        return FieldSpec(int(t[1:]))
    raise ValueError(f"unknown field {text!r}; expected QQ or F<p>")


@dataclass(frozen=True)
class FieldElem:
    field: FieldSpec
    value: object

    def _check(self, other):
        if not isinstance(other, FieldElem):
            other = self.field.elem(other)
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElem(self.field, self.field.normalize(self.value + other.value))

    def __sub__(self, other):
        other = self._check(other)
        return FieldElem(self.field, self.field.normalize(self.value - other.value))

    def __mul__(self, other):
        other = self._check(other)
        return FieldElem(self.field, self.field.normalize(self.value * other.value))

    def __truediv__(self, other):
        other = self._check(other)
        inv = self.field.inv(other.value)
        return FieldElem(self.field, self.field.normalize(self.value * inv))

    def __neg__(self):
        return FieldElem(self.field, self.field.normalize(-self.value))

    def __bool__(self):
        return bool(self.value)

    def __str__(self):
        return str(self.value)


def field_arithmetic(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")
