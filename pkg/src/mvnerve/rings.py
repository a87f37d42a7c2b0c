"""Coefficient rings: the rationals, prime fields and the integers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime

RATIONALS = "Q"
PRIME_FIELD = "Fp"
INTEGERS = "Z"


@dataclass(frozen=True)
class RingSpec:
    """An exact coefficient ring.

    Scalars are ``Fraction`` over Q, ``int`` in ``[0, p)`` over F_p and plain
    ``int`` over Z. Arithmetic is done with Python operators; :meth:`reduce`
    brings a result back to canonical form.
    """

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == PRIME_FIELD:
            if not isinstance(self.p, int) or not isprime(self.p):
                raise ValueError(f"PrimeField requires a prime modulus, got {self.p!r}")
        elif self.kind in (RATIONALS, INTEGERS):
            if self.p is not None:
                raise ValueError(f"ring {self.kind} takes no modulus")
        else:
            raise ValueError(f"unknown ring kind {self.kind!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != INTEGERS

    @property
    def zero(self):
        return Fraction(0) if self.kind == RATIONALS else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == RATIONALS else 1

    def reduce(self, x):
        if self.kind == PRIME_FIELD:
            return x % self.p
        return x

    def coerce(self, x):
        """Map an int, Fraction or numeric string into the ring."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.kind == RATIONALS:
            return Fraction(x)
        x = Fraction(x)
        if self.kind == INTEGERS:
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return int(x)
        den = x.denominator % self.p
        if den == 0:
            raise ValueError(f"{x} has no image in F_{self.p}")
        return (x.numerator * pow(den, -1, self.p)) % self.p

    def inverse(self, x):
        if self.kind == RATIONALS:
            return 1 / Fraction(x)
        if self.kind == PRIME_FIELD:
            return pow(int(x), -1, self.p)
        if x in (1, -1):
            return x
        raise ZeroDivisionError(f"{x} is not a unit in Z")

    def divides(self, d, x) -> bool:
        """Whether ``x`` is a multiple of ``d`` in the ring."""
        if self.is_field:
            return d != 0 or x == 0
        if d == 0:
            return x == 0
        return x % d == 0

    def format(self, x) -> str:
        x = self.reduce(x)
        if isinstance(x, Fraction) and x.denominator != 1:
            return f"{x.numerator}/{x.denominator}"
        return str(int(x))

    def __str__(self) -> str:
        return f"Zp:{self.p}" if self.kind == PRIME_FIELD else self.kind

    @classmethod
    def parse(cls, text: str) -> "RingSpec":
        """Parse the CLI spelling: ``Q``, ``Z`` or ``Zp:<p>``."""
        text = text.strip()
        if text == RATIONALS:
            return QQ
        if text == INTEGERS:
            return ZZ
        if text.startswith("Zp:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise ValueError(f"bad prime in ring spec {text!r}") from None
            return GF(p)
        raise ValueError(f"unknown ring {text!r}; expected Q, Z or Zp:<p>")


QQ = RingSpec(RATIONALS)
ZZ = RingSpec(INTEGERS)


def GF(p: int) -> RingSpec:
    return RingSpec(PRIME_FIELD, p)
