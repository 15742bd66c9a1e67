import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InvalidBaseError

BASE_PATTERN = re.compile(r"^\s*(\d+)\s*/\s*(\d+)\s*$")


@dataclass(frozen=True)
class Base:
    """
    A rational base z = p/q with its digit alphabets.

    Args:
        p: numerator, p > q
        q: denominator, q > 1, coprime with p

    Raises:
        InvalidBaseError: If the pair is not a valid rational base
    """
    p: int
    q: int

    def __post_init__(self):
        for name, value in (("p", self.p), ("q", self.q)):
            if isinstance(value, bool) or not isinstance(value, int):
                raise InvalidBaseError(f"{name} must be an integer, got {value!r}")
        if self.q <= 1:
            raise InvalidBaseError(f"q must be greater than 1, got {self.q}")
        if self.p <= self.q:
            raise InvalidBaseError(f"p must be greater than q, got {self.p}/{self.q}")
        if gcd(self.p, self.q) != 1:
            raise InvalidBaseError(f"p and q must be coprime, got {self.p}/{self.q}")

    def __str__(self):
        return f"{self.p}/{self.q}"

    @property
    def z(self):
        return Fraction(self.p, self.q)

    @property
    def digits(self):
        """A_p, the digits of T_z."""
        return range(0, self.p)

    @property
    def lower_digits(self):
        """B_q, the q smallest digits."""
        return range(0, self.q)

    @property
    def upper_digits(self):
        """C_z, the q largest digits."""
        return range(self.p - self.q, self.p)

    @property
    def span_digits(self):
        """D_z = C_z - B_q, the 2q-1 integers ending at p-1."""
        return range(self.p - 2 * self.q + 1, self.p)

    @property
    def middle_point(self):
        return self.p - self.q

    @property
    def floor_z(self):
        return self.p // self.q

    @property
    def is_small(self):
        return self.p <= 2 * self.q - 1

    @property
    def is_large(self):
        return self.p > 2 * self.q - 1


def make_base(p, q):
    """Return the validated base p/q."""
    return Base(p, q)


def parse_base(text):
    """
    Parse a base given as "p/q".

    Raises:
        InvalidBaseError: If the text is malformed or not a valid base
    """
    match = BASE_PATTERN.match(str(text))
    if not match:
        raise InvalidBaseError(f"Base must be given as p/q, got {text!r}")
    return Base(int(match.group(1)), int(match.group(2)))
