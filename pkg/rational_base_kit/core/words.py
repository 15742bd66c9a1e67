"""
Digit words, their values, enclosures, orders and serialization.

Finite words are tuples of signed integers stored most-significant-first.
The same tuples also stand for prefixes of ω-words, read left to right.
"""
from dataclasses import dataclass
from decimal import Decimal, localcontext
from enum import Enum
from fractions import Fraction

from .errors import BoundsError, DigitError, InvalidWordError, LengthMismatchError

EPSILON = "ε"


class Order(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    PREFIX_EQUAL = "prefix-equal"


@dataclass(frozen=True)
class RealEnclosure:
    """Closed rational interval [lo, hi] certified to contain a real value."""
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise BoundsError(f"Enclosure lower end {self.lo} exceeds upper end {self.hi}")

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, value):
        return self.lo <= value <= self.hi

    def __contains__(self, value):
        return self.contains(value)

    def intersects(self, other):
        return self.lo <= other.hi and other.lo <= self.hi

    def is_disjoint(self, other):
        return not self.intersects(other)

    def hull(self, other):
        return RealEnclosure(min(self.lo, other.lo), max(self.hi, other.hi))

    def within(self, other):
        return other.lo <= self.lo and self.hi <= other.hi

    def to_dict(self):
        return {'lo': fraction_to_str(self.lo), 'hi': fraction_to_str(self.hi)}


@dataclass(frozen=True)
class WordDistance:
    """
    Distance between two ω-prefixes.

    bound is 2^-l for the longest common prefix length l. When one prefix
    extends the other, only the upper bound 2^-min(|u|,|v|) is known and
    prefix_equal is set.
    """
    bound: Fraction
    prefix_equal: bool

    @property
    def exact(self):
        return None if self.prefix_equal else self.bound


def as_word(digits):
    return tuple(int(d) for d in digits)


def check_digits(word, alphabet, name="alphabet"):
    """
    Check that every digit of word lies in alphabet.

    Raises:
        DigitError: If a digit is outside the alphabet
    """
    for digit in word:
        if digit not in alphabet:
            raise DigitError(f"Digit {digit} is not in {name} {{{alphabet.start}..{alphabet.stop - 1}}}")
    return word


def eval_value(base, word):
    """
    Value π(w) = Σ (a_i/q) z^i of a finite word, a_0 being the rightmost digit.

    Defined for any signed digits; the empty word evaluates to 0.
    """
    z = base.z
    value = Fraction(0)
    for digit in word:
        value = value * z + Fraction(digit, base.q)
    return value


def eval_real_prefix(base, prefix):
    """Partial sum Σ_{i=1..|w|} (a_i/q) z^-i of an ω-prefix."""
    z = base.z
    value = Fraction(0)
    for digit in reversed(prefix):
        value = (value + Fraction(digit, base.q)) / z
    return value


def tail_weight(base, length):
    """Value of a tail of unit digits after a prefix of the given length, divided by q."""
    z = base.z
    return 1 / (base.q * z ** length * (z - 1))


def real_enclosure(base, prefix, dmin, dmax):
    """
    Enclose the value of every ω-word extending prefix with digits in [dmin, dmax].

    Returns:
        RealEnclosure: partial sum plus the extreme tails

    Raises:
        BoundsError: If dmin > dmax
    """
    if dmin > dmax:
        raise BoundsError(f"Digit bounds are reversed: dmin={dmin} > dmax={dmax}")
    partial = eval_real_prefix(base, prefix)
    weight = tail_weight(base, len(prefix))
    return RealEnclosure(partial + dmin * weight, partial + dmax * weight)


def _order(u, v):
    if u < v:
        return Order.LESS
    if u > v:
        return Order.GREATER
    return Order.EQUAL


def lex_compare(u, v):
    """Lexicographic order on finite words; a proper prefix is smaller."""
    return _order(tuple(u), tuple(v))


def radix_compare(u, v):
    """Radix order: shorter words first, lexicographic among equal lengths."""
    if len(u) != len(v):
        return Order.LESS if len(u) < len(v) else Order.GREATER
    return _order(tuple(u), tuple(v))


def compare_prefixes(u, v):
    """
    Compare two ω-prefixes on their common length.

    Returns Order.PREFIX_EQUAL when they agree there, since the ω-words
    they start may still differ further on.
    """
    common = min(len(u), len(v))
    order = _order(tuple(u[:common]), tuple(v[:common]))
    return Order.PREFIX_EQUAL if order is Order.EQUAL else order


def common_prefix_length(u, v):
    length = 0
    for a, b in zip(u, v):
        if a != b:
            break
        length += 1
    return length


def word_distance(u, v):
    """Prefix distance 2^-l between two ω-prefixes (see WordDistance)."""
    length = common_prefix_length(u, v)
    prefix_equal = length == min(len(u), len(v))
    return WordDistance(Fraction(1, 2 ** length), prefix_equal)


def digitwise_add(u, v):
    """Componentwise sum without carries."""
    if len(u) != len(v):
        raise LengthMismatchError(f"Cannot add words of lengths {len(u)} and {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def digitwise_sub(u, v):
    """Componentwise difference u ⊖ v without carries."""
    if len(u) != len(v):
        raise LengthMismatchError(f"Cannot subtract words of lengths {len(u)} and {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def word_to_str(word, empty=""):
    """Compact form when all digits are in 0..9, comma-separated otherwise."""
    if not word:
        return empty
    if all(0 <= d <= 9 for d in word):
        return "".join(str(d) for d in word)
    return ",".join(str(d) for d in word)


def word_to_json(word):
    return [int(d) for d in word]


def word_from_str(text):
    """
    Parse a word written compactly ("212"), comma-separated ("3,-1,2") or
    space-separated ("1 0 1"). "" and "ε" are the empty word.

    Raises:
        InvalidWordError: If the text is not a word
    """
    text = text.strip()
    if text in ("", EPSILON):
        return ()
    try:
        if "," in text:
            return tuple(int(part) for part in text.split(","))
        if " " in text:
            return tuple(int(part) for part in text.split())
        return tuple(int(char) for char in text)
    except ValueError:
        raise InvalidWordError(f"Not a digit word: {text!r}") from None


def fraction_to_str(value):
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def fraction_from_str(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"Not a rational number: {text!r}") from None


def fraction_to_decimal(value, digits=12):
    """Render an exact rational rounded to the given number of significant digits."""
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = digits
        rendered = Decimal(value.numerator) / Decimal(value.denominator)
    return format(rendered.normalize(), "f") if rendered else "0"
