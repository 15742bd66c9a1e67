"""
The label substitution ψ and the letter-to-letter transducer D_z.

D_z is S_z with every transition label d replaced by the pairs of ψ(d).
Started from state i it is written D_{z,i}; here that is simply a
(base, i) pair passed to transduce.
"""
from typing import NamedTuple

from .automata import AutomatonKind, successors, tau
from .errors import DigitError, InvalidStateError
from .words import check_digits


class PairLetter(NamedTuple):
    input: int
    output: int


def psi(base, d):
    """
    Pairs (x, y) of B_q x B_q with y - x = d - (p - q).

    Raises:
        DigitError: If d is not in D_z
    """
    if d not in base.span_digits:
        raise DigitError(f"psi is defined on D_z, got digit {d} in base {base}")
    shift = d - base.middle_point
    return frozenset(
        PairLetter(x, x + shift) for x in base.lower_digits if x + shift in base.lower_digits
    )


def psi_table(base):
    """ψ(d) for every d in D_z, pairs sorted by decreasing input."""
    return [(d, sorted(psi(base, d), reverse=True)) for d in base.span_digits]


def delta_D(base, n, letter):
    """Target of the transition of D_z reading letter from n, or None."""
    check_digits(letter, base.lower_digits, "B_q")
    return tau(base, n, letter.output - letter.input + base.middle_point)


def transitions(base, n):
    """All (PairLetter, target) transitions of D_z leaving n."""
    result = []
    for d, m in successors(base, AutomatonKind.SPAN, n):
        for letter in sorted(psi(base, d)):
            result.append((letter, m))
    return result


def check_start(i):
    if i < 0:
        raise InvalidStateError(f"D_z starts from a natural number, got {i}")


def transduce_step(base, n, x):
    """
    The unique output letter y and next state m for input x at state n.

    Solves q*m = p*n + (y - x) + (p - q) with y in B_q.
    """
    remainder = base.p * n - x + base.middle_point
    y = -remainder % base.q
    return y, (remainder + y) // base.q


def inverse_step(base, n, y):
    """The unique input letter x and next state m producing output y at state n."""
    remainder = base.p * n + y + base.middle_point
    x = remainder % base.q
    return x, (remainder - x) // base.q


def transduce(base, i, word):
    """
    Output of D_{z,i} on an ω-prefix over B_q.

    Raises:
        DigitError: If an input digit is not in B_q
        InvalidStateError: If i is negative
    """
    check_start(i)
    check_digits(word, base.lower_digits, "B_q")
    state = i
    output = []
    for x in word:
        y, state = transduce_step(base, state, x)
        output.append(y)
    return tuple(output)


def transduce_inverse(base, i, word):
    """
    The unique input whose image under D_{z,i} is word.

    Raises:
        DigitError: If an output digit is not in B_q
        InvalidStateError: If i is negative
    """
    check_start(i)
    check_digits(word, base.lower_digits, "B_q")
    state = i
    letters = []
    for y in word:
        x, state = inverse_step(base, state, y)
        letters.append(x)
    return tuple(letters)
