"""Bottom, top and span words of the states of T_z."""
from enum import Enum

from .automata import AutomatonKind, find_min_node_with_path, run
from .errors import DigitError, InvalidStateError, InvalidWordError
from .words import check_digits, digitwise_sub, word_to_json


class ExtremalKind(Enum):
    BOTTOM = "bottom"
    TOP = "top"


def extremal_prefix(base, n, kind, k):
    """
    First k letters of minword(n) (BOTTOM) or maxword(n) (TOP).

    At every state exactly one digit of B_q (resp. C_z) keeps the
    transition defined, since these are q consecutive integers and the
    admissible digits form one class modulo q.

    Raises:
        InvalidStateError: If n is negative
    """
    if n < 0:
        raise InvalidStateError(f"States are natural numbers, got {n}")
    digits = base.lower_digits if kind is ExtremalKind.BOTTOM else base.upper_digits
    p, q = base.p, base.q
    letters = []
    state = n
    for _ in range(k):
        a = digits.start + (-state * p - digits.start) % q
        letters.append(a)
        state = (state * p + a) // q
    return tuple(letters)


def bottom_prefix(base, n, k):
    return extremal_prefix(base, n, ExtremalKind.BOTTOM, k)


def top_prefix(base, n, k):
    return extremal_prefix(base, n, ExtremalKind.TOP, k)


def mu(base, c):
    """
    Shift a digit down by the middle-point p-q, mapping C_z onto B_q.

    Raises:
        DigitError: If c is not in D_z
    """
    if c not in base.span_digits:
        raise DigitError(f"mu is defined on D_z, got digit {c} in base {base}")
    return c - base.middle_point


def mu_word(base, word):
    return tuple(mu(base, c) for c in word)


def span_word_prefix(base, n, k):
    """First k letters of spanword(n) = maxword(n) ⊖ minword(n)."""
    return digitwise_sub(top_prefix(base, n, k), bottom_prefix(base, n, k))


def shifted_span_prefix(base, n, i, k):
    """maxword(n+i) ⊖ minword(n), which labels a run of S_z from state i."""
    return digitwise_sub(top_prefix(base, n + i, k), bottom_prefix(base, n, k))


def xi_direct(base, n, k):
    """Image of minword(n) under the successor function, computed directly."""
    return bottom_prefix(base, n + 1, k)


def witness_min_node_for_bottom_prefix(base, word):
    """
    A state whose bottom word starts with word.

    A path labelled by B_q digits from n is necessarily a prefix of minword(n).
    """
    check_digits(word, base.lower_digits, "B_q")
    return find_min_node_with_path(base, word)


def span_word_witness(base, word, i=0):
    """
    Return n such that word is a prefix of maxword(n+i) ⊖ minword(n).

    word is split as v ⊖ u with u over B_q and v over C_z; the smallest
    state with a path labelled u is a witness.

    Raises:
        InvalidWordError: If word does not label a run of S_z from i
    """
    if run(base, AutomatonKind.SPAN, i, word) is None:
        raise InvalidWordError(f"Word {list(word)} does not label a run of S_z from {i} in base {base}")
    lower = tuple(max(0, base.middle_point - d) for d in word)
    return find_min_node_with_path(base, lower)


def node_record(base, n, k):
    """JSON-ready description of the extremal words of one state."""
    return {
        'n': str(n),
        'depth': str(k),
        'bottom_prefix': word_to_json(bottom_prefix(base, n, k)),
        'top_prefix': word_to_json(top_prefix(base, n, k)),
        'span_word_prefix': word_to_json(span_word_prefix(base, n, k)),
    }
