"""
The representation tree T_z and the span automaton S_z.

Both automata share the state set N and the transition rule
n --a--> m iff q*m = p*n + a; they differ by alphabet (A_p for T_z,
D_z for S_z). States are materialized lazily.
"""
import logging
from collections import Counter
from enum import Enum

from .errors import FrontierCapExceeded
from .words import check_digits

LOG = logging.getLogger(__name__)

DEFAULT_FRONTIER_CAP = 1_000_000


class AutomatonKind(Enum):
    TREE = "tree"
    SPAN = "span"


def alphabet(base, kind):
    return base.digits if kind is AutomatonKind.TREE else base.span_digits


def tau(base, n, a):
    """Return (n*p + a)/q when q divides it and the result is a state, else None."""
    numerator = n * base.p + a
    if numerator % base.q or numerator < 0:
        return None
    return numerator // base.q


def successors(base, kind, n):
    """
    All (digit, state) transitions leaving n, sorted by digit.

    The admissible digits form one residue class modulo q, so they are
    stepped through directly instead of testing every digit.
    """
    digits = alphabet(base, kind)
    first = digits.start + (-n * base.p - digits.start) % base.q
    result = []
    for a in range(first, digits.stop, base.q):
        m = tau(base, n, a)
        if m is not None:
            result.append((a, m))
    return result


def run(base, kind, start, word):
    """Fold tau along word read left to right; None if any step is undefined."""
    digits = alphabet(base, kind)
    state = start
    for a in word:
        if a not in digits:
            return None
        state = tau(base, state, a)
        if state is None:
            return None
    return state


def encode(base, n):
    """
    The representation <n> of an integer, without leading zeros.

    Raises:
        ValueError: If n is negative
    """
    if n < 0:
        raise ValueError(f"Only natural numbers have a representation, got {n}")
    digits = []
    while n:
        a = (base.q * n) % base.p
        digits.append(a)
        n = (base.q * n - a) // base.p
    return tuple(reversed(digits))


def predecessor(base, m):
    """The unique incoming transition of m in T_z, as (state, digit)."""
    a = (base.q * m) % base.p
    return (base.q * m - a) // base.p, a


def incoming_path(base, m, k):
    """Label of the unique length-k path of T_z ending in m."""
    labels = []
    for _ in range(k):
        m, a = predecessor(base, m)
        labels.append(a)
    return tuple(reversed(labels))


def find_min_node_with_path(base, word):
    """
    Smallest state from which word labels a path of T_z.

    The admissible start states after j letters form one residue class
    r mod q^j; each further letter fixes the next base-q digit of r.

    Raises:
        DigitError: If a digit of word is not in A_p
    """
    check_digits(word, base.digits, "A_p")
    p, q = base.p, base.q
    residue, state = 0, 0
    modulus, weight = 1, 1  # q^j and p^j
    for a in word:
        weight_next = weight * p
        t = (-(state * p + a) * pow(weight_next, -1, q)) % q
        residue += t * modulus
        state = ((state + t * weight) * p + a) // q
        modulus *= q
        weight = weight_next
    return residue


def frontier_at_depth(base, kind, j, cap=DEFAULT_FRONTIER_CAP):
    """
    States reached from 0 in exactly j steps, with the number of labels
    reaching each of them.

    Raises:
        FrontierCapExceeded: If a frontier holds more than cap states
    """
    frontier = Counter({0: 1})
    for depth in range(1, j + 1):
        following = Counter()
        for n, multiplicity in frontier.items():
            for _, m in successors(base, kind, n):
                following[m] += multiplicity
        if len(following) > cap:
            raise FrontierCapExceeded(depth, len(following), cap)
        frontier = following
        LOG.debug("base %s %s depth %d: %d states", base, kind.value, depth, len(frontier))
    return frontier


def count_states_at_depth(base, kind, j, cap=DEFAULT_FRONTIER_CAP):
    """Number of distinct length-j path labels from state 0."""
    return sum(frontier_at_depth(base, kind, j, cap).values())


def iter_labels(base, kind, length, start=0, cap=DEFAULT_FRONTIER_CAP):
    """
    Yield (word, end state) for every length-`length` path from start,
    in lexicographic order of the words.

    Raises:
        FrontierCapExceeded: If more than cap words would be produced
    """
    produced = 0
    stack = [((), start)]
    while stack:
        word, state = stack.pop()
        if len(word) == length:
            produced += 1
            if produced > cap:
                raise FrontierCapExceeded(length, produced, cap)
            yield word, state
            continue
        for a, m in reversed(successors(base, kind, state)):
            stack.append((word + (a,), m))


def levels(base, kind, depth, cap=DEFAULT_FRONTIER_CAP):
    """
    Distinct states grouped by the BFS depth at which they are first reached.

    Returns:
        list: one sorted list of states per depth 0..depth
    """
    seen = {0}
    layers = [[0]]
    for level in range(1, depth + 1):
        layer = set()
        for n in layers[-1]:
            for _, m in successors(base, kind, n):
                if m not in seen:
                    layer.add(m)
        seen |= layer
        if len(seen) > cap:
            raise FrontierCapExceeded(level, len(seen), cap)
        layers.append(sorted(layer))
    return layers
