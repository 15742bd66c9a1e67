"""
Spans, the refine interval-deletion procedure, measure and dimension bounds.

Endpoints of the intervals I_u are irrational in general; each one is
carried as a RealEnclosure computed from a truncation of depth k of the
relevant bottom or top word.
"""
import logging
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import List, Optional

import numpy as np

from .automata import (
    DEFAULT_FRONTIER_CAP,
    AutomatonKind,
    count_states_at_depth,
    encode,
    incoming_path,
    iter_labels,
    run,
    successors,
    tau,
)
from .errors import FrontierCapExceeded, InvalidWordError, RegimeError
from .extremal import bottom_prefix, span_word_prefix, top_prefix
from .words import RealEnclosure, eval_value, fraction_to_str, real_enclosure, word_to_json

LOG = logging.getLogger(__name__)

DEFAULT_ENCLOSURE_DEPTH = 40
DECIMAL_PRECISION = 30
PROVED = "proved"
CONJECTURE = "conjecture"


@dataclass(frozen=True)
class SpanRecord:
    n: int
    enclosure: RealEnclosure
    depth: int

    def to_dict(self):
        return {'n': str(self.n), 'depth': str(self.depth), **self.enclosure.to_dict()}


@dataclass(frozen=True)
class IntervalRecord:
    """
    The interval I_u of the values of the branches through u.

    lower encloses ρ(u·minword(n)) and upper encloses ρ(u·maxword(n)),
    where n is the state reached by u.
    """
    word: tuple
    n: int
    lower: RealEnclosure
    upper: RealEnclosure

    @property
    def outer(self):
        return RealEnclosure(self.lower.lo, self.upper.hi)

    @property
    def inner(self):
        if self.lower.hi > self.upper.lo:
            return None
        return RealEnclosure(self.lower.hi, self.upper.lo)

    def to_dict(self):
        return {
            'word': word_to_json(self.word),
            'n': str(self.n),
            'lower': self.lower.to_dict(),
            'upper': self.upper.to_dict(),
        }


@dataclass(frozen=True)
class RefinementRow:
    depth: int
    words: int
    measure: Fraction
    ratio: Fraction
    decay_bound: Optional[Fraction] = None

    def to_dict(self):
        return {
            'j': str(self.depth),
            'words': str(self.words),
            'outer_measure': fraction_to_str(self.measure),
            'ratio': fraction_to_str(self.ratio),
            'decay_bound': fraction_to_str(self.decay_bound) if self.decay_bound is not None else None,
        }


@dataclass(frozen=True)
class DimensionBound:
    name: str
    value: Decimal
    provenance: str


@dataclass(frozen=True)
class HausdorffBounds:
    ln2_over_lnz: DimensionBound
    digit_count_bound: DimensionBound
    conjecture_value: DimensionBound
    special_52: Optional[DimensionBound] = None

    def all(self):
        bounds = [self.ln2_over_lnz, self.digit_count_bound, self.conjecture_value]
        if self.special_52 is not None:
            bounds.append(self.special_52)
        return bounds

    @property
    def best_proved(self):
        return min((b for b in self.all() if b.provenance == PROVED), key=lambda b: b.value)


@dataclass(frozen=True)
class BoxCount:
    depth: int
    count: int
    radius: Fraction
    ratio: Optional[Decimal]


@dataclass(frozen=True)
class BranchWitness:
    """Two S_z branches from n whose values are certified to differ."""
    n: int
    prefix: tuple
    digit: int
    first: RealEnclosure
    second: RealEnclosure

    @property
    def disjoint(self):
        return self.first.is_disjoint(self.second)


@dataclass
class SmallBaseReport:
    max_length: int
    words_checked: int = 0
    issues: List[str] = field(default_factory=list)

    @property
    def passed(self):
        return not self.issues


def require_large(base, operation):
    if not base.is_large:
        raise RegimeError(f"{operation} needs a large base (p > 2q-1), got {base}")


def require_small(base, operation):
    if not base.is_small:
        raise RegimeError(f"{operation} needs a small base (p <= 2q-1), got {base}")


def span_enclosure(base, n, k=DEFAULT_ENCLOSURE_DEPTH):
    """Enclosure of span(n) = ρ(spanword(n)) from a k-prefix of the span word."""
    digits = base.span_digits
    prefix = span_word_prefix(base, n, k)
    return SpanRecord(n, real_enclosure(base, prefix, digits.start, digits.stop - 1), k)


def gamma_omega(base, k=DEFAULT_ENCLOSURE_DEPTH):
    """
    Enclosures of γ_z = ρ(q·minword(1)) and ω_z = ρ(maxword(0)).

    In large bases every span lies in [γ_z, ω_z].
    """
    gamma = real_enclosure(base, (base.q,) + bottom_prefix(base, 1, k), 0, base.q - 1)
    upper = base.upper_digits
    omega = real_enclosure(base, top_prefix(base, 0, k), upper.start, upper.stop - 1)
    return gamma, omega


def refine_words(base, j, cap=DEFAULT_FRONTIER_CAP):
    """X_j: the length-j labels of S_z runs from 0, in lexicographic order."""
    return [word for word, _ in iter_labels(base, AutomatonKind.SPAN, j, cap=cap)]


def interval_for(base, word, k=DEFAULT_ENCLOSURE_DEPTH):
    n = run(base, AutomatonKind.TREE, 0, word)
    if n is None:
        raise InvalidWordError(f"Word {list(word)} does not label a run of T_z from 0 in base {base}")
    word = tuple(word)
    lower = real_enclosure(base, word + bottom_prefix(base, n, k), 0, base.q - 1)
    upper = real_enclosure(base, word + top_prefix(base, n, k), base.middle_point, base.p - 1)
    return IntervalRecord(word, n, lower, upper)


def intervals_for(base, words, k=DEFAULT_ENCLOSURE_DEPTH):
    """
    IntervalRecord for each word.

    Raises:
        InvalidWordError: If a word does not label a run of T_z from 0
    """
    return [interval_for(base, word, k) for word in words]


def refine_intervals(base, j, k=DEFAULT_ENCLOSURE_DEPTH, cap=DEFAULT_FRONTIER_CAP):
    """
    The intervals kept by j refine steps from I_ε.

    Words of X_j with negative digits (small bases only) carry no interval.
    """
    words = [word for word in refine_words(base, j, cap) if all(d >= 0 for d in word)]
    return intervals_for(base, words, k)


def measure_outer(intervals):
    """
    Lebesgue measure of the union of outer hulls.

    Accepts IntervalRecord or RealEnclosure items.
    """
    hulls = sorted(
        (getattr(item, 'outer', item) for item in intervals), key=lambda hull: (hull.lo, hull.hi)
    )
    total = Fraction(0)
    current = None
    for hull in hulls:
        if current is None:
            current = [hull.lo, hull.hi]
        elif hull.lo <= current[1]:
            current[1] = max(current[1], hull.hi)
        else:
            total += current[1] - current[0]
            current = [hull.lo, hull.hi]
    if current is not None:
        total += current[1] - current[0]
    return total


def contraction_exponent(base):
    """Smallest i >= 1 with floor(z)^i >= 2q."""
    require_large(base, "contraction_exponent")
    i = 1
    while base.floor_z ** i < 2 * base.q:
        i += 1
    return i


def alpha_contraction(base, k=DEFAULT_ENCLOSURE_DEPTH):
    """
    The contraction parameters (i, α) with α = 1 - z^-i·γ_z/ω_z.

    i refine steps shrink the measure of every I_u by at least the factor α.

    Raises:
        RegimeError: If the base is small
    """
    require_large(base, "alpha_contraction")
    i = contraction_exponent(base)
    gamma, omega = gamma_omega(base, k)
    scale = base.z ** -i
    alpha = RealEnclosure(1 - scale * gamma.hi / omega.lo, 1 - scale * gamma.lo / omega.hi)
    LOG.debug("base %s: i=%d, alpha <= %s", base, i, float(alpha.hi))
    return i, alpha


def refinement_table(base, j_max, k=DEFAULT_ENCLOSURE_DEPTH, contraction=False, cap=DEFAULT_FRONTIER_CAP):
    """
    Outer measure of U_j for j = 0..j_max.

    With contraction, rows at multiples of i carry the bound α^(j/i)·ℓ(U_0).

    Raises:
        RegimeError: If contraction is requested in a small base
    """
    i = alpha = None
    if contraction:
        i, alpha = alpha_contraction(base, k)
    rows = []
    initial = None
    for j in range(j_max + 1):
        measure = measure_outer(refine_intervals(base, j, k, cap))
        if initial is None:
            initial = measure
        bound = None
        if contraction and j % i == 0:
            bound = alpha.hi ** (j // i) * initial
        rows.append(
            RefinementRow(
                depth=j,
                words=count_states_at_depth(base, AutomatonKind.SPAN, j, cap),
                measure=measure,
                ratio=measure / initial,
                decay_bound=bound,
            )
        )
    return rows


def _ln(value):
    value = Fraction(value)
    return Decimal(value.numerator).ln() - Decimal(value.denominator).ln()


def hausdorff_upper_bounds(base, precision=DECIMAL_PRECISION):
    """
    Upper bounds on the Hausdorff dimension of the closure of the span set,
    and the conjectured value.

    Raises:
        RegimeError: If the base is small
    """
    require_large(base, "hausdorff_upper_bounds")
    p, q = base.p, base.q
    with localcontext() as ctx:
        ctx.prec = precision
        ln_z = _ln(base.z)
        ln_d = Decimal(2 * q - 1).ln()
        bounds = HausdorffBounds(
            ln2_over_lnz=DimensionBound("ln2/ln z", Decimal(2).ln() / ln_z, PROVED),
            digit_count_bound=DimensionBound("ln(2q-1)/ln p", ln_d / Decimal(p).ln(), PROVED),
            conjecture_value=DimensionBound(
                "(ln(2q-1)-ln q)/(ln p-ln q)", (ln_d - Decimal(q).ln()) / ln_z, CONJECTURE
            ),
            special_52=(
                DimensionBound("ln3/(2 ln 5/2)", Decimal(3).ln() / (2 * ln_z), PROVED)
                if (p, q) == (5, 2) else None
            ),
        )
    return bounds


def box_counting_estimate(base, j_max, k=DEFAULT_ENCLOSURE_DEPTH, cap=DEFAULT_FRONTIER_CAP,
                          precision=DECIMAL_PRECISION):
    """
    Box-counting sequence ln N_j / ln(1/r_j) with r_j = ω_z·z^-j.

    Every I_u with |u| = j has length below r_j, so N_j = |X_j| intervals of
    length r_j cover the closure of the span set.

    Raises:
        RegimeError: If the base is small
        FrontierCapExceeded: If X_j grows past cap
    """
    require_large(base, "box_counting_estimate")
    _, omega = gamma_omega(base, k)
    rows = []
    with localcontext() as ctx:
        ctx.prec = precision
        for j in range(j_max + 1):
            count = count_states_at_depth(base, AutomatonKind.SPAN, j, cap)
            radius = omega.hi * base.z ** -j
            ratio = None
            if j > 0:
                denominator = -_ln(radius)
                if denominator > 0:
                    ratio = Decimal(count).ln() / denominator
            rows.append(BoxCount(j, count, radius, ratio))
    return rows


def box_counting_fit(rows):
    """Least-squares slope of ln N_j against ln(1/r_j), or None with fewer than two points."""
    points = [(-float(_ln(row.radius)), float(Decimal(row.count).ln())) for row in rows if row.ratio is not None]
    if len(points) < 2:
        return None
    xs, ys = np.array(points).T
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def _iter_runs(base, kind, max_length, cap):
    produced = 0
    stack = [((), 0)]
    while stack:
        word, state = stack.pop()
        produced += 1
        if produced > cap:
            raise FrontierCapExceeded(len(word), produced, cap)
        yield word, state
        if len(word) < max_length:
            for a, m in reversed(successors(base, kind, state)):
                stack.append((word + (a,), m))


def small_base_checks(base, max_length, cap=DEFAULT_FRONTIER_CAP):
    """
    In a small base, check that S_z brings no new values or shorter words.

    For every S_z word u from 0 with |u| <= max_length: the representation
    of π(u) is no longer than u, and 0^i<π(u)> is a T_z word of the same
    length and value.

    Raises:
        RegimeError: If the base is large
    """
    require_small(base, "small_base_checks")
    report = SmallBaseReport(max_length)
    for word, state in _iter_runs(base, AutomatonKind.SPAN, max_length, cap):
        report.words_checked += 1
        if eval_value(base, word) != state:
            report.issues.append(f"{list(word)}: run ends in {state}, value is {eval_value(base, word)}")
            continue
        representation = encode(base, state)
        if len(representation) > len(word):
            report.issues.append(f"{list(word)}: <{state}> has length {len(representation)}")
            continue
        padded = (0,) * (len(word) - len(representation)) + representation
        if run(base, AutomatonKind.TREE, 0, padded) != state:
            report.issues.append(f"{list(word)}: padded representation does not reach {state}")
    LOG.debug("small-base checks %s: %d words", base, report.words_checked)
    return report


def branch_divergence_witness(base, n, k=DEFAULT_ENCLOSURE_DEPTH, search_limit=10_000):
    """
    Two S_z branches from n with distinct values.

    Follows maxword(n) to its first digit a > p-q, then branches on a-q and
    continues with maxword(m-1). The two values differ by z^-|ua|·span(m).

    Raises:
        RegimeError: If the base is small
    """
    require_large(base, "branch_divergence_witness")
    upper = base.upper_digits
    prefix = []
    state = n
    for _ in range(search_limit):
        a = upper.start + (-state * base.p - upper.start) % base.q
        target = tau(base, state, a)
        if a > base.middle_point:
            break
        prefix.append(a)
        state = target
    else:
        raise RuntimeError(f"No digit above {base.middle_point} in the first {search_limit} letters of maxword({n})")
    prefix = tuple(prefix)
    dmin, dmax = upper.start, upper.stop - 1
    first = real_enclosure(base, prefix + (a,) + top_prefix(base, target, k), dmin, dmax)
    second = real_enclosure(base, prefix + (a - base.q,) + top_prefix(base, target - 1, k), dmin, dmax)
    return BranchWitness(n, prefix, a, first, second)


def digit_count_word_bound(base, i):
    """
    Upper bound Σ x_m (2q-1)^m on |X_i|, the x_m being the base-p digits
    of the number of length-i words of pref(W_z).
    """
    words = run(base, AutomatonKind.TREE, 0, top_prefix(base, 0, i)) + 1
    bound, weight = 0, 1
    while words:
        words, digit = divmod(words, base.p)
        bound += digit * weight
        weight *= 2 * base.q - 1
    return bound


def incoming_labels_in_span_alphabet(base, start, j, length=None):
    """
    Number of states m in [start, start + p^j) whose incoming path of the
    given length (default j) is written with digits of D_z only.
    """
    length = j if length is None else length
    digits = base.span_digits
    return sum(
        1
        for m in range(start, start + base.p ** j)
        if all(d in digits for d in incoming_path(base, m, length))
    )
