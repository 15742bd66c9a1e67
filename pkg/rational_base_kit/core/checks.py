"""
Named invariant suites.

Each suite returns a SuiteResult with a health status: 'green' when every
case passed, 'red' when one failed, 'amber' when the suite does not apply
to the base (regime-specific suites) or has nothing to check.
"""
import json
import logging
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import List

from .automata import (
    DEFAULT_FRONTIER_CAP,
    AutomatonKind,
    count_states_at_depth,
    encode,
    incoming_path,
    iter_labels,
    predecessor,
    run,
    successors,
    tau,
)
from .base import Base
from .extremal import (
    bottom_prefix,
    mu,
    mu_word,
    shifted_span_prefix,
    span_word_prefix,
    span_word_witness,
    top_prefix,
)
from .spans import (
    alpha_contraction,
    digit_count_word_bound,
    box_counting_estimate,
    branch_divergence_witness,
    gamma_omega,
    hausdorff_upper_bounds,
    incoming_labels_in_span_alphabet,
    interval_for,
    measure_outer,
    refine_words,
    refinement_table,
    small_base_checks,
    span_enclosure,
)
from .transducer import PairLetter, delta_D, psi, transduce, transduce_inverse
from .words import (
    Order,
    eval_real_prefix,
    eval_value,
    fraction_from_str,
    radix_compare,
    real_enclosure,
    word_from_str,
)

LOG = logging.getLogger(__name__)

GREEN = 'green'
AMBER = 'amber'
RED = 'red'
MAX_ISSUES = 20

WORKED_EXAMPLES_PATH = Path(__file__).parent / "worked_examples.json"


def load_worked_examples(path=WORKED_EXAMPLES_PATH):
    """
    Worked examples keyed by base ("p/q"), then by section.

    Keys and numbers are JSON strings, pairs are two-element lists.
    """
    return json.loads(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class CheckParams:
    """Sizes used by the suites; the defaults are the acceptance sizes."""
    n_max: int = 2000
    order_n_max: int = 5000
    mu_n_max: int = 5000
    prefix_len: int = 64
    width_tolerance: Fraction = Fraction(1, 10 ** 6)
    shift_max: int = 50
    shift_n_max: int = 500
    shift_prefix_len: int = 32
    word_len: int = 8
    extremal_n_max: int = 30
    congruence_len: int = 4
    congruence_n_max: int = 2000
    interval_depth: int = 6
    small_base_len: int = 12
    refine_depth: int = 9
    enclosure_depth: int = 40
    positivity_n_max: int = 1000
    witness_n_max: int = 200
    dimension_depths: tuple = (10, 14)
    dimension_tolerance: Decimal = Decimal("0.05")
    window_count: int = 50
    window_lengths: tuple = (1, 2)
    samples: int = 10_000
    seed: int = 7
    frontier_cap: int = DEFAULT_FRONTIER_CAP

    @classmethod
    def quick(cls, **overrides):
        """Reduced sizes for smoke runs and tests."""
        sizes = dict(
            n_max=200, order_n_max=500, mu_n_max=500, prefix_len=32, width_tolerance=Fraction(1, 100),
            shift_max=6, shift_n_max=40, shift_prefix_len=16, word_len=5, extremal_n_max=8,
            congruence_len=3, congruence_n_max=200, interval_depth=3, small_base_len=8, refine_depth=6,
            positivity_n_max=100, witness_n_max=30, dimension_depths=(10, 11), window_count=20,
            samples=300,
        )
        sizes.update(overrides)
        return cls(**sizes)


@dataclass
class SuiteResult:
    name: str
    status: str = GREEN
    checked: int = 0
    issues: List[str] = field(default_factory=list)
    note: str = ""
    elapsed: float = 0.0

    def expect(self, condition, message):
        """Count one case; record message and turn red when condition is false."""
        self.checked += 1
        if not condition:
            self.status = RED
            if len(self.issues) < MAX_ISSUES:
                self.issues.append(message)
        return condition

    def skip(self, reason):
        self.status = AMBER
        self.note = reason
        return self

    def to_dict(self):
        return {
            'status': self.status,
            'issues': list(self.issues),
            'checked': str(self.checked),
            'note': self.note,
        }


def check_examples(base, params):
    examples = load_worked_examples().get(str(base))
    result = SuiteResult("examples")
    if not examples:
        return result.skip(f"no worked examples for base {base}")
    for n, text in examples.get('bottom', {}).items():
        result.expect(bottom_prefix(base, int(n), len(text)) == word_from_str(text), f"minword({n}) != {text}")
    for n, text in examples.get('top', {}).items():
        result.expect(top_prefix(base, int(n), len(text)) == word_from_str(text), f"maxword({n}) != {text}")
    for n, text in examples.get('span', {}).items():
        result.expect(span_word_prefix(base, int(n), len(text)) == word_from_str(text), f"spanword({n}) != {text}")
    for n, text in examples.get('encode', {}).items():
        result.expect(encode(base, int(n)) == word_from_str(text), f"<{n}> != {text!r}")
    for text, value in examples.get('value', {}).items():
        result.expect(eval_value(base, word_from_str(text)) == fraction_from_str(value), f"value of {text} != {value}")
    for text, value in examples.get('real_prefix', {}).items():
        result.expect(
            eval_real_prefix(base, word_from_str(text)) == fraction_from_str(value), f"ρ({text}0^ω) != {value}"
        )
    for j, count in examples.get('span_states', {}).items():
        result.expect(
            count_states_at_depth(base, AutomatonKind.SPAN, int(j)) == int(count), f"|X_{j}| != {count}"
        )
    for d, pairs in examples.get('psi', {}).items():
        expected = {tuple(pair) for pair in pairs}
        result.expect(set(psi(base, int(d))) == expected, f"psi({d}) != {sorted(expected)}")
    for c, image in examples.get('mu', {}).items():
        result.expect(mu(base, int(c)) == int(image), f"mu({c}) != {image}")
    for n, pairs in examples.get('span_successors', {}).items():
        expected = [tuple(pair) for pair in pairs]
        result.expect(
            successors(base, AutomatonKind.SPAN, int(n)) == expected, f"S_z successors of {n} != {expected}"
        )
    return result


def check_representation(base, params):
    result = SuiteResult("representation")
    for n in range(params.n_max + 1):
        result.expect(eval_value(base, encode(base, n)) == n, f"value of <{n}> is not {n}")
    previous = encode(base, 0)
    for n in range(1, params.order_n_max + 1):
        current = encode(base, n)
        result.expect(radix_compare(previous, current) is Order.LESS, f"<{n - 1}> is not radix-less than <{n}>")
        previous = current
    for length in range(params.word_len + 1):
        for word, state in iter_labels(base, AutomatonKind.TREE, length, cap=params.frontier_cap):
            result.expect(eval_value(base, word) == state, f"run of {list(word)} ends in {state}")
    counts = {base.floor_z, -(-base.p // base.q)}
    for n in range(params.n_max + 1):
        tree = successors(base, AutomatonKind.TREE, n)
        result.expect(len(tree) in counts, f"state {n} has {len(tree)} successors in T_z")
        result.expect(bool(successors(base, AutomatonKind.SPAN, n)), f"state {n} is a dead end in S_z")
        for a, m in tree:
            result.expect(predecessor(base, m) == (n, a), f"predecessor of {m} is not ({n}, {a})")
    return result


def check_congruences(base, params):
    result = SuiteResult("congruences")
    k = params.congruence_len
    p, q = base.p, base.q
    starts = {}
    for n in range(params.congruence_n_max + 1):
        for length in range(1, k + 1):
            for word, state in iter_labels(base, AutomatonKind.TREE, length, start=n, cap=params.frontier_cap):
                if state == n:
                    result.expect(
                        n == 0 and not any(word), f"path {list(word)} loops on state {n}"
                    )
                if length == k:
                    starts.setdefault(word, []).append(n)
    modulus = q ** k
    for word, found in starts.items():
        residues = {n % modulus for n in found}
        if not result.expect(len(residues) == 1, f"starts of {list(word)} span {len(residues)} classes"):
            continue
        residue = residues.pop()
        expected = list(range(residue, params.congruence_n_max + 1, modulus))
        result.expect(found == expected, f"starts of {list(word)} are not the class {residue} mod {modulus}")

    past = min(k, 3)
    modulus = p ** past
    by_residue, by_label = {}, {}
    for m in range(params.congruence_n_max + 1):
        label = incoming_path(base, m, past)
        by_residue.setdefault(m % modulus, set()).add(label)
        by_label.setdefault(label, set()).add(m % modulus)
    for residue, labels in by_residue.items():
        result.expect(len(labels) == 1, f"class {residue} mod {modulus} has {len(labels)} incoming labels")
    for label, residues in by_label.items():
        result.expect(len(residues) == 1, f"incoming label {list(label)} covers {len(residues)} classes")

    step = max(1, params.congruence_n_max // 20)
    for start in range(0, params.congruence_n_max + 1, step):
        labels = {incoming_path(base, m, past) for m in range(start, start + modulus)}
        result.expect(len(labels) == modulus, f"window at {start} has {len(labels)} incoming labels")
    return result


def check_extremal(base, params):
    result = SuiteResult("extremal")
    k = params.prefix_len
    lower, upper = base.lower_digits, base.upper_digits
    bottoms = [bottom_prefix(base, n, k) for n in range(max(params.n_max, params.mu_n_max) + 2)]
    for n in range(params.mu_n_max + 1):
        result.expect(
            mu_word(base, top_prefix(base, n, k)) == bottoms[n + 1], f"mu(maxword({n})) != minword({n + 1})"
        )
    for n in range(params.n_max + 1):
        top = top_prefix(base, n, k)
        result.expect(all(d in lower for d in bottoms[n]), f"minword({n}) leaves B_q")
        result.expect(all(d in upper for d in top), f"maxword({n}) leaves C_z")
        span = tuple(t - b for t, b in zip(top, bottoms[n]))
        result.expect(run(base, AutomatonKind.SPAN, 0, span) is not None, f"spanword({n}) is not an S_z run")

    for i in range(params.shift_max + 1):
        for n in range(params.shift_n_max + 1):
            word = shifted_span_prefix(base, n, i, params.shift_prefix_len)
            result.expect(
                run(base, AutomatonKind.SPAN, i, word) is not None,
                f"maxword({n + i}) - minword({n}) is not an S_z run from {i}",
            )

    length = params.word_len
    for n in range(params.extremal_n_max + 1):
        labels = [word for word, _ in iter_labels(base, AutomatonKind.TREE, length, start=n, cap=params.frontier_cap)]
        result.expect(labels[0] == bottom_prefix(base, n, length), f"minword({n}) is not the smallest path")
        result.expect(labels[-1] == top_prefix(base, n, length), f"maxword({n}) is not the largest path")

    dmin, dmax = base.middle_point, base.p - 1
    for n in range(params.extremal_n_max + 1):
        for a, m in successors(base, AutomatonKind.TREE, n):
            if a + base.q >= base.p:
                continue
            shifted = real_enclosure(base, (a + base.q,) + bottom_prefix(base, m + 1, k), 0, base.q - 1)
            direct = real_enclosure(base, (a,) + top_prefix(base, m, k), dmin, dmax)
            result.expect(shifted.intersects(direct), f"({a + base.q})minword({m + 1}) and ({a})maxword({m}) split")
            result.expect(
                shifted.width < params.width_tolerance and direct.width < params.width_tolerance,
                f"enclosures of ({a})maxword({m}) are wider than {params.width_tolerance} at depth {k}",
            )

    for length in range(min(params.word_len, 6) + 1):
        for word in refine_words(base, length, params.frontier_cap):
            n = span_word_witness(base, word)
            result.expect(span_word_prefix(base, n, length) == word, f"witness {n} fails for {list(word)}")
    return result


def check_transducer(base, params):
    result = SuiteResult("transducer")
    k = params.prefix_len
    bottoms = [bottom_prefix(base, n, k) for n in range(params.n_max + 2)]
    for n in range(params.n_max + 1):
        result.expect(transduce(base, 0, bottoms[n]) == bottoms[n + 1], f"D_z maps minword({n}) wrongly")

    k = params.shift_prefix_len
    shifted = [bottom_prefix(base, n, k) for n in range(params.shift_n_max + params.shift_max + 2)]
    for i in range(params.shift_max + 1):
        for n in range(params.shift_n_max + 1):
            result.expect(
                transduce(base, i, shifted[n]) == shifted[n + i + 1], f"D_(z,{i}) maps minword({n}) wrongly"
            )

    lower = base.lower_digits
    for n in range(params.n_max + 1):
        for x in lower:
            inputs = [b for b in lower if delta_D(base, n, PairLetter(b, x)) is not None]
            outputs = [b for b in lower if delta_D(base, n, PairLetter(x, b)) is not None]
            result.expect(len(inputs) == 1, f"state {n}: {len(inputs)} transitions output {x}")
            result.expect(len(outputs) == 1, f"state {n}: {len(outputs)} transitions read {x}")
    for n in range(min(params.n_max, 200) + 1):
        for d in base.span_digits:
            target = tau(base, n, d)
            for letter in psi(base, d):
                result.expect(delta_D(base, n, letter) == target, f"state {n}: {letter} does not follow psi({d})")

    rng = random.Random(params.seed)
    for _ in range(min(params.samples, 500)):
        i = rng.randrange(params.shift_max + 1)
        word = tuple(rng.randrange(base.q) for _ in range(params.shift_prefix_len))
        image = transduce(base, i, word)
        result.expect(transduce_inverse(base, i, image) == word, f"inverse fails on {list(word)} from {i}")
        cut = rng.randrange(len(word) + 1)
        result.expect(transduce(base, i, word[:cut]) == image[:cut], "image of a prefix is not a prefix")
    return result


def check_behaviour(base, params):
    """
    Finite behaviour of T_z and S_z against their ω-labels.

    Every prefix of minword(n), maxword(n) (from n) and spanword(n) (from 0)
    must be accepted, and every accepted word from 0 must extend to the
    prefix of an ω-label.
    """
    result = SuiteResult("behaviour")
    k = params.shift_prefix_len
    for n in range(params.shift_n_max + 1):
        labels = (
            ("minword", AutomatonKind.TREE, n, bottom_prefix(base, n, k)),
            ("maxword", AutomatonKind.TREE, n, top_prefix(base, n, k)),
            ("spanword", AutomatonKind.SPAN, 0, span_word_prefix(base, n, k)),
        )
        for name, kind, start, word in labels:
            rejected = [j for j in range(k + 1) if run(base, kind, start, word[:j]) is None]
            result.expect(not rejected, f"{name}({n}) has rejected prefixes of lengths {rejected[:5]}")

    for length in range(min(params.word_len, 6) + 1):
        for word, state in iter_labels(base, AutomatonKind.TREE, length, cap=params.frontier_cap):
            extended = word + bottom_prefix(base, state, k)
            result.expect(
                run(base, AutomatonKind.TREE, 0, extended) is not None, f"{list(word)} does not extend in T_z"
            )
        for word, _ in iter_labels(base, AutomatonKind.SPAN, length, cap=params.frontier_cap):
            n = span_word_witness(base, word)
            result.expect(
                span_word_prefix(base, n, length + k)[:length] == word,
                f"{list(word)} is not a prefix of a span word",
            )
    return result


def check_small_base(base, params):
    result = SuiteResult("small-base")
    if not base.is_small:
        return result.skip(f"base {base} is large")
    report = small_base_checks(base, params.small_base_len, params.frontier_cap)
    result.checked = report.words_checked
    if not report.passed:
        result.status = RED
        result.issues = report.issues[:MAX_ISSUES]
    return result


def check_intervals(base, params):
    result = SuiteResult("intervals")
    k = params.enclosure_depth
    for length in range(params.interval_depth + 1):
        records = []
        for word, n in iter_labels(base, AutomatonKind.TREE, length, cap=params.frontier_cap):
            parent = interval_for(base, word, k)
            records.append(parent)
            digits = [a for a, _ in successors(base, AutomatonKind.TREE, n)]
            hulls = [interval_for(base, word + (a,), k).outer for a in digits]
            slack = parent.lower.width + parent.upper.width + sum(h.width for h in hulls)
            for a, hull in zip(digits, hulls):
                result.expect(
                    parent.outer.lo - slack <= hull.lo and hull.hi <= parent.outer.hi + slack,
                    f"I_{list(word) + [a]} is not inside I_{list(word)}",
                )
            low = min(h.lo for h in hulls)
            high = max(h.hi for h in hulls)
            result.expect(measure_outer(hulls) == high - low, f"children of I_{list(word)} leave a gap")
            result.expect(
                low <= parent.lower.hi and parent.upper.lo <= high, f"children of I_{list(word)} miss an end"
            )
        # labels come in lexicographic order; ρ must not reverse it
        for left, right in zip(records, records[1:]):
            result.expect(
                left.upper.lo <= right.lower.hi, f"ρ reverses the order of {list(left.word)} and {list(right.word)}"
            )
    return result


def check_measure(base, params):
    result = SuiteResult("measure")
    if not base.is_large:
        return result.skip(f"base {base} is small, the span set closure is an interval")
    rows = refinement_table(
        base, params.refine_depth, params.enclosure_depth, contraction=True, cap=params.frontier_cap
    )
    _, alpha = alpha_contraction(base, params.enclosure_depth)
    result.expect(alpha.hi < 1, f"alpha upper bound {alpha.hi} is not below 1")
    for previous, row in zip(rows, rows[1:]):
        result.expect(row.measure <= previous.measure, f"outer measure grows at depth {row.depth}")
    for row in rows[1:]:
        if row.decay_bound is not None:
            result.expect(row.measure < row.decay_bound, f"no geometric decay at depth {row.depth}")
    return result


def check_positivity(base, params):
    result = SuiteResult("positivity")
    if not base.is_large:
        return result.skip(f"base {base} is small, spans may vanish")
    gamma, omega = gamma_omega(base, params.enclosure_depth)
    result.expect(gamma.lo > 0, "gamma lower bound is not positive")
    result.expect(gamma.hi <= omega.lo, "gamma and omega enclosures are not ordered")
    for n in range(params.positivity_n_max + 1):
        enclosure = span_enclosure(base, n, params.enclosure_depth).enclosure
        result.expect(enclosure.lo > 0, f"span({n}) is not certified positive")
        result.expect(
            gamma.lo <= enclosure.lo and enclosure.hi <= omega.hi, f"span({n}) escapes [gamma, omega]"
        )
    for n in range(params.witness_n_max + 1):
        witness = branch_divergence_witness(base, n, params.enclosure_depth)
        result.expect(witness.disjoint, f"branches from {n} are not separated")
    return result


def check_dimension(base, params):
    result = SuiteResult("dimension")
    if not base.is_large:
        return result.skip(f"base {base} is small, the span set closure is an interval")
    low, high = params.dimension_depths
    bounds = hausdorff_upper_bounds(base)
    limit = bounds.ln2_over_lnz.value + params.dimension_tolerance
    rows = box_counting_estimate(base, high, params.enclosure_depth, params.frontier_cap)
    for row in rows[low:]:
        result.expect(row.ratio is not None and row.ratio <= limit, f"box ratio at depth {row.depth} exceeds {limit}")
    for row in rows:
        result.expect(row.count <= 2 ** row.depth, f"|X_{row.depth}| exceeds 2^{row.depth}")
        result.expect(
            row.count <= digit_count_word_bound(base, row.depth), f"|X_{row.depth}| exceeds the digit-count bound"
        )
    for bound in bounds.all():
        result.expect(0 < bound.value < 1, f"{bound.name} = {bound.value} is not in (0, 1)")
    result.expect(
        bounds.conjecture_value.value <= bounds.best_proved.value, "conjectured value exceeds a proved bound"
    )
    for j in params.window_lengths:
        for start in range(params.window_count):
            count = incoming_labels_in_span_alphabet(base, start, j)
            result.expect(count <= (2 * base.q - 1) ** j, f"window at {start} has {count} labels over D_z")
    return result


def check_enclosure(base, params):
    result = SuiteResult("enclosure")
    rng = random.Random(params.seed)
    digits = base.span_digits
    for _ in range(params.samples):
        n = rng.randrange(5000)
        k = rng.randrange(params.enclosure_depth + 1)
        word = span_word_prefix(base, n, k + 10)
        enclosure = real_enclosure(base, word[:k], digits.start, digits.stop - 1)
        refined = real_enclosure(base, word, digits.start, digits.stop - 1)
        result.expect(refined.within(enclosure), f"spanword({n}) leaves its {k}-enclosure")
        following = real_enclosure(base, word[:k + 1], digits.start, digits.stop - 1)
        result.expect(following.width < enclosure.width, f"enclosure width does not shrink at {k}")
    return result


SUITES = {
    'examples': check_examples,
    'representation': check_representation,
    'congruences': check_congruences,
    'extremal': check_extremal,
    'transducer': check_transducer,
    'behaviour': check_behaviour,
    'small-base': check_small_base,
    'intervals': check_intervals,
    'measure': check_measure,
    'positivity': check_positivity,
    'dimension': check_dimension,
    'enclosure': check_enclosure,
}


def run_suite(base, name, params):
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"Unknown suite: {name}. Valid suites: {', '.join(SUITES)}") from None
    started = time.perf_counter()
    try:
        result = suite(base, params)
    except Exception as e:
        LOG.exception("suite %s crashed on base %s", name, base)
        result = SuiteResult(name, status=RED, issues=[f"{type(e).__name__}: {e}"])
    result.elapsed = time.perf_counter() - started
    LOG.info("suite %s on %s: %s (%d cases, %.2fs)", name, base, result.status, result.checked, result.elapsed)
    return result


def run_suites(base, names=None, params=None, workers=1):
    """
    Run the named suites (all by default) on a bounded worker pool.

    Returns:
        list: SuiteResult per suite, in the order of names
    """
    if not isinstance(base, Base):
        raise TypeError(f"Expected a Base, got {base!r}")
    names = list(SUITES) if names is None else list(names)
    for name in names:
        if name not in SUITES:
            raise ValueError(f"Unknown suite: {name}. Valid suites: {', '.join(SUITES)}")
    params = params or CheckParams()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        return list(pool.map(lambda name: run_suite(base, name, params), names))


def overall_status(results):
    """Combine suite statuses: any red is red, else any amber is amber."""
    statuses = {result.status for result in results}
    if RED in statuses:
        return RED
    if AMBER in statuses:
        return AMBER
    return GREEN
