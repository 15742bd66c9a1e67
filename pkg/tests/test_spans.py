# tests/test_spans.py
import pytest
from decimal import Decimal
from fractions import Fraction

from rational_base_kit.core.automata import AutomatonKind, count_states_at_depth, iter_labels
from rational_base_kit.core.base import Base
from rational_base_kit.core.errors import InvalidWordError, RegimeError
from rational_base_kit.core.spans import (
    IntervalRecord,
    alpha_contraction,
    digit_count_word_bound,
    box_counting_estimate,
    box_counting_fit,
    branch_divergence_witness,
    contraction_exponent,
    gamma_omega,
    hausdorff_upper_bounds,
    incoming_labels_in_span_alphabet,
    interval_for,
    intervals_for,
    measure_outer,
    refine_intervals,
    refine_words,
    refinement_table,
    small_base_checks,
    span_enclosure,
)
from rational_base_kit.core.words import RealEnclosure


@pytest.mark.parametrize("p, q", [(7, 3), (5, 2), (10, 3)])
def test_span_enclosure(p, q):
    """Test that spans of a large base are positive and lie in [γ_z, ω_z]."""
    base = Base(p, q)
    gamma, omega = gamma_omega(base, 40)
    for n in range(50):
        record = span_enclosure(base, n, 40)
        assert record.n == n
        assert record.depth == 40
        assert record.enclosure.lo > 0
        assert gamma.lo <= record.enclosure.lo
        assert record.enclosure.hi <= omega.hi
    assert set(span_enclosure(base, 3, 10).to_dict()) == {'n', 'depth', 'lo', 'hi'}


@pytest.mark.parametrize("p, q", [(7, 3), (5, 2), (10, 3)])
def test_gamma_omega(p, q):
    """Test that 0 < γ_z < ω_z."""
    gamma, omega = gamma_omega(Base(p, q), 30)
    assert gamma.lo > 0
    assert gamma.hi < omega.lo


def test_refine_words(base73):
    """Test the S_z words of length 2 in lexicographic order."""
    assert refine_words(base73, 0) == [()]
    assert refine_words(base73, 2) == [(3, 2), (3, 5), (6, 4)]


def test_interval_for(base73):
    """Test that I_u runs from its bottom end to its top end."""
    record = interval_for(base73, (3, 2), 20)
    assert isinstance(record, IntervalRecord)
    assert record.n == 3
    assert record.outer == RealEnclosure(record.lower.lo, record.upper.hi)
    assert record.inner is not None
    assert record.lower.hi <= record.upper.lo


@pytest.mark.parametrize("p, q", [(3, 2), (7, 3), (4, 3)])
def test_interval_order_follows_words(p, q):
    """Test that ρ preserves the lexicographic order of same-length T_z words."""
    base = Base(p, q)
    for length in range(1, 6):
        words = [word for word, _ in iter_labels(base, AutomatonKind.TREE, length)]
        assert words == sorted(words)
        records = intervals_for(base, words, 30)
        for left, right in zip(records, records[1:]):
            assert left.upper.lo <= right.lower.hi
            assert left.lower.lo <= right.lower.hi


def test_intervals_for_rejects_non_tree_word(base43):
    """Test that words with digits outside A_p carry no interval."""
    with pytest.raises(InvalidWordError):
        intervals_for(base43, [(3, -1)])


def test_small_base_refine_skips_negative_words(base43):
    """Test that refine keeps only the T_z words of X_j."""
    assert refine_words(base43, 2) == [(0, 0), (0, 3), (3, -1), (3, 2)]
    assert [record.word for record in refine_intervals(base43, 2, 20)] == [(0, 0), (0, 3), (3, 2)]


def test_measure_outer():
    """Test the measure of a union of overlapping and disjoint intervals."""
    intervals = [
        RealEnclosure(Fraction(3), Fraction(4)),
        RealEnclosure(Fraction(0), Fraction(1)),
        RealEnclosure(Fraction(1, 2), Fraction(2)),
    ]
    assert measure_outer(intervals) == 3
    assert measure_outer([]) == 0


def test_contraction_exponent(base73, base52, base32):
    """Test the smallest i with floor(z)^i >= 2q."""
    assert contraction_exponent(base73) == 3
    assert contraction_exponent(base52) == 2
    with pytest.raises(RegimeError):
        contraction_exponent(base32)


def test_alpha_contraction(base73):
    """Test that the contraction factor is certified below 1."""
    i, alpha = alpha_contraction(base73, 30)
    assert i == 3
    assert 0 < alpha.lo <= alpha.hi < 1


def test_alpha_contraction_small_base(base43):
    """Test that the contraction needs a large base."""
    with pytest.raises(RegimeError):
        alpha_contraction(base43)


def test_refinement_table_large_base(base73):
    """Test that the outer measure decreases and decays geometrically."""
    rows = refinement_table(base73, 6, 30, contraction=True)
    assert [row.depth for row in rows] == list(range(7))
    assert rows[0].ratio == 1
    assert [row.words for row in rows[:3]] == [1, 2, 3]
    for previous, row in zip(rows, rows[1:]):
        assert row.measure <= previous.measure
    assert rows[1].decay_bound is None
    for row in (rows[3], rows[6]):
        assert row.decay_bound is not None
        assert row.measure < row.decay_bound


def test_refinement_table_small_base(base43):
    """Test that refine keeps the whole hull in a small base."""
    rows = refinement_table(base43, 3, 30)
    for row in rows:
        assert row.measure > rows[0].measure * Fraction(999, 1000)
    with pytest.raises(RegimeError):
        refinement_table(base43, 3, 30, contraction=True)


def test_hausdorff_upper_bounds(base73):
    """Test the dimension bounds of base 7/3."""
    bounds = hausdorff_upper_bounds(base73)
    assert Decimal("0.8180") < bounds.ln2_over_lnz.value < Decimal("0.8181")
    assert Decimal("0.8270") < bounds.digit_count_bound.value < Decimal("0.8271")
    assert Decimal("0.6028") < bounds.conjecture_value.value < Decimal("0.6029")
    assert bounds.special_52 is None
    assert bounds.best_proved is bounds.ln2_over_lnz
    assert bounds.conjecture_value.provenance == "conjecture"


def test_hausdorff_upper_bounds_five_halves(base52):
    """Test that base 5/2 carries its sharper proved bound."""
    bounds = hausdorff_upper_bounds(base52)
    assert Decimal("0.5994") < bounds.special_52.value < Decimal("0.5995")
    assert bounds.best_proved is bounds.special_52
    assert len(bounds.all()) == 4


def test_hausdorff_upper_bounds_small_base(base32):
    """Test that dimension bounds need a large base."""
    with pytest.raises(RegimeError):
        hausdorff_upper_bounds(base32)


def test_box_counting_estimate(base73):
    """Test box counts, radii and the ratio bound at depth 10."""
    rows = box_counting_estimate(base73, 10, 30)
    _, omega = gamma_omega(base73, 30)
    assert rows[0].ratio is None
    for row in rows:
        assert row.count == count_states_at_depth(base73, AutomatonKind.SPAN, row.depth)
        assert row.count <= 2 ** row.depth
        assert row.radius == omega.hi * base73.z ** -row.depth
    limit = hausdorff_upper_bounds(base73).ln2_over_lnz.value + Decimal("0.05")
    assert rows[10].ratio <= limit


def test_box_counting_fit(base73):
    """Test the least-squares slope of the box counts."""
    rows = box_counting_estimate(base73, 8, 30)
    slope = box_counting_fit(rows)
    assert 0 < slope < 1
    assert box_counting_fit(rows[:2]) is None


def test_digit_count_word_bound(base73):
    """Test the digit-count bound on the number of S_z words."""
    assert digit_count_word_bound(base73, 1) == 3
    assert digit_count_word_bound(base73, 2) == 5
    for j in range(9):
        assert count_states_at_depth(base73, AutomatonKind.SPAN, j) <= digit_count_word_bound(base73, j)


def test_incoming_labels_in_span_alphabet(base73):
    """Test the count of incoming labels written over D_z."""
    for start in range(20):
        assert incoming_labels_in_span_alphabet(base73, start, 1) == 5
        assert incoming_labels_in_span_alphabet(base73, start, 2) <= 25


@pytest.mark.parametrize("p, q", [(3, 2), (4, 3), (5, 3)])
def test_small_base_checks(p, q):
    """Test that S_z adds no values and no shorter words in a small base."""
    report = small_base_checks(Base(p, q), 6)
    assert report.passed, report.issues
    assert report.words_checked > 1


def test_small_base_checks_large_base(base73):
    """Test that the small-base checks refuse a large base."""
    with pytest.raises(RegimeError):
        small_base_checks(base73, 4)


@pytest.mark.parametrize("p, q", [(7, 3), (5, 2)])
def test_branch_divergence_witness(p, q):
    """Test that two branches from every state end at separated values."""
    base = Base(p, q)
    for n in range(30):
        witness = branch_divergence_witness(base, n, 30)
        assert witness.n == n
        assert witness.digit > base.middle_point
        assert witness.disjoint


def test_branch_divergence_witness_small_base(base32):
    """Test that the witness needs a large base."""
    with pytest.raises(RegimeError):
        branch_divergence_witness(base32, 1)
