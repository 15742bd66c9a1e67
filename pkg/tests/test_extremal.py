# tests/test_extremal.py
import pytest

from rational_base_kit.core.automata import AutomatonKind, iter_labels, run, successors
from rational_base_kit.core.base import Base
from rational_base_kit.core.errors import DigitError, InvalidStateError, InvalidWordError
from rational_base_kit.core.extremal import (
    ExtremalKind,
    bottom_prefix,
    extremal_prefix,
    mu,
    mu_word,
    node_record,
    shifted_span_prefix,
    span_word_prefix,
    span_word_witness,
    top_prefix,
    witness_min_node_for_bottom_prefix,
    xi_direct,
)
from rational_base_kit.core.spans import refine_words
from rational_base_kit.core.words import real_enclosure, word_from_str

BASES = [(3, 2), (4, 3), (5, 3), (7, 3), (5, 2)]


def test_extremal_words_golden(base32, worked_examples):
    """Test bottom, top and span words against the worked examples."""
    examples = worked_examples["3/2"]
    for n, text in examples["bottom"].items():
        assert bottom_prefix(base32, int(n), len(text)) == word_from_str(text)
    for n, text in examples["top"].items():
        assert top_prefix(base32, int(n), len(text)) == word_from_str(text)
    for n, text in examples["span"].items():
        assert span_word_prefix(base32, int(n), len(text)) == word_from_str(text)


def test_extremal_prefix_kinds(base32):
    """Test that the kind selects the bottom or the top word."""
    assert extremal_prefix(base32, 1, ExtremalKind.BOTTOM, 4) == (1, 0, 1, 1)
    assert extremal_prefix(base32, 1, ExtremalKind.TOP, 4) == (1, 2, 2, 1)
    assert bottom_prefix(base32, 1, 0) == ()


def test_mu(base32, base73):
    """Test the shift of D_z digits by the middle point."""
    assert mu(base32, 2) == 1
    assert mu(base32, 1) == 0
    assert mu(base73, 2) == -2
    assert mu_word(base32, (1, 2, 2)) == (0, 1, 1)
    with pytest.raises(DigitError):
        mu(base73, 1)
    with pytest.raises(DigitError):
        mu(base32, 3)


@pytest.mark.parametrize("p, q", BASES)
def test_alphabet_purity(p, q):
    """Test that bottom words use B_q and top words use C_z."""
    base = Base(p, q)
    for n in range(100):
        assert all(d in base.lower_digits for d in bottom_prefix(base, n, 20))
        assert all(d in base.upper_digits for d in top_prefix(base, n, 20))


@pytest.mark.parametrize("p, q", BASES)
def test_top_word_shifts_to_next_bottom_word(p, q):
    """Test that μ(maxword(n)) = minword(n+1)."""
    base = Base(p, q)
    for n in range(100):
        assert mu_word(base, top_prefix(base, n, 20)) == bottom_prefix(base, n + 1, 20)
        assert xi_direct(base, n, 20) == bottom_prefix(base, n + 1, 20)


@pytest.mark.parametrize("p, q", BASES)
def test_extremal_words_are_extreme_paths(p, q):
    """Test that the bottom and top words are the least and greatest paths."""
    base = Base(p, q)
    for n in range(15):
        labels = [word for word, _ in iter_labels(base, AutomatonKind.TREE, 5, start=n)]
        assert labels[0] == bottom_prefix(base, n, 5)
        assert labels[-1] == top_prefix(base, n, 5)


@pytest.mark.parametrize("p, q", BASES)
def test_span_words_label_span_runs(p, q):
    """Test that maxword(n+i) ⊖ minword(n) labels an S_z run from i."""
    base = Base(p, q)
    for i in range(6):
        for n in range(40):
            word = shifted_span_prefix(base, n, i, 16)
            assert run(base, AutomatonKind.SPAN, i, word) is not None
    for n in range(40):
        assert shifted_span_prefix(base, n, 0, 16) == span_word_prefix(base, n, 16)


@pytest.mark.parametrize("p, q", BASES)
def test_span_word_witness(p, q):
    """Test that every S_z word from 0 is a prefix of some span word."""
    base = Base(p, q)
    for length in range(6):
        for word in refine_words(base, length):
            n = span_word_witness(base, word)
            assert span_word_prefix(base, n, length) == word


def test_shifted_span_word_witness(base73):
    """Test the witness for S_z runs that start away from 0."""
    for word, _ in iter_labels(base73, AutomatonKind.SPAN, 4, start=2):
        n = span_word_witness(base73, word, 2)
        assert shifted_span_prefix(base73, n, 2, 4) == word


def test_negative_state_rejected(base32):
    """Test that extremal words are only defined on natural numbers."""
    with pytest.raises(InvalidStateError):
        bottom_prefix(base32, -1, 6)
    with pytest.raises(InvalidStateError):
        extremal_prefix(base32, -3, ExtremalKind.TOP, 6)
    with pytest.raises(InvalidStateError):
        span_word_prefix(base32, -1, 6)
    assert bottom_prefix(base32, 0, 0) == ()


def test_span_word_witness_rejects(base73):
    """Test that a word that is not an S_z run is rejected."""
    with pytest.raises(InvalidWordError):
        span_word_witness(base73, (2,))


def test_witness_for_bottom_prefix(base32):
    """Test that the witness state has the requested bottom prefix."""
    word = (0, 1, 1, 0)
    n = witness_min_node_for_bottom_prefix(base32, word)
    assert bottom_prefix(base32, n, 4) == word
    with pytest.raises(DigitError):
        witness_min_node_for_bottom_prefix(base32, (2,))


@pytest.mark.parametrize("p, q", [(7, 3), (5, 2), (3, 2)])
def test_shifted_bottom_and_top_words_meet(p, q):
    """Test that (a+q)·minword(m+1) and a·maxword(m) have overlapping enclosures."""
    base = Base(p, q)
    for n in range(20):
        for a, m in successors(base, AutomatonKind.TREE, n):
            if a + q >= p:
                continue
            shifted = real_enclosure(base, (a + q,) + bottom_prefix(base, m + 1, 30), 0, q - 1)
            direct = real_enclosure(base, (a,) + top_prefix(base, m, 30), p - q, p - 1)
            assert shifted.intersects(direct)


def test_node_record(base32):
    """Test the JSON record of one state."""
    assert node_record(base32, 1, 7) == {
        'n': "1",
        'depth': "7",
        'bottom_prefix': [1, 0, 1, 1, 0, 0, 0],
        'top_prefix': [1, 2, 2, 1, 1, 1, 2],
        'span_word_prefix': [0, 2, 1, 0, 1, 1, 2],
    }
