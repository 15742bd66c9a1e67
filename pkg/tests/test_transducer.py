# tests/test_transducer.py
import pytest
from itertools import product

from rational_base_kit.core.automata import AutomatonKind, successors, tau
from rational_base_kit.core.base import Base
from rational_base_kit.core.errors import DigitError, InvalidStateError
from rational_base_kit.core.extremal import bottom_prefix
from rational_base_kit.core.transducer import (
    PairLetter,
    delta_D,
    inverse_step,
    psi,
    psi_table,
    transduce,
    transduce_inverse,
    transduce_step,
    transitions,
)

BASES = [(3, 2), (4, 3), (5, 3), (7, 3), (5, 2)]


def test_psi_golden(base32, base43, base73):
    """Test label substitutions from the worked examples."""
    assert psi(base32, 1) == {(1, 1), (0, 0)}
    assert psi(base43, -1) == {(2, 0)}
    assert psi(base73, 6) == {(0, 2)}


def test_psi_rejects_digit(base73):
    """Test that ψ is only defined on D_z."""
    with pytest.raises(DigitError):
        psi(base73, 1)
    with pytest.raises(DigitError):
        psi(base73, 7)


def test_psi_table(base32):
    """Test the ψ table rows and their pair order."""
    assert psi_table(base32) == [
        (0, [(1, 0)]),
        (1, [(1, 1), (0, 0)]),
        (2, [(0, 1)]),
    ]


@pytest.mark.parametrize("p, q", BASES)
def test_psi_partitions_pairs(p, q):
    """Test that ψ splits B_q x B_q into classes of size q - |d - (p-q)|."""
    base = Base(p, q)
    seen = set()
    for d in base.span_digits:
        pairs = psi(base, d)
        assert len(pairs) == q - abs(d - base.middle_point)
        assert not pairs & seen
        seen |= pairs
    assert seen == set(product(base.lower_digits, repeat=2))


def test_transduce_rejects_negative_start(base32):
    """Test that D_z only starts from natural numbers."""
    with pytest.raises(InvalidStateError):
        transduce(base32, -3, (1, 0, 1, 1))
    with pytest.raises(InvalidStateError):
        transduce_inverse(base32, -1, (1, 1))


def test_delta_D(base32):
    """Test transitions of D_z on pair letters."""
    assert delta_D(base32, 0, PairLetter(1, 0)) == 0
    assert delta_D(base32, 0, PairLetter(0, 0)) is None
    with pytest.raises(DigitError):
        delta_D(base32, 0, PairLetter(2, 0))


@pytest.mark.parametrize("p, q", BASES)
def test_delta_D_follows_span_automaton(p, q):
    """Test that a letter of ψ(d) moves like d does in S_z."""
    base = Base(p, q)
    for n in range(100):
        for d in base.span_digits:
            for letter in psi(base, d):
                assert delta_D(base, n, letter) == tau(base, n, d)


def test_transitions(base32):
    """Test all transitions of D_z leaving a state."""
    assert transitions(base32, 0) == [(PairLetter(1, 0), 0), (PairLetter(0, 1), 1)]
    targets = {m for _, m in transitions(base32, 2)}
    assert targets == {m for _, m in successors(base32, AutomatonKind.SPAN, 2)}


def test_single_steps(base32):
    """Test the closed forms of one forward and one inverse step."""
    assert transduce_step(base32, 0, 1) == (0, 0)
    assert transduce_step(base32, 0, 0) == (1, 1)
    assert inverse_step(base32, 0, 0) == (1, 0)


def test_transduce_golden(base32):
    """Test that D_z maps minword(1) to minword(2)."""
    assert transduce(base32, 0, (1, 0, 1, 1, 0, 0, 0)) == (0, 1, 1, 0, 0, 0, 1)
    assert transduce_inverse(base32, 0, (0, 1, 1, 0, 0, 0, 1)) == (1, 0, 1, 1, 0, 0, 0)


@pytest.mark.parametrize("p, q", BASES)
def test_transducer_realizes_successor(p, q):
    """Test that D_(z,i) maps minword(n) to minword(n+i+1)."""
    base = Base(p, q)
    words = [bottom_prefix(base, n, 16) for n in range(70)]
    for i in range(7):
        for n in range(60):
            assert transduce(base, i, words[n]) == words[n + i + 1]


@pytest.mark.parametrize("p, q", BASES)
def test_local_bijectivity(p, q):
    """Test that at every state each input and each output letter occurs once."""
    base = Base(p, q)
    for n in range(100):
        letters = [letter for letter, _ in transitions(base, n)]
        assert sorted(x for x, _ in letters) == list(base.lower_digits)
        assert sorted(y for _, y in letters) == list(base.lower_digits)


@pytest.mark.parametrize("p, q", [(3, 2), (7, 3), (4, 3)])
def test_inverse_and_prefixes(p, q):
    """Test the inverse round trip and that images of prefixes are prefixes."""
    base = Base(p, q)
    for i in range(4):
        for word in product(base.lower_digits, repeat=4):
            image = transduce(base, i, word)
            assert transduce_inverse(base, i, image) == word
            for cut in range(5):
                assert transduce(base, i, word[:cut]) == image[:cut]


def test_transduce_rejects_digit(base32):
    """Test that inputs outside B_q are rejected."""
    with pytest.raises(DigitError):
        transduce(base32, 0, (1, 2))
    with pytest.raises(DigitError):
        transduce_inverse(base32, 0, (3,))
