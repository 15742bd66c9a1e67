# tests/test_base.py
import pytest
from fractions import Fraction

from rational_base_kit.core.base import Base, make_base, parse_base
from rational_base_kit.core.errors import InvalidBaseError, RatbaseError


def test_alphabets(base73):
    """Test the digit alphabets of base 7/3."""
    assert list(base73.digits) == [0, 1, 2, 3, 4, 5, 6]
    assert list(base73.lower_digits) == [0, 1, 2]
    assert list(base73.upper_digits) == [4, 5, 6]
    assert list(base73.span_digits) == [2, 3, 4, 5, 6]
    assert base73.middle_point == 4
    assert base73.z == Fraction(7, 3)
    assert base73.floor_z == 2
    assert str(base73) == "7/3"


def test_small_base_span_alphabet_has_negative_digits(base43):
    """Test that D_z of a small base reaches below zero."""
    assert list(base43.span_digits) == [-1, 0, 1, 2, 3]


@pytest.mark.parametrize("p, q, small", [(3, 2, True), (4, 3, True), (5, 3, True), (7, 3, False), (5, 2, False)])
def test_regime(p, q, small):
    """Test the small/large classification p <= 2q-1."""
    base = make_base(p, q)
    assert base.is_small == small
    assert base.is_large != small


@pytest.mark.parametrize("p, q", [(2, 3), (3, 3), (4, 2), (3, 1), (True, 2), (3.0, 2)])
def test_invalid_bases(p, q):
    """Test that invalid pairs are rejected."""
    with pytest.raises(InvalidBaseError):
        Base(p, q)


def test_invalid_base_is_value_error():
    """Test that base errors can be caught as ValueError."""
    with pytest.raises(ValueError):
        make_base(6, 4)
    assert issubclass(InvalidBaseError, RatbaseError)


def test_parse_base():
    """Test parsing of the p/q form."""
    assert parse_base("3/2") == Base(3, 2)
    assert parse_base(" 7 / 3 ") == Base(7, 3)


@pytest.mark.parametrize("text", ["7:3", "7/", "-7/3", "seven/three", "4/2"])
def test_parse_base_rejects(text):
    """Test that malformed or invalid bases are rejected."""
    with pytest.raises(InvalidBaseError):
        parse_base(text)


def test_base_is_hashable():
    """Test that bases can key dictionaries."""
    assert {Base(3, 2): 1}[make_base(3, 2)] == 1
