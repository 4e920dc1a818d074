import random

import pytest

from groupeq.errors import ParseError
from groupeq.words import (COEFF, VAR, Letter, exponent_sum, format_word,
                           parse_word, word_commutator, word_conjugate,
                           word_inverse, word_power)

V = ["x", "y", "z"]
C = ["g1", "g2", "g3"]


def w(text):
    return parse_word(text, V, C)


def test_simple_word():
    assert w("x g1") == (Letter(VAR, "x", 1), Letter(COEFF, "g1", 1))


def test_commutator_expansion():
    word = w("[x,y] x^2 g1 y^-3")
    assert exponent_sum(word, "x") == 2
    assert exponent_sum(word, "y") == -3
    assert word[:4] == (Letter(VAR, "x", -1), Letter(VAR, "y", -1),
                        Letter(VAR, "x", 1), Letter(VAR, "y", 1))


def test_conjugation_expansion():
    word = w("x^(g1)")
    assert word == (Letter(COEFF, "g1", -1), Letter(VAR, "x", 1),
                    Letter(COEFF, "g1", 1))
    assert exponent_sum(word, "x") == 1


def test_conjugation_by_word_and_chained_caret():
    assert w("x^2^(g1)") == word_conjugate(word_power(w("x"), 2), w("g1"))
    assert w("x^(g1 g2)") == word_conjugate(w("x"), w("g1 g2"))
    assert w("(x y)^2") == w("x y x y")
    assert w("x^-1^(y)") == word_conjugate(word_inverse(w("x")), w("y"))


def test_powers():
    assert w("x^3") == (Letter(VAR, "x", 1),) * 3
    assert w("x^-2") == (Letter(VAR, "x", -1),) * 2
    assert w("x^0") == ()
    assert w("g1^2") == (Letter(COEFF, "g1", 1),) * 2


def test_equation_form():
    assert w("x = g1") == w("x g1^-1")
    assert w("x y = g1 g2") == w("x y g2^-1 g1^-1")


def test_inverse_and_commutator_helpers():
    word = w("x g1 y^-1")
    assert word_inverse(word) == w("y g1^-1 x^-1")
    assert word_commutator(w("x"), w("y")) == w("x^-1 y^-1 x y")
    assert word_power(w("x g1"), -2) == w("g1^-1 x^-1 g1^-1 x^-1")


def test_parse_errors():
    with pytest.raises(ParseError):
        w("q")                      # undeclared
    with pytest.raises(ParseError):
        w("x^")                     # dangling caret
    with pytest.raises(ParseError):
        w("[x y]")                  # missing comma
    with pytest.raises(ParseError):
        w("(x")                     # unclosed paren
    with pytest.raises(ParseError):
        w("x^(2)")                  # conjugation needs a word
    with pytest.raises(ParseError):
        w("x )")                    # trailing garbage
    with pytest.raises(ParseError):
        parse_word("x", ["x"], ["x"])   # declared twice


def test_print_parse_roundtrip_random():
    rng = random.Random(0)
    letters = [Letter(VAR, v, s) for v in V for s in (1, -1)]
    letters += [Letter(COEFF, c, s) for c in C for s in (1, -1)]
    for _ in range(300):
        word = tuple(rng.choice(letters) for _ in range(rng.randrange(0, 12)))
        assert parse_word(format_word(word), V, C) == word


def test_conjugating_subword_preserves_exponent_sums():
    rng = random.Random(1)
    letters = [Letter(VAR, v, s) for v in V for s in (1, -1)]
    letters += [Letter(COEFF, c, s) for c in C for s in (1, -1)]
    for _ in range(200):
        word = tuple(rng.choice(letters) for _ in range(rng.randrange(1, 10)))
        i = rng.randrange(len(word))
        j = rng.randrange(i, len(word)) + 1
        by = tuple(rng.choice(letters) for _ in range(rng.randrange(0, 4)))
        conjugated = word[:i] + word_conjugate(word[i:j], by) + word[j:]
        for v in V:
            assert exponent_sum(conjugated, v) == exponent_sum(word, v)
