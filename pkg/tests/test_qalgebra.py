"""Normal ordering, weights, basis enumeration, and the element grammar."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from imcrystal.qcoeff import Coeff
from imcrystal.qalgebra import (
    Element,
    InhomogeneousError,
    ParseError,
    Weight,
    enumerate_basis,
    find_ascent,
    format_element,
    normalize_word,
    parse_element,
    rewrite_once,
    termination_measure,
    weight_of,
)

Q2 = Coeff.q_power(4)


def x(*indices):
    return Element.monomial(indices)


class TestNormalize:
    def test_serre_adjacent(self):
        assert normalize_word((0, 1)) == Element({(1, 0): Q2})

    def test_already_normal(self):
        assert normalize_word((1, 0)) == Element({(1, 0): Coeff.one()})

    def test_serre_gap(self):
        expected = Element({(2, 0): Q2, (1, 1): Q2 - Coeff.one()})
        assert normalize_word((0, 2)) == expected

    def test_multiply_examples(self):
        assert x(0) * x(2) == normalize_word((0, 2))
        assert Element.one() * x(1, 0) == x(1, 0)
        assert x(1) * x(0) == Element({(1, 0): Coeff.one()})

    def test_defining_relation_both_sides(self):
        # x[k+1]x[l] - q^-2 x[l]x[k+1] = q^-2 x[k]x[l+1] - x[l+1]x[k]
        qm2 = Coeff.q_power(-4)
        for k in range(-2, 3):
            for l in range(-2, 3):
                lhs = normalize_word((k + 1, l)) - normalize_word((l, k + 1)) * qm2
                rhs = normalize_word((k, l + 1)) * qm2 - normalize_word((l + 1, k))
                assert lhs == rhs, (k, l)


class TestTermination:
    def test_measure_decreases_on_every_step(self):
        rng = random.Random(7)
        for _ in range(60):
            word = tuple(rng.randint(-3, 3) for _ in range(rng.randint(2, 5)))
            stack = [word]
            steps = 0
            while stack:
                w = stack.pop()
                i = find_ascent(w)
                if i is None:
                    continue
                steps += 1
                assert steps < 10_000, "rewriting did not terminate"
                for _, piece in rewrite_once(w, i):
                    assert termination_measure(piece) < termination_measure(w)
                    stack.append(piece)

    def test_confluence_probe(self):
        rng = random.Random(11)
        for _ in range(200):
            word = tuple(rng.randint(-3, 3) for _ in range(rng.randint(0, 5)))
            assert normalize_word(word, "leftmost") == normalize_word(word, "rightmost")

    def test_weight_preserved(self):
        rng = random.Random(13)
        for _ in range(100):
            word = tuple(rng.randint(-3, 3) for _ in range(rng.randint(1, 5)))
            e = normalize_word(word)
            assert e.weight() == Weight(len(word), sum(word))


class TestWeight:
    def test_examples(self):
        assert weight_of(x(2, 0)) == Weight(2, 2)
        assert weight_of(Element.one()) == Weight(0, 0)
        assert weight_of(x(0) * x(2)) == Weight(2, 2)

    def test_inhomogeneous_reports_pair(self):
        with pytest.raises(InhomogeneousError) as err:
            weight_of(x(0) + x(1, 1))
        assert len(err.value.offending) == 2

    def test_zero_has_no_weight(self):
        with pytest.raises(ValueError):
            weight_of(Element.zero())


class TestEnumerate:
    def test_examples(self):
        assert enumerate_basis(2, (0, 1)) == [(1, 1), (1, 0), (0, 0)]
        assert enumerate_basis(2, (0, 2), 2) == [(2, 0), (1, 1)]
        assert enumerate_basis(0, (-3, 3)) == [()]

    def test_filtered_matches_unfiltered(self):
        allm = enumerate_basis(3, (-2, 2))
        for d in range(-6, 7):
            assert enumerate_basis(3, (-2, 2), d) == [m for m in allm if sum(m) == d]

    def test_all_normal(self):
        for m in enumerate_basis(4, (-2, 2)):
            assert all(m[i] >= m[i + 1] for i in range(3))


class TestGrammar:
    def test_parse_applies_normalize(self):
        assert parse_element("x[0]*x[1]") == Element({(1, 0): Q2})
        assert format_element(parse_element("x[0]*x[1]")) == "q^2*x[1]x[0]"

    def test_scalar_coefficient_term(self):
        e = parse_element("3/2*q^(1/2)*x[2]")
        assert e == Element({(2,): Coeff.q_power(1) * 3 / 2})

    def test_cancellation(self):
        assert parse_element("x[1]*x[0] - x[1]*x[0]").is_zero

    def test_juxtaposed_monomial(self):
        assert parse_element("x[1]x[0]") == x(1, 0)

    def test_quantum_bracket(self):
        assert parse_element("[2]") == Element.scalar(Coeff.quantum(2))
        assert parse_element("[2]*x[0]") == x(0) * Coeff.quantum(2)

    def test_gamma_and_negative_exponents(self):
        e = parse_element("g^(1/2)*q^-2*x[1]")
        assert e == Element({(1,): Coeff.gamma_power(1) * Coeff.q_power(-4)})

    def test_division_by_scalar(self):
        assert parse_element("x[0]/q^2") == Element({(0,): Coeff.q_power(-4)})
        with pytest.raises(ParseError):
            parse_element("x[0]/x[1]")

    def test_syntax_error_position(self):
        with pytest.raises(ParseError) as err:
            parse_element("x[0] + ?")
        assert err.value.position == 7

    def test_trailing_input(self):
        with pytest.raises(ParseError):
            parse_element("x[0] x")

    def test_cli_normalize_example(self):
        out = format_element(parse_element("x[0]*x[2]"))
        assert out == "q^2*x[2]x[0] + (-1+q^2)*x[1]x[1]"
        assert parse_element(out) == parse_element("x[0]*x[2]")


# ---------------------------------------------------------------------------
# property tests

words = st.lists(st.integers(min_value=-3, max_value=3), max_size=4).map(tuple)
short_words = st.lists(st.integers(min_value=-3, max_value=3), max_size=3).map(tuple)


@settings(max_examples=50, deadline=None)
@given(short_words, short_words, short_words)
def test_multiplication_associative(a, b, c):
    ea, eb, ec = normalize_word(a), normalize_word(b), normalize_word(c)
    assert (ea * eb) * ec == ea * (eb * ec)


@settings(max_examples=50, deadline=None)
@given(words, words)
def test_product_weight_adds(a, b):
    e = normalize_word(a) * normalize_word(b)
    assert e.weight() == Weight(len(a) + len(b), sum(a) + sum(b))


@settings(max_examples=60, deadline=None)
@given(words)
def test_format_parse_round_trip(word):
    e = normalize_word(word)
    assert parse_element(format_element(e)) == e


@settings(max_examples=40, deadline=None)
@given(words, st.integers(min_value=-2, max_value=2), st.integers(min_value=-2, max_value=2))
def test_round_trip_with_gamma_coefficients(word, qh, gh):
    e = normalize_word(word) * (Coeff.q_power(qh) * Coeff.gamma_power(gh) * 3)
    assert parse_element(format_element(e)) == e
