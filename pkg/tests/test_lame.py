import json
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from lamelattice.lame import (LameCoeffs, Parity, a_term, b_term, chebyshev_crosscheck,
                              constraint_polynomial, constraint_relations, general_coeffs,
                              sign_pattern_check)

FIXTURES = json.loads((Path(__file__).parent / "fixtures" / "lame_orders_1_4.json").read_text())


@pytest.mark.parametrize("fx", FIXTURES, ids=lambda d: f"N{d['N']}")
def test_fixture_orders(fx):
    c = general_coeffs(fx["N"])
    assert c == LameCoeffs.from_dict(fx)
    assert list(c.a) == fx["a"] and list(c.b) == fx["b"]


def test_json_roundtrip():
    c = general_coeffs(9)
    assert LameCoeffs.from_dict(json.loads(c.to_json())) == c


@pytest.mark.parametrize("n", range(1, 65))
def test_structure(n):
    c = general_coeffs(n)
    if n % 2:
        assert c.parity is Parity.ODD
        assert len(c.a) == len(c.b) == (n + 1) // 2
        assert c.b[-1] == 2 ** (n - 1)
    else:
        assert c.parity is Parity.EVEN
        assert len(c.a) == n // 2 + 1 and len(c.b) == n // 2
        assert c.b[-1] == 2 ** (n - 1)
    assert c.a[-1] == 2 ** (n - 1)
    assert sum(c.a) == 1 and sum(c.b) == n
    assert chebyshev_crosscheck(n)
    assert sign_pattern_check(n)


@pytest.mark.parametrize("n", range(3, 65))
def test_second_highest(n):
    c = general_coeffs(n)
    # exact integers once n >= 3
    assert c.a[-2] == -n * 2 ** (n - 3)
    if len(c.b) >= 2:
        assert c.b[-2] == -(n - 2) * 2 ** (n - 3)


@pytest.mark.parametrize("n", [5, 7, 9, 11])
def test_third_and_fourth_highest_odd(n):
    c = general_coeffs(n)
    assert 2 * c.a[-3] == n * (n - 3) * 2 ** (n - 5)
    assert 2 * c.b[-3] == (n - 3) * (n - 4) * 2 ** (n - 5)
    if n >= 7:
        assert 6 * c.a[-4] == -n * (n - 4) * (n - 5) * 2 ** (n - 7)
        assert 6 * c.b[-4] == -(n - 4) * (n - 5) * (n - 6) * 2 ** (n - 7)


def test_sign_pattern_examples():
    c3, c2, c5 = general_coeffs(3), general_coeffs(2), general_coeffs(5)
    assert (c3.a[0], c3.b[0]) == (-3, -1)
    assert (c2.a[0], c2.b[0], c2.a[1]) == (-1, 2, 2)
    assert (c5.a[0], c5.b[0]) == (5, 1)


def test_even_edge_constant_term():
    for n in range(2, 40, 2):
        assert a_term(n, n // 2) == (-1) ** (n // 2)


def test_k0_terms_are_top_power():
    for n in range(1, 30):
        assert a_term(n, 0) == b_term(n, 0) == 2 ** (n - 1)


@pytest.mark.parametrize("n", range(1, 33))
def test_constraint_polynomial_vanishes(n):
    c = general_coeffs(n)
    assert constraint_polynomial(c).is_zero()
    assert constraint_relations(c) == [0] * (n + 1)


def _one_based(vec):
    return lambda i: vec[i - 1] if 1 <= i <= len(vec) else 0


@pytest.mark.parametrize("n", range(1, 17, 2))
def test_printed_odd_relations(n):
    c = general_coeffs(n)
    A, B = _one_based(c.a), _one_based(c.b)
    h = (n + 1) // 2
    # the j-th top relation is the z^(N-j) coefficient; at z^0 the constant -1 also enters
    top = [
        A(h) ** 2 == B(h) ** 2,
        2 * A(h) * A(h - 1) + B(h) ** 2 == 2 * B(h) * B(h - 1),
        A(h - 1) ** 2 + 2 * A(h) * A(h - 2) + 2 * B(h) * B(h - 1) == B(h - 1) ** 2 + 2 * B(h) * B(h - 2),
        (B(h - 1) ** 2 + 2 * A(h) * A(h - 3) + 2 * B(h) * B(h - 2) + 2 * A(h - 1) * A(h - 2)
         == 2 * B(h - 1) * B(h - 2) + 2 * B(h) * B(h - 3)),
    ]
    assert all(top[: n])
    assert B(1) ** 2 == 1
    assert A(1) ** 2 + 2 * B(1) * B(2) == B(1) ** 2
    assert 2 * A(1) * A(2) + B(2) ** 2 + 2 * B(1) * B(3) == 2 * B(1) * B(2)
    assert A(2) ** 2 + 2 * A(1) * A(3) - B(2) ** 2 + 2 * B(2) * B(3) + 2 * B(1) * B(4) - 2 * B(1) * B(3) == 0


@pytest.mark.parametrize("n", range(2, 17, 2))
def test_printed_even_relations(n):
    c = general_coeffs(n)
    A, B = _one_based(c.a), _one_based(c.b)
    h = n // 2
    top = [
        A(h + 1) ** 2 == B(h) ** 2,
        2 * A(h + 1) * A(h) + B(h) ** 2 == 2 * B(h) * B(h - 1),
        A(h) ** 2 + 2 * A(h + 1) * A(h - 1) + 2 * B(h) * B(h - 1) == B(h - 1) ** 2 + 2 * B(h) * B(h - 2),
        (B(h - 1) ** 2 + 2 * A(h + 1) * A(h - 2) + 2 * B(h) * B(h - 2) + 2 * A(h) * A(h - 1)
         == 2 * B(h - 1) * B(h - 2) + 2 * B(h) * B(h - 3)),
    ]
    assert all(top[: n])
    assert A(1) ** 2 == 1
    assert B(1) ** 2 + 2 * A(1) * A(2) == 0
    assert 2 * A(1) * A(3) + A(2) ** 2 + 2 * B(1) * B(2) == B(1) ** 2
    # the last printed relation with its B-product read as 2 B1 B3
    assert B(2) ** 2 + 2 * A(2) * A(3) + 2 * A(1) * A(4) + 2 * B(1) * B(3) == 2 * B(1) * B(2)


def test_last_even_relation_as_printed_fails():
    # taken literally ("2 B2 B2") it breaks at N = 6, confirming the misprint
    c = general_coeffs(6)
    A, B = _one_based(c.a), _one_based(c.b)
    assert B(2) ** 2 + 2 * A(2) * A(3) + 2 * A(1) * A(4) + 2 * B(2) * B(2) != 2 * B(1) * B(2)


@given(st.integers(2, 24), st.sampled_from(["a", "b"]), st.data())
def test_single_flip_breaks_constraint(n, which, data):
    c = general_coeffs(n)
    vec = getattr(c, which)
    idx = data.draw(st.integers(0, len(vec) - 1))
    flipped = c.flipped(which, idx)
    if len(vec) == 1:
        # negating a one-entry vector is the field sign symmetry
        assert constraint_polynomial(flipped).is_zero()
        return
    assert not constraint_polynomial(flipped).is_zero()


def test_order_validation():
    with pytest.raises(ValueError):
        general_coeffs(0)
