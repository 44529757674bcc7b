from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from monohull.core import (
    Instance,
    InvalidInstance,
    factorial,
    fmt,
    parse_rational,
    parse_vector,
    pi_product,
    split_signs,
)

from conftest import instances

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=1000)


@pytest.mark.parametrize("m, expected", [(0, 1), (5, 120), (12, 479001600)])
def test_factorial(m, expected):
    assert factorial(m) == expected


def test_factorial_negative():
    with pytest.raises(ValueError):
        factorial(-1)


@pytest.mark.parametrize(
    "excluded, expected", [({3}, 6), ({1, 2, 3}, 1), (set(), 30)]
)
def test_pi_product(excluded, expected):
    inst = Instance(3, 1, (2, 3, 5))
    assert pi_product(inst, excluded) == expected


def test_pi_product_rejects_bad_index():
    with pytest.raises(ValueError):
        pi_product(Instance(3, 1, (2, 3, 5)), {4})


@given(instances(allow_zero_an=True))
def test_pi_product_drop_one(inst):
    full = pi_product(inst)
    for i in range(1, inst.n + 1):
        assert pi_product(inst, {i}) * inst.bound(i) == full
    assert inst.pi == pi_product(inst, {inst.n}) > 0


@given(rationals, rationals, rationals)
def test_rational_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a


@given(rationals)
def test_canonical_form_round_trip(q):
    assert q.denominator > 0
    assert parse_rational(fmt(q)) == q
    assert "/" not in fmt(q) or q.denominator != 1


@pytest.mark.parametrize(
    "text, expected",
    [("3/4", Fraction(3, 4)), ("-2", Fraction(-2)), ("0.125", Fraction(1, 8)), ("1e-2", Fraction(1, 100)), (" 6/4 ", Fraction(3, 2))],
)
def test_parse_rational(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize("bad", ["abc", "1/0", ""])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_parse_rational_rejects_float():
    with pytest.raises(TypeError):
        parse_rational(0.1)


def test_parse_vector():
    assert parse_vector("1,2/3, 0.5") == (1, Fraction(2, 3), Fraction(1, 2))


def test_fmt():
    assert fmt(Fraction(6, 3)) == "2"
    assert fmt(Fraction(-3, 6)) == "-1/2"


@pytest.mark.parametrize(
    "n, an, b",
    [
        (1, 0, (1,)),
        (2, 3, (1, 3)),
        (2, 4, (1, 3)),
        (2, -1, (1, 3)),
        (2, 0, (0, 3)),
        (3, 0, (1, 3)),
    ],
)
def test_instance_validation(n, an, b):
    with pytest.raises(InvalidInstance):
        Instance(n, an, b)


def test_instance_pyramid_flag():
    assert Instance(2, 0, (1, 1)).is_pyramid
    assert not Instance(2, "1/2", (1, 1)).is_pyramid


def test_instance_dict_round_trip():
    inst = Instance(3, "1/2", ("2/3", 1, 5))
    assert Instance.from_dict(inst.to_dict()) == inst


@given(instances(), st.data())
def test_sign_split(inst, data):
    c = tuple(data.draw(rationals) for _ in range(inst.n))
    sets = split_signs(inst, c)
    assert set(sets.N_plus) | set(sets.N_minus) == set(range(1, inst.n))
    assert not set(sets.N_plus) & set(sets.N_minus)
    assert sets.S_plus >= 0 >= sets.S_minus
    direct = sum(c[i] * inst.b[i] for i in range(inst.n - 1))
    assert sets.S_plus + sets.S_minus == direct
    if sets.case == "A":
        assert sets.k in sets.N_plus
        ckbk = c[sets.k - 1] * inst.bound(sets.k)
        assert all(ckbk <= c[j - 1] * inst.bound(j) for j in sets.N_plus)
    else:
        assert sets.k is None
