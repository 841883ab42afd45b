from fractions import Fraction

import pytest

from adetl.exceptions import ScalarError, SingularValueError
from adetl.scalars import (ExactField, FloatField, FloatScalar, QSeries, RootOfUnity, Scalar, euler_product,
                           loop_weight, make_field, model_conductor, model_q, q_binomial, q_factorial, q_number,
                           root_of_unity, sqrt_kappa, verma_character)


###########################################
# cyclotomic scalars
###########################################
def test_roots_of_unity_multiply_exactly():
    z = ExactField(12).zeta(1)
    assert z ** 12 == 1
    assert z ** 6 == -1
    assert z * z.inverse() == 1
    assert z ** -1 == ExactField(12).zeta(11)


def test_rational_arithmetic_and_promotion():
    half = Scalar.from_rational(Fraction(1, 2), 12)
    i = root_of_unity(4, 1)
    assert (half + half).is_one()
    assert i * i == -1
    # conductors 4 and 3 promote to 12
    omega = root_of_unity(3, 1)
    product = i * omega
    assert product.conductor == 12
    assert product == root_of_unity(12, 7)


def test_conjugation_inverts_roots():
    field = ExactField(20)
    assert field.zeta(3).conj() == field.zeta(-3)
    assert (field.zeta(3) + 2).conj() == field.zeta(17) + 2


def test_inverse_of_sum():
    field = ExactField(12)
    x = field.zeta(1) + 2
    assert x * x.inverse() == 1
    assert x / x == 1


def test_division_by_zero():
    with pytest.raises(SingularValueError):
        ExactField(12).zero().inverse()


def test_embed_and_restrict():
    i = ExactField(4).zeta(1)
    big = i.embed(12)
    assert big == ExactField(12).zeta(3)
    assert big.restrict(4) == i
    with pytest.raises(ScalarError):
        ExactField(12).zeta(1).restrict(4)


def test_text_form_parses_back():
    field = ExactField(12)
    x = (field.zeta(1) * 3 - field.zeta(2) + 5) / 7
    assert Scalar.parse(str(x)) == x
    assert str(field.one()) == "[12] (1)"
    with pytest.raises(ScalarError):
        Scalar.parse("not a scalar")


def test_to_complex():
    z = ExactField(8).zeta(1)
    assert abs(z.to_complex() - complex(2 ** -0.5, 2 ** -0.5)) < 1e-12


###########################################
# float backend
###########################################
def test_float_scalars_compare_with_tolerance():
    assert FloatScalar(1) == FloatScalar(1 + 1e-12)
    assert not FloatScalar(1) == FloatScalar(1.1)
    assert FloatScalar(1e-12).is_zero()
    with pytest.raises(SingularValueError):
        FloatScalar(0).inverse()


def test_float_field_matches_exact_field():
    exact, approx = ExactField(24), FloatField(24)
    for k in (1, 5, 7):
        assert approx.zeta(k) == exact.zeta(k)
    assert approx.from_complex(1j) == exact.zeta(6)


def test_make_field():
    assert model_conductor(4) == 48
    assert model_conductor(3) == 12
    assert isinstance(make_field(4), ExactField)
    assert isinstance(make_field(4, "float"), FloatField)
    with pytest.raises(ScalarError):
        make_field(4, "interval")


###########################################
# q-numbers
###########################################
def test_model_q_and_loop_weight():
    field = make_field(4)
    q = model_q(field, 4, 3)
    assert q ** 8 == 1
    assert q ** 4 == -1
    beta = loop_weight(q)
    assert beta * beta == 2


def test_root_of_unity_helper():
    field = make_field(5)
    roots = RootOfUnity(field, 5, 4)
    assert roots.q ** 10 == 1
    assert roots.power(Fraction(1, 2)) ** 2 == roots.q
    assert roots.number(2) == roots.q + roots.q.inverse()
    with pytest.raises(ScalarError):
        RootOfUnity(field, 4, 2)


def test_q_numbers_vanish_at_pprime():
    field = make_field(3)
    q = model_q(field, 3, 2)
    assert q_number(3, q).is_zero()
    assert q_number(2, q) == -loop_weight(q)
    assert q_number(-2, q) == -q_number(2, q)
    with pytest.raises(SingularValueError):
        q_binomial(3, 3, q)


def test_q_factorial_and_binomial_generic():
    q = ExactField(60).zeta(1)
    assert q_factorial(3, q) == q_number(2, q) * q_number(3, q)
    assert q_binomial(4, 2, q) == q_number(4, q) * q_number(3, q) / q_number(2, q)
    assert q_binomial(4, 5, q).is_zero()


def test_sqrt_kappa_convention():
    field = ExactField(12)
    omega = field.root(3, 1)
    assert sqrt_kappa(field.one(), field) == 1
    assert sqrt_kappa(-field.one(), field) == field.root(4, 1)
    assert sqrt_kappa(omega, field) == omega * omega
    assert sqrt_kappa(omega * omega, field) == omega
    with pytest.raises(ScalarError):
        sqrt_kappa(field.root(4, 1), field)


###########################################
# q-series
###########################################
def test_euler_product_is_pentagonal():
    assert euler_product(7).coeffs == tuple(Fraction(c) for c in (1, -1, -1, 0, 0, 1, 0, 1))


def test_verma_character_counts_partitions():
    series = verma_character(Fraction(1, 2), Fraction(1, 2), 6)
    assert series.offset == Fraction(1, 2) - Fraction(1, 48)
    assert series.coeffs == tuple(Fraction(c) for c in (1, 1, 2, 3, 5, 7, 11))
    assert (series * euler_product(6)).coeffs == tuple(Fraction(c) for c in (1, 0, 0, 0, 0, 0, 0))


def test_series_arithmetic():
    a = QSeries(0, [1, 2, 3], 4)
    b = QSeries(1, [1, 1], 3)
    total = a + b
    assert total.order == 4
    assert total.coefficient(1) == 3
    assert total.coefficient(2) == 4
    assert (a - a).is_zero()
    assert QSeries.parse(str(total)) == total
    with pytest.raises(ScalarError):
        total.coefficient(9)
    assert a.truncate(1).coeffs == (Fraction(1), Fraction(2))
    assert a.truncate(1).order == 1
