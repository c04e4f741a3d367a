import pytest
from hypothesis import given, strategies as st

from defectus import (
    NEG_INF, Poly, PolySystem, field_make, jacobian_minors,
    monomials_exact, monomials_upto,
)
from defectus.polynomials import grevlex_key
from defectus.rng import HashStream

from conftest import random_point, random_poly


def _poly_strategy(field, nvars=3, max_degree=2):
    mons = monomials_upto(nvars, max_degree)
    return st.builds(
        lambda coeffs: Poly(field, nvars,
                            {m: field.from_int(c)
                             for m, c in zip(mons, coeffs)}),
        st.lists(st.integers(0, field.q - 1),
                 min_size=len(mons), max_size=len(mons)),
    )


def test_monomial_order_is_graded(f5):
    mons = monomials_upto(3, 3)
    degs = [sum(m) for m in mons]
    assert degs == sorted(degs, reverse=True)
    assert len(set(mons)) == len(mons)
    # grevlex tie-break: the rightmost differing exponent decides
    assert grevlex_key((1, 1, 0)) > grevlex_key((1, 0, 1))
    assert grevlex_key((2, 0, 0)) > grevlex_key((1, 1, 0))


def test_monomials_exact_count():
    import math
    for n in (1, 2, 3, 4):
        for d in (0, 1, 2, 3):
            assert len(monomials_exact(n, d)) == math.comb(d + n - 1, n - 1)


def test_evaluate_example(f5):
    F = Poly.from_int_terms(f5, 2, {(2, 0): 1, (0, 1): 1})  # X1^2 + X2
    assert F.evaluate((2, 3)) == 2  # 4 + 3 mod 5
    assert Poly.zero(f5, 2).evaluate((4, 4)) == 0


def test_evaluate_is_homomorphism(f7):
    stream = HashStream("eval-hom")
    for _ in range(40):
        F = random_poly(f7, 3, 2, stream)
        G = random_poly(f7, 3, 2, stream)
        pt = random_point(f7, 3, stream)
        assert (F + G).evaluate(pt) == f7.add(F.evaluate(pt), G.evaluate(pt))
        assert (F * G).evaluate(pt) == f7.mul(F.evaluate(pt), G.evaluate(pt))


def test_degree_conventions(f5):
    assert Poly.zero(f5, 3).degree() == NEG_INF
    assert NEG_INF < -10 ** 9
    assert Poly.constant(f5, 3, 2).degree() == 0


def test_homogenize_example(f5):
    F = Poly.from_int_terms(f5, 2, {(2, 0): 1, (0, 1): 1})
    H = F.homogenize(2)
    # X1^2 stays, X2 picks up one power of the appended X_0
    assert H == Poly.from_int_terms(f5, 3, {(2, 0, 0): 1, (0, 1, 1): 1})
    assert H.is_homogeneous() and H.degree() == 2


def test_homogenize_degree_drop_roundtrip(f5):
    F = Poly.variable(f5, 2, 0)  # X1 under cap 2
    H = F.homogenize(2)
    assert H == Poly.from_int_terms(f5, 3, {(1, 0, 1): 1})  # X0*X1
    assert H.dehomogenize() == F


def test_homogenize_rejects_cap_violation(f5):
    with pytest.raises(ValueError):
        Poly.from_int_terms(f5, 2, {(2, 1): 1}).homogenize(2)


def test_homogenize_properties(f5):
    stream = HashStream("homog-prop")
    for _ in range(40):
        d = 1 + stream.randint(3)
        F = random_poly(f5, 3, d, stream)
        H = F.homogenize(d)
        assert H.dehomogenize() == F
        if not F.is_zero():
            assert H.is_homogeneous() and H.degree() == d
        # X_0 -> 0 recovers the initial form on the original variables
        assert H.substitute_last(f5.zero) == F.initial_form(d)


def test_initial_form_examples(f5):
    F = Poly.from_int_terms(f5, 2, {(2, 0): 1, (0, 1): 1})
    assert F.initial_form(2) == Poly.from_int_terms(f5, 2, {(2, 0): 1})
    G = Poly.from_int_terms(f5, 2, {(1, 0): 1, (0, 0): 1})
    assert G.initial_form(2).is_zero()


def test_initial_form_zero_iff_degree_drop(f5):
    stream = HashStream("init-form")
    for _ in range(40):
        d = 1 + stream.randint(3)
        F = random_poly(f5, 2, d, stream)
        assert F.initial_form(d).is_zero() == (F.degree() < d)


def test_derivative_linearity_and_product_rule(f7):
    stream = HashStream("deriv")
    for _ in range(30):
        F = random_poly(f7, 3, 2, stream)
        G = random_poly(f7, 3, 2, stream)
        for j in range(3):
            assert (F + G).derivative(j) == F.derivative(j) + G.derivative(j)
            assert (F * G).derivative(j) == \
                F.derivative(j) * G + F * G.derivative(j)


def test_derivative_char_p(f2):
    F = Poly.from_int_terms(f2, 3, {(2, 0, 0): 1})  # X1^2 over F_2
    assert F.derivative(0).is_zero()
    f3 = field_make(3, 1)
    G = Poly.from_int_terms(f3, 1, {(3,): 1})  # X^3 over F_3
    assert G.derivative(0).is_zero()


def test_jacobian_minors_2x4(f7):
    # X1*X2 and X0*X3 in the homogeneous 4-variable ring (X0 last)
    F = Poly.from_int_terms(f7, 4, {(1, 1, 0, 0): 1})
    G = Poly.from_int_terms(f7, 4, {(0, 0, 1, 1): 1})
    minors = jacobian_minors([F, G])
    assert len(minors) == 6
    x2x3 = Poly.from_int_terms(f7, 4, {(0, 1, 1, 0): 1})
    assert any(m == x2x3 or m == -x2x3 for m in minors)


def test_jacobian_minors_constant(f7):
    F = Poly.variable(f7, 3, 0)
    G = Poly.variable(f7, 3, 1)
    minors = jacobian_minors([F, G])
    nonzero = [m for m in minors if not m.is_zero()]
    assert len(minors) == 3 and len(nonzero) == 1
    assert nonzero[0].degree() == 0


def test_jacobian_minors_char2_vanish(f2):
    # d(X1^2) = 2*X1 = 0 formally in characteristic 2
    F = Poly.from_int_terms(f2, 3, {(2, 0, 0): 1})
    G = Poly.variable(f2, 3, 2)
    assert all(m.is_zero() for m in jacobian_minors([F, G]))


def test_jacobian_minors_shape_errors(f7):
    with pytest.raises(ValueError):
        jacobian_minors([])
    too_many = [Poly.variable(f7, 2, 0)] * 3
    with pytest.raises(ValueError):
        jacobian_minors(too_many)


@given(_poly_strategy(field_make(5, 1)), _poly_strategy(field_make(5, 1)))
def test_canonical_serialization(F, G):
    assert (F == G) == (F.canonical_bytes() == G.canonical_bytes())


def test_json_roundtrip_prime(f7):
    stream = HashStream("json")
    for _ in range(20):
        F = random_poly(f7, 3, 2, stream)
        assert Poly.from_json_dict(f7, F.to_json_dict()) == F


def test_json_roundtrip_extension():
    f9 = field_make(3, 2, 0)
    stream = HashStream("json-ext")
    F = random_poly(f9, 2, 2, stream)
    blob = F.to_json_dict()
    for t in blob["terms"]:
        assert isinstance(t["c"], list) and len(t["c"]) == 2
    assert Poly.from_json_dict(f9, blob) == F


def test_system_validation(f7):
    x1 = Poly.variable(f7, 3, 0)
    x2 = Poly.variable(f7, 3, 1)
    PolySystem(f7, 3, 2, (1, 1), (x1, x2))
    with pytest.raises(ValueError):  # s must exceed 1
        PolySystem(f7, 3, 1, (1,), (x1,))
    with pytest.raises(ValueError):  # s must stay below r
        PolySystem(f7, 3, 3, (1, 1, 1), (x1, x2, x1))
    with pytest.raises(ValueError):  # cap violated
        PolySystem(f7, 3, 2, (1, 1), (x1 * x1, x2))


def test_system_degree_full(f7):
    x1 = Poly.variable(f7, 3, 0)
    x2 = Poly.variable(f7, 3, 1)
    sys1 = PolySystem(f7, 3, 2, (2, 1), (x1 * x1, x2))
    assert sys1.degree_full() == (True, True)
    sys2 = PolySystem(f7, 3, 2, (2, 1), (x1, x2))
    assert sys2.degree_full() == (False, True)


def test_system_json_flag_consistency(f7):
    x1 = Poly.variable(f7, 3, 0)
    x2 = Poly.variable(f7, 3, 1)
    sys1 = PolySystem(f7, 3, 2, (1, 1), (x1, x2))
    blob = sys1.to_json_dict()
    assert PolySystem.from_json_dict(f7, blob) == sys1
    with pytest.raises(ValueError):
        PolySystem.from_json_dict(f7, blob, r=4)
    with pytest.raises(ValueError):
        PolySystem.from_json_dict(f7, blob, caps=(2, 2))
