import math
import random

import pytest

from oracles import hyper_count_two_charts
from zetafam.errors import CapExceeded, InvalidDivisor, InvariantViolation
from zetafam.ff import FieldElement, extension_of, make_field
from zetafam.hyperell import (
    HyperCurve,
    MumfordDivisor,
    bsgs_order_in_interval,
    cantor_add,
    cantor_mul,
    count_curve_points,
    divisor_from_points,
    is_valid_divisor,
    jacobian_order_check,
    random_divisor,
    weil_interval,
    zeta_from_counts,
)
from zetafam.upoly import UPoly, discriminant
from zetafam.zeta import check_weil, counts_from_zeta

FIELDS = [(3, 1), (5, 1), (7, 1), (3, 2)]


def x5_plus_1(p, k=1):
    return HyperCurve.from_ints(make_field(p, k), [1, 0, 0, 0, 0, 1])


def random_curves(p, k, degree, n, seed):
    F = make_field(p, k)
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        f = UPoly(F, [FieldElement(F, rng.randrange(F.q)) for _ in range(degree)] + [FieldElement(F, rng.randrange(1, F.q))])
        if discriminant(f):
            out.append(HyperCurve(F, f))
    return out


def sample_curves():
    curves = []
    for i, (p, k) in enumerate(FIELDS):
        curves += random_curves(p, k, 5, 2, i)
        curves += random_curves(p, k, 6, 2, 10 + i)
    return curves


CURVES = sample_curves()


def curve_id(C):
    return f"q{C.q}-d{C.d}-{'.'.join(str(c) for c in C.f.c)}"


def _over(C, k):
    if k == 1:
        return C.ctx, [FieldElement(C.ctx, c) for c in C.f.c]
    big, emb = extension_of(C.ctx, k)
    return big, [FieldElement(big, emb[c]) for c in C.f.c]


def test_construction_rejects_bad_polynomials():
    F = make_field(5)
    with pytest.raises(InvariantViolation):
        HyperCurve.from_ints(F, [1, 0, 1])
    with pytest.raises(InvariantViolation):
        HyperCurve.from_ints(F, [1, 0, 0, 0, 0, 0])  # x^5 has a repeated root
    with pytest.raises(InvariantViolation):
        HyperCurve.from_ints(F, [1, 0, 1, 1]).jacobian  # genus 1


def test_count_example_over_f3():
    assert count_curve_points(x5_plus_1(3)) == 4


def test_count_cap():
    with pytest.raises(CapExceeded):
        count_curve_points(x5_plus_1(7), 4, cap=1000)


def test_two_points_at_infinity_when_leading_square():
    F = make_field(5)
    C = HyperCurve.from_ints(F, [4, 0, 0, 0, 0, 1, 1])  # 4 = 2^2
    affine = len(C.points())
    assert count_curve_points(C) == affine + 2
    D = HyperCurve.from_ints(F, [2, 0, 0, 0, 0, 1, 1])  # 2 is a nonsquare mod 5
    assert count_curve_points(D) == len(D.points())


@pytest.mark.parametrize("C", CURVES, ids=curve_id)
def test_count_matches_two_chart_enumeration(C):
    for k in (1, 2):
        if C.q**k > 81:
            break
        assert count_curve_points(C, k) == hyper_count_two_charts(*_over(C, k))


@pytest.mark.parametrize("C", CURVES, ids=curve_id)
def test_counts_respect_hasse_weil(C):
    for k in (1, 2, 3):
        Q = C.q**k
        if Q > 10**5:
            break
        N = count_curve_points(C, k)
        assert (N - Q - 1) ** 2 <= 16 * Q


def test_mumford_identity_and_inverse_on_x5_plus_1():
    C = x5_plus_1(7)
    O = C.jacobian.identity()
    for x, y in C.points():
        D = divisor_from_points(C, [(x, y)])
        assert cantor_add(D, O, C) == D
        assert cantor_add(D, -D, C).is_identity()
        twice = cantor_add(D, D, C)
        assert is_valid_divisor(twice, C.jacobian)
        assert cantor_add(twice, -D, C) == D


def test_invalid_divisor_rejected():
    C = x5_plus_1(7)
    F = C.ctx
    bad = MumfordDivisor(UPoly(F, [1, 1]), UPoly(F, [3]))  # (-1)^5 + 1 = 0, not 9
    assert not is_valid_divisor(bad, C.jacobian)
    with pytest.raises(InvalidDivisor):
        cantor_add(bad, C.jacobian.identity(), C)


def test_points_sum_equals_composed_divisor():
    C = x5_plus_1(7)
    pts = C.points()
    for P in pts:
        for Q in pts:
            via_add = cantor_add(divisor_from_points(C, [P]), divisor_from_points(C, [Q]), C)
            assert divisor_from_points(C, [P, Q]) == via_add


def test_even_degree_odd_point_count_rejected():
    C = random_curves(7, 1, 6, 1, 3)[0]
    pts = C.points()
    with pytest.raises(InvalidDivisor):
        divisor_from_points(C, pts[:1])


@pytest.mark.parametrize("C", CURVES, ids=curve_id)
def test_cantor_group_laws(C):
    rng = random.Random(C.q * 100 + C.d)
    model = C.jacobian
    O = model.identity()
    for _ in range(500):
        D1, D2, D3 = (random_divisor(C, rng) for _ in range(3))
        s12 = cantor_add(D1, D2, C)
        s23 = cantor_add(D2, D3, C)
        left = cantor_add(s12, D3, C)
        right = cantor_add(D1, s23, C)
        for D in (s12, s23, left, right):
            assert is_valid_divisor(D, model)
        assert left == right
        assert s12 == cantor_add(D2, D1, C)
        assert cantor_add(D1, O, C) == D1
        assert cantor_add(D1, -D1, C).is_identity()


def test_zeta_example_over_f3():
    C = x5_plus_1(3)
    Z = zeta_from_counts(C)
    assert Z.a1 == 0
    N2 = hyper_count_two_charts(*_over(C, 2))
    assert Z.a2 == -(9 + 1 - N2) // 2
    assert Z.numerator.coeffs[3] == 3 * Z.a1


@pytest.mark.parametrize("C", [c for c in CURVES if c.q == 3], ids=curve_id)
def test_zeta_predicts_higher_counts_over_f3(C):
    Z = zeta_from_counts(C)
    N = counts_from_zeta(Z.numerator, 4)
    assert N[:2] == [count_curve_points(C, 1), count_curve_points(C, 2)]
    assert N[2] == hyper_count_two_charts(*_over(C, 3))
    assert N[3] == count_curve_points(C, 4)


@pytest.mark.parametrize("C", CURVES, ids=curve_id)
def test_zeta_is_a_valid_weil_numerator(C):
    Z = zeta_from_counts(C)
    assert check_weil(Z.numerator).passed
    assert Z.a1**2 <= 16 * C.q and abs(Z.a2) <= 6 * C.q
    lo, hi = weil_interval(C.q)
    assert lo <= Z.jacobian_order <= hi


def test_order_check_on_x5_plus_1_over_f7():
    C = x5_plus_1(7)
    Z = zeta_from_counts(C)
    assert jacobian_order_check(C, Z, trials=20, seed=1)
    # the group exponent divides P(1) but not P(1) + 1
    assert not jacobian_order_check(C, Z.jacobian_order + 1, trials=20, seed=1)


def test_order_check_requires_a_trial():
    with pytest.raises(ValueError):
        jacobian_order_check(x5_plus_1(7), 5, trials=0)


@pytest.mark.parametrize("C", CURVES, ids=curve_id)
def test_jacobian_order_annihilates(C):
    assert jacobian_order_check(C, zeta_from_counts(C), trials=20, seed=C.q)


def test_weil_interval_examples():
    assert weil_interval(7) == (8, 176)
    for q in (3, 4, 5, 9, 11, 49, 101, 3**7):
        lo, hi = weil_interval(q)
        r = math.sqrt(q)
        assert lo == max(1, math.ceil((r - 1) ** 4 - 1e-9))
        assert hi == math.floor((r + 1) ** 4 + 1e-9)


def test_bsgs_identity_has_order_one():
    C = x5_plus_1(7)
    assert bsgs_order_in_interval(C, C.jacobian.identity()) == 1


@pytest.mark.parametrize("C", [x5_plus_1(7)] + CURVES, ids=curve_id)
def test_bsgs_order_divides_jacobian_order(C):
    P1 = zeta_from_counts(C).jacobian_order
    rng = random.Random(11)
    for _ in range(5):
        D = random_divisor(C, rng)
        n = bsgs_order_in_interval(C, D)
        assert P1 % n == 0
        assert cantor_mul(n, D, C).is_identity()
        for r in (2, 3, 5, 7):
            if n % r == 0:
                assert not cantor_mul(n // r, D, C).is_identity()


def test_bsgs_cap():
    with pytest.raises(CapExceeded):
        bsgs_order_in_interval(x5_plus_1(7), x5_plus_1(7).jacobian.identity(), cap=10)
