import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sturmdyn import (
    DepthExhaustedError,
    RotationNumber,
    convergents,
    growth_certificate,
    real_value,
)

GOLDEN_VALUE = (math.sqrt(5.0) - 1.0) / 2.0


def test_golden_value():
    g = RotationNumber.golden()
    assert abs(real_value(g, 30) - GOLDEN_VALUE) < 1e-12


def test_silver_value_squares_to_two():
    s = RotationNumber.periodic([2])
    a = real_value(s, 30)
    assert abs((1.0 + a) ** 2 - 2.0) < 1e-12


def test_single_coefficient():
    r = RotationNumber.from_coefficients([2])
    assert real_value(r, 1) == 0.5


def test_golden_denominators_are_fibonacci(golden):
    t = convergents(golden, 5)
    assert t.q == (1, 1, 2, 3, 5, 8)
    assert t.p == (0, 1, 1, 2, 3, 5)


def test_all_twos_denominators(silver):
    t = convergents(silver, 3)
    assert t.q == (1, 2, 5, 12)


def test_base_case_matches_first_coefficient():
    for a1 in (1, 2, 7):
        r = RotationNumber.from_coefficients([a1, 3, 1])
        t = convergents(r, 1)
        assert (t.p[1], t.q[1]) == (1, a1)


def test_recursions_and_coprimality():
    r = RotationNumber.periodic([1, 3, 2], head=(4,))
    t = convergents(r, 40)
    for k in range(2, 41):
        a = r.coefficient(k)
        assert t.p[k] == a * t.p[k - 1] + t.p[k - 2]
        assert t.q[k] == a * t.q[k - 1] + t.q[k - 2]
    for k in range(41):
        assert math.gcd(t.p[k], t.q[k]) == 1


def test_truncations_bracket_the_limit(golden):
    deep = real_value(golden, 60)
    for K in range(2, 12):
        lo, hi = sorted((real_value(golden, K), real_value(golden, K + 1)))
        assert lo < deep < hi
        # same-parity truncations approach from one side
        assert (real_value(golden, K) - deep) * (real_value(golden, K + 2) - deep) > 0


def test_convergent_quality(golden):
    deep = real_value(golden, 60)
    t = convergents(golden, 20)
    for k in range(1, 21):
        assert abs(deep - t.p[k] / t.q[k]) < 1.0 / t.q[k] ** 2


class TestGrowthCertificate:
    def test_golden_depth10(self, golden):
        cert = growth_certificate(convergents(golden, 10))
        assert cert.B_est == pytest.approx(2.0, abs=1e-12)
        assert cert.depth == 10

    def test_all_twos_depth1(self, silver):
        cert = growth_certificate(convergents(silver, 1))
        assert cert.B_est == pytest.approx(3.0, abs=1e-12)

    def test_all_ones_depth1(self, golden):
        cert = growth_certificate(convergents(golden, 1))
        assert cert.B_est == pytest.approx(2.0, abs=1e-12)

    def test_bound_holds_and_is_tight(self):
        r = RotationNumber.periodic([3, 1, 2])
        t = convergents(r, 15)
        cert = growth_certificate(t)
        for k in range(1, 16):
            assert t.q[k] + 1 <= cert.B_est**k
        shaved = cert.B_est * (1.0 - 1e-12)
        assert any(t.q[k] + 1 > shaved**k for k in range(1, 16))


def test_depth_exhausted():
    r = RotationNumber.from_coefficients([1, 2])
    with pytest.raises(DepthExhaustedError):
        r.coefficient(3)
    with pytest.raises(DepthExhaustedError):
        convergents(r, 5)


def test_json_round_trip():
    r = RotationNumber.periodic([2, 1], head=(3,))
    doc = json.loads(r.to_json())
    assert doc == {"coefficients": [3], "periodic_tail": [2, 1]}
    assert RotationNumber.from_json(r.to_json()) == r


def test_from_float_recovers_golden():
    r = RotationNumber.from_float(GOLDEN_VALUE)
    assert r.approximate
    assert r.coefficients(20) == (1,) * 20
    assert abs(real_value(r, r.depth_or(30)) - GOLDEN_VALUE) < 1e-12


def test_invalid_coefficients_rejected():
    with pytest.raises(ValueError):
        RotationNumber.from_coefficients([0, 1])
    with pytest.raises(ValueError):
        RotationNumber(head=(), tail=())


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=9), min_size=1, max_size=12))
def test_recursion_properties(coeffs):
    r = RotationNumber.from_coefficients(coeffs)
    K = len(coeffs)
    t = convergents(r, K)
    assert (t.p[0], t.q[0]) == (0, 1)
    assert (t.p[1], t.q[1]) == (1, coeffs[0])
    for k in range(2, K + 1):
        assert t.p[k] == coeffs[k - 1] * t.p[k - 1] + t.p[k - 2]
        assert t.q[k] == coeffs[k - 1] * t.q[k - 1] + t.q[k - 2]
    assert all(math.gcd(t.p[k], t.q[k]) == 1 for k in range(K + 1))
    # p_1/q_1 = 1/a_1 can equal 1; from depth 2 on the value is interior
    assert 0.0 < real_value(r, K) <= 1.0
    if K >= 2:
        assert real_value(r, K) < 1.0
    cert = growth_certificate(t)
    assert cert.B_est >= 2.0
    assert all(t.q[k] + 1 <= cert.B_est**k for k in range(1, K + 1))
