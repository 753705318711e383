import math

import pytest

from refbit.distributions import (
    Provenance,
    SectorDistribution,
    asymptotic_distribution,
    fisher_deviation,
    qfi,
    sector_distribution,
    sector_distribution_asymptotic,
    window_mass,
)
from refbit.su2 import Spin


def test_two_refbits():
    d = sector_distribution(2, Spin(1))
    assert dict(d.items()) == {0: 0.25, 2: 0.75}


def test_three_spin_one():
    d = sector_distribution(3, Spin(2))
    expected = {0: 1 / 27, 2: 9 / 27, 4: 10 / 27, 6: 7 / 27}
    for t, w in expected.items():
        assert d[t] == pytest.approx(w, abs=1e-15)


@pytest.mark.parametrize("n", [1, 2, 5, 10])
@pytest.mark.parametrize("tj", [1, 2, 3, 4])
def test_normalized(n, tj):
    d = sector_distribution(n, Spin(tj))
    assert abs(d.total() - 1) < 1e-12
    assert d.provenance is Provenance.EXACT


def test_large_n_no_overflow():
    d = sector_distribution(3000, Spin(1))
    assert abs(d.total() - 1) < 1e-12
    d = sector_distribution(400, Spin(3))
    assert abs(d.total() - 1) < 1e-12


def test_half_fast_path_agrees_with_dp():
    from refbit.su2 import tensor_power_multiplicities

    for n in (7, 20, 33):
        t = tensor_power_multiplicities(n, Spin(1))
        d = sector_distribution(n, Spin(1))
        for s, m in t.items():
            assert d[s] == pytest.approx((s + 1) * m / 2**n, rel=1e-14)


def test_asymptotic_example():
    # sqrt(27 / (8 pi 100^3 (1/2)^3 (3/2)^3))
    expected = math.sqrt(8 / (math.pi * 1e6))
    got = sector_distribution_asymptotic(100, Spin(1), 0)
    assert got == pytest.approx(expected, rel=1e-12)
    exact = sector_distribution(100, Spin(1))[0]
    assert abs(got / exact - 1) < 0.05


def test_asymptotic_close_to_exact_near_peak():
    n, j = 400, Spin(2)
    exact = sector_distribution(n, j)
    peak = max(exact.weights, key=exact.weights.get)
    assert abs(sector_distribution_asymptotic(n, j, peak) / exact[peak] - 1) < 0.05
    asym = asymptotic_distribution(n, j)
    assert asym.provenance is Provenance.ASYMPTOTIC
    assert abs(asym.total() - 1) < 0.05


def test_qfi_and_deviation():
    assert qfi(3, Spin(1)) == pytest.approx(3.0)
    assert qfi(1, Spin(2)) == pytest.approx(8 / 3)
    assert fisher_deviation(2, Spin(1), 1, Spin(2)) == pytest.approx(0.5)
    assert fisher_deviation(1, Spin(2), 3, Spin(1)) == pytest.approx(0.25)
    assert fisher_deviation(3, Spin(1), 1, Spin(3)) == pytest.approx(1.5)


def test_window_mass():
    d = sector_distribution(2, Spin(1))
    assert window_mass(d, 0) == 0.75
    assert window_mass(d, 2) == pytest.approx(1.0)
    d = sector_distribution(4, Spin(1))  # 2, 9, 5 over 16
    assert window_mass(d, 2) == pytest.approx(14 / 16)
    with pytest.raises(ValueError):
        window_mass(d, -1)


def test_distribution_rejects_negative():
    with pytest.raises(ValueError):
        SectorDistribution(1, Spin(1), {1: -0.1})
