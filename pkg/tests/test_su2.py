import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from refbit.su2 import (
    MultiplicityTable,
    Spin,
    coupling_multiplicity,
    couple_range,
    multiplicity_half_closed_form,
    tensor_power_multiplicities,
    triangle,
)


def test_spin_parsing():
    assert Spin.of("3/2") == Spin(3)
    assert Spin.of(1) == Spin(2)
    assert Spin.of(0.5).value == Fraction(1, 2)
    assert Spin(4).dim == 5
    assert Spin(3).casimir == Fraction(15, 4)
    assert str(Spin(3)) == "3/2" and str(Spin(4)) == "2"
    with pytest.raises(ValueError):
        Spin.of("1/3")
    with pytest.raises(ValueError):
        Spin(-1)
    with pytest.raises(TypeError):
        Spin(1.0)


def test_couple_range():
    assert couple_range(Spin(1), Spin(1)) == [Spin(0), Spin(2)]
    assert couple_range(Spin(2), Spin(3)) == [Spin(1), Spin(3), Spin(5)]
    assert triangle(2, 2, 4) and not triangle(2, 2, 3) and not triangle(1, 1, 4)


# counted by hand from repeated coupling
FROZEN = {
    (1, 1): {1: 1},
    (2, 1): {0: 1, 2: 1},
    (3, 1): {1: 2, 3: 1},
    (4, 1): {0: 2, 2: 3, 4: 1},
    (3, 2): {0: 1, 2: 3, 4: 2, 6: 1},
    (2, 3): {0: 1, 2: 1, 4: 1, 6: 1},
    (8, 1): {0: 14, 2: 28, 4: 20, 6: 7, 8: 1},
}


@pytest.mark.parametrize("key", FROZEN)
def test_frozen_tables(key):
    n, tj = key
    t = tensor_power_multiplicities(n, Spin(tj))
    assert dict(t.items()) == FROZEN[key]
    assert t.check_completeness()


def test_large_table_exact():
    t = tensor_power_multiplicities(60, Spin(1))
    # Catalan number C_30 counts singlets of 60 spin-1/2
    assert t[0] == math.comb(60, 30) // 31
    assert t.check_completeness()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 6))
def test_completeness_property(n, tj):
    t = tensor_power_multiplicities(n, Spin(tj))
    assert t.check_completeness()
    assert all(m > 0 for _, m in t.items())
    assert all((s - n * tj) % 2 == 0 for s in t.support)
    assert max(t.support) == n * tj


def test_invalid_copies():
    for bad in (0, -3, 1.5, True):
        with pytest.raises(ValueError):
            tensor_power_multiplicities(bad, Spin(1))


@pytest.mark.parametrize("m", range(2, 41, 2))
def test_closed_form_matches_dp(m):
    t = tensor_power_multiplicities(m, Spin(1))
    for s in range(0, m + 1, 2):
        assert multiplicity_half_closed_form(m, Spin(s)) == t[s]


def test_closed_form_examples():
    assert multiplicity_half_closed_form(8, Spin(2)) == 28
    assert multiplicity_half_closed_form(2, Spin(0)) == 1
    assert multiplicity_half_closed_form(4, Spin(4)) == 1
    with pytest.raises(ValueError):
        multiplicity_half_closed_form(5, Spin(1))
    with pytest.raises(ValueError):
        multiplicity_half_closed_form(4, Spin(6))


def test_coupling_multiplicity():
    t = tensor_power_multiplicities(2, Spin(2))
    # (0 + 1 + 2) (x) 1 contains 1 three times
    assert coupling_multiplicity(t, Spin(2), Spin(2)) == 3
    assert coupling_multiplicity(t, Spin(6), Spin(2)) == 1
    assert coupling_multiplicity(t, Spin(1), Spin(2)) == 0


def test_table_json_round_trip():
    t = tensor_power_multiplicities(40, Spin(3))
    obj = t.to_json()
    assert all(isinstance(v, str) for v in obj["entries"].values())
    back = MultiplicityTable.from_json(obj)
    assert dict(back.items()) == dict(t.items())
    assert back.base == t.base and back.copies == 40
