from functools import reduce

import numpy as np
import pytest
from sympy import Rational
from sympy.physics.quantum.cg import CG

from refbit.conversion import mp_fidelity_exact
from refbit.distributions import sector_distribution
from refbit.oracle import (
    DimensionCapError,
    MeasurePrepare,
    OracleError,
    RotationParam,
    bell_matrix,
    bell_state,
    build_isometry_n2,
    cg_coefficient,
    character,
    clone_discard_channel,
    dicke_embedding,
    haar_class_quadrature,
    haar_euler_quadrature,
    isometry_covariance_residual,
    isometry_fidelity_numeric,
    mp_channel_fidelity_numeric,
    multiplicity_numeric,
    sector_weights_numeric,
    single_copy_fidelity_numeric,
    spin_matrices,
    wigner_d,
)
from refbit.oracle.cases import case_names, run_cases
from refbit.oracle.states import to_matrix
from refbit.su2 import Spin, tensor_power_multiplicities


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.mark.parametrize("tj", [1, 2, 3, 4])
def test_spin_algebra(tj):
    jx, jy, jz = spin_matrices(tj)
    assert np.allclose(jx @ jy - jy @ jx, 1j * jz)
    c = jx @ jx + jy @ jy + jz @ jz
    assert np.allclose(c, tj * (tj + 2) / 4 * np.eye(tj + 1))


def test_wigner_half_z():
    w = 0.7
    u = wigner_d(Spin(1), RotationParam(axis=(0.0, 0.0, 1.0), angle=w))
    assert np.allclose(u, np.diag([np.exp(-0.5j * w), np.exp(0.5j * w)]))


@pytest.mark.parametrize("tj", [1, 2, 3])
def test_wigner_character_and_unitarity(tj, rng):
    g = RotationParam.random(rng)
    u = wigner_d(Spin(tj), g)
    assert np.allclose(u @ u.conj().T, np.eye(tj + 1), atol=1e-12)
    assert np.trace(u).real == pytest.approx(float(character(tj, g.angle)), abs=1e-12)


def test_wigner_euler_matches_axis():
    # z-y-z Euler with beta only is a rotation about y
    b = 0.9
    for tj in (1, 2, 3):
        a = wigner_d(Spin(tj), RotationParam(euler=(0.0, b, 0.0)))
        c = wigner_d(Spin(tj), RotationParam(axis=(0.0, 1.0, 0.0), angle=b))
        assert np.allclose(a, c)


def test_rotation_param_validation():
    with pytest.raises(ValueError):
        RotationParam(axis=(1.0, 1.0, 0.0), angle=0.1)
    with pytest.raises(ValueError):
        RotationParam()


def test_class_quadrature_orthonormal():
    for a in range(5):
        for b in range(5):
            v = haar_class_quadrature(lambda w: character(a, w) * character(b, w))
            assert v == pytest.approx(float(a == b), abs=1e-10)
    v = haar_class_quadrature(lambda w: character(1, w) ** 4)
    assert v == pytest.approx(2.0, abs=1e-10)


def test_euler_quadrature_normalized():
    assert haar_euler_quadrature(lambda g: 1.0) == pytest.approx(1.0)
    # second moment of a spin-1 matrix entry is 1/3
    v = haar_euler_quadrature(lambda g: abs(wigner_d(Spin(2), g)[0, 1]) ** 2)
    assert v == pytest.approx(1 / 3)


@pytest.mark.parametrize(
    "args",
    [(1, 1, 0, 1, -1, 0), (1, 1, 2, 1, 1, 2), (2, 1, 1, 0, 1, 1), (2, 2, 2, 2, -2, 0), (3, 2, 3, -1, 2, 1), (4, 3, 5, 2, -1, 1), (6, 4, 4, -4, 2, -2)],
)
def test_cg_against_sympy(args):
    j1, j2, j, m1, m2, m = args
    ref = float(CG(Rational(j1, 2), Rational(m1, 2), Rational(j2, 2), Rational(m2, 2), Rational(j, 2), Rational(m, 2)).doit())
    assert cg_coefficient(Spin(j1), Spin(j2), Spin(j), m1, m2, m) == pytest.approx(ref, abs=1e-13)


def test_cg_selection_and_orthogonality():
    assert cg_coefficient(Spin(1), Spin(1), Spin(2), 1, 1, 0) == 0.0
    assert cg_coefficient(Spin(1), Spin(1), Spin(6), 1, 1, 2) == 0.0
    with pytest.raises(ValueError):
        cg_coefficient(Spin(1), Spin(1), Spin(2), 3, 1, 4)
    j1, j2 = Spin(3), Spin(2)
    for s in (1, 3, 5):
        for mm in range(-s, s + 1, 2):
            norm = sum(
                cg_coefficient(j1, j2, Spin(s), m1, mm - m1, mm) ** 2
                for m1 in range(-3, 4, 2)
                if abs(mm - m1) <= 2
            )
            assert norm == pytest.approx(1.0)


def test_bell_state_forms_agree(rng):
    g = RotationParam.random(rng)
    v = bell_state(Spin(1), g, copies=3)
    assert np.linalg.norm(v) == pytest.approx(1.0)
    assert np.allclose(to_matrix(v, 2, 3), bell_matrix(Spin(1), g, 3))


def test_dimension_cap(monkeypatch):
    with pytest.raises(DimensionCapError):
        bell_state(Spin(1), copies=7)
    monkeypatch.setenv("REFBIT_DIM_CAP", "20000")
    assert bell_state(Spin(1), copies=7).shape == (4**7,)


@pytest.mark.parametrize("n,tj", [(1, 1), (2, 1), (3, 2), (2, 3), (4, 1)])
def test_sector_weights_numeric(n, tj, rng):
    num = sector_weights_numeric(n, Spin(tj), rng)
    exact = sector_distribution(n, Spin(tj))
    assert set(num) == set(exact.support)
    for t, w in num.items():
        assert w == pytest.approx(exact[t], abs=1e-10)


def test_multiplicity_numeric():
    assert multiplicity_numeric(6, Spin(1), Spin(0)) == 5
    assert multiplicity_numeric(2, Spin(1), Spin(6)) == 0
    assert multiplicity_numeric(3, Spin(1), Spin(0)) == 0
    t = tensor_power_multiplicities(5, Spin(3))
    for s in range(1, 16, 2):
        assert multiplicity_numeric(5, Spin(3), Spin(s)) == t[s]


@pytest.mark.parametrize("tj", [1, 2, 3, 4])
def test_dicke_intertwines(tj, rng):
    e = dicke_embedding(Spin(tj))
    g = RotationParam.random(rng)
    lhs = e @ wigner_d(Spin(tj), g)
    rhs = reduce(np.kron, [wigner_d(Spin(1), g)] * tj) @ e
    assert np.allclose(lhs, rhs, atol=1e-12)


@pytest.mark.parametrize("j,k", [(2, 1), (1, 2), (3, 1), (1, 3), (4, 2)])
def test_clone_discard_trace_preserving(j, k):
    assert clone_discard_channel(Spin(j), Spin(k)).trace_preservation_residual() < 1e-12


@pytest.mark.parametrize("j,k,expected", [(2, 1, 0.75), (1, 2, 1 / 3), (3, 1, 2 / 3), (1, 3, 1 / 6), (4, 2, 5 / 9)])
def test_single_copy_numeric(j, k, expected):
    assert single_copy_fidelity_numeric(Spin(j), Spin(k)) == pytest.approx(expected, abs=1e-8)


def test_isometry_n2(rng):
    v = build_isometry_n2(Spin(1), Spin(2))
    assert np.allclose(v.conj().T @ v, np.eye(16), atol=1e-12)
    assert isometry_fidelity_numeric(Spin(1), Spin(2)) == pytest.approx(4 / 9, abs=1e-8)
    assert isometry_covariance_residual(Spin(1), Spin(2), rng) < 1e-9
    with pytest.raises(ValueError):
        build_isometry_n2(Spin(2), Spin(1))


def test_povm_completeness():
    assert MeasurePrepare(2).completeness_residual() < 1e-8
    assert MeasurePrepare(3).completeness_residual() < 1e-8


@pytest.mark.parametrize("n,tk", [(2, 1), (3, 2), (8, 1)])
def test_mp_numeric_matches_quadrature(n, tk):
    assert mp_channel_fidelity_numeric(n, Spin(tk)) == pytest.approx(mp_fidelity_exact(n, Spin(tk)).value, abs=1e-6)


def test_oracle_error_on_inconsistent_rotation(monkeypatch):
    import refbit.oracle.states as states

    calls = iter(range(100))
    real = states.bell_matrix
    monkeypatch.setattr(states, "bell_matrix", lambda j, g, n: real(j, g, n) * (1 + 0.1 * next(calls)))
    with pytest.raises(OracleError):
        sector_weights_numeric(2, Spin(1))


def test_verify_cases_all_pass():
    recs = run_cases(seed=7)
    assert len(recs) == len(case_names()) > 100
    assert all(r.passed for r in recs), [r.case for r in recs if not r.passed]


def test_verify_tolerance_override():
    (rec,) = run_cases(["isometry:1/2->1"], tolerance=0.0)
    assert rec.passed == (rec.abs_err == 0.0)
    with pytest.raises(KeyError):
        run_cases(["no-such-case"])
