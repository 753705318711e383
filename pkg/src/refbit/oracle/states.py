"""Dense Bell states, total angular momentum and sector projections."""
from __future__ import annotations

import os
from functools import lru_cache, reduce

import numpy as np

from ..quadrature import character, haar_class_quadrature
from ..su2 import Spin
from .rotations import RotationParam, spin_matrices, wigner_d

DEFAULT_DIM_CAP = 4096


class DimensionCapError(ValueError):
    pass


class OracleError(RuntimeError):
    """An internal consistency check of the numeric oracle failed."""


def dim_cap() -> int:
    return int(os.environ.get("REFBIT_DIM_CAP", DEFAULT_DIM_CAP))


def check_dim(size: int, what: str):
    cap = dim_cap()
    if size > cap:
        raise DimensionCapError(f"{what} needs dimension {size}, above the cap {cap} (set REFBIT_DIM_CAP)")


def bell_state(j: Spin, g: RotationParam | None = None, copies: int = 1) -> np.ndarray:
    """``((U_g (x) 1) |Phi_j>)^{(x) copies}`` as a vector ordered A1 B1 A2 B2 ...

    The cap applies to the number of amplitudes.
    """
    d = j.dim
    check_dim(d ** (2 * copies), "Bell state")
    u = np.eye(d, dtype=complex) if g is None else wigner_d(j, g)
    pair = u.reshape(-1) / np.sqrt(d)
    return reduce(np.kron, [pair] * copies)


def to_matrix(state: np.ndarray, d: int, copies: int) -> np.ndarray:
    """Regroup an A1 B1 ... An Bn vector into a matrix with rows A1..An and columns B1..Bn."""
    t = state.reshape([d, d] * copies)
    perm = list(range(0, 2 * copies, 2)) + list(range(1, 2 * copies, 2))
    return t.transpose(perm).reshape(d**copies, d**copies)


def bell_matrix(j: Spin, g: RotationParam | None = None, copies: int = 1) -> np.ndarray:
    """Matrix form of :func:`bell_state`, ``U_g^{(x) n} / sqrt(d^n)``.

    The cap applies to the side length ``d^n``.
    """
    d = j.dim
    check_dim(d**copies, "Bell matrix")
    u = np.eye(d, dtype=complex) if g is None else wigner_d(j, g)
    return reduce(np.kron, [u] * copies) / np.sqrt(d**copies)


def total_spin_ops(j: Spin, copies: int):
    """Collective ``(Jx, Jy, Jz)`` on ``copies`` spin-j systems."""
    d = j.dim
    check_dim(d**copies, "collective spin")
    ops = []
    for single in spin_matrices(j.twice):
        tot = np.zeros((d**copies, d**copies), dtype=complex)
        for site in range(copies):
            tot += np.kron(np.kron(np.eye(d**site), single), np.eye(d ** (copies - site - 1)))
        ops.append(tot)
    return ops


@lru_cache(maxsize=32)
def sector_bases(twice_j: int, copies: int) -> dict[int, np.ndarray]:
    """Orthonormal eigenbasis of total J^2, grouped by twice the total spin."""
    ops = total_spin_ops(Spin(twice_j), copies)
    j2 = sum(o @ o for o in ops)
    w, v = np.linalg.eigh(j2)
    # j(j+1) = w  ->  2j = sqrt(4w + 1) - 1
    tw = np.sqrt(4 * np.clip(w.real, 0, None) + 1) - 1
    labels = np.rint(tw).astype(int)
    if np.max(np.abs(tw - labels)) > 1e-6:
        raise OracleError("total J^2 eigenvalues are not of the form j(j+1)")
    return {int(t): v[:, labels == t] for t in np.unique(labels)}


def sector_weights_numeric(n: int, j: Spin, rng: np.random.Generator | None = None, trials: int = 3) -> dict[int, float]:
    """Sector weights of ``n`` rotated Bell pairs from dense projections.

    Weights are computed for ``trials`` random rotations and must agree.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    bases = sector_bases(j.twice, n)
    runs = []
    for _ in range(trials):
        psi = bell_matrix(j, RotationParam.random(rng), n)
        runs.append({t: float(np.linalg.norm(b.conj().T @ psi) ** 2) for t, b in bases.items()})
    for other in runs[1:]:
        if max(abs(other[t] - runs[0][t]) for t in bases) > 1e-9:
            raise OracleError("sector weights depend on the rotation")
    return runs[0]


def multiplicity_quadrature(n: int, j: Spin, sector: Spin, tol: float = 1e-10) -> float:
    """Raw Haar integral of ``chi_j^n chi_sector``."""
    return haar_class_quadrature(lambda w: character(j.twice, w) ** n * character(sector.twice, w), tol=tol)


def multiplicity_numeric(n: int, j: Spin, sector: Spin) -> int:
    """Multiplicity of ``sector`` in ``j^{(x) n}`` by character orthogonality."""
    raw = multiplicity_quadrature(n, j, sector)
    m = round(raw)
    if abs(raw - m) > 1e-6:
        raise OracleError(f"character integral {raw} is not an integer")
    return int(m)
