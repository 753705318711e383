"""Dense spin matrices, Wigner-D rotations and Haar quadrature over rotations."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..su2 import Spin


@dataclass(frozen=True)
class RotationParam:
    """A rotation given either by axis and angle or by z-y-z Euler angles."""

    axis: tuple[float, float, float] | None = None
    angle: float | None = None
    euler: tuple[float, float, float] | None = None

    def __post_init__(self):
        if (self.euler is None) == (self.axis is None):
            raise ValueError("give exactly one of axis/angle or euler")
        if self.axis is not None:
            if self.angle is None:
                raise ValueError("axis needs an angle")
            if abs(np.linalg.norm(self.axis) - 1) > 1e-12:
                raise ValueError(f"axis {self.axis} is not a unit vector")

    @classmethod
    def identity(cls) -> "RotationParam":
        return cls(axis=(0.0, 0.0, 1.0), angle=0.0)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "RotationParam":
        """Haar-random SU(2) element, from a uniform unit quaternion."""
        q = rng.normal(size=4)
        q /= np.linalg.norm(q)
        angle = 2 * math.acos(np.clip(q[0], -1.0, 1.0))
        v = q[1:]
        nv = np.linalg.norm(v)
        axis = (0.0, 0.0, 1.0) if nv < 1e-15 else tuple(float(x) for x in v / nv)
        return cls(axis=axis, angle=angle)


@lru_cache(maxsize=64)
def spin_matrices(twice_j: int):
    """``(Jx, Jy, Jz)`` in the basis ``m = j, j-1, ..., -j``."""
    j = twice_j / 2
    m = j - np.arange(twice_j + 1)
    jz = np.diag(m).astype(complex)
    # J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and m+1 sits one row above
    jp = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), k=1).astype(complex)
    jm = jp.conj().T
    return (jp + jm) / 2, (jp - jm) / 2j, jz


def _expi(h, angle):
    # exp(-i angle h) for Hermitian h
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * angle * w)) @ v.conj().T


def wigner_d(j: Spin, g: RotationParam) -> np.ndarray:
    """Spin-j representation matrix of ``g``."""
    jx, jy, jz = spin_matrices(j.twice)
    if g.euler is not None:
        a, b, c = g.euler
        mz = np.diag(jz).real
        return (np.exp(-1j * a * mz)[:, None] * _expi(jy, b)) * np.exp(-1j * c * mz)[None, :]
    nx, ny, nz = g.axis
    return _expi(nx * jx + ny * jy + nz * jz, g.angle)


def haar_euler_nodes(n_alpha: int = 8, n_beta: int = 8, n_gamma: int = 8):
    """Euler-angle product rule for the normalized Haar measure on SO(3).

    Trapezoid in the two z angles and Gauss-Legendre in ``cos(beta)``. Exact
    for integrands that are polynomials of low enough degree in the matrix
    entries and invariant under ``g -> -g``.
    """
    alphas = 2 * math.pi * np.arange(n_alpha) / n_alpha
    gammas = 2 * math.pi * np.arange(n_gamma) / n_gamma
    x, w = np.polynomial.legendre.leggauss(n_beta)
    betas = np.arccos(x)
    nodes, weights = [], []
    for a in alphas:
        for b, wb in zip(betas, w):
            for c in gammas:
                nodes.append(RotationParam(euler=(float(a), float(b), float(c))))
                weights.append(wb / 2 / (n_alpha * n_gamma))
    return nodes, np.array(weights)


def haar_euler_quadrature(f, n_alpha: int = 8, n_beta: int = 8, n_gamma: int = 8):
    """Haar average of ``f(g)`` over rotations. ``f`` may return arrays."""
    nodes, weights = haar_euler_nodes(n_alpha, n_beta, n_gamma)
    return sum(w * f(g) for g, w in zip(nodes, weights))
