"""Sector weights of N-copy Bell states and related moments."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .su2 import Spin, _check_copies, tensor_power_multiplicities


class Provenance(str, enum.Enum):
    EXACT = "exact"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class SectorDistribution:
    """Weights ``p_j`` of the Bell state of ``copies`` spin-``base`` pairs.

    Keys are twice-j. Exact distributions sum to one.
    """

    copies: int
    base: Spin
    weights: Mapping[int, float] = field(repr=False)
    provenance: Provenance = Provenance.EXACT

    def __post_init__(self):
        for t, w in self.weights.items():
            if w < 0:
                raise ValueError(f"negative weight {w} in sector {t}")
        object.__setattr__(self, "weights", MappingProxyType(dict(sorted(self.weights.items()))))

    def __getitem__(self, twice_j: int) -> float:
        return self.weights.get(twice_j, 0.0)

    def items(self):
        return self.weights.items()

    @property
    def support(self) -> list[int]:
        return [t for t, w in self.weights.items() if w > 0]

    @property
    def top(self) -> int:
        return self.copies * self.base.twice

    def total(self) -> float:
        return math.fsum(self.weights.values())

    def to_json(self) -> dict:
        return {
            "copies": self.copies,
            "twice_base": self.base.twice,
            "provenance": self.provenance.value,
            "weights": {str(t): w for t, w in self.weights.items()},
        }


def _half_weights(m: int, upto: int | None = None) -> dict[int, float]:
    """Exact spin-1/2 weights ``(2k+1)^2 C(m+1, m/2+k+1) / (2^m (m+1))``.

    Binomials are stepped with integer recurrences, so large ``m`` stays cheap.
    ``upto`` truncates at a twice-k.
    """
    top = m if upto is None else min(m, upto)
    denom = (m + 1) << m
    tk = m % 2
    r = (m + tk) // 2 + 1
    c = math.comb(m + 1, r)
    out = {}
    while tk <= top:
        w = (tk + 1) ** 2 * c / denom
        if w > 0:
            out[tk] = w
        # C(m+1, r+1) = C(m+1, r) (m+1-r) / (r+1)
        c = c * (m + 1 - r) // (r + 1)
        r += 1
        tk += 2
    return out


def sector_distribution(n: int, j: Spin) -> SectorDistribution:
    """Exact ``p_j = d_j m_j / (2J+1)^N``.

    The ratio is formed by exact integer division, so there is no overflow or
    cancellation even when the multiplicities have thousands of digits.
    """
    _check_copies(n)
    if j.twice == 1:
        weights = _half_weights(n)
    else:
        table = tensor_power_multiplicities(n, j)
        total = table.total_dim
        weights = {t: (t + 1) * mult / total for t, mult in table.items()}
        weights = {t: w for t, w in weights.items() if w > 0}
    return SectorDistribution(n, j, weights)


def sector_distribution_asymptotic(n: int, j: Spin, sector: int) -> float:
    """Gaussian large-N approximation of ``p_sector`` (``sector`` is twice-j)."""
    _check_copies(n)
    if j.twice == 0:
        raise ValueError("asymptotic form needs a nonzero base spin")
    big = j.twice / 2
    s = sector / 2
    var = n * big * (big + 1)
    amp = 27 * (2 * s + 1) ** 4 / (8 * math.pi * var**3)
    return math.sqrt(amp) * math.exp(-3 * s * s / (2 * var))


def asymptotic_distribution(n: int, j: Spin) -> SectorDistribution:
    """Asymptotic weights on every parity-compatible sector. Not normalized."""
    top = n * j.twice
    weights = {t: sector_distribution_asymptotic(n, j, t) for t in range(top % 2, top + 1, 2)}
    return SectorDistribution(n, j, weights, Provenance.ASYMPTOTIC)


def qfi(n: int, j: Spin) -> float:
    """Quantum Fisher information ``4 N J(J+1) / 3`` of the Bell state."""
    _check_copies(n)
    return float(4 * n * j.casimir / 3)


def fisher_deviation(n: int, j: Spin, m: int, k: Spin) -> float:
    """``|M K(K+1) - N J(J+1)|``, the Fisher-information mismatch."""
    _check_copies(n)
    _check_copies(m)
    return float(abs(m * k.casimir - n * j.casimir))


def window_mass(dist: SectorDistribution, twice_window: int) -> float:
    """Largest total weight in any sector window ``[x, x + window]``."""
    if twice_window < 0:
        raise ValueError("window must be non-negative")
    keys = sorted(dist.weights)
    vals = [dist.weights[t] for t in keys]
    best = 0.0
    hi = 0
    running = 0.0
    for lo in range(len(keys)):
        while hi < len(keys) and keys[hi] - keys[lo] <= twice_window:
            running += vals[hi]
            hi += 1
        best = max(best, running)
        running -= vals[lo]
    return best
