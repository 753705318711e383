"""SU(2) spins, tensor-power multiplicities and coupling counts.

Spins are stored as twice their value so that half-integers stay exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterator, Mapping


@dataclass(frozen=True, order=True)
class Spin:
    """An SU(2) spin label, held as the non-negative integer ``twice = 2j``."""

    twice: int

    def __post_init__(self):
        if isinstance(self.twice, bool) or not isinstance(self.twice, int):
            raise TypeError(f"twice-spin must be an int, got {self.twice!r}")
        if self.twice < 0:
            raise ValueError(f"twice-spin must be non-negative, got {self.twice}")

    @classmethod
    def of(cls, value) -> "Spin":
        """Build from a spin value such as ``1``, ``0.5`` or ``"3/2"``."""
        frac = Fraction(value)
        twice = 2 * frac
        if twice.denominator != 1:
            raise ValueError(f"{value!r} is not a multiple of 1/2")
        return cls(int(twice))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def dim(self) -> int:
        return self.twice + 1

    @property
    def casimir(self) -> Fraction:
        """j(j+1) as an exact fraction."""
        return Fraction(self.twice * (self.twice + 2), 4)

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __str__(self):
        return str(self.twice // 2) if self.is_integer else f"{self.twice}/2"


def dim(j: Spin) -> int:
    return j.dim


def couple_range(a: Spin, b: Spin) -> list[Spin]:
    """Irreps in ``a (x) b``: |a-b|, |a-b|+1, ..., a+b."""
    lo = abs(a.twice - b.twice)
    return [Spin(t) for t in range(lo, a.twice + b.twice + 1, 2)]


def triangle(a: int, b: int, c: int) -> bool:
    """Triangle rule on twice-values, including the integer-sum parity."""
    return abs(a - b) <= c <= a + b and (a + b + c) % 2 == 0


@dataclass(frozen=True)
class MultiplicityTable:
    """Multiplicities ``m_j`` of spin ``base`` to the power ``copies``.

    ``entries`` maps twice-j to a positive Python int; zero sectors are absent.
    """

    copies: int
    base: Spin
    entries: Mapping[int, int] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", MappingProxyType(dict(sorted(self.entries.items()))))

    def __getitem__(self, twice_j: int) -> int:
        return self.entries.get(twice_j, 0)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def items(self):
        return self.entries.items()

    @property
    def support(self) -> list[int]:
        return list(self.entries)

    @property
    def top(self) -> int:
        """Twice the largest sector, ``copies * base.twice``."""
        return self.copies * self.base.twice

    @property
    def total_dim(self) -> int:
        return self.base.dim ** self.copies

    def check_completeness(self) -> bool:
        return sum((t + 1) * m for t, m in self.entries.items()) == self.total_dim

    def to_json(self) -> dict:
        return {
            "copies": self.copies,
            "twice_base": self.base.twice,
            "entries": {str(t): str(m) for t, m in self.entries.items()},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "MultiplicityTable":
        entries = {int(t): int(m) for t, m in obj["entries"].items()}
        return cls(int(obj["copies"]), Spin(int(obj["twice_base"])), entries)


def _check_copies(n) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValueError(f"number of copies must be a positive int, got {n!r}")
    return n


def tensor_power_multiplicities(n: int, j: Spin) -> MultiplicityTable:
    """Multiplicity of every irrep in ``j^{(x) n}``, by repeated coupling."""
    _check_copies(n)
    counts = {j.twice: 1}
    for _ in range(n - 1):
        nxt: dict[int, int] = {}
        for t, m in counts.items():
            for s in range(abs(t - j.twice), t + j.twice + 1, 2):
                nxt[s] = nxt.get(s, 0) + m
        counts = nxt
    return MultiplicityTable(n, j, {t: m for t, m in counts.items() if m})


def _half_multiplicity(m: int, twice_k: int) -> int:
    # (2k+1)/(M+1) * C(M+1, M/2+k+1); valid for either parity of M
    if (m + twice_k) % 2 or twice_k > m:
        return 0
    top = (twice_k + 1) * math.comb(m + 1, (m + twice_k) // 2 + 1)
    q, r = divmod(top, m + 1)
    assert r == 0
    return q


def multiplicity_half_closed_form(m: int, k: Spin) -> int:
    """Closed-form multiplicity of integer spin ``k`` in ``m`` spin-1/2 copies.

    Only even ``m`` is accepted, where every sector is an integer spin.
    """
    _check_copies(m)
    if m % 2:
        raise ValueError(f"closed form needs an even number of copies, got {m}")
    if not k.is_integer:
        raise ValueError(f"sector must be an integer spin for even copies, got {k}")
    if k.twice > m:
        raise ValueError(f"sector {k} exceeds the top sector {m}/2")
    return _half_multiplicity(m, k.twice)


def coupling_multiplicity(table: MultiplicityTable, l: Spin, j: Spin) -> int:
    """Multiplicity of ``l`` in ``(sum_k m_k V_k) (x) V_j``."""
    return sum(m for t, m in table.items() if triangle(t, j.twice, l.twice))
