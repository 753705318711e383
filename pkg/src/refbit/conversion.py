"""Fidelities, bounds and scans for converting N spin-J Bell pairs into M spin-K pairs."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gamma, gammainc, gammaln

from .distributions import SectorDistribution, _half_weights, sector_distribution, window_mass
from .quadrature import character, haar_class_quadrature
from .su2 import Spin, _check_copies, tensor_power_multiplicities

# roundoff allowance when checking that a fidelity lies in [0, 1]
_UNIT_SLACK = 1e-12
# two candidate values closer than this count as tied
_TIE = 1e-13


class IsometryUndefinedError(ValueError):
    """No covariant isometry exists for the requested task."""


class Method(str, enum.Enum):
    SINGLE_COPY = "single_copy"
    DET_ISO = "det_iso"
    PROB_OPT = "prob_opt"
    PROB_FILTER = "prob_filter"
    DET_UPPER = "det_upper"
    DET_ASYM = "det_asym"
    PROB_WINDOW = "prob_window"
    MP_EXACT = "mp_exact"
    MP_ASYM = "mp_asym"


@dataclass(frozen=True)
class FidelityResult:
    """A fidelity together with how it was obtained.

    ``argmax_l`` is twice the optimal coupling spin when one was searched.
    ``flags`` carries qualitative notes such as ``"refbit_protocol"``.
    """

    value: float
    method: Method
    success_probability: float | None = None
    clamped: bool = False
    argmax_l: int | None = None
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "value", _unit(self.value, "fidelity"))
        if self.success_probability is not None:
            object.__setattr__(self, "success_probability", _unit(self.success_probability, "success probability"))

    def to_json(self) -> dict:
        out = {
            "value": self.value,
            "method": self.method.value,
            "clamped": self.clamped,
            "argmax_l": self.argmax_l,
        }
        if self.success_probability is not None:
            out["success_probability"] = self.success_probability
        if self.flags:
            out["flags"] = list(self.flags)
        return out


def _unit(x, what):
    x = float(x)
    if not -_UNIT_SLACK <= x <= 1 + _UNIT_SLACK or math.isnan(x):
        raise ValueError(f"{what} {x} outside [0, 1]")
    return min(max(x, 0.0), 1.0)


@dataclass(frozen=True)
class ConversionTask:
    """Convert ``n_in`` spin-``spin_in`` pairs into ``n_out`` spin-``spin_out`` pairs."""

    n_in: int
    spin_in: Spin
    n_out: int
    spin_out: Spin

    def __post_init__(self):
        _check_copies(self.n_in)
        _check_copies(self.n_out)
        if not isinstance(self.spin_in, Spin) or not isinstance(self.spin_out, Spin):
            raise TypeError("spins must be Spin instances")

    @property
    def top_in(self) -> int:
        """Twice N J."""
        return self.n_in * self.spin_in.twice

    @property
    def top_out(self) -> int:
        """Twice M K."""
        return self.n_out * self.spin_out.twice

    @property
    def same_parity(self) -> bool:
        return (self.top_in - self.top_out) % 2 == 0


@lru_cache(maxsize=256)
def _dist(n: int, twice: int) -> SectorDistribution:
    return sector_distribution(n, Spin(twice))


@lru_cache(maxsize=256)
def _support(n: int, twice: int) -> tuple[int, ...]:
    return tuple(tensor_power_multiplicities(n, Spin(twice)).support)


def single_copy_fidelity(j: Spin, k: Spin) -> FidelityResult:
    """Optimal fidelity for one spin-J pair into one spin-K pair."""
    value = j.dim / (k.dim * (abs(j.twice - k.twice) + 1))
    return FidelityResult(value, Method.SINGLE_COPY)


def det_iso_fidelity(task: ConversionTask) -> FidelityResult:
    """Fidelity of the covariant isometry, ``(sum_j sqrt(p_j p'_j))^2``."""
    if task.top_in > task.top_out:
        raise IsometryUndefinedError("isometry needs N J <= M K")
    if not task.same_parity:
        raise IsometryUndefinedError("isometry needs N J and M K of equal parity")
    p = _dist(task.n_in, task.spin_in.twice)
    q = _dist(task.n_out, task.spin_out.twice)
    overlap = math.fsum(math.sqrt(w * q[t]) for t, w in p.items())
    return FidelityResult(overlap**2, Method.DET_ISO)


def _prob_opt_scan(p_out: SectorDistribution, support_in, top_in: int):
    """Value and twice-l of ``max_l sum_k p_k f_k(l)``."""
    ks = np.array([t for t, _ in p_out.items()])
    pk = np.array([w for _, w in p_out.items()])
    dk = ks + 1.0
    # prefix[t + 1] = sum of d_j over supported j with twice-j <= t
    mask = np.zeros(top_in + 1)
    mask[list(support_in)] = 1.0
    prefix = np.concatenate([[0.0], np.cumsum(mask * (np.arange(top_in + 1) + 1))])
    top_out = p_out.top
    best, best_l = -1.0, None
    for tl in range((top_in + top_out) % 2, top_in + top_out + 1, 2):
        lo = np.abs(ks - tl)
        hi = np.minimum(top_in, ks + tl)
        ok = hi >= lo
        s = np.where(ok, prefix[np.minimum(hi, top_in) + 1] - prefix[np.minimum(lo, top_in + 1)], 0.0)
        val = float(np.sum(pk * s / (dk * (tl + 1))))
        if val > best + _TIE:
            best, best_l = val, tl
    return best, best_l


def prob_opt_fidelity(task: ConversionTask) -> FidelityResult:
    """Optimal fidelity over all probabilistic covariant machines.

    Returns the maximizing coupling spin in ``argmax_l``; ties go to the smaller l.
    """
    p_out = _dist(task.n_out, task.spin_out.twice)
    support = _support(task.n_in, task.spin_in.twice)
    value, tl = _prob_opt_scan(p_out, support, task.top_in)
    return FidelityResult(value, Method.PROB_OPT, argmax_l=tl)


def _filter(n: int, j: Spin, m: int, k: Spin) -> tuple[float, float]:
    """Fidelity and success probability of the sector filter, equal parity only."""
    p_in = _dist(n, j.twice)
    p_out = _dist(m, k.twice)
    top_in = n * j.twice
    value = 1.0 if m * k.twice <= top_in else math.fsum(w for t, w in p_out.items() if t <= top_in)
    shared = [t for t in p_out.support if p_in[t] > 0]
    if not shared:
        # no common sector: the filter never fires
        return value, 0.0
    c = min(p_in[t] / p_out[t] for t in shared)
    success = min(1.0, c * math.fsum(p_out[t] for t in shared))
    return value, success


def prob_filter_fidelity(task: ConversionTask) -> FidelityResult:
    """Probabilistic sector filter, fidelity one whenever ``M K <= N J``.

    With mismatched parity the input is first analyzed into refbits, one is
    discarded and the output is synthesized; stage probabilities multiply.
    """
    if task.n_in < 2:
        raise ValueError("the probabilistic filter needs at least two input copies")
    j, k = task.spin_in, task.spin_out
    if task.same_parity:
        value, success = _filter(task.n_in, j, task.n_out, k)
        return FidelityResult(value, Method.PROB_FILTER, success_probability=success)
    refbits = task.top_in
    if refbits < 2:
        raise ValueError("parity change needs at least two intermediate refbits")
    half = Spin(1)
    _, s1 = _filter(task.n_in, j, refbits, half)
    value, s3 = _filter(refbits - 1, half, task.n_out, k)
    return FidelityResult(value, Method.PROB_FILTER, success_probability=s1 * s3, flags=("refbit_protocol",))


def exact_probabilistic_feasible(task: ConversionTask) -> bool:
    """Whether a probabilistic machine reaches fidelity exactly one."""
    if task.n_in < 2:
        raise ValueError("feasibility criterion holds for at least two input copies")
    return task.top_in >= task.top_out


def det_upper_bound(task: ConversionTask) -> FidelityResult:
    """Upper bound ``(N J(J+1) / M K(K+1))^{3/2}`` on deterministic fidelity."""
    den = task.n_out * task.spin_out.casimir
    if den == 0:
        raise ValueError("bound needs a nonzero output spin")
    ratio = float(task.n_in * task.spin_in.casimir / den)
    raw = ratio**1.5
    return FidelityResult(min(1.0, raw), Method.DET_UPPER, clamped=raw > 1)


def det_asymptotic_fidelity(task: ConversionTask) -> FidelityResult:
    """Leading-order fidelity ``1 - 3 D^2 / (8 S^2)`` for nearby Fisher information."""
    s = task.n_in * task.spin_in.casimir
    if s == 0:
        raise ValueError("asymptotic fidelity needs a nonzero input spin")
    delta = abs(task.n_out * task.spin_out.casimir - s)
    raw = float(1 - 3 * delta**2 / (8 * s**2))
    flags = ("outside_validity",) if delta >= s else ()
    return FidelityResult(max(0.0, raw), Method.DET_ASYM, clamped=raw < 0, flags=flags)


def prob_upper_bound_window(task: ConversionTask) -> FidelityResult:
    """``(1 + P) / 2`` with P the largest output weight in a window of width N J."""
    if task.top_out < task.top_in:
        raise ValueError("window bound needs M K >= N J")
    p_out = _dist(task.n_out, task.spin_out.twice)
    return FidelityResult((1 + window_mass(p_out, task.top_in)) / 2, Method.PROB_WINDOW)


def success_probability_bound(n: int, j: Spin, k: Spin, ratio: float) -> float:
    """Bound on the success probability of a probabilistic conversion.

    ``ratio`` is ``R = M/N`` and must be at least ``J(J+1) / K(K+1)``.
    """
    _check_copies(n)
    if k.twice == 0 or j.twice == 0:
        raise ValueError("bound needs nonzero spins")
    r_star = float(j.casimir / k.casimir)
    if ratio < r_star:
        raise ValueError(f"ratio {ratio} below the threshold {r_star}")
    big = j.twice / 2
    expo = -(3 * n * big / (2 * (big + 1))) * (1 - r_star / ratio)
    return min(1.0, (ratio / r_star) ** 1.5 * math.exp(expo))


def unbreakable_bound(j: Spin) -> float:
    """Single-copy fidelity ceiling ``(1 + 1/(2J)) / 2`` for refbit outputs."""
    if j.twice < 1:
        raise ValueError("bound needs J >= 1/2")
    return 0.5 * (1 + 1 / j.twice)


def analyzer_filter_lower_bound(n: int, j: Spin, m: int) -> float:
    """Hoeffding lower bound on the fidelity of analyzing into ``m`` refbits."""
    _check_copies(n)
    _check_copies(m)
    big = j.twice / 2
    return max(0.0, 1 - (m + 1) * math.exp(-2 * n * n * big * big / (m + 1)))


@dataclass(frozen=True)
class ScanPoint:
    alpha: float
    m: int
    fidelity: float


def two_copy_refbits(j: Spin, alpha: float) -> int:
    """Refbit count for ``alpha``: ``floor(alpha J^2)``, lowered to an even number."""
    m = math.floor(alpha * j.twice * j.twice / 4)
    m -= m % 2
    if m < 2:
        raise ValueError(f"alpha={alpha} gives fewer than two output refbits")
    return m


# above this many refbits the scan uses log-gamma weights instead of exact binomials
_EXACT_SCAN_LIMIT = 4096


def _half_weights_lgamma(m: int, upto: int) -> dict[int, float]:
    tk = np.arange(m % 2, min(m, upto) + 1, 2)
    r = (m + tk) // 2 + 1
    logw = 2 * np.log(tk + 1.0) + gammaln(m + 2) - gammaln(r + 1) - gammaln(m + 2 - r) - np.log(m + 1.0) - m * math.log(2)
    return dict(zip(tk.tolist(), np.exp(logw).tolist()))


def two_copy_fidelity(j: Spin, m: int) -> float:
    """Isometric fidelity of two spin-J pairs into ``m`` refbits."""
    d2 = (j.twice + 1) ** 2
    upto = 2 * j.twice
    q = _half_weights(m, upto=upto) if m <= _EXACT_SCAN_LIMIT else _half_weights_lgamma(m, upto)
    s = math.fsum(math.sqrt((t + 1) / d2 * w) for t, w in q.items())
    return s * s


def _scan_one(args):
    twice, alpha = args
    j = Spin(twice)
    m = two_copy_refbits(j, alpha)
    return ScanPoint(float(alpha), m, two_copy_fidelity(j, m))


def two_copy_analyzer_scan(j: Spin, alphas, jobs: int = 1) -> list[ScanPoint]:
    """Fidelity of two spin-J pairs into ``alpha J^2`` refbits, for each alpha."""
    args = [(j.twice, float(a)) for a in alphas]
    if jobs > 1 and len(args) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_scan_one, args))
    return [_scan_one(a) for a in args]


def two_copy_closed_form(alpha: float) -> float:
    """Large-J limit ``sqrt(2 alpha^2 / pi) * gamma_lower(5/4, 4/alpha)^2``."""
    lower = gammainc(1.25, 4 / alpha) * gamma(1.25)
    return float(math.sqrt(2 * alpha**2 / math.pi) * lower**2)


def mp_fidelity_exact(n: int, k: Spin, tol: float = 1e-10) -> FidelityResult:
    """Measure-and-prepare fidelity from ``n`` refbits to one spin-K pair.

    Integrates ``chi_K^2 / d_K^2 * |sum_j sqrt(p_j) chi_j|^2`` over SU(2).
    """
    p = _dist(n, 1)
    ts = np.array([t for t, _ in p.items()])
    amps = np.sqrt([w for _, w in p.items()])

    def integrand(w):
        s = sum(a * character(int(t), w) for t, a in zip(ts, amps))
        return (character(k.twice, w) / k.dim) ** 2 * s**2

    return FidelityResult(haar_class_quadrature(integrand, tol=tol), Method.MP_EXACT)


def mp_asymptotic(n: int, k: Spin) -> FidelityResult:
    """Large-N approximation ``1 - (2K+1)^2 / (4N)``."""
    _check_copies(n)
    raw = 1 - k.dim**2 / (4 * n)
    return FidelityResult(max(0.0, raw), Method.MP_ASYM, clamped=raw < 0)
