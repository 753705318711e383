"""Explicit channels, isometries and POVMs checked against the closed forms."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from itertools import combinations

import numpy as np

from ..distributions import sector_distribution
from ..su2 import Spin
from .rotations import RotationParam, haar_euler_quadrature, wigner_d
from .states import check_dim, sector_bases


@dataclass(frozen=True)
class KrausChannel:
    kraus: tuple[np.ndarray, ...]

    @property
    def in_dim(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.kraus[0].shape[0]

    def trace_preservation_residual(self) -> float:
        s = sum(a.conj().T @ a for a in self.kraus)
        return float(np.max(np.abs(s - np.eye(self.in_dim))))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(a @ rho @ a.conj().T for a in self.kraus)


def dicke_embedding(j: Spin) -> np.ndarray:
    """Isometry from spin ``j`` onto the symmetric subspace of ``2j`` qubits.

    ``|j, m>`` goes to the normalized sum of bit strings with ``j - m`` ones.
    """
    n = j.twice
    check_dim(2**n, "symmetric embedding")
    e = np.zeros((2**n, n + 1))
    for i in range(n + 1):
        norm = 1 / math.sqrt(math.comb(n, i))
        for ones in combinations(range(n), i):
            e[sum(1 << (n - 1 - q) for q in ones), i] = norm
    return e


def clone_discard_channel(j: Spin, k: Spin) -> KrausChannel:
    """Optimal covariant spin-j to spin-k channel through symmetric qubits.

    For ``j <= k`` this is the optimal universal cloner, for ``j > k`` a
    partial trace over ``2(j - k)`` qubits.
    """
    ej, ek = dicke_embedding(j), dicke_embedding(k)
    extra = abs(k.twice - j.twice)
    check_dim(2 ** max(j.twice, k.twice), "clone/discard channel")
    kraus = []
    for i in range(2**extra):
        e_i = np.zeros((2**extra, 1))
        e_i[i] = 1
        if j.twice <= k.twice:
            a = math.sqrt(j.dim / k.dim) * ek.T @ np.kron(ej, e_i)
        else:
            a = ek.T @ np.kron(np.eye(2**k.twice), e_i.T) @ ej
        kraus.append(a.astype(complex))
    return KrausChannel(tuple(kraus))


def local_pair_fidelity(channel: KrausChannel, j: Spin, k: Spin, g: RotationParam) -> float:
    """Fidelity with the rotated spin-k pair after both halves go through ``channel``."""
    phi_in = (wigner_d(j, g) / math.sqrt(j.dim)).reshape(-1)
    phi_out = (wigner_d(k, g) / math.sqrt(k.dim)).reshape(-1)
    total = 0.0
    for a in channel.kraus:
        for b in channel.kraus:
            total += abs(phi_out.conj() @ (np.kron(a, b) @ phi_in)) ** 2
    return total


def single_copy_fidelity_numeric(j: Spin, k: Spin, nodes: int = 8) -> float:
    """Haar average of :func:`local_pair_fidelity` for the clone/discard channel."""
    ch = clone_discard_channel(j, k)
    return float(haar_euler_quadrature(lambda g: local_pair_fidelity(ch, j, k, g), nodes, nodes, nodes))


def _log_fact(x: int) -> float:
    return math.lgamma(x + 1)


def cg_coefficient(j1: Spin, j2: Spin, j: Spin, m1: int, m2: int, m: int) -> float:
    """Clebsch-Gordan coefficient ``<j1 m1; j2 m2 | j m>`` (Condon-Shortley).

    Projections are twice-values. Returns 0 when the selection rules fail.
    """
    for spin, proj in ((j1, m1), (j2, m2), (j, m)):
        if abs(proj) > spin.twice or (spin.twice - proj) % 2:
            raise ValueError(f"projection {proj}/2 invalid for spin {spin}")
    a, b, c = j1.twice, j2.twice, j.twice
    if m1 + m2 != m or not (abs(a - b) <= c <= a + b) or (a + b + c) % 2:
        return 0.0
    half = lambda *xs: sum(xs) // 2  # noqa: E731
    pre = 0.5 * (
        math.log(c + 1)
        + _log_fact(half(a, b, -c))
        + _log_fact(half(a, -b, c))
        + _log_fact(half(-a, b, c))
        - _log_fact(half(a, b, c) + 1)
        + _log_fact(half(c, m)) + _log_fact(half(c, -m))
        + _log_fact(half(a, -m1)) + _log_fact(half(a, m1))
        + _log_fact(half(b, -m2)) + _log_fact(half(b, m2))
    )
    total = 0.0
    for kk in range(0, half(a, b, -c) + 1):
        args = (
            kk,
            half(a, b, -c) - kk,
            half(a, -m1) - kk,
            half(b, m2) - kk,
            half(c, -b, m1) + kk,
            half(c, -a, -m2) + kk,
        )
        if min(args) < 0:
            continue
        total += (-1) ** kk * math.exp(pre - sum(_log_fact(x) for x in args))
    return total


def coupled_basis(j: Spin) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Columns ``|s, m>`` of ``j (x) j`` in the product basis, and their labels."""
    d = j.dim
    proj = [j.twice - 2 * i for i in range(d)]
    cols, labels = [], []
    for s in range(0, 2 * j.twice + 1, 2):
        sp = Spin(s)
        for mm in range(s, -s - 1, -2):
            v = np.zeros(d * d)
            for i1, m1 in enumerate(proj):
                for i2, m2 in enumerate(proj):
                    if m1 + m2 == mm:
                        v[i1 * d + i2] = cg_coefficient(j, j, sp, m1, m2, mm)
            cols.append(v)
            labels.append((s, mm))
    return np.array(cols).T, labels


def build_isometry_n2(j: Spin, k: Spin) -> np.ndarray:
    """Covariant isometry taking two spin-j pairs to two spin-k pairs.

    The result acts on the ordering ``(A1 A2)(B1 B2)`` as ``W (x) W`` with
    ``W`` mapping each coupled state ``|s, m>`` of ``j (x) j`` to the same
    label in ``k (x) k``. For two copies every sector is multiplicity free, so
    ``W`` is already an isometry on the whole input and needs no completion.
    """
    if j.twice > k.twice:
        raise ValueError("isometry needs j <= k")
    check_dim(k.dim**4, "two-pair isometry")
    bj, lj = coupled_basis(j)
    bk, lk = coupled_basis(k)
    col = {lab: i for i, lab in enumerate(lk)}
    w = bk[:, [col[lab] for lab in lj]] @ bj.T
    return np.kron(w, w)


def isometry_pair_fidelity(v: np.ndarray, j: Spin, k: Spin, g: RotationParam) -> float:
    def two_pairs(s):
        u = wigner_d(s, g)
        return (np.kron(u, u) / s.dim).reshape(-1)

    return float(abs(two_pairs(k).conj() @ v @ two_pairs(j)) ** 2)


def isometry_fidelity_numeric(j: Spin, k: Spin, nodes: int = 8) -> float:
    v = build_isometry_n2(j, k)
    return float(haar_euler_quadrature(lambda g: isometry_pair_fidelity(v, j, k, g), nodes, nodes, nodes))


def isometry_covariance_residual(j: Spin, k: Spin, rng: np.random.Generator, trials: int = 3) -> float:
    """Largest entry of ``(U_g^2 (x) U_h^2) V - V (U_g^2 (x) U_h^2)`` over random g, h."""
    v = build_isometry_n2(j, k)
    worst = 0.0
    for _ in range(trials):
        g, h = RotationParam.random(rng), RotationParam.random(rng)

        def rep(s):
            ug, uh = wigner_d(s, g), wigner_d(s, h)
            return reduce(np.kron, [ug, ug, uh, uh])

        worst = max(worst, float(np.max(np.abs(rep(k) @ v - v @ rep(j)))))
    return worst


class MeasurePrepare:
    """Covariant POVM on ``n`` refbits, built densely in operator form.

    A vector of the ``n``-pair space is stored as a ``2^n x 2^n`` matrix
    (rows are the A halves). The POVM element for ``g`` is ``|eta_g><eta_g|``
    with ``eta_g = sum_j d_j P_j U_g^{(x) n} / sqrt(p_j 2^n)``.
    """

    def __init__(self, n: int):
        self.n = n
        self.side = 2**n
        check_dim(self.side, "measure-and-prepare POVM")
        self.bases = sector_bases(1, n)
        self.proj = {t: b @ b.conj().T for t, b in self.bases.items()}
        self.p = sector_distribution(n, Spin(1))

    def eta(self, g: RotationParam) -> np.ndarray:
        u = reduce(np.kron, [wigner_d(Spin(1), g)] * self.n)
        return sum((t + 1) * self.proj[t] @ u / math.sqrt(self.p[t] * self.side) for t in self.proj)

    def likelihood(self, g: RotationParam) -> float:
        """Outcome density for ``g`` when the true frame is the identity."""
        bell = np.eye(self.side) / math.sqrt(self.side)
        return float(abs(np.vdot(self.eta(g), bell)) ** 2)

    def completeness_residual(self, nodes: int = 8) -> float:
        """Distance between the averaged POVM and the projector onto the orbit span."""
        avg = haar_euler_quadrature(lambda g: np.outer(self.eta(g).reshape(-1), self.eta(g).reshape(-1).conj()), nodes, nodes, nodes)
        # orbit span, from rotated Bell states at independent sample points
        rng = np.random.default_rng(12345)
        samples = np.array([reduce(np.kron, [wigner_d(Spin(1), RotationParam.random(rng))] * self.n).reshape(-1) for _ in range(4 * self.side)]).T
        u, s, _ = np.linalg.svd(samples, full_matrices=False)
        span = u[:, s > 1e-8 * s[0]]
        return float(np.max(np.abs(avg - span @ span.conj().T)))


def mp_channel_fidelity_numeric(n: int, k: Spin, axis=(0.6, 0.0, 0.8), tol: float = 1e-10) -> float:
    """Measure-and-prepare fidelity from dense POVM likelihoods.

    The integrand is a class function, so it is sampled along one rotation
    axis and integrated with the class-function quadrature.
    """
    from ..quadrature import haar_class_quadrature

    mp = MeasurePrepare(n)

    def f(ws):
        out = []
        for w in ws:
            g = RotationParam(axis=axis, angle=float(w))
            overlap = abs(np.trace(wigner_d(k, g))) ** 2 / k.dim**2
            out.append(mp.likelihood(g) * overlap)
        return np.array(out)

    return haar_class_quadrature(f, tol=tol)
