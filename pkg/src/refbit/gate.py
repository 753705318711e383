"""Optimal covariant conversion between group representations (gate form)."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping

from .conversion import ConversionTask, prob_opt_fidelity, single_copy_fidelity
from .su2 import Spin, coupling_multiplicity, tensor_power_multiplicities


@dataclass(frozen=True)
class Irrep:
    label: str
    dim: int
    mult: int = 1


@dataclass(frozen=True)
class RepData:
    """Decomposition data for converting a representation U into V.

    ``input_irreps`` lists the irreps of U with their multiplicities,
    ``candidates`` the irreps l of ``V (x) conj(U_j)`` and ``coupling`` the
    multiplicity ``m_l^{(j)}`` keyed by ``(l, j)`` labels.
    """

    input_irreps: tuple[Irrep, ...]
    output_dim: int
    candidates: tuple[Irrep, ...]
    coupling: Mapping[tuple[str, str], int] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "input_irreps", tuple(self.input_irreps))
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(self, "coupling", dict(self.coupling))
        self.validate()

    def validate(self):
        if self.output_dim < 1:
            raise ValueError("output dimension must be positive")
        if not self.input_irreps or not self.candidates:
            raise ValueError("need at least one input irrep and one candidate")
        for r in self.input_irreps + self.candidates:
            if r.dim < 1 or r.mult < 0:
                raise ValueError(f"bad irrep {r}")
        ls = {c.label for c in self.candidates}
        js = {r.label for r in self.input_irreps}
        if len(ls) != len(self.candidates) or len(js) != len(self.input_irreps):
            raise ValueError("irrep labels must be unique")
        for (l, j), m in self.coupling.items():
            if l not in ls:
                raise ValueError(f"coupling refers to unknown candidate {l!r}")
            if j not in js:
                raise ValueError(f"coupling refers to unknown input irrep {j!r}")
            if m < 0:
                raise ValueError(f"negative coupling multiplicity for {(l, j)}")
        # V (x) conj(U_j) has dimension d_out d_j, and must split exactly into the candidates
        for r in self.input_irreps:
            got = sum(c.dim * self.coupling.get((c.label, r.label), 0) for c in self.candidates)
            if got != self.output_dim * r.dim:
                raise ValueError(
                    f"candidates cover dimension {got} of V (x) conj({r.label}), expected {self.output_dim * r.dim}"
                )

    @property
    def input_dim(self) -> int:
        return sum(r.dim * r.mult for r in self.input_irreps)

    def to_json(self) -> dict:
        return {
            "input_irreps": [{"label": r.label, "dim": r.dim, "mult": r.mult} for r in self.input_irreps],
            "output_dim": self.output_dim,
            "candidates": [{"label": c.label, "dim": c.dim} for c in self.candidates],
            "coupling": {f"{l},{j}": m for (l, j), m in self.coupling.items()},
        }

    @classmethod
    def from_json(cls, obj) -> "RepData":
        if isinstance(obj, str):
            obj = json.loads(obj)
        ins = tuple(Irrep(str(r["label"]), int(r["dim"]), int(r.get("mult", 1))) for r in obj["input_irreps"])
        cands = tuple(Irrep(str(c["label"]), int(c["dim"])) for c in obj["candidates"])
        ls = {c.label for c in cands}
        coupling = {}
        for key, m in obj["coupling"].items():
            # labels may contain commas, so take the split whose left part is a candidate
            splits = [(key[:i], key[i + 1:]) for i, ch in enumerate(key) if ch == "," and key[:i] in ls]
            if len(splits) != 1:
                raise ValueError(f"cannot parse coupling key {key!r}")
            coupling[splits[0]] = int(m)
        return cls(ins, int(obj["output_dim"]), cands, coupling)


def _scores(r: RepData):
    for c in r.candidates:
        s = sum(j.dim * r.coupling.get((c.label, j.label), 0) for j in r.input_irreps)
        yield c, s / (r.output_dim * c.dim)


def general_prob_fidelity(r: RepData) -> tuple[float, str]:
    """Optimal probabilistic gate fidelity and the maximizing candidate.

    Ties go to the first candidate in the list.
    """
    best, label = -1.0, None
    for c, s in _scores(r):
        if s > best + 1e-13:
            best, label = s, c.label
    return best, label


def optimal_is_memoryless(r: RepData) -> bool:
    """Whether a maximizing candidate occurs once in ``V (x) conj(U)``.

    Only defined for an irreducible input.
    """
    if len(r.input_irreps) != 1 or r.input_irreps[0].mult != 1:
        raise ValueError("memoryless criterion needs an irreducible input")
    j = r.input_irreps[0].label
    best, _ = general_prob_fidelity(r)
    return any(abs(s - best) <= 1e-13 and r.coupling.get((c.label, j), 0) == 1 for c, s in _scores(r))


def su2_gate_fidelity(j: Spin, k: Spin) -> float:
    return single_copy_fidelity(j, k).value


@dataclass(frozen=True)
class GateBounds:
    lower: float
    upper: float


def gate_fidelity_bounds(task: ConversionTask) -> GateBounds:
    """Gate fidelity bracket: the state fidelity F and its square."""
    upper = prob_opt_fidelity(task).value
    return GateBounds(upper * upper, upper)


def unitary_cloning_fidelities(d: int) -> dict[str, float]:
    """Optimal fidelities for ``U -> U (x) U`` on ``d`` dimensions."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return {
        "probabilistic": 2 / d**2,
        "deterministic": (1 + math.sqrt(1 - 1 / d**2)) / d**2,
    }


def charge_conjugation_fidelity(d: int) -> float:
    """Optimal probabilistic fidelity for ``U -> conj(U)``."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return 2 / (d * (d - 1))


def cloning_rep_data(d: int) -> RepData:
    """``U (x) U (x) conj(U)`` splits as two copies of U plus the traceless parts."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    sym = d * (d + 1) // 2 * d - d
    anti = d * (d - 1) // 2 * d - d
    cands = [Irrep("U", d), Irrep("sym0", sym)]
    coupling = {("U", "U"): 2, ("sym0", "U"): 1}
    if anti:
        cands.append(Irrep("anti0", anti))
        coupling[("anti0", "U")] = 1
    return RepData((Irrep("U", d),), d * d, tuple(cands), coupling)


def charge_conjugation_rep_data(d: int) -> RepData:
    """``conj(U) (x) conj(U)`` splits into its symmetric and antisymmetric parts."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    cands = (Irrep("sym", d * (d + 1) // 2), Irrep("anti", d * (d - 1) // 2))
    coupling = {("sym", "U"): 1, ("anti", "U"): 1}
    return RepData((Irrep("U", d),), d, cands, coupling)


def su2_rep_data(task: ConversionTask) -> RepData:
    """Representation data for ``U^{(x) N} -> V^{(x) M}`` on SU(2)."""
    table_in = tensor_power_multiplicities(task.n_in, task.spin_in)
    table_out = tensor_power_multiplicities(task.n_out, task.spin_out)
    ins = tuple(Irrep(str(t), t + 1, m) for t, m in table_in.items())
    top = task.top_in + task.top_out
    cands, coupling = [], {}
    for tl in range(top % 2, top + 1, 2):
        row = {t: coupling_multiplicity(table_out, Spin(tl), Spin(t)) for t in table_in.support}
        if any(row.values()):
            cands.append(Irrep(str(tl), tl + 1))
            coupling.update({(str(tl), str(t)): m for t, m in row.items() if m})
    return RepData(ins, table_out.total_dim, tuple(cands), coupling)
