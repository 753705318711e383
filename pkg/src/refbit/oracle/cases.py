"""Named analytic-versus-numeric checks, as run by ``refbit verify``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..conversion import det_iso_fidelity, mp_fidelity_exact, single_copy_fidelity, ConversionTask
from ..distributions import sector_distribution
from ..su2 import Spin, multiplicity_half_closed_form, tensor_power_multiplicities
from .channels import (
    MeasurePrepare,
    isometry_covariance_residual,
    isometry_fidelity_numeric,
    mp_channel_fidelity_numeric,
    single_copy_fidelity_numeric,
)
from .states import multiplicity_quadrature, sector_weights_numeric


@dataclass(frozen=True)
class VerifyRecord:
    case: str
    analytic: float
    numeric: float
    abs_err: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "analytic": self.analytic,
            "numeric": self.numeric,
            "abs_err": self.abs_err,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class Case:
    name: str
    run: Callable[[int], tuple[float, float]]
    tolerance: float


def _single_copy(j, k):
    return lambda seed: (single_copy_fidelity(j, k).value, single_copy_fidelity_numeric(j, k))


def _sector_weight(n, j, s):
    def run(seed):
        num = sector_weights_numeric(n, j, np.random.default_rng(seed))
        return sector_distribution(n, j)[s], num.get(s, 0.0)

    return run


def _multiplicity(n, j, s):
    return lambda seed: (float(tensor_power_multiplicities(n, j)[s]), multiplicity_quadrature(n, j, Spin(s)))


def _closed_form(m, s):
    return lambda seed: (float(multiplicity_half_closed_form(m, Spin(s))), float(tensor_power_multiplicities(m, Spin(1))[s]))


def _isometry(seed):
    j, k = Spin(1), Spin(2)
    return det_iso_fidelity(ConversionTask(2, j, 2, k)).value, isometry_fidelity_numeric(j, k)


def _isometry_covariance(seed):
    return 0.0, isometry_covariance_residual(Spin(1), Spin(2), np.random.default_rng(seed))


def _mp(seed):
    return mp_fidelity_exact(2, Spin(1)).value, mp_channel_fidelity_numeric(2, Spin(1))


def _povm(seed):
    return 0.0, MeasurePrepare(2).completeness_residual()


def _label(t):
    return str(t // 2) if t % 2 == 0 else f"{t}/2"


def all_cases() -> list[Case]:
    cases = []
    for j, k in [(2, 1), (1, 2), (3, 1), (1, 3)]:
        cases.append(Case(f"single_copy:{_label(j)}->{_label(k)}", _single_copy(Spin(j), Spin(k)), 1e-8))
    for n in range(1, 5):
        for tj in (1, 2, 3):
            for s in tensor_power_multiplicities(n, Spin(tj)).support:
                cases.append(Case(f"sector_weight:n={n},j={_label(tj)},s={_label(s)}", _sector_weight(n, Spin(tj), s), 1e-10))
    for n in range(1, 7):
        for tj in (1, 2, 3):
            top = n * tj
            for s in range(top % 2, top + 1, 2):
                cases.append(Case(f"multiplicity:n={n},j={_label(tj)},s={_label(s)}", _multiplicity(n, Spin(tj), s), 1e-6))
    for m in range(2, 21, 2):
        for s in range(0, m + 1, 2):
            cases.append(Case(f"closed_form:m={m},s={_label(s)}", _closed_form(m, s), 0.0))
    cases.append(Case("isometry:1/2->1", _isometry, 1e-8))
    cases.append(Case("isometry_covariance:1/2->1", _isometry_covariance, 1e-9))
    cases.append(Case("measure_prepare:n=2,k=1/2", _mp, 1e-6))
    cases.append(Case("povm_completeness:n=2", _povm, 1e-8))
    return cases


def case_names() -> list[str]:
    return [c.name for c in all_cases()]


def run_case(name: str, seed: int = 0, tolerance: float | None = None) -> VerifyRecord:
    by_name = {c.name: c for c in all_cases()}
    if name not in by_name:
        raise KeyError(f"unknown verify case {name!r}")
    case = by_name[name]
    analytic, numeric = case.run(seed)
    err = abs(analytic - numeric)
    tol = case.tolerance if tolerance is None else tolerance
    return VerifyRecord(name, float(analytic), float(numeric), float(err), bool(err <= tol))


def _run_star(args):
    return run_case(*args)


def run_cases(names=None, seed: int = 0, tolerance: float | None = None, jobs: int = 1) -> list[VerifyRecord]:
    """Run the selected cases (all by default); output order follows the input order."""
    if names is None:
        names = case_names()
    elif isinstance(names, str):
        names = [names]
    else:
        names = list(names)
    known = set(case_names())
    unknown = [n for n in names if n not in known]
    if unknown:
        raise KeyError(f"unknown verify case(s): {', '.join(unknown)}")
    args = [(n, seed, tolerance) for n in names]
    if jobs > 1 and len(args) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_star, args))
    return [_run_star(a) for a in args]
