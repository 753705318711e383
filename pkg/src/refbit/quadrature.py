"""Haar integration of SU(2) class functions."""
from __future__ import annotations

import math

import numpy as np
from scipy.special import eval_chebyu


class QuadratureError(RuntimeError):
    def __init__(self, msg, estimate):
        super().__init__(f"{msg} (last estimate {estimate!r})")
        self.estimate = estimate


def character(twice_j: int, omega):
    """``sin((2j+1) w/2) / sin(w/2)``, evaluated as a Chebyshev polynomial."""
    return eval_chebyu(twice_j, np.cos(np.asarray(omega, dtype=float) / 2))


def _panel_rule(order: int, panels: int):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, 2 * math.pi, panels + 1)
    half = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def haar_class_quadrature(f, tol: float = 1e-10, order: int = 32, max_panels: int = 1 << 12) -> float:
    """Haar integral of a class function ``f(omega)`` over SU(2).

    ``omega`` is the rotation angle on ``[0, 2pi]`` with density
    ``sin^2(omega/2) / pi``. ``f`` must accept a numpy array. Composite
    Gauss-Legendre panels are doubled until two successive estimates agree
    within ``tol``, taken relative to the integral of ``|f|`` when that
    exceeds one.
    """
    panels = 4
    prev = None
    while panels <= max_panels:
        nodes, weights = _panel_rule(order, panels)
        vals = weights * np.sin(nodes / 2) ** 2 * np.asarray(f(nodes)) / math.pi
        val = float(np.sum(vals))
        scale = max(1.0, float(np.sum(np.abs(vals))))
        if prev is not None and abs(val - prev) <= tol * scale:
            return val
        prev = val
        panels *= 2
    raise QuadratureError("class-function quadrature did not converge", prev)
