"""Basis-pursuit front end: L1 recovery programs over a clique dictionary.

Embeds the equality-constrained program (min ||x||_1 s.t. Ax = b) and its
bounded-noise relaxation (min ||x||_1 s.t. ||Ax - b||_inf <= delta) as dense
LPs through a signed split x = x+ - x-, extracts sparse signals, builds the
dual program over the observation weights, and sweeps regularization paths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp
from .combinat import rank_kset
from .radon import CliqueDictionary, SparseSignal

_SIGNAL_FLOOR = 1e-12


class RecoveryError(lp.LpError):
    """The recovery program could not be solved to optimality."""


@dataclass
class BpResult:
    """Solved recovery program: sparse signal plus optimality certificates.

    gamma is the extracted dual vector over j-sets; dual_value is the
    certified dual objective (a lower bound on the optimum), so
    gap = objective - dual_value >= 0 up to arithmetic slack.
    """

    signal: SparseSignal
    objective: float
    residual_inf: float
    dual_value: float
    gap: float
    gamma: np.ndarray
    lp_solution: lp.LpSolution


def embed_p1(a: np.ndarray, b: np.ndarray) -> lp.LinearProgram:
    """L1 minimization under exact equality, as an LP in split variables."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = a.shape[1]
    return lp.LinearProgram(
        c=np.ones(2 * n), E=np.hstack([a, -a]), f=b, lb=0.0
    )


def embed_p1_delta(a: np.ndarray, b: np.ndarray, delta: float) -> lp.LinearProgram:
    """L1 minimization under a two-sided residual band of half-width delta."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = a.shape[1]
    abar = np.hstack([a, -a])
    g = np.vstack([abar, -abar])
    h = np.concatenate([b + delta, delta - b])
    return lp.LinearProgram(c=np.ones(2 * n), G=g, h=h, lb=0.0)


def build_dual(
    dict_: CliqueDictionary, b: np.ndarray, delta: float
) -> lp.LinearProgram:
    """LP for the dual program max -delta*||g||_1 - b'g  s.t. ||A*g||_inf <= 1.

    Returned in minimization form over the signed split g = g+ - g-; the dual
    optimum equals minus the returned program's optimal value.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    b = np.asarray(b, dtype=float)
    a = dict_.materialize()
    m = a.shape[0]
    if b.shape != (m,):
        raise ValueError(f"expected observations of length {m}, got {b.shape}")
    at = a.T
    g = np.vstack([np.hstack([at, -at]), np.hstack([-at, at])])
    h = np.ones(2 * at.shape[0])
    c = np.concatenate([delta + b, delta - b])
    return lp.LinearProgram(c=c, G=g, h=h, lb=0.0)


def _extract_signal(dict_: CliqueDictionary, x_split: np.ndarray) -> SparseSignal:
    n = len(dict_)
    weights = x_split[:n] - x_split[n:]
    top = float(np.max(np.abs(weights), initial=0.0))
    floor = _SIGNAL_FLOOR * (1.0 + top)
    return SparseSignal(
        [(c, w) for c, w in zip(dict_.candidates, weights) if abs(w) > floor]
    )


def _check_status(sol: lp.LpSolution, context: str) -> None:
    if sol.status == lp.INFEASIBLE:
        raise RecoveryError(
            f"{context}: observations are not within reach of the dictionary "
            "column span (program infeasible)"
        )
    if sol.status != lp.OPTIMAL:
        raise RecoveryError(f"{context}: solver stopped with status {sol.status!r}")


def solve_p1(
    dict_: CliqueDictionary,
    b: np.ndarray,
    tol: lp.Tolerances | None = None,
    warm_start: lp.WarmStart | None = None,
) -> BpResult:
    """Minimum-L1 signal with A x = b exactly.

    Raises RecoveryError when b is outside the dictionary's column span.
    """
    b = np.asarray(b, dtype=float)
    a = dict_.materialize()
    sol = lp.solve(embed_p1(a, b), tol=tol, warm_start=warm_start)
    _check_status(sol, "equality-constrained recovery")
    signal = _extract_signal(dict_, sol.x)
    gamma = sol.dual_eq
    dual_value = float(-b @ gamma)
    abar = np.hstack([a, -a])
    residual = float(np.max(np.abs(abar @ sol.x - b), initial=0.0))
    return BpResult(
        signal=signal,
        objective=sol.objective_value,
        residual_inf=residual,
        dual_value=dual_value,
        gap=sol.objective_value - dual_value,
        gamma=gamma,
        lp_solution=sol,
    )


def solve_p1_delta(
    dict_: CliqueDictionary,
    b: np.ndarray,
    delta: float,
    tol: lp.Tolerances | None = None,
    warm_start: lp.WarmStart | None = None,
) -> BpResult:
    """Minimum-L1 signal with ||A x - b||_inf <= delta.

    At delta = 0 the residual band degenerates to an equality and the
    program is solved through the equality embedding, so it agrees with
    solve_p1 by construction.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if delta == 0:
        return solve_p1(dict_, b, tol=tol, warm_start=warm_start)
    b = np.asarray(b, dtype=float)
    a = dict_.materialize()
    m = a.shape[0]
    sol = lp.solve(embed_p1_delta(a, b, delta), tol=tol, warm_start=warm_start)
    _check_status(sol, "band-constrained recovery")
    signal = _extract_signal(dict_, sol.x)
    z1 = sol.dual_ineq[:m]
    z2 = sol.dual_ineq[m:]
    gamma = z1 - z2
    # certified bound from the LP multipliers: -h'z <= optimum
    dual_value = float(-(b + delta) @ z1 - (delta - b) @ z2)
    abar = np.hstack([a, -a])
    residual = float(np.max(np.abs(abar @ sol.x - b), initial=0.0))
    return BpResult(
        signal=signal,
        objective=sol.objective_value,
        residual_inf=residual,
        dual_value=dual_value,
        gap=sol.objective_value - dual_value,
        gamma=gamma,
        lp_solution=sol,
    )


def support(
    result: BpResult | SparseSignal, threshold: float = 1e-5
) -> list[tuple]:
    """Entries above threshold * max|weight|, largest magnitude first.

    Ties break toward smaller (size, colex rank); threshold 0 returns every
    stored nonzero.  Interior-point solutions carry gap-sized fuzz on zero
    coordinates, hence the relative default.
    """
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    signal = result.signal if isinstance(result, BpResult) else result
    if not len(signal):
        return []
    top = max(abs(w) for _, w in signal)
    kept = [
        (c, w) for c, w in signal if abs(w) > threshold * top
    ]
    kept.sort(key=lambda cw: (-abs(cw[1]), len(cw[0]), rank_kset(cw[0])))
    return kept


def regularization_path(
    dict_: CliqueDictionary,
    b: np.ndarray,
    deltas: list[float],
    tol: lp.Tolerances | None = None,
    warm: bool = True,
) -> list[tuple[float, BpResult]]:
    """One band-constrained solve per delta, ascending, warm-started.

    With warm=False each point is solved cold (entries are then independent
    and may be computed in parallel by the caller).
    """
    if not deltas:
        raise ValueError("the delta grid must be nonempty")
    if any(d < 0 for d in deltas):
        raise ValueError("deltas must be nonnegative")
    if any(b2 <= b1 for b1, b2 in zip(deltas, deltas[1:])):
        raise ValueError("the delta grid must be strictly ascending")
    out: list[tuple[float, BpResult]] = []
    prev: lp.WarmStart | None = None
    for d in deltas:
        res = solve_p1_delta(dict_, b, d, tol=tol, warm_start=prev if warm else None)
        out.append((d, res))
        if warm and d > 0:
            sol = res.lp_solution
            prev = lp.WarmStart(
                x=sol.x, y=sol.dual_eq, z_ineq=sol.dual_ineq, z_lb=sol.dual_lb
            )
    return out
