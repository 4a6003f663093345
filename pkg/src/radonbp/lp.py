"""Dense linear programming via a Mehrotra-style predictor-corrector
interior-point method, with primal/dual solutions and duality-gap
certificates.

Programs are stated as

    minimize    c' x
    subject to  G x <= h        (dense inequality rows)
                E x  = f        (equality rows)
                x   >= lb       (optional elementwise bounds; -inf = free)

Bound rows enter the normal equations diagonally; dense inequality rows are
absorbed through a Woodbury factorization when every variable is bounded,
and a full symmetric KKT system otherwise.  Solves are deterministic: no
randomness, fixed reduction order.  Intended for small dense programs
(documented cap: 5000 variables).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
import scipy.linalg

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration-limit"

MAX_DENSE_VARIABLES = 5000

_STEP_TO_BOUNDARY = 0.995
_PIVOT_TOL = 1e-12
_BLOWUP = 1e14


class LpError(Exception):
    """Base error for linear-programming failures."""


class EmptyInteriorError(LpError):
    """The strictly feasible region is empty; consider relaxing constraints."""


@dataclass(frozen=True)
class Tolerances:
    """Convergence tolerances: relative feasibility, relative gap, iteration cap."""

    feas: float = 1e-9
    gap: float = 1e-8
    max_iters: int = 200


@dataclass
class LinearProgram:
    """Dense LP description.  Missing blocks may be passed as None."""

    c: np.ndarray
    G: np.ndarray | None = None
    h: np.ndarray | None = None
    E: np.ndarray | None = None
    f: np.ndarray | None = None
    lb: np.ndarray | float | None = None

    def __post_init__(self):
        self.c = np.atleast_1d(np.asarray(self.c, dtype=float))
        n = self.c.size
        if self.G is None:
            self.G = np.zeros((0, n))
            self.h = np.zeros(0)
        else:
            self.G = np.atleast_2d(np.asarray(self.G, dtype=float))
            self.h = np.atleast_1d(np.asarray(self.h, dtype=float))
        if self.E is None:
            self.E = np.zeros((0, n))
            self.f = np.zeros(0)
        else:
            self.E = np.atleast_2d(np.asarray(self.E, dtype=float))
            self.f = np.atleast_1d(np.asarray(self.f, dtype=float))
        if self.lb is not None:
            self.lb = np.broadcast_to(
                np.asarray(self.lb, dtype=float), (n,)
            ).copy()
        if self.G.shape[1] != n or self.G.shape[0] != self.h.size:
            raise ValueError("inequality block dimensions inconsistent")
        if self.E.shape[1] != n or self.E.shape[0] != self.f.size:
            raise ValueError("equality block dimensions inconsistent")
        n_bounded = 0 if self.lb is None else int(np.isfinite(self.lb).sum())
        if self.G.shape[0] + self.E.shape[0] + n_bounded == 0:
            raise ValueError("the program needs at least one constraint row")
        if n > MAX_DENSE_VARIABLES:
            raise ValueError(
                f"{n} variables exceeds the dense solver cap {MAX_DENSE_VARIABLES}"
            )

    @property
    def n_vars(self) -> int:
        return self.c.size


@dataclass
class LpSolution:
    """Primal/dual solution with residuals and a duality-gap certificate.

    Sign convention: multipliers satisfy  c + E'y + G'z - z_lb = 0  with
    z >= 0 and z_lb >= 0, so the certified dual objective is
    -f'y - h'z + lb'z_lb.
    """

    x: np.ndarray
    dual_ineq: np.ndarray
    dual_eq: np.ndarray
    dual_lb: np.ndarray
    objective_value: float
    duality_gap: float
    status: str
    iterations: int
    primal_residual: float
    dual_residual: float

    @property
    def dual_objective(self) -> float:
        return self.objective_value - self.duality_gap


@dataclass
class IterationRecord:
    iteration: int
    mu: float
    primal_objective: float
    dual_objective: float
    primal_residual: float
    dual_residual: float
    step_primal: float
    step_dual: float


@dataclass
class WarmStart:
    """Previous iterate used to seed a solve; slacks are re-derived from x.

    With shift=True the point is pushed back into the strict interior
    (suitable after the problem data changed); shift=False trusts the given
    point exactly (for already strictly feasible iterates).
    """

    x: np.ndarray
    y: np.ndarray | None = None
    z_ineq: np.ndarray | None = None
    z_lb: np.ndarray | None = None
    shift: bool = True


@dataclass
class CenterPoint:
    """Strictly feasible checkpoint yielded by :func:`interior_point`."""

    x: np.ndarray
    y: np.ndarray
    z_ineq: np.ndarray
    z_lb: np.ndarray
    gap: float
    mu: float
    iteration: int


def _min_norm_solution(E: np.ndarray, f: np.ndarray) -> np.ndarray:
    x, *_ = scipy.linalg.lstsq(E, f, lapack_driver="gelsd")
    return x


def _spd_solver(M: np.ndarray):
    """Cholesky solve closure with an LU fallback for near-semidefinite M."""
    try:
        cM = scipy.linalg.cho_factor(M, check_finite=False)

        def solve_fn(u):
            return scipy.linalg.cho_solve(cM, u, check_finite=False)

        return solve_fn
    except scipy.linalg.LinAlgError:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu = scipy.linalg.lu_factor(M, check_finite=False)

        def solve_fn(u):
            return scipy.linalg.lu_solve(lu, u, check_finite=False)

        return solve_fn


class InteriorPointSolver:
    """Stateful predictor-corrector solver; one `step()` per outer call.

    Used directly by the column-generation loop, which interleaves pricing
    with single centering steps.
    """

    def __init__(
        self,
        lp: LinearProgram,
        tol: Tolerances | None = None,
        warm_start: WarmStart | None = None,
        keep_history: bool = False,
        _aux: bool = False,
    ):
        self.lp = lp
        self.tol = tol or Tolerances()
        self.keep_history = keep_history
        self._aux = _aux
        self.history: list[IterationRecord] = []
        self.iterate_log: list[np.ndarray] = []
        self.iterations = 0
        self.status: str | None = None

        n = lp.n_vars
        self._n = n
        self._Gd = lp.G
        self._hd = lp.h
        self._md = lp.G.shape[0]
        if lp.lb is None:
            self._bounded = np.zeros(n, dtype=bool)
            self._lb = np.full(n, -np.inf)
        else:
            self._lb = lp.lb
            self._bounded = np.isfinite(lp.lb)
        self._nb = int(self._bounded.sum())
        self._all_bounded = bool(self._bounded.all())

        self._scale_rhs = 1.0 + max(
            float(np.max(np.abs(lp.f))) if lp.f.size else 0.0,
            float(np.max(np.abs(lp.h))) if lp.h.size else 0.0,
            float(np.max(np.abs(self._lb[self._bounded]))) if self._nb else 0.0,
        )
        self._scale_c = 1.0 + float(np.max(np.abs(lp.c))) if lp.c.size else 1.0

        p = lp.E.shape[0]
        self._x = np.zeros(n)
        self._y = np.zeros(p)
        self._z_d = np.zeros(self._md)
        self._z_b = np.zeros(n)
        self._s_d = np.zeros(self._md)
        self._s_b = np.zeros(n)
        self._reg = 0.0

        self._preprocess_equalities()
        if self.status is None:
            self._init_point(warm_start)

    # -- setup -----------------------------------------------------------

    def _preprocess_equalities(self):
        lp = self.lp
        p = lp.E.shape[0]
        self._eq_keep = np.arange(p)
        self._E = lp.E
        self._f = lp.f
        if p == 0:
            return
        x_ls = _min_norm_solution(lp.E, lp.f)
        resid = float(np.max(np.abs(lp.E @ x_ls - lp.f)))
        if resid > max(self.tol.feas, 1e-9) * self._scale_rhs * 10:
            self.status = INFEASIBLE
            self._x = x_ls
            return
        # rank detection on E' via pivoted QR; drop dependent rows
        _, R, piv = scipy.linalg.qr(lp.E.T, mode="economic", pivoting=True)
        diag = np.abs(np.diag(R))
        ref = diag[0] if diag.size and diag[0] > 0 else 1.0
        rank = int((diag > _PIVOT_TOL * ref).sum())
        if rank < p:
            keep = np.sort(piv[:rank])
            warnings.warn(
                f"removed {p - rank} dependent equality row(s) from the program",
                RuntimeWarning,
                stacklevel=3,
            )
            self._eq_keep = keep
            self._E = lp.E[keep]
            self._f = lp.f[keep]

    def _init_point(self, warm_start: WarmStart | None):
        n, md, nb = self._n, self._md, self._nb
        lb = self._lb
        bounded = self._bounded
        E, f = self._E, self._f
        p = E.shape[0]

        if warm_start is not None:
            x = np.asarray(warm_start.x, dtype=float).copy()
            y = (
                np.asarray(warm_start.y, dtype=float).copy()
                if warm_start.y is not None and warm_start.y.size == p
                else np.zeros(p)
            )
            z_d = (
                np.asarray(warm_start.z_ineq, dtype=float).copy()
                if warm_start.z_ineq is not None
                else np.ones(md)
            )
            z_b = (
                np.asarray(warm_start.z_lb, dtype=float).copy()
                if warm_start.z_lb is not None
                else np.ones(n)
            )
            s_d = self._hd - self._Gd @ x if md else np.zeros(0)
            s_b = np.where(bounded, x - lb, 0.0)
            z_b = np.where(bounded, z_b, 0.0)
            if warm_start.shift:
                mu_prev = self._mu_of(s_d, z_d, s_b, z_b)
                beta = max(float(np.sqrt(max(mu_prev, 1e-10))), 1e-6 * self._scale_rhs)
                s_d = np.maximum(s_d, beta)
                z_d = np.maximum(z_d, beta)
                s_b = np.where(bounded, np.maximum(s_b, beta), 0.0)
                z_b = np.where(bounded, np.maximum(z_b, beta), 0.0)
                x = np.where(bounded, lb + s_b, x)
            else:
                strict = True
                if md and ((s_d <= 0).any() or (z_d <= 0).any()):
                    strict = False
                if nb and ((s_b[bounded] <= 0).any() or (z_b[bounded] <= 0).any()):
                    strict = False
                if not strict:
                    raise LpError("warm start is not strictly feasible")
        else:
            # least-squares start with positivity shift
            if p:
                try:
                    EEt = E @ E.T
                    EEt[np.diag_indices_from(EEt)] += 1e-12 * (1 + np.trace(EEt) / max(p, 1))
                    x = E.T @ scipy.linalg.solve(EEt, f, assume_a="pos")
                except scipy.linalg.LinAlgError:
                    x = _min_norm_solution(E, f)
            else:
                x = np.zeros(n)
            y = np.zeros(p)
            z_d = np.ones(md)
            z_b_raw = self.lp.c + (self._Gd.T @ z_d if md else 0.0) + (E.T @ y if p else 0.0)
            z_b = np.where(bounded, z_b_raw, 0.0)
            s_d = self._hd - self._Gd @ x if md else np.zeros(0)
            s_b = np.where(bounded, x - lb, 0.0)
            s_d, z_d, s_b, z_b = self._positivity_shift(s_d, z_d, s_b, z_b)
            x = np.where(bounded, lb + s_b, x)

        self._x, self._y = x, y
        self._s_d, self._z_d = s_d, z_d
        self._s_b, self._z_b = s_b, z_b
        self._reg = 0.0

    def _positivity_shift(self, s_d, z_d, s_b, z_b):
        bounded = self._bounded
        s_all = np.concatenate([s_d, s_b[bounded]])
        z_all = np.concatenate([z_d, z_b[bounded]])
        if s_all.size == 0:
            return s_d, z_d, s_b, z_b
        dp = max(-1.5 * float(s_all.min(initial=0.0)), 0.0)
        dd = max(-1.5 * float(z_all.min(initial=0.0)), 0.0)
        s_all = s_all + dp
        z_all = z_all + dd
        stz = float(s_all @ z_all)
        sum_z = float(z_all.sum())
        sum_s = float(s_all.sum())
        dp_hat = 0.5 * stz / sum_z if sum_z > 0 else 1.0
        dd_hat = 0.5 * stz / sum_s if sum_s > 0 else 1.0
        s_all = s_all + dp_hat
        z_all = z_all + dd_hat
        floor = 1e-8 * self._scale_rhs
        s_all = np.maximum(s_all, max(floor, 1e-8))
        z_all = np.maximum(z_all, max(1e-8 * self._scale_c, 1e-8))
        md = self._md
        s_d_new, z_d_new = s_all[:md], z_all[:md]
        s_b_new = s_b.copy()
        z_b_new = z_b.copy()
        s_b_new[bounded] = s_all[md:]
        z_b_new[bounded] = z_all[md:]
        return s_d_new, z_d_new, s_b_new, z_b_new

    # -- diagnostics -----------------------------------------------------

    def _mu_of(self, s_d, z_d, s_b, z_b) -> float:
        total = self._md + self._nb
        if total == 0:
            return 0.0
        val = float(s_d @ z_d) + float(s_b[self._bounded] @ z_b[self._bounded])
        return val / total

    @property
    def mu(self) -> float:
        return self._mu_of(self._s_d, self._z_d, self._s_b, self._z_b)

    def primal_objective(self) -> float:
        return float(self.lp.c @ self._x)

    def dual_objective(self) -> float:
        val = 0.0
        if self._E.shape[0]:
            val -= float(self._f @ self._y)
        if self._md:
            val -= float(self._hd @ self._z_d)
        if self._nb:
            b = self._bounded
            val += float(self._lb[b] @ self._z_b[b])
        return val

    def primal_residual(self) -> float:
        x = self._x
        r = 0.0
        if self._E.shape[0]:
            r = max(r, float(np.max(np.abs(self._E @ x - self._f))))
        if self._md:
            r = max(r, float(np.max(self._Gd @ x - self._hd, initial=0.0)))
        if self._nb:
            b = self._bounded
            r = max(r, float(np.max(self._lb[b] - x[b], initial=0.0)))
        return r / self._scale_rhs

    def dual_residual(self) -> float:
        return float(np.max(np.abs(self._stationarity()))) / self._scale_c

    def _stationarity(self) -> np.ndarray:
        r = self.lp.c.copy()
        if self._E.shape[0]:
            r += self._E.T @ self._y
        if self._md:
            r += self._Gd.T @ self._z_d
        r -= self._z_b
        return r

    @property
    def converged(self) -> bool:
        if self.primal_residual() > self.tol.feas:
            return False
        if self.dual_residual() > max(self.tol.feas, 1e-9):
            return False
        gap = self.primal_objective() - self.dual_objective()
        return abs(gap) / (1.0 + abs(self.primal_objective())) <= self.tol.gap

    # -- newton machinery ------------------------------------------------

    def _make_kkt_solver(self):
        """Factor the condensed system for the current scaling; returns solve(rx, rp)."""
        n = self._n
        E = self._E
        p = E.shape[0]
        md = self._md
        Gd = self._Gd
        with np.errstate(over="ignore", divide="ignore"):
            w_d = (
                np.minimum(self._z_d / self._s_d, 1e300) if md else np.zeros(0)
            )
            v = np.where(
                self._bounded,
                np.minimum(
                    self._z_b / np.where(self._s_b > 0, self._s_b, 1.0), 1e300
                ),
                0.0,
            )

        if self._all_bounded and n > 0:
            vv = np.maximum(v, 1e-300)

            if md:
                # SPD normal matrix assembled by positive-weighted outer
                # products; no subtractive cancellation
                scaled = Gd * np.sqrt(w_d)[:, None]
                M = scaled.T @ scaled
                M[np.diag_indices_from(M)] += vv
                if self._reg:
                    M[np.diag_indices_from(M)] += self._reg * (
                        1.0 + np.abs(M.diagonal())
                    )
                minv = _spd_solver(M)
            else:

                def minv(u):
                    return (u.T / vv).T

            if p:
                S = E @ minv(E.T)
                if self._reg:
                    S[np.diag_indices_from(S)] += self._reg * (
                        1.0 + np.abs(S.diagonal())
                    )
                cho_or_lu = _spd_solver(S)

                def solve(rx, rp):
                    t = minv(rx)
                    dy = cho_or_lu(E @ t - rp)
                    dx = minv(rx - E.T @ dy)
                    return dx, dy

            else:

                def solve(rx, rp):
                    return minv(rx), np.zeros(0)

            return solve

        # generic dense path: assemble the full condensed KKT matrix with a
        # small always-on primal-dual regularization (free variables can make
        # the unregularized system exactly singular)
        M = np.diag(v) if n else np.zeros((0, 0))
        if md:
            M = M + Gd.T @ (w_d[:, None] * Gd)
        diag_scale = 1.0 + (float(np.mean(np.abs(np.diag(M)))) if n else 0.0)
        reg = max(self._reg, 1e-11) * diag_scale
        kkt = np.zeros((n + p, n + p))
        kkt[:n, :n] = M
        kkt[:n, :n][np.diag_indices(n)] += reg
        if p:
            kkt[:n, n:] = E.T
            kkt[n:, :n] = E
            kkt[n:, n:] = -reg * np.eye(p)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu = scipy.linalg.lu_factor(kkt, check_finite=False)

        exact = np.zeros((n + p, n + p))
        exact[:n, :n] = M
        if p:
            exact[:n, n:] = E.T
            exact[n:, :n] = E

        def solve(rx, rp):
            rhs = np.concatenate([rx, rp])
            sol = scipy.linalg.lu_solve(lu, rhs, check_finite=False)
            # one refinement step against the unregularized system
            resid = rhs - exact @ sol
            sol = sol + scipy.linalg.lu_solve(lu, resid, check_finite=False)
            return sol[:n], sol[n:]

        return solve

    def _direction(self, solve, r_d, r_p, r_g, r_b, t_d, t_b):
        """Newton direction given complementarity targets t_d, t_b."""
        bounded = self._bounded
        md = self._md
        rx = -r_d
        if md:
            rx -= self._Gd.T @ ((t_d + self._z_d * r_g) / self._s_d)
        if self._nb:
            corr = np.zeros(self._n)
            corr[bounded] = (
                t_b[bounded] - self._z_b[bounded] * r_b[bounded]
            ) / self._s_b[bounded]
            rx += corr
        dx, dy = solve(rx, -r_p)
        if not (np.isfinite(dx).all() and np.isfinite(dy).all()):
            raise LpError("newton direction is not finite")
        if md:
            ds_d = -r_g - self._Gd @ dx
            dz_d = (t_d - self._z_d * ds_d) / self._s_d
        else:
            ds_d = np.zeros(0)
            dz_d = np.zeros(0)
        ds_b = np.where(bounded, dx + r_b, 0.0)
        dz_b = np.zeros(self._n)
        if self._nb:
            dz_b[bounded] = (
                t_b[bounded] - self._z_b[bounded] * ds_b[bounded]
            ) / self._s_b[bounded]
        return dx, dy, ds_d, dz_d, ds_b, dz_b

    @staticmethod
    def _max_step(v: np.ndarray, dv: np.ndarray) -> float:
        """Largest step keeping v + a*dv >= 0 (uncapped; inf if unconstrained)."""
        neg = dv < 0
        if not neg.any():
            return np.inf
        return float(np.min(-v[neg] / dv[neg]))

    def step(self) -> IterationRecord:
        """One predictor-corrector iteration; returns the iteration record."""
        if self.status is not None and self.status != ITERATION_LIMIT:
            raise LpError(f"solver already terminated with status {self.status!r}")
        bounded = self._bounded
        md = self._md
        E, f = self._E, self._f
        p = E.shape[0]

        r_p = (E @ self._x - f) if p else np.zeros(0)
        r_g = (self._Gd @ self._x + self._s_d - self._hd) if md else np.zeros(0)
        r_b = np.where(bounded, self._x - self._s_b - self._lb, 0.0)
        r_d = self._stationarity()
        mu = self.mu

        solve = None
        for attempt in range(4):
            try:
                solve = self._make_kkt_solver()
                break
            except scipy.linalg.LinAlgError:
                self._reg = max(self._reg * 1000.0, 1e-12)
        if solve is None:
            self.status = ITERATION_LIMIT
            raise LpError("KKT factorization failed despite regularization")

        # predictor (affine scaling)
        t_d = -self._s_d * self._z_d
        t_b = np.where(bounded, -self._s_b * self._z_b, 0.0)
        aff = self._direction(solve, r_d, r_p, r_g, r_b, t_d, t_b)
        dx_a, dy_a, ds_d_a, dz_d_a, ds_b_a, dz_b_a = aff

        ap = min(
            1.0,
            self._max_step(self._s_d, ds_d_a),
            self._max_step(self._s_b[bounded], ds_b_a[bounded]) if self._nb else np.inf,
        )
        ad = min(
            1.0,
            self._max_step(self._z_d, dz_d_a),
            self._max_step(self._z_b[bounded], dz_b_a[bounded]) if self._nb else np.inf,
        )
        mu_aff = self._mu_of(
            self._s_d + ap * ds_d_a,
            self._z_d + ad * dz_d_a,
            self._s_b + ap * ds_b_a,
            self._z_b + ad * dz_b_a,
        )
        sigma = (mu_aff / mu) ** 3 if mu > 0 else 0.0
        sigma = min(max(sigma, 1e-8), 1.0 - 1e-8)

        # corrector
        t_d = sigma * mu - self._s_d * self._z_d - ds_d_a * dz_d_a
        t_b = np.where(
            bounded, sigma * mu - self._s_b * self._z_b - ds_b_a * dz_b_a, 0.0
        )
        dx, dy, ds_d, dz_d, ds_b, dz_b = self._direction(
            solve, r_d, r_p, r_g, r_b, t_d, t_b
        )

        tau = _STEP_TO_BOUNDARY
        ap = min(
            1.0,
            tau
            * min(
                self._max_step(self._s_d, ds_d),
                self._max_step(self._s_b[bounded], ds_b[bounded])
                if self._nb
                else np.inf,
            ),
        )
        ad = min(
            1.0,
            tau
            * min(
                self._max_step(self._z_d, dz_d),
                self._max_step(self._z_b[bounded], dz_b[bounded])
                if self._nb
                else np.inf,
            ),
        )

        self._x = self._x + ap * dx
        self._s_d = self._s_d + ap * ds_d
        self._s_b = np.where(bounded, self._s_b + ap * ds_b, 0.0)
        self._y = self._y + ad * dy
        self._z_d = self._z_d + ad * dz_d
        self._z_b = np.where(bounded, self._z_b + ad * dz_b, 0.0)
        self.iterations += 1

        rec = IterationRecord(
            iteration=self.iterations,
            mu=self.mu,
            primal_objective=self.primal_objective(),
            dual_objective=self.dual_objective(),
            primal_residual=self.primal_residual(),
            dual_residual=self.dual_residual(),
            step_primal=ap,
            step_dual=ad,
        )
        if self.keep_history:
            self.history.append(rec)
            self.iterate_log.append(self._x.copy())
        return rec

    def _classify_failure(self) -> str:
        """Decide infeasible/unbounded/limit via auxiliary feasibility programs.

        Both auxiliary programs are feasible and bounded by construction, so
        they give reliable certificates when the main iteration diverges.
        """
        if self._aux:
            return ITERATION_LIMIT
        lp_obj = self.lp
        try:
            t_primal = _feasibility_margin_primal(lp_obj)
        except LpError:
            return ITERATION_LIMIT
        if t_primal is None:
            return ITERATION_LIMIT
        if t_primal > 1e-7 * self._scale_rhs:
            return INFEASIBLE
        try:
            t_dual = _feasibility_margin_dual(lp_obj)
        except LpError:
            return ITERATION_LIMIT
        if t_dual is None:
            return ITERATION_LIMIT
        if t_dual > 1e-7 * self._scale_c:
            return UNBOUNDED
        return ITERATION_LIMIT

    def _merit(self) -> float:
        gap = self.primal_objective() - self.dual_objective()
        return max(
            self.primal_residual(),
            self.dual_residual(),
            abs(gap) / (1.0 + abs(self.primal_objective())),
        )

    def _snapshot(self):
        return (
            self._x.copy(),
            self._y.copy(),
            self._z_d.copy(),
            self._z_b.copy(),
            self._s_d.copy(),
            self._s_b.copy(),
        )

    def _restore(self, snap):
        self._x, self._y, self._z_d, self._z_b, self._s_d, self._s_b = (
            a.copy() for a in snap
        )

    def run(self) -> LpSolution:
        if self.status == INFEASIBLE:
            return self._finish(INFEASIBLE)
        best = self._snapshot()
        best_merit = self._merit()
        while self.iterations < self.tol.max_iters:
            if self.converged:
                return self._finish(OPTIMAL)
            try:
                self.step()
            except LpError:
                break
            if not np.isfinite(self._x).all():
                break
            merit = self._merit()
            if merit < best_merit:
                best_merit = merit
                best = self._snapshot()
            bad = (
                float(np.max(np.abs(self._x), initial=0.0)) > _BLOWUP
                or (self._md and float(np.max(self._z_d, initial=0.0)) > _BLOWUP)
                or (self._nb and float(np.max(self._z_b, initial=0.0)) > _BLOWUP)
            )
            if bad:
                return self._finish(self._classify_failure())
        if self.converged:
            return self._finish(OPTIMAL)
        if self._merit() > best_merit:
            self._restore(best)
        if self.converged:
            return self._finish(OPTIMAL)
        return self._finish(self._classify_failure())

    def _finish(self, status: str) -> LpSolution:
        self.status = status
        lp = self.lp
        p_all = lp.E.shape[0]
        dual_eq = np.zeros(p_all)
        if self._E.shape[0]:
            dual_eq[self._eq_keep] = self._y
        return LpSolution(
            x=self._x.copy(),
            dual_ineq=self._z_d.copy(),
            dual_eq=dual_eq,
            dual_lb=self._z_b.copy(),
            objective_value=self.primal_objective(),
            duality_gap=self.primal_objective() - self.dual_objective(),
            status=status,
            iterations=self.iterations,
            primal_residual=self.primal_residual(),
            dual_residual=self.dual_residual(),
        )

    def solution(self) -> LpSolution:
        return self._finish(self.status or ITERATION_LIMIT)


def _solve_equality_only(lp: LinearProgram, tol: Tolerances) -> LpSolution:
    """Analytic path for programs with only equality rows (no bounds, no G)."""
    x = _min_norm_solution(lp.E, lp.f)
    resid = float(np.max(np.abs(lp.E @ x - lp.f))) if lp.E.size else 0.0
    scale = 1.0 + float(np.max(np.abs(lp.f), initial=0.0))
    if resid > 1e-8 * scale:
        status = INFEASIBLE
    else:
        y = _min_norm_solution(lp.E.T, -lp.c)
        r_d = lp.c + lp.E.T @ y
        if float(np.max(np.abs(r_d))) > 1e-8 * (1 + float(np.max(np.abs(lp.c)))):
            status = UNBOUNDED
        else:
            status = OPTIMAL
            obj = float(lp.c @ x)
            return LpSolution(
                x=x,
                dual_ineq=np.zeros(0),
                dual_eq=y,
                dual_lb=np.zeros(lp.n_vars),
                objective_value=obj,
                duality_gap=obj - float(-lp.f @ y),
                status=status,
                iterations=0,
                primal_residual=resid / scale,
                dual_residual=0.0,
            )
    return LpSolution(
        x=x,
        dual_ineq=np.zeros(0),
        dual_eq=np.zeros(lp.E.shape[0]),
        dual_lb=np.zeros(lp.n_vars),
        objective_value=float(lp.c @ x),
        duality_gap=np.inf,
        status=status,
        iterations=0,
        primal_residual=resid / scale,
        dual_residual=np.inf,
    )


def solve(
    lp: LinearProgram,
    tol: Tolerances | None = None,
    warm_start: WarmStart | None = None,
    keep_history: bool = False,
) -> LpSolution:
    """Solve the program; status 'optimal' certifies residuals and gap.

    Infeasible and unbounded programs are reported through the status field,
    never raised.
    """
    tol = tol or Tolerances()
    if lp.G.shape[0] == 0 and (lp.lb is None or not np.isfinite(lp.lb).any()):
        if lp.E.shape[0] == 0:
            raise ValueError("the program needs at least one constraint row")
        return _solve_equality_only(lp, tol)
    solver = InteriorPointSolver(lp, tol, warm_start=warm_start, keep_history=keep_history)
    sol = solver.run()
    if keep_history:
        sol.history = solver.history  # type: ignore[attr-defined]
        sol.iterate_log = solver.iterate_log  # type: ignore[attr-defined]
    return sol


def _phase1_strict_point(lp: LinearProgram, tol: Tolerances) -> tuple[np.ndarray, np.ndarray]:
    """Strictly feasible (x, s) for the inequality system, via a shifted program."""
    n = lp.n_vars
    G_all, h_all = _fold_bounds(lp)
    m = G_all.shape[0]
    if m == 0:
        raise ValueError("interior_point requires at least one inequality or bound")
    c1 = np.zeros(n + 1)
    c1[-1] = 1.0
    G1 = np.zeros((m + 1, n + 1))
    G1[:m, :n] = G_all
    G1[:m, -1] = -1.0
    G1[m, -1] = -1.0
    h1 = np.concatenate([h_all, [1.0]])
    E1 = None
    f1 = None
    if lp.E.shape[0]:
        E1 = np.hstack([lp.E, np.zeros((lp.E.shape[0], 1))])
        f1 = lp.f
    aux = LinearProgram(c=c1, G=G1, h=h1, E=E1, f=f1)
    sol = solve(aux, Tolerances(feas=1e-10, gap=1e-10, max_iters=tol.max_iters))
    t_star = sol.x[-1]
    if sol.status != OPTIMAL or t_star > -1e-7:
        raise EmptyInteriorError(
            "no strictly feasible point found; consider relaxing constraints"
        )
    x0 = sol.x[:n]
    s0 = h_all - G_all @ x0
    if (s0 <= 0).any():
        raise EmptyInteriorError(
            "interior is too thin for a strict start; consider relaxing constraints"
        )
    return x0, s0


def _phase1_strict_dual(lp: LinearProgram, tol: Tolerances) -> tuple[np.ndarray, np.ndarray]:
    """Strictly feasible dual (y, z): c + E'y + G_all'z = 0 with z > 0."""
    n = lp.n_vars
    G_all, _ = _fold_bounds(lp)
    m = G_all.shape[0]
    p = lp.E.shape[0]
    nv = p + m + 1
    c1 = np.zeros(nv)
    c1[-1] = 1.0
    E1 = np.zeros((n, nv))
    if p:
        E1[:, :p] = lp.E.T
    E1[:, p : p + m] = G_all.T
    f1 = -lp.c
    G1 = np.zeros((m + 1, nv))
    G1[:m, p : p + m] = -np.eye(m)
    G1[:m, -1] = -1.0
    G1[m, -1] = -1.0
    h1 = np.concatenate([np.zeros(m), [1.0]])
    aux = LinearProgram(c=c1, G=G1, h=h1, E=E1, f=f1)
    sol = solve(aux, Tolerances(feas=1e-10, gap=1e-10, max_iters=tol.max_iters))
    if sol.status == INFEASIBLE:
        raise LpError("dual system is infeasible; the objective is unbounded below")
    t_star = sol.x[-1]
    if sol.status != OPTIMAL or t_star > -1e-7:
        raise EmptyInteriorError(
            "no strictly feasible dual point found; consider relaxing constraints"
        )
    y0 = sol.x[:p]
    z0 = sol.x[p : p + m]
    return y0, np.maximum(z0, -t_star * 0.5)


def _fold_bounds(lp: LinearProgram) -> tuple[np.ndarray, np.ndarray]:
    """All inequality rows with finite lower bounds folded in as -x <= -lb."""
    if lp.lb is None or not np.isfinite(lp.lb).any():
        return lp.G, lp.h
    idx = np.where(np.isfinite(lp.lb))[0]
    rows = np.zeros((idx.size, lp.n_vars))
    rows[np.arange(idx.size), idx] = -1.0
    G_all = np.vstack([lp.G, rows]) if lp.G.shape[0] else rows
    h_all = np.concatenate([lp.h, -lp.lb[idx]]) if lp.h.size else -lp.lb[idx]
    return G_all, h_all


def _feasibility_margin_primal(lp: LinearProgram) -> float | None:
    """Optimal t of: min t s.t. G x - t <= h (bounds folded), t >= -1.

    Positive t means the primal is infeasible; the program itself is always
    feasible and bounded.
    """
    n = lp.n_vars
    G_all, h_all = _fold_bounds(lp)
    m = G_all.shape[0]
    c1 = np.zeros(n + 1)
    c1[-1] = 1.0
    G1 = np.zeros((m + 1, n + 1))
    if m:
        G1[:m, :n] = G_all
        G1[:m, -1] = -1.0
    G1[m, -1] = -1.0
    h1 = np.concatenate([h_all, [1.0]])
    E1 = np.hstack([lp.E, np.zeros((lp.E.shape[0], 1))]) if lp.E.shape[0] else None
    f1 = lp.f if lp.E.shape[0] else None
    aux = LinearProgram(c=c1, G=G1, h=h1, E=E1, f=f1)
    solver = InteriorPointSolver(aux, Tolerances(max_iters=120), _aux=True)
    sol = solver.run()
    if sol.status == INFEASIBLE:
        # only possible when the equality block itself is inconsistent
        return np.inf
    if sol.status != OPTIMAL:
        return None
    return float(sol.x[-1])


def _feasibility_margin_dual(lp: LinearProgram) -> float | None:
    """Optimal t of: min t s.t. E'y + G_all'z = -c, z + t >= 0, t >= -1.

    Positive t means the dual is infeasible (the primal objective is
    unbounded below on a feasible region).
    """
    n = lp.n_vars
    G_all, _ = _fold_bounds(lp)
    m = G_all.shape[0]
    p = lp.E.shape[0]
    nv = p + m + 1
    c1 = np.zeros(nv)
    c1[-1] = 1.0
    E1 = np.zeros((n, nv))
    if p:
        E1[:, :p] = lp.E.T
    if m:
        E1[:, p : p + m] = G_all.T
    f1 = -lp.c
    G1 = np.zeros((m + 1, nv))
    if m:
        G1[:m, p : p + m] = -np.eye(m)
        G1[:m, -1] = -1.0
    G1[m, -1] = -1.0
    h1 = np.concatenate([np.zeros(m), [1.0]])
    aux = LinearProgram(c=c1, G=G1, h=h1, E=E1, f=f1)
    solver = InteriorPointSolver(aux, Tolerances(max_iters=120), _aux=True)
    sol = solver.run()
    if sol.status == INFEASIBLE:
        # stationarity system unsolvable: dual infeasible outright
        return np.inf
    if sol.status != OPTIMAL:
        return None
    return float(sol.x[-1])


def interior_point(
    lp: LinearProgram,
    tol: Tolerances | None = None,
    warm_start: WarmStart | None = None,
) -> Iterator[CenterPoint]:
    """Strictly feasible path following; yields checkpoints with nonincreasing
    certified duality gaps.

    The start is found by a phase-1 shift on both the primal and dual side, so
    every yielded iterate strictly satisfies all inequalities and carries an
    exactly feasible dual pair (up to arithmetic roundoff).  Raises
    EmptyInteriorError when no strict interior exists.
    """
    tol = tol or Tolerances()
    G_all, h_all = _fold_bounds(lp)
    folded = LinearProgram(c=lp.c, G=G_all, h=h_all, E=lp.E if lp.E.size else None,
                           f=lp.f if lp.f.size else None)

    if warm_start is not None:
        x0 = np.asarray(warm_start.x, dtype=float)
        s0 = h_all - G_all @ x0
        if (s0 <= 0).any():
            x0, s0 = _phase1_strict_point(lp, tol)
        y0 = warm_start.y if warm_start.y is not None else np.zeros(lp.E.shape[0])
        z0 = warm_start.z_ineq
        if z0 is None or (np.asarray(z0) <= 0).any():
            y0, z0 = _phase1_strict_dual(lp, tol)
    else:
        x0, s0 = _phase1_strict_point(lp, tol)
        y0, z0 = _phase1_strict_dual(lp, tol)

    # repair residual feasibility to arithmetic precision so that checkpoint
    # gaps certify weak duality exactly
    if lp.E.shape[0]:
        x0 = x0 + lp.E.T @ scipy.linalg.lstsq(
            lp.E @ lp.E.T, lp.f - lp.E @ x0, lapack_driver="gelsd"
        )[0]
        if ((h_all - G_all @ x0) <= 0).any():
            raise EmptyInteriorError(
                "interior is too thin for a strict start; consider relaxing constraints"
            )
    r_d0 = lp.c + (lp.E.T @ y0 if lp.E.shape[0] else 0.0) + G_all.T @ np.asarray(z0)
    if float(np.max(np.abs(r_d0), initial=0.0)) > 0:
        At = np.hstack([lp.E.T, G_all.T]) if lp.E.shape[0] else G_all.T
        corr = _min_norm_solution(At, -r_d0)
        p = lp.E.shape[0]
        y0 = np.asarray(y0, dtype=float) + corr[:p]
        z0 = np.asarray(z0, dtype=float) + corr[p:]
        if (z0 <= 0).any():
            raise EmptyInteriorError(
                "dual interior is too thin for a strict start; consider relaxing constraints"
            )

    solver = InteriorPointSolver(
        folded,
        tol,
        warm_start=WarmStart(x=x0, y=np.asarray(y0, dtype=float),
                             z_ineq=np.asarray(z0, dtype=float), shift=False),
    )
    last_gap = np.inf
    for _ in range(tol.max_iters):
        gap = solver.primal_objective() - solver.dual_objective()
        if gap <= last_gap:
            m_user = lp.G.shape[0]
            yield CenterPoint(
                x=solver._x.copy(),
                y=solver._y.copy(),
                z_ineq=solver._z_d[:m_user].copy(),
                z_lb=_unfold_lb_duals(lp, solver._z_d),
                gap=gap,
                mu=solver.mu,
                iteration=solver.iterations,
            )
            last_gap = gap
        if abs(gap) / (1.0 + abs(solver.primal_objective())) <= tol.gap:
            return
        solver.step()
        # keep the slack identity exact on the feasible path
        solver._s_d = folded.h - folded.G @ solver._x
        if (solver._s_d <= 0).any():
            return


def _unfold_lb_duals(lp: LinearProgram, z_all: np.ndarray) -> np.ndarray:
    z_lb = np.zeros(lp.n_vars)
    if lp.lb is not None and np.isfinite(lp.lb).any():
        idx = np.where(np.isfinite(lp.lb))[0]
        z_lb[idx] = z_all[lp.G.shape[0] :]
    return z_lb
