r"""Semilinear mild solutions by Picard iteration in the weighted space.

The mild solution of

    D^{gamma,delta} w(t) = A w(t) + eta(t, w(t)),  weighted ICs (w1, w2),

with diagonal A is the fixed point of

    w(t) = C(t) w1 + S(t) w2 + int_0^t P(t-s) eta(s, w(s)) ds.

Iteration happens on the regularized unknown y(t) = t^rho w(t), which is
continuous on [0, T]; its sup norm is the natural norm of the problem's
solution space.  The convolution is product quadrature: eta is piecewise
linear between nodes through the substitution psi(s) = s^rho eta(s, w(s)),
integrated against exact incomplete-beta moments of the two-power kernel
(t-s)^{gamma-1} s^{-rho} with the Mittag-Leffler factor folded in at cell
endpoints.  On the first cell the state is frozen at its t -> 0 limit
w(s) ~ s^{-rho} y(0+), y(0+) = w1/Gamma(mu), and the integral is done by
fixed-order Gauss-Jacobi adapted to both endpoint exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import betainc, gammaln, roots_jacobi

from .fraccalc import FracOrder, Grid, WeightedPath, hilfer_derivative_weighted
from .operators import DiagonalGenerator, ModeCoeffs
from .report import VerifyReport
from .special import gamma_fn, mittag_leffler

__all__ = [
    "HypothesisData",
    "IterationReport",
    "PicardDivergenceError",
    "SemilinearProblem",
    "SolverConfig",
    "contraction_margin",
    "h5_radius",
    "picard_limit_start",
    "solve_mild",
    "verify_mild_residual",
]

Nonlinearity = Callable[[float, np.ndarray], np.ndarray]


class PicardDivergenceError(RuntimeError):
    def __init__(self, message: str, deltas: list):
        super().__init__(message)
        self.deltas = deltas


@dataclass(frozen=True)
class SemilinearProblem:
    generator: DiagonalGenerator
    order: FracOrder
    omega1: ModeCoeffs
    omega2: ModeCoeffs
    horizon: float
    nonlinearity: Optional[Nonlinearity] = None

    def __post_init__(self) -> None:
        n = self.generator.n_modes
        if self.omega1.coefficients.shape != (n,) or self.omega2.coefficients.shape != (n,):
            raise ValueError("initial coefficient vectors not aligned with generator")
        if not self.horizon > 0.0:
            raise ValueError("horizon must be positive")


@dataclass(frozen=True)
class SolverConfig:
    n_steps: int = 256
    tol: float = 1e-9
    max_iter: int = 60
    trim_fraction: float = 0.125

    def __post_init__(self) -> None:
        if self.n_steps < 16:
            raise ValueError("n_steps must be >= 16")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not (0.0 <= self.trim_fraction <= 0.25):
            raise ValueError("trim_fraction must lie in [0, 1/4]")


@dataclass(frozen=True)
class HypothesisData:
    """Constants entering the a-priori bounds: M from the cosine bound
    |C(t)| <= M t^{mu-1}, k the Lipschitz constant of eta in the weighted
    norm, m_L1 the L1 norm of the bounding function of eta."""

    M: float
    k: float
    m_L1: float

    def __post_init__(self) -> None:
        for name in ("M", "k", "m_L1"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and nonnegative")


@dataclass
class IterationReport:
    deltas: list
    iterations: int
    converged: bool


def picard_limit_start(p: SemilinearProblem) -> ModeCoeffs:
    """t -> 0 value of the weighted iterate: w1 / Gamma(mu)."""
    return ModeCoeffs(p.omega1.coefficients / gamma_fn(p.order.mu))


def contraction_margin(h: HypothesisData, order: FracOrder, horizon: float) -> float:
    """q = (M / Gamma(gamma)) T^{2 - delta(2-gamma)} k; q < 1 certifies a
    unique mild solution."""
    if not horizon > 0.0:
        raise ValueError("horizon must be positive")
    expo = 2.0 - order.delta * (2.0 - order.gamma)
    return h.M / gamma_fn(order.gamma) * horizon**expo * h.k


def h5_radius(
    h: HypothesisData,
    order: FracOrder,
    horizon: float,
    norm_w1: float,
    norm_w2: float,
) -> float:
    """Invariant-ball radius from the a-priori estimate of the solution map."""
    if not horizon > 0.0:
        raise ValueError("horizon must be positive")
    mu = order.mu
    t_pow = horizon ** (1.0 - order.delta * (2.0 - order.gamma))
    return (
        h.M * norm_w1
        + h.M / mu * norm_w2
        + h.M * gamma_fn(mu) * t_pow / gamma_fn(order.gamma) * h.m_L1
    )


def _ml_grid(alpha: float, beta: float, lams: np.ndarray, t: np.ndarray) -> np.ndarray:
    """E_{alpha,beta}(lam * t^alpha) on the (mode, node) grid."""
    out = np.empty((len(lams), len(t)))
    for i, lam in enumerate(lams):
        for j, tj in enumerate(t):
            out[i, j] = mittag_leffler(alpha, beta, lam * tj**alpha)
    return out


def _beta_moment_rows(rho: float, sigma: float, t: np.ndarray):
    """Per-node arrays P0[j], P1[j] weighting data at cell endpoints k, k+1
    for cells k = 1..j-1 of the kernel (t_j - s)^{sigma-1} s^{-rho}."""
    n = len(t) - 1
    h = t[1] - t[0]
    a0 = 1.0 - rho
    b0 = math.exp(gammaln(a0) + gammaln(sigma) - gammaln(a0 + sigma))
    b1 = math.exp(gammaln(a0 + 1.0) + gammaln(sigma) - gammaln(a0 + 1.0 + sigma))
    p0_rows = [None] * (n + 1)
    p1_rows = [None] * (n + 1)
    for j in range(2, n + 1):
        v = t[1 : j + 1] / t[j]
        i0 = betainc(a0, sigma, v) * b0
        i1 = betainc(a0 + 1.0, sigma, v) * b1
        m0 = (i0[1:] - i0[:-1]) * t[j] ** (sigma - rho)
        m1 = (i1[1:] - i1[:-1]) * t[j] ** (sigma - rho + 1.0)
        tk = t[1:j]
        p0_rows[j] = (tk + h) * m0 / h - m1 / h
        p1_rows[j] = m1 / h - tk * m0 / h
    return p0_rows, p1_rows


def _frozen_first_cell(
    p: SemilinearProblem, t: np.ndarray, lams: np.ndarray, n_quad: int = 10
) -> np.ndarray:
    """F[j, n] = int_0^{t_1} (t_j-s)^{g-1} E_{g,g}(lam_n (t_j-s)^g) eta_n(s, w_f(s)) ds
    with the state frozen at w_f(s) = s^{-rho} y(0+)."""
    n = len(t) - 1
    nm = len(lams)
    out = np.zeros((n + 1, nm))
    if p.nonlinearity is None:
        return out
    ga = p.order.gamma
    rho = p.order.rho
    t1 = t[1]
    y0 = p.omega1.coefficients / gamma_fn(p.order.mu)

    def eta_weighted(s: float) -> np.ndarray:
        """s^rho * eta(s, s^{-rho} y0), continuous down to s = 0."""
        if rho > 1e-13:
            state = s ** (-rho) * y0
            return s**rho * np.asarray(p.nonlinearity(s, state), dtype=float)
        return np.asarray(p.nonlinearity(s, y0), dtype=float)

    # j == 1: both endpoint exponents in the weight
    xs, ws = roots_jacobi(n_quad, ga - 1.0, -rho if rho > 1e-13 else 0.0)
    scale = (t1 / 2.0) ** (ga - rho)
    for x, wq in zip(xs, ws):
        s = t1 * (1.0 + x) / 2.0
        ew = eta_weighted(s)
        for i, lam in enumerate(lams):
            u = t1 - s
            out[1, i] += scale * wq * mittag_leffler(ga, ga, lam * u**ga) * ew[i]

    # j >= 2: only the s^-rho endpoint is singular
    xs, ws = roots_jacobi(n_quad, 0.0, -rho if rho > 1e-13 else 0.0)
    svals = t1 * (1.0 + xs) / 2.0
    scale = (t1 / 2.0) ** (1.0 - rho)
    ew = np.stack([eta_weighted(s) for s in svals])  # (n_quad, modes)
    for j in range(2, n + 1):
        for q, s in enumerate(svals):
            u = t[j] - s
            ker = u ** (ga - 1.0)
            for i, lam in enumerate(lams):
                out[j, i] += (
                    scale * ws[q] * ker * mittag_leffler(ga, ga, lam * u**ga) * ew[q, i]
                )
    return out


def solve_mild(p: SemilinearProblem, cfg: SolverConfig):
    """Returns (solution as WeightedPath over mode coefficients, report).

    Raises :class:`PicardDivergenceError` (carrying the delta history) when
    max_iter sweeps leave the sup-norm update above tol.
    """
    grid = Grid(p.horizon, cfg.n_steps)
    t = grid.nodes
    n = cfg.n_steps
    lams = p.generator.eigenvalues
    nm = len(lams)
    ga = p.order.gamma
    mu = p.order.mu
    rho = p.order.rho

    e_mu = _ml_grid(ga, mu, lams, t)          # (modes, nodes)
    e_mu1 = _ml_grid(ga, mu + 1.0, lams, t)
    homog = (e_mu * p.omega1.coefficients[:, None]).T + (
        t[None, :] * e_mu1 * p.omega2.coefficients[:, None]
    ).T  # (nodes, modes)

    y = homog.copy()
    deltas: list = []
    if p.nonlinearity is None:
        return WeightedPath(grid, y, rho), IterationReport([0.0], 1, True)

    e_ker = _ml_grid(ga, ga, lams, t)  # E_{g,g}(lam (mh)^g) at lag nodes
    p0_rows, p1_rows = _beta_moment_rows(rho, ga, t)
    frozen = _frozen_first_cell(p, t, lams)
    t_rho = np.ones_like(t)
    if rho > 1e-13:
        t_rho[1:] = t[1:] ** rho
        t_rho[0] = 0.0

    psi = np.zeros((n + 1, nm))
    for it in range(1, cfg.max_iter + 1):
        for j in range(1, n + 1):
            state = y[j] if rho <= 1e-13 else t[j] ** (-rho) * y[j]
            psi[j] = t_rho[j] * np.asarray(p.nonlinearity(t[j], state), dtype=float)
        ynew = homog.copy()
        for j in range(1, n + 1):
            conv = frozen[j].copy()
            if j >= 2:
                e1 = e_ker[:, j - 1 : 0 : -1]  # lags j-k,   cells k = 1..j-1
                e2 = e_ker[:, j - 2 :: -1]     # lags j-k-1
                left = (p0_rows[j][None, :] * e1 * psi[1:j].T).sum(axis=1)
                right = (p1_rows[j][None, :] * e2 * psi[2 : j + 1].T).sum(axis=1)
                conv = conv + left + right
            scale_j = t_rho[j] if rho > 1e-13 else 1.0
            ynew[j] = ynew[j] + scale_j * conv
        delta = float(np.max(np.abs(ynew - y)))
        deltas.append(delta)
        y = ynew
        if delta <= cfg.tol:
            return WeightedPath(grid, y, rho), IterationReport(deltas, it, True)
    raise PicardDivergenceError(
        f"no convergence in {cfg.max_iter} sweeps (last delta {deltas[-1]:.3e})",
        deltas,
    )


def verify_mild_residual(
    p: SemilinearProblem, sol: WeightedPath, cfg: SolverConfig, tol: float = 5e-2
) -> VerifyReport:
    """Feed the solved path through the discrete fractional derivative and
    report max_j,n |D w_n - lam_n w_n - eta_n(t, w)| on the trimmed window."""
    t = sol.grid.nodes
    rho = p.order.rho
    deriv = hilfer_derivative_weighted(
        sol, p.order, weighted_ics=(p.omega1.coefficients, p.omega2.coefficients)
    )
    omega = sol.omega_values()  # (nodes, modes); NaN row 0 when rho > 0
    n = sol.grid.n_steps
    eta_vals = np.zeros_like(sol.y_values)
    if p.nonlinearity is not None:
        for j in range(1, n + 1):
            state = omega[j] if rho > 1e-13 else sol.y_values[j]
            eta_vals[j] = np.asarray(p.nonlinearity(t[j], state), dtype=float)
    lams = p.generator.eigenvalues
    resid = deriv.values[1:] - lams[None, :] * omega[1:] - eta_vals[1:]
    t0 = max(cfg.trim_fraction, 1.0 / 8.0) * sol.grid.horizon
    window = t[1:] >= t0
    residual = float(np.max(np.abs(resid[window])))
    return VerifyReport(
        check_name="mild_solution_residual",
        residual=residual,
        tolerance=tol,
        context={
            "gamma": p.order.gamma,
            "delta": p.order.delta,
            "n_steps": sol.grid.n_steps,
            "n_modes": p.generator.n_modes,
            "window_start": t0,
        },
    )
