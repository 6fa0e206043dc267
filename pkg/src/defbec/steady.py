"""Mean-field steady state of the deformed driven mode and its linearization.

The c-number amplitude obeys

    d beta/dt = i (s/2) (beta**2 + 2|beta|**2) - i delta beta - i g sqrt(N) - Gamma beta

with ``s = sqrt(N) g eta`` and ``Gamma = gamma sqrt(N)``.  For ``eta = 0`` this
is the driven damped linear mode with the closed-form fixed point
``-i g sqrt(N) / (Gamma + i delta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, TrajectoryOverflow
from .params import ModelParams, derive_params, nonlinear_strength


@dataclass(frozen=True)
class FluctuationCoeffs:
    """Coefficients of ``d(db)/dt = A db + B db^dagger + noise``."""

    a_coef: complex
    b_coef: complex


@dataclass(frozen=True)
class SteadyState:
    """Root of the steady-state equation plus its linear stability data.

    ``residual_norm`` is the scale-free residual
    ``|R(beta)| / (g sqrt(N) + Gamma |beta| + 1)``.
    """

    beta: complex
    residual_norm: float
    stable: bool
    drift_eigenvalues: tuple[complex, complex]
    eta: float


def undeformed_steady_state(p: ModelParams) -> complex:
    big_gamma = derive_params(p).big_gamma
    return -1j * p.g * math.sqrt(p.n_atoms) / (big_gamma + 1j * p.delta)


def drift(p: ModelParams, beta, eta: float | None = None):
    """Deterministic right-hand side of the mean-field equation (vectorized)."""
    s = nonlinear_strength(p, eta)
    big_gamma = derive_params(p).big_gamma
    beta = np.asarray(beta, dtype=complex) if np.ndim(beta) else complex(beta)
    return (
        0.5j * s * (beta * beta + 2.0 * abs(beta) ** 2)
        - 1j * p.delta * beta
        - 1j * p.g * math.sqrt(p.n_atoms)
        - big_gamma * beta
    )


def deformed_residual(p: ModelParams, beta: complex, eta: float | None = None) -> complex:
    return complex(drift(p, complex(beta), eta))


def residual_scale(p: ModelParams, beta: complex) -> float:
    return p.g * math.sqrt(p.n_atoms) + derive_params(p).big_gamma * abs(beta) + 1.0


def fluctuation_coeffs(p: ModelParams, beta: complex, eta: float | None = None) -> FluctuationCoeffs:
    s = nonlinear_strength(p, eta)
    big_gamma = derive_params(p).big_gamma
    beta = complex(beta)
    a = -1j * p.delta - big_gamma + 1j * s * (beta + beta.conjugate())
    b = 1j * s * beta
    return FluctuationCoeffs(a_coef=a, b_coef=b)


def drift_eigenvalues(c: FluctuationCoeffs) -> tuple[complex, complex]:
    """Eigenvalues of the drift matrix ``[[A, B], [B*, A*]]``, larger real part first."""
    a, b = c.a_coef, c.b_coef
    root = np.sqrt(complex(abs(b) ** 2 - a.imag**2))
    return complex(a.real + root), complex(a.real - root)


def _newton(p, beta, eta, tol, max_iter):
    """Damped Newton on (Re R, Im R); returns the root or None on failure.

    R depends on beta and conj(beta) through dR = A dbeta + B dbeta*, so
    the real Jacobian is assembled from the fluctuation coefficients.
    """
    r = deformed_residual(p, beta, eta)
    res = abs(r) / residual_scale(p, beta)
    for _ in range(max_iter):
        if res <= tol:
            # one polishing step; keep it only if it does not hurt
            c = fluctuation_coeffs(p, beta, eta)
            step = _newton_step(c, r)
            if step is not None:
                trial = beta + step
                r_trial = deformed_residual(p, trial, eta)
                if abs(r_trial) <= abs(r):
                    return trial
            return beta
        c = fluctuation_coeffs(p, beta, eta)
        step = _newton_step(c, r)
        if step is None:
            return None
        lam = 1.0
        for _ in range(40):
            trial = beta + lam * step
            r_trial = deformed_residual(p, trial, eta)
            res_trial = abs(r_trial) / residual_scale(p, trial)
            if res_trial < res:
                break
            lam *= 0.5
        else:
            return None
        beta, r, res = trial, r_trial, res_trial
    return beta if res <= tol else None


def _newton_step(c: FluctuationCoeffs, r: complex) -> complex | None:
    a, b = c.a_coef, c.b_coef
    jac = np.array(
        [
            [(a + b).real, (1j * (a - b)).real],
            [(a + b).imag, (1j * (a - b)).imag],
        ]
    )
    try:
        dx, dy = np.linalg.solve(jac, -np.array([r.real, r.imag]))
    except np.linalg.LinAlgError:
        return None
    if not (math.isfinite(dx) and math.isfinite(dy)):
        return None
    return complex(dx, dy)


def solve_deformed_steady_state(
    p: ModelParams,
    tol: float = 1e-12,
    max_iter: int = 50,
    n_steps: int = 8,
    eta: float | None = None,
    max_bisections: int = 12,
) -> SteadyState:
    """Physical root of the deformed steady-state equation.

    The root is followed by continuation in the deformation parameter from
    ``eta = 0`` (where it is the undeformed amplitude) to its target value
    through ``n_steps`` geometric steps ``eta_t * 2**-k``; each step runs
    damped Newton, and a failing step is bisected before giving up.

    Raises
    ------
    NoConvergence
        If a continuation step cannot be completed.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    eta_t = 1.0 / p.n_atoms if eta is None else float(eta)
    beta = undeformed_steady_state(p)

    if p.g == 0.0:
        beta = 0j
    elif eta_t != 0.0:
        n_steps = max(int(n_steps), 8)
        targets = [eta_t * 2.0 ** (-k) for k in range(n_steps - 1, -1, -1)]
        eta_now = 0.0
        for target in targets:
            beta = _continue(p, beta, eta_now, target, tol, max_iter, max_bisections)
            eta_now = target

    c = fluctuation_coeffs(p, beta, eta_t)
    lams = drift_eigenvalues(c)
    res = abs(deformed_residual(p, beta, eta_t)) / residual_scale(p, beta)
    return SteadyState(
        beta=complex(beta),
        residual_norm=float(res),
        stable=bool(lams[0].real < 0 and lams[1].real < 0),
        drift_eigenvalues=lams,
        eta=eta_t,
    )


def _continue(p, beta, eta_from, eta_to, tol, max_iter, depth):
    root = _newton(p, beta, eta_to, tol, max_iter)
    if root is not None:
        return root
    if depth == 0:
        raise NoConvergence(
            f"Newton failed at eta={eta_to:.6g} for {p}; regime outside the continuation's reach"
        )
    mid = 0.5 * (eta_from + eta_to)
    beta = _continue(p, beta, eta_from, mid, tol, max_iter, depth - 1)
    return _continue(p, beta, mid, eta_to, tol, max_iter, depth - 1)


def mean_field_relax(
    p: ModelParams,
    beta0: complex,
    t_final: float,
    dt: float,
    eta: float | None = None,
    blowup: float = 1e8,
) -> tuple[np.ndarray, np.ndarray]:
    """Fixed-step RK4 integration of the noiseless mean-field equation.

    Returns ``(times, betas)``, both of length ``n + 1`` with ``n =
    round(t_final / dt)``.
    """
    if dt <= 0 or t_final < dt:
        raise ValueError("need dt > 0 and t_final >= dt")
    n = int(round(t_final / dt))
    times = dt * np.arange(n + 1)
    out = np.empty(n + 1, dtype=complex)
    b = complex(beta0)
    out[0] = b
    f = lambda z: deformed_residual(p, z, eta)  # noqa: E731
    for k in range(n):
        k1 = f(b)
        k2 = f(b + 0.5 * dt * k1)
        k3 = f(b + 0.5 * dt * k2)
        k4 = f(b + dt * k3)
        b = b + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not (math.isfinite(b.real) and math.isfinite(b.imag)) or abs(b) > blowup:
            raise TrajectoryOverflow(f"trajectory diverged at t={times[k + 1]:.4g}")
        out[k + 1] = b
    return times, out
