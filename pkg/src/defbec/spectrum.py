"""Fluctuation spectrum of the linearized deformed mode and figure data."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_continuous_lyapunov

from .errors import DefbecError, UnstableSteadyState
from .params import ModelParams, derive_params
from .steady import (
    FluctuationCoeffs,
    SteadyState,
    fluctuation_coeffs,
    solve_deformed_steady_state,
    undeformed_steady_state,
)


class Variant(str, enum.Enum):
    """Spectrum normalization.

    ``paper`` is ``|B|^2 / |Xi|^2``; ``physical`` keeps the ``2 Gamma``
    weight of the input noise, ``2 Gamma |B|^2 / |Xi|^2``.
    """

    PAPER = "paper"
    PHYSICAL = "physical"


@dataclass
class SpectrumTable:
    omega_grid: np.ndarray
    values: np.ndarray
    variant: Variant
    meta: dict = field(default_factory=dict)


def xi(c: FluctuationCoeffs, omega):
    """Spectral denominator ``|A|^2 - |B|^2 - w^2 - i w (A + A*)``; vectorized in omega."""
    a, b = c.a_coef, c.b_coef
    omega = np.asarray(omega, dtype=float)
    out = abs(a) ** 2 - abs(b) ** 2 - omega**2 - 1j * omega * (2.0 * a.real)
    return complex(out) if out.ndim == 0 else out


def _spectrum_from_coeffs(c: FluctuationCoeffs, omega, prefactor: float):
    denom = np.abs(xi(c, omega)) ** 2
    return prefactor * abs(c.b_coef) ** 2 / denom


def _prefactor(p: ModelParams, variant) -> float:
    variant = Variant(variant)
    return 2.0 * derive_params(p).big_gamma if variant is Variant.PHYSICAL else 1.0


def _stable_state(p: ModelParams, eta=None) -> SteadyState:
    ss = solve_deformed_steady_state(p, eta=eta)
    if not ss.stable:
        raise UnstableSteadyState(
            f"steady state beta={ss.beta:.6g} is unstable, eigenvalues {ss.drift_eigenvalues}"
        )
    return ss


def spectrum_values(p: ModelParams, omega, variant=Variant.PAPER, eta=None):
    """Spectrum on an array of frequencies (one steady-state solve)."""
    ss = _stable_state(p, eta)
    c = fluctuation_coeffs(p, ss.beta, ss.eta)
    return _spectrum_from_coeffs(c, omega, _prefactor(p, variant))


def spectrum_at(p: ModelParams, omega: float, variant=Variant.PAPER, eta=None) -> float:
    return float(spectrum_values(p, float(omega), variant, eta))


def spectrum_table(p: ModelParams, omega_grid, variant=Variant.PAPER) -> SpectrumTable:
    omega_grid = np.asarray(omega_grid, dtype=float)
    return SpectrumTable(
        omega_grid=omega_grid,
        values=np.asarray(spectrum_values(p, omega_grid, variant)),
        variant=Variant(variant),
        meta=p.to_dict(),
    )


def stationary_occupation(c: FluctuationCoeffs, big_gamma: float) -> float:
    """Normally ordered ``<db^dagger db>`` from the quadrature Lyapunov equation.

    With ``db = (X + iP)/sqrt(2)`` the symmetrized covariance obeys
    ``M sigma + sigma M^T + Gamma I = 0`` for vacuum input noise of rate
    ``2 Gamma``; the occupation is ``(sigma_XX + sigma_PP - 1) / 2``.
    """
    a, b = c.a_coef, c.b_coef
    # d(X,P)/dt from dδb = A δb + B δb^dagger
    m = np.array(
        [
            [(a + b).real, -(a - b).imag],
            [(a + b).imag, (a - b).real],
        ]
    )
    sigma = solve_continuous_lyapunov(m, -big_gamma * np.eye(2))
    return float(0.5 * (sigma[0, 0] + sigma[1, 1] - 1.0))


@dataclass
class DeviationRow:
    n_atoms: float
    abs_beta: float
    abs_beta_inf: float
    deviation: float
    ok: bool = True
    error: str = ""


def deviation_curve(p_base: ModelParams, n_list) -> list[DeviationRow]:
    """``||beta| - |beta_inf||`` versus particle number.

    Rows whose solve fails are kept with ``ok=False`` and NaN values.
    """
    rows = []
    for n in n_list:
        try:
            p = p_base.replace(n_atoms=float(n))
            b_inf = abs(undeformed_steady_state(p))
            b = abs(solve_deformed_steady_state(p).beta)
        except DefbecError as exc:
            rows.append(DeviationRow(float(n), math.nan, math.nan, math.nan, False, str(exc)))
            continue
        rows.append(DeviationRow(float(n), b, b_inf, abs(b - b_inf)))
    return rows


@dataclass
class SpectrumSurface:
    n_values: np.ndarray
    omega_grid: np.ndarray
    values: np.ndarray  # shape (len(n_values), len(omega_grid))
    variant: Variant
    ok: np.ndarray
    errors: list[str]


def spectrum_surface(p_base: ModelParams, n_list, omega_grid, variant=Variant.PAPER) -> SpectrumSurface:
    n_values = np.asarray(n_list, dtype=float)
    omega_grid = np.asarray(omega_grid, dtype=float)
    values = np.full((n_values.size, omega_grid.size), np.nan)
    ok = np.ones(n_values.size, dtype=bool)
    errors = [""] * n_values.size
    for i, n in enumerate(n_values):
        try:
            values[i] = spectrum_values(p_base.replace(n_atoms=float(n)), omega_grid, variant)
        except DefbecError as exc:
            ok[i] = False
            errors[i] = str(exc)
    return SpectrumSurface(n_values, omega_grid, values, Variant(variant), ok, errors)
