"""Truncated-Fock Lindblad oracle for the deformed driven mode.

Density matrices are vectorized row-major, so ``vec(X rho Y) = (X kron Y^T)
vec(rho)``.  The dissipator acts on the bare ``b`` with rate ``Gamma`` in the
amplitude: ``d<b>/dt`` contains ``-Gamma <b>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur, solve_triangular

from .algebra import annihilator_matrix, default_n_cut
from .errors import DomainError, SingularSolve, TruncationError
from .params import ModelParams, derive_params, nonlinear_strength
from .spectrum import SpectrumTable, Variant
from .steady import solve_deformed_steady_state


def effective_hamiltonian(p: ModelParams, n_cut: int, eta: float | None = None) -> np.ndarray:
    """``Delta b^+b + sqrt(N) g (b^+ + b) - (s/2)(b^+ b^2 + b^+2 b)`` in units of hbar."""
    if n_cut < 2:
        raise DomainError(f"n_cut must be >= 2, got {n_cut}")
    b = annihilator_matrix(n_cut)
    bd = b.conj().T
    s = nonlinear_strength(p, eta)
    h = (
        p.delta * (bd @ b)
        + math.sqrt(p.n_atoms) * p.g * (bd + b)
        - 0.5 * s * (bd @ b @ b + bd @ bd @ b)
    )
    return 0.5 * (h + h.conj().T)


def liouvillian(p: ModelParams, n_cut: int, eta: float | None = None) -> np.ndarray:
    h = effective_hamiltonian(p, n_cut, eta)
    b = annihilator_matrix(n_cut)
    bd = b.conj().T
    nb = bd @ b
    eye = np.eye(n_cut + 1)
    big_gamma = derive_params(p).big_gamma
    return (
        -1j * (np.kron(h, eye) - np.kron(eye, h.T))
        + big_gamma * (2.0 * np.kron(b, bd.T) - np.kron(nb, eye) - np.kron(eye, nb.T))
    )


def trace_row(dim: int) -> np.ndarray:
    return np.eye(dim).reshape(-1)


@dataclass
class DensityMatrix:
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def check(self, tol: float = 1e-10, pos_tol: float = 1e-8):
        rho = self.entries
        if abs(np.trace(rho) - 1.0) > tol:
            raise SingularSolve(f"trace {np.trace(rho)} != 1")
        if np.max(np.abs(rho - rho.conj().T)) > tol:
            raise SingularSolve("density matrix not Hermitian")
        if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -pos_tol:
            raise SingularSolve("density matrix not positive")
        return self


def steady_density(
    p: ModelParams, n_cut: int, eta: float | None = None, lmat: np.ndarray | None = None
) -> DensityMatrix:
    """Unit-trace null vector of the Liouvillian.

    One row of ``L`` is replaced by the trace functional; the solve is
    rejected if the returned state leaves a residual above ``1e-9``.
    """
    dim = n_cut + 1
    if lmat is None:
        lmat = liouvillian(p, n_cut, eta)
    a = lmat.copy()
    a[0, :] = trace_row(dim)
    rhs = np.zeros(dim * dim, dtype=complex)
    rhs[0] = 1.0
    try:
        vec = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSolve(f"degenerate Liouvillian null space at n_cut={n_cut}") from exc
    resid = np.linalg.norm(lmat @ vec)
    if not np.isfinite(resid) or resid > 1e-9:
        raise SingularSolve(f"steady-state residual {resid:.3g} at n_cut={n_cut}")
    rho = vec.reshape(dim, dim)
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho).check()


def mean_amplitude(rho: DensityMatrix) -> complex:
    b = annihilator_matrix(rho.dim - 1)
    return complex(np.trace(b @ rho.entries))


def mean_occupation(rho: DensityMatrix) -> float:
    n = np.arange(rho.dim)
    return float(np.real(rho.entries.diagonal() @ n))


def coherent_state(alpha: complex, n_cut: int) -> np.ndarray:
    """Normalized coherent-state vector, truncated at ``n_cut``."""
    n = np.arange(n_cut + 1)
    logfact = np.array([math.lgamma(k + 1) for k in n])
    with np.errstate(divide="ignore"):
        mag = np.exp(n * np.log(abs(alpha)) - 0.5 * logfact) if alpha != 0 else (n == 0).astype(float)
    psi = mag * np.exp(1j * n * np.angle(alpha)) if alpha != 0 else mag.astype(complex)
    return psi / np.linalg.norm(psi)


@dataclass
class ResolventSolver:
    """Shift-and-solve for ``(L' - i w) x = r`` reusing one Schur form.

    ``L' = L - |rho_ss>><<1|`` agrees with ``L`` on traceless operators but
    is invertible at ``w = 0``.
    """

    t: np.ndarray
    z: np.ndarray

    @classmethod
    def from_liouvillian(cls, lmat: np.ndarray, rho_ss: DensityMatrix) -> "ResolventSolver":
        dim = rho_ss.dim
        shifted = lmat - np.outer(rho_ss.entries.reshape(-1), trace_row(dim))
        t, z = schur(shifted, output="complex")
        return cls(t, z)

    def solve(self, omega: float, rhs: np.ndarray) -> np.ndarray:
        shifted = self.t - 1j * omega * np.eye(self.t.shape[0])
        y = solve_triangular(shifted, self.z.conj().T @ rhs)
        return self.z @ y


def regression_spectrum(
    p: ModelParams, n_cut: int, omega_grid, eta: float | None = None
) -> SpectrumTable:
    """Normally ordered fluctuation spectrum by the quantum regression theorem.

    ``C(tau) = <db^+(tau) db(0)>`` and ``S(w) = (1/pi) Re int_0^inf
    e^{i w tau} C(tau)^* dtau``; each frequency costs one triangular solve.
    """
    omega_grid = np.asarray(omega_grid, dtype=float)
    lmat = liouvillian(p, n_cut, eta)
    rho = steady_density(p, n_cut, eta, lmat=lmat)
    dim = rho.dim
    b = annihilator_matrix(n_cut)
    beta = mean_amplitude(rho)
    rhs = -((b - beta * np.eye(dim)) @ rho.entries).reshape(-1)
    solver = ResolventSolver.from_liouvillian(lmat, rho)
    # tr(b^+ X) = sum_ij conj(b)_ij X_ij
    bd_row = b.conj().reshape(-1)
    values = np.empty(omega_grid.size)
    for k, w in enumerate(omega_grid):
        x = solver.solve(w, rhs)
        if not np.all(np.isfinite(x)):
            raise SingularSolve(f"resolvent solve failed at omega={w:g}")
        values[k] = (bd_row @ x).real / math.pi
    return SpectrumTable(
        omega_grid=omega_grid,
        values=values,
        variant=Variant.PHYSICAL,
        meta={**p.to_dict(), "n_cut": n_cut, "eta": eta, "method": "regression"},
    )


@dataclass
class ConvergenceReport:
    n_cuts: list[int]
    amplitudes: list[complex]
    occupations: list[float]
    converged: bool
    converged_at: int | None
    tol: float


def truncation_convergence(
    p: ModelParams, n_cuts, eta: float | None = None, tol: float = 1e-8
) -> ConvergenceReport:
    """Track ``<b>`` and ``<b^+ b>`` over increasing cutoffs.

    Converged at the first cutoff whose values differ from the previous
    cutoff by less than ``tol``.
    """
    n_cuts = sorted(int(n) for n in n_cuts)
    if len(n_cuts) < 2:
        raise ValueError("need at least two cutoffs")
    amps, occs = [], []
    converged_at = None
    for i, n in enumerate(n_cuts):
        rho = steady_density(p, n, eta)
        amps.append(mean_amplitude(rho))
        occs.append(mean_occupation(rho))
        if converged_at is None and i > 0:
            if abs(amps[-1] - amps[-2]) < tol and abs(occs[-1] - occs[-2]) < tol:
                converged_at = n_cuts[i - 1]
    return ConvergenceReport(n_cuts, amps, occs, converged_at is not None, converged_at, tol)


def converged_cutoff(
    p: ModelParams, eta: float | None = None, tol: float = 1e-8, step: int = 5, max_cut: int = 60
) -> int:
    """Smallest cutoff, from the default upward in ``step``, that agrees with the next one.

    Raises
    ------
    TruncationError
        If no cutoff up to ``max_cut`` converges.
    """
    beta = solve_deformed_steady_state(p, eta=eta).beta
    n = max(2, min(default_n_cut(p.n_atoms, beta), max_cut - step))
    prev = steady_density(p, n, eta)
    while n + step <= max_cut:
        cur = steady_density(p, n + step, eta)
        if (
            abs(mean_amplitude(cur) - mean_amplitude(prev)) < tol
            and abs(mean_occupation(cur) - mean_occupation(prev)) < tol
        ):
            return n
        n, prev = n + step, cur
    raise TruncationError(f"no converged cutoff up to {max_cut} for {p}")


@dataclass
class OracleComparison:
    n_atoms: float
    n_cut: int
    beta_semiclassical: complex
    beta_oracle: complex
    occupation_oracle: float

    @property
    def rel_error(self) -> float:
        return abs(self.beta_oracle - self.beta_semiclassical) / abs(self.beta_semiclassical)


def compare_amplitudes(p_base: ModelParams, n_list, n_cut: int | None = None) -> list[OracleComparison]:
    rows = []
    for n in n_list:
        p = p_base.replace(n_atoms=float(n))
        nc = converged_cutoff(p) if n_cut is None else n_cut
        rho = steady_density(p, nc)
        rows.append(
            OracleComparison(
                n_atoms=float(n),
                n_cut=nc,
                beta_semiclassical=solve_deformed_steady_state(p).beta,
                beta_oracle=mean_amplitude(rho),
                occupation_oracle=mean_occupation(rho),
            )
        )
    return rows
