"""Dense matrices for the number-conserving (deformed) ladder operators.

Levels are ``|0>, ..., |n_cut>``.  The deformed annihilator is
``B = b f(b^dagger b)`` with ``f(n) = sqrt(1 - eta (n - 1))``, so
``<n-1|B|n> = sqrt(n) f(n)`` and ``B`` annihilates ``|N + 1>`` when
``eta = 1/N``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Slack on 1 - eta (n - 1) >= 0 so that eta = 1/N with n = N + 1 passes.
_CLOSURE_SLACK = 1e-12


class Order(str, enum.Enum):
    EXACT = "exact"
    FIRST = "first"


def annihilator_matrix(n_cut: int) -> np.ndarray:
    if n_cut < 1:
        raise DomainError(f"n_cut must be >= 1, got {n_cut}")
    return np.diag(np.sqrt(np.arange(1, n_cut + 1, dtype=float)), 1).astype(complex)


def number_matrix(n_cut: int) -> np.ndarray:
    return np.diag(np.arange(n_cut + 1, dtype=float)).astype(complex)


def deformation_function(n, eta: float):
    """``f(n) = sqrt(1 - eta (n - 1))``; vectorized in ``n``."""
    arg = 1.0 - eta * (np.asarray(n, dtype=float) - 1.0)
    if np.any(arg < -_CLOSURE_SLACK):
        raise DomainError(f"f(n) undefined for eta={eta}: level beyond N + 1 = {1 / eta + 1:g}")
    out = np.sqrt(np.clip(arg, 0.0, None))
    return float(out) if out.ndim == 0 else out


def _check_closure(n_cut: int, eta: float):
    if eta < 0:
        raise DomainError(f"eta must be >= 0, got {eta}")
    if eta > 0 and eta * (n_cut - 1) > 1.0 + _CLOSURE_SLACK:
        raise DomainError(f"n_cut={n_cut} exceeds N + 1 = {1 / eta + 1:g}")


def deformed_annihilator(n_cut: int, eta: float, order=Order.EXACT) -> np.ndarray:
    order = Order(order)
    if n_cut < 1:
        raise DomainError(f"n_cut must be >= 1, got {n_cut}")
    levels = np.arange(1, n_cut + 1, dtype=float)
    if order is Order.EXACT:
        _check_closure(n_cut, eta)
        f = deformation_function(levels, eta)
    else:
        f = 1.0 - 0.5 * eta * (levels - 1.0)
    return np.diag(np.sqrt(levels) * f, 1).astype(complex)


def deformed_creator(n_cut: int, eta: float, order=Order.EXACT) -> np.ndarray:
    return deformed_annihilator(n_cut, eta, order).conj().T


@dataclass(frozen=True)
class DefectRow:
    n: int
    commutator: float  # <n|[B, B^dagger]|n>
    defect: float  # commutator - (1 - 2 eta n)
    boundary: bool  # last two levels, distorted by truncation


def commutator_defect(n_cut: int, eta: float) -> list[DefectRow]:
    """Diagonal of ``[B, B^dagger]`` compared with ``1 - 2 eta b^dagger b``.

    Levels ``n_cut - 1`` and ``n_cut`` are flagged as boundary rows.
    """
    _check_closure(n_cut, eta)
    big_b = deformed_annihilator(n_cut, eta)
    comm = big_b @ big_b.conj().T - big_b.conj().T @ big_b
    diag = comm.diagonal().real
    rows = []
    for n in range(n_cut + 1):
        rows.append(
            DefectRow(
                n=n,
                commutator=float(diag[n]),
                defect=float(diag[n] - (1.0 - 2.0 * eta * n)),
                boundary=n >= n_cut - 1,
            )
        )
    return rows


def expansion_error(n_cut: int, eta: float) -> float:
    """Largest element-wise gap between the exact and first-order ``B``."""
    diff = deformed_annihilator(n_cut, eta, Order.EXACT) - deformed_annihilator(n_cut, eta, Order.FIRST)
    return float(np.max(np.abs(diff)))


def default_n_cut(n_atoms: float, beta: complex) -> int:
    """Fock cutoff covering a coherent tail around ``|beta|^2``, capped at ``N + 1``."""
    nbar = abs(beta) ** 2
    return int(min(math.floor(n_atoms + 1), math.ceil(nbar + 8.0 * math.sqrt(nbar + 1.0) + 10.0)))
