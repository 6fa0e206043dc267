"""Model parameters.

All rates are measured in units of the one-atom linewidth ``gamma``; the
``gamma`` field is kept so that unit-scaling can be checked explicitly.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import DomainError


@dataclass(frozen=True)
class ModelParams:
    """One condensate/laser configuration.

    Parameters
    ----------
    delta : float
        Detuning between the atomic transition and the laser.
    g : float
        Laser coupling amplitude (real, non-negative).
    gamma : float
        One-atom linewidth.
    n_atoms : float
        Total particle number; treated as a positive real, at least 2.
    """

    delta: float = 0.0
    g: float = 2.5
    gamma: float = 1.0
    n_atoms: float = 100.0

    def __post_init__(self):
        for name in ("delta", "g", "gamma", "n_atoms"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.gamma <= 0:
            raise DomainError(f"gamma must be > 0, got {self.gamma}")
        if self.n_atoms < 2:
            raise DomainError(f"n_atoms must be >= 2, got {self.n_atoms}")
        if self.g < 0:
            raise DomainError(f"g must be >= 0, got {self.g}")

    def replace(self, **changes) -> "ModelParams":
        return ModelParams(**{**asdict(self), **changes})

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DerivedParams:
    big_gamma: float  # collective damping rate gamma*sqrt(N)
    eta: float  # deformation 1/N


def derive_params(p: ModelParams) -> DerivedParams:
    return DerivedParams(big_gamma=p.gamma * math.sqrt(p.n_atoms), eta=1.0 / p.n_atoms)


def nonlinear_strength(p: ModelParams, eta: float | None = None) -> float:
    """Return ``sqrt(N) * g * eta``, the coefficient of the deformation terms.

    ``eta`` overrides the physical value ``1/N``; passing ``0.0`` switches the
    deformation off while keeping the damping ``gamma*sqrt(N)``.
    """
    if eta is None:
        eta = 1.0 / p.n_atoms
    return math.sqrt(p.n_atoms) * p.g * eta
