"""Parameter and configuration records.

The operator family is indexed by a triple (n, c, beta):

* ``n > 0`` -- the approximation index.  All formulas are analytic in n, so
  it is stored as a real; convergence sweeps use integers.
* ``c > 0`` -- the Baskakov-kernel shape parameter.
* ``beta in [0, 1)`` -- the generalized-Poisson (Jain) basis parameter.
  beta = 0 reduces the basis to Poisson weights.

Moment formulas of order j are only finite for ``n > (j+1)c``; each consumer
checks its own threshold via :func:`require_order`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import DomainError, ThresholdError


class OperatorKind(str, enum.Enum):
    """The three operator families."""

    JAIN = "jain"
    JAIN_BASKAKOV = "jain-baskakov"
    KING = "king"

# Values of beta this close to 1 make the (1-beta)^-7 factors in the moment
# formulas amplify rounding catastrophically, so the public API rejects them
# by default.  Pass a larger beta_guard explicitly to lift the guard.
DEFAULT_BETA_GUARD = 0.95


@dataclass(frozen=True)
class OperatorParams:
    """The (n, c, beta) triple with validation."""

    n: float
    c: float
    beta: float
    beta_guard: float = field(default=DEFAULT_BETA_GUARD, compare=False)

    def __post_init__(self):
        if not (self.n > 0):
            raise DomainError(f"n must be positive, got {self.n}")
        if not (self.c > 0):
            raise DomainError(f"c must be positive, got {self.c}")
        if not (0.0 <= self.beta < 1.0):
            raise DomainError(f"beta must lie in [0, 1), got {self.beta}")
        if self.beta > self.beta_guard:
            raise DomainError(
                f"beta={self.beta} exceeds the numerical guard {self.beta_guard}; "
                "construct OperatorParams(..., beta_guard=...) to override"
            )

    @property
    def one_minus_beta(self) -> float:
        return 1.0 - self.beta

    def require_order(self, j: int) -> None:
        """Check the order-j moment threshold n > (j+1)c."""
        if not (self.n > (j + 1) * self.c):
            raise ThresholdError(
                f"order-{j} formula needs n > {j + 1}c "
                f"(n={self.n}, c={self.c})"
            )

    def key(self) -> tuple:
        """Hashable identity used for caching (guard excluded)."""
        return (self.n, self.c, self.beta)


@dataclass(frozen=True)
class EvalConfig:
    """Numerical tolerances for series truncation, quadrature and grids.

    tail_eps        unaccounted basis mass at which the v-series may stop
    quad_rel_tol    target relative error of each kernel integral
    quad_max_nodes  total integrand-evaluation budget per kernel integral
    grid_points     base grid resolution for moduli / sup computations
    domain_cap      right endpoint standing in for +inf in sup computations
    """

    tail_eps: float = 1e-12
    quad_rel_tol: float = 1e-10
    quad_max_nodes: int = 4200
    grid_points: int = 257
    domain_cap: float = 40.0

    def __post_init__(self):
        if not (0.0 < self.tail_eps < 1.0):
            raise DomainError(f"tail_eps must be in (0,1), got {self.tail_eps}")
        if not (self.quad_rel_tol > 0):
            raise DomainError("quad_rel_tol must be positive")
        if self.quad_max_nodes < 21:
            raise DomainError("quad_max_nodes must allow at least one panel (21)")
        if self.grid_points < 2:
            raise DomainError("grid_points must be at least 2")
        if not (self.domain_cap > 0):
            raise DomainError("domain_cap must be positive")

    def quad_key(self) -> tuple:
        return (self.quad_rel_tol, self.quad_max_nodes)


@dataclass(frozen=True)
class BasisWeight:
    """One generalized-Poisson basis weight, carried in both scales.

    ``log_weight`` is the natural log (``-inf`` for an exactly-zero weight);
    ``weight`` is its exponential.
    """

    v: int
    log_weight: float
    weight: float
