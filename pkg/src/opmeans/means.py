"""Two-operator weighted means and related identities on SPD matrices.

The geometric mean is computed by its defining congruence formula
a^(1/2) (a^(-1/2) b a^(-1/2))^nu a^(1/2); the arithmetic-harmonic iteration
that could compute the nu = 1/2 case lives in the test suite as an
independent oracle, not here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrices import (
    SymMatrix,
    frobenius_norm,
    matrix_inverse,
    matrix_power,
    matrix_sqrt,
    sandwich,
    spectral_bounds,
)

__all__ = [
    "SpdPair",
    "weighted_arithmetic",
    "weighted_geometric",
    "weighted_harmonic",
    "refinement_bridge",
    "resolvent_identity_residual",
]

# Slack for validating caller-supplied spectral bounds against computed spectra.
_BOUND_SLACK_REL = 1e-12


def _require_nu(nu):
    nu = float(nu)
    if not 0.0 <= nu <= 1.0:
        raise ValueError(f"nu must lie in [0, 1], got {nu}")
    return nu


@dataclass(frozen=True)
class SpdPair:
    """Two SPD matrices with certified spectral bounds m <= spec(A), spec(B) <= big_m.

    Bounds are certified from the computed spectra unless the caller supplies
    looser a-priori bounds, which are validated for containment only.  The
    condition ratio h = big_m / m drives the reverse-inequality constants;
    looser bounds weaken those constants but never invalidate them.
    """

    a: SymMatrix
    b: SymMatrix
    m: float
    big_m: float

    @classmethod
    def from_matrices(cls, a: SymMatrix, b: SymMatrix, m=None, big_m=None) -> "SpdPair":
        a._check_same_dim(b)
        lo_a, hi_a = spectral_bounds(a)
        lo_b, hi_b = spectral_bounds(b)
        lo = min(lo_a, lo_b)
        hi = max(hi_a, hi_b)
        if lo <= 0.0:
            raise ValueError(f"matrices must be positive definite (smallest eigenvalue {lo:.3e})")
        slack = _BOUND_SLACK_REL * max(hi, 1.0)
        if m is None:
            m = lo
        elif not 0.0 < m <= lo + slack:
            raise ValueError(f"supplied lower bound {m} does not contain the spectra (min {lo:.6e})")
        if big_m is None:
            big_m = hi
        elif big_m < hi - slack:
            raise ValueError(f"supplied upper bound {big_m} does not contain the spectra (max {hi:.6e})")
        if not m <= big_m:
            raise ValueError(f"bounds must satisfy m <= big_m, got {m} > {big_m}")
        return cls(a=a, b=b, m=float(m), big_m=float(big_m))

    @property
    def n(self):
        return self.a.n

    @property
    def h(self):
        """Condition ratio big_m / m (>= 1; equals 1 only for A = B = mI)."""
        return self.big_m / self.m


def weighted_arithmetic(pair: SpdPair, nu) -> SymMatrix:
    """(1-nu) A + nu B."""
    nu = _require_nu(nu)
    return SymMatrix._wrap((1.0 - nu) * pair.a.entries + nu * pair.b.entries)


def weighted_geometric(pair: SpdPair, nu) -> SymMatrix:
    """Weighted geometric mean a^(1/2) (a^(-1/2) b a^(-1/2))^nu a^(1/2)."""
    nu = _require_nu(nu)
    root = matrix_sqrt(pair.a)
    inv_root = matrix_power(pair.a, -0.5)
    middle = sandwich(inv_root, pair.b)
    return sandwich(root, matrix_power(middle, nu))


def weighted_harmonic(pair: SpdPair, nu) -> SymMatrix:
    """((1-nu) A^(-1) + nu B^(-1))^(-1)."""
    nu = _require_nu(nu)
    inv_a = matrix_inverse(pair.a)
    inv_b = matrix_inverse(pair.b)
    mix = SymMatrix._wrap((1.0 - nu) * inv_a.entries + nu * inv_b.entries)
    return matrix_inverse(mix)


def refinement_bridge(pair: SpdPair) -> SymMatrix:
    """Midpoint arithmetic-geometric gap (A+B)/2 - A #_(1/2) B.

    Positive semidefinite; zero exactly when A = B.  Scaled by 2*min(nu, 1-nu)
    it is the refinement term of the mean-ordering chain.
    """
    mid = weighted_geometric(pair, 0.5)
    return SymMatrix._wrap(0.5 * (pair.a.entries + pair.b.entries) - mid.entries)


def resolvent_identity_residual(x: SymMatrix, y: SymMatrix) -> float:
    """Relative Frobenius residual of (X+Y)^(-1) = X^(-1) - X^(-1)(X^(-1)+Y^(-1))^(-1)X^(-1).

    Mathematically zero for SPD X, Y; the returned value measures the
    floating-point defect of the two evaluation routes.
    """
    x._check_same_dim(y)
    lo_x, _ = spectral_bounds(x)
    lo_y, _ = spectral_bounds(y)
    if min(lo_x, lo_y) <= 0.0:
        raise ValueError("both operands must be positive definite")
    lhs = matrix_inverse(x + y)
    inv_x = matrix_inverse(x)
    inner = matrix_inverse(inv_x + matrix_inverse(y))
    rhs = inv_x - sandwich(inv_x, inner)
    defect = np.linalg.norm(lhs.entries - rhs.entries)
    return float(defect / max(frobenius_norm(lhs), 1e-300))
