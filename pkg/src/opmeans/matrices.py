"""Dense real symmetric matrices, a cyclic Jacobi eigensolver, and spectral
matrix functions.

The carrier type is :class:`SymMatrix`, which can only be built through
symmetrizing constructors so its symmetry invariant holds exactly.  All
spectral operations (fractional powers, square root, inverse, extremal
eigenvalues, Loewner margins) go through the in-house Jacobi solver; the
decomposition of a matrix is cached on the instance, which is safe because
instances are immutable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NumericalError",
    "ConvergenceError",
    "NotPositiveSemidefiniteError",
    "SingularMatrixError",
    "SymMatrix",
    "EigenDecomp",
    "jacobi_eigen",
    "matrix_function",
    "matrix_power",
    "matrix_sqrt",
    "matrix_inverse",
    "loewner_margin",
    "spectral_bounds",
    "operator_norm",
    "frobenius_norm",
    "load_matrix",
    "save_matrix",
]

MIN_DIM = 2
MAX_DIM = 64

# Sweep until the off-diagonal Frobenius norm falls below this times the
# input Frobenius norm; 30 sweeps is far beyond what n <= 64 ever needs.
_OFF_TOL = 1e-14
_MAX_SWEEPS = 30

# Eigenvalues in [-1e-10*||A||, 0) are roundoff negatives on numerically PSD
# input and are clamped to 0 for sqrt / fractional powers; inversion requires
# eigenvalues above 1e-12*||A||.
_PSD_CLAMP_REL = 1e-10
_INV_FLOOR_REL = 1e-12

_FILE_SYMMETRY_TOL = 1e-12


class NumericalError(Exception):
    """Base class for numerical failures (distinct from usage errors)."""


class ConvergenceError(NumericalError):
    """Eigensolver failed to converge within the sweep budget."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (off-diagonal residual {residual:.3e})")
        self.residual = residual


class NotPositiveSemidefiniteError(NumericalError):
    """Fractional power or square root requested on an indefinite matrix."""


class SingularMatrixError(NumericalError):
    """Inverse or negative power requested on a (near-)singular matrix."""


class SymMatrix:
    """Immutable dense real symmetric matrix, 2 <= n <= 64."""

    __slots__ = ("_entries", "_eigen")

    def __init__(self, entries):
        # Public constructor validates; use from_array for tolerance control.
        arr = np.asarray(entries, dtype=float)
        self._init_from(arr, check=True, tol=0.0)

    def _init_from(self, arr, check, tol):
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        n = arr.shape[0]
        if not MIN_DIM <= n <= MAX_DIM:
            raise ValueError(f"dimension must be in [{MIN_DIM}, {MAX_DIM}], got {n}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("entries must be finite")
        if check:
            scale = float(np.abs(arr).max())
            if float(np.abs(arr - arr.T).max()) > tol * scale:
                raise ValueError("matrix is not symmetric within tolerance")
        sym = 0.5 * (arr + arr.T)
        sym.setflags(write=False)
        self._entries = sym
        self._eigen = None

    @classmethod
    def from_array(cls, entries, tol=0.0):
        """Build from a near-symmetric array; asymmetry beyond tol*max|entry| is rejected."""
        obj = cls.__new__(cls)
        obj._init_from(np.asarray(entries, dtype=float), check=True, tol=tol)
        return obj

    @classmethod
    def _wrap(cls, arr):
        # Internal: arr is symmetric up to roundoff by construction.
        obj = cls.__new__(cls)
        obj._init_from(np.asarray(arr, dtype=float), check=False, tol=0.0)
        return obj

    @classmethod
    def identity(cls, n):
        return cls._wrap(np.eye(n))

    @classmethod
    def zeros(cls, n):
        return cls._wrap(np.zeros((n, n)))

    @classmethod
    def diagonal(cls, values):
        vals = np.asarray(values, dtype=float)
        if vals.ndim != 1:
            raise ValueError("diagonal expects a 1-d sequence")
        return cls._wrap(np.diag(vals))

    @property
    def n(self):
        return self._entries.shape[0]

    @property
    def entries(self):
        """Read-only (n, n) float array view."""
        return self._entries

    def __add__(self, other):
        if isinstance(other, SymMatrix):
            self._check_same_dim(other)
            return SymMatrix._wrap(self._entries + other._entries)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, SymMatrix):
            self._check_same_dim(other)
            return SymMatrix._wrap(self._entries - other._entries)
        return NotImplemented

    def __mul__(self, scale):
        if isinstance(scale, (int, float)):
            return SymMatrix._wrap(self._entries * float(scale))
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return SymMatrix._wrap(-self._entries)

    def _check_same_dim(self, other):
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __repr__(self):
        return f"SymMatrix(n={self.n})"


def sandwich(outer, inner):
    """Symmetrized congruence product outer @ inner @ outer of SymMatrix operands."""
    outer._check_same_dim(inner)
    prod = outer.entries @ inner.entries @ outer.entries
    return SymMatrix._wrap(0.5 * (prod + prod.T))


@dataclass(frozen=True)
class EigenDecomp:
    """Orthogonal eigenvectors (columns of q) and ascending eigenvalues lam."""

    q: np.ndarray
    lam: np.ndarray


def _offdiag_indices(n):
    return np.triu_indices(n, k=1)


def _jacobi_rotate_batch(a, v, p, q):
    """One vectorized (p, q) rotation across a stack; annihilates a[:, p, q]."""
    apq = a[:, p, q]
    mask = apq != 0.0
    if not mask.any():
        return
    delta = a[:, q, q] - a[:, p, p]
    # stable small-angle tangent: t solves apq*t^2 + delta*t - apq = 0,
    # written without overflow via the hypotenuse form
    sgn = np.where(delta >= 0.0, 1.0, -1.0)
    denom = np.hypot(2.0 * apq, delta) + np.abs(delta)
    t = np.where(mask, 2.0 * apq * sgn / np.where(mask, denom, 1.0), 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    cp = c[:, None]
    sp = s[:, None]

    col_p = a[:, :, p].copy()
    col_q = a[:, :, q].copy()
    a[:, :, p] = cp * col_p - sp * col_q
    a[:, :, q] = sp * col_p + cp * col_q
    row_p = a[:, p, :].copy()
    row_q = a[:, q, :].copy()
    a[:, p, :] = cp * row_p - sp * row_q
    a[:, q, :] = sp * row_p + cp * row_q
    # the rotation is chosen to zero this entry; write the exact zero
    a[:, p, q] = 0.0
    a[:, q, p] = 0.0

    if v is not None:
        vec_p = v[:, :, p].copy()
        vec_q = v[:, :, q].copy()
        v[:, :, p] = cp * vec_p - sp * vec_q
        v[:, :, q] = sp * vec_p + cp * vec_q


def _eigh_stack(stack, need_vectors=True, max_sweeps=_MAX_SWEEPS):
    """Cyclic Jacobi on a (B, n, n) stack of symmetric matrices.

    Returns (lam, q) with lam (B, n) ascending and q (B, n, n) orthogonal
    (q is None when need_vectors is False).  Raises ConvergenceError if any
    matrix in the stack fails to reach the off-diagonal tolerance.
    """
    a = np.array(stack, dtype=float, copy=True)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError(f"expected a (B, n, n) stack, got shape {a.shape}")
    batch, n, _ = a.shape
    v = None
    if need_vectors:
        v = np.zeros_like(a)
        v[:, np.arange(n), np.arange(n)] = 1.0

    iu = _offdiag_indices(n)
    fro = np.sqrt((a * a).sum(axis=(1, 2)))
    tol = _OFF_TOL * fro
    converged = False
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * (a[:, iu[0], iu[1]] ** 2).sum(axis=1))
        if np.all(off <= tol):
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _jacobi_rotate_batch(a, v, p, q)
    if not converged:
        off = np.sqrt(2.0 * (a[:, iu[0], iu[1]] ** 2).sum(axis=1))
        if not np.all(off <= tol):
            worst = float((off / np.maximum(fro, 1e-300)).max())
            raise ConvergenceError(
                f"Jacobi sweeps exhausted after {max_sweeps} sweeps", worst
            )

    lam = np.diagonal(a, axis1=1, axis2=2).copy()
    order = np.argsort(lam, axis=1, kind="stable")
    lam = np.take_along_axis(lam, order, axis=1)
    if not need_vectors:
        return lam, None
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    # deterministic sign: largest-magnitude component of each column positive
    lead = np.argmax(np.abs(v), axis=1)
    signs = np.sign(np.take_along_axis(v, lead[:, None, :], axis=1))[:, 0, :]
    signs = np.where(signs == 0.0, 1.0, signs)
    v = v * signs[:, None, :]
    return lam, v


def _eigvals_min_stack(stack, max_sweeps=_MAX_SWEEPS):
    lam, _ = _eigh_stack(stack, need_vectors=False, max_sweeps=max_sweeps)
    return lam[:, 0]


def jacobi_eigen(a: SymMatrix, max_sweeps=_MAX_SWEEPS) -> EigenDecomp:
    """Eigendecomposition by cyclic Jacobi rotations; eigenvalues ascending.

    Deterministic for a given input; the result is cached on the matrix.
    """
    if not isinstance(a, SymMatrix):
        raise TypeError("jacobi_eigen expects a SymMatrix")
    if a._eigen is not None and max_sweeps == _MAX_SWEEPS:
        return a._eigen
    lam, v = _eigh_stack(a.entries[None, :, :], need_vectors=True, max_sweeps=max_sweeps)
    lam = lam[0]
    v = v[0]
    lam.setflags(write=False)
    v.setflags(write=False)
    decomp = EigenDecomp(q=v, lam=lam)
    if max_sweeps == _MAX_SWEEPS:
        a._eigen = decomp
    return decomp


def _is_integer(p):
    return float(p).is_integer()


def _apply_spectral(lam, fn_tag, norm):
    """Map eigenvalues through the tagged scalar function, enforcing domains."""
    if fn_tag == "sqrt":
        fn_tag = ("power", 0.5)
    if fn_tag == "inverse":
        fn_tag = ("power", -1.0)
    kind, p = fn_tag
    if kind != "power":
        raise ValueError(f"unknown matrix function tag {fn_tag!r}")
    p = float(p)
    lam = lam.copy()
    if p < 0.0:
        floor = _INV_FLOOR_REL * norm
        if lam.min() < floor or lam.min() <= 0.0:
            raise SingularMatrixError(
                f"eigenvalue {lam.min():.3e} below inversion floor {floor:.3e}"
            )
    elif not _is_integer(p):
        clamp = _PSD_CLAMP_REL * norm
        if lam.min() < -clamp:
            raise NotPositiveSemidefiniteError(
                f"eigenvalue {lam.min():.3e} below -{clamp:.3e}; "
                "matrix is not positive semidefinite"
            )
        lam[lam < 0.0] = 0.0
    with np.errstate(divide="raise"):
        return np.power(lam, p)


def matrix_function(a: SymMatrix, fn) -> SymMatrix:
    """Spectral function q * fn(lam) * q^T of a symmetric matrix.

    ``fn`` is ``"sqrt"``, ``"inverse"``, or ``("power", p)``.  Tiny negative
    eigenvalues (roundoff on PSD input) are clamped to zero for non-integer
    powers; inversion refuses eigenvalues below a floor relative to the
    operator norm.
    """
    decomp = jacobi_eigen(a)
    norm = float(np.abs(decomp.lam).max())
    flam = _apply_spectral(decomp.lam, fn, norm)
    out = (decomp.q * flam) @ decomp.q.T
    return SymMatrix._wrap(0.5 * (out + out.T))


def matrix_power(a: SymMatrix, p) -> SymMatrix:
    return matrix_function(a, ("power", p))


def matrix_sqrt(a: SymMatrix) -> SymMatrix:
    return matrix_function(a, "sqrt")


def matrix_inverse(a: SymMatrix) -> SymMatrix:
    return matrix_function(a, "inverse")


def loewner_margin(a: SymMatrix, b: SymMatrix) -> float:
    """Smallest eigenvalue of a - b; nonnegative exactly when a >= b in Loewner order."""
    a._check_same_dim(b)
    diff = a - b
    return float(jacobi_eigen(diff).lam[0])


def spectral_bounds(a: SymMatrix):
    """(smallest, largest) eigenvalue."""
    lam = jacobi_eigen(a).lam
    return float(lam[0]), float(lam[-1])


def operator_norm(a: SymMatrix) -> float:
    lam = jacobi_eigen(a).lam
    return float(max(abs(lam[0]), abs(lam[-1])))


def frobenius_norm(a: SymMatrix) -> float:
    return float(np.sqrt((a.entries**2).sum()))


def save_matrix(a: SymMatrix, path) -> None:
    """Write {"n": ..., "entries": [row-major n*n floats]} as JSON."""
    doc = {"n": a.n, "entries": [float(x) for x in a.entries.ravel()]}
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle)
        handle.write("\n")


def load_matrix(path) -> SymMatrix:
    """Read the JSON matrix document; validates shape and symmetry.

    Symmetry is checked with absolute tolerance 1e-12 * max|entry| and then
    enforced exactly by symmetrization.
    """
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    if not isinstance(doc, dict):
        raise ValueError("matrix file must be a JSON object with 'n' and 'entries'")
    if "n" not in doc or "entries" not in doc:
        raise ValueError("matrix file must contain fields 'n' and 'entries'")
    n = doc["n"]
    if not isinstance(n, int):
        raise ValueError(f"field 'n' must be an integer, got {n!r}")
    entries = doc["entries"]
    if not isinstance(entries, list) or len(entries) != n * n:
        raise ValueError(f"field 'entries' must hold exactly n*n = {n * n} numbers")
    arr = np.asarray(entries, dtype=float).reshape(n, n)
    return SymMatrix.from_array(arr, tol=_FILE_SYMMETRY_TOL)
