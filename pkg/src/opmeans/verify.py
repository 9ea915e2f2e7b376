"""Seeded random instance generation and Loewner-margin checks for the
operator-level inequalities.

Five checks are implemented:

* ``refined_chain``      -- the four-link ordering chain
  AM >= GM + 2r*bridge >= GM >= refined-harmonic route >= HM,
  plus the plain AM >= GM margin checked independently;
* ``reverse_ratio``      -- S(sqrt(h)) GM >= AM - 2r*bridge;
* ``reverse_difference`` -- h sqrt(M) L(sqrt(M), sqrt(m)) ln S(sqrt(h)) I
  bounds AM - GM - 2r*bridge, plus the tighter per-instance constant
  sqrt(h) L(sqrt(h), 1) ln S(sqrt(h)) ||A||;
* ``baseline_reverses``  -- S(h) GM >= AM and h L(m, M) ln S(h) I + GM >= AM;
* ``holder_mccarthy``    -- the vector-state margins
  1 - <x|A|x>^(-nu) <x|A^nu|x> >= r (1 - <x|A|x>^(-1/2) <x|A^(1/2)|x>)^2
  and <x|A|x>^nu >= <x|A^nu|x>.

Reproducibility: instance k of check c draws from a fresh generator seeded
with SeedSequence([seed, CHECK_IDS[c], k]), so results never depend on
evaluation order.  run_suite evaluates margins through a batched Jacobi path;
the per-instance check_* functions are the plain reference implementations of
the same formulas.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .matrices import (
    NumericalError,
    SingularMatrixError,
    SymMatrix,
    _eigh_stack,
    _eigvals_min_stack,
    _INV_FLOOR_REL,
    jacobi_eigen,
    matrix_inverse,
    operator_norm,
    MIN_DIM,
    MAX_DIM,
)
from .means import (
    SpdPair,
    refinement_bridge,
    weighted_arithmetic,
    weighted_geometric,
    weighted_harmonic,
)
from .scalar import critical_nu_diff, critical_nu_ratio, log_mean, specht_ratio

__all__ = [
    "CHECK_NAMES",
    "SuiteConfig",
    "UnitVector",
    "CheckResult",
    "CheckAggregate",
    "SuiteReport",
    "gen_spd_pair",
    "gen_unit_vector",
    "check_refined_chain",
    "check_reverse_ratio",
    "check_reverse_difference",
    "check_baseline_reverses",
    "check_hm_refined",
    "run_suite",
]

CHECK_IDS = {
    "refined_chain": 1,
    "reverse_ratio": 2,
    "reverse_difference": 3,
    "baseline_reverses": 4,
    "holder_mccarthy": 5,
}
CHECK_NAMES = tuple(CHECK_IDS)

DEFAULT_REL_TOL = 1e-8
# The state-vector margins are scale-free quantities, so they carry their own
# absolute tolerance instead of the rel_tol * operator-norm rule.
HM_ABS_TOL = 1e-10

DEFAULT_NU_GRID = tuple(i / 20 for i in range(21))

_CHUNK = 64


@dataclass(frozen=True)
class SuiteConfig:
    """Configuration of a verification run."""

    seed: int = 0
    trials: int = 1000
    dims: tuple = (2, 3, 4, 8)
    m: float = 1.0
    big_m: float = 10.0
    nu_grid: tuple = DEFAULT_NU_GRID
    rel_tol: float = DEFAULT_REL_TOL
    checks: tuple = CHECK_NAMES

    def validate(self):
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.dims:
            raise ValueError("dims must be a nonempty list of dimensions")
        for d in self.dims:
            if not MIN_DIM <= d <= MAX_DIM:
                raise ValueError(f"dims entries must be in [{MIN_DIM}, {MAX_DIM}], got {d}")
        if not 0.0 < self.m < self.big_m:
            raise ValueError(f"spectrum bounds must satisfy 0 < m < M, got m={self.m}, M={self.big_m}")
        for nu in self.nu_grid:
            if not 0.0 <= nu <= 1.0:
                raise ValueError(f"nu_grid entries must lie in [0, 1], got {nu}")
        if not self.nu_grid:
            raise ValueError("nu_grid must be nonempty")
        if self.rel_tol <= 0.0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        for name in self.checks:
            if name not in CHECK_IDS:
                raise ValueError(f"unknown check {name!r}; known: {sorted(CHECK_IDS)}")
        return self


@dataclass(frozen=True)
class UnitVector:
    """Real vector of Euclidean norm 1 (within 1e-12)."""

    coords: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coords, dtype=float)
        if arr.ndim != 1:
            raise ValueError("coords must be a 1-d sequence")
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"vector norm must be 1 within 1e-12, got {norm!r}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @property
    def n(self):
        return self.coords.shape[0]


@dataclass(frozen=True)
class CheckResult:
    """Named margins of one check at one (instance, nu) with its pass rule."""

    check: str
    dim: int
    nu: float
    margins: dict
    scale: float
    tol: float
    passed: bool
    seed: int | None = None
    index: int | None = None


@dataclass(frozen=True)
class CheckAggregate:
    """Per-check summary over a whole suite run."""

    name: str
    worst_margin: float
    worst_instance: dict
    violations: int
    results: int


@dataclass(frozen=True)
class SuiteReport:
    config: SuiteConfig
    checks: tuple
    runtime_seconds: float
    errors: tuple = field(default_factory=tuple)

    @property
    def passed(self):
        return not self.errors and all(c.violations == 0 for c in self.checks)

    def to_json_dict(self):
        """Pinned report schema; runtime_seconds is the only volatile field."""
        doc = {
            "tool_version": __version__,
            "config": {
                "seed": self.config.seed,
                "trials": self.config.trials,
                "dims": list(self.config.dims),
                "m": self.config.m,
                "M": self.config.big_m,
                "nu_grid": list(self.config.nu_grid),
                "rel_tol": self.config.rel_tol,
                "checks": list(self.config.checks),
            },
            "checks": [
                {
                    "name": c.name,
                    "worst_margin": c.worst_margin,
                    "worst_instance": dict(c.worst_instance),
                    "violations": c.violations,
                }
                for c in self.checks
            ],
            "runtime_seconds": self.runtime_seconds,
        }
        if self.errors:
            doc["errors"] = [dict(e) for e in self.errors]
        return doc


# ---------------------------------------------------------------------------
# Instance generation
# ---------------------------------------------------------------------------

def _rng_for(seed, check, index):
    return np.random.default_rng(np.random.SeedSequence([seed, CHECK_IDS[check], index]))


def _random_orthogonal(rng, dim):
    gauss = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(gauss)
    signs = np.sign(np.diagonal(r))
    signs = np.where(signs == 0.0, 1.0, signs)
    return q * signs


def _random_spd_array(dim, m, big_m, rng):
    # Pin one eigenvalue to each endpoint so the certified condition ratio is
    # tight; remaining eigenvalues uniform in [m, M].
    interior = rng.uniform(m, big_m, size=dim - 2)
    eigvals = np.concatenate(([m, big_m], interior))
    q = _random_orthogonal(rng, dim)
    mat = (q * eigvals) @ q.T
    return 0.5 * (mat + mat.T)


def gen_spd_pair(dim, m, big_m, rng) -> SpdPair:
    """Random SPD pair with spectra in [m, M], endpoints attained.

    Draw order per matrix: interior eigenvalues, then the orthogonal factor;
    A is drawn before B.  Bounds are certified from the computed spectra.
    """
    if not 0.0 < m < big_m:
        raise ValueError(f"need 0 < m < M, got m={m}, M={big_m}")
    if not MIN_DIM <= dim <= MAX_DIM:
        raise ValueError(f"dim must be in [{MIN_DIM}, {MAX_DIM}], got {dim}")
    a = SymMatrix._wrap(_random_spd_array(dim, m, big_m, rng))
    b = SymMatrix._wrap(_random_spd_array(dim, m, big_m, rng))
    return SpdPair.from_matrices(a, b)


def gen_unit_vector(dim, rng) -> UnitVector:
    v = rng.standard_normal(dim)
    norm = np.linalg.norm(v)
    while norm < 1e-8:
        v = rng.standard_normal(dim)
        norm = np.linalg.norm(v)
    return UnitVector(v / norm)


def augmented_nu_grid(base, h):
    """Base grid plus the two critical weights of condition ratio h, clamped to [0, 1]."""
    if h == 1.0:
        extra = (0.5, 0.5)
    else:
        extra = (
            min(max(critical_nu_ratio(h), 0.0), 1.0),
            min(max(critical_nu_diff(h), 0.0), 1.0),
        )
    return tuple(base) + extra


# ---------------------------------------------------------------------------
# Reference (per-instance) checks
# ---------------------------------------------------------------------------

def _result(check, dim, nu, margins, scale, tol, seed=None, index=None):
    passed = min(margins.values()) >= -tol
    return CheckResult(
        check=check,
        dim=dim,
        nu=float(nu),
        margins=margins,
        scale=float(scale),
        tol=float(tol),
        passed=passed,
        seed=seed,
        index=index,
    )


def _pair_scale(pair):
    return max(operator_norm(pair.a), operator_norm(pair.b))


def check_refined_chain(pair: SpdPair, nu, rel_tol=DEFAULT_REL_TOL, seed=None, index=None) -> CheckResult:
    """Margins of the four chain links plus the plain AM >= GM margin."""
    nu = float(nu)
    r = min(nu, 1.0 - nu)
    am = weighted_arithmetic(pair, nu)
    gm = weighted_geometric(pair, nu)
    bridge = refinement_bridge(pair)
    inv_pair = SpdPair.from_matrices(matrix_inverse(pair.a), matrix_inverse(pair.b))
    gm_inv = weighted_geometric(inv_pair, nu)
    bridge_inv = refinement_bridge(inv_pair)
    refined_hm = matrix_inverse(gm_inv + (2.0 * r) * bridge_inv)
    hm = weighted_harmonic(pair, nu)
    bridge_min = float(jacobi_eigen(bridge).lam[0])
    margins = {
        "am_vs_refined_gm": float(jacobi_eigen(am - gm - (2.0 * r) * bridge).lam[0]),
        "refined_gm_vs_gm": 2.0 * r * bridge_min,
        "gm_vs_refined_hm": float(jacobi_eigen(gm - refined_hm).lam[0]),
        "refined_hm_vs_hm": float(jacobi_eigen(refined_hm - hm).lam[0]),
        "am_vs_gm": float(jacobi_eigen(am - gm).lam[0]),
    }
    scale = _pair_scale(pair)
    return _result("refined_chain", pair.n, nu, margins, scale, rel_tol * scale, seed, index)


def check_reverse_ratio(pair: SpdPair, nu, rel_tol=DEFAULT_REL_TOL, seed=None, index=None) -> CheckResult:
    """Margin of S(sqrt(h)) GM >= AM - 2r*bridge with h from the certified bounds."""
    nu = float(nu)
    r = min(nu, 1.0 - nu)
    s = specht_ratio(np.sqrt(pair.h))
    lhs = s * weighted_geometric(pair, nu)
    rhs = weighted_arithmetic(pair, nu) - (2.0 * r) * refinement_bridge(pair)
    margins = {"reverse_ratio": float(jacobi_eigen(lhs - rhs).lam[0])}
    scale = _pair_scale(pair)
    return _result("reverse_ratio", pair.n, nu, margins, scale, rel_tol * scale, seed, index)


def check_reverse_difference(pair: SpdPair, nu, rel_tol=DEFAULT_REL_TOL, seed=None, index=None) -> CheckResult:
    """Margins of the scalar difference bounds against AM - GM - 2r*bridge.

    Records both the h sqrt(M) L(sqrt(M), sqrt(m)) ln S(sqrt(h)) constant and
    the tighter sqrt(h) L(sqrt(h), 1) ln S(sqrt(h)) ||A|| intermediate.
    """
    nu = float(nu)
    r = min(nu, 1.0 - nu)
    h = pair.h
    root_h = np.sqrt(h)
    log_s = float(np.log(specht_ratio(root_h)))
    c_global = h * np.sqrt(pair.big_m) * log_mean(np.sqrt(pair.big_m), np.sqrt(pair.m)) * log_s
    c_tight = root_h * log_mean(root_h, 1.0) * log_s * operator_norm(pair.a)
    rhs = (
        weighted_arithmetic(pair, nu)
        - weighted_geometric(pair, nu)
        - (2.0 * r) * refinement_bridge(pair)
    )
    rhs_max = float(jacobi_eigen(rhs).lam[-1])
    margins = {
        "reverse_difference": float(c_global) - rhs_max,
        "reverse_difference_tight": float(c_tight) - rhs_max,
    }
    scale = _pair_scale(pair)
    return _result("reverse_difference", pair.n, nu, margins, scale, rel_tol * scale, seed, index)


def check_baseline_reverses(pair: SpdPair, nu, rel_tol=DEFAULT_REL_TOL, seed=None, index=None) -> CheckResult:
    """Margins of S(h) GM >= AM and h L(m, M) ln S(h) I + GM >= AM."""
    nu = float(nu)
    h = pair.h
    am = weighted_arithmetic(pair, nu)
    gm = weighted_geometric(pair, nu)
    s = specht_ratio(h)
    diff_const = h * log_mean(pair.m, pair.big_m) * float(np.log(s))
    eye = SymMatrix.identity(pair.n)
    margins = {
        "baseline_ratio": float(jacobi_eigen(s * gm - am).lam[0]),
        "baseline_difference": float(jacobi_eigen(diff_const * eye + gm - am).lam[0]),
    }
    scale = _pair_scale(pair)
    return _result("baseline_reverses", pair.n, nu, margins, scale, rel_tol * scale, seed, index)


def check_hm_refined(a: SymMatrix, x: UnitVector, nu, seed=None, index=None) -> CheckResult:
    """State-vector margins of the refined and plain power inequalities.

    The refined margin is invariant under rescaling A, so it is evaluated on
    the spectrum normalized by the largest eigenvalue; that keeps its roundoff
    near machine precision for operands of any magnitude.
    """
    nu = float(nu)
    if a.n != x.n:
        raise ValueError(f"dimension mismatch: matrix {a.n} vs vector {x.n}")
    r = min(nu, 1.0 - nu)
    decomp = jacobi_eigen(a)
    if decomp.lam[0] <= 0.0:
        raise ValueError("matrix must be positive definite")
    top = decomp.lam[-1]
    lam_unit = decomp.lam / top
    weights = (decomp.q.T @ x.coords) ** 2
    q_lin = float(weights @ lam_unit)
    q_nu = float(weights @ np.power(lam_unit, nu))
    q_half = float(weights @ np.sqrt(lam_unit))
    refined = (1.0 - q_lin ** (-nu) * q_nu) - r * (1.0 - q_half / np.sqrt(q_lin)) ** 2
    baseline = top**nu * (q_lin**nu - q_nu)
    margins = {"hm_refined": float(refined), "hm_baseline": float(baseline)}
    return _result("holder_mccarthy", a.n, nu, margins, 1.0, HM_ABS_TOL, seed, index)


# ---------------------------------------------------------------------------
# Batched suite internals
# ---------------------------------------------------------------------------

def _recon(q, lam):
    """q diag(lam) q^T over a stack: q (..., n, n), lam (..., n)."""
    return np.einsum("...ik,...k,...jk->...ij", q, lam, q)


def _recon_powers(q, lam, nus):
    """q diag(lam^nu) q^T for a (P,) stack against a (P, J) table of exponents."""
    powed = np.power(lam[:, None, :], nus[:, :, None])
    return np.einsum("pik,pjk,plk->pjil", q, powed, q)


def _sym4(stack):
    return 0.5 * (stack + stack.transpose(0, 1, 3, 2))


def _min_eig4(stack):
    p, j, n, _ = stack.shape
    return _eigvals_min_stack(stack.reshape(p * j, n, n)).reshape(p, j)


def _max_eig4(stack):
    return -_min_eig4(-stack)


def _inverse4(stack, context):
    """Batched SPD inverse with the same eigenvalue floor as matrix_inverse."""
    p, j, n, _ = stack.shape
    lam, q = _eigh_stack(stack.reshape(p * j, n, n))
    norms = np.abs(lam).max(axis=1)
    floor = _INV_FLOOR_REL * norms
    bad = (lam[:, 0] < floor) | (lam[:, 0] <= 0.0)
    if bad.any():
        flat = int(np.argmax(bad))
        raise SingularMatrixError(
            f"eigenvalue {lam[flat, 0]:.3e} below inversion floor in {context(flat // j, flat % j)}"
        )
    return _recon(q, 1.0 / lam).reshape(p, j, n, n)


class _Accumulator:
    def __init__(self, name):
        self.name = name
        self.worst = np.inf
        self.worst_instance = {"seed": None, "index": None, "dim": None, "nu": None}
        self.violations = 0
        self.results = 0

    def update(self, seed, indices, dim, nus, margins, tols):
        """margins: dict name -> (P, J); nus, tols broadcastable to (P, J)."""
        names = list(margins)
        stack = np.stack([margins[name] for name in names])  # (K, P, J)
        per_result_min = stack.min(axis=0)
        self.violations += int((per_result_min < -tols).sum())
        self.results += per_result_min.size
        flat = int(np.argmin(stack))
        k, p, j = np.unravel_index(flat, stack.shape)
        value = float(stack[k, p, j])
        if value < self.worst:
            self.worst = value
            self.worst_instance = {
                "seed": seed,
                "index": int(indices[p]),
                "dim": int(dim),
                "nu": float(nus[p, j]),
            }

    def finish(self):
        return CheckAggregate(
            name=self.name,
            worst_margin=float(self.worst),
            worst_instance=self.worst_instance,
            violations=self.violations,
            results=self.results,
        )


def _gen_chunk_pairs(cfg, check, dim, indices):
    a_raw = []
    b_raw = []
    for k in indices:
        rng = _rng_for(cfg.seed, check, k)
        a_raw.append(_random_spd_array(dim, cfg.m, cfg.big_m, rng))
        b_raw.append(_random_spd_array(dim, cfg.m, cfg.big_m, rng))
    return np.stack(a_raw), np.stack(b_raw)


def _pair_chunk_context(cfg, check, dim, indices):
    """Generate and pre-diagonalize a chunk of pairs; returns a dict of stacks."""
    a_raw, b_raw = _gen_chunk_pairs(cfg, check, dim, indices)
    p = len(indices)
    lam, q = _eigh_stack(np.concatenate([a_raw, b_raw]))
    lam_a, lam_b = lam[:p], lam[p:]
    q_a, q_b = q[:p], q[p:]
    if lam_a[:, 0].min() <= 0.0 or lam_b[:, 0].min() <= 0.0:
        raise SingularMatrixError("generated matrix is not positive definite")
    m_hat = np.minimum(lam_a[:, 0], lam_b[:, 0])
    big_m_hat = np.maximum(lam_a[:, -1], lam_b[:, -1])
    h_hat = big_m_hat / m_hat

    base = len(cfg.nu_grid)
    nus = np.empty((p, base + 2))
    nus[:, :base] = np.asarray(cfg.nu_grid)
    for i in range(p):
        nus[i, base:] = augmented_nu_grid((), float(h_hat[i]))
    r = np.minimum(nus, 1.0 - nus)

    return {
        "indices": indices,
        "dim": dim,
        "a": a_raw,
        "b": b_raw,
        "lam_a": lam_a,
        "lam_b": lam_b,
        "q_a": q_a,
        "q_b": q_b,
        "m_hat": m_hat,
        "big_m_hat": big_m_hat,
        "h_hat": h_hat,
        "nus": nus,
        "r": r,
        "scale": big_m_hat,
    }


def _geometric_stacks(ctx, inverse_side=False):
    """GM stack over the nu table plus the midpoint GM, on either the pair or
    its inverses."""
    lam_a, q_a = ctx["lam_a"], ctx["q_a"]
    lam_b, q_b = ctx["lam_b"], ctx["q_b"]
    if not inverse_side:
        outer = _recon(q_a, np.sqrt(lam_a))
        inner_mat = _recon(q_b, lam_b)
        shrink = _recon(q_a, 1.0 / np.sqrt(lam_a))
    else:
        # A^(-1) #_nu B^(-1) = A^(-1/2) (A^(1/2) B^(-1) A^(1/2))^nu A^(-1/2)
        outer = _recon(q_a, 1.0 / np.sqrt(lam_a))
        inner_mat = _recon(q_b, 1.0 / lam_b)
        shrink = _recon(q_a, np.sqrt(lam_a))
    middle = shrink @ inner_mat @ shrink
    middle = 0.5 * (middle + middle.transpose(0, 2, 1))
    lam_t, q_t = _eigh_stack(middle)
    if lam_t[:, 0].min() < 0.0:
        lam_t = np.maximum(lam_t, 0.0)
    nus_ext = np.concatenate([ctx["nus"], np.full((len(ctx["indices"]), 1), 0.5)], axis=1)
    powered = _recon_powers(q_t, lam_t, nus_ext)
    gm_ext = np.einsum("pab,pjbc,pcd->pjad", outer, powered, outer)
    gm_ext = _sym4(gm_ext)
    return gm_ext[:, :-1], gm_ext[:, -1]


def _eval_pair_chunk(cfg, check, dim, indices):
    ctx = _pair_chunk_context(cfg, check, dim, indices)
    nus, r = ctx["nus"], ctx["r"]
    a4 = ctx["a"][:, None, :, :]
    b4 = ctx["b"][:, None, :, :]
    w = nus[:, :, None, None]
    r4 = r[:, :, None, None]
    am = (1.0 - w) * a4 + w * b4
    gm, gm_half = _geometric_stacks(ctx)
    bridge = 0.5 * (ctx["a"] + ctx["b"]) - gm_half
    h = ctx["h_hat"]

    if check == "refined_chain":
        gm_inv, gm_inv_half = _geometric_stacks(ctx, inverse_side=True)
        inv_a = _recon(ctx["q_a"], 1.0 / ctx["lam_a"])
        inv_b = _recon(ctx["q_b"], 1.0 / ctx["lam_b"])
        bridge_inv = 0.5 * (inv_a + inv_b) - gm_inv_half

        def ctx_msg(p, j):
            return (
                f"check refined_chain instance (seed={cfg.seed}, index={indices[p]}, "
                f"dim={dim}, nu={nus[p, j]})"
            )

        refined_hm = _inverse4(gm_inv[:, :, :, :] + 2.0 * r4 * bridge_inv[:, None], ctx_msg)
        hm = _inverse4((1.0 - w) * inv_a[:, None] + w * inv_b[:, None], ctx_msg)
        bridge_min = _eigvals_min_stack(bridge)
        margins = {
            "am_vs_refined_gm": _min_eig4(am - gm - 2.0 * r4 * bridge[:, None]),
            "refined_gm_vs_gm": 2.0 * r * bridge_min[:, None],
            "gm_vs_refined_hm": _min_eig4(gm - refined_hm),
            "refined_hm_vs_hm": _min_eig4(refined_hm - hm),
            "am_vs_gm": _min_eig4(am - gm),
        }
    elif check == "reverse_ratio":
        s = specht_ratio(np.sqrt(h))[:, None, None, None]
        margins = {
            "reverse_ratio": _min_eig4(s * gm - (am - 2.0 * r4 * bridge[:, None]))
        }
    elif check == "reverse_difference":
        root_h = np.sqrt(h)
        log_s = np.log(specht_ratio(root_h))
        c_global = h * np.sqrt(ctx["big_m_hat"]) * log_mean(
            np.sqrt(ctx["big_m_hat"]), np.sqrt(ctx["m_hat"])
        ) * log_s
        c_tight = root_h * log_mean(root_h, 1.0) * log_s * ctx["lam_a"][:, -1]
        rhs_max = _max_eig4(am - gm - 2.0 * r4 * bridge[:, None])
        margins = {
            "reverse_difference": c_global[:, None] - rhs_max,
            "reverse_difference_tight": c_tight[:, None] - rhs_max,
        }
    elif check == "baseline_reverses":
        s = specht_ratio(h)
        diff_const = h * log_mean(ctx["m_hat"], ctx["big_m_hat"]) * np.log(s)
        eye = np.eye(dim)
        margins = {
            "baseline_ratio": _min_eig4(s[:, None, None, None] * gm - am),
            "baseline_difference": _min_eig4(
                diff_const[:, None, None, None] * eye + gm - am
            ),
        }
    else:  # pragma: no cover - guarded by config validation
        raise ValueError(f"not a pair check: {check}")

    tols = cfg.rel_tol * ctx["scale"][:, None]
    return ctx, margins, tols


def _eval_hm_chunk(cfg, dim, indices):
    a_raw = []
    vecs = []
    for k in indices:
        rng = _rng_for(cfg.seed, "holder_mccarthy", k)
        a_raw.append(_random_spd_array(dim, cfg.m, cfg.big_m, rng))
        vecs.append(gen_unit_vector(dim, rng).coords)
    a_raw = np.stack(a_raw)
    x = np.stack(vecs)
    lam, q = _eigh_stack(a_raw)
    if lam[:, 0].min() <= 0.0:
        raise SingularMatrixError("generated matrix is not positive definite")
    h_hat = lam[:, -1] / lam[:, 0]
    base = len(cfg.nu_grid)
    p = len(indices)
    nus = np.empty((p, base + 2))
    nus[:, :base] = np.asarray(cfg.nu_grid)
    for i in range(p):
        nus[i, base:] = augmented_nu_grid((), float(h_hat[i]))
    r = np.minimum(nus, 1.0 - nus)

    top = lam[:, -1]
    lam_unit = lam / top[:, None]
    weights = np.einsum("pij,pi->pj", q, x) ** 2
    # one contraction for every quadratic form: the margins vanish identically
    # at nu in {0, 1} only if q_lin and q_nu share the same summation order
    n_nu = nus.shape[1]
    exps = np.concatenate([nus, np.ones((p, 1)), np.full((p, 1), 0.5)], axis=1)
    q_all = np.einsum("pj,pjk->pk", weights, np.power(lam_unit[:, :, None], exps[:, None, :]))
    q_nu = q_all[:, :n_nu]
    q_lin = q_all[:, n_nu]
    q_half = q_all[:, n_nu + 1]
    refined = (1.0 - q_lin[:, None] ** (-nus) * q_nu) - r * (
        1.0 - q_half[:, None] / np.sqrt(q_lin)[:, None]
    ) ** 2
    baseline = top[:, None] ** nus * (q_lin[:, None] ** nus - q_nu)
    margins = {"hm_refined": refined, "hm_baseline": baseline}
    tols = np.full((p, 1), HM_ABS_TOL)
    return nus, margins, tols


def run_suite(cfg: SuiteConfig) -> SuiteReport:
    """Run every configured check over all instances and the augmented nu grid.

    Deterministic for a fixed config: instance streams are keyed by
    (seed, check, index) and aggregation order is fixed.
    """
    cfg.validate()
    start = time.perf_counter()
    by_dim = {}
    for k in range(cfg.trials):
        dim = cfg.dims[k % len(cfg.dims)]
        by_dim.setdefault(dim, []).append(k)

    aggregates = []
    errors = []
    for check in cfg.checks:
        acc = _Accumulator(check)
        for dim in sorted(by_dim):
            indices = by_dim[dim]
            for start_i in range(0, len(indices), _CHUNK):
                chunk = indices[start_i : start_i + _CHUNK]
                try:
                    if check == "holder_mccarthy":
                        nus, margins, tols = _eval_hm_chunk(cfg, dim, chunk)
                    else:
                        ctx, margins, tols = _eval_pair_chunk(cfg, check, dim, chunk)
                        nus = ctx["nus"]
                except NumericalError as err:
                    errors.append(
                        {
                            "check": check,
                            "dim": dim,
                            "indices": list(chunk),
                            "message": str(err),
                        }
                    )
                    continue
                acc.update(cfg.seed, chunk, dim, nus, margins, tols)
        aggregates.append(acc.finish())

    runtime = time.perf_counter() - start
    return SuiteReport(
        config=cfg,
        checks=tuple(aggregates),
        runtime_seconds=runtime,
        errors=tuple(errors),
    )
