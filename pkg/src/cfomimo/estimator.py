"""MAP joint frequency-offset and channel estimation.

For a Gaussian channel prior and a Gaussian (or flat) prior on the normalized
carrier frequency offset f, the joint MAP problem separates: maximize a scalar
metric g(y, f) over f alone, then read off the channel as the MMSE estimate
at the chosen offset.  The pieces are

    A = (Sb^H Sb + Sigma_h^{-1})^{-1}      posterior channel covariance,
    b = (I - A Sb^H Sb) mu_h               f-independent affine part,
    h_hat(f) = A X(f)^H y + b              MMSE channel estimate,
    g(y, f) = 2 Re<X(f)^H y, b> + (X(f)^H y)^H A (X(f)^H y)
              - f^2 / (2 sigma_f^2) + mu_f f / sigma_f^2,

where Sb is the zero-offset block design matrix and X(f) its de-rotated
version.  A and b never depend on f, so they are computed once per
configuration.  A is always evaluated through the matrix-inversion lemma

    A = Sigma_h - Sigma_h Sb^H (I + Sb Sigma_h Sb^H)^{-1} Sb Sigma_h,

which never inverts Sigma_h and therefore tolerates singular channel
covariances (e.g. a channel frozen over the whole pilot).

Collecting g by time lag turns it into a short complex series,

    g(y, f) = const + 2 Re sum_{k=1}^{n-1} e^{j 2 pi f k} z_k + prior terms,

with z_k a pure function of (y, S, A, b).  The universal search evaluates a
coarse grid of 4n offsets, solves the linearized stationary condition at each
point, keeps the candidate with the best metric, and polishes it by repeating
the linearized step.  No phase unwrapping is involved anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .channel import CfoPrior, ChannelStats
from .errors import EstimationError, NumericalError, ParameterError
from .pilots import PilotMatrix, expand_block

CONDITION_LIMIT = 1e13
DENOMINATOR_FLOOR = 1e-300
METRIC_TIE_TOL = 1e-12


@dataclass(frozen=True)
class CfoEstimate:
    """Result of a frequency-offset search.

    f_hat is a float for the common-offset estimator and a length-l_r array
    for the per-antenna variant, always wrapped into [-0.5, 0.5).  metric is
    the MAP objective at f_hat.  degraded marks a per-antenna refinement that
    fell back to its independent first stage.
    """

    f_hat: float | np.ndarray
    metric: float
    iterations: int
    converged: bool
    degraded: bool = False
    diagnostics: dict | None = None


@dataclass(frozen=True)
class EstimatorWorkspace:
    """Precomputed, f-independent quantities for one (pilot, stats, prior) triple.

    Immutable and shareable across threads; every estimation routine is a
    pure function of (y, workspace).  quad_kernel is Sb A Sb^H and lin_table
    holds sum_t S[k, t] b[r, t, k]; together they reduce the six-index lag
    sums to small matrix contractions.  A doubles as the MMSE error
    covariance of the channel estimate.
    """

    pilot: PilotMatrix
    l_r: int
    stats: ChannelStats
    prior: CfoPrior
    A: np.ndarray
    b: np.ndarray
    sbreve: np.ndarray
    quad_kernel: np.ndarray
    lin_table: np.ndarray
    condition: float

    @property
    def n(self) -> int:
        return self.pilot.n

    @property
    def l_t(self) -> int:
        return self.pilot.l_t


def _solve_hermitian(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """SPD solve with a single jitter retry before giving up."""
    try:
        factor = scipy.linalg.cho_factor(matrix, check_finite=False)
    except scipy.linalg.LinAlgError:
        jitter = 1e-12 * np.trace(matrix).real / matrix.shape[0]
        try:
            factor = scipy.linalg.cho_factor(
                matrix + jitter * np.eye(matrix.shape[0]), check_finite=False)
        except scipy.linalg.LinAlgError as exc:
            raise NumericalError("Hermitian solve failed even with jitter",
                                 condition=float(np.linalg.cond(matrix))) from exc
    return scipy.linalg.cho_solve(factor, rhs, check_finite=False)


def mmse_gain(design: np.ndarray, sigma_h: np.ndarray,
              condition_limit: float = CONDITION_LIMIT) -> tuple[np.ndarray, float]:
    """Posterior covariance (design^H design + sigma_h^{-1})^{-1} and cond estimate.

    Evaluated in the inversion-lemma form, so sigma_h may be singular.  The
    inner matrix I + design sigma_h design^H is checked against
    condition_limit before factoring.
    """
    cross = design @ sigma_h
    inner = np.eye(design.shape[0], dtype=np.complex128) + cross @ design.conj().T
    inner = 0.5 * (inner + inner.conj().T)
    condition = float(np.linalg.cond(inner))
    if not np.isfinite(condition) or condition > condition_limit:
        raise NumericalError("I + Sb Sigma_h Sb^H is too ill-conditioned",
                             condition=condition)
    gain = sigma_h - cross.conj().T @ _solve_hermitian(inner, cross)
    return 0.5 * (gain + gain.conj().T), condition


def build_workspace(pilot: PilotMatrix, l_r: int, stats: ChannelStats,
                    prior: CfoPrior) -> EstimatorWorkspace:
    """Assemble A, b and the lag contraction tables for one configuration."""
    if stats.l_t != pilot.l_t or stats.n != pilot.n or stats.l_r != l_r:
        raise ParameterError(
            f"stats built for (l_t={stats.l_t}, l_r={stats.l_r}, n={stats.n}) do not "
            f"match pilot (l_t={pilot.l_t}, n={pilot.n}) with l_r={l_r}")
    sbreve = expand_block(pilot, l_r)
    gain, condition = mmse_gain(sbreve, stats.sigma_h)
    b = stats.mu_h - gain @ (sbreve.conj().T @ (sbreve @ stats.mu_h))
    kernel = sbreve @ gain @ sbreve.conj().T
    kernel = 0.5 * (kernel + kernel.conj().T)
    b3 = b.reshape(l_r, pilot.n, pilot.l_t)
    lin = np.einsum("kt,rkt->rk", pilot.entries, b3)
    return EstimatorWorkspace(pilot=pilot, l_r=l_r, stats=stats, prior=prior,
                              A=gain, b=b, sbreve=sbreve, quad_kernel=kernel,
                              lin_table=lin, condition=condition)


def lag_statistics(y: np.ndarray, lin_table: np.ndarray, quad_kernel: np.ndarray,
                   l_r: int, n: int) -> np.ndarray:
    """The complex lag series z_1 .. z_{n-1} from precomputed tables."""
    y = np.asarray(y, dtype=np.complex128).ravel()
    y2 = y.reshape(l_r, n)
    first = np.einsum("rk,rk->k", lin_table, y2.conj())
    weighted = (y.conj()[:, None] * quad_kernel) * y[None, :]
    folded = weighted.reshape(l_r, n, l_r, n).sum(axis=(0, 2))
    z = np.empty(n - 1, dtype=np.complex128)
    for lag in range(1, n):
        z[lag - 1] = first[lag] + np.trace(folded, offset=-lag)
    return z


def compute_z(y: np.ndarray, ws: EstimatorWorkspace) -> np.ndarray:
    """Lag series z_k; depends only on (y, S, A, b), never on the prior or a trial f."""
    return lag_statistics(y, ws.lin_table, ws.quad_kernel, ws.l_r, ws.n)


def rotated_design(pilot: PilotMatrix, l_r: int, f) -> np.ndarray:
    """Design matrix X(f): the block expansion of S with rows rotated by
    exp(j 2 pi f_r k); f is a scalar or a length-l_r vector."""
    design = expand_block(pilot, l_r)
    f = np.atleast_1d(np.asarray(f, dtype=float))
    if f.size == 1:
        f = np.full(l_r, f[0])
    elif f.shape != (l_r,):
        raise ParameterError(f"f must be scalar or length {l_r}")
    phase = np.exp(2j * np.pi * np.outer(f, np.arange(pilot.n))).ravel()
    return phase[:, None] * design


def _design_adjoint_apply(ws: EstimatorWorkspace, y: np.ndarray, f) -> np.ndarray:
    """u = X(f)^H y for a scalar or per-antenna offset."""
    y2 = np.asarray(y, dtype=np.complex128).reshape(ws.l_r, ws.n)
    f = np.atleast_1d(np.asarray(f, dtype=float))
    if f.size == 1:
        f = np.full(ws.l_r, f[0])
    elif f.shape != (ws.l_r,):
        raise ParameterError(f"f must be scalar or length {ws.l_r}")
    phase = np.exp(-2j * np.pi * np.outer(f, np.arange(ws.n)))
    u3 = (phase * y2)[:, :, None] * ws.pilot.entries.conj()[None, :, :]
    return u3.ravel()


def map_metric(y: np.ndarray, f: float, ws: EstimatorWorkspace) -> float:
    """MAP objective g(y, f) for a common offset, exact matrix form.

    The prior contribution is -f^2/(2 sigma_f^2) + mu_f f / sigma_f^2 and
    vanishes in ML mode.
    """
    u = _design_adjoint_apply(ws, y, float(f))
    g = 2.0 * np.real(np.vdot(ws.b, u)) + np.real(np.vdot(u, ws.A @ u))
    iv = ws.prior.inv_var
    if iv:
        g += -0.5 * iv * f * f + iv * ws.prior.mu_f * f
    return float(g)


def _lag_metric(z: np.ndarray, f, mu_f: float, inv_var: float) -> np.ndarray:
    """g up to an f-independent constant, from the lag series; vectorized in f."""
    f = np.atleast_1d(np.asarray(f, dtype=float))
    k = np.arange(1, z.size + 1)
    val = 2.0 * np.real(np.exp(2j * np.pi * np.outer(f, k)) @ z)
    if inv_var:
        val = val - 0.5 * inv_var * f * f + inv_var * mu_f * f
    return val


def metric_gradient(y: np.ndarray, f: float, ws: EstimatorWorkspace,
                    z: np.ndarray | None = None) -> float:
    """dg/df at a common offset: -4 pi Im sum k e^{j2pi f k} z_k - (f - mu_f)/sigma_f^2."""
    if z is None:
        z = compute_z(y, ws)
    k = np.arange(1, ws.n)
    grad = -4.0 * np.pi * np.imag(np.exp(2j * np.pi * f * k) @ (k * z))
    iv = ws.prior.inv_var
    if iv:
        grad -= iv * (f - ws.prior.mu_f)
    return float(grad)


def wrap_frequency(f):
    """Wrap into the acquisition range [-0.5, 0.5)."""
    return (f + 0.5) % 1.0 - 0.5


def _refine_terms(z: np.ndarray, f0, mu_f: float, inv_var: float):
    """Numerator and denominator of the linearized stationary-point step.

    Vectorized over candidate grid offsets f0.
    """
    f0 = np.atleast_1d(np.asarray(f0, dtype=float))
    k = np.arange(1, z.size + 1)
    phases = np.exp(2j * np.pi * np.outer(f0, k))
    s1 = phases @ (k * z)
    s2 = phases @ (k * k * z)
    prior_scale = inv_var / (8.0 * np.pi ** 2)
    num = -np.imag(s1) / (2.0 * np.pi) + prior_scale * (mu_f - f0)
    den = np.real(s2) + prior_scale
    return num, den


def _universal_from_z(z: np.ndarray, n: int, mu_f: float, inv_var: float,
                      grid_size: int | None, epsilon: float, max_iter: int):
    """Core grid-plus-refinement search on a precomputed lag series."""
    if grid_size is None:
        grid_size = 4 * n
    if grid_size < 1:
        raise ParameterError("grid_size must be positive")
    grid = -0.5 + np.arange(grid_size) / grid_size
    num, den = _refine_terms(z, grid, mu_f, inv_var)
    usable = np.abs(den) >= DENOMINATOR_FLOOR
    if not np.any(usable):
        raise EstimationError(
            "all grid candidates were skipped: every refinement denominator "
            "is numerically zero (degenerate metric)")
    grid = grid[usable]
    fe = num[usable] / den[usable]
    candidates = grid + fe
    metrics = _lag_metric(z, candidates, mu_f, inv_var)
    best = float(np.max(metrics))
    tied = np.flatnonzero(metrics >= best - METRIC_TIE_TOL * max(1.0, abs(best)))
    pick = tied[np.argmin(np.abs(candidates[tied] - mu_f))]
    f0 = float(candidates[pick])
    fe_cur = float(fe[pick])
    iterations = 0
    while abs(fe_cur) > epsilon and iterations < max_iter:
        num, den = _refine_terms(z, f0, mu_f, inv_var)
        if abs(den[0]) < DENOMINATOR_FLOOR:
            break
        fe_cur = float(num[0] / den[0])
        f0 += fe_cur
        iterations += 1
    diagnostics = {"grid_f0": grid, "grid_candidates": candidates,
                   "grid_metrics": metrics}
    return f0, iterations, abs(fe_cur) <= epsilon, diagnostics


def estimate_cfo_universal(y: np.ndarray, ws: EstimatorWorkspace, *,
                           grid_size: int | None = None, epsilon: float = 1e-10,
                           max_iter: int = 10, derotate_by_prior_mean: bool = False,
                           return_diagnostics: bool = False) -> CfoEstimate:
    """Common-offset MAP estimate via the universal grid-plus-refinement search.

    The default grid has 4n points over [-0.5, 0.5); each point gets one
    linearized stationary step, the candidate with the largest MAP metric is
    kept and then refined until the step falls below epsilon (at most
    max_iter times).  With derotate_by_prior_mean the received signal is
    first rotated by exp(-j 2 pi mu_f k), which re-centers the acquisition
    range on the prior mean.
    """
    prior = ws.prior
    if derotate_by_prior_mean and prior.mu_f != 0.0:
        y2 = np.asarray(y, dtype=np.complex128).reshape(ws.l_r, ws.n)
        rot = np.exp(-2j * np.pi * prior.mu_f * np.arange(ws.n))
        z = compute_z((y2 * rot).ravel(), ws)
        offset, mu_f = prior.mu_f, 0.0
    else:
        z = compute_z(y, ws)
        offset, mu_f = 0.0, prior.mu_f
    f0, iterations, converged, diagnostics = _universal_from_z(
        z, ws.n, mu_f, prior.inv_var, grid_size, epsilon, max_iter)
    f_hat = float(wrap_frequency(f0 + offset))
    return CfoEstimate(f_hat=f_hat, metric=map_metric(y, f_hat, ws),
                       iterations=iterations, converged=converged,
                       diagnostics=diagnostics if return_diagnostics else None)


def estimate_channel_mmse(y: np.ndarray, f_hat, ws: EstimatorWorkspace) -> np.ndarray:
    """MMSE channel estimate A X(f_hat)^H y + b; ws.A is its error covariance."""
    u = _design_adjoint_apply(ws, y, f_hat)
    return ws.A @ u + ws.b


def _prior_vectors(prior, l_r: int):
    if isinstance(prior, CfoPrior):
        priors = [prior] * l_r
    else:
        priors = list(prior)
        if len(priors) != l_r:
            raise ParameterError(f"need one prior per receive antenna ({l_r})")
    mu = np.array([p.mu_f for p in priors], dtype=float)
    inv_var = np.array([p.inv_var for p in priors], dtype=float)
    return priors, mu, inv_var


def per_antenna_metric(y: np.ndarray, f_vec: np.ndarray, ws: EstimatorWorkspace,
                       prior=None) -> float:
    """MAP objective for a vector of per-receive-antenna offsets."""
    _, mu, inv_var = _prior_vectors(ws.prior if prior is None else prior, ws.l_r)
    f_vec = np.asarray(f_vec, dtype=float)
    u = _design_adjoint_apply(ws, y, f_vec)
    g = 2.0 * np.real(np.vdot(ws.b, u)) + np.real(np.vdot(u, ws.A @ u))
    g += np.sum(-0.5 * inv_var * f_vec ** 2 + inv_var * mu * f_vec)
    return float(g)


def _per_antenna_grad_hess(y2: np.ndarray, ws: EstimatorWorkspace, f_vec: np.ndarray,
                           mu: np.ndarray, inv_var: np.ndarray):
    """Exact gradient and Hessian of g with respect to the offset vector.

    Differentiating u(f) = X(f)^H y through g gives, with D_r the diagonal
    symbol-index mask of antenna r and v = A u,

        dg/df_r = 4 pi Im[b^H D_r u] - 4 pi Im[u^H D_r v] - (f_r - mu_r)/sigma_r^2.
    """
    n, l_t, l_r = ws.n, ws.l_t, ws.l_r
    k = np.arange(n, dtype=float)
    phase = np.exp(-2j * np.pi * np.outer(f_vec, k))
    u3 = (phase * y2)[:, :, None] * ws.pilot.entries.conj()[None, :, :]
    u = u3.ravel()
    v3 = (ws.A @ u).reshape(l_r, n, l_t)
    b3 = ws.b.reshape(l_r, n, l_t)
    kcol = k[None, :, None]
    bu1 = np.einsum("rkt,rkt->r", b3.conj(), kcol * u3)
    bu2 = np.einsum("rkt,rkt->r", b3.conj(), kcol ** 2 * u3)
    uv1 = np.einsum("rkt,rkt->r", u3.conj(), kcol * v3)
    uv2 = np.einsum("rkt,rkt->r", u3.conj(), kcol ** 2 * v3)
    grad = 4.0 * np.pi * (np.imag(bu1) - np.imag(uv1)) - inv_var * (f_vec - mu)
    masked = np.zeros((l_r, u.size), dtype=np.complex128)
    for r in range(l_r):
        block = np.zeros_like(u3)
        block[r] = kcol[0] * u3[r]
        masked[r] = block.ravel()
    cross = masked.conj() @ (ws.A @ masked.T)
    hess = 8.0 * np.pi ** 2 * np.real(cross)
    hess[np.diag_indices(l_r)] += (-8.0 * np.pi ** 2 * (np.real(bu2) + np.real(uv2))
                                   - inv_var)
    return grad, hess


def _antenna_tables(ws: EstimatorWorkspace, r: int):
    """Lag tables of the decoupled single-antenna subproblem for antenna r."""
    n, l_t = ws.n, ws.l_t
    a6 = ws.A.reshape(ws.l_r, n, l_t, ws.l_r, n, l_t)
    a_rr = a6[r, :, :, r, :, :].reshape(n * l_t, n * l_t)
    sb1 = expand_block(ws.pilot, 1)
    kernel = sb1 @ a_rr @ sb1.conj().T
    lin = ws.lin_table[r:r + 1]
    return lin, kernel


def estimate_cfo_per_antenna(y: np.ndarray, pilot: PilotMatrix, stats: ChannelStats,
                             prior, *, grid_size: int | None = None,
                             epsilon: float = 1e-10, max_iter: int = 10,
                             workspace: EstimatorWorkspace | None = None) -> CfoEstimate:
    """Per-receive-antenna offsets f_r under independent Gaussian priors.

    Stage 1 runs the scalar universal search on each antenna's decoupled
    subproblem (cross-antenna coupling in A ignored), costing O(l_r n) grid
    work.  Stage 2 jointly refines all offsets by linearizing the rotations
    around the stage-1 values and solving the resulting l_r x l_r real
    system, repeated until the step is below epsilon.  A singular refinement
    system returns the stage-1 estimates flagged as degraded.
    """
    priors, mu, inv_var = _prior_vectors(prior, stats.l_r)
    ws = workspace or build_workspace(pilot, stats.l_r, stats, priors[0])
    l_r, n = ws.l_r, ws.n
    if l_r == 1:
        est = estimate_cfo_universal(y, ws, grid_size=grid_size, epsilon=epsilon,
                                     max_iter=max_iter)
        return CfoEstimate(f_hat=np.array([est.f_hat]), metric=est.metric,
                           iterations=est.iterations, converged=est.converged)
    y2 = np.asarray(y, dtype=np.complex128).reshape(l_r, n)
    stage1 = np.empty(l_r)
    for r in range(l_r):
        lin, kernel = _antenna_tables(ws, r)
        z_r = lag_statistics(y2[r], lin, kernel, 1, n)
        f_r, _, _, _ = _universal_from_z(z_r, n, mu[r], inv_var[r],
                                         grid_size, epsilon, max_iter)
        stage1[r] = f_r
    f_vec = stage1.copy()
    iterations = 0
    converged = False
    for _ in range(max_iter):
        grad, hess = _per_antenna_grad_hess(y2, ws, f_vec, mu, inv_var)
        try:
            step = np.linalg.solve(hess, -grad)
        except np.linalg.LinAlgError:
            f_hat = wrap_frequency(stage1)
            return CfoEstimate(f_hat=f_hat,
                               metric=per_antenna_metric(y, f_hat, ws, priors),
                               iterations=iterations, converged=False, degraded=True)
        if not np.all(np.isfinite(step)):
            f_hat = wrap_frequency(stage1)
            return CfoEstimate(f_hat=f_hat,
                               metric=per_antenna_metric(y, f_hat, ws, priors),
                               iterations=iterations, converged=False, degraded=True)
        f_vec = f_vec + step
        iterations += 1
        if np.max(np.abs(step)) <= epsilon:
            converged = True
            break
    f_hat = wrap_frequency(f_vec)
    return CfoEstimate(f_hat=f_hat, metric=per_antenna_metric(y, f_hat, ws, priors),
                       iterations=iterations, converged=converged)
