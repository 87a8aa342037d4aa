"""Correlated MIMO fading statistics, AR(1) trajectory sampling, and the
received-signal model.

The channel coefficient h[r, t, k] (receive antenna r, transmit antenna t,
symbol time k) is complex Gaussian with a time-constant mean and a separable
covariance

    Cov[h[r, t, k], h[r', t', k']] = rho_h^|k - k'| * C[(r, t), (r', t')],

which is exactly the stationary law of the first-order Gauss-Markov
recursion simulated by :func:`sample_ar1_trajectory`.  rho_h = 1 is a
channel frozen over the pilot, rho_h = 0 is i.i.d. fading.

The received sample at antenna r, time k (0-based) is

    y[r, k] = exp(j 2 pi f_r k) * sum_t S[k, t] h[r, t, k] + noise,

with i.i.d. unit-variance circularly-symmetric complex Gaussian noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelError, ParameterError
from .pilots import PilotMatrix

HERMITIAN_TOL = 1e-12
PSD_TOL = -1e-10


def _check_hermitian_psd(matrix: np.ndarray, label: str):
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ModelError(f"{label} must be square")
    if np.max(np.abs(matrix - matrix.conj().T)) > HERMITIAN_TOL * max(1.0, np.max(np.abs(matrix))):
        raise ModelError(f"{label} is not Hermitian")
    eigmin = float(np.linalg.eigvalsh(matrix)[0])
    if eigmin < PSD_TOL * max(1.0, float(np.max(np.abs(matrix)))):
        raise ModelError(f"{label} is not positive semidefinite (eigmin {eigmin:.3e})")


@dataclass(frozen=True)
class CorrelationModel:
    """Separable space-time correlation: AR(1) in time, arbitrary in space.

    spatial_cov is the (l_t*l_r) x (l_t*l_r) Hermitian PSD covariance across
    antenna pairs, indexed by (r, t) -> r*l_t + t; mean is the matching
    complex mean vector, constant over time.
    """

    l_t: int
    l_r: int
    rho_h: float
    spatial_cov: np.ndarray
    mean: np.ndarray

    def __post_init__(self):
        if self.l_t < 1 or self.l_r < 1:
            raise ModelError("antenna counts must be positive")
        if not (0.0 <= self.rho_h <= 1.0):
            raise ModelError(f"rho_h must lie in [0, 1], got {self.rho_h}")
        d = self.l_t * self.l_r
        cov = np.array(self.spatial_cov, dtype=np.complex128)
        if cov.shape != (d, d):
            raise ModelError(f"spatial_cov must be {d}x{d}")
        _check_hermitian_psd(cov, "spatial_cov")
        mean = np.array(self.mean, dtype=np.complex128)
        if mean.shape != (d,):
            raise ModelError(f"mean must have length {d}")
        cov.setflags(write=False)
        mean.setflags(write=False)
        object.__setattr__(self, "spatial_cov", cov)
        object.__setattr__(self, "mean", mean)

    def per_coefficient_power(self) -> float:
        """Average of E|h[r,t,k]|^2 over antenna pairs (variance plus |mean|^2)."""
        return float(np.mean(np.diag(self.spatial_cov).real + np.abs(self.mean) ** 2))


def exponential_spatial_cov(l_t: int, l_r: int, a: float = 0.5, b: float = 0.5,
                            sigma_h_sq: float = 1.0) -> np.ndarray:
    """C[(r,t),(r',t')] = sigma_h^2 * a^|r-r'| * b^|t-t'|."""
    r = np.arange(l_r)
    t = np.arange(l_t)
    corr_r = a ** np.abs(r[:, None] - r[None, :])
    corr_t = b ** np.abs(t[:, None] - t[None, :])
    return sigma_h_sq * np.kron(corr_r, corr_t).astype(np.complex128)


def make_model(l_t: int, l_r: int, rho_h: float, *, spatial: str = "iid",
               spatial_a: float = 0.5, spatial_b: float = 0.5,
               sigma_h_sq: float = 1.0, mean: str = "zero",
               rician_k: float = 1.0) -> CorrelationModel:
    """Build the standard experiment models.

    spatial "iid" gives sigma_h_sq * I; "exponential" the separable
    a^|dr| b^|dt| profile.  mean "zero" or "rician"; the Rician option puts
    the power K/(K+1) of each coefficient into a constant mean and scales
    the fluctuating part by 1/(K+1), keeping E|h|^2 = sigma_h_sq.
    """
    d = l_t * l_r
    if spatial == "iid":
        cov = sigma_h_sq * np.eye(d, dtype=np.complex128)
    elif spatial == "exponential":
        cov = exponential_spatial_cov(l_t, l_r, spatial_a, spatial_b, sigma_h_sq)
    else:
        raise ModelError(f"unknown spatial model {spatial!r}")
    if mean == "zero":
        mu = np.zeros(d, dtype=np.complex128)
    elif mean == "rician":
        if rician_k < 0:
            raise ModelError("rician_k must be nonnegative")
        mu = np.full(d, math.sqrt(sigma_h_sq * rician_k / (rician_k + 1.0)),
                     dtype=np.complex128)
        cov = cov / (rician_k + 1.0)
    else:
        raise ModelError(f"unknown mean model {mean!r}")
    return CorrelationModel(l_t=l_t, l_r=l_r, rho_h=rho_h, spatial_cov=cov, mean=mu)


@dataclass(frozen=True)
class ChannelStats:
    """Mean and covariance of the length l_t*l_r*n vectorized channel."""

    l_t: int
    l_r: int
    n: int
    mu_h: np.ndarray
    sigma_h: np.ndarray

    def __post_init__(self):
        dim = self.l_t * self.l_r * self.n
        mu = np.array(self.mu_h, dtype=np.complex128)
        sigma = np.array(self.sigma_h, dtype=np.complex128)
        if mu.shape != (dim,) or sigma.shape != (dim, dim):
            raise ModelError(f"stats dimensions do not match l_t*l_r*n = {dim}")
        _check_hermitian_psd(sigma, "sigma_h")
        mu.setflags(write=False)
        sigma.setflags(write=False)
        object.__setattr__(self, "mu_h", mu)
        object.__setattr__(self, "sigma_h", sigma)

    @property
    def dim(self) -> int:
        return self.l_t * self.l_r * self.n


def build_stats(model: CorrelationModel, n: int) -> ChannelStats:
    """Expand a correlation model over n symbol times in the package layout."""
    if n < 1:
        raise ParameterError("n must be a positive integer")
    l_t, l_r = model.l_t, model.l_r
    lags = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    time_corr = model.rho_h ** lags  # 0**0 == 1 covers rho_h = 0
    c4 = model.spatial_cov.reshape(l_r, l_t, l_r, l_t)
    sigma = np.einsum("kK,rtRT->rktRKT", time_corr, c4).reshape(model.mean.size * n, -1)
    mu = np.broadcast_to(model.mean.reshape(l_r, 1, l_t), (l_r, n, l_t)).ravel()
    return ChannelStats(l_t=l_t, l_r=l_r, n=n, mu_h=mu, sigma_h=sigma)


def _psd_factor(cov: np.ndarray) -> np.ndarray:
    """L with L L^H = cov; Cholesky when possible, eigen fallback for singular cov."""
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        eigval, eigvec = np.linalg.eigh(cov)
        eigval = np.clip(eigval, 0.0, None)
        return eigvec * np.sqrt(eigval)[None, :]


def complex_gaussian(rng: np.random.Generator, factor: np.ndarray, size: int) -> np.ndarray:
    """size i.i.d. draws of CN(0, factor @ factor^H), one per row."""
    d = factor.shape[1]
    z = (rng.standard_normal((size, d)) + 1j * rng.standard_normal((size, d))) / np.sqrt(2.0)
    return z @ factor.T


def sample_ar1_trajectory(model: CorrelationModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """One channel trajectory h of length l_t*l_r*n in the package layout.

    h_1 = w_1 + mu, then h_k = rho_h h_{k-1} + sqrt(1 - rho_h^2) w_k
    + (1 - rho_h) mu with w_k i.i.d. CN(0, spatial_cov), so every marginal
    has mean mu and covariance spatial_cov, and lag-l correlation rho_h^l.
    """
    if n < 1:
        raise ParameterError("n must be a positive integer")
    factor = _psd_factor(model.spatial_cov)
    w = complex_gaussian(rng, factor, n)
    rho = model.rho_h
    h = np.empty_like(w)
    h[0] = w[0] + model.mean
    scale = np.sqrt(1.0 - rho * rho)
    drift = (1.0 - rho) * model.mean
    for k in range(1, n):
        h[k] = rho * h[k - 1] + scale * w[k] + drift
    # (n, l_r*l_t) -> flat (r, k, t)
    return h.reshape(n, model.l_r, model.l_t).transpose(1, 0, 2).ravel()


def synthesize_rx(pilot: PilotMatrix, l_r: int, f_true, h: np.ndarray,
                  noise_rng: np.random.Generator | None = None) -> np.ndarray:
    """Received vector y of length n*l_r; pass noise_rng=None for a noiseless run.

    f_true may be a scalar (common offset) or a length-l_r vector of
    per-receive-antenna offsets, in cycles per symbol.
    """
    n, l_t = pilot.entries.shape
    h = np.asarray(h, dtype=np.complex128)
    if h.shape != (l_r * n * l_t,):
        raise ParameterError(f"channel vector must have length {l_r * n * l_t}")
    f = np.atleast_1d(np.asarray(f_true, dtype=float))
    if f.size == 1:
        f = np.full(l_r, f[0])
    elif f.shape != (l_r,):
        raise ParameterError(f"f_true must be scalar or length {l_r}")
    h3 = h.reshape(l_r, n, l_t)
    phases = np.exp(2j * np.pi * np.outer(f, np.arange(n)))
    y = phases * np.einsum("kt,rkt->rk", pilot.entries, h3)
    if noise_rng is not None:
        y = y + (noise_rng.standard_normal((l_r, n))
                 + 1j * noise_rng.standard_normal((l_r, n))) / np.sqrt(2.0)
    return y.ravel()


@dataclass(frozen=True)
class CfoPrior:
    """Gaussian prior on the normalized CFO; sigma_f_sq = inf disables it (ML)."""

    mu_f: float = 0.0
    sigma_f_sq: float = math.inf

    def __post_init__(self):
        if not (self.sigma_f_sq > 0):
            raise ModelError("sigma_f_sq must be positive (use inf for ML mode)")

    @classmethod
    def ml(cls, mu_f: float = 0.0) -> "CfoPrior":
        """No-prior (maximum-likelihood) mode, inverse variance zero."""
        return cls(mu_f=mu_f, sigma_f_sq=math.inf)

    @property
    def inv_var(self) -> float:
        return 0.0 if math.isinf(self.sigma_f_sq) else 1.0 / self.sigma_f_sq

    @property
    def is_ml(self) -> bool:
        return self.inv_var == 0.0

    def sample(self, rng: np.random.Generator) -> float:
        if self.is_ml:
            raise ModelError("cannot sample from the improper ML prior")
        return float(rng.normal(self.mu_f, math.sqrt(self.sigma_f_sq)))
