"""Potentials, spectral-parameter geometry, grids, and finite truncations.

The Hamiltonian is H = H0 + V(X) on square-summable sequences over the
half-line sites 0, 1, 2, ..., where H0 is the symmetrised shift with matrix
(u(n-1) + u(n+1))/2 and V is a real potential decaying like (1+n)^(-rho)
with rho > 5/2.  The continuous spectrum is [-1, 1], parametrised by
lambda = cos(theta); the associated multiplier is zeta = e^(-i theta) on the
upper rim of the cut, and zeta(z) = z - sqrt(z^2 - 1) with |zeta| < 1 for
real z outside [-1, 1].
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import AssumptionError, ConfigError

RHO_MIN = 2.5
ENVELOPE_FLOOR = 1e-16


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Potential:
    """Finitely supported real potential table with its decay certificate.

    values[n] = V(n) for 0 <= n < support_end; sites beyond the table are
    exactly zero.  envelope_const = sup (1+n)^rho |V(n)| over the support.
    """

    values: np.ndarray
    rho: float
    envelope_const: float
    kind: str = "table"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def support_end(self) -> int:
        return len(self.values)

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values), initial=0.0))

    def value(self, n: int) -> float:
        if 0 <= n < len(self.values):
            return float(self.values[n])
        return 0.0

    def diagonal(self, size: int) -> np.ndarray:
        d = np.zeros(size)
        k = min(size, len(self.values))
        d[:k] = self.values[:k]
        return d

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(repr(self.rho).encode())
        h.update(self.values.tobytes())
        return h.hexdigest()[:16]

    def is_free(self) -> bool:
        return len(self.values) == 0


def _validated(values, rho: float, kind: str, params: dict) -> Potential:
    if not rho > RHO_MIN:
        raise AssumptionError(
            f"assumption violated: decay exponent rho must exceed 5/2, got {rho}")
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise ConfigError("potential table must be one-dimensional")
    if values.size and not np.all(np.isfinite(values)):
        raise ConfigError("potential table contains non-finite entries")
    values = np.trim_zeros(values, "b")
    if values.size:
        env = float(np.max((1.0 + np.arange(len(values))) ** rho * np.abs(values)))
    else:
        env = 0.0
    return Potential(values=values.copy(), rho=float(rho), envelope_const=env,
                     kind=kind, params=dict(params))


def zero_potential(rho: float = 3.0) -> Potential:
    return _validated(np.zeros(0), rho, "zero", {})


def rank_one(v0: float, site: int = 0, rho: float = 3.0) -> Potential:
    values = np.zeros(site + 1)
    values[site] = v0
    return _validated(values, rho, "rank_one", {"v0": v0, "site": site})


def table_potential(values, rho: float) -> Potential:
    return _validated(values, rho, "table", {})


def random_decaying(seed: int, rho_gen: float = 3.0, amplitude: float = 1.5,
                    rho: float | None = None) -> Potential:
    """V(n) = amplitude * u_n * (1+n)^(-rho_gen), u_n uniform in [-1, 1].

    The table is truncated where the envelope falls below 1e-16, which keeps
    the free tail of the recursion exact.
    """
    if amplitude <= 0:
        raise ConfigError("amplitude must be positive")
    length = int(math.floor((amplitude / ENVELOPE_FLOOR) ** (1.0 / rho_gen)))
    rng = np.random.default_rng(seed)
    n = np.arange(length)
    values = amplitude * rng.uniform(-1.0, 1.0, length) * (1.0 + n) ** (-rho_gen)
    return _validated(values, rho_gen if rho is None else rho, "random_decaying",
                      {"seed": seed, "rho_gen": rho_gen, "amplitude": amplitude})


def make_potential(spec: dict) -> Potential:
    """Build a Potential from a configuration block."""
    if not isinstance(spec, dict):
        raise ConfigError("potential spec must be a mapping")
    spec = dict(spec)
    kind = spec.pop("kind", None)
    try:
        if kind == "zero":
            return zero_potential(**spec)
        if kind == "rank_one":
            return rank_one(**spec)
        if kind == "table":
            return table_potential(**spec)
        if kind == "random_decaying":
            return random_decaying(**spec)
    except TypeError as exc:
        raise ConfigError(f"bad potential parameters: {exc}") from None
    raise ConfigError(f"unknown potential kind: {kind!r}")


# ---------------------------------------------------------------------------
# spectral points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralPoint:
    """Point of the continuous spectrum, on the upper rim of the cut.

    lam = cos(theta) in [-1, 1], zeta = lam - i sqrt(1 - lam^2) = e^(-i theta).
    """

    lam: float
    theta: float
    zeta: complex

    @classmethod
    def from_theta(cls, theta: float) -> "SpectralPoint":
        if not 0.0 <= theta <= math.pi:
            raise ValueError("theta must lie in [0, pi]")
        return cls(lam=math.cos(theta), theta=theta,
                   zeta=complex(math.cos(theta), -math.sin(theta)))

    @classmethod
    def from_lambda(cls, lam: float) -> "SpectralPoint":
        if not -1.0 <= lam <= 1.0:
            raise ValueError("lambda must lie in [-1, 1]")
        return cls.from_theta(math.acos(lam))

    @classmethod
    def threshold(cls, sign: int) -> "SpectralPoint":
        if sign not in (1, -1):
            raise ValueError("threshold sign must be +1 or -1")
        return cls.from_theta(0.0 if sign == 1 else math.pi)

    @property
    def is_threshold(self) -> bool:
        return abs(self.lam) == 1.0

    @property
    def two_z(self) -> complex:
        return complex(2.0 * self.lam)


@dataclass(frozen=True)
class OffAxisPoint:
    """Real spectral parameter z with |z| > 1 and the contracting branch
    zeta(z) = z - sqrt(z^2 - 1), |zeta| < 1, sign(zeta) = sign(z)."""

    z: float
    zeta: float

    @classmethod
    def from_z(cls, z: float) -> "OffAxisPoint":
        if not abs(z) > 1.0:
            raise ValueError("off-axis point needs |z| > 1")
        # 1/(|z| + sqrt(z^2-1)) avoids cancellation for large |z|
        zeta = math.copysign(1.0 / (abs(z) + math.sqrt(z * z - 1.0)), z)
        return cls(z=float(z), zeta=zeta)

    @property
    def two_z(self) -> complex:
        return complex(2.0 * self.z)


def zeta_of(point) -> complex:
    """The multiplier zeta at a spectral point (rim or off-axis)."""
    if isinstance(point, (SpectralPoint, OffAxisPoint)):
        return complex(point.zeta)
    raise TypeError("expected SpectralPoint or OffAxisPoint")


# ---------------------------------------------------------------------------
# grids and truncations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Resolution and tolerance knobs for the whole pipeline."""

    m_theta: int = 512
    n_site: int = 128
    n_tail: int | None = None
    beta_max: float = 12.0
    m_beta: int = 1024
    z_max: float | None = None
    n_edge: int = 2048
    alpha_max: float = 12.0
    tol_threshold: float = 1e-3
    tol_root: float = 1e-10
    tol_winding: float = 0.05

    def __post_init__(self):
        if self.m_theta < 2 * self.n_site:
            raise ConfigError("m_theta must be at least 2 * n_site")
        if self.n_tail is not None and self.n_tail < self.n_site:
            raise ConfigError("n_tail must be at least n_site")
        if self.m_beta % 2 != 0:
            raise ConfigError("m_beta must be even")
        for name in ("tol_threshold", "tol_root", "tol_winding"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.beta_max <= 0 or self.alpha_max <= 0:
            raise ConfigError("window half-widths must be positive")

    def effective_tail(self, p: Potential) -> int:
        base = self.n_tail if self.n_tail is not None else self.n_site
        return max(base, p.support_end)

    def effective_z_max(self, p: Potential) -> float:
        if self.z_max is not None:
            return self.z_max
        return 1.0 + 2.0 * (1.0 + p.sup_norm)

    def refined(self) -> "GridSpec":
        """Grid with doubled spectral resolution (site window unchanged)."""
        return replace(self, m_theta=2 * self.m_theta, m_beta=2 * self.m_beta,
                       n_edge=2 * self.n_edge)


@dataclass(frozen=True)
class TridiagonalTruncation:
    """Dirichlet truncation of H onto the first `size` sites."""

    size: int
    diagonal: np.ndarray
    off_diagonal: float = 0.5

    def matrix(self) -> np.ndarray:
        m = np.diag(self.diagonal).astype(float)
        off = self.off_diagonal * np.ones(self.size - 1)
        m += np.diag(off, 1) + np.diag(off, -1)
        return m

    def eigenvalues(self) -> np.ndarray:
        return eigh_tridiagonal(self.diagonal,
                                self.off_diagonal * np.ones(self.size - 1),
                                eigvals_only=True)


def hamiltonian_truncation(p: Potential, size: int) -> TridiagonalTruncation:
    if size < 1:
        raise ValueError("size must be at least 1")
    return TridiagonalTruncation(size=size, diagonal=p.diagonal(size))
