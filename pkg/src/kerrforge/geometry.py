"""Charts, base-surface metrics, and assembly of the Lorentzian 4-metrics.

Chart conventions (fixed once, used everywhere):

* chart coordinate order (x, y, v, r); spherical order (xi, psi, v, rho);
* d^c f = -df o J with J(d/dx) = d/dy, so d^c(phi) = -phi_y dx + phi_x dy;
* a v b = (a (x) b + b (x) a) / 2 for 1-forms a, b.

A family member is determined by (kappa, B, m, k, potential):

    g = sigma * pi^* g_o + theta v (p_o^* + (beta/2) theta),
    theta  = dv + d^c(phi),          p_o^* = dr - B dv,
    sigma  = -r^2/(4 B phi) - B phi/4,
    beta   = B + m * k * r / (r^2 + B^2 phi^2),
    g_o    = -2 kappa phi gtilde_o   (gtilde_o the curvature-kappa metric),

which for B = -1 is the Kerr-family normal form.  The vector d/dr is null
for every member; m = 0 gives the flat background for any B != 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError, DomainError
from .potentials import PotentialField

__all__ = [
    "PHI_MIN", "FIBER_MIN", "SIN_XI_MIN", "DISK_MARGIN",
    "ChartPoint", "SphericalPoint", "MetricConfig", "MetricAtPoint",
    "conformal_factor", "sigma_of", "sigma_derivatives",
    "beta_tilde_o", "general_beta_solution", "beta_derivatives",
    "family_metric_field", "assemble_metric",
    "kerr_metric_field", "classical_kerr_metric",
    "schwarzschild_analog_field", "background_block_coords",
    "signature_signs", "expected_signature",
]

# admissibility guards against the coordinate singularities
PHI_MIN = 1e-10        # |phi| below this: degenerate potential
FIBER_MIN = 1e-12      # r^2 + phi^2 below this: fiber singularity
SIN_XI_MIN = 1e-8      # spherical chart: sin(xi) too small
DISK_MARGIN = 1e-8     # kappa=-1: 1 - (x^2+y^2) must exceed this


@dataclass(frozen=True)
class ChartPoint:
    x: float
    y: float
    v: float
    r: float

    def __post_init__(self):
        if not all(np.isfinite([self.x, self.y, self.v, self.r])):
            raise DomainError("chart coordinates must be finite")

    def as_array(self):
        return np.array([self.x, self.y, self.v, self.r])

    def admissible(self, kappa):
        return kappa == 1 or 1.0 - (self.x**2 + self.y**2) >= DISK_MARGIN


@dataclass(frozen=True)
class SphericalPoint:
    xi: float
    psi: float
    rho: float
    v: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.xi < np.pi:
            raise DomainError("xi must lie strictly inside (0, pi)")
        if self.rho <= 0.0:
            raise DomainError("rho must be positive")

    def as_array(self):
        """Coordinates in the matrix index order (xi, psi, v, rho)."""
        return np.array([self.xi, self.psi, self.v, self.rho])


@dataclass(frozen=True)
class MetricConfig:
    kappa: int
    B: float
    m: float
    k: float
    potential: PotentialField = field(repr=False)

    def __post_init__(self):
        if self.kappa not in (1, -1):
            raise ValueError("kappa must be +1 or -1")
        if self.B == 0.0:
            raise ValueError("B must be nonzero")
        if self.m != 0.0 and self.B != -1.0:
            raise ValueError("Ricci-flat family mode (m != 0) requires B = -1")
        if self.potential.kappa != self.kappa:
            raise ValueError("potential curvature sign does not match the config")


@dataclass(frozen=True)
class MetricAtPoint:
    g: np.ndarray
    sigma: float
    beta_tilde: float


def conformal_factor(kappa, x, y):
    """Conformal factor of the constant-curvature metric: 4/(1 + kappa*(x^2+y^2))^2."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    s = x * x + y * y
    if kappa == -1 and np.any(1.0 - s < DISK_MARGIN):
        raise DomainError("kappa=-1 chart requires x^2 + y^2 < 1")
    return 4.0 / (1.0 + kappa * s) ** 2


def sigma_of(B, phi, r):
    """Conformal fiber factor sigma = -r^2/(4 B phi) - B phi/4."""
    phi = np.asarray(phi, dtype=float)
    if B == 0.0:
        raise DegeneracyError("B must be nonzero")
    if np.any(np.abs(phi) < PHI_MIN):
        raise DegeneracyError("potential vanishes: sigma undefined")
    r = np.asarray(r, dtype=float)
    return -r * r / (4.0 * B * phi) - B * phi / 4.0


def sigma_derivatives(B, phi, r):
    """(sigma, d_r sigma, d_rr sigma) in closed form."""
    sigma = sigma_of(B, phi, r)
    return sigma, -r / (2.0 * B * phi), -1.0 / (2.0 * B * phi) * np.ones_like(sigma)


def beta_tilde_o(k, phi, r):
    """Kerr-family deformation profile k*r/(r^2 + phi^2) (the B = -1 case)."""
    phi = np.asarray(phi, dtype=float)
    r = np.asarray(r, dtype=float)
    Q = r * r + phi * phi
    if np.any(Q < FIBER_MIN):
        raise DegeneracyError("r and phi vanish together: profile undefined")
    return k * r / Q


def general_beta_solution(k1, k2, B, phi, r):
    """Two-parameter general solution of the fiber ODE for arbitrary B:

    k1*(B^2 phi^2 - r^2)/(r^2 + B^2 phi^2) + k2*r/(r^2 + B^2 phi^2);
    reduces to beta_tilde_o(k2, phi, r) for k1 = 0, B = -1.
    """
    phi = np.asarray(phi, dtype=float)
    r = np.asarray(r, dtype=float)
    G = B * B * phi * phi
    Q = r * r + G
    if np.any(Q < FIBER_MIN):
        raise DegeneracyError("r and B*phi vanish together: profile undefined")
    return k1 * (G - r * r) / Q + k2 * r / Q


def beta_derivatives(k1, k2, B, phi, r):
    """(beta_o, d_r beta_o, d_rr beta_o) of the general solution."""
    phi = np.asarray(phi, dtype=float)
    r = np.asarray(r, dtype=float)
    G = B * B * phi * phi
    Q = r * r + G
    val = k1 * (G - r * r) / Q + k2 * r / Q
    d1 = k1 * (-4.0 * G * r) / Q**2 + k2 * (G - r * r) / Q**2
    d2 = k1 * (-4.0 * G * (G - 3.0 * r * r)) / Q**3 + k2 * 2.0 * r * (r * r - 3.0 * G) / Q**3
    return val, d1, d2


# ---------------------------------------------------------------------------
# family metrics in the chart (x, y, v, r)
# ---------------------------------------------------------------------------

def family_metric_field(cfg: MetricConfig, *, beta_scale=1.0, beta_detune=1.0,
                        sigma_shift=0.0, k1=0.0):
    """Vectorised metric evaluator for a family member.

    Returns a callable mapping points of shape (..., 4) in (x, y, v, r)
    order to metric components of shape (..., 4, 4).  The keyword knobs
    deform the exact member and exist for negative-control checks only:
    `beta_scale` rescales the deformation profile by a constant (which
    lands on another exact family member, so it does NOT break Ricci
    flatness); `beta_detune` rescales phi inside the profile denominator,
    which knocks the profile out of the fiber ODE's solution space.
    """
    kappa, B, m, k, pot = cfg.kappa, cfg.B, cfg.m, cfg.k, cfg.potential

    def metric(points):
        p = np.asarray(points, dtype=float)
        x, y, r = p[..., 0], p[..., 1], p[..., 3]
        vals = pot.evaluate(x, y)
        phi, phi_x, phi_y = vals.phi, vals.phi_x, vals.phi_y
        if np.any(np.abs(phi) < PHI_MIN):
            raise DegeneracyError("potential vanishes on the requested points")
        sigma = sigma_of(B, phi, r) + sigma_shift
        beta = B + m * beta_scale * general_beta_solution(k1, k, B, beta_detune * phi, r)
        conf = conformal_factor(kappa, x, y)
        surface = sigma * (-2.0 * kappa * phi) * conf
        g = np.zeros(p.shape[:-1] + (4, 4))
        g[..., 0, 0] = surface
        g[..., 1, 1] = surface
        theta = np.stack(
            [-phi_y, phi_x, np.ones_like(phi), np.zeros_like(phi)], axis=-1
        )
        zeta = 0.5 * beta[..., None] * theta
        zeta[..., 2] -= B
        zeta[..., 3] += 1.0
        g += 0.5 * (theta[..., :, None] * zeta[..., None, :]
                    + zeta[..., :, None] * theta[..., None, :])
        return g

    return metric


def assemble_metric(cfg: MetricConfig, pt: ChartPoint) -> MetricAtPoint:
    """Metric components of the family member at one admissible chart point."""
    if not pt.admissible(cfg.kappa):
        raise DomainError("chart point outside the kappa=-1 disk")
    vals = cfg.potential.evaluate(pt.x, pt.y)
    phi = float(vals.phi)
    if abs(phi) < PHI_MIN:
        raise DegeneracyError("potential vanishes at the requested point")
    if np.sign(phi) != -cfg.kappa:
        raise DomainError("sign(phi) = -kappa violated at the requested point")
    if pt.r**2 + phi**2 < FIBER_MIN:
        raise DomainError("fiber coordinate singularity (r and phi both vanish)")
    g = family_metric_field(cfg)(pt.as_array())
    sigma = float(sigma_of(cfg.B, phi, pt.r))
    beta = cfg.B + cfg.m * float(general_beta_solution(0.0, cfg.k, cfg.B, phi, pt.r))
    return MetricAtPoint(g=g, sigma=sigma, beta_tilde=beta)


# ---------------------------------------------------------------------------
# classical Kerr in spherical coordinates (xi, psi, v, rho)
# ---------------------------------------------------------------------------

def kerr_metric_field(m, a):
    """Vectorised classical Kerr metric, components in (xi, psi, v, rho).

    g = -1/2 (rho^2 + a^2 cos^2 xi)(dxi^2 + sin^2 xi dpsi^2)
        - (dv + a sin^2 xi dpsi) v (drho + a sin^2 xi dpsi)
        + 1/2 (1 - 2 m rho/(rho^2 + a^2 cos^2 xi)) (dv + a sin^2 xi dpsi)^2
    """

    def metric(points):
        p = np.asarray(points, dtype=float)
        xi, rho = p[..., 0], p[..., 3]
        P = rho * rho + a * a * np.cos(xi) ** 2
        if np.any(P < FIBER_MIN):
            raise DegeneracyError("rho^2 + a^2 cos^2 xi vanishes")
        S = a * np.sin(xi) ** 2
        half_w = 0.5 * (1.0 - 2.0 * m * rho / P)
        g = np.zeros(p.shape[:-1] + (4, 4))
        g[..., 0, 0] = -0.5 * P
        g[..., 1, 1] = -0.5 * P * np.sin(xi) ** 2 - S * S + half_w * S * S
        g[..., 1, 2] = g[..., 2, 1] = -0.5 * S + half_w * S
        g[..., 1, 3] = g[..., 3, 1] = -0.5 * S
        g[..., 2, 2] = half_w
        g[..., 2, 3] = g[..., 3, 2] = -0.5
        return g

    return metric


def classical_kerr_metric(m, a, pt: SphericalPoint) -> MetricAtPoint:
    """Classical Kerr metric components at one spherical point."""
    if abs(np.sin(pt.xi)) < SIN_XI_MIN:
        raise DomainError("spherical chart degenerates where sin(xi) ~ 0")
    g = kerr_metric_field(m, a)(pt.as_array())
    P = pt.rho**2 + a**2 * np.cos(pt.xi) ** 2
    sigma = -P / (4.0 * a * np.cos(pt.xi)) if a * np.cos(pt.xi) != 0 else np.nan
    beta = -1.0 - 2.0 * m * pt.rho / P
    return MetricAtPoint(g=g, sigma=float(sigma), beta_tilde=float(beta))


def schwarzschild_analog_field(m):
    """The kappa=-1, phi -> 0 member, components in (xi, psi, v, r):

    g = (r^2/2)(dxi^2 + sinh^2 xi dpsi^2) + dv v (dr + (r+m)/(2r) dv).
    """

    def metric(points):
        p = np.asarray(points, dtype=float)
        xi, r = p[..., 0], p[..., 3]
        if np.any(np.abs(r) < 1e-8):
            raise DegeneracyError("r ~ 0 in the Schwarzschild-analog chart")
        g = np.zeros(p.shape[:-1] + (4, 4))
        g[..., 0, 0] = r * r / 2.0
        g[..., 1, 1] = r * r / 2.0 * np.sinh(xi) ** 2
        g[..., 2, 2] = (r + m) / (2.0 * r)
        g[..., 2, 3] = g[..., 3, 2] = 0.5
        return g

    return metric


def background_block_coords(B, v, u):
    """Modified fiber coordinates flattening the background metric:

    R = u/sqrt(2|B|) + sign(B) sqrt(|B|/2) v,  T = -u/sqrt(2|B|).
    """
    if B == 0.0:
        raise DegeneracyError("B must be nonzero")
    root = np.sqrt(2.0 * abs(B))
    R = u / root + np.sign(B) * np.sqrt(abs(B) / 2.0) * v
    T = -u / root
    return R, T


def signature_signs(g):
    """Sorted signs of the metric eigenvalues, e.g. (-1, -1, -1, 1)."""
    eig = np.linalg.eigvalsh(np.asarray(g, dtype=float))
    return tuple(int(s) for s in np.sign(np.sort(eig)))


def expected_signature(kappa, B):
    """Eigenvalue sign pattern implied by sign(B*kappa).

    The fiber block always contributes one plus and one minus; the surface
    block carries the sign of sigma, which equals sign(B*kappa).
    """
    if B * kappa > 0:
        return (-1, 1, 1, 1)
    return (-1, -1, -1, 1)
