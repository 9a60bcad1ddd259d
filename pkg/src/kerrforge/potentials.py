"""Potential fields solving the constrained elliptic equation on the disk.

A potential here is a real function phi(x, y) with

    lap(phi) + 8*kappa*phi / (1 + kappa*(x^2+y^2))^2 = 0,
    kappa * phi < 0 on its admissible domain,

for kappa = +1 (round metric on the chart) or kappa = -1 (Poincare disk,
chart restricted to x^2 + y^2 < 1).  Three sources are provided:

* `SeriesPotential`   -- Fourier data on a circle of radius r_o < 1,
  resummed with the explicit radial profiles (exact solutions).
* `HolomorphicPotential` -- a complex polynomial F generating phi through
  the closed-form integral/derivative combinations (exact solutions).
* `GridPotential`     -- a finite-difference solution on a polar lattice
  (second-order accurate; see `disksolve`).

Analytic sources evaluate through truncated Taylor jets (`taylor.Jet`), so
all derivatives up to fourth order are exact up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SignConditionError
from .taylor import Jet

__all__ = [
    "PotentialValues",
    "PotentialField",
    "SeriesPotential",
    "HolomorphicPotential",
    "GridPotential",
    "radial_profile",
    "series_from_coefficients",
    "holomorphic_from_series",
    "spherical_potential",
    "hyperbolic_potential",
    "rotate_reduce",
    "rotation_to_pole",
    "check_sign_condition",
    "pde_residual",
    "read_coefficient_file",
    "read_boundary_file",
]


@dataclass(frozen=True)
class PotentialValues:
    """phi and its first and second partial derivatives at a point."""

    phi: np.ndarray
    phi_x: np.ndarray
    phi_y: np.ndarray
    phi_xx: np.ndarray
    phi_xy: np.ndarray
    phi_yy: np.ndarray


def _values_from_jet(jet: Jet) -> PotentialValues:
    return PotentialValues(
        phi=jet.value,
        phi_x=jet.deriv(1, 0),
        phi_y=jet.deriv(0, 1),
        phi_xx=jet.deriv(2, 0),
        phi_xy=jet.deriv(1, 1),
        phi_yy=jet.deriv(0, 2),
    )


class PotentialField:
    """Common interface of the potential sources."""

    kappa: int
    radius: float  # admissible chart radius (in |z|)

    def jet(self, x, y) -> Jet:
        raise NotImplementedError

    def evaluate(self, x, y) -> PotentialValues:
        return _values_from_jet(self.jet(x, y))

    def __call__(self, x, y) -> PotentialValues:
        return self.evaluate(x, y)

    def _check_domain(self, x, y):
        s = np.asarray(x, dtype=float) ** 2 + np.asarray(y, dtype=float) ** 2
        if np.any(s > self.radius**2 * (1 + 1e-12)):
            raise DomainError(
                f"point radius {np.sqrt(np.max(s)):.6g} exceeds the declared "
                f"domain radius {self.radius:.6g}"
            )


# ---------------------------------------------------------------------------
# radial profiles and univariate derivative stacks
# ---------------------------------------------------------------------------

def radial_profile(kappa, n, r):
    """Radial factor of the n-th Fourier mode of an exact solution.

    kappa=+1: (1 - 2 r^2 / ((1+r^2)(n+1))) * r^n
    kappa=-1: ((1+r^2)/(1-r^2) + n) * r^n
    """
    r = np.asarray(r, dtype=float)
    s = r * r
    if kappa == 1:
        return (1.0 - 2.0 * s / ((1.0 + s) * (n + 1))) * r**n
    return ((1.0 + s) / (1.0 - s) + n) * r**n


def _w_derivs(s):
    """w(s) = s/(1+s) and derivatives up to order 4."""
    u = 1.0 + s
    return [s / u, 1.0 / u**2, -2.0 / u**3, 6.0 / u**4, -24.0 / u**5]


def _q_derivs(s):
    """q(s) = (1+s)/(1-s) and derivatives up to order 4."""
    u = 1.0 - s
    return [(1.0 + s) / u, 2.0 / u**2, 4.0 / u**3, 12.0 / u**4, 48.0 / u**5]


def _mode_sum(kappa, coeffs, x, y):
    """Jet of sum_n profile_n(s) * Re(c_n z^n) for complex coefficients c_n."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    s = Jet.radius_sq(x, y)
    if kappa == 1:
        w = s.compose(_w_derivs(s.value))
    else:
        q = s.compose(_q_derivs(s.value))
    total = None
    for n, c in enumerate(coeffs):
        if c == 0:
            continue
        harm = Jet.complex_power(c, n, x, y).real_part()
        if kappa == 1:
            term = harm - (2.0 / (n + 1)) * (w * harm)
        else:
            term = q * harm + float(n) * harm
        total = term if total is None else total + term
    if total is None:
        total = Jet.const(0.0, np.broadcast_shapes(x.shape, y.shape))
    return total


class SeriesPotential(PotentialField):
    """Exact solution from Fourier data a_0, (a_n, b_n) on the circle r_o.

    The boundary values are phi(r_o, w) = -(a_0 + sum a_n cos(nw) + b_n sin(nw)),
    i.e. the stored coefficients are those of minus the boundary trace.
    """

    def __init__(self, kappa, r_o, a0, a=(), b=()):
        if kappa not in (1, -1):
            raise ValueError("kappa must be +1 or -1")
        if not 0 < r_o < 1:
            raise ValueError("r_o must lie in (0, 1)")
        n_modes = max(len(a), len(b))
        if a0 == 0 and n_modes == 0:
            raise ValueError("empty coefficient list")
        self.kappa = kappa
        self.radius = r_o
        self.a0 = float(a0)
        self.a = np.zeros(n_modes)
        self.b = np.zeros(n_modes)
        self.a[: len(a)] = a
        self.b[: len(b)] = b
        # modes as complex coefficients of z^n, normalised by the profile at r_o
        coeffs = [-self.a0 / radial_profile(kappa, 0, r_o)]
        for n in range(1, n_modes + 1):
            c = -(self.a[n - 1] - 1j * self.b[n - 1]) / radial_profile(kappa, n, r_o)
            coeffs.append(c)
        self._coeffs = coeffs

    def jet(self, x, y):
        self._check_domain(x, y)
        return _mode_sum(self.kappa, self._coeffs, x, y)

    def boundary_trace(self, w):
        """phi on the circle r = r_o (equals minus the Fourier data)."""
        w = np.asarray(w, dtype=float)
        f = np.full_like(w, self.a0)
        for n in range(1, len(self.a) + 1):
            f = f + self.a[n - 1] * np.cos(n * w) + self.b[n - 1] * np.sin(n * w)
        return -f


class HolomorphicPotential(PotentialField):
    """Exact solution generated by a complex polynomial F(z) = sum c_n z^n.

    kappa=+1: phi = Re(F) - (2|z|^2/(1+|z|^2)) Re((1/z) int_0^z F)
    kappa=-1: phi = Re((1+|z|^2)/(1-|z|^2) F) + Re(z F')

    The removable singularity of (1/z) int_0^z F at z = 0 is handled
    termwise: (1/z) int_0^z z^n dz = z^n/(n+1).
    """

    def __init__(self, kappa, coeffs, radius=None):
        if kappa not in (1, -1):
            raise ValueError("kappa must be +1 or -1")
        self.kappa = kappa
        self.coeffs = [complex(c) for c in np.atleast_1d(coeffs)]
        if radius is None:
            radius = 1.0
        if kappa == -1 and radius > 1.0:
            raise ValueError("kappa=-1 potentials live inside the unit disk")
        self.radius = float(radius)

    def jet(self, x, y):
        self._check_domain(x, y)
        if self.kappa == -1:
            s = np.asarray(x, dtype=float) ** 2 + np.asarray(y, dtype=float) ** 2
            if np.any(s >= 1.0):
                raise DomainError("|z| >= 1 for kappa = -1")
        if self.kappa == 1:
            # F with profile weights: Re(F) - (2/(n+1)) w(s) Re(c_n z^n) summed
            return _mode_sum(1, self.coeffs, x, y)
        return _mode_sum(-1, self.coeffs, x, y)


def series_from_coefficients(kappa, r_o, table):
    """Build a SeriesPotential from a {n: (a_n, b_n)} table (n=0 uses a_0)."""
    if not table:
        raise ValueError("empty coefficient list")
    n_max = max(table)
    a0 = table.get(0, (0.0, 0.0))[0]
    a = [table.get(n, (0.0, 0.0))[0] for n in range(1, n_max + 1)]
    b = [table.get(n, (0.0, 0.0))[1] for n in range(1, n_max + 1)]
    return SeriesPotential(kappa, r_o, a0, a, b)


def holomorphic_from_series(series: SeriesPotential) -> HolomorphicPotential:
    """The holomorphic generator matching a series potential exactly.

    c_0 = -a_0/profile_0(r_o), c_n = -(a_n - i b_n)/profile_n(r_o).
    """
    return HolomorphicPotential(series.kappa, series._coeffs, radius=series.radius)


class GridPotential(PotentialField):
    """Potential interpolated from a finite-difference disk solution.

    Derivatives come from a spline in polar coordinates; accuracy is tied to
    the lattice resolution (O(h^2) values).  Third and higher derivatives are
    not available, so this source cannot feed the closed-form curvature path.
    """

    def __init__(self, grid):
        from scipy.interpolate import RectBivariateSpline

        self.kappa = grid.kappa
        self.grid = grid
        # periodic padding in the angle, a few columns on both sides
        pad = 4
        w = 2 * np.pi * np.arange(grid.n_theta) / grid.n_theta
        w_ext = np.concatenate([w[-pad:] - 2 * np.pi, w, w[:pad] + 2 * np.pi])
        vals = np.concatenate(
            [grid.values[:, -pad:], grid.values, grid.values[:, :pad]], axis=1
        )
        r_nodes = grid.radius * np.arange(grid.n_r + 1) / grid.n_r
        self._spline = RectBivariateSpline(r_nodes, w_ext, vals, kx=4, ky=4)
        self._r_min = r_nodes[1]
        self.radius = grid.radius * (1.0 - 1.0 / grid.n_r)

    def jet(self, x, y):
        raise NotImplementedError(
            "grid potentials provide derivatives only up to second order; "
            "use an analytic source for curvature work"
        )

    def evaluate(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        self._check_domain(x, y)
        r = np.hypot(x, y)
        if np.any(r < self._r_min):
            raise DomainError("grid potential not evaluable inside the first ring")
        w = np.mod(np.arctan2(y, x), 2 * np.pi)
        sp = self._spline
        f = sp(r, w, grid=False)
        f_r = sp(r, w, dx=1, grid=False)
        f_w = sp(r, w, dy=1, grid=False)
        f_rr = sp(r, w, dx=2, grid=False)
        f_rw = sp(r, w, dx=1, dy=1, grid=False)
        f_ww = sp(r, w, dy=2, grid=False)
        cw, sw = np.cos(w), np.sin(w)
        phi_x = f_r * cw - f_w * sw / r
        phi_y = f_r * sw + f_w * cw / r
        # second derivatives by differentiating the chain rule once more
        phi_xx = (f_rr * cw**2 - 2 * f_rw * sw * cw / r + f_ww * sw**2 / r**2
                  + f_r * sw**2 / r + 2 * f_w * sw * cw / r**2)
        phi_yy = (f_rr * sw**2 + 2 * f_rw * sw * cw / r + f_ww * cw**2 / r**2
                  + f_r * cw**2 / r - 2 * f_w * sw * cw / r**2)
        phi_xy = (f_rr * sw * cw + f_rw * (cw**2 - sw**2) / r - f_ww * sw * cw / r**2
                  - f_r * sw * cw / r - f_w * (cw**2 - sw**2) / r**2)
        return PotentialValues(f, phi_x, phi_y, phi_xx, phi_xy, phi_yy)


# ---------------------------------------------------------------------------
# spherical / hyperbolic coordinate forms
# ---------------------------------------------------------------------------

def spherical_potential(xi, psi, a0=0.0, a1=0.0, b1=0.0, higher=()):
    """Potential in spherical coordinates (kappa = +1).

    phi = a0 cos(xi) + a1 sin(xi) cos(psi) + b1 sin(xi) sin(psi)
        + sum_{n>=2} profile_n(tan(xi/2)) (a_n cos(n psi) + b_n sin(n psi))

    `higher` lists (a_n, b_n) starting at n = 2.  Equals the kappa=+1 series
    solution composed with r = tan(xi/2), w = psi, up to the mode-wise
    normalisation (the degree-one mode carries a factor 2).
    """
    xi = np.asarray(xi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    if np.any(xi <= 0) or np.any(xi >= np.pi):
        raise DomainError("xi must lie strictly inside (0, pi)")
    phi = a0 * np.cos(xi) + np.sin(xi) * (a1 * np.cos(psi) + b1 * np.sin(psi))
    t = np.tan(xi / 2)
    for idx, (an, bn) in enumerate(higher):
        n = idx + 2
        phi = phi + radial_profile(1, n, t) * (an * np.cos(n * psi) + bn * np.sin(n * psi))
    return phi


def hyperbolic_potential(xi, psi, a0=0.0, a1=0.0, b1=0.0, higher=()):
    """Potential in hyperbolic polar coordinates (kappa = -1).

    phi = a0 cosh(xi) + a1 sinh(xi) cos(psi) + b1 sinh(xi) sin(psi)
        + sum_{n>=2} tanh^n(xi/2) (cosh(xi) + n) (a_n cos(n psi) + b_n sin(n psi))

    Equals the kappa=-1 series solution composed with r = tanh(xi/2), w = psi.
    """
    xi = np.asarray(xi, dtype=float)
    psi = np.asarray(psi, dtype=float)
    phi = a0 * np.cosh(xi) + np.sinh(xi) * (a1 * np.cos(psi) + b1 * np.sin(psi))
    t = np.tanh(xi / 2)
    for idx, (an, bn) in enumerate(higher):
        n = idx + 2
        phi = phi + t**n * (np.cosh(xi) + n) * (an * np.cos(n * psi) + bn * np.sin(n * psi))
    return phi


def rotate_reduce(a0, a1, b1):
    """Reduce a degree-one spherical potential to a*cos(xi') by rotation.

    Returns (a, alpha1, alpha2) with a = sqrt(a0^2 + a1^2 + b1^2);
    (alpha1, alpha2) are the polar/azimuthal angles of the coefficient
    vector (a1, b1, a0), so that `rotation_to_pole(alpha1, alpha2)` maps
    it onto the north pole.
    """
    a = math.sqrt(a0 * a0 + a1 * a1 + b1 * b1)
    if a == 0.0:
        raise ValueError("zero coefficient vector")
    alpha2 = math.atan2(b1, a1)
    alpha1 = math.atan2(math.hypot(a1, b1), a0)
    return a, alpha1, alpha2


def rotation_to_pole(alpha1, alpha2):
    """SO(3) matrix sending the unit vector with angles (alpha1, alpha2) to e_3."""
    c1, s1 = math.cos(alpha1), math.sin(alpha1)
    c2, s2 = math.cos(alpha2), math.sin(alpha2)
    about_y = np.array([[c1, 0.0, -s1], [0.0, 1.0, 0.0], [s1, 0.0, c1]])
    about_z = np.array([[c2, s2, 0.0], [-s2, c2, 0.0], [0.0, 0.0, 1.0]])
    return about_y @ about_z


@dataclass(frozen=True)
class SignReport:
    ok: bool
    worst_point: tuple
    worst_value: float


def check_sign_condition(field: PotentialField, points) -> SignReport:
    """Check kappa * phi < 0 on a sample lattice of (x, y) points."""
    pts = np.asarray(points, dtype=float)
    vals = field.evaluate(pts[:, 0], pts[:, 1]).phi
    signed = field.kappa * vals
    worst = int(np.argmax(signed))
    return SignReport(
        ok=bool(np.all(signed < 0)),
        worst_point=(float(pts[worst, 0]), float(pts[worst, 1])),
        worst_value=float(vals[worst]),
    )


def pde_residual(field: PotentialField, x, y):
    """lap(phi) + 8 kappa phi / (1 + kappa (x^2+y^2))^2 from reported derivatives."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    v = field.evaluate(x, y)
    s = x * x + y * y
    return v.phi_xx + v.phi_yy + 8.0 * field.kappa * v.phi / (1.0 + field.kappa * s) ** 2


# ---------------------------------------------------------------------------
# plain-text interchange formats
# ---------------------------------------------------------------------------

def read_coefficient_file(path):
    """Read 'n a_n b_n' lines into a {n: (a_n, b_n)} table."""
    table = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'n a_n b_n'")
            n = int(parts[0])
            if n < 0 or n in table:
                raise ValueError(f"{path}:{lineno}: bad or duplicate mode index {n}")
            table[n] = (float(parts[1]), float(parts[2]))
    if not table:
        raise ValueError(f"{path}: no coefficients")
    return table


def read_boundary_file(path):
    """Read 'w value' lines; w in radians, ascending within [0, 2*pi)."""
    ws, vals = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'w value'")
            ws.append(float(parts[0]))
            vals.append(float(parts[1]))
    w = np.asarray(ws)
    v = np.asarray(vals)
    if w.size == 0:
        raise ValueError(f"{path}: no boundary samples")
    if np.any(np.diff(w) <= 0) or w[0] < 0 or w[-1] >= 2 * np.pi:
        raise ValueError(f"{path}: angles must ascend within [0, 2*pi)")
    return w, v


def mixed_sign(values, tol=0.0):
    """True if the samples take both signs (beyond tol) or vanish identically."""
    v = np.asarray(values, dtype=float)
    if np.all(np.abs(v) <= tol):
        return True
    return bool(np.any(v > tol) and np.any(v < -tol))


def boundary_sign_or_raise(kappa, values):
    """Validate one-signed, not identically zero boundary data for `kappa`."""
    v = np.asarray(values, dtype=float)
    if np.all(v == 0.0):
        raise SignConditionError("boundary data vanishes identically")
    if mixed_sign(v):
        raise SignConditionError("boundary data mixes signs")
    if kappa == 1 and np.any(v > 0):
        raise SignConditionError("kappa=+1 requires boundary values <= 0")
    if kappa == -1 and np.any(v < 0):
        raise SignConditionError("kappa=-1 requires boundary values >= 0")
