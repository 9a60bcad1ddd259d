"""Deterministic low-discrepancy sample points inside admissibility margins."""

from __future__ import annotations

import numpy as np
from scipy.stats import qmc

from .errors import KerrforgeError

__all__ = ["chart_samples", "sphere_samples", "disk_lattice"]


def chart_samples(potential, n, seed, disk_frac=0.8, r_band=(0.4, 3.0),
                  v_band=(-1.0, 1.0), phi_floor=1e-3, predicate=None):
    """n quasi-random admissible chart points (x, y, v, r) for a potential.

    Points are drawn from a Halton sequence inside the disk of radius
    `disk_frac * potential.radius`, with |r| in `r_band` (both signs), and
    kept only where the sign condition holds with margin `phi_floor`.
    An optional extra `predicate(x, y)` restricts the surface region.
    """
    kappa = potential.kappa
    engine = qmc.Halton(d=5, seed=seed)
    out = []
    r_max = disk_frac * potential.radius
    for _ in range(200):
        u = engine.random(4 * max(n, 8))
        rad = r_max * np.sqrt(u[:, 0])
        ang = 2 * np.pi * u[:, 1]
        x = rad * np.cos(ang)
        y = rad * np.sin(ang)
        v = v_band[0] + (v_band[1] - v_band[0]) * u[:, 2]
        r = (r_band[0] + (r_band[1] - r_band[0]) * u[:, 3]) * np.where(u[:, 4] < 0.5, -1.0, 1.0)
        phi = potential.evaluate(x, y).phi
        ok = (kappa * phi < 0) & (np.abs(phi) >= phi_floor)
        if predicate is not None:
            ok &= predicate(x, y)
        pts = np.stack([x, y, v, r], axis=-1)[ok]
        out.extend(pts)
        if len(out) >= n:
            return np.asarray(out[:n])
    raise KerrforgeError(
        "could not draw enough admissible sample points; "
        "the potential may violate its sign condition on most of the disk"
    )


def sphere_samples(n, seed, xi_band=(0.3, 1.25), rho_band=(1.5, 6.0), v_band=(-1.0, 1.0)):
    """n quasi-random upper-hemisphere points (xi, psi, v, rho)."""
    engine = qmc.Halton(d=4, seed=seed)
    u = engine.random(n)
    xi = xi_band[0] + (xi_band[1] - xi_band[0]) * u[:, 0]
    psi = 2 * np.pi * u[:, 1]
    v = v_band[0] + (v_band[1] - v_band[0]) * u[:, 2]
    rho = rho_band[0] + (rho_band[1] - rho_band[0]) * u[:, 3]
    return np.stack([xi, psi, v, rho], axis=-1)


def disk_lattice(radius, n_r=12, n_w=24, r_min=0.05):
    """Polar lattice of (x, y) points inside the disk, for sign/PDE sweeps."""
    r = np.linspace(r_min, radius, n_r)
    w = np.linspace(0.0, 2 * np.pi, n_w, endpoint=False)
    R, W = np.meshgrid(r, w, indexing="ij")
    return np.stack([(R * np.cos(W)).ravel(), (R * np.sin(W)).ravel()], axis=-1)
