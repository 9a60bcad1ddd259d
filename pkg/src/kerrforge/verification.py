"""Top-level machine checks: Ricci flatness, background flatness, the
higher-dimension obstruction, and the correspondence with classical Kerr.

Every check samples points, runs the relevant curvature pipelines, and
returns a `VerificationReport` whose pass flag is exactly
``max_residual <= tolerance``.  Reports serialise to one JSON record per
check plus per-point residual CSV rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .geometry import (
    ChartPoint,
    MetricConfig,
    SphericalPoint,
    family_metric_field,
    kerr_metric_field,
    schwarzschild_analog_field,
    sigma_of,
)
from .potentials import HolomorphicPotential, pde_residual
from .sampling import chart_samples, disk_lattice, sphere_samples
from .tensor import (
    frame_basis_matrix,
    metric_scale,
    ricci_coordinate_fd,
    riemann_frame,
)
from .util import parallel_map

__all__ = [
    "VerificationReport",
    "verify_ricci_flat",
    "verify_background_flat",
    "nogo_discriminant",
    "kerr_potential",
    "kerr_chart_map",
    "verify_kerr_match",
    "verify_schwarzschild_analog",
    "verify_distinctness",
    "verify_pde",
]


@dataclass
class VerificationReport:
    check: str
    sample_count: int
    max_residual: float
    tolerance: float
    passed: bool
    worst: list = field(default_factory=list)   # [(point tuple, residual)]
    extra: dict = field(default_factory=dict)
    residuals: list = field(default_factory=list)  # [(point tuple, residual)]

    @staticmethod
    def from_residuals(check, points, residuals, tolerance, extra=None, keep_worst=3):
        pts = np.asarray(points, dtype=float)
        res = np.asarray(residuals, dtype=float)
        order = np.argsort(res)[::-1]
        worst = [(tuple(map(float, pts[i])), float(res[i])) for i in order[:keep_worst]]
        rows = [(tuple(map(float, p)), float(v)) for p, v in zip(pts, res)]
        return VerificationReport(
            check=check,
            sample_count=len(res),
            max_residual=float(res.max()) if len(res) else 0.0,
            tolerance=float(tolerance),
            passed=bool(len(res) and res.max() <= tolerance),
            worst=worst,
            extra=dict(extra or {}),
            residuals=rows,
        )

    def json_record(self):
        rec = {
            "check": self.check,
            "samples": self.sample_count,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "worst": [{"point": list(p), "residual": r} for p, r in self.worst],
        }
        rec.update(self.extra)
        return json.dumps(rec, sort_keys=True)

    def csv_rows(self):
        for p, r in self.residuals:
            yield (self.check, *p, r)


# ---------------------------------------------------------------------------
# Ricci flatness of family members / backgrounds
# ---------------------------------------------------------------------------

def _as_point_array(samples):
    pts = [s.as_array() if isinstance(s, (ChartPoint, SphericalPoint)) else np.asarray(s)
           for s in samples]
    return np.asarray(pts, dtype=float)


def verify_ricci_flat(cfg: MetricConfig, samples, tol=1e-6, fd_step=1e-3,
                      beta_scale=1.0, beta_detune=1.0) -> VerificationReport:
    """max |Ric|/scale over both curvature paths at every sample point.

    Requires Ricci-flat family mode: B = -1 and the single-profile
    deformation.  The beta knobs are for negative controls.
    """
    if cfg.B != -1.0:
        raise ConfigError("Ricci-flat family mode requires B = -1")
    pts = _as_point_array(samples)
    metric = family_metric_field(cfg, beta_scale=beta_scale, beta_detune=beta_detune)

    def one(p):
        rep_c = ricci_coordinate_fd(metric, p, fd_step)
        rep_f = riemann_frame(cfg, p, beta_scale=beta_scale, beta_detune=beta_detune)
        scale = max(metric_scale(metric, p, fd_step), 1e-30)
        return max(rep_c.ricci_norm, rep_f.ricci_norm) / scale

    residuals = parallel_map(one, pts)
    return VerificationReport.from_residuals("ricci-flat", pts, residuals, tol)


def verify_background_flat(cfg: MetricConfig, samples, tol=1e-6, fd_step=1e-3,
                           sigma_shift=0.0) -> VerificationReport:
    """Flatness of the m = 0 background plus its product-block structure.

    Residual at each point is the larger of max|Riemann|/scale (both
    curvature paths) and the block-structure defects: eta(T_dir, Ei_hat)
    and eta(T_dir, T_dir) + sign(B), where T_dir is the invariance
    direction expressed in the chart.
    """
    if cfg.m != 0.0:
        raise ConfigError("background mode requires m = 0")
    pts = _as_point_array(samples)
    metric = family_metric_field(cfg, sigma_shift=sigma_shift)
    B = cfg.B
    # d/dT = sign(B) sqrt(2/|B|) d/dv in the (x, y, v, r) chart
    t_dir = np.array([0.0, 0.0, np.sign(B) * np.sqrt(2.0 / abs(B)), 0.0])

    def one(p):
        rep_c = ricci_coordinate_fd(metric, p, fd_step)
        scale = max(metric_scale(metric, p, fd_step), 1e-30)
        res = rep_c.riemann_norm / scale
        if sigma_shift == 0.0:
            rep_f = riemann_frame(cfg, p)
            res = max(res, rep_f.riemann_norm / scale)
        g = metric(p)
        A = frame_basis_matrix(cfg, p[0], p[1])
        t_norm = float(t_dir @ g @ t_dir)
        res = max(res, abs(t_norm + np.sign(B)))
        for i in range(2):
            res = max(res, abs(float(t_dir @ g @ A[:, i])))
        return res

    residuals = parallel_map(one, pts)
    return VerificationReport.from_residuals("background-flat", pts, residuals, tol)


# ---------------------------------------------------------------------------
# the dimension obstruction
# ---------------------------------------------------------------------------

def nogo_discriminant(n: int) -> int:
    """D(n) = 4(n-3)^2 - (n-6)^2; zero exactly at n = 4 (for n >= 4).

    D(n) is the determinant obstruction of the 2x2 linear system that the
    mixed Ricci conditions impose in dimension n; its vanishing is what
    makes the four-dimensional families possible.
    """
    if n < 4:
        raise ValueError("the construction needs n >= 4")
    return 4 * (n - 3) ** 2 - (n - 6) ** 2


# ---------------------------------------------------------------------------
# classical Kerr correspondence
# ---------------------------------------------------------------------------

def kerr_potential(a: float) -> HolomorphicPotential:
    """The potential whose family member matches classical Kerr: phi = -a cos(xi).

    In the stereographic chart cos(xi) = (1-s)/(1+s), so this is exactly
    the holomorphic member generated by the constant F = -a.
    """
    return HolomorphicPotential(1, [-a])


def kerr_chart_map(a, pt: SphericalPoint) -> ChartPoint:
    """Map an upper-hemisphere spherical point to the chart, r = rho.

    (x, y) = tan(xi/2)(cos psi, sin psi).  Checks the algebraic identity
    sigma(B=-1, phi=-a cos xi, r=rho) = -rho^2/(4 a cos xi) - a cos xi/4
    that pins the potential sign; raises if it fails to 1e-12.
    """
    if not 0.0 < pt.xi < np.pi / 2:
        raise ConfigError("the twisting chart covers the open upper hemisphere only")
    t = np.tan(pt.xi / 2)
    x, y = t * np.cos(pt.psi), t * np.sin(pt.psi)
    phi = -a * np.cos(pt.xi)
    lhs = sigma_of(-1.0, phi, pt.rho)
    rhs = -pt.rho**2 / (4 * a * np.cos(pt.xi)) - a * np.cos(pt.xi) / 4
    if abs(lhs - rhs) > 1e-12 * max(1.0, abs(rhs)):
        raise ConfigError("sigma identity violated in the chart map")
    return ChartPoint(x=float(x), y=float(y), v=pt.v, r=pt.rho)


def _chart_jacobian(xi, psi, orient):
    """d(x, y, v, r)/d(xi, psi, v, rho) for the map with r = orient * rho."""
    t = np.tan(xi / 2)
    dt = 0.5 / np.cos(xi / 2) ** 2
    J = np.zeros((4, 4))
    J[0, 0] = dt * np.cos(psi)
    J[0, 1] = -t * np.sin(psi)
    J[1, 0] = dt * np.sin(psi)
    J[1, 1] = t * np.cos(psi)
    J[2, 2] = 1.0
    J[3, 3] = orient
    return J


def verify_kerr_match(m, a, samples, tol=1e-4, fd_step=1e-3,
                      potential=None) -> VerificationReport:
    """Invariant and isometry comparison with the classical Kerr metric.

    At each upper-hemisphere sample the Kretschmann scalar of the
    classical metric is compared with that of the assembled family member
    (potential phi = -a cos xi unless another is supplied), scanning the
    deformation constant over {+2, -2}.  The Kretschmann scalar is even in
    the mass, so both signs reproduce it; the winner is therefore decided
    by the stronger componentwise test: the chart pullback of the family
    member must equal the classical components exactly, scanning the sign
    together with the fiber orientation r = +/-rho.  The match succeeds
    only for one pair, reported in `extra`.
    """
    pot = potential if potential is not None else kerr_potential(a)
    classical = kerr_metric_field(m, a)
    pts = _as_point_array(samples)

    kret_residuals = {}
    fields = {}
    for k in (2.0, -2.0):
        cfg = MetricConfig(kappa=1, B=-1.0, m=m, k=k, potential=pot)
        fields[k] = family_metric_field(cfg)

    def one(p):
        sp = SphericalPoint(xi=p[0], psi=p[1], rho=p[3], v=p[2])
        cp = kerr_chart_map(a, sp) if potential is None else None
        if cp is None:
            t = np.tan(p[0] / 2)
            chart = np.array([t * np.cos(p[1]), t * np.sin(p[1]), p[2], p[3]])
        else:
            chart = cp.as_array()
        rep_c = ricci_coordinate_fd(classical, p, fd_step)
        out = {}
        for k, f in fields.items():
            rep_a = ricci_coordinate_fd(f, chart, fd_step)
            # the 1e-12 floor keeps flat members (invariant 0 = 0) from
            # comparing FD noise against FD noise
            denom = max(abs(rep_c.kretschmann), abs(rep_a.kretschmann), 1e-12)
            out[k] = abs(rep_a.kretschmann - rep_c.kretschmann) / denom
        return out

    per_point = parallel_map(one, pts)
    for k in fields:
        kret_residuals[k] = np.array([d[k] for d in per_point])

    # componentwise pullback scan decides the winner
    component_residuals = {}
    for k, f in fields.items():
        for orient in (1.0, -1.0):
            worst = 0.0
            for p in pts:
                J = _chart_jacobian(p[0], p[1], orient)
                t = np.tan(p[0] / 2)
                chart = np.array([t * np.cos(p[1]), t * np.sin(p[1]), p[2], orient * p[3]])
                g_fam = f(chart)
                g_cls = classical(p)
                denom = np.max(np.abs(g_cls))
                worst = max(worst, float(np.max(np.abs(J.T @ g_fam @ J - g_cls)) / denom))
            component_residuals[(k, orient)] = worst
    winners = [key for key, v in component_residuals.items() if v < 1e-10]

    matched_k = [k for k in fields if float(kret_residuals[k].max()) <= tol]
    extra = {
        "kretschmann_residuals": {str(k): float(v.max()) for k, v in kret_residuals.items()},
        "component_residuals": {f"k={k},orient={o:+.0f}": v
                                for (k, o), v in component_residuals.items()},
        "kretschmann_matched_k": sorted(matched_k),
        "winning_k": winners[0][0] if len(winners) == 1 else None,
        "winning_orientation": winners[0][1] if len(winners) == 1 else None,
    }
    passed_unique = len(winners) == 1 and bool(matched_k)
    best = min(kret_residuals, key=lambda k: kret_residuals[k].max())
    report = VerificationReport.from_residuals(
        "kerr-match", pts, kret_residuals[best], tol, extra=extra
    )
    report.passed = bool(report.passed and passed_unique)
    return report


def verify_schwarzschild_analog(m, samples, tol=1e-6, fd_step=1e-3) -> VerificationReport:
    """Ricci flatness of the direct hyperbolic-fiber member (FD path)."""
    pts = _as_point_array(samples)
    metric = schwarzschild_analog_field(m)

    def one(p):
        rep = ricci_coordinate_fd(metric, p, fd_step)
        scale = max(metric_scale(metric, p, fd_step), 1e-30)
        return rep.ricci_norm / scale

    residuals = parallel_map(one, pts)
    extra = {}
    if m != 0.0:
        rep0 = ricci_coordinate_fd(metric, pts[0], fd_step)
        extra["kretschmann_at_first_sample"] = rep0.kretschmann
    return VerificationReport.from_residuals("schwarzschild-analog", pts, residuals, tol,
                                             extra=extra)


def verify_distinctness(m_a_candidates, samples, tol=1e-4, fd_step=1e-3,
                        factor=10.0) -> VerificationReport:
    """Separation of the F(z) = z^2 member from every classical candidate.

    For each candidate (m, a) and each deformation sign, at least one
    sample must show a relative Kretschmann difference above
    `factor * tol`; the reported residual is `factor*tol / min-separation`
    so that pass means "everything is separated".
    """
    pot = HolomorphicPotential(1, [0.0, 0.0, 1.0])   # F(z) = z^2
    pts = _as_point_array(samples)
    residuals = []
    separations = {}
    for (m, a) in m_a_candidates:
        classical = kerr_metric_field(m, a)
        for k in (2.0, -2.0):
            cfg = MetricConfig(kappa=1, B=-1.0, m=m, k=k, potential=pot)
            f = family_metric_field(cfg)
            best_sep = 0.0
            for p in pts:
                t = np.tan(p[0] / 2)
                chart = np.array([t * np.cos(p[1]), t * np.sin(p[1]), p[2], p[3]])
                ka = ricci_coordinate_fd(f, chart, fd_step).kretschmann
                kc = ricci_coordinate_fd(classical, p, fd_step).kretschmann
                denom = max(abs(ka), abs(kc), 1e-30)
                best_sep = max(best_sep, abs(ka - kc) / denom)
            separations[f"m={m},a={a},k={k}"] = best_sep
            residuals.append(factor * tol / max(best_sep, 1e-30))
    points = [(m, a, 0.0, 0.0) for (m, a) in m_a_candidates for _ in (0, 1)]
    return VerificationReport.from_residuals(
        "distinctness", points, residuals, 1.0,
        extra={"separations": separations},
    )


def verify_pde(potential, tol=1e-8, n_r=12, n_w=24) -> VerificationReport:
    """Residual of the defining elliptic equation on a disk lattice."""
    lat = disk_lattice(0.95 * potential.radius, n_r=n_r, n_w=n_w)
    res = np.abs(pde_residual(potential, lat[:, 0], lat[:, 1]))
    phi = potential.evaluate(lat[:, 0], lat[:, 1]).phi
    rel = res / (1.0 + np.abs(phi))
    pts4 = np.column_stack([lat, np.zeros((len(lat), 2))])
    return VerificationReport.from_residuals("pde-residual", pts4, rel, tol)


def standard_chart_samples(cfg: MetricConfig, n, seed):
    """Admissible chart samples for a config (exported for the CLI)."""
    return chart_samples(cfg.potential, n, seed)


def standard_sphere_samples(n, seed):
    return sphere_samples(n, seed)
