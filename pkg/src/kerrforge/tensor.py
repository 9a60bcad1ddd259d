"""Connection and curvature, twice over.

Two independent pipelines compute curvature for every metric in the
package:

* a coordinate finite-difference oracle (`christoffel_fd`,
  `ricci_coordinate_fd`): fourth-order central stencils applied to any
  vectorised metric callable, with optional Richardson extrapolation.
  It knows nothing about the structure of the metrics it differentiates.

* the closed-form adapted-frame path (`christoffel_closed`,
  `riemann_frame`): the explicit Christoffel table of the compatible
  metrics in the frame (E1_hat, E2_hat, p_o, q_o), with all derivatives
  taken analytically from the potential jets.

Their agreement, after transporting the frame result to the coordinate
basis, is the numerical re-derivation of the long Christoffel/Ricci
cancellations that the construction rests on.

Index conventions for arrays:
  gamma[a, b, c]       = Gamma^c_{ab}
  dgamma[e, a, b, c]   = d_e Gamma^c_{ab}
  riemann[a, b, c, d]  = R_{a b c}^d   (curvature sign R(X,Y) = [grad_X, grad_Y] - grad_[X,Y])
  ricci[a, b]          = sum_c R_{c a b}^c
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError
from .geometry import MetricConfig, family_metric_field, sigma_of

__all__ = [
    "ChristoffelSet", "CurvatureReport",
    "christoffel_fd", "riemann_fd", "ricci_coordinate_fd", "metric_scale",
    "kretschmann",
    "christoffel_closed", "riemann_frame", "frame_basis_matrix",
    "ricci_frame_from_coordinate",
]

_W1 = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0   # first derivative, offsets -2,-1,1,2
_OFFS = np.array([-2.0, -1.0, 1.0, 2.0])


@dataclass(frozen=True)
class ChristoffelSet:
    gamma: np.ndarray            # gamma[a, b, c] = Gamma^c_{ab}
    basis: str                   # "coordinate" or "adapted-frame"


@dataclass(frozen=True)
class CurvatureReport:
    riemann: np.ndarray
    ricci: np.ndarray
    ricci_norm: float
    riemann_norm: float
    kretschmann: float | None
    basis: str
    fd_step: float | None


def _steps(pt, h):
    """Per-direction steps h * max(1, |coordinate|)."""
    pt = np.asarray(pt, dtype=float)
    return h * np.maximum(1.0, np.abs(pt))


def _metric_first_derivs(metric, pts, steps):
    """d_a g_{mu,nu} with fourth-order central differences; batched."""
    pts = np.asarray(pts, dtype=float)
    eye = np.eye(4)
    # stencil points: [..., direction a, offset o, coordinate]
    disp = _OFFS[None, :, None] * steps[..., :, None, None] * eye[:, None, :]
    P = pts[..., None, None, :] + disp
    g = metric(P)                                  # [..., 4, 4, 4, 4]
    dg = np.einsum("o,...aomn->...amn", _W1, g) / steps[..., :, None, None]
    return dg


def _christoffel_at(metric, pts, steps):
    g = metric(np.asarray(pts, dtype=float))
    g_inv = np.linalg.inv(g)
    dg = _metric_first_derivs(metric, pts, steps)
    term = (np.einsum("...adb->...abd", dg) + np.einsum("...bda->...abd", dg)
            - np.einsum("...dab->...abd", dg))
    return 0.5 * np.einsum("...cd,...abd->...abc", g_inv, term)


def christoffel_fd(metric, pt, h=1e-3) -> ChristoffelSet:
    """Coordinate Christoffel symbols by finite differences of the metric."""
    pt = np.asarray(pt, dtype=float)
    return ChristoffelSet(gamma=_christoffel_at(metric, pt, _steps(pt, h)),
                          basis="coordinate")


def _riemann_fd_raw(metric, pt, h):
    pt = np.asarray(pt, dtype=float)
    steps = _steps(pt, h)
    eye = np.eye(4)
    disp = _OFFS[None, :, None] * steps[:, None, None] * eye[:, None, :]
    stencil = pt + disp                            # [4, 4, 4]
    gam_stencil = _christoffel_at(metric, stencil, steps)
    dgam = np.einsum("o,eoabc->eabc", _W1, gam_stencil) / steps[:, None, None, None]
    gam = _christoffel_at(metric, pt, steps)
    # R_{abc}^d = d_a G^d_{bc} - d_b G^d_{ac} - G^f_{ac} G^d_{bf} + G^f_{bc} G^d_{af};
    # with dgam[e,a,b,c] = d_e G^c_{ab} the first term is dgam itself.
    riem = (dgam - np.einsum("bacd->abcd", dgam)
            - np.einsum("acf,bfd->abcd", gam, gam)
            + np.einsum("bcf,afd->abcd", gam, gam))
    return riem, gam


def riemann_fd(metric, pt, h=1e-3, richardson=True):
    """Riemann tensor R_{abc}^d of a metric callable at a point."""
    if richardson:
        r1, _ = _riemann_fd_raw(metric, pt, h)
        r2, _ = _riemann_fd_raw(metric, pt, h / 2.0)
        return (16.0 * r2 - r1) / 15.0
    riem, _ = _riemann_fd_raw(metric, pt, h)
    return riem


def ricci_coordinate_fd(metric, pt, h=1e-3, richardson=True) -> CurvatureReport:
    """Full coordinate-basis curvature report via the FD oracle."""
    riem = riemann_fd(metric, pt, h, richardson=richardson)
    ric = np.einsum("cabc->ab", riem)
    g = metric(np.asarray(pt, dtype=float))
    return CurvatureReport(
        riemann=riem,
        ricci=ric,
        ricci_norm=float(np.max(np.abs(ric))),
        riemann_norm=float(np.max(np.abs(riem))),
        kretschmann=_kretschmann_from(riem, g),
        basis="coordinate",
        fd_step=h,
    )


def _kretschmann_from(riemann, g):
    g_inv = np.linalg.inv(g)
    r_low = np.einsum("abce,ed->abcd", riemann, g)
    r_up = np.einsum("ap,bq,cr,ds,pqrs->abcd", g_inv, g_inv, g_inv, g_inv, r_low)
    return float(np.einsum("abcd,abcd->", r_low, r_up))


def kretschmann(report: CurvatureReport, g) -> float:
    """R_{abcd} R^{abcd} from a coordinate-basis curvature report."""
    if report.basis != "coordinate":
        raise ValueError("Kretschmann contraction requires a coordinate-basis report")
    g = g.g if hasattr(g, "g") else np.asarray(g, dtype=float)
    return _kretschmann_from(report.riemann, g)


def metric_scale(metric, pt, h=1e-3):
    """Reference scale for curvature residuals: max |second metric derivative|.

    Curvature components are sums of second-derivative terms; residual
    tolerances are quoted relative to the size of what has to cancel.
    """
    pt = np.asarray(pt, dtype=float)
    steps = _steps(pt, h)
    eye = np.eye(4)
    pts = [pt]
    for a in range(4):
        for o in (-2, -1, 1, 2):
            pts.append(pt + o * steps[a] * eye[a])
    for a in range(4):
        for b in range(a + 1, 4):
            for sa in (1, -1):
                for sb in (1, -1):
                    pts.append(pt + sa * steps[a] * eye[a] + sb * steps[b] * eye[b])
    g = metric(np.asarray(pts))
    out = 0.0
    idx = 1
    for a in range(4):
        gp2, gp1, gm1, gm2 = g[idx + 3], g[idx + 2], g[idx + 1], g[idx]
        second = (-gp2 + 16 * gp1 - 30 * g[0] + 16 * gm1 - gm2) / (12 * steps[a] ** 2)
        out = max(out, float(np.max(np.abs(second))))
        idx += 4
    for a in range(4):
        for b in range(a + 1, 4):
            gpp, gpm, gmp, gmm = g[idx], g[idx + 1], g[idx + 2], g[idx + 3]
            mixed = (gpp - gpm - gmp + gmm) / (4 * steps[a] * steps[b])
            out = max(out, float(np.max(np.abs(mixed))))
            idx += 4
    return out


# ---------------------------------------------------------------------------
# closed-form adapted-frame path
# ---------------------------------------------------------------------------

def _frame_data(cfg: MetricConfig, x, y, r, beta_scale=1.0, k1=0.0, beta_detune=1.0):
    """All scalars entering the frame Christoffel table, with first partials.

    Returns a dict of arrays; keys ending in `_g` hold gradients in the
    (x, y, r) order.  Requires a potential source with fourth-order jets.
    """
    B, m, k2 = cfg.B, cfg.m * beta_scale, cfg.k
    jet = cfg.potential.jet(x, y)
    phi = jet.value
    if np.any(np.abs(phi) < 1e-10):
        raise DegeneracyError("potential vanishes on the requested points")
    p1 = np.stack([jet.deriv(1, 0), jet.deriv(0, 1)], axis=-1)            # phi_i
    p2 = np.empty(p1.shape[:-1] + (2, 2))
    p2[..., 0, 0] = jet.deriv(2, 0)
    p2[..., 0, 1] = p2[..., 1, 0] = jet.deriv(1, 1)
    p2[..., 1, 1] = jet.deriv(0, 2)
    lam = jet.deriv(2, 0) + jet.deriv(0, 2)
    lam_g = np.stack([jet.deriv(3, 0) + jet.deriv(1, 2),
                      jet.deriv(2, 1) + jet.deriv(0, 3),
                      np.zeros_like(lam)], axis=-1)
    lam_xx = jet.deriv(4, 0) + jet.deriv(2, 2)
    lam_xy = jet.deriv(3, 1) + jet.deriv(1, 3)
    lam_yy = jet.deriv(2, 2) + jet.deriv(0, 4)
    lam_hess = np.stack([np.stack([lam_xx, lam_xy], axis=-1),
                         np.stack([lam_xy, lam_yy], axis=-1)], axis=-2)

    r = np.asarray(r, dtype=float)
    sigma = sigma_of(B, phi, r)
    sig_r = -r / (2.0 * B * phi)
    sig_rr = -1.0 / (2.0 * B * phi) * np.ones_like(sigma)
    sig_i = (r * r - B * B * phi * phi)[..., None] * p1 / (4.0 * B * phi * phi)[..., None]
    sig_ri = (r / (2.0 * B * phi * phi))[..., None] * p1
    sig_ij = ((r * r - B * B * phi * phi) / (4.0 * B * phi * phi))[..., None, None] * p2 \
        - (r * r / (2.0 * B * phi**3))[..., None, None] * p1[..., :, None] * p1[..., None, :]

    # the deformation profile sees the (possibly de-tuned) potential
    phi_b = beta_detune * phi
    pb1 = beta_detune * p1
    pb2 = beta_detune * p2
    G = B * B * phi_b * phi_b
    Q = r * r + G
    G_i = 2.0 * B * B * phi_b[..., None] * pb1
    G_ij = 2.0 * B * B * (pb1[..., :, None] * pb1[..., None, :] + phi_b[..., None, None] * pb2)
    # beta_o = k1 * (G - r^2)/Q + k2 * r/Q and its partials
    b_val = k1 * (G - r * r) / Q + k2 * r / Q
    b_r = k1 * (-4.0 * G * r) / Q**2 + k2 * (G - r * r) / Q**2
    b_rr = k1 * (-4.0 * G * (G - 3.0 * r * r)) / Q**3 + k2 * 2.0 * r * (r * r - 3.0 * G) / Q**3
    b_i = (k1 * 2.0 * r * r / Q**2 - k2 * r / Q**2)[..., None] * G_i
    b_ri = (k1 * 4.0 * r * (G - r * r) / Q**3 + k2 * (3.0 * r * r - G) / Q**3)[..., None] * G_i
    bracket = G_ij / Q[..., None, None] ** 2 \
        - 2.0 * G_i[..., :, None] * G_i[..., None, :] / Q[..., None, None] ** 3
    b_ij = (k1 * 2.0 * r * r)[..., None, None] * bracket - (k2 * r)[..., None, None] * bracket

    beta = B + m * b_val
    return {
        "B": B, "m": m,
        "phi": phi, "p1": p1, "p2": p2,
        "lam": lam, "lam_g": lam_g, "lam_hess": lam_hess,
        "sigma": sigma, "sig_r": sig_r, "sig_rr": sig_rr,
        "sig_i": sig_i, "sig_ri": sig_ri, "sig_ij": sig_ij,
        "beta": beta, "beta_r": m * b_r, "beta_rr": m * b_rr,
        "beta_i": m * b_i, "beta_ri": m * b_ri, "beta_ij": m * b_ij,
    }


# J^m_i with J(d/dx) = d/dy:  J[i, m]
_JMAT = np.array([[0.0, 1.0], [-1.0, 0.0]])
# epsilon with omega_{ij} = lam * eps[i, j]
_EPS = np.array([[0.0, 1.0], [-1.0, 0.0]])


def _gamma_hat(data):
    """Frame Christoffels gamma[a,b,c] = Gamma^c_{ab}, frame order (E1,E2,p,q)."""
    B = data["B"]
    shape = np.shape(data["sigma"])
    gam = np.zeros(shape + (4, 4, 4))
    lam, lam_g = data["lam"], data["lam_g"]
    sigma, sig_r, sig_i = data["sigma"], data["sig_r"], data["sig_i"]
    beta, beta_r, beta_i = data["beta"], data["beta_r"], data["beta_i"]
    p1 = data["p1"]
    jphi = np.einsum("il,...l->...i", _JMAT, p1)          # J^l_i phi_l
    half_lam = 0.5 * lam_g[..., :2] / lam[..., None]      # (lam_x, lam_y)/(2 lam)
    L1, L2 = half_lam[..., 0], half_lam[..., 1]

    # base-surface symbols of g_o = lam * delta
    surf = np.zeros(shape + (2, 2, 2))
    surf[..., 0, 0, 0] = L1
    surf[..., 1, 1, 1] = L2
    surf[..., 0, 1, 0] = surf[..., 1, 0, 0] = L2
    surf[..., 0, 1, 1] = surf[..., 1, 0, 1] = L1
    surf[..., 1, 1, 0] = -L1
    surf[..., 0, 0, 1] = -L2

    sig_hat = sig_i + B * sig_r[..., None] * jphi         # E_i_hat(sigma)
    beta_hat = beta_i + B * beta_r[..., None] * jphi      # E_i_hat(beta)
    inv2s = 1.0 / (2.0 * sigma)
    for i in range(2):
        for j in range(2):
            for mm in range(2):
                gam[..., i, j, mm] = surf[..., i, j, mm] + inv2s * (
                    sig_hat[..., i] * (1.0 if j == mm else 0.0)
                    + sig_hat[..., j] * (1.0 if i == mm else 0.0)
                    - (1.0 if i == j else 0.0) * sig_hat[..., mm]
                )
            gam[..., i, j, 2] = -(1.0 if i == j else 0.0) * lam * sig_r * (B - beta)
            gam[..., i, j, 3] = -0.5 * lam * _EPS[i, j] - (1.0 if i == j else 0.0) * lam * sig_r

    for i in range(2):
        for mm in range(2):
            mix_p = _JMAT[i, mm] / (4.0 * sigma) + (1.0 if i == mm else 0.0) * sig_r * inv2s
            gam[..., i, 2, mm] = gam[..., 2, i, mm] = mix_p
            gam[..., i, 3, mm] = gam[..., 3, i, mm] = (
                _JMAT[i, mm] * beta / (4.0 * sigma)
                + B * (1.0 if i == mm else 0.0) * sig_r * inv2s
            )
        # = Ei_hat(beta)/2; the J-term carries B because q_o acts as B d/dr
        gam[..., i, 3, 2] = gam[..., 3, i, 2] = \
            0.5 * beta_i[..., i] + 0.5 * B * jphi[..., i] * beta_r

    gam[..., 2, 3, 2] = gam[..., 3, 2, 2] = 0.5 * beta_r
    for mm in range(2):
        gam[..., 3, 3, mm] = -beta_hat[..., mm] / (4.0 * sigma * lam)
    gam[..., 3, 3, 2] = 0.5 * beta_r * (B + beta)
    gam[..., 3, 3, 3] = -0.5 * beta_r
    return gam


def _gamma_hat_gradient(data):
    """Analytic partials dgamma[mu, a, b, c] = d_mu Gamma^c_{ab}, mu in (x, y, r)."""
    B = data["B"]
    shape = np.shape(data["sigma"])
    dgam = np.zeros(shape + (3, 4, 4, 4))
    lam, lam_g, lam_hess = data["lam"], data["lam_g"], data["lam_hess"]
    sigma, sig_r, sig_rr = data["sigma"], data["sig_r"], data["sig_rr"]
    sig_i, sig_ri, sig_ij = data["sig_i"], data["sig_ri"], data["sig_ij"]
    beta, beta_r, beta_rr = data["beta"], data["beta_r"], data["beta_rr"]
    beta_i, beta_ri, beta_ij = data["beta_i"], data["beta_ri"], data["beta_ij"]
    p1, p2 = data["p1"], data["p2"]
    jphi = np.einsum("il,...l->...i", _JMAT, p1)
    djphi = np.einsum("il,...lk->...ik", _JMAT, p2)       # d_k (J^l_i phi_l), k in (x,y)

    # gradients of the building blocks, laid out as [..., mu]
    def grad3(dx, dy, dr):
        return np.stack([dx, dy, dr], axis=-1)

    sigma_g = grad3(sig_i[..., 0], sig_i[..., 1], sig_r)
    sig_r_g = grad3(sig_ri[..., 0], sig_ri[..., 1], sig_rr)
    beta_g = grad3(beta_i[..., 0], beta_i[..., 1], beta_r)
    beta_r_g = grad3(beta_ri[..., 0], beta_ri[..., 1], beta_rr)
    zeros = np.zeros_like(sigma)
    lam_full_g = grad3(lam_g[..., 0], lam_g[..., 1], zeros)

    sig_i_g = np.concatenate([sig_ij, sig_ri[..., None]], axis=-1)       # [..., i, mu]
    beta_i_g = np.concatenate([beta_ij, beta_ri[..., None]], axis=-1)
    jphi_g = np.concatenate(
        [djphi, np.zeros(djphi.shape[:-1] + (1,))], axis=-1
    )
    sig_hat = sig_i + B * sig_r[..., None] * jphi
    sig_hat_g = sig_i_g + B * (sig_r_g[..., None, :] * jphi[..., :, None]
                               + sig_r[..., None, None] * jphi_g)
    beta_hat = beta_i + B * beta_r[..., None] * jphi
    beta_hat_g = beta_i_g + B * (beta_r_g[..., None, :] * jphi[..., :, None]
                                 + beta_r[..., None, None] * jphi_g)

    half_lam = 0.5 * lam_g[..., :2] / lam[..., None]
    # d_mu (lam_i / (2 lam)); r-derivative vanishes
    lam_hess3 = np.concatenate([lam_hess, np.zeros(lam_hess.shape[:-1] + (1,))], axis=-1)
    half_lam_g = 0.5 * (lam_hess3 / lam[..., None, None]
                        - lam_g[..., :2, None] * lam_full_g[..., None, :] / (lam**2)[..., None, None])

    inv2s = 1.0 / (2.0 * sigma)
    inv2s_g = -sigma_g * inv2s[..., None] ** 2 * 2.0      # d(1/(2 sigma))
    inv4s = 1.0 / (4.0 * sigma)
    inv4s_g = -sigma_g / (4.0 * sigma * sigma)[..., None]

    surf_g = np.zeros(shape + (2, 2, 2, 3))
    L1g, L2g = half_lam_g[..., 0, :], half_lam_g[..., 1, :]
    surf_g[..., 0, 0, 0, :] = L1g
    surf_g[..., 1, 1, 1, :] = L2g
    surf_g[..., 0, 1, 0, :] = surf_g[..., 1, 0, 0, :] = L2g
    surf_g[..., 0, 1, 1, :] = surf_g[..., 1, 0, 1, :] = L1g
    surf_g[..., 1, 1, 0, :] = -L1g
    surf_g[..., 0, 0, 1, :] = -L2g

    for mu in range(3):
        for i in range(2):
            for j in range(2):
                for mm in range(2):
                    dgam[..., mu, i, j, mm] = surf_g[..., i, j, mm, mu] + (
                        inv2s_g[..., mu] * (
                            sig_hat[..., i] * (1.0 if j == mm else 0.0)
                            + sig_hat[..., j] * (1.0 if i == mm else 0.0)
                            - (1.0 if i == j else 0.0) * sig_hat[..., mm])
                        + inv2s * (
                            sig_hat_g[..., i, mu] * (1.0 if j == mm else 0.0)
                            + sig_hat_g[..., j, mu] * (1.0 if i == mm else 0.0)
                            - (1.0 if i == j else 0.0) * sig_hat_g[..., mm, mu])
                    )
                delta_ij = 1.0 if i == j else 0.0
                dgam[..., mu, i, j, 2] = -delta_ij * (
                    lam_full_g[..., mu] * sig_r * (B - beta)
                    + lam * sig_r_g[..., mu] * (B - beta)
                    - lam * sig_r * beta_g[..., mu]
                )
                dgam[..., mu, i, j, 3] = (
                    -0.5 * _EPS[i, j] * lam_full_g[..., mu]
                    - delta_ij * (lam_full_g[..., mu] * sig_r + lam * sig_r_g[..., mu])
                )

        for i in range(2):
            for mm in range(2):
                delta_im = 1.0 if i == mm else 0.0
                d_mix = (_JMAT[i, mm] * inv4s_g[..., mu]
                         + delta_im * (sig_r_g[..., mu] * inv2s + sig_r * inv2s_g[..., mu]))
                dgam[..., mu, i, 2, mm] = dgam[..., mu, 2, i, mm] = d_mix
                dgam[..., mu, i, 3, mm] = dgam[..., mu, 3, i, mm] = (
                    _JMAT[i, mm] * (beta_g[..., mu] * inv4s + beta * inv4s_g[..., mu])
                    + B * delta_im * (sig_r_g[..., mu] * inv2s + sig_r * inv2s_g[..., mu])
                )
            dgam[..., mu, i, 3, 2] = dgam[..., mu, 3, i, 2] = 0.5 * (
                beta_i_g[..., i, mu]
                + B * (jphi_g[..., i, mu] * beta_r + jphi[..., i] * beta_r_g[..., mu])
            )

        dgam[..., mu, 2, 3, 2] = dgam[..., mu, 3, 2, 2] = 0.5 * beta_r_g[..., mu]
        for mm in range(2):
            dgam[..., mu, 3, 3, mm] = -(
                beta_hat_g[..., mm, mu] * inv4s / lam
                + beta_hat[..., mm] * inv4s_g[..., mu] / lam
                - beta_hat[..., mm] * inv4s * lam_full_g[..., mu] / lam**2
            )
        dgam[..., mu, 3, 3, 2] = 0.5 * (beta_r_g[..., mu] * (B + beta) + beta_r * beta_g[..., mu])
        dgam[..., mu, 3, 3, 3] = -0.5 * beta_r_g[..., mu]
    return dgam


def christoffel_closed(cfg: MetricConfig, pt, beta_scale=1.0, k1=0.0,
                       beta_detune=1.0) -> ChristoffelSet:
    """Closed-form Christoffels in the adapted frame (E1_hat, E2_hat, p_o, q_o)."""
    pt = np.asarray(pt, dtype=float)
    data = _frame_data(cfg, pt[..., 0], pt[..., 1], pt[..., 3], beta_scale, k1, beta_detune)
    return ChristoffelSet(gamma=_gamma_hat(data), basis="adapted-frame")


def riemann_frame(cfg: MetricConfig, pt, h=1e-4, derivative="analytic",
                  beta_scale=1.0, k1=0.0, beta_detune=1.0) -> CurvatureReport:
    """Adapted-frame curvature from the closed-form Christoffel table.

    Frame derivatives of the table are taken analytically by default; the
    "fd" mode differentiates the table numerically with step `h` instead
    (a cross-check of the analytic gradient, not the preferred path).
    The non-commuting pair (E1_hat, E2_hat) picks up the frame-bracket
    correction omega_{12} * Gamma^D_{q_o C}.
    """
    pt = np.asarray(pt, dtype=float)
    x, y, r = pt[..., 0], pt[..., 1], pt[..., 3]
    data = _frame_data(cfg, x, y, r, beta_scale, k1, beta_detune)
    gam = _gamma_hat(data)
    if derivative == "analytic":
        dgam = _gamma_hat_gradient(data)
    elif derivative == "fd":
        dgam = np.zeros(np.shape(data["sigma"]) + (3, 4, 4, 4))
        coords = [0, 1, 3]
        for mu, axis in enumerate(coords):
            for off, w in zip(_OFFS, _W1):
                q = pt.copy()
                q[..., axis] += off * h
                d2 = _frame_data(cfg, q[..., 0], q[..., 1], q[..., 3], beta_scale, k1,
                                 beta_detune)
                dgam[..., mu, :, :, :] += w * _gamma_hat(d2)
            dgam[..., mu, :, :, :] /= h
    else:
        raise ValueError("derivative must be 'analytic' or 'fd'")

    B = cfg.B
    p1 = data["p1"]
    # frame directions as combinations of (d_x, d_y, d_r) acting on the table
    dirs = np.zeros(np.shape(data["sigma"]) + (4, 3))
    dirs[..., 0, 0] = 1.0
    dirs[..., 0, 2] = B * p1[..., 1]
    dirs[..., 1, 1] = 1.0
    dirs[..., 1, 2] = -B * p1[..., 0]
    dirs[..., 2, 2] = 1.0
    dirs[..., 3, 2] = B

    xg = np.einsum("...am,...mbcd->...abcd", dirs, dgam)
    riem = (xg - np.einsum("...bacd->...abcd", xg)
            - np.einsum("...acf,...bfd->...abcd", gam, gam)
            + np.einsum("...bcf,...afd->...abcd", gam, gam))
    # bracket correction for the surface pair: [Ei_hat, Ej_hat] = -omega_ij q_o
    lam = data["lam"]
    for i in range(2):
        for j in range(2):
            if i != j:
                riem[..., i, j, :, :] += lam[..., None, None] * _EPS[i, j] * gam[..., 3, :, :]
    ric = np.einsum("...cabc->...ab", riem)
    return CurvatureReport(
        riemann=riem,
        ricci=ric,
        ricci_norm=float(np.max(np.abs(ric))),
        riemann_norm=float(np.max(np.abs(riem))),
        kretschmann=None,
        basis="adapted-frame",
        fd_step=None if derivative == "analytic" else h,
    )


def frame_basis_matrix(cfg: MetricConfig, x, y):
    """Columns = adapted frame vectors in coordinate components (x, y, v, r)."""
    vals = cfg.potential.evaluate(x, y)
    B = cfg.B
    A = np.zeros(np.shape(vals.phi) + (4, 4))
    A[..., 0, 0] = 1.0
    A[..., 2, 0] = vals.phi_y
    A[..., 3, 0] = B * vals.phi_y
    A[..., 1, 1] = 1.0
    A[..., 2, 1] = -vals.phi_x
    A[..., 3, 1] = -B * vals.phi_x
    A[..., 3, 2] = 1.0
    A[..., 2, 3] = 1.0
    A[..., 3, 3] = B
    return A


def ricci_frame_from_coordinate(cfg: MetricConfig, pt, h=1e-3, richardson=True):
    """FD coordinate Ricci transported into the adapted frame at `pt`."""
    metric = family_metric_field(cfg)
    report = ricci_coordinate_fd(metric, pt, h, richardson=richardson)
    pt = np.asarray(pt, dtype=float)
    A = frame_basis_matrix(cfg, pt[..., 0], pt[..., 1])
    return np.einsum("...ma,...mn,...nb->...ab", A, report.ricci, A), report
