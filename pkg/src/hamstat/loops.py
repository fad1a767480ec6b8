"""Truncated twisted loops, their Iwasawa and Birkhoff factorizations, and
the holomorphic-potential correspondence.

Loops are stored as Fourier coefficients and manipulated pointwise on
uniform circle samples; conversions go through the FFT.  The group is the
semidirect product, so every factorization splits into a rotation-part
problem (handled by a commuting phase factor plus an SU(2)-type spectral
factorization in a 2x2 complex picture) and an explicit linear projection
for the translation part.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import EPS, ID4, L_I, LI_EPS_BAR, R_I, R_J, R_K, tau_rotation, tau_vector
from .errors import (BranchDetectionFailure, ConvergenceFailure, NotInBigCell,
                     OutsideBigCell, PathIntegrationFailure, SingularInput)
from .numerics import (coeff_exponents, gauss_legendre_01, loop_coeffs,
                       samples_from_coeffs, unit_lambdas)
from .weierstrass import TorusSpec, family_samples, holomorphic_angle

__all__ = [
    "TwistedLoop", "su2_iwasawa", "rotation_factor_split", "RotationSplit",
    "iwasawa", "birkhoff", "p_real_part", "q_minus", "q_plus",
    "SpecLift", "HolomorphicPotentialData", "potential_extract",
    "dpw_reconstruct", "ReconstructedLift",
]


# --- twisted loop container ---------------------------------------------

@dataclass
class TwistedLoop:
    """Finite Fourier loop with values in the (complexified) motion group.

    ``rot[j]`` and ``trans[j]`` are the coefficients of ``lam**ks[j]``.
    """

    ks: np.ndarray
    rot: np.ndarray
    trans: np.ndarray

    def __post_init__(self):
        self.ks = np.asarray(self.ks, dtype=int)
        self.rot = np.asarray(self.rot, dtype=complex)
        self.trans = np.asarray(self.trans, dtype=complex)
        order = np.argsort(self.ks)
        self.ks, self.rot, self.trans = self.ks[order], self.rot[order], self.trans[order]

    @classmethod
    def identity(cls) -> "TwistedLoop":
        return cls(np.array([0]), np.array([ID4], dtype=complex),
                   np.zeros((1, 4), dtype=complex))

    @property
    def degree(self) -> int:
        return int(np.max(np.abs(self.ks))) if len(self.ks) else 0

    def sample(self, m: int):
        """Rotation and translation samples at the m-th roots of unity."""
        if m < 2 * self.degree + 2:
            raise ValueError("sample count too small for the loop degree")
        rot_hat = np.zeros((m, 4, 4), dtype=complex)
        trans_hat = np.zeros((m, 4), dtype=complex)
        for k, r, t in zip(self.ks, self.rot, self.trans):
            rot_hat[k % m] += r
            trans_hat[k % m] += t
        return samples_from_coeffs(rot_hat), samples_from_coeffs(trans_hat)

    @classmethod
    def from_samples(cls, rot_samples, trans_samples, tol: float = 1e-12,
                     max_degree: int | None = None) -> "TwistedLoop":
        rot_hat = loop_coeffs(np.asarray(rot_samples, dtype=complex))
        trans_hat = loop_coeffs(np.asarray(trans_samples, dtype=complex))
        m = rot_hat.shape[0]
        ks = coeff_exponents(m)
        norms = (np.max(np.abs(rot_hat), axis=(1, 2))
                 + np.max(np.abs(trans_hat), axis=1))
        keep = norms > tol * max(norms.max(), 1e-300)
        if max_degree is not None:
            keep &= np.abs(ks) <= max_degree
        if not np.any(keep):
            keep[0] = True
        return cls(ks[keep], rot_hat[keep], trans_hat[keep])

    def value_at(self, lams):
        lams = np.asarray(lams, dtype=complex)
        powers = lams[..., None] ** self.ks
        rot = np.einsum("...k,kij->...ij", powers, self.rot)
        trans = np.einsum("...k,kj->...j", powers, self.trans)
        return rot, trans

    def compose(self, other: "TwistedLoop", m: int | None = None) -> "TwistedLoop":
        m = m or _pow2(2 * (self.degree + other.degree) + 4)
        r1, t1 = self.sample(m)
        r2, t2 = other.sample(m)
        return TwistedLoop.from_samples(
            r1 @ r2, np.einsum("mij,mj->mi", r1, t2) + t1)

    def inverse(self, m: int | None = None,
                max_degree: int | None = None) -> "TwistedLoop":
        m = m or _pow2(8 * self.degree + 16)
        r, t = self.sample(m)
        rinv = np.linalg.inv(r)
        return TwistedLoop.from_samples(
            rinv, -np.einsum("mij,mj->mi", rinv, t), max_degree=max_degree)

    def twist_residual(self) -> float:
        worst = 0.0
        for k, r, t in zip(self.ks, self.rot, self.trans):
            w = 1j ** int(k % 4)
            worst = max(worst,
                        float(np.max(np.abs(tau_rotation(r) - w * r))),
                        float(np.max(np.abs(tau_vector(t) - w * t))))
        return worst

    def reality_residual(self) -> float:
        idx = {int(k): j for j, k in enumerate(self.ks)}
        worst = 0.0
        for j, k in enumerate(self.ks):
            jm = idx.get(-int(k))
            rm = self.rot[jm] if jm is not None else np.zeros((4, 4))
            tm = self.trans[jm] if jm is not None else np.zeros(4)
            worst = max(worst,
                        float(np.max(np.abs(np.conj(self.rot[j]) - rm))),
                        float(np.max(np.abs(np.conj(self.trans[j]) - tm))))
        return worst

    def norm(self) -> float:
        return float(np.max(np.abs(self.rot)) + np.max(np.abs(self.trans)))

    # serialization: list of (k, rotation 4x4, translation 4) records
    def to_dict(self) -> dict:
        def c2(z):
            return [float(np.real(z)), float(np.imag(z))]

        return {"coefficients": [
            {"k": int(k),
             "rotation": [[c2(v) for v in row] for row in r],
             "translation": [c2(v) for v in t]}
            for k, r, t in zip(self.ks, self.rot, self.trans)]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "TwistedLoop":
        ks, rots, trs = [], [], []
        for rec in data["coefficients"]:
            ks.append(rec["k"])
            rots.append([[complex(v[0], v[1]) for v in row]
                         for row in rec["rotation"]])
            trs.append([complex(v[0], v[1]) for v in rec["translation"]])
        return cls(np.array(ks), np.array(rots), np.array(trs))

    @classmethod
    def from_json(cls, text: str) -> "TwistedLoop":
        return cls.from_dict(json.loads(text))


def _pow2(n: int) -> int:
    m = 1
    while m < n:
        m *= 2
    return m


# --- finite-dimensional Iwasawa (compact factor of SU(2)-type) -----------

def su2_iwasawa(g, tol: float = 1e-9):
    """Split g in the complexified SU(2)-type factor as (K real, B) with B
    stabilizing the positive ray through the isotropic vector.

    The real factor is rebuilt from the image of that vector: its columns
    are determined by the frame the image spans.
    """
    g = np.asarray(g, dtype=complex)
    xi = g @ EPS
    cols = [2.0 * xi.real, 2.0 * (L_I @ xi).real, -2.0 * xi.imag,
            -2.0 * (L_I @ xi).imag]
    h = np.stack(cols, axis=1)
    norms = np.linalg.norm(h, axis=0)
    r = norms[0]
    if r < tol:
        raise SingularInput("group element maps the ray vector to ~0")
    if np.max(np.abs(norms - r)) > tol * max(1.0, r):
        raise SingularInput("input is not in the complexified compact factor")
    k = h / r
    b = k.T @ g
    return k, b


# --- commuting-phase split of the rotation part ---------------------------

_SPLIT_BASIS = [ID4, R_I, R_J, R_K]


def _phase_coeffs(samples):
    """(p1, p2) with sample = (p1 Id + p2 L_i) . (G0-span factor)."""
    out = np.empty(samples.shape[:-2] + (2, 4), dtype=complex)
    for a, la in enumerate((ID4, L_I)):
        for b, rb in enumerate(_SPLIT_BASIS):
            e = la @ rb
            out[..., a, b] = np.einsum("...ij,ij->...", samples, e) / 4.0
    return out


@dataclass
class RotationSplit:
    branch: str                  # "i" or "ii"
    k: np.ndarray                # raw phase-factor samples, k @ m = input
    m: np.ndarray
    k_twisted: np.ndarray        # tau-compatible factors (branch ii corrected)
    m_twisted: np.ndarray
    residual: float


def rotation_factor_split(rot_samples, tol: float = 1e-8) -> RotationSplit:
    """Split rotation-loop samples into a phase factor times a compact-type
    factor, with sign continuity around the circle and branch detection.
    """
    g = np.asarray(rot_samples, dtype=complex)
    m_count = g.shape[0]
    coeffs = _phase_coeffs(g)                       # (M, 2, 4)
    col = np.argmax(np.sum(np.abs(coeffs) ** 2, axis=1), axis=1)
    p = np.take_along_axis(coeffs, col[:, None, None], axis=2)[:, :, 0]
    nu = p[:, 0] ** 2 + p[:, 1] ** 2
    if np.min(np.abs(nu)) < 1e-14:
        raise SingularInput("rotation sample is singular (isotropic phase)")
    p = p / np.sqrt(nu)[:, None]
    # sign continuity sweep
    for j in range(1, m_count):
        if np.linalg.norm(p[j] + p[j - 1]) < np.linalg.norm(p[j] - p[j - 1]):
            p[j] = -p[j]
    k = p[:, 0, None, None] * ID4 + p[:, 1, None, None] * L_I
    kinv = p[:, 0, None, None] * ID4 - p[:, 1, None, None] * L_I
    m = kinv @ g
    if np.linalg.norm(p[0] + p[-1]) < np.linalg.norm(p[0] - p[-1]):
        raise BranchDetectionFailure("phase factor does not close up over the circle")
    residual = float(np.max(np.abs(k @ m - g)))

    # branch from the coefficient pattern of the phase factor
    khat = loop_coeffs(k)
    ks = coeff_exponents(m_count)
    p1 = np.einsum("mij,ij->m", khat, ID4) / 4.0
    p2 = np.einsum("mij,ij->m", khat, L_I) / 4.0
    mod4 = np.mod(ks, 4)
    odd = np.abs(ks) % 2 == 1
    if np.max(np.abs(p1[odd])) + np.max(np.abs(p2[odd])) > tol * (1 + np.max(np.abs(p1))):
        raise BranchDetectionFailure("phase factor has odd Fourier content")
    v_i = (np.sum(np.abs(p2[mod4 == 0]) ** 2) + np.sum(np.abs(p1[mod4 == 2]) ** 2))
    v_ii = (np.sum(np.abs(p1[mod4 == 0]) ** 2) + np.sum(np.abs(p2[mod4 == 2]) ** 2))
    total = v_i + v_ii
    if total < 1e-28 or v_i <= v_ii:
        branch = "i"
        k_tw, m_tw = k, m
        consistency = v_i
    else:
        branch = "ii"
        k_tw = -np.einsum("ij,mjk->mik", L_I, k)     # strip the L_i prefactor
        lams = unit_lambdas(m_count)
        c = 0.5 * (lams ** 2 + lams ** -2)
        s = (lams ** 2 - lams ** -2) / 2j
        pi0_inv = c[:, None, None] * ID4 - s[:, None, None] * R_I
        m_tw = pi0_inv @ m
        consistency = v_ii
    if consistency > tol ** 2 * max(total, 1.0):
        raise BranchDetectionFailure(
            f"no consistent twist branch (violations {v_i:.2e}/{v_ii:.2e})")
    return RotationSplit(branch, k, m, k_tw, m_tw, residual)


# --- spectral factorizations ---------------------------------------------

def _szego_scalar(w_samples, tol: float = 1e-12):
    """Scalar circle factorization w = u * b with |u| = 1 and b extending
    holomorphically into the disk, b(0) > 0 (classical log-splitting)."""
    w = np.asarray(w_samples, dtype=complex)
    m = len(w)
    mod2 = np.abs(w) ** 2
    if np.min(mod2) < 1e-28:
        raise SingularInput("phase-factor loop vanishes on the circle")
    chat = np.fft.fft(np.log(mod2)) / m
    placed = np.zeros(m, dtype=complex)
    placed[0] = 0.5 * chat[0]
    placed[1:m // 2] = chat[1:m // 2]
    b = np.exp(np.fft.ifft(placed) * m)
    u = w / b
    if np.max(np.abs(np.abs(u) - 1.0)) > 1e-8:
        raise ConvergenceFailure("scalar factor is not unimodular; "
                                 "loop may carry winding")
    return u, b


def _wilson_factor(j_samples, tol: float = 1e-13, max_iter: int = 60):
    """Canonical spectral factor of a Hermitian positive 2x2 loop:
    J = B* B with B holomorphic and invertible in the disk.

    Newton-type iteration on samples; quadratically convergent for strictly
    positive J.  Normalization of the constant unitary freedom is left to
    the caller.
    """
    j = np.asarray(j_samples, dtype=complex)
    m = j.shape[0]
    j0 = np.mean(j, axis=0)
    j0 = 0.5 * (j0 + j0.conj().T)
    low = np.linalg.cholesky(j0)
    b = np.broadcast_to(low.conj().T, j.shape).copy()
    eye = np.broadcast_to(np.eye(2), j.shape)
    for _ in range(max_iter):
        binv = np.linalg.inv(b)
        s = np.conj(np.swapaxes(binv, 1, 2)) @ j @ binv - eye
        err = float(np.max(np.abs(s)))
        shat = np.fft.fft(s, axis=0) / m
        that = np.zeros_like(shat)
        that[0] = 0.5 * shat[0]
        that[1:m // 2] = shat[1:m // 2]
        t = np.fft.ifft(that, axis=0) * m
        b = (eye + t) @ b
        bhat = np.fft.fft(b, axis=0) / m
        bhat[m // 2 + 1:] = 0.0
        b = np.fft.ifft(bhat, axis=0) * m
        if err < tol:
            break
    else:
        if err > 1e-9:
            raise ConvergenceFailure(f"spectral factorization stalled at {err:.2e}")
    return b


# quaternion-coordinate bridge between the 4x4 compact-type span and 2x2

def _quat_coords(samples):
    q = np.empty(samples.shape[:-2] + (4,), dtype=complex)
    q[..., 0] = np.einsum("...ii->...", samples) / 4.0
    for a, ra in enumerate((R_I, R_J, R_K), start=1):
        q[..., a] = -np.einsum("...ij,ij->...", samples, ra) / 4.0
    return q


def _quat_to_2x2(q):
    m = np.empty(q.shape[:-1] + (2, 2), dtype=complex)
    m[..., 0, 0] = q[..., 0] + 1j * q[..., 1]
    m[..., 1, 1] = q[..., 0] - 1j * q[..., 1]
    m[..., 0, 1] = q[..., 2] + 1j * q[..., 3]
    m[..., 1, 0] = -q[..., 2] + 1j * q[..., 3]
    return m


def _2x2_to_quat(m):
    q = np.empty(m.shape[:-2] + (4,), dtype=complex)
    q[..., 0] = 0.5 * (m[..., 0, 0] + m[..., 1, 1])
    q[..., 1] = -0.5j * (m[..., 0, 0] - m[..., 1, 1])
    q[..., 2] = 0.5 * (m[..., 0, 1] - m[..., 1, 0])
    q[..., 3] = -0.5j * (m[..., 0, 1] + m[..., 1, 0])
    return q


def _quat_to_4x4(q):
    return (q[..., 0, None, None] * ID4 - q[..., 1, None, None] * R_I
            - q[..., 2, None, None] * R_J - q[..., 3, None, None] * R_K)


def _g0_to_2x2(samples):
    return _quat_to_2x2(_quat_coords(samples))


def _2x2_to_g0(m):
    return _quat_to_4x4(_2x2_to_quat(m))


# --- translation projections ---------------------------------------------

def _split_neg(samples):
    """Strictly negative Fourier part of circle samples, as samples."""
    m = samples.shape[0]
    hat = np.fft.fft(samples, axis=0) / m
    hat[:m // 2 + 1] = 0.0            # keep exponents -1 .. -(m/2 - 1)
    return np.fft.ifft(hat, axis=0) * m


def p_real_part(trans_samples):
    """Projection of a twisted translation loop onto the real-form part,
    along the holomorphic half: twice the real part of the strictly
    negative-frequency half."""
    neg = _split_neg(trans_samples)
    return neg + np.conj(neg)


def q_minus(trans_samples):
    return _split_neg(trans_samples)


def q_plus(trans_samples):
    return trans_samples - _split_neg(trans_samples)


# --- Iwasawa factorization ------------------------------------------------

def iwasawa(loop: TwistedLoop, nsamples: int | None = None,
            tol: float = 1e-8) -> tuple[TwistedLoop, TwistedLoop]:
    """Split a complexified twisted loop as (real twisted) . (positive).

    The rotation part follows the constructive route: commuting-phase /
    compact-type split, scalar log-factorization of the phase, spectral
    factorization of the compact part in the 2x2 picture, and a constant
    finite-dimensional correction pinning the positive factor's value at 0
    to the ray stabilizer.  The translation part is the explicit projection
    ``X = F . P(F^{-1} T)``.
    """
    m = nsamples or _pow2(max(64, 8 * loop.degree))
    rot, trans = loop.sample(m)
    lams = unit_lambdas(m)

    split = rotation_factor_split(rot)
    u_sc, b_sc = _szego_scalar(_phase_w(split.k_twisted))
    psi = u_sc.real[:, None, None] * ID4 + u_sc.imag[:, None, None] * L_I
    gamma = (0.5 * (b_sc + 1.0 / b_sc)[:, None, None] * ID4
             + (b_sc - 1.0 / b_sc)[:, None, None] / 2j * L_I)

    m2 = _g0_to_2x2(split.m_twisted)
    j2 = np.conj(np.swapaxes(m2, 1, 2)) @ m2
    b2 = _wilson_factor(j2)
    u2 = m2 @ np.linalg.inv(b2)
    phi = _2x2_to_g0(u2)
    beta = _2x2_to_g0(b2)

    f_rot = psi @ phi
    if split.branch == "ii":
        c = 0.5 * (lams ** 2 + lams ** -2)
        s = (lams ** 2 - lams ** -2) / 2j
        pi_lam = np.einsum("ij,mjk->mik", L_I,
                           c[:, None, None] * ID4 + s[:, None, None] * R_I)
        f_rot = pi_lam @ f_rot
    b_rot = gamma @ beta

    # pin B(0) into the ray stabilizer by a constant compact correction
    b0_val = np.mean(b_rot, axis=0)     # holomorphic: value at 0 = mean
    k0, _ = su2_iwasawa(b0_val)
    f_rot = f_rot @ k0
    b_rot = np.einsum("ij,mjk->mik", k0.T, b_rot)

    if np.max(np.abs(f_rot.imag)) > 1e-6:
        raise ConvergenceFailure("real factor has imaginary residue")
    f_real = f_rot.real
    v = np.einsum("mji,mj->mi", f_real, trans)      # F^{-1} = F^T pointwise
    x = p_real_part(v)
    b_tr = v - _split_neg(v) - np.conj(_split_neg(v))

    u_loop = TwistedLoop.from_samples(
        f_real.astype(complex), np.einsum("mij,mj->mi", f_real, x))
    b_loop = TwistedLoop.from_samples(b_rot, b_tr)

    ur, ut = u_loop.sample(m)
    br, bt = b_loop.sample(m)
    recon_r = ur @ br
    recon_t = np.einsum("mij,mj->mi", ur, bt) + ut
    resid = max(float(np.max(np.abs(recon_r - rot))),
                float(np.max(np.abs(recon_t - trans))))
    scale = max(1.0, loop.norm())
    if resid > tol * scale:
        raise ConvergenceFailure(f"factorization residual {resid:.3e} "
                                 f"exceeds tolerance {tol:.1e}")
    return u_loop, b_loop


def _phase_w(k_samples):
    """Scalar coordinate w = p1 + i p2 of a phase-factor sample batch."""
    p1 = np.einsum("mij,ij->m", k_samples, ID4) / 4.0
    p2 = np.einsum("mij,ij->m", k_samples, L_I) / 4.0
    return p1 + 1j * p2


# --- Birkhoff factorization -----------------------------------------------

def birkhoff(loop: TwistedLoop, neg_degree: int | None = None,
             nsamples: int | None = None, cond_threshold: float = 1e10,
             tol: float = 1e-8) -> tuple[TwistedLoop, TwistedLoop]:
    """Split a twisted loop as (negative, = Id at infinity) . (positive).

    The rotation part solves the block Toeplitz system for the negative
    factor's coefficients; a condition number beyond the threshold signals
    the complement of the big cell.  Translations use the +-frequency
    projections of the conjugated translation loop.
    """
    n = neg_degree or max(16, 2 * loop.degree)
    m = nsamples or _pow2(max(64, 8 * loop.degree, 4 * n))
    rot, trans = loop.sample(m)
    sinv = np.linalg.inv(rot)
    shat = loop_coeffs(sinv)

    def s_at(k):
        return shat[k % m]

    rows = n + 8
    big = np.zeros((4 * rows, 4 * n), dtype=complex)
    rhs = np.zeros((4 * rows, 4), dtype=complex)
    for i, k in enumerate(range(-1, -rows - 1, -1)):
        rhs[4 * i:4 * i + 4] = -s_at(k)
        for j, kn in enumerate(range(-1, -n - 1, -1)):
            big[4 * i:4 * i + 4, 4 * j:4 * j + 4] = s_at(k - kn)
    cond = np.linalg.cond(big.conj().T @ big) ** 0.5
    if not np.isfinite(cond) or cond > cond_threshold:
        raise OutsideBigCell(f"negative-factor system condition {cond:.3e}")
    sol, *_ = np.linalg.lstsq(big, rhs, rcond=None)

    ks_neg = np.arange(-1, -n - 1, -1)
    rot_neg_coeffs = np.concatenate(
        [np.array([ID4], dtype=complex), sol.reshape(n, 4, 4)])
    gm_rot_loop = TwistedLoop(np.concatenate([[0], ks_neg]),
                              rot_neg_coeffs, np.zeros((n + 1, 4), dtype=complex))
    gm_rot, _ = gm_rot_loop.sample(m)
    gp_rot = np.linalg.inv(gm_rot) @ rot

    # positive factor must be holomorphic: measure the negative leakage
    gp_hat = loop_coeffs(gp_rot)
    negs = coeff_exponents(m) < 0
    leak = float(np.max(np.abs(gp_hat[negs]))) if np.any(negs) else 0.0
    if leak > max(tol, 1e-7) * max(1.0, loop.norm()):
        raise OutsideBigCell(f"positive factor leaks negative modes ({leak:.2e})")

    v = np.einsum("mij,mj->mi", np.linalg.inv(gm_rot), trans)
    t_plus = q_plus(v)
    t_minus = np.einsum("mij,mj->mi", gm_rot, q_minus(v))
    g_minus = TwistedLoop.from_samples(gm_rot, t_minus)
    g_plus = TwistedLoop.from_samples(gp_rot, t_plus)
    return g_minus, g_plus


# --- lifts and the potential correspondence -------------------------------

class SpecLift:
    """Extended lift of a torus spec: the pure-phase rotation factor and the
    circle family of immersions, sampled on the loop parameter."""

    def __init__(self, spec: TorusSpec):
        self.spec = spec
        self.lattice = spec.lattice
        self.h_fn = holomorphic_angle(spec.beta0)
        self.dh = lambda z: np.full(np.shape(z), self.h_fn.derivative,
                                    dtype=complex)

    def samples(self, z, m: int):
        """(F, X) on the m-th roots of unity; shapes (..., m, 4, 4)/(..., m, 4).

        Normalized as an extended lift: the value at the basepoint is the
        identity, so the family is shifted to vanish at z = 0.
        """
        z = np.asarray(z, dtype=complex)
        lams = unit_lambdas(m)
        h = self.h_fn(z)
        phase = 0.5 * (h[..., None] / lams ** 2 + np.conj(h)[..., None] * lams ** 2)
        f = (np.cos(phase)[..., None, None] * ID4
             + np.sin(phase)[..., None, None] * L_I)
        x = family_samples(self.spec, z, lams, basepoint_zero=True)
        return f, x


@dataclass
class HolomorphicPotentialData:
    """Weierstrass-type data: the holomorphic half-angle h (with dh = 2c)
    and the two holomorphic spinor components a, b."""

    h: Callable
    dh: Callable
    a: Callable
    b: Callable
    z0: complex = 0.0

    def c(self, z):
        return 0.5 * np.asarray(self.dh(z))

    @classmethod
    def constant(cls, c: complex, a: complex, b: complex) -> "HolomorphicPotentialData":
        c, a, b = complex(c), complex(a), complex(b)
        pot = cls(h=lambda z: 2.0 * c * np.asarray(z, dtype=complex),
                  dh=lambda z: np.full(np.shape(z), 2.0 * c, dtype=complex),
                  a=lambda z: np.full(np.shape(z), a, dtype=complex),
                  b=lambda z: np.full(np.shape(z), b, dtype=complex))
        pot._constants = (c, a, b)
        return pot

    def to_dict(self) -> dict:
        """JSON form; only structured (constant) potentials serialize."""
        if not hasattr(self, "_constants"):
            raise TypeError("only constant potentials have a JSON form; "
                            "extraction-backed data is callable-only")
        c, a, b = self._constants
        return {"c": [c.real, c.imag], "a": [a.real, a.imag],
                "b": [b.real, b.imag]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "HolomorphicPotentialData":
        return cls.constant(complex(*data["c"]), complex(*data["a"]),
                            complex(*data["b"]))

    @classmethod
    def from_json(cls, text: str) -> "HolomorphicPotentialData":
        return cls.from_dict(json.loads(text))


def _lift_w_coeff(lift, z, m: int):
    """Loop Fourier coefficients of e^{-lam^-2 h L_i / 2} X_lam over z."""
    z = np.asarray(z, dtype=complex)
    _, x = lift.samples(z, m)
    lams = unit_lambdas(m)
    h = lift.h_fn(z)
    w = -0.5 * h[..., None] / lams ** 2
    rot = (np.cos(w)[..., None, None] * ID4 + np.sin(w)[..., None, None] * L_I)
    v = np.einsum("...mij,...mj->...mi", rot, x.astype(complex))
    vhat = np.fft.fft(v, axis=-2) / m
    return vhat


def potential_extract(lift, fd_step: float | None = None, nsamples: int = 64,
                      offband_tol: float = 1e-4, taylor_radius: float | None = None,
                      taylor_n: int = 256):
    """Recover the meromorphic potential data of an extended lift.

    The negative Birkhoff factor of the lift is explicit: its rotation part
    is the exponential of the holomorphic half-angle, and its translation
    part is the strictly negative frequency half of the conjugated family.
    The potential's spinor components are read off the exponent -1
    coefficient of the z-derivative of that half; off-band energy flags
    points outside the big cell.

    With ``taylor_radius`` set, a and b are resampled once on a circle of
    that radius and served from the Taylor interpolant (valid while the
    coefficients decay, i.e. while no pole enters the circle).
    """
    if not hasattr(lift, "h_fn"):
        raise TypeError("lift must expose the holomorphic half-angle h_fn")
    h_step = fd_step or 1e-5 * lift.lattice.diameter()
    m = nsamples
    exps = coeff_exponents(m)
    slot_m1 = int(np.where(exps == -1)[0][0])

    def ab(z):
        z = np.asarray(z, dtype=complex)
        stencil = np.stack([z, z + h_step, z - h_step, z + 1j * h_step,
                            z - 1j * h_step], axis=0)
        vhat = _lift_w_coeff(lift, stencil, m)
        neg = vhat.copy()
        neg[..., exps >= 0, :] = 0.0
        dx = 0.5 * (neg[1] - neg[2]) / h_step
        dy = 0.5 * (neg[3] - neg[4]) / h_step
        dzw = 0.5 * (dx - 1j * dy)
        dzbw = 0.5 * (dx + 1j * dy)
        # translation part of the potential: (lam^-2 h'/2) L_i W + dz W has a
        # single band at exponent -1 when the lift factorizes
        hp = np.asarray(lift.dh(z), dtype=complex)
        li_w = neg[0] @ L_I.T
        shifted = np.roll(li_w, -2, axis=-2)        # multiply by lam^-2
        d_full = 0.5 * hp[..., None, None] * shifted + dzw
        coeff = d_full[..., slot_m1, :]
        mask = exps < 0
        mask[slot_m1] = False
        off = np.max(np.abs(d_full[..., mask, :]), axis=(-2, -1))
        offbar = np.max(np.abs(dzbw[..., exps < 0, :]), axis=(-2, -1))
        scale = np.maximum(np.abs(coeff).max(axis=-1), 1e-30)
        bad = (off + offbar) / scale
        a = 2.0 * coeff[..., 0]
        b = 2.0 * coeff[..., 1]
        return a, b, bad

    def a_fn(z):
        return ab(z)[0]

    def b_fn(z):
        return ab(z)[1]

    def diagnostics(z):
        return ab(z)[2]

    def a_checked(z):
        a, _, bad = ab(z)
        if np.max(bad) > offband_tol:
            raise NotInBigCell(f"off-band residual {np.max(bad):.2e} at z")
        return a

    if taylor_radius is not None:
        ring = taylor_radius * np.exp(2j * np.pi * np.arange(taylor_n) / taylor_n)
        a_ring, b_ring, _ = ab(ring)
        a_fn = _taylor_interpolant(a_ring, taylor_radius)
        b_fn = _taylor_interpolant(b_ring, taylor_radius)

    data = HolomorphicPotentialData(h=lift.h_fn,
                                    dh=getattr(lift, "dh"),
                                    a=a_fn, b=b_fn)
    data.diagnostics = diagnostics
    data.a_checked = a_checked
    return data


def _taylor_interpolant(ring_values, radius):
    """Taylor series of a holomorphic function from samples on |z| = radius.

    Raises :class:`NotInBigCell` when the coefficients fail to decay, which
    signals a pole inside the sampling circle.
    """
    coeffs = np.fft.fft(ring_values) / len(ring_values)   # c_n * radius**n
    n = len(coeffs)
    head = np.max(np.abs(coeffs[:n // 8])) + 1e-300
    tail = np.max(np.abs(coeffs[-n // 8:]))
    if tail > 1e-6 * head:
        raise NotInBigCell("potential data is not analytic on the sampling "
                           f"disk (coefficient tail ratio {tail / head:.2e})")

    def evaluate(z):
        w = np.asarray(z, dtype=complex) / radius
        return np.polynomial.polynomial.polyval(w, coeffs)

    return evaluate


# --- reconstruction --------------------------------------------------------

class ReconstructedLift:
    """Lift rebuilt from potential data by integrating the holomorphic frame
    and projecting onto the real form."""

    def __init__(self, pot: HolomorphicPotentialData, nsamples: int = 64,
                 quad_n: int = 32, quad_tol: float = 1e-10,
                 max_depth: int = 10, lattice=None):
        self.pot = pot
        self.m = nsamples
        self.quad_n = quad_n
        self.quad_tol = quad_tol
        self.max_depth = max_depth
        self.lattice = lattice
        self.h_fn = pot.h
        self.dh = pot.dh

    def _integrand(self, v, lams):
        """e^{lam^-2 h(v) L_i / 2} lam^-1 (a eps + b L_i eps_bar), batched."""
        h = np.asarray(self.pot.h(v), dtype=complex)
        a = np.asarray(self.pot.a(v), dtype=complex)
        b = np.asarray(self.pot.b(v), dtype=complex)
        w = 0.5 * h[..., None] / lams ** 2
        spin = a[..., None, None] * EPS + b[..., None, None] * LI_EPS_BAR
        cosw = np.cos(w)[..., None]
        sinw = np.sin(w)[..., None]
        val = cosw * spin + sinw * (spin @ L_I.T)
        return val / lams[..., None]

    def _rule(self, z_from, shift, n):
        nodes, weights = gauss_legendre_01(n)
        lams = unit_lambdas(self.m)
        acc = np.zeros(np.shape(z_from) + (self.m, 4), dtype=complex)
        for t, w in zip(nodes, weights):
            acc += w * self._integrand(z_from + shift * t, lams)
        return acc * np.asarray(shift, dtype=complex)[..., None, None]

    def eta(self, z):
        """Path integral of the potential's translation part along the
        straight segment 0 -> z, with adaptive bisection."""
        z = np.asarray(z, dtype=complex)
        return self._piece(np.zeros_like(z), z, 0)

    def _piece(self, z_from, z_to, depth):
        shift = z_to - z_from
        fine = self._rule(z_from, shift, 2 * self.quad_n)
        coarse = self._rule(z_from, shift, self.quad_n)
        if float(np.max(np.abs(fine - coarse))) <= self.quad_tol:
            return fine
        if depth >= self.max_depth:
            raise PathIntegrationFailure("adaptive quadrature depth exhausted")
        mid = z_from + 0.5 * shift
        return (self._piece(z_from, mid, depth + 1)
                + self._piece(mid, z_to, depth + 1))

    def samples(self, z, m: int | None = None):
        """(F, X) samples of the reconstructed lift at z."""
        if m is not None and m != self.m:
            raise ValueError("sample count fixed at construction")
        m = self.m
        z = np.asarray(z, dtype=complex)
        lams = unit_lambdas(m)
        h = np.asarray(self.pot.h(z), dtype=complex)
        phase = 0.5 * (h[..., None] / lams ** 2 + np.conj(h)[..., None] * lams ** 2)
        f = (np.cos(phase)[..., None, None] * ID4
             + np.sin(phase)[..., None, None] * L_I)
        eta = self.eta(z)
        w = np.einsum("...mji,...mj->...mi", f, eta.astype(complex))
        # project onto the real translation form along the holomorphic half
        what = np.fft.fft(w, axis=-2) / m
        exps = coeff_exponents(m)
        what[..., exps >= 0, :] = 0.0
        neg = np.fft.ifft(what, axis=-2) * m
        x = neg + np.conj(neg)
        if np.max(np.abs(x.imag)) > 1e-9 * max(1.0, np.max(np.abs(x.real))):
            raise ArithmeticError("projected immersion has imaginary residue")
        x = x.real
        return f, np.einsum("...mij,...mj->...mi", f, x.astype(complex)).real

    def immersion(self, z):
        """The lam = 1 member of the reconstructed family."""
        _, x = self.samples(z)
        return x[..., 0, :]


def dpw_reconstruct(pot: HolomorphicPotentialData, z=None, nsamples: int = 64,
                    quad_n: int = 32, quad_tol: float = 1e-10, lattice=None):
    """Build the reconstructed lift; with ``z`` given returns (F, X) samples."""
    lift = ReconstructedLift(pot, nsamples=nsamples, quad_n=quad_n,
                             quad_tol=quad_tol, lattice=lattice)
    if z is None:
        return lift
    return lift.samples(z)
