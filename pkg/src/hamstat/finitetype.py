"""Polynomial Killing fields and their commuting flows.

A Killing field of degree d (d = 2 mod 4) is a real twisted polynomial loop
of algebra values; its lowest coefficient is a constant phase generator and
the flow equation moves the remaining coefficients by bracketing against the
projected connection.  The module integrates the flow, projects the
connection, runs the scalar Fourier recurrences along the coefficient chain,
and builds the polynomial frequency condition those recurrences close on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .algebra import EPS, L_I, R_I, R_J, R_K, tau_rotation, tau_vector
from .errors import StepSizeUnderflow
from .numerics import dot_r2
from .tori import rhombic_torus, standard_torus
from .weierstrass import TorusSpec, _u_modes

__all__ = [
    "KillingField", "r_op", "pi_g0", "b0_basis", "lax_project",
    "lax_integrate", "flow_field", "LaxFlowResult",
    "formal_killing", "zeta_coefficients", "fourier_recurrence",
    "polynomial_condition", "standard_torus_killing_seed",
    "rhombic_killing_seed", "KillingSeed",
]


# --- ray-stabilizer splitting of the compact complexified algebra ---------

_G0_BASIS = (R_I, R_J, R_K)


def _g0c_coords(zeta) -> np.ndarray:
    """Real 6-vector (Re b1, Im b1, ...) of zeta = sum b_a R_a."""
    zeta = np.asarray(zeta, dtype=complex)
    b = [np.trace(r.T @ zeta) / 4.0 for r in _G0_BASIS]
    return np.array([f(v) for v in b for f in (np.real, np.imag)])


def _g0c_from_coords(c) -> np.ndarray:
    out = np.zeros((4, 4), dtype=complex)
    for a, r in enumerate(_G0_BASIS):
        out = out + complex(c[2 * a], c[2 * a + 1]) * r
    return out


_B0_CACHE: dict = {}


def b0_basis() -> np.ndarray:
    """Real basis (3 x 4 x 4 complex) of the ray-stabilizer subalgebra,
    computed as the nullspace of the linear condition zeta.eps in R.eps."""
    if "basis" not in _B0_CACHE:
        rows = []
        # real-linear map R^6 -> C^4 ~ R^8, then strike the R*eps direction
        cols = []
        for j in range(6):
            c = np.zeros(6)
            c[j] = 1.0
            v = _g0c_from_coords(c) @ EPS
            cols.append(np.concatenate([v.real, v.imag]))
        a_mat = np.stack(cols, axis=1)              # 8 x 6
        ray = np.concatenate([EPS.real, EPS.imag])
        ray = ray / np.linalg.norm(ray)
        proj = np.eye(8) - np.outer(ray, ray)
        system = proj @ a_mat
        _, s, vt = np.linalg.svd(system)
        null = vt[np.sum(s > 1e-10):]
        if null.shape[0] != 3:
            raise RuntimeError("ray-stabilizer subalgebra has unexpected rank")
        basis = np.stack([_g0c_from_coords(c) for c in null])
        coords = np.stack([_g0c_coords(b) for b in
                           list(_G0_BASIS) + list(basis)], axis=1)
        _B0_CACHE["basis"] = basis
        _B0_CACHE["solve"] = np.linalg.inv(coords)
    return _B0_CACHE["basis"]


def pi_g0(zeta) -> np.ndarray:
    """Projection of a complexified compact-type element onto the real part
    along the ray-stabilizer subalgebra."""
    b0_basis()
    c = _B0_CACHE["solve"] @ _g0c_coords(zeta)
    out = np.zeros((4, 4), dtype=complex)
    for a, r in enumerate(_G0_BASIS):
        out = out + c[a] * r
    return out


def r_op(zeta) -> np.ndarray:
    """(pi(zeta) - i pi(i zeta)) / 2: the dz-component of the projected form."""
    zeta = np.asarray(zeta, dtype=complex)
    return 0.5 * (pi_g0(zeta) - 1j * pi_g0(1j * zeta))


# --- Killing fields ---------------------------------------------------------

@dataclass
class KillingField:
    """Real twisted polynomial loop of algebra values, exponents -d..d."""

    d: int
    rot: np.ndarray          # (2d+1, 4, 4)
    trans: np.ndarray        # (2d+1, 4)

    def __post_init__(self):
        self.rot = np.asarray(self.rot, dtype=complex)
        self.trans = np.asarray(self.trans, dtype=complex)
        if self.rot.shape[0] != 2 * self.d + 1:
            raise ValueError("coefficient count must be 2d + 1")

    def copy(self) -> "KillingField":
        return KillingField(self.d, self.rot.copy(), self.trans.copy())

    def coeff(self, k: int):
        return self.rot[k + self.d], self.trans[k + self.d]

    def set_coeff(self, k: int, rot, trans):
        self.rot[k + self.d] = rot
        self.trans[k + self.d] = trans

    def twist_residual(self) -> float:
        worst = 0.0
        for k in range(-self.d, self.d + 1):
            r, t = self.coeff(k)
            w = 1j ** (k % 4)
            worst = max(worst, float(np.max(np.abs(tau_rotation(r) - w * r))),
                        float(np.max(np.abs(tau_vector(t) - w * t))))
        return worst

    def reality_residual(self) -> float:
        worst = 0.0
        for k in range(0, self.d + 1):
            rp, tp = self.coeff(k)
            rm, tm = self.coeff(-k)
            worst = max(worst, float(np.max(np.abs(np.conj(rp) - rm))),
                        float(np.max(np.abs(np.conj(tp) - tm))))
        return worst

    def norm(self) -> float:
        return float(np.max(np.abs(self.rot)) + np.max(np.abs(self.trans)))

    def value_at(self, lams):
        lams = np.asarray(lams, dtype=complex)
        ks = np.arange(-self.d, self.d + 1)
        powers = lams[..., None] ** ks
        rot = np.einsum("...k,kij->...ij", powers, self.rot)
        trans = np.einsum("...k,kj->...j", powers, self.trans)
        return rot, trans

    def matrix5_at(self, lams):
        rot, trans = self.value_at(lams)
        m5 = np.zeros(rot.shape[:-2] + (5, 5), dtype=complex)
        m5[..., :4, :4] = rot
        m5[..., :4, 4] = trans
        return m5

    def to_dict(self) -> dict:
        def c2(z):
            return [float(np.real(z)), float(np.imag(z))]

        return {"degree": self.d, "coefficients": [
            {"k": int(k - self.d),
             "rotation": [[c2(v) for v in row] for row in self.rot[k]],
             "translation": [c2(v) for v in self.trans[k]]}
            for k in range(2 * self.d + 1)]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "KillingField":
        d = int(data["degree"])
        rot = np.zeros((2 * d + 1, 4, 4), dtype=complex)
        trans = np.zeros((2 * d + 1, 4), dtype=complex)
        for rec in data["coefficients"]:
            j = int(rec["k"]) + d
            rot[j] = [[complex(v[0], v[1]) for v in row]
                      for row in rec["rotation"]]
            trans[j] = [complex(v[0], v[1]) for v in rec["translation"]]
        return cls(d, rot, trans)

    @classmethod
    def from_json(cls, text: str) -> "KillingField":
        return cls.from_dict(json.loads(text))


def lax_project(xi: KillingField):
    """Coefficients of the projected connection: the dz side is
    lam^-2 xi_{-d} + lam^-1 xi_{-d+1} + r(xi_{-d+2}); the dzbar side is the
    conjugate string at lam^0..lam^2."""
    r_m2, t_m2 = xi.coeff(-xi.d)
    r_m1, t_m1 = xi.coeff(-xi.d + 1)
    r_0, _ = xi.coeff(-xi.d + 2)
    r0 = r_op(r_0)
    return {
        -2: (r_m2, t_m2),
        -1: (r_m1, t_m1),
        0: (r0, np.zeros(4, dtype=complex)),
    }


def _multiplier_arrays(xi: KillingField, zdot: complex):
    """Combined bracket multiplier zdot*M + conj(zdot)*Mbar, exponents -2..2."""
    proj = lax_project(xi)
    ks = np.arange(-2, 3)
    rot = np.zeros((5, 4, 4), dtype=complex)
    trans = np.zeros((5, 4), dtype=complex)
    for k in (-2, -1, 0):
        r, t = proj[k]
        rot[k + 2] += zdot * r
        trans[k + 2] += zdot * t
        rot[-k + 2] += np.conj(zdot) * np.conj(r)
        trans[-k + 2] += np.conj(zdot) * np.conj(t)
    return ks, rot, trans


def _lax_derivative(xi: KillingField, zdot: complex, pad_report: list):
    ks, mrot, mtrans = _multiplier_arrays(xi, zdot)
    d = xi.d
    out_rot = np.zeros((2 * d + 5, 4, 4), dtype=complex)
    out_trans = np.zeros((2 * d + 5, 4), dtype=complex)
    for j, k2 in enumerate(ks):
        # bracket of every xi coefficient with multiplier mode k2
        rr = xi.rot @ mrot[j] - mrot[j] @ xi.rot
        tt = (np.einsum("kij,j->ki", xi.rot, mtrans[j])
              - np.einsum("ij,kj->ki", mrot[j], xi.trans))
        sl = slice(k2 + 2, k2 + 2 + 2 * d + 1)
        out_rot[sl] += rr
        out_trans[sl] += tt
    spill = max(np.max(np.abs(out_rot[:2])), np.max(np.abs(out_rot[-2:])),
                np.max(np.abs(out_trans[:2])), np.max(np.abs(out_trans[-2:])))
    pad_report.append(float(spill))
    return KillingField(d, out_rot[2:-2], out_trans[2:-2])


def _axpy(x: KillingField, c: float, y: KillingField) -> KillingField:
    return KillingField(x.d, x.rot + c * y.rot, x.trans + c * y.trans)


def flow_field(xi0: KillingField, z_from: complex, z_to: complex,
               step: float, diagnostics: list | None = None) -> KillingField:
    """RK4 integration of the Lax flow along the straight segment."""
    seg = complex(z_to) - complex(z_from)
    length = abs(seg)
    if length == 0:
        return xi0.copy()
    nsteps = max(1, int(np.ceil(length / step)))
    h = length / nsteps
    if h < 1e-14 * max(1.0, abs(z_to)):
        raise StepSizeUnderflow(f"step {h:.3e} below representable resolution")
    direction = seg / length
    pad = diagnostics if diagnostics is not None else []
    xi = xi0.copy()
    for _ in range(nsteps):
        k1 = _lax_derivative(xi, direction, pad)
        k2 = _lax_derivative(_axpy(xi, 0.5 * h, k1), direction, pad)
        k3 = _lax_derivative(_axpy(xi, 0.5 * h, k2), direction, pad)
        k4 = _lax_derivative(_axpy(xi, h, k3), direction, pad)
        xi = KillingField(
            xi.d,
            xi.rot + (h / 6.0) * (k1.rot + 2 * k2.rot + 2 * k3.rot + k4.rot),
            xi.trans + (h / 6.0) * (k1.trans + 2 * k2.trans + 2 * k3.trans + k4.trans))
    return xi


def _alpha_xy(xi: KillingField, lam: complex):
    """Connection values A(d/dx), A(d/dy) of the projected form at one point."""
    proj = lax_project(xi)
    rot_x = np.zeros((4, 4), dtype=complex)
    tr_x = np.zeros(4, dtype=complex)
    rot_y = np.zeros((4, 4), dtype=complex)
    tr_y = np.zeros(4, dtype=complex)
    for k in (-2, -1, 0):
        r, t = proj[k]
        lz = lam ** k
        lzb = np.conj(lz)             # lam^{-k} on the circle
        rot_x += lz * r + lzb * np.conj(r)
        tr_x += lz * t + lzb * np.conj(t)
        rot_y += 1j * (lz * r - lzb * np.conj(r))
        tr_y += 1j * (lz * t - lzb * np.conj(t))
    return (rot_x, tr_x), (rot_y, tr_y)


def lax_flatness_residual(xi_at_z: KillingField, lam: complex,
                          fd_step: float = 1e-4,
                          flow_step: float = 1e-5) -> float:
    """Curvature residual of the projected connection at one point, with the
    stencil fields produced by short flows from the given one."""
    def at(dz):
        return flow_field(xi_at_z, 0.0, dz, flow_step)

    h = fd_step
    (ax_r, ax_t), (ay_r, ay_t) = _alpha_xy(xi_at_z, lam)
    ayp_r, ayp_t = _alpha_xy(at(h), lam)[1]
    aym_r, aym_t = _alpha_xy(at(-h), lam)[1]
    axp_r, axp_t = _alpha_xy(at(1j * h), lam)[0]
    axm_r, axm_t = _alpha_xy(at(-1j * h), lam)[0]
    dx_ay_r = (ayp_r - aym_r) / (2 * h)
    dx_ay_t = (ayp_t - aym_t) / (2 * h)
    dy_ax_r = (axp_r - axm_r) / (2 * h)
    dy_ax_t = (axp_t - axm_t) / (2 * h)
    res_r = dx_ay_r - dy_ax_r + (ax_r @ ay_r - ay_r @ ax_r)
    res_t = dx_ay_t - dy_ax_t + (ax_r @ ay_t - ay_r @ ax_t)
    return float(max(np.max(np.abs(res_r)), np.max(np.abs(res_t))))


@dataclass
class LaxFlowResult:
    points: list
    fields: list
    max_spill: float

    def coefficient_drift(self, k: int) -> float:
        base_r, base_t = self.fields[0].coeff(k)
        worst = 0.0
        for f in self.fields:
            r, t = f.coeff(k)
            worst = max(worst, float(np.max(np.abs(r - base_r))),
                        float(np.max(np.abs(t - base_t))))
        return worst

    def even_coefficient_drift(self) -> float:
        d = self.fields[0].d
        return max(self.coefficient_drift(k)
                   for k in range(-d, d + 1) if k % 2 == 0)

    def isospectral_drift(self, n_lams: int = 8) -> float:
        lams = np.exp(2j * np.pi * (np.arange(n_lams) + 0.31) / n_lams)
        base = None
        worst = 0.0
        for f in self.fields:
            eigs = np.sort_complex(np.linalg.eigvals(f.matrix5_at(lams)))
            if base is None:
                base = eigs
            else:
                worst = max(worst, float(np.max(np.abs(eigs - base))))
        return worst


def lax_integrate(seed: KillingField, waypoints, step: float | None = None,
                  lattice=None) -> LaxFlowResult:
    """Flow the seed through a polyline of waypoints (starting at 0)."""
    if step is None:
        scale = lattice.diameter() if lattice is not None else 1.0
        step = scale / 2048.0
    diag: list = []
    points = [0.0 + 0.0j]
    fields = [seed.copy()]
    current = seed
    z_prev = 0.0 + 0.0j
    for z in waypoints:
        current = flow_field(current, z_prev, z, step, diag)
        points.append(complex(z))
        fields.append(current)
        z_prev = complex(z)
    return LaxFlowResult(points, fields, max(diag) if diag else 0.0)


# --- formal Killing series --------------------------------------------------

def _mode_dz(modes: dict) -> dict:
    """d/dz on a frequency-mode dictionary: multiply by i pi conj(delta)."""
    return {k: (delta, 1j * np.pi * np.conj(delta) * vec)
            for k, (delta, vec) in modes.items()}


def _mode_apply(matrix, modes: dict) -> dict:
    return {k: (delta, matrix @ vec) for k, (delta, vec) in modes.items()}


def _mode_add(m1: dict, m2: dict) -> dict:
    out = dict(m1)
    for k, (delta, vec) in m2.items():
        if k in out:
            out[k] = (out[k][0], out[k][1] + vec)
        else:
            out[k] = (delta, vec)
    return out


def _mode_scale(c, modes: dict) -> dict:
    return {k: (delta, c * vec) for k, (delta, vec) in modes.items()}


def mode_eval(modes: dict, z):
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape + (4,), dtype=complex)
    for delta, vec in modes.values():
        out += np.exp(2j * np.pi * dot_r2(delta, z))[..., None] * vec
    return out


def formal_killing(u_modes: dict, a: complex, n_coeffs: int = 24) -> list:
    """First coefficients of the adapted formal Killing series.

    ``u_modes`` maps rounded keys to (frequency, C^4 vector); the recurrence
    is w0 = a^-1 L_i u, w1 = -w0, w2 = a^-1 L_i dz w0 + a^-2 dz u (vanishing
    identically), then w_n = a^-1 L_i dz w_{n-2}.
    """
    if a == 0:
        raise ValueError("top coefficient must be nonzero")
    inv = 1.0 / complex(a)
    w0 = _mode_apply(inv * L_I, u_modes)
    w1 = _mode_scale(-1.0, w0)
    # a^-1 L_i dz(w0) + a^-2 dz(u) = a^-2 dz(L_i L_i u + u): grouped so the
    # exact cancellation L_i^2 = -Id survives floating point bitwise
    du = _mode_dz(u_modes)
    w2 = _mode_scale(inv * inv,
                     _mode_add(_mode_apply(L_I @ L_I, du), du))
    out = [w0, w1, w2]
    while len(out) < n_coeffs:
        out.append(_mode_apply(inv * L_I, _mode_dz(out[-2])))
    return out[:n_coeffs]


def zeta_coefficients(w_list: list, u_modes: dict, a: complex) -> list:
    """Translation parts of the adapted series: order 0 is u + a L_i w0
    (identically zero), order n >= 1 is a L_i w_n."""
    out = [_mode_add(u_modes, _mode_apply(complex(a) * L_I, w_list[0]))]
    for w in w_list[1:]:
        out.append(_mode_apply(complex(a) * L_I, w))
    return out


# --- scalar recurrences and the frequency polynomial ------------------------

def fourier_recurrence(beta0: complex, cs: dict, seeds: dict, p: int,
                       tol: float = 1e-9) -> dict:
    """Run the coefficient chain per frequency and evaluate the closure.

    ``cs`` maps q in -p..p-1 to the constant c_q; ``seeds`` maps each
    frequency gamma (with |gamma| = |beta0|/2) to the bottom coefficient.
    Returns {gamma: {"chain": [...], "closure": residual, "ok": bool}}.
    """
    beta0 = complex(beta0)
    report = {}
    for gamma, bottom in seeds.items():
        gamma = complex(gamma)
        if abs(abs(gamma) - abs(beta0) / 2) > tol * max(1.0, abs(beta0)):
            raise ValueError(f"frequency {gamma} is off the circle")
        ratio = (2.0 * np.conj(gamma) / np.conj(beta0)) ** 2
        chain = [complex(bottom)]
        for q in range(-p, p):
            chain.append(cs[q] * chain[0] + ratio * chain[-1])
        closure = abs(gamma * chain[0] + np.conj(gamma) * chain[-1])
        report[gamma] = {"chain": chain, "closure": closure,
                         "ok": closure <= tol * max(1.0, abs(chain[0]))}
    return report


def polynomial_condition(beta0: complex, cs: dict, p: int):
    """Monic degree-(4p+2) polynomial whose roots carry the admissible
    frequencies, plus its numerically computed roots.

    Convention: the chain constant at index -p-1 equals 1.
    """
    beta0 = complex(beta0)
    deg = 4 * p + 2
    coeffs = np.zeros(deg + 1, dtype=complex)    # ascending powers
    coeffs[deg] = 1.0
    for q in range(0, 2 * p + 1):
        c_q = 1.0 if q == 0 else cs[q - p - 1]
        coeffs[2 * q] = (c_q * (np.conj(beta0) / 2.0)
                         * (beta0 / 2.0) ** (4 * p + 1 - 2 * q))
    roots = np.roots(coeffs[::-1])
    return coeffs, roots


# --- shipped seeds -----------------------------------------------------------

@dataclass
class KillingSeed:
    field: KillingField
    spec: TorusSpec
    rotation: complex          # coordinate change z = rotation * w
    cs: dict
    p: int


def _spec_rotate(spec: TorusSpec, mu: complex) -> TorusSpec:
    """Spec of the same surface in the rotated coordinate z = mu w.

    Frequencies and slope pick up conj(mu); the coefficients pick up mu
    (the spinor transforms as u~(w) = mu u(mu w)).
    """
    mubar = np.conj(mu)
    lat = spec.lattice
    from .lattices import Lattice
    new_lat = Lattice(mubar * lat.g1, mubar * lat.g2)
    pairs = {g * mubar: mu * a for g, a in spec.items()}
    return TorusSpec.build(new_lat, spec.beta0 * mubar, pairs)


def _seed_from_spec(spec: TorusSpec, cs: dict, p: int) -> KillingField:
    """Assemble the degree-(4p+2) field at the basepoint from the spec's
    spinor modes and the chain constants."""
    d = 4 * p + 2
    beta0 = spec.beta0
    a_top = np.pi * np.conj(beta0) / 2.0
    modes = _u_modes(spec)

    def chain_multiplier(q, delta):
        # bottom-to-q multiplier on one frequency mode
        ratio = (2.0 * np.conj(delta) / np.conj(beta0)) ** 2
        val = 1.0 + 0.0j
        for qq in range(-p, q):
            val = cs[qq] + ratio * val
        return val

    field = KillingField(d, np.zeros((2 * d + 1, 4, 4), dtype=complex),
                         np.zeros((2 * d + 1, 4), dtype=complex))
    # even rotation string: top, the c_q line, and the conjugates by reality
    field.set_coeff(-d, a_top * L_I, np.zeros(4))
    field.set_coeff(d, np.conj(a_top) * L_I, np.zeros(4))
    for q in range(-p, p + 1):
        if q == p:
            c_q = beta0 / np.conj(beta0)     # forced by reality
        else:
            c_q = cs[q]
        rotc = (np.pi * np.conj(beta0) * c_q / 2.0) * L_I
        field.set_coeff(4 * q + 2, rotc, np.zeros(4))
    # translation strings u_q at 4q-1 and v_q at 4q+1, evaluated at z = 0
    for q in range(-p, p + 1):
        u_q = np.zeros(4, dtype=complex)
        v_q = np.zeros(4, dtype=complex)
        for delta, vec in modes.values():
            mult = chain_multiplier(q, delta)
            u_q = u_q + mult * vec
            v_q = v_q + mult * (2j * np.conj(delta) / np.conj(beta0)) * (L_I @ vec)
        field.set_coeff(4 * q - 1, np.zeros((4, 4)), u_q)
        field.set_coeff(4 * q + 1, np.zeros((4, 4)), v_q)
    return field


def standard_torus_killing_seed(w1: float = 1.0, w2: float = 1.0) -> KillingSeed:
    """Genus-zero (degree-2) seed for the rectangular torus, built in the
    rotated coordinate where the two active frequencies are purely imaginary."""
    base = standard_torus(w1, w2).spec
    beta0 = base.beta0
    mu = -1j * abs(beta0) / beta0
    spec = _spec_rotate(base, mu)
    field = _seed_from_spec(spec, {}, 0)
    _validate_seed(field)
    return KillingSeed(field, spec, mu, {}, 0)


def rhombic_killing_seed() -> KillingSeed:
    """Degree-6 seed for the hexagonal-dual example; the chain constants make
    the four active frequencies roots of the degree-6 polynomial."""
    spec = rhombic_torus().spec
    cs = {-1: 2.0 + 0j, 0: 2.0 + 0j}
    field = _seed_from_spec(spec, cs, 1)
    _validate_seed(field)
    return KillingSeed(field, spec, 1.0 + 0j, cs, 1)


def _validate_seed(field: KillingField, tol: float = 1e-10):
    if field.twist_residual() > tol or field.reality_residual() > tol:
        raise AssertionError(
            f"seed violates twist/reality: {field.twist_residual():.2e}, "
            f"{field.reality_residual():.2e}")
