"""Closed-form Fourier construction of Hamiltonian stationary Lagrangian
tori, and the circle family deforming them.

Everything is evaluated from exact Fourier formulas.  A spec consists of a
lattice, an angle slope ``beta0`` in the dual lattice, and complex
coefficients on the circle frequency set; the immersion is the corresponding
combination of the two closed-form basis surfaces per frequency.  Finite
differences never enter here; they are reserved for the verification module.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .algebra import EPS, L_I, LI_EPS_BAR, PI_MINUS, PI_PLUS
from .errors import MonodromyWarning, ResonantFrequency
from .lattices import Lattice, enumerate_frequencies, periodicity_class, PeriodicityClass
from .numerics import TWO_PI, dot_r2

__all__ = [
    "TorusSpec", "beta_eval", "basis_A", "basis_B", "immerse",
    "spinor_u", "spinor_ab", "regularity_scan", "RegularityReport",
    "associated_family", "FamilyEvaluator", "holomorphic_angle",
]

_KEY_DECIMALS = 9


def _key(gamma: complex):
    return (round(gamma.real, _KEY_DECIMALS), round(gamma.imag, _KEY_DECIMALS))


@dataclass
class TorusSpec:
    """Lattice + slope + circle Fourier coefficients of a doubly periodic
    solution; basepoint fixed at the origin.

    Frequencies are kept exactly; the rounded key is only a merge index.
    """

    lattice: Lattice
    beta0: complex
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.beta0 = complex(self.beta0)
        merged: dict = {}
        pairs = self.coeffs.items() if isinstance(self.coeffs, dict) else self.coeffs
        for g, a in pairs:
            g, a = complex(g), complex(a)
            k = _key(g)
            if k in merged:
                merged[k] = (merged[k][0], merged[k][1] + a)
            else:
                merged[k] = (g, a)
        self.coeffs = merged

    @classmethod
    def build(cls, lattice, beta0, pairs, validate: bool = True,
              tol: float = 1e-9) -> "TorusSpec":
        spec = cls(lattice, beta0,
                   dict(pairs) if not isinstance(pairs, dict) else pairs)
        if validate:
            spec.validate(tol)
        return spec

    def validate(self, tol: float = 1e-9):
        freq = enumerate_frequencies(self.lattice, self.beta0, tol)
        for g, _ in self.items():
            if not freq.contains_point(g, 10 * tol):
                raise ValueError(f"coefficient frequency {g} is not in the "
                                 f"circle set for beta0 = {self.beta0}")
        return self

    def items(self):
        return [(g, a) for g, a in self.coeffs.values()]

    def gammas(self):
        return [g for g, _ in self.coeffs.values()]

    def coefficient(self, gamma: complex) -> complex:
        entry = self.coeffs.get(_key(complex(gamma)))
        return entry[1] if entry is not None else 0.0 + 0.0j

    def periodicity(self) -> PeriodicityClass:
        return periodicity_class(self.lattice, self.beta0)

    # --- serialization -------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "lattice": {"g1": [self.lattice.g1.real, self.lattice.g1.imag],
                        "g2": [self.lattice.g2.real, self.lattice.g2.imag]},
            "beta0": [self.beta0.real, self.beta0.imag],
            "coefficients": [
                {"gamma": [g.real, g.imag], "re": a.real, "im": a.imag}
                for g, a in self.items()],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict, validate: bool = True) -> "TorusSpec":
        lat = Lattice.from_config(data["lattice"])
        beta0 = complex(data["beta0"][0], data["beta0"][1])
        pairs = {complex(c["gamma"][0], c["gamma"][1]): complex(c["re"], c["im"])
                 for c in data["coefficients"]}
        return cls.build(lat, beta0, pairs, validate=validate)

    @classmethod
    def from_json(cls, text: str, validate: bool = True) -> "TorusSpec":
        return cls.from_dict(json.loads(text), validate=validate)


def beta_eval(spec: TorusSpec, z):
    """Lagrangian angle lift 2*pi*<beta0, z> (basepoint at 0)."""
    return TWO_PI * dot_r2(spec.beta0, np.asarray(z, dtype=complex))


def holomorphic_angle(beta0: complex):
    """h with 2*Re(h) the angle and h(0) = 0: h(z) = pi*conj(beta0)*z.

    The unique holomorphic function vanishing at the basepoint whose real
    part is half the angle; its imaginary part is the harmonic conjugate.
    """
    c = np.pi * np.conj(beta0)

    def h(z):
        return c * np.asarray(z, dtype=complex)

    h.derivative = c
    return h


def _basis_core(gamma: complex, beta0: complex, z, part: str, tol: float = 1e-12):
    gamma = complex(gamma)
    beta0 = complex(beta0)
    denom = beta0 ** 2 - 4.0 * gamma ** 2
    if abs(denom) < max(tol, 1e-12 * abs(beta0) ** 2):
        raise ResonantFrequency(
            f"gamma = {gamma} resonates with beta0 = {beta0}; the primitive "
            "is only pseudo-periodic")
    z = np.asarray(z, dtype=complex)
    column = np.array([-1j * gamma, -beta0 / 2.0, gamma, -1j * beta0 / 2.0]) / denom
    wave = np.exp(-2j * np.pi * dot_r2(gamma, z))[..., None] * column
    vec = wave.real if part == "re" else wave.imag
    phase = np.pi * dot_r2(beta0, z)
    rotated = (np.cos(phase)[..., None] * vec
               + np.sin(phase)[..., None] * (vec @ L_I.T))
    return (4.0 / np.pi) * rotated


def basis_A(gamma, beta0, z):
    """Closed-form basis immersion attached to a frequency (real part)."""
    return _basis_core(gamma, beta0, z, "re")


def basis_B(gamma, beta0, z):
    """Companion basis immersion (imaginary part)."""
    return _basis_core(gamma, beta0, z, "im")


def immerse(spec: TorusSpec, z):
    """X = sum over frequencies of Re(a) A + Im(a) B, shape (..., 4)."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape + (4,))
    for gamma, a in spec.items():
        if a.real != 0.0:
            out += a.real * basis_A(gamma, spec.beta0, z)
        if a.imag != 0.0:
            out += a.imag * basis_B(gamma, spec.beta0, z)
    return out


def _u_modes(spec: TorusSpec) -> dict:
    """Fourier modes of the spinor field u: rounded key -> (frequency, C^4)."""
    modes: dict = {}

    def add(delta, vec):
        k = _key(delta)
        if k in modes:
            modes[k] = (modes[k][0], modes[k][1] + vec)
        else:
            modes[k] = (delta, vec.astype(complex))

    for gamma, a in spec.items():
        if a == 0:
            continue
        add(gamma, a * EPS)
        add(-gamma, (2j * np.conj(gamma) / spec.beta0) * np.conj(a) * LI_EPS_BAR)
    return modes


def spinor_u(spec: TorusSpec, z):
    """u = e^{-beta L_i / 2} dX/dz, from its exact Fourier modes."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape + (4,), dtype=complex)
    for delta, vec in _u_modes(spec).values():
        out += np.exp(2j * np.pi * dot_r2(delta, z))[..., None] * vec
    return out


def spinor_ab(spec: TorusSpec, z):
    """The two scalar components of u in the (eps, L_i eps_bar) frame."""
    u = spinor_u(spec, z)
    return 2.0 * u[..., 0], 2.0 * u[..., 1]


@dataclass(frozen=True)
class RegularityReport:
    min_abs_u: float
    argmin: complex
    grid_n: int
    cover: str

    @property
    def immersed(self) -> bool:
        return self.min_abs_u > 0.0


def regularity_scan(spec: TorusSpec, grid_n: int) -> RegularityReport:
    """Sampled minimum of |u| over the fundamental domain (advisory only)."""
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    zs = spec.lattice.grid(grid_n)
    norms = np.linalg.norm(spinor_u(spec, zs), axis=-1)
    idx = np.unravel_index(np.argmin(norms), norms.shape)
    cover = ("1" if spec.periodicity() is PeriodicityClass.TRULY_PERIODIC
             else "2")
    return RegularityReport(float(norms[idx]), complex(zs[idx]), grid_n, cover)


# --- associated family -------------------------------------------------

_RES_TOL = 1e-12


class FamilyEvaluator:
    """Circle-parameter deformation of a spec's immersion, evaluated from a
    per-phase table of closed-form primitives.

    Each Fourier mode of the deformed derivative contributes an exponential
    ``exp(2 pi i <mu, z>)`` with a lam-shifted phase mu; the primitive is a
    zero-mean exponential (or a linear term at the isolated resonances).  At
    lam = 1 this reproduces the undeformed immersion exactly.
    """

    def __init__(self, spec: TorusSpec, lam: complex, tol: float = 1e-9,
                 warn: bool = True):
        lam = complex(lam)
        if abs(abs(lam) - 1.0) > 1e-12:
            raise ValueError("family parameter must lie on the unit circle")
        self.spec = spec
        self.lam = lam
        self._build_table()
        self.period_defects = self._monodromy(tol)
        if warn and max(self.period_defects.values()) > tol:
            warnings.warn(
                f"family member lam={lam:.6g} breaks lattice periodicity "
                f"(defect {max(self.period_defects.values()):.3e})",
                MonodromyWarning, stacklevel=3)

    def _build_table(self):
        spec, lam = self.spec, self.lam
        shift = lam * lam * spec.beta0 / 2.0
        modes = _u_modes(spec)
        groups: dict = {}
        for delta, vec in modes.values():
            entry = modes.get(_key(-delta))
            minus = entry[1] if entry is not None else np.zeros(4, dtype=complex)
            for sigma, proj in ((+1.0, PI_PLUS), (-1.0, PI_MINUS)):
                mu = delta + sigma * shift
                gk = _key(mu)
                if gk in groups:
                    _, c1, c2 = groups[gk]
                else:
                    c1 = np.zeros(4, dtype=complex)
                    c2 = np.zeros(4, dtype=complex)
                groups[gk] = (mu, c1 + proj @ vec / lam,
                              c2 + lam * (proj @ np.conj(minus)))
        table = []
        for mu, c1, c2 in groups.values():
            if abs(mu) <= _RES_TOL:
                table.append(("linear", mu, c1, c2))
                continue
            closed = np.linalg.norm(mu * c1 - np.conj(mu) * c2)
            scale = np.linalg.norm(c1) + np.linalg.norm(c2) + 1e-30
            if closed > 1e-8 * scale:
                raise ArithmeticError(
                    f"phase {mu} fails closedness ({closed:.2e}); "
                    "family table is inconsistent")
            table.append(("exp", mu, c1 / (1j * np.pi * np.conj(mu)), c2))
        self._table = table

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape + (4,), dtype=complex)
        for kind, mu, c1, c2 in self._table:
            if kind == "exp":
                out += np.exp(2j * np.pi * dot_r2(mu, z))[..., None] * c1
            else:
                out += z[..., None] * c1 + np.conj(z)[..., None] * c2
        imag = float(np.max(np.abs(out.imag))) if out.size else 0.0
        if imag > 1e-8 * (1.0 + np.max(np.abs(out.real))):
            raise ArithmeticError(f"family value has imaginary residue {imag:.2e}")
        return out.real

    def _monodromy(self, tol: float) -> dict:
        defects = {}
        for name, g in (("g1", self.spec.lattice.g1), ("g2", self.spec.lattice.g2)):
            total = 0.0
            for kind, mu, c1, c2 in self._table:
                if kind == "exp":
                    total += abs(np.exp(2j * np.pi * dot_r2(mu, g)) - 1.0) \
                        * np.linalg.norm(c1)
                else:
                    total += np.linalg.norm(g * c1 + np.conj(g) * c2)
            defects[name] = float(total)
        return defects


def associated_family(spec: TorusSpec, lam: complex, z=None, tol: float = 1e-9,
                      warn: bool = True):
    """Deformed immersion at circle parameter lam.

    With ``z`` given, returns the value; otherwise returns the evaluator
    (which carries the per-generator period defects).
    """
    ev = FamilyEvaluator(spec, lam, tol=tol, warn=warn)
    if z is None:
        return ev
    return ev(z)


def family_samples(spec: TorusSpec, z, lams, basepoint_zero: bool = True):
    """Family values on a batch of circle parameters, vectorized over (z, lam).

    Equivalent to stacking :class:`FamilyEvaluator` values, summing the
    per-term primitives directly (term phases only collide additively, so
    grouping is not needed away from the resonances, which get the linear
    primitive).  With ``basepoint_zero`` the value at z = 0 is subtracted,
    normalizing the family as an extended lift.

    Returns shape ``z.shape + lams.shape + (4,)``.
    """
    z = np.asarray(z, dtype=complex)
    lams = np.asarray(lams, dtype=complex)
    modes = _u_modes(spec)
    out = np.zeros(z.shape + lams.shape + (4,), dtype=complex)
    base = np.zeros(lams.shape + (4,), dtype=complex)
    shift = lams * lams * spec.beta0 / 2.0
    zc = z[..., None]
    for delta, vec in modes.values():
        entry = modes.get(_key(-delta))
        minus = entry[1] if entry is not None else np.zeros(4, dtype=complex)
        for sigma, proj in ((+1.0, PI_PLUS), (-1.0, PI_MINUS)):
            mu = delta + sigma * shift                      # (L,)
            c1 = (proj @ vec)[None, :] / lams[..., None]     # (L, 4)
            c2 = lams[..., None] * (proj @ np.conj(minus))[None, :]
            res = np.abs(mu) <= _RES_TOL
            denom = np.where(res, 1.0, 1j * np.pi * np.conj(mu))
            wave = np.exp(2j * np.pi * dot_r2(mu, zc))       # (..., L)
            regular = wave[..., None] * (c1 / denom[..., None])
            linear = zc[..., None] * c1 + np.conj(zc)[..., None] * c2
            out += np.where(res[..., None], linear, regular)
            base += np.where(res[..., None], 0.0, c1 / denom[..., None])
    if basepoint_zero:
        out -= base
    imag = float(np.max(np.abs(out.imag))) if out.size else 0.0
    if imag > 1e-8 * (1.0 + float(np.max(np.abs(out.real)))):
        raise ArithmeticError(f"family batch has imaginary residue {imag:.2e}")
    return out.real
