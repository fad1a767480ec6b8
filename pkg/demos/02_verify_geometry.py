"""Run the numerical verification suite on golden surfaces and on probes
that deliberately break each property.

The checks are evaluator-agnostic: anything mapping C to R^4 can be tested.
Residuals come from central finite differences, so they measure the surface,
not the construction that produced it.
"""

import numpy as np

from hamstat import (Lattice, check_conformal, check_lagrangian,
                     check_mean_curvature, immerse, rhombic_torus, run_suite,
                     standard_torus)

# --- golden surfaces pass every check ---------------------------------------
for golden in (standard_torus(1.0, 2.0), rhombic_torus()):
    spec = golden.spec
    reports = run_suite(lambda z: immerse(spec, z), spec.lattice, 64,
                        spec=spec)
    print(f"{golden.name}:")
    for rep in reports:
        print(f"   {rep.check:<16} residual {rep.residual:9.2e}   "
              f"{'ok' if rep.passed else 'FAIL'}")

# --- a sheared plane is not conformal ----------------------------------------
def sheared(z):
    z = np.asarray(z, dtype=complex)
    zero = np.zeros_like(z.real)
    return np.stack([z.real, zero, z.imag + 0.1 * z.real, zero], axis=-1)

rep = check_conformal(sheared, Lattice.square(), 16)
print(f"\nsheared probe: conformal residual {rep.residual:.3f} "
      f"(flagged: {not rep.passed})")

# --- the graph of a non-gradient map is not Lagrangian ------------------------
def graph(z):
    z = np.asarray(z, dtype=complex)
    return np.stack([z.real, z.imag, z.imag, np.zeros_like(z.real)], axis=-1)

rep = check_lagrangian(graph, Lattice.square(), 16)
print(f"graph probe: symplectic residual {rep.residual:.3f} "
      f"(flagged: {not rep.passed})")

# --- a round sphere fails the angle-gradient law -------------------------------
def sphere(z):
    z = np.asarray(z, dtype=complex)
    th = 0.6 * np.pi * (0.2 + 0.6 * z.real) + 0.3
    ph = 2 * np.pi * z.imag
    return np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph),
                     np.cos(th), np.zeros_like(th)], axis=-1)

rep = check_mean_curvature(sphere, Lattice.square(), 12)
print(f"sphere probe: curvature-law residual {rep.residual:.3f} "
      f"(flagged: {not rep.passed})")
