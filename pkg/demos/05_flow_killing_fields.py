"""Integrate a polynomial Killing field and check its conserved quantities.

The shipped seeds encode the product-of-circles torus (degree 2, in the
rotated coordinate that makes its two frequencies purely imaginary) and the
hexagonal-dual torus (degree 6).  Along the flow the even coefficients stay
constant, the spectrum of the loop values is preserved, and the lowest odd
coefficient reproduces the spinor field of the corresponding surface.
"""

import numpy as np

from hamstat import (enumerate_frequencies, lax_integrate,
                     polynomial_condition, rhombic_killing_seed, spinor_u,
                     standard_torus_killing_seed)

for seed in (standard_torus_killing_seed(1.0, 1.0), rhombic_killing_seed()):
    field, spec = seed.field, seed.spec
    lat = spec.lattice
    print(f"degree {field.d} seed on lattice ({lat.g1:.3f}, {lat.g2:.3f})")

    n = 8
    path = [i / n * lat.g1 for i in range(1, n + 1)]
    path += [lat.g1 + i / n * lat.g2 for i in range(1, n + 1)]
    res = lax_integrate(field, path, lattice=lat)
    print(f"   top-coefficient drift  {res.coefficient_drift(-field.d):.2e}")
    print(f"   even-coefficient drift {res.even_coefficient_drift():.2e}")
    print(f"   isospectral drift      {res.isospectral_drift():.2e}")

    worst = max(np.max(np.abs(f.coeff(-field.d + 1)[1] - spinor_u(spec, z)))
                for z, f in zip(res.points, res.fields))
    print(f"   spinor-field agreement {worst:.2e}")

    card = len(enumerate_frequencies(lat, spec.beta0))
    print(f"   frequency count {card} <= degree {field.d}")

    _, roots = polynomial_condition(spec.beta0, seed.cs, seed.p)
    print(f"   frequency polynomial roots: {np.round(roots, 4)}\n")
