"""Exception and warning types raised across the library."""


class HamstatError(Exception):
    """Base class for all library-specific errors."""


class FrameNotLagrangian(HamstatError):
    """Tangent frame fails the unit/orthogonal/isotropy requirements."""


class DegenerateLattice(HamstatError):
    """Lattice generators are collinear (zero-area fundamental cell)."""


class SlopeNotInDualLattice(HamstatError):
    """Requested angle slope is not a dual-lattice point."""


class EmptySpectrum(HamstatError):
    """A torus spec carries no nonzero Fourier coefficient."""


class ResonantFrequency(HamstatError):
    """Frequency sits at the pseudo-periodic resonance of the basis formula."""


class AngleUnwrapFailure(HamstatError):
    """Angle increments between grid neighbours exceed the unwrap budget."""


class DegenerateMetric(HamstatError):
    """Induced metric below tolerance; curvature quantities undefined."""


class SingularInput(HamstatError):
    """Matrix argument is singular or outside the expected group."""


class BranchDetectionFailure(HamstatError):
    """Neither sign branch of the rotation-factor split is consistent."""


class ConvergenceFailure(HamstatError):
    """Iterative factorization did not reach the requested tolerance."""


class OutsideBigCell(HamstatError):
    """Loop admits no negative/positive splitting (singular Toeplitz system)."""


class NotInBigCell(HamstatError):
    """Pointwise potential extraction hit a non-factorizable lift value."""


class PathIntegrationFailure(HamstatError):
    """Adaptive quadrature along the integration path did not converge."""


class StepSizeUnderflow(HamstatError):
    """Flow integrator step fell below the representable minimum."""


class NoRealSolution(HamstatError):
    """Parameter ratios admit no angle solution in the required range."""


class MonodromyWarning(UserWarning):
    """Deformed immersion fails lattice periodicity at tolerance."""
