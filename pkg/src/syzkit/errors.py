"""Exception hierarchy shared by the library and the command line front end.

Every error that signals a *mathematical* failure (as opposed to malformed
input) derives from :class:`MathematicalFailure`; the CLI maps those to exit
code 2.
"""

from __future__ import annotations


class SyzkitError(Exception):
    """Base class for all errors raised by syzkit."""


class MathematicalFailure(SyzkitError):
    """The input is well formed but the requested object does not exist."""


# lattice geometry


class FanError(SyzkitError, ValueError):
    """Malformed fan data (non-primitive or repeated rays, empty fan)."""


class NotCalabiYau(MathematicalFailure):
    """No lattice vector pairs to 1 with every ray generator."""


class NonSimplicial(FanError):
    """Two angularly adjacent rays are linearly dependent."""


class NonSmooth(MathematicalFailure):
    """Some pair of adjacent rays does not form a lattice basis."""


class BoundaryRay(FanError):
    """The ray has no neighbour on one side, so its divisor is non-compact."""


class NonProportional(MathematicalFailure):
    """v_{i-1} + v_{i+1} is not an integer multiple of v_i."""


class Inconsistent(MathematicalFailure):
    """Prescribed intersection numbers violate linear equivalence."""


class EmptyPolytope(MathematicalFailure):
    pass


class RedundantFacet(MathematicalFailure):
    """Some facet inequality does not support an edge of positive length."""


# enumerative


class LengthMismatch(SyzkitError, ValueError):
    pass


class CenterOutOfRange(SyzkitError, ValueError):
    pass


# mirror / periods


class IdentityMismatch(MathematicalFailure):
    """The two constructions of the gluing polynomial disagree."""

    def __init__(self, m: int, power: int, exponents: tuple, left: int, right: int):
        self.m = m
        self.power = power
        self.exponents = exponents
        self.left = left
        self.right = right
        super().__init__(
            f"m={m}: coefficient of z^{power} q^{exponents} is {left} "
            f"(invariants) vs {right} (product)"
        )


class NotNormalized(SyzkitError, ValueError):
    """Mirror coefficients must have constant term C_0 = 1."""


class RootSeparationFailure(MathematicalFailure):
    """Two roots of the mirror polynomial have (nearly) equal modulus."""


class ZeroFiberCoordinate(SyzkitError, ValueError):
    """Both semi-flat charts invert z2, so z2 = 0 is not allowed."""


class DegenerateInterval(MathematicalFailure):
    """Consecutive roots coincide (some q_j = 1), so the cycle collapses."""


class QuadratureDivergence(MathematicalFailure):
    """Grid refinement did not bring the error estimate below tolerance."""
