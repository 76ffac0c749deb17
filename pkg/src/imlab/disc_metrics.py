"""Exact metric structure on the unit disc.

The Mobius distance m(a, b) = |(a - b) / (1 - conj(a) b)| and the hyperbolic
distance p = artanh(m) are the two reference scales: every distance produced
by the solvers lives either in hyperbolic units or, via tanh, in star units
in [0, 1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass


class DiscDomainError(ValueError):
    """A point fell outside the open unit disc (or a star value outside [0,1))."""


#: Maximum modulus accepted as "inside the open disc".  Points this close to
#: the boundary make artanh blow up; solvers keep an interior margin anyway.
_BOUNDARY_TOL = 1.0 - 1e-14


def _check_in_disc(z: complex, name: str) -> complex:
    z = complex(z)
    if abs(z) >= _BOUNDARY_TOL:
        raise DiscDomainError(f"{name}={z!r} is not inside the open unit disc")
    return z


@dataclass(frozen=True)
class HyperbolicValue:
    """A nonnegative distance in hyperbolic units together with its tanh image.

    ``math.inf`` is tolerated as a solver-side "no candidate found" sentinel
    (star_value pinned to 1.0); the disc operations below never produce it.
    """

    value: float
    star_value: float

    @classmethod
    def from_value(cls, value: float) -> "HyperbolicValue":
        if value < 0:
            raise DiscDomainError(f"hyperbolic value must be >= 0, got {value}")
        if math.isinf(value):
            return cls(value=math.inf, star_value=1.0)
        return cls(value=float(value), star_value=math.tanh(value))

    @classmethod
    def from_star(cls, star: float) -> "HyperbolicValue":
        if not 0.0 <= star < 1.0:
            raise DiscDomainError(f"star value must lie in [0, 1), got {star}")
        return cls(value=math.atanh(star), star_value=float(star))

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    def __float__(self) -> float:
        return self.value


#: Solver sentinel: no feasible candidate produced a finite upper bound.
INFEASIBLE = HyperbolicValue(value=math.inf, star_value=1.0)


def mobius_distance(a: complex, b: complex) -> float:
    """Mobius distance |(a-b)/(1-conj(a)b)| between points of the open disc."""
    a = _check_in_disc(a, "a")
    b = _check_in_disc(b, "b")
    return abs((a - b) / (1.0 - a.conjugate() * b))


def hyperbolic_distance(a: complex, b: complex) -> HyperbolicValue:
    """Hyperbolic distance p(a, b) = artanh(m(a, b)) on the unit disc."""
    return HyperbolicValue.from_star(mobius_distance(a, b))


def to_star(d: HyperbolicValue | float) -> float:
    """tanh image of a hyperbolic value; order preserving, range [0, 1)."""
    if isinstance(d, HyperbolicValue):
        return d.star_value
    if d < 0:
        raise DiscDomainError(f"hyperbolic value must be >= 0, got {d}")
    return math.tanh(d)


def from_star(s: float) -> HyperbolicValue:
    """Inverse of :func:`to_star`; raises for s outside [0, 1)."""
    return HyperbolicValue.from_star(s)


def disc_automorphism(a: complex, theta: float = 0.0):
    """Automorphism z -> e^{i theta} (z - a)/(1 - conj(a) z) of the disc.

    Returns the map as a callable; used by the invariance tests.
    """
    a = _check_in_disc(a, "a")
    phase = cmath.exp(1j * theta)

    def phi(z: complex) -> complex:
        z = complex(z)
        return phase * (z - a) / (1.0 - a.conjugate() * z)

    return phi
