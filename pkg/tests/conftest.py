import cmath
import math

import numpy as np

from opuc.core import Explicit


def random_explicit(rng: np.random.Generator, n: int, radius: float = 0.9) -> Explicit:
    """Seeded random coefficient list, uniform on the disk of the given radius."""
    mods = radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    args = rng.uniform(0.0, 2.0 * math.pi, n)
    return Explicit(mods * np.exp(1j * args))


def circle_points(rng: np.random.Generator, count: int) -> list[complex]:
    return [cmath.exp(1j * t) for t in rng.uniform(0.0, 2.0 * math.pi, count)]


def state_scale(state) -> float:
    """Normalization for state comparisons: exponentially small components of
    a large state cannot carry componentwise relative accuracy in floats."""
    return max(1.0, abs(state.phi), abs(state.phi_star), abs(state.psi), abs(state.psi_star))
