"""Pointwise evaluation of orthonormal polynomials on the unit circle.

The state at degree n holds the orthonormal polynomial phi_n, its reversed
polynomial phi*_n, the second-kind pair psi_n / psi*_n (the system with
negated reflection coefficients), and the positive leading coefficient
kappa_n. One step consumes the next reflection coefficient b:

    phi_{n+1}  = (z phi_n + b phi*_n) / r        r = sqrt(1 - |b|^2)
    phi*_{n+1} = (z conj(b) phi_n + phi*_n) / r
    kappa_{n+1} = kappa_n / r

with the psi columns advanced by the same rule under b -> -b. Negating every
coefficient of a sequence therefore swaps the phi and psi columns exactly
(identical floating-point expression trees).

Two independent code paths cross-check the engine: a scalar route that keeps
the kappa products explicit, and a summation route that rebuilds
kappa_n phi*_n from all lower-degree values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import ReflectionSequence
from .errors import DomainError, InvalidCoefficientError


@dataclass(frozen=True)
class SzegoState:
    """Value of the four polynomials and kappa at one point and degree."""

    n: int
    z: complex
    phi: complex
    phi_star: complex
    psi: complex
    psi_star: complex
    kappa: float

    def as_matrix(self) -> np.ndarray:
        """The 2 x 2 state (phi, psi; phi*, -psi*)."""
        return np.array(
            [[self.phi, self.psi], [self.phi_star, -self.psi_star]], dtype=complex
        )


def initial_state(z: complex) -> SzegoState:
    return SzegoState(n=0, z=complex(z), phi=1.0, phi_star=1.0, psi=1.0, psi_star=1.0, kappa=1.0)


def step(state: SzegoState, phi_next_at_zero: complex, z: complex | None = None) -> SzegoState:
    """Advance one degree with the given next reflection coefficient."""
    b = complex(phi_next_at_zero)
    if abs(b) >= 1.0:
        raise InvalidCoefficientError(state.n + 1, b)
    zz = state.z if z is None else complex(z)
    r = math.sqrt(1.0 - abs(b) ** 2)
    bc = b.conjugate()
    return SzegoState(
        n=state.n + 1,
        z=zz,
        phi=(zz * state.phi + b * state.phi_star) / r,
        phi_star=(zz * bc * state.phi + state.phi_star) / r,
        psi=(zz * state.psi + (-b) * state.psi_star) / r,
        psi_star=(zz * (-b).conjugate() * state.psi + state.psi_star) / r,
        kappa=state.kappa / r,
    )


def iter_states(seq: ReflectionSequence, n: int, z: complex) -> Iterator[SzegoState]:
    """States at degrees 0..n (n + 1 values)."""
    state = initial_state(z)
    yield state
    for k in range(1, n + 1):
        state = step(state, seq.coeff_at(k))
        yield state


def evaluate(seq: ReflectionSequence, n: int, z: complex) -> SzegoState:
    """Fold the matrix recurrence n times from the degree-0 state."""
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    state = initial_state(z)
    for k in range(1, n + 1):
        state = step(state, seq.coeff_at(k))
    return state


def pair_evaluate(seq: ReflectionSequence, n: int, z: complex) -> tuple[complex, complex]:
    """(phi_n, phi*_n) by the scalar recurrences with explicit kappa weights.

    Literal form: kappa_{n-1} phi_n = z kappa_n phi_{n-1} + phi_n(0) phi*_{n-1}
    and its reversed companion, with phi_n(0) = kappa_n b. The kappa product
    is accumulated separately, so this is an independent code path from
    evaluate().
    """
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    zz = complex(z)
    phi, phi_star = 1.0 + 0.0j, 1.0 + 0.0j
    kappa_prev = 1.0
    for k in range(1, n + 1):
        b = seq.coeff_at(k)
        kappa_k = kappa_prev / math.sqrt(1.0 - abs(b) ** 2)
        phi_at_zero = kappa_k * b
        phi_new = (zz * kappa_k * phi + phi_at_zero * phi_star) / kappa_prev
        phi_star_new = (kappa_k * phi_star + zz * phi_at_zero.conjugate() * phi) / kappa_prev
        phi, phi_star = phi_new, phi_star_new
        kappa_prev = kappa_k
    return phi, phi_star


def kappa(seq: ReflectionSequence, n: int) -> float:
    """Leading coefficient kappa_n, accumulated in log space."""
    return math.exp(log_kappa(seq, n))


def log_kappa(seq: ReflectionSequence, n: int) -> float:
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    acc = 0.0
    for k in range(1, n + 1):
        acc -= 0.5 * math.log1p(-abs(seq.coeff_at(k)) ** 2)
    return acc


def schur_sum_eval(seq: ReflectionSequence, n: int, z: complex) -> complex:
    """kappa_n phi*_n(z) as the sum of conj(coefficient_k) kappa_k phi_k(z).

    The k = 0 coefficient is 1. Equality with kappa_n * phi_star from
    evaluate() is the summation-route consistency check.
    """
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    total = 1.0 + 0.0j  # k = 0 term
    state = initial_state(z)
    for k in range(1, n + 1):
        b = seq.coeff_at(k)
        state = step(state, b)
        total += b.conjugate() * state.kappa * state.phi
    return total


def wronskian(state: SzegoState) -> complex:
    """Determinant of the state matrix; identically -2 z^n."""
    return state.phi * (-state.psi_star) - state.psi * state.phi_star


def expected_z_moment(seq: ReflectionSequence, n: int) -> complex:
    """Integral of z |phi_n|^2 against the orthogonality measure.

    Equals minus the product of consecutive reflection coefficients (with the
    index-0 coefficient set to 1), read off the Fourier expansion of z phi_n.
    """
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    prev = 1.0 + 0.0j if n == 0 else seq.coeff_at(n)
    return -seq.coeff_at(n + 1) * prev.conjugate()


def monic_coefficients(seq: ReflectionSequence, n: int) -> np.ndarray:
    """Coefficient vector (ascending powers) of the monic polynomial of degree n.

    Runs the monic recurrence on coefficient arrays: new = z * old +
    b * reversed-conjugate(old). O(n^2); intended for modest degrees where an
    explicit coefficient route is wanted as an oracle.
    """
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    coeffs = np.array([1.0 + 0.0j])
    for k in range(1, n + 1):
        b = seq.coeff_at(k)
        shifted = np.concatenate(([0.0 + 0.0j], coeffs))        # z * Phi_{k-1}
        reversed_conj = np.conj(coeffs[::-1])                   # Phi*_{k-1}
        star = np.concatenate((reversed_conj, [0.0 + 0.0j]))    # degree k vector
        coeffs = shifted + b * star
    return coeffs


def sweep_abs_phi(seq: ReflectionSequence, thetas: np.ndarray, n_max: int) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (n, |phi_n| over the angle grid) for n = 1..n_max, vectorized.

    Grid sweeps are the intended parallelism: one recurrence pass advances
    the whole grid at once.
    """
    z = np.exp(1j * np.asarray(thetas, dtype=float))
    phi = np.ones_like(z)
    phi_star = np.ones_like(z)
    for k in range(1, n_max + 1):
        b = seq.coeff_at(k)
        r = math.sqrt(1.0 - abs(b) ** 2)
        phi, phi_star = (z * phi + b * phi_star) / r, (z * b.conjugate() * phi + phi_star) / r
        yield k, np.abs(phi)
