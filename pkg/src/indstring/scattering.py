"""Jost data, scattering coefficients, Weyl function and spectral density.

Lebesgue tail: the Jost solution is ``exp(i z x)`` beyond ``R``.
Alpha tail:    the Jost solution is ``(1 + 2x)^((i k(z) + 1)/2)`` beyond ``R``
with ``k(z) = sqrt(z^2 - 1)`` on the branch with positive imaginary part.

``a`` and ``b`` are evaluated from the fundamental system at ``R`` and never
divide by ``z``; only the Alpha class divides by ``k``, which vanishes at
``z = +-1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import StringSpec, Tail, validate
from .ode import solution_matrix

LOW_CONFIDENCE_RADIUS = 1e-6
POLE_RTOL = 1e-12       # |1 / m| at or below this is reported as a pole


class PoleError(ArithmeticError):
    """The requested point is a pole of the Weyl function."""


def branch_k(z):
    """``sqrt(z^2 - 1)`` with ``Im >= 0``, extended to the real line from above.

    On ``(-inf, -1]`` the value is ``-sqrt(z^2 - 1)``, on ``[1, inf)`` it is
    ``+sqrt(z^2 - 1)``.
    """
    z = np.asarray(z, dtype=complex)
    k = 1j * np.sqrt(1.0 - z * z)
    x = z.real
    on_axis = (z.imag == 0) & (np.abs(x) >= 1)
    k = np.where(on_axis, np.sign(x) * np.sqrt(np.abs(x * x - 1.0)) + 0j, k)
    return k[()] if k.ndim == 0 else k


def zhukovsky(z):
    """Conformal map ``z + k(z)`` of ``C+ u (-1, 1) u C-`` onto ``C+``."""
    return np.asarray(z, dtype=complex) + branch_k(z)


def zhukovsky_inverse(t):
    t = np.asarray(t, dtype=complex)
    return 0.5 * (t + 1.0 / t)


def _check_alpha_point(z):
    if np.any((np.imag(z) == 0) & (np.abs(np.real(z)) == 1.0)):
        raise ValueError("z = +-1 is excluded for the Alpha tail (k vanishes)")


@dataclass(frozen=True)
class ScatteringValue:
    """``a`` and ``b`` at ``z``.  ``k`` is the branch function for the Alpha tail
    and equals ``z`` for the Lebesgue tail."""

    z: np.ndarray
    k: np.ndarray
    a: np.ndarray
    b: np.ndarray
    tail: Tail

    @property
    def low_confidence(self) -> np.ndarray:
        if self.tail is Tail.LEBESGUE:
            return np.zeros(np.shape(self.z), dtype=bool)
        z = np.asarray(self.z)
        return (np.abs(z - 1) < LOW_CONFIDENCE_RADIUS) | (np.abs(z + 1) < LOW_CONFIDENCE_RADIUS)


def _alpha_parts(spec, z):
    k = branch_k(z)
    ik1 = 1j * k + 1.0
    q = 1.0 + 2.0 * spec.R
    log_p = 0.5 * ik1 * np.log(q)      # log of (1+2R)^((ik+1)/2)
    return k, ik1, q, log_p


def jost_at_zero(spec: StringSpec, z):
    """``(f(z, 0), f'(z, 0-))`` of the Jost solution, vectorized over ``z``."""
    validate(spec)
    z = np.asarray(z, dtype=complex)
    s = solution_matrix(spec, z)
    if spec.tail is Tail.LEBESGUE:
        scale = np.exp(s.logscale + 1j * z * spec.R)
        return (s.D - 1j * z * s.B) * scale, z * (1j * s.A - s.Cz) * scale
    _check_alpha_point(z)
    k, ik1, q, log_p = _alpha_parts(spec, z)
    scale = np.exp(s.logscale + log_p)
    f0 = (s.D - ik1 * s.B / q) * scale
    f0p = (ik1 * s.A / q - z * s.Cz) * scale
    return f0, f0p


def _ab_scaled(spec, z, s):
    """Return ``(Ea, Eb, log_prefactor, k)`` with ``a = Ea * exp(log_prefactor)``."""
    if spec.tail is Tail.LEBESGUE:
        ea = s.A + 1j * s.Cz - 1j * z * s.B + s.D
        eb = -s.A - 1j * s.Cz - 1j * z * s.B + s.D
        return ea, eb, s.logscale + 1j * z * spec.R - np.log(2.0), z
    k, ik1, q, log_p = _alpha_parts(spec, z)
    ea = ik1 * s.A / q - z * s.Cz + z * z * s.B / q + (ik1 - 2.0) * s.D
    eb = -ik1 * s.A / q + z * s.Cz - ik1 * ik1 * s.B / q + ik1 * s.D
    return ea, eb, s.logscale + log_p - np.log(2j * k), k


def scattering_ab(spec: StringSpec, z) -> ScatteringValue:
    validate(spec)
    z = np.asarray(z, dtype=complex)
    if spec.tail is Tail.ALPHA:
        _check_alpha_point(z)
    s = solution_matrix(spec, z)
    ea, eb, lp, k = _ab_scaled(spec, z, s)
    pref = np.exp(lp)
    return ScatteringValue(z, k, ea * pref, eb * pref, spec.tail)


def log_abs_a(spec: StringSpec, z, backend: str | None = None) -> np.ndarray:
    """``log|a(z)|`` without overflow, for large ``|Im z|`` as well as real ``z``."""
    z = np.asarray(z, dtype=complex)
    s = solution_matrix(spec, z, backend=backend)
    ea, _, lp, _ = _ab_scaled(spec, z, s)
    return np.log(np.abs(ea)) + np.real(lp)


def weyl_m(spec: StringSpec, z):
    """Weyl--Titchmarsh function ``f'(z, 0-) / (z f(z, 0))``.

    Real ``z`` gives boundary values from the upper half-plane.  Raises
    :class:`PoleError` at zeros of ``f(., 0)``.
    """
    validate(spec)
    z = np.asarray(z, dtype=complex)
    lower = z.imag < 0
    zu = np.where(lower, np.conj(z), z)
    if spec.tail is Tail.LEBESGUE:
        s = solution_matrix(spec, zu)
        num = 1j * s.A - s.Cz
        den = s.D - 1j * zu * s.B
        zz = zu
    else:
        # the Alpha Jost solution is defined on both half-planes
        zz = z
        if np.any(zz == 0):
            raise ValueError("m is not evaluated at z = 0")
        _check_alpha_point(zz)
        s = solution_matrix(spec, zz)
        k, ik1, q, _ = _alpha_parts(spec, zz)
        num = ik1 * s.A / q - zz * s.Cz
        den = zz * (s.D - ik1 * s.B / q)
    if np.any(np.abs(den) <= POLE_RTOL * np.abs(num)):
        raise PoleError("pole of m (zero of the Jost function at 0)")
    m = num / den
    if spec.tail is Tail.LEBESGUE:
        m = np.where(lower, np.conj(m), m)
    return m[()] if np.ndim(m) == 0 else m


@dataclass(frozen=True)
class SpectralSample:
    lam: np.ndarray
    density: np.ndarray


def spectral_density(spec: StringSpec, lam) -> SpectralSample:
    """Density of the absolutely continuous spectral measure on the essential spectrum."""
    validate(spec)
    lam = np.asarray(lam, dtype=float)
    s = solution_matrix(spec, lam.astype(complex))
    if spec.tail is Tail.LEBESGUE:
        ab = (s.D - 1j * lam * s.B) * np.exp(s.logscale)   # a + b up to a unimodular factor
        return SpectralSample(lam, 1.0 / (np.pi * np.abs(ab) ** 2))
    if np.any(np.abs(lam) <= 1.0):
        raise ValueError("Alpha-tail density is defined for |lambda| > 1 only")
    k, ik1, q, log_p = _alpha_parts(spec, lam.astype(complex))
    ab = (s.D - ik1 * s.B / q) * np.exp(s.logscale + log_p)
    return SpectralSample(lam, np.real(k) / (np.pi * lam * np.abs(ab) ** 2))
