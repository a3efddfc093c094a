"""Exact propagation of solutions of ``-f'' = z w' f + z^2 upsilon f``.

On a free piece the equation is ``-f'' = z^2 rho^2 f``; at a point ``x0``
carrying a jump ``dw`` of ``w`` and a point mass ``m`` the weak form gives

    f'(x0+) = f'(x0-) - z * dw * f(x0) - z^2 * m * f(x0).

The quasi-derivative ``f^[1] = f' + z w f`` is left-continuous and is only
formed on output.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from . import _kernels
from .model import StringSpec, cells, validate


@dataclass(frozen=True)
class FundamentalState:
    """``(f, f')`` at ``x``; ``fprime`` is the right limit (``f'(0-)`` at the origin
    before any jump there has been applied)."""

    x: float
    z: complex
    f: complex
    fprime: complex

    def quasi_derivative(self, w_left: float) -> complex:
        return self.fprime + self.z * w_left * self.f


def piece_matrix(z: complex, length: float, rho0: float) -> np.ndarray:
    """Propagator of ``(f, f')`` over a free piece."""
    q = z * rho0
    u = q * length
    if abs(u) < _kernels.SMALL_PHASE:
        # series branch: sin(u)/q = length * (1 - u^2/6 + ...)
        return np.array([[1 - u * u / 2, length * (1 - u * u / 6)],
                         [-q * u, 1 - u * u / 2]], dtype=complex)
    c, s = np.cos(u), np.sin(u)
    return np.array([[c, s / q], [-q * s, c]], dtype=complex)


def jump_matrix(z: complex, delta_w: float, atom_mass: float) -> np.ndarray:
    return np.array([[1, 0], [-z * delta_w - z * z * atom_mass, 1]], dtype=complex)


def propagate_free(state: FundamentalState, length: float, rho0: float) -> FundamentalState:
    if length < 0 or rho0 < 0:
        raise ValueError("length and rho0 must be non-negative")
    f, fp = piece_matrix(state.z, length, rho0) @ np.array([state.f, state.fprime])
    return replace(state, x=state.x + length, f=complex(f), fprime=complex(fp))


def apply_jump(state: FundamentalState, delta_w: float, atom_mass: float) -> FundamentalState:
    if atom_mass < 0:
        raise ValueError("atom_mass must be non-negative")
    z = state.z
    return replace(state, fprime=state.fprime - (z * delta_w + z * z * atom_mass) * state.f)


class SolutionMatrix(NamedTuple):
    """Fundamental system at a point in scaled form (see :mod:`indstring._kernels`).

    ``theta = A``, ``theta^[1] = z (Cz + w_left A)``, ``phi = B``,
    ``phi^[1] = D + z w_left B``, each times ``exp(logscale)``.
    """

    A: np.ndarray
    B: np.ndarray
    Cz: np.ndarray
    D: np.ndarray
    logscale: np.ndarray
    w_left: float


def solution_matrix(spec: StringSpec, z, x: float | None = None,
                    backend: str | None = None) -> SolutionMatrix:
    c = cells(spec, x)
    A, B, Cz, D, logs = _kernels.transfer(z, c.length, c.rho, c.dw, c.mass, backend=backend)
    end = spec.R if x is None else float(x)
    return SolutionMatrix(A, B, Cz, D, logs, spec.w.left_limit(end))


def fundamental_system(spec: StringSpec, z, x: float | None = None):
    """``(theta, theta^[1], phi, phi^[1])`` at ``x`` (default ``R``), vectorized over ``z``."""
    validate(spec)
    z = np.asarray(z, dtype=complex)
    s = solution_matrix(spec, z, x)
    scale = np.exp(s.logscale)
    theta = s.A * scale
    theta1 = z * (s.Cz + s.w_left * s.A) * scale
    phi = s.B * scale
    phi1 = (s.D + z * s.w_left * s.B) * scale
    return theta, theta1, phi, phi1


@dataclass(frozen=True)
class TaylorAtZero:
    theta_dot: float
    theta1_dot: float
    phi_dot: float
    phi1_dot: float
    theta_ddot: float
    theta1_ddot: float
    phi1_ddot: float


def taylor_at_zero(spec: StringSpec, x: float | None = None) -> TaylorAtZero:
    """z-derivatives of the fundamental system at ``z = 0`` from closed-form integrals."""
    validate(spec)
    c = cells(spec, x)
    a, ln, w, rho = c.start, c.length, c.w, c.rho
    b = a + ln
    # running integrals evaluated at the left end of each cell
    W = np.concatenate([[0.0], np.cumsum(w * ln)])           # int_0^t w
    Q = np.concatenate([[0.0], np.cumsum(w ** 2 * ln)])      # int_0^t w^2
    V = np.concatenate([[0.0], np.cumsum(rho ** 2 * ln + c.mass)])  # upsilon[0, t]
    V_plus = V[:-1] + c.mass                                  # upsilon[0, t] just right of a
    I1 = W[-1]
    I2 = np.sum(W[:-1] * ln + w * ln ** 2 / 2)
    I3 = np.sum(w * (b ** 2 - a ** 2) / 2)
    Q1 = Q[-1]
    Q2 = np.sum(Q[:-1] * ln + w ** 2 * ln ** 2 / 2)
    Q3 = np.sum(w ** 2 * (b ** 2 - a ** 2) / 2)
    V1 = V[-1]
    V2 = np.sum(V_plus * ln + rho ** 2 * ln ** 2 / 2)
    V3 = np.sum(rho ** 2 * (b ** 2 - a ** 2) / 2 + a * c.mass)
    return TaylorAtZero(
        theta_dot=float(-I1),
        theta1_dot=0.0,
        phi_dot=float(I2 - I3),
        phi1_dot=float(I1),
        theta_ddot=float(I1 ** 2 - 2 * Q2 - 2 * V2),
        theta1_ddot=float(-2 * Q1 - 2 * V1),
        phi1_ddot=float(I1 ** 2 - 2 * Q3 - 2 * V3),
    )
