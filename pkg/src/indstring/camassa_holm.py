"""Camassa--Holm isospectral problem ``-g'' + g/4 = z omega g + z^2 upsilon g`` on the half-line.

The substitution ``x = log(1 + t)``, ``f(t) = g(x) sqrt(1 + t)`` turns it into an
indefinite string with

    w(t)   = u(0) - (u' + u)(log(1 + t)) / (1 + t),
    rho(t) = rho_CH(log(1 + t)) / (1 + t),

and atoms ``(x0, m) -> (exp(x0) - 1, exp(-x0) m)``.  The string has tail
``w = u(0)``, ``rho = 1/(1 + t)``, which normalizes with ``c = u(0)``,
``alpha = 1/2``, ``eta = 1``.  Its Weyl function and the Camassa--Holm one
differ by ``-1/(2z)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .model import (AtomicMeasure, MobiusNormalization, PiecewiseConstantFn, SpecError,
                    StringSpec, Tail, normalize)
from .scattering import spectral_density, weyl_m
from .spectral import DEFAULT_SCAN_STEP, gap_eigenvalues

CH_ALPHA = 0.5
PROJECTION_WARN = 2e-2
_GAUSS_POINTS = 8
_PAD = 1e-6


@dataclass(frozen=True)
class CHProfile:
    """``u`` piecewise linear through ``u_nodes`` and ``u(X) exp(X - x)`` beyond the last
    node ``X``; ``rho^2`` piecewise constant from ``(x, value)`` pairs with the
    final value equal to 1; point masses in ``atoms``."""

    u_nodes: tuple[tuple[float, float], ...]
    rho2: tuple[tuple[float, float], ...] = ()
    atoms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "u_nodes", tuple((float(x), float(v)) for x, v in self.u_nodes))
        object.__setattr__(self, "rho2", tuple((float(x), float(v)) for x, v in self.rho2))
        object.__setattr__(self, "atoms", tuple((float(x), float(m)) for x, m in self.atoms))

    @classmethod
    def zero(cls) -> "CHProfile":
        """``u = 0`` with ``upsilon`` the Lebesgue measure."""
        return cls(((0.0, 0.0),))

    def validate(self) -> "CHProfile":
        xs = [x for x, _ in self.u_nodes]
        if not xs or xs[0] != 0.0:
            raise SpecError("u nodes must start at x = 0")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise SpecError("u nodes must be strictly increasing")
        if not all(math.isfinite(v) for _, v in self.u_nodes):
            raise SpecError("u values must be finite")
        if self.rho2:
            rx = [x for x, _ in self.rho2]
            if rx[0] != 0.0 or any(b <= a for a, b in zip(rx, rx[1:])):
                raise SpecError("rho2 breakpoints must start at 0 and increase")
            if any(v < 0 or not math.isfinite(v) for _, v in self.rho2):
                raise SpecError("rho2 values must be finite and non-negative")
            if self.rho2[-1][1] != 1.0:
                raise SpecError("rho2 must equal 1 beyond its last breakpoint")
        ax = [x for x, _ in self.atoms]
        if any(x < 0 for x in ax) or any(b <= a for a, b in zip(ax, ax[1:])):
            raise SpecError("atom positions must be non-negative and increasing")
        if any(m <= 0 for _, m in self.atoms):
            raise SpecError("atom masses must be positive")
        return self

    @property
    def u0(self) -> float:
        return self.u_nodes[0][1]

    @property
    def support(self) -> float:
        """``X`` beyond which ``u' + u = 0``, ``rho = 1`` and no atoms remain."""
        pts = [self.u_nodes[-1][0]] + [x for x, _ in self.rho2] + [x for x, _ in self.atoms]
        return max(pts)

    def u(self, x):
        x = np.asarray(x, dtype=float)
        xs, vs = np.array(self.u_nodes).T
        inside = np.interp(x, xs, vs)
        return np.where(x <= xs[-1], inside, vs[-1] * np.exp(xs[-1] - np.maximum(x, xs[-1])))

    def u_prime_plus_u(self, x):
        """``u' + u`` with left-continuous ``u'`` at the nodes; 0 beyond the last node."""
        x = np.asarray(x, dtype=float)
        xs, vs = np.array(self.u_nodes).T
        if len(xs) == 1:
            return np.zeros_like(x)
        slopes = np.diff(vs) / np.diff(xs)
        idx = np.clip(np.searchsorted(xs, x, side="left") - 1, 0, len(slopes) - 1)
        val = slopes[idx] + np.interp(x, xs, vs)
        return np.where(x <= xs[-1], val, 0.0)

    def rho(self, x):
        x = np.asarray(x, dtype=float)
        if not self.rho2:
            return np.ones_like(x)
        rx, rv = np.array(self.rho2).T
        idx = np.searchsorted(rx, x, side="right") - 1
        return np.sqrt(rv[np.clip(idx, 0, None)])


def _x_breaks(profile: CHProfile) -> np.ndarray:
    pts = {x for x, _ in profile.u_nodes} | {x for x, _ in profile.rho2}
    return np.array(sorted(pts))


def default_grid(profile: CHProfile, cells_per_unit: int = 64) -> np.ndarray:
    """``t``-grid through every image of a profile breakpoint, uniform in ``x``
    between them with about ``cells_per_unit`` cells per unit of ``x``."""
    profile.validate()
    xb = _x_breaks(profile)
    X = profile.support
    xb = np.union1d(xb, [X])
    xs = [np.array([0.0])]
    for a, b in zip(xb[:-1], xb[1:]):
        n = max(1, int(math.ceil((b - a) * cells_per_unit)))
        xs.append(np.linspace(a, b, n + 1)[1:])
    x = np.concatenate(xs)
    return np.expm1(x)


class CHTransformResult(NamedTuple):
    string_spec: StringSpec
    normalization: MobiusNormalization
    projection_error: float
    grid: np.ndarray


def _piece_integrals(profile: CHProfile, sa: np.ndarray, sb: np.ndarray):
    """Exact ``int (u' + u)(s) ds`` and ``int rho(s) ds`` over sub-intervals not
    crossing a profile breakpoint (given in the ``s = log(1+t)`` variable)."""
    xs, vs = np.array(profile.u_nodes).T
    mid = 0.5 * (sa + sb)
    if len(xs) > 1:
        slopes = np.diff(vs) / np.diff(xs)
        idx = np.clip(np.searchsorted(xs, mid, side="right") - 1, 0, len(slopes) - 1)
        p = slopes[idx]
        u_left = vs[idx] + p * (sa - xs[idx])
        # (u' + u) = p + u_left + p (s - sa) on the piece
        wint = (p + u_left) * (sb - sa) + 0.5 * p * (sb - sa) ** 2
        wint = np.where(mid < xs[-1], wint, 0.0)
    else:
        wint = np.zeros_like(sa)
    rint = profile.rho(mid) * (sb - sa)
    return wint, rint


def ch_transform(profile: CHProfile, grid: Sequence[float] | None = None) -> CHTransformResult:
    """Transformed string, L2-projected onto piecewise constants over ``grid``
    (a partition of ``[0, T]`` with ``T >= exp(X) - 1``), then normalized."""
    profile.validate()
    grid = default_grid(profile) if grid is None else np.asarray(grid, dtype=float)
    X = profile.support
    T_min = math.expm1(X)
    if len(grid) == 0 or grid[0] != 0.0 or np.any(np.diff(grid) <= 0):
        raise SpecError("grid must start at 0 and increase strictly")
    if grid[-1] < T_min * (1 - 1e-12):
        raise SpecError(f"grid must reach exp(X) - 1 = {T_min:.6g}")
    c = profile.u0
    T = float(grid[-1])
    if T == 0.0 and not profile.atoms:
        spec, norm = normalize(StringSpec.pure(Tail.ALPHA), c=c, eta=1.0, alpha=CH_ALPHA)
        return CHTransformResult(spec, norm, 0.0, grid)
    # a short extra cell beyond T, where w = u(0) exactly, so that the
    # normalized w vanishes near the right end; its rho is the mean of 1/(1+t)
    cells = np.append(grid, T + _PAD * (1 + T))

    # common refinement with the images of the profile breakpoints
    tb = np.expm1(_x_breaks(profile))
    fine = np.union1d(cells, tb[tb < T])
    sa, sb = np.log1p(fine[:-1]), np.log1p(fine[1:])
    wint, rint = _piece_integrals(profile, sa, sb)
    owner = np.searchsorted(cells, fine[:-1], side="right") - 1
    dt = np.diff(cells)
    w_mean = c - np.bincount(owner, wint, len(dt)) / dt
    rho_mean = np.bincount(owner, rint, len(dt)) / dt

    # L2 distance by Gauss-Legendre on every fine sub-interval
    xg, wg = np.polynomial.legendre.leggauss(_GAUSS_POINTS)
    ta, tz = fine[:-1, None], fine[1:, None]
    t = 0.5 * (ta + tz) + 0.5 * (tz - ta) * xg
    w_exact = c - profile.u_prime_plus_u(np.log1p(t)) / (1 + t)
    r_exact = profile.rho(0.5 * (sa + sb))[:, None] / (1 + t)
    err2 = ((w_exact - w_mean[owner, None]) ** 2 + (r_exact - rho_mean[owner, None]) ** 2) @ wg
    proj_err = float(math.sqrt(np.sum(err2 * 0.5 * np.diff(fine))))

    bps = tuple(cells[:-1])
    R = float(cells[-1])
    w_vals, r_vals = w_mean, rho_mean
    atoms = AtomicMeasure(tuple(math.expm1(x) for x, _ in profile.atoms),
                          tuple(math.exp(-x) * m for x, m in profile.atoms))
    raw = StringSpec(R, PiecewiseConstantFn(bps, tuple(w_vals)),
                     PiecewiseConstantFn(bps, tuple(r_vals)), atoms, Tail.ALPHA)
    spec, norm = normalize(raw, c=c, eta=1.0, alpha=CH_ALPHA)
    if proj_err > PROJECTION_WARN:
        warnings.warn(f"grid too coarse: projection error {proj_err:.3g}", stacklevel=2)
    return CHTransformResult(spec, norm, proj_err, grid)


def ch_weyl_m(profile: CHProfile, z, grid: Sequence[float] | None = None,
              transform: CHTransformResult | None = None):
    """Camassa--Holm Weyl function: string Weyl function mapped back, minus ``1/(2z)``."""
    res = ch_transform(profile, grid) if transform is None else transform
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag == 0):
        raise ValueError("z must be non-real")
    m_tilde = res.normalization.recover_m(lambda zeta: weyl_m(res.string_spec, zeta), z)
    return m_tilde - 0.5 / z


@dataclass(frozen=True)
class CHSpectrum:
    lam: np.ndarray
    density: np.ndarray
    eig_neg: tuple[float, ...]
    eig_pos: tuple[float, ...]
    normalization: MobiusNormalization = field(default_factory=MobiusNormalization)

    @property
    def eigenvalues(self) -> tuple[float, ...]:
        return self.eig_neg + self.eig_pos


def ch_spectrum(profile: CHProfile, lam_samples, grid: Sequence[float] | None = None,
                step: float = DEFAULT_SCAN_STEP,
                transform: CHTransformResult | None = None) -> CHSpectrum:
    """Density for ``|lambda| > 1/2`` and the eigenvalues in ``(-1/2, 1/2)``.

    The point mass at 0 introduced by the ``-1/(2z)`` shift is not listed.
    """
    res = ch_transform(profile, grid) if transform is None else transform
    lam = np.asarray(lam_samples, dtype=float)
    if np.any(np.abs(lam) <= CH_ALPHA):
        raise ValueError("density samples need |lambda| > 1/2")
    norm = res.normalization
    dens = norm.recover_density(lambda x: spectral_density(res.string_spec, x).density, lam)
    en, ep = gap_eigenvalues(res.string_spec, step)
    to_ch = norm.original_lambda
    return CHSpectrum(lam, np.asarray(dens), tuple(float(to_ch(e)) for e in en),
                      tuple(float(to_ch(e)) for e in ep), norm)


def transformed_coefficients(profile: CHProfile, t):
    """Exact ``(w(t), rho(t))`` of the transformed string before projection."""
    t = np.asarray(t, dtype=float)
    s = np.log1p(t)
    return profile.u0 - profile.u_prime_plus_u(s) / (1 + t), profile.rho(s) / (1 + t)
