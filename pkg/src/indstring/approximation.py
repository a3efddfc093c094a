"""Truncation sequences and the convergence checks that go with them."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import AtomicMeasure, PiecewiseConstantFn, StringSpec, Tail, validate
from .scattering import spectral_density, weyl_m


def _restrict(fn: PiecewiseConstantFn, n: float) -> tuple[list[float], list[float]]:
    keep = [i for i, b in enumerate(fn.breakpoints) if b < n]
    return [fn.breakpoints[i] for i in keep], [fn.values[i] for i in keep]


def truncate(base: StringSpec, n: float) -> StringSpec:
    """Stage ``n``: ``base`` on ``[0, n)``, the unperturbed tail beyond.

    ``base`` is piecewise constant on ``[0, base.R]`` and need not satisfy the
    end conditions of a class-F spec.  Atoms at ``x >= n`` are dropped.  For
    the Lebesgue tail a free cell ``[n, n + 1)`` is appended when ``w(n-) != 0``;
    the data beyond ``n`` are still exactly the tail.  For the Alpha tail ``w`` is
    set to 0 on ``[n - eps, n)`` with ``eps = 1 / (n^2 (1 + max w^2))`` when needed
    (and ``rho`` there to ``1/(1 + 2n)`` if it vanishes), which changes the
    weighted functionals by ``O(1/n)``.
    """
    if not n > 0:
        raise ValueError("n must be positive")
    if base.R <= n:
        return base
    n = float(n)
    wb, wv = _restrict(base.w, n)
    rb, rv = _restrict(base.rho, n)
    atoms = [(x, m) for x, m in zip(base.atoms.positions, base.atoms.masses) if x < n]
    R = n
    if base.tail is Tail.LEBESGUE:
        if wv[-1] != 0.0 or rv[-1] <= 0.0:
            wb, wv = wb + [n], wv + [0.0]
            rb, rv = rb + [n], rv + [1.0]
            R = n + 1.0
    else:
        if wv[-1] != 0.0 or rv[-1] <= 0.0:
            eps = 1.0 / (n * n * (1.0 + max(v * v for v in wv)))
            cut = n - min(eps, 0.5 * (n - max(wb[-1], rb[-1],
                                                  atoms[-1][0] if atoms else 0.0)))
            wv = [v for b, v in zip(wb, wv) if b < cut] + [0.0]
            wb = [b for b in wb if b < cut] + [cut]
            if rv[-1] <= 0.0:
                rb, rv = ([b for b in rb if b < cut] + [cut],
                          [v for b, v in zip(rb, rv) if b < cut] + [1.0 / (1.0 + 2.0 * n)])
    return validate(StringSpec(R, PiecewiseConstantFn(tuple(wb), tuple(wv)),
                               PiecewiseConstantFn(tuple(rb), tuple(rv)),
                               AtomicMeasure.from_pairs(atoms), base.tail))


@dataclass(frozen=True)
class ApproximationSequence:
    base: StringSpec
    cutoffs: tuple[float, ...]
    stages: tuple[StringSpec, ...]

    @classmethod
    def build(cls, base: StringSpec, cutoffs) -> "ApproximationSequence":
        cutoffs = tuple(sorted(float(c) for c in cutoffs))
        return cls(base, cutoffs, tuple(truncate(base, c) for c in cutoffs))


def weyl_convergence(seq: ApproximationSequence, z_samples) -> np.ndarray:
    """``max_z |m_n(z) - m_N(z)|`` for each stage against the last one."""
    z = np.asarray(z_samples, dtype=complex)
    if np.any(z.imag <= 0):
        raise ValueError("z samples must lie in the upper half-plane")
    values = [np.atleast_1d(weyl_m(s, z)) for s in seq.stages]
    return np.array([float(np.max(np.abs(v - values[-1]))) for v in values])


def density_positivity(spec: StringSpec, grid) -> float:
    """Minimum of the spectral density over ``grid``."""
    validate(spec)
    lam = np.asarray(grid, dtype=float)
    if spec.tail is Tail.LEBESGUE and np.any(lam == 0):
        raise ValueError("grid must avoid 0")
    if spec.tail is Tail.ALPHA and np.any(np.abs(lam) <= 1):
        raise ValueError("grid must lie in |lambda| > 1")
    return float(spectral_density(spec, lam).density.min())
