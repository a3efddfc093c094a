"""Gap spectrum, zeros of ``a``, trace identities and related checks.

Integrals of ``log|a|`` over the essential spectrum are formed from one
adaptive sampling of ``log|a|`` (:class:`LogModulus`).  For the Alpha tail the
variable is ``lambda = +-cosh(t)`` so that ``d lambda / k(lambda) = +-dt``; for
the Lebesgue tail it is ``lambda = +-t``.  Beyond a cutoff ``Lambda`` the
oscillating ``log|a|`` is replaced by its running mean
``d log|lambda| + M + N / |lambda|``, with the integer growth order ``d`` and
the coefficients ``M``, ``N`` read off from window averages over
``[Lambda/4, Lambda]``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import brentq

from . import _kernels, quadrature
from .model import StringSpec, Tail, cells, coefficient_functionals, validate
from .ode import solution_matrix
from .scattering import branch_k, log_abs_a, scattering_ab, zhukovsky

DEFAULT_CUTOFF = 1000.0
MAX_CUTOFF = 32000.0
DEFAULT_SCAN_STEP = 1e-3
ROOT_XTOL = 1e-13
_TAIL_SPAN = 40.0        # tail integration length in log(lambda) or t
_TAIL_PANELS = 80


class QuadratureError(RuntimeError):
    """An integral could not be brought within the requested tolerance."""


class InterlacingError(RuntimeError):
    """A zero of ``a`` expected between two eigenvalues was not found."""


class ScanResolutionWarning(UserWarning):
    pass


# --------------------------------------------------------------------------
# log|a| on the essential spectrum


def _real_log_abs_a(spec: StringSpec, lam: np.ndarray, k: np.ndarray | None = None) -> np.ndarray:
    """``log|a(lam)|`` for real ``lam`` in the essential spectrum.

    The Jost solution is carried back from ``R`` as a single vector and
    ``log|a| = log(1 + |b|^2) / 2`` is used (``|a|^2 = 1 + |b|^2`` there).  Both
    steps avoid the cancellation that forming ``a`` from the full transfer
    matrix suffers once its entries are large, and the ``|b|^2`` form keeps the
    ``O(lambda^2)`` behaviour of the Lebesgue case at 0 to full relative
    precision.  For the Alpha tail ``k`` (real, same sign as ``lam``) may be
    passed explicitly so that points with ``cosh(t)`` rounding to 1 stay well
    defined.
    """
    lam = np.asarray(lam, dtype=float)
    c = cells(spec)
    z = lam.astype(complex)
    if spec.tail is Tail.LEBESGUE:
        f0, f0p, logs = _kernels.jost_back(z, c.length, c.rho, c.dw, c.mass, 1.0, 1j * z)
        with np.errstate(divide="ignore"):
            log_b = np.log(np.abs(1j * z * f0 - f0p)) + logs - np.log(2.0 * np.abs(lam))
    else:
        if k is None:
            k = np.real(branch_k(lam))
        q = 1.0 + 2.0 * spec.R
        ik1 = 1.0 + 1j * np.asarray(k, dtype=float)
        f0, f0p, logs = _kernels.jost_back(z, c.length, c.rho, c.dw, c.mass, 1.0, ik1 / q)
        with np.errstate(divide="ignore"):
            log_b = (np.log(np.abs(ik1 * f0 - f0p)) + logs + 0.5 * math.log(q)
                     - np.log(2.0 * np.abs(k)))
    return 0.5 * np.logaddexp(0.0, 2.0 * log_b)


def _smooth_step(x):
    """C-infinity step: 0 for ``x <= 0``, 1 for ``x >= 1``."""
    x = np.clip(x, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(x > 0, np.exp(-1.0 / x), 0.0)
        b = np.where(x < 1, np.exp(-1.0 / (1.0 - x)), 0.0)
    return a / (a + b)


def _phase_length(spec: StringSpec) -> float:
    c = cells(spec)
    return float(np.sum(c.rho * c.length))


def _window_mean_log(lo: float, hi: float) -> float:
    return (hi * math.log(hi) - hi - lo * math.log(lo) + lo) / (hi - lo)


@dataclass(frozen=True)
class LogModulus:
    """Adaptive samples of ``log|a(+-lambda(t))|`` plus the large-``|lambda|`` model."""

    tail: Tail
    panels: quadrature.PanelSample     # values[0]: +lambda branch, values[1]: -lambda branch
    cutoff: float                      # Lambda
    degree: tuple[int, int]
    degree_raw: tuple[float, float]
    offset: tuple[float, float]
    decay: tuple[float, float] = (0.0, 0.0)   # coefficient of 1/|lambda|

    def lam(self, t):
        return np.cosh(t) if self.tail is Tail.ALPHA else np.asarray(t, dtype=float)

    @property
    def t_cut(self) -> float:
        return math.acosh(self.cutoff) if self.tail is Tail.ALPHA else self.cutoff

    def _combine(self, g, lam, lp, lm):
        """Integrand in the ``t`` measure for weight ``g`` on both branches."""
        if self.tail is Tail.ALPHA:
            return g(lam) * lp - g(-lam) * lm
        return g(lam) * lp + g(-lam) * lm

    def _model(self, lam):
        """Mean model of ``log|a(+-lam)|`` for ``lam > 0``; shape ``(2,) + lam.shape``."""
        loglam = np.log(lam)
        return np.stack([d * loglam + m + n / lam
                         for d, m, n in zip(self.degree, self.offset, self.decay)])

    def _tail(self, g, t0: float):
        """Integral of the mean model from ``t0`` on."""
        edges = np.linspace(0.0, _TAIL_SPAN, _TAIL_PANELS + 1)
        if self.tail is Tail.ALPHA:
            t = t0 + quadrature.panel_nodes(edges[:-1], edges[1:])
            lam = np.cosh(t)
            jac = 1.0
        else:
            lam = t0 * np.exp(quadrature.panel_nodes(edges[:-1], edges[1:]))
            jac = lam
        model = self._model(lam)
        v = self._combine(g, lam, model[0], model[1]) * jac
        k, _ = quadrature.gauss_kronrod(v, edges[:-1], edges[1:])
        return k.sum(axis=-1)

    def _blended(self, g, lo: float, hi: float):
        """Body integral with ``log|a|`` faded smoothly into the model over ``[lo, hi]``."""
        p = self.panels
        lam = self.lam(p.nodes)
        keep = _smooth_step((hi - lam) / (hi - lo))
        vals = keep * p.values + (1.0 - keep) * self._model(lam)
        v = self._combine(g, lam, vals[0], vals[1])
        k, _ = quadrature.gauss_kronrod(v, p.a, p.b)
        t_hi = math.acosh(hi) if self.tail is Tail.ALPHA else hi
        inside = p.b <= t_hi * (1 + 1e-14)
        return k[..., inside].sum(axis=-1) + self._tail(g, t_hi)

    def integral(self, g: Callable[[np.ndarray], np.ndarray]):
        """``int g(lambda) log|a(lambda)| d lambda`` (Lebesgue tail) or
        ``int g(lambda) log|a(lambda)| / k(lambda) d lambda`` (Alpha tail) over the
        essential spectrum.

        ``g`` acts on signed real arrays and may prepend axes (for example one
        per complex sample point).  Returns ``(value, truncation_estimate)``;
        the estimate compares against a fade-out one octave lower.
        """
        full = self._blended(g, self.cutoff / 2, self.cutoff)
        half = self._blended(g, self.cutoff / 4, self.cutoff / 2)
        return full, np.abs(full - half)

    @property
    def quadrature_error(self) -> float:
        return self.panels.error


def _initial_edges(spec: StringSpec, cutoff: float) -> np.ndarray:
    h = min(0.25, 0.5 / (1.0 + 2.0 * _phase_length(spec)))

    def uniform(lo, hi):
        return np.linspace(lo, hi, max(2, int(math.ceil((hi - lo) / h))) + 1)

    q = cutoff / 4
    if spec.tail is Tail.LEBESGUE:
        lam = np.concatenate([uniform(0.0, q), uniform(q, 2 * q)[1:], uniform(2 * q, cutoff)[1:]])
        return lam
    lam = np.concatenate([uniform(2.0, q), uniform(q, 2 * q)[1:], uniform(2 * q, cutoff)[1:]])
    geo = 1e-12 * 2.0 ** np.arange(0, 60)
    geo = geo[geo < 0.05]
    mid = np.linspace(0.05, math.acosh(2.0), 27)
    return np.concatenate([[0.0], geo, mid[:-1], np.arccosh(lam)])


def sample_log_modulus(spec: StringSpec, cutoff: float = DEFAULT_CUTOFF,
                       tol: float = 1e-10) -> LogModulus:
    validate(spec)
    if cutoff < 16:
        raise ValueError("cutoff must be at least 16")
    alpha = spec.tail is Tail.ALPHA

    def f(t):
        if alpha:
            lam, k = np.cosh(t), np.sinh(t)
            both = _real_log_abs_a(spec, np.concatenate([lam, -lam]), np.concatenate([k, -k]))
        else:
            both = _real_log_abs_a(spec, np.concatenate([t, -t]))
        return both.reshape((2,) + t.shape)

    def indicator(t, v):
        if alpha:
            return v / np.cosh(t)
        return v / (t * t)

    panels = quadrature.adaptive_panels(f, _initial_edges(spec, cutoff), tol, indicator)

    # smooth-window averages over [Lambda/4, Lambda/2] and [Lambda/2, Lambda];
    # a C-infinity bump makes the oscillating part average out super-algebraically
    lam = np.cosh(panels.nodes) if alpha else panels.nodes
    jac = np.sinh(panels.nodes) if alpha else np.ones_like(panels.nodes)
    rows = []

    def quad(v):
        return quadrature.gauss_kronrod(v, panels.a, panels.b)[0].sum(axis=-1)

    for lo, hi in ((cutoff / 4, cutoff / 2), (cutoff / 2, cutoff)):
        x = np.clip((lam - lo) / (hi - lo), 0.0, 1.0)
        with np.errstate(divide="ignore", over="ignore"):
            bump = np.where((x > 0) & (x < 1), np.exp(-1.0 / (x * (1.0 - x))), 0.0) * jac
        norm = quad(bump)
        rows.append((quad(bump * panels.values) / norm, quad(bump * np.log(lam)) / norm,
                     quad(bump / lam) / norm))
    (m1, l1, r1), (m2, l2, r2) = rows
    raw = (m2 - m1) / (l2 - l1)
    deg = np.maximum(np.rint(raw), 0.0)
    # remaining m_j - d l_j = M + N r_j
    decay = ((m2 - deg * l2) - (m1 - deg * l1)) / (r2 - r1)
    offset = m2 - deg * l2 - decay * r2
    return LogModulus(spec.tail, panels, float(cutoff),
                      (int(deg[0]), int(deg[1])), (float(raw[0]), float(raw[1])),
                      (float(offset[0]), float(offset[1])), (float(decay[0]), float(decay[1])))


# --------------------------------------------------------------------------
# gap spectrum (Alpha tail)


def _gap_functions(spec: StringSpec, lam: np.ndarray):
    """Real functions on ``[-1, 1]`` whose zeros are the eigenvalues and the zeros of ``a``.

    Both are the scaled forms of ``f(lam, 0)`` and of ``2 i k a(lam) / P``;
    the positive factor ``exp(logscale)`` is dropped.
    """
    lam = np.asarray(lam, dtype=float)
    s = solution_matrix(spec, lam.astype(complex))
    q = 1.0 + 2.0 * spec.R
    root = np.sqrt(np.clip(1.0 - lam * lam, 0.0, None))
    ik1 = 1.0 - root
    eig = np.real(s.D) - ik1 * np.real(s.B) / q
    kap = (ik1 * np.real(s.A) / q - lam * np.real(s.Cz) + lam * lam * np.real(s.B) / q
           - (1.0 + root) * np.real(s.D))
    return eig, kap


def _scan_grid(step: float) -> np.ndarray:
    # uniform in the angle phi with lambda = sin(phi): resolution near +-1 where
    # the natural variable sqrt(1 - lambda^2) varies fastest
    n = max(8, int(math.ceil((math.pi / 2) / step)))
    phi = np.linspace(0.0, math.pi / 2, n + 1)[1:]
    pos = np.concatenate([[1e-9], np.sin(phi)])
    pos[-1] = 1.0
    return pos


def _roots(fun, grid, values, label):
    roots, suspects = [], []
    sgn = np.sign(values)
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        roots.append(brentq(fun, grid[i], grid[i + 1], xtol=ROOT_XTOL,
                            rtol=4 * np.finfo(float).eps))
    for i in np.nonzero(values == 0.0)[0]:
        roots.append(float(grid[i]))
    # a parabola through three same-sign samples dipping across zero hints at a
    # root pair closer than the scan step
    v0, v1, v2 = values[:-2], values[1:-1], values[2:]
    same = (np.sign(v0) == np.sign(v1)) & (np.sign(v1) == np.sign(v2)) & (v1 != 0)
    x0, x1, x2 = grid[:-2], grid[1:-1], grid[2:]
    with np.errstate(divide="ignore", invalid="ignore"):
        d01 = (v1 - v0) / (x1 - x0)
        d12 = (v2 - v1) / (x2 - x1)
        c2 = (d12 - d01) / (x2 - x0)
        c1 = d01 - c2 * (x0 + x1)
        xv = -c1 / (2 * c2)
        vv = v1 + (xv - x1) * (d01 + c2 * (xv - x0))
    inside = same & (c2 != 0) & (xv > x0) & (xv < x2) & (np.sign(vv) != np.sign(v1))
    for i in np.nonzero(inside)[0]:
        suspects.append(float(x1[i]))
    if suspects:
        warnings.warn(f"{label}: possible root pair below scan resolution near {suspects}",
                      ScanResolutionWarning, stacklevel=3)
    return sorted(roots), suspects


@dataclass(frozen=True)
class GapSpectrum:
    eig_neg: tuple[float, ...]
    eig_pos: tuple[float, ...]
    a_zeros: tuple[float, ...]
    interlace_ok: tuple[bool, ...]
    suspects: tuple[float, ...] = field(default=())

    @property
    def eigenvalues(self) -> tuple[float, ...]:
        return self.eig_neg + self.eig_pos

    @property
    def interlacing_holds(self) -> bool:
        return all(self.interlace_ok)


def _require_alpha(spec):
    validate(spec)
    if spec.tail is not Tail.ALPHA:
        raise ValueError("gap spectrum exists only for the Alpha tail")


def _scan(spec, which: int, step: float):
    _require_alpha(spec)
    pos = _scan_grid(step)
    grid = np.concatenate([-pos[::-1], pos])
    vals = _gap_functions(spec, grid)[which]

    def fun(x):
        return float(_gap_functions(spec, np.array([x]))[which][0])

    label = "eigenvalue scan" if which == 0 else "zeros of a"
    # the two half-grids are scanned separately: 0 is never a root
    n = len(pos)
    rn, sn = _roots(fun, grid[:n], vals[:n], label)
    rp, sp = _roots(fun, grid[n:], vals[n:], label)
    return rn, rp, sn + sp


def gap_eigenvalues(spec: StringSpec, step: float = DEFAULT_SCAN_STEP):
    """Eigenvalues in ``(-1, 1)``: ``(negative ones ascending, positive ones ascending)``."""
    rn, rp, _ = _scan(spec, 0, step)
    return tuple(r for r in rn if -1 < r < 0), tuple(r for r in rp if 0 < r < 1)


def a_zeros(spec: StringSpec, step: float = DEFAULT_SCAN_STEP) -> tuple[float, ...]:
    """Zeros of ``a`` in ``(-1, 1)`` (simple zeros, located by sign change)."""
    rn, rp, _ = _scan(spec, 1, step)
    return tuple(r for r in rn + rp if -1 < r < 1)


def _interlacing(eig_neg, eig_pos, kappa) -> tuple[bool, ...]:
    kap = np.asarray(kappa)
    ok = []
    for side in (sorted(eig_neg, key=abs), sorted(eig_pos, key=abs)):
        prev = 0.0
        for e in side:
            lo, hi = min(prev, e), max(prev, e)
            ok.append(bool(np.any((kap > lo) & (kap < hi))))
            prev = e
    return tuple(ok)


def gap_spectrum(spec: StringSpec, step: float = DEFAULT_SCAN_STEP) -> GapSpectrum:
    en, ep, s1 = _scan(spec, 0, step)
    kn, kp, s2 = _scan(spec, 1, step)
    en = tuple(r for r in en if -1 < r < 0)
    ep = tuple(r for r in ep if 0 < r < 1)
    kap = tuple(r for r in kn + kp if -1 < r < 1)
    return GapSpectrum(en, ep, kap, _interlacing(en, ep, kap), tuple(s1 + s2))


# --------------------------------------------------------------------------
# trace identities


@dataclass(frozen=True)
class TraceReport:
    identity: str
    lhs: float
    rhs: float
    residual: float
    panels: int
    truncation_error: float
    quadrature_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


def g_function(s):
    """``s / (1 - s^2) + log((1 - s) / (1 + s)) / 2`` on ``[0, 1)``."""
    s = np.asarray(s, dtype=float)
    direct = s / (1.0 - s * s) - np.arctanh(s)
    # sum_{n>=1} 2n/(2n+1) s^(2n+1) below 0.1, where the closed form cancels
    s2 = s * s
    series = np.zeros_like(s)
    for n in range(12, 0, -1):
        series = (2 * n / (2 * n + 1) + series) * s2
    return np.where(np.abs(s) < 0.1, series * s, direct)


def _weighted_integrals(spec, cutoff, logmod, weights, factors, tol):
    """``(log modulus, values, truncation estimates)``; the cutoff doubles up to
    ``MAX_CUTOFF`` while an estimate exceeds ``tol`` (only when ``logmod`` is not given)."""
    while True:
        lm = sample_log_modulus(spec, cutoff) if logmod is None else logmod
        vals, ests = [], []
        for g, fac in zip(weights, factors):
            val, trunc = lm.integral(g)
            vals.append(float(val))
            ests.append(abs(fac) * float(trunc))
        if logmod is not None or max(ests) <= tol or 2 * cutoff > MAX_CUTOFF:
            return lm, vals, ests
        cutoff *= 2


def trace_formula_lebesgue(spec: StringSpec, tol: float = 1e-6, cutoff: float = DEFAULT_CUTOFF,
                           logmod: LogModulus | None = None) -> TraceReport:
    """``(2/pi) int log|a| / lambda^2 = int w^2 + int (rho - 1)^2 + singular mass``."""
    validate(spec)
    if spec.tail is not Tail.LEBESGUE:
        raise ValueError("Lebesgue trace identity needs the Lebesgue tail")
    lm, (val,), (est,) = _weighted_integrals(spec, cutoff, logmod, (lambda x: 1.0 / (x * x),),
                                             (2.0 / math.pi,), tol)
    lhs = 2.0 / math.pi * val
    rhs = coefficient_functionals(spec).lebesgue_sum
    if est > tol:
        raise QuadratureError(f"truncation estimate {est:.3g} exceeds tolerance {tol:.3g}")
    return TraceReport("lebesgue", lhs, rhs, abs(lhs - rhs), lm.panels.n_panels, est,
                       lm.quadrature_error, tol)


def trace_formulas_alpha(spec: StringSpec, tol: float = 1e-6, gap: GapSpectrum | None = None,
                         cutoff: float = DEFAULT_CUTOFF, logmod: LogModulus | None = None,
                         step: float = DEFAULT_SCAN_STEP) -> tuple[TraceReport, ...]:
    """The three Alpha-tail identities: first moment, ``beta`` and weighted second moment."""
    _require_alpha(spec)
    gap = gap_spectrum(spec, step) if gap is None else gap
    if not gap.interlacing_holds:
        raise InterlacingError(
            f"zero of a missing between eigenvalues: eigenvalues {gap.eigenvalues}, "
            f"zeros {gap.a_zeros}, pair flags {gap.interlace_ok}")
    fn = coefficient_functionals(spec)
    kap = np.asarray(gap.a_zeros, dtype=float)
    s = np.sqrt(1.0 - kap * kap)
    sums = (float(np.sum(-s / kap)), float(np.sum(np.arctanh(s))), float(np.sum(g_function(s))))
    weights = (lambda x: 1.0 / (x * x), lambda x: 1.0 / x, lambda x: (x * x - 1.0) / x ** 3)
    factors = (1.0 / math.pi, -1.0 / math.pi, 2.0 / math.pi)
    rhs = (fn.w_int, fn.beta, fn.alpha_sum)
    names = ("alpha-first-moment", "alpha-beta", "alpha-second-moment")
    reports = []
    lm, vals, ests = _weighted_integrals(spec, cutoff, logmod, weights, factors, tol)
    for name, ssum, val, est, fac, r in zip(names, sums, vals, ests, factors, rhs):
        lhs = ssum + fac * val
        if est > tol:
            raise QuadratureError(f"{name}: truncation estimate {est:.3g} exceeds {tol:.3g}")
        reports.append(TraceReport(name, lhs, r, abs(lhs - r), lm.panels.n_panels, est,
                                   lm.quadrature_error, tol))
    return tuple(reports)


# --------------------------------------------------------------------------
# Taylor coefficients of a at zero


@dataclass(frozen=True)
class TaylorReport:
    a0: complex
    a_dot_fd: complex
    a_dot_closed: complex
    a_ddot_fd: complex | None
    a_ddot_closed: complex | None

    @staticmethod
    def _rel(x, y):
        # relative error; absolute when the closed form vanishes
        return abs(x - y) / abs(y) if y != 0 else abs(x)

    @property
    def rel_error_first(self) -> float:
        return self._rel(self.a_dot_fd, self.a_dot_closed)

    @property
    def rel_error_second(self) -> float | None:
        if self.a_ddot_closed is None:
            return None
        return self._rel(self.a_ddot_fd, self.a_ddot_closed)


def a_taylor_checks(spec: StringSpec, h1: float = 1e-5, h2: float = 1e-3) -> TaylorReport:
    """Richardson finite differences of ``a`` at 0 against the closed forms."""
    validate(spec)
    if h1 <= 1e-12 or h2 <= 1e-8:
        raise ValueError("finite-difference step too small")

    def a(z):
        return scattering_ab(spec, np.asarray(z, dtype=complex)).a

    a1 = a([2 * h1, h1, -h1, -2 * h1])
    d1 = (-a1[0] + 8 * a1[1] - 8 * a1[2] + a1[3]) / (12 * h1)
    a2 = a([2 * h2, h2, 0.0, -h2, -2 * h2])
    d2 = (-a2[0] + 16 * a2[1] - 30 * a2[2] + 16 * a2[3] - a2[4]) / (12 * h2 * h2)
    fn = coefficient_functionals(spec)
    if spec.tail is Tail.LEBESGUE:
        closed1 = -0.5j * (fn.w_sq + fn.rho_sq_minus_one + fn.singular_mass)
        return TaylorReport(complex(a2[2]), complex(d1), closed1, complex(d2), None)
    closed2 = (fn.w_int ** 2 - fn.w_sq_weighted - fn.rho_sq_weighted + fn.half_log
               - fn.singular_weighted)
    return TaylorReport(complex(a2[2]), complex(d1), complex(fn.w_int), complex(d2),
                        complex(closed2))


# --------------------------------------------------------------------------
# Lieb-Thirring, asymptotic type, factorization


class LiebThirring(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def lieb_thirring_check(spec: StringSpec, gap: GapSpectrum | None = None,
                        step: float = DEFAULT_SCAN_STEP) -> LiebThirring:
    _require_alpha(spec)
    if gap is None:
        eig = np.asarray(sum(gap_eigenvalues(spec, step), ()), dtype=float)
    else:
        eig = np.asarray(gap.eigenvalues, dtype=float)
    lhs = float(2.0 / 3.0 * np.sum((1.0 - eig * eig) ** 1.5))
    rhs = coefficient_functionals(spec).alpha_sum
    return LiebThirring(lhs, rhs, lhs <= rhs + 1e-12)


class AsymptoticType(NamedTuple):
    estimate: float
    target: float
    error: float


def asymptotic_type(spec: StringSpec, heights=(1e2, 1e3, 1e4)) -> AsymptoticType:
    """``lim (1/y) log|a(iy)|`` by linear extrapolation in ``1/y``."""
    validate(spec)
    y = np.asarray(heights, dtype=float)
    vals = log_abs_a(spec, 1j * y) / y
    slope, intercept = np.polyfit(1.0 / y, vals, 1)
    fn = coefficient_functionals(spec)
    target = fn.rho_minus_one if spec.tail is Tail.LEBESGUE else fn.beta
    return AsymptoticType(float(intercept), target, abs(float(intercept) - target))


class FactorizationReport(NamedTuple):
    constant: complex
    modulus_error: float
    residual: float
    relative_errors: np.ndarray


def factorized_a(spec: StringSpec, z, gap: GapSpectrum, logmod: LogModulus):
    """Blaschke product times outer factor, without the unimodular constant."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    kz = branch_k(z)
    zz = zhukovsky(z)
    blaschke = np.ones_like(z)
    for kap in gap.a_zeros:
        zk = complex(zhukovsky(kap))
        blaschke = blaschke * (zz - zk) / (zz - np.conj(zk))
    zc = z[:, None, None]
    integral, _ = logmod.integral(lambda x: 1.0 / (x - zc))
    beta = coefficient_functionals(spec).beta
    return blaschke * np.exp(-1j * beta * kz + kz * integral / (math.pi * 1j))


def reconstruct_a(spec: StringSpec, z_samples, gap: GapSpectrum | None = None,
                  logmod: LogModulus | None = None,
                  step: float = DEFAULT_SCAN_STEP) -> FactorizationReport:
    """Compare ``a`` with its factorization at ``z_samples``; the constant is fitted
    at the first sample."""
    _require_alpha(spec)
    z = np.atleast_1d(np.asarray(z_samples, dtype=complex))
    gap = gap_spectrum(spec, step) if gap is None else gap
    logmod = sample_log_modulus(spec) if logmod is None else logmod
    direct = scattering_ab(spec, z).a
    fact = factorized_a(spec, z, gap, logmod)
    c = direct[0] / fact[0]
    rel = np.abs(direct - c * fact) / np.abs(direct)
    return FactorizationReport(complex(c), abs(abs(c) - 1.0), float(rel.max()), rel)
