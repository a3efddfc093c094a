"""Coefficient data model for class-F generalized indefinite strings.

A string is described on ``[0, R]`` by the normalized anti-derivative ``w``
and the density root ``rho`` (both piecewise constant, right-open pieces),
a finite set of point masses, and one of two explicitly solvable tails
beyond ``R``:

* ``Tail.LEBESGUE``: ``w = 0`` and ``rho = 1``;
* ``Tail.ALPHA``:    ``w = 0`` and ``rho = 1 / (1 + 2x)``.

``R = 0`` with empty coefficient data denotes the pure tail model.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np


class SpecError(ValueError):
    """Raised when string data violates a class-F invariant."""


class Tail(enum.Enum):
    LEBESGUE = "lebesgue"
    ALPHA = "alpha"


@dataclass(frozen=True)
class PiecewiseConstantFn:
    """Step function with value ``values[i]`` on ``[breakpoints[i], breakpoints[i+1])``.

    The last piece extends to the right end of the owning string (``R``).
    """

    breakpoints: tuple[float, ...] = ()
    values: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(float(b) for b in self.breakpoints))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "PiecewiseConstantFn":
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @classmethod
    def constant(cls, value: float) -> "PiecewiseConstantFn":
        return cls((0.0,), (value,))

    def __len__(self):
        return len(self.values)

    def __call__(self, x):
        """Evaluate with the right-open convention; 0 before the first breakpoint."""
        x = np.asarray(x, dtype=float)
        if not self.values:
            return np.zeros_like(x)
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        vals = np.asarray(self.values)[np.clip(idx, 0, None)]
        return np.where(idx >= 0, vals, 0.0)

    def left_limit(self, x: float) -> float:
        """Value just left of ``x`` (0 at ``x <= 0``)."""
        if x <= 0.0 or not self.values:
            return 0.0
        idx = int(np.searchsorted(self.breakpoints, x, side="left")) - 1
        return self.values[max(idx, 0)]


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite sum of point masses ``sum_j masses[j] * delta(positions[j])``."""

    positions: tuple[float, ...] = ()
    masses: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(float(p) for p in self.positions))
        object.__setattr__(self, "masses", tuple(float(m) for m in self.masses))

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "AtomicMeasure":
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    def __len__(self):
        return len(self.masses)

    @property
    def total(self) -> float:
        return float(sum(self.masses))


@dataclass(frozen=True)
class StringSpec:
    R: float
    w: PiecewiseConstantFn = field(default_factory=PiecewiseConstantFn)
    rho: PiecewiseConstantFn = field(default_factory=PiecewiseConstantFn)
    atoms: AtomicMeasure = field(default_factory=AtomicMeasure)
    tail: Tail = Tail.LEBESGUE

    @classmethod
    def pure(cls, tail: Tail = Tail.LEBESGUE) -> "StringSpec":
        """The unperturbed tail model itself."""
        return cls(R=0.0, tail=tail)

    @property
    def is_pure(self) -> bool:
        return self.R == 0.0


@dataclass(frozen=True)
class MobiusNormalization:
    """Records ``m(z) = eta * m_norm(eta * z / alpha) + c``."""

    c: float = 0.0
    eta: float = 1.0
    alpha: float = 1.0

    def normalized_z(self, z):
        return self.eta * np.asarray(z) / self.alpha

    def original_lambda(self, lam_norm):
        """Spectral point of the original string from a normalized one."""
        return self.alpha * np.asarray(lam_norm) / self.eta

    def recover_m(self, m_norm, z):
        """Weyl function of the original string given ``m_norm`` (a callable)."""
        return self.eta * m_norm(self.normalized_z(z)) + self.c

    def recover_density(self, density_norm, lam):
        return self.eta * density_norm(self.normalized_z(lam))


def _check_fn(fn: PiecewiseConstantFn, R: float, name: str):
    if len(fn.breakpoints) != len(fn.values):
        raise SpecError(f"{name}: breakpoints and values differ in length")
    if R == 0.0:
        if len(fn):
            raise SpecError(f"{name}: pure tail spec (R=0) must carry no pieces")
        return
    if not len(fn):
        raise SpecError(f"{name}: at least one piece required when R > 0")
    bp = fn.breakpoints
    if bp[0] != 0.0:
        raise SpecError(f"{name}: first breakpoint must be 0")
    if any(b1 <= b0 for b0, b1 in zip(bp, bp[1:])):
        raise SpecError(f"{name}: breakpoints must be strictly increasing")
    if bp[-1] >= R:
        raise SpecError(f"{name}: breakpoints must lie in [0, R)")
    if not all(math.isfinite(v) for v in fn.values):
        raise SpecError(f"{name}: non-finite value")


def validate(spec: StringSpec) -> StringSpec:
    """Return ``spec`` unchanged if every class-F invariant holds, else raise SpecError."""
    if not isinstance(spec.tail, Tail):
        raise SpecError("unknown tail model")
    if not (math.isfinite(spec.R) and spec.R >= 0.0):
        raise SpecError("R must be finite and >= 0")
    _check_fn(spec.w, spec.R, "w")
    _check_fn(spec.rho, spec.R, "rho")
    if any(v < 0.0 for v in spec.rho.values):
        raise SpecError("rho must be non-negative")
    pos, mass = spec.atoms.positions, spec.atoms.masses
    if len(pos) != len(mass):
        raise SpecError("atoms: positions and masses differ in length")
    if any(m <= 0.0 or not math.isfinite(m) for m in mass):
        raise SpecError("atom masses must be positive")
    if any(p1 <= p0 for p0, p1 in zip(pos, pos[1:])):
        raise SpecError("atom positions must be strictly increasing")
    if pos and pos[0] < 0.0:
        raise SpecError("atom at negative position")
    if pos and pos[-1] >= spec.R:
        raise SpecError("atom at or beyond R")
    if spec.R > 0.0:
        if spec.w.values[-1] != 0.0:
            raise SpecError("w must vanish near R")
        if spec.rho.values[-1] <= 0.0:
            raise SpecError("rho must be positive near R")
    return spec


class Cells(NamedTuple):
    """Common refinement of the coefficient data.

    Cell ``i`` starts at ``start[i]`` with a jump ``dw[i]`` of ``w`` and a point
    mass ``mass[i]`` located there, followed by a free piece of the given
    ``length`` on which ``w`` and ``rho`` are constant.
    """

    start: np.ndarray
    length: np.ndarray
    w: np.ndarray
    rho: np.ndarray
    dw: np.ndarray
    mass: np.ndarray


def cells(spec: StringSpec, x: float | None = None) -> Cells:
    """Cells covering ``[0, x)`` (default ``x = R``).

    Jumps and atoms located exactly at ``x`` are excluded, so quantities built
    from the cells are left limits at ``x``.
    """
    end = spec.R if x is None else float(x)
    if end > spec.R:
        raise ValueError("x beyond R; use the tail closed forms")
    pts = sorted(set(spec.w.breakpoints) | set(spec.rho.breakpoints) | set(spec.atoms.positions))
    pts = [p for p in pts if p < end]
    if not pts:
        e = np.empty(0)
        return Cells(e, e, e, e, e, e)
    start = np.array(pts)
    stop = np.append(start[1:], end)
    wv = spec.w(start)
    dw = np.diff(np.concatenate([[0.0], wv]))
    atom_mass = dict(zip(spec.atoms.positions, spec.atoms.masses))
    mass = np.array([atom_mass.get(p, 0.0) for p in pts])
    return Cells(start, stop - start, wv, spec.rho(start), dw, mass)


@dataclass(frozen=True)
class Functionals:
    """Closed-form coefficient integrals over ``[0, R]``.

    With the matching tail each equals the corresponding integral over the
    whole half-line, since the tail integrands vanish identically.
    """

    w_sq: float                 # int |w|^2
    rho_dev_sq: float           # int |rho - 1|^2
    singular_mass: float        # int d(upsilon_s)
    w_int: float                # int w
    beta: float                 # int rho - 1/(1+2x)
    w_sq_weighted: float        # int |w|^2 (1+2x)
    rho_alpha_dev_sq_weighted: float  # int |rho - 1/(1+2x)|^2 (1+2x)
    singular_weighted: float    # int (1+2x) d(upsilon_s)
    rho_minus_one: float        # int rho - 1
    rho_sq_minus_one: float     # int rho^2 - 1
    rho_sq_weighted: float      # int rho^2 (1+2x)
    half_log: float             # log(1+2R)/2

    @property
    def lebesgue_sum(self) -> float:
        return self.w_sq + self.rho_dev_sq + self.singular_mass

    @property
    def alpha_sum(self) -> float:
        return self.w_sq_weighted + self.rho_alpha_dev_sq_weighted + self.singular_weighted

    def as_tuple(self) -> tuple[float, ...]:
        return (self.w_sq, self.rho_dev_sq, self.singular_mass, self.w_int, self.beta,
                self.w_sq_weighted, self.rho_alpha_dev_sq_weighted, self.singular_weighted)


def coefficient_functionals(spec: StringSpec) -> Functionals:
    c = cells(validate(spec))
    a = c.start
    b = a + c.length
    ln = c.length
    sq = b ** 2 - a ** 2
    logr = 0.5 * (np.log1p(2 * b) - np.log1p(2 * a))
    pos = np.asarray(spec.atoms.positions)
    mass = np.asarray(spec.atoms.masses)
    rho, w = c.rho, c.w
    return Functionals(
        w_sq=float(np.sum(w ** 2 * ln)),
        rho_dev_sq=float(np.sum((rho - 1) ** 2 * ln)),
        singular_mass=float(mass.sum()),
        w_int=float(np.sum(w * ln)),
        beta=float(np.sum(rho * ln - logr)),
        w_sq_weighted=float(np.sum(w ** 2 * (ln + sq))),
        # |rho - 1/(1+2x)|^2 (1+2x) = rho^2 (1+2x) - 2 rho + 1/(1+2x)
        rho_alpha_dev_sq_weighted=float(np.sum(rho ** 2 * (ln + sq) - 2 * rho * ln + logr)),
        singular_weighted=float(np.sum((1 + 2 * pos) * mass)),
        rho_minus_one=float(np.sum((rho - 1) * ln)),
        rho_sq_minus_one=float(np.sum((rho ** 2 - 1) * ln)),
        rho_sq_weighted=float(np.sum(rho ** 2 * (ln + sq))),
        half_log=0.5 * math.log1p(2 * spec.R),
    )


def _rescale(spec: StringSpec, c: float, eta: float, alpha: float) -> StringSpec:
    w = PiecewiseConstantFn(tuple(alpha * x for x in spec.w.breakpoints),
                            tuple((v - c) / eta for v in spec.w.values))
    rho = PiecewiseConstantFn(tuple(alpha * x for x in spec.rho.breakpoints),
                              tuple(v / eta for v in spec.rho.values))
    atoms = AtomicMeasure(tuple(alpha * x for x in spec.atoms.positions),
                          tuple(m * alpha / eta ** 2 for m in spec.atoms.masses))
    return StringSpec(alpha * spec.R, w, rho, atoms, spec.tail)


def normalize(general: StringSpec, c: float, eta: float, alpha: float = 1.0
              ) -> tuple[StringSpec, MobiusNormalization]:
    """Map a string with tail ``w = c``, ``rho = eta`` (Lebesgue) or
    ``rho = eta / (1 + 2 alpha x)`` (Alpha) onto the normalized class-F form.

    ``general`` carries the data on ``[0, R]`` of the un-normalized string;
    its ``tail`` field selects which of the two tail shapes applies.
    """
    if not eta > 0.0:
        raise SpecError("eta must be positive")
    if not alpha > 0.0:
        raise SpecError("alpha must be positive")
    if general.tail is Tail.LEBESGUE:
        alpha = 1.0
    return validate(_rescale(general, c, eta, alpha)), MobiusNormalization(c, eta, alpha)


def denormalize(spec: StringSpec, norm: MobiusNormalization) -> StringSpec:
    """Inverse of :func:`normalize` (returns the un-normalized data)."""
    c, eta, alpha = norm.c, norm.eta, norm.alpha
    # w = eta * w_norm + c is formed directly so that w_norm = 0 maps to exactly c
    w = PiecewiseConstantFn(tuple(x / alpha for x in spec.w.breakpoints),
                            tuple(eta * v + c for v in spec.w.values))
    rho = PiecewiseConstantFn(tuple(x / alpha for x in spec.rho.breakpoints),
                              tuple(eta * v for v in spec.rho.values))
    atoms = AtomicMeasure(tuple(x / alpha for x in spec.atoms.positions),
                          tuple(m * eta ** 2 / alpha for m in spec.atoms.masses))
    return StringSpec(spec.R / alpha, w, rho, atoms, spec.tail)
