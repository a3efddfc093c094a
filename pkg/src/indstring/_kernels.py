"""Transfer-matrix products, the hot loop of every spectral computation.

The accumulated solution matrix acting on ``(f, f')`` is stored as
``(A, B, Cz, D)`` meaning ``[[A, B], [z*Cz, D]]``: the lower-left entry is
carried divided by ``z`` so that ``theta^[1] / z`` stays regular at ``z = 0``.
Entries are additionally scaled by ``exp(-logscale)`` to survive ``|Im z|``
in the thousands.

Two interchangeable implementations exist: a numba ``@njit`` kernel looping
over spectral points, and a numpy path vectorized over spectral points.
Set ``INDSTRING_NUMBA=0`` to force the numpy path.
"""
from __future__ import annotations

import cmath
import math
import os

import numpy as np

SMALL_PHASE = 1e-8
_RESCALE_ABOVE = 1e64


def _env_flag(name: str, default: str = "1") -> bool:
    return os.environ.get(name, default).strip().lower() not in ("0", "false", "no", "off")


try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

HAVE_NUMBA = numba is not None
if HAVE_NUMBA and "NUMBA_THREADING_LAYER" not in os.environ:
    # the default probe warns on hosts with an old TBB; workqueue ships with every wheel
    numba.config.THREADING_LAYER = "workqueue"
USE_NUMBA = HAVE_NUMBA and _env_flag("INDSTRING_NUMBA")


def transfer_numpy(z, length, rho, dw, mass):
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    A = np.ones_like(z)
    B = np.zeros_like(z)
    Cz = np.zeros_like(z)
    D = np.ones_like(z)
    logs = np.zeros(z.shape)
    for i in range(len(length)):
        if dw[i] != 0.0 or mass[i] != 0.0:
            j = -dw[i] - z * mass[i]
            Cz = Cz + j * A
            D = D + z * j * B
        ell = length[i]
        r = rho[i]
        u = z * (r * ell)
        t = np.abs(u.imag)
        e1 = np.exp(1j * u - t)
        e2 = np.exp(-1j * u - t)
        cs = 0.5 * (e1 + e2)
        sn = -0.5j * (e1 - e2)
        small = np.abs(u) < SMALL_PHASE
        usafe = np.where(small, 1.0, u)
        fb = np.where(small, ell * (1.0 - u * u / 6.0) * np.exp(-t), ell * sn / usafe)
        fcz = -r * sn
        A, B, Cz, D = cs * A + fb * z * Cz, cs * B + fb * D, fcz * A + cs * Cz, z * fcz * B + cs * D
        logs += t
        s = np.maximum(np.maximum(np.abs(A), np.abs(B)), np.maximum(np.abs(Cz), np.abs(D)))
        big = s > _RESCALE_ABOVE
        if big.any():
            s = np.where(big, s, 1.0)
            A, B, Cz, D = A / s, B / s, Cz / s, D / s
            logs += np.log(s)
    return A, B, Cz, D, logs



def jost_back_numpy(z, length, rho, dw, mass, f_end, fp_end):
    """Propagate ``(f, f')`` from the right end back to ``(f(0), f'(0-))``.

    Only the one solution is carried, so rounding stays relative to its own
    size instead of the norm of the full transfer matrix.  Returns
    ``(f0, f0p, logscale)`` with the true values ``exp(logscale)`` times larger.
    """
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    f = np.broadcast_to(np.asarray(f_end, dtype=np.complex128), z.shape).copy()
    fp = np.broadcast_to(np.asarray(fp_end, dtype=np.complex128), z.shape).copy()
    logs = np.zeros(z.shape)
    for i in range(len(length) - 1, -1, -1):
        ell = length[i]
        r = rho[i]
        u = z * (r * ell)
        t = np.abs(u.imag)
        e1 = np.exp(1j * u - t)
        e2 = np.exp(-1j * u - t)
        cs = 0.5 * (e1 + e2)
        sn = -0.5j * (e1 - e2)
        small = np.abs(u) < SMALL_PHASE
        usafe = np.where(small, 1.0, u)
        fb = np.where(small, ell * (1.0 - u * u / 6.0) * np.exp(-t), ell * sn / usafe)
        f, fp = cs * f - fb * fp, z * r * sn * f + cs * fp
        logs += t
        if dw[i] != 0.0 or mass[i] != 0.0:
            fp = fp + (z * dw[i] + z * z * mass[i]) * f
        s = np.maximum(np.abs(f), np.abs(fp))
        big = s > _RESCALE_ABOVE
        if big.any():
            s = np.where(big, s, 1.0)
            f, fp = f / s, fp / s
            logs += np.log(s)
    return f, fp, logs


if HAVE_NUMBA:

    @numba.njit(cache=True, parallel=True)
    def _transfer_numba(z, length, rho, dw, mass):
        n = z.shape[0]
        A = np.empty(n, np.complex128)
        B = np.empty(n, np.complex128)
        Cz = np.empty(n, np.complex128)
        D = np.empty(n, np.complex128)
        logs = np.empty(n, np.float64)
        for k in numba.prange(n):
            zk = z[k]
            a = 1.0 + 0j
            b = 0j
            c = 0j
            d = 1.0 + 0j
            lg = 0.0
            for i in range(length.shape[0]):
                if dw[i] != 0.0 or mass[i] != 0.0:
                    j = -dw[i] - zk * mass[i]
                    c = c + j * a
                    d = d + zk * j * b
                ell = length[i]
                r = rho[i]
                u = zk * (r * ell)
                t = abs(u.imag)
                e1 = cmath.exp(1j * u - t)
                e2 = cmath.exp(-1j * u - t)
                cs = 0.5 * (e1 + e2)
                sn = -0.5j * (e1 - e2)
                if abs(u) < SMALL_PHASE:
                    fb = ell * (1.0 - u * u / 6.0) * math.exp(-t)
                else:
                    fb = ell * sn / u
                fcz = -r * sn
                a, b, c, d = (cs * a + fb * zk * c, cs * b + fb * d,
                              fcz * a + cs * c, zk * fcz * b + cs * d)
                lg += t
                s = max(max(abs(a), abs(b)), max(abs(c), abs(d)))
                if s > _RESCALE_ABOVE:
                    a /= s
                    b /= s
                    c /= s
                    d /= s
                    lg += math.log(s)
            A[k] = a
            B[k] = b
            Cz[k] = c
            D[k] = d
            logs[k] = lg
        return A, B, Cz, D, logs

    def transfer_numba(z, length, rho, dw, mass):
        z = np.ascontiguousarray(np.atleast_1d(np.asarray(z, dtype=np.complex128)))
        return _transfer_numba(z, *(np.ascontiguousarray(v, dtype=np.float64)
                                    for v in (length, rho, dw, mass)))

    @numba.njit(cache=True, parallel=True)
    def _jost_back_numba(z, length, rho, dw, mass, f_end, fp_end):
        n = z.shape[0]
        F = np.empty(n, np.complex128)
        FP = np.empty(n, np.complex128)
        logs = np.empty(n, np.float64)
        for k in numba.prange(n):
            zk = z[k]
            f = f_end[k]
            fp = fp_end[k]
            lg = 0.0
            for i in range(length.shape[0] - 1, -1, -1):
                ell = length[i]
                r = rho[i]
                u = zk * (r * ell)
                t = abs(u.imag)
                e1 = cmath.exp(1j * u - t)
                e2 = cmath.exp(-1j * u - t)
                cs = 0.5 * (e1 + e2)
                sn = -0.5j * (e1 - e2)
                if abs(u) < SMALL_PHASE:
                    fb = ell * (1.0 - u * u / 6.0) * math.exp(-t)
                else:
                    fb = ell * sn / u
                f, fp = cs * f - fb * fp, zk * r * sn * f + cs * fp
                lg += t
                if dw[i] != 0.0 or mass[i] != 0.0:
                    fp = fp + (zk * dw[i] + zk * zk * mass[i]) * f
                s = max(abs(f), abs(fp))
                if s > _RESCALE_ABOVE:
                    f /= s
                    fp /= s
                    lg += math.log(s)
            F[k] = f
            FP[k] = fp
            logs[k] = lg
        return F, FP, logs

    def jost_back_numba(z, length, rho, dw, mass, f_end, fp_end):
        z = np.ascontiguousarray(np.atleast_1d(np.asarray(z, dtype=np.complex128)))
        ends = (np.ascontiguousarray(np.broadcast_to(np.asarray(v, dtype=np.complex128), z.shape))
                for v in (f_end, fp_end))
        return _jost_back_numba(z, *(np.ascontiguousarray(v, dtype=np.float64)
                                     for v in (length, rho, dw, mass)), *ends)

    _threads = os.environ.get("INDSTRING_THREADS")
    if _threads:
        numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))
else:
    transfer_numba = None
    jost_back_numba = None


def transfer(z, length, rho, dw, mass, backend: str | None = None):
    """Accumulated ``(A, B, Cz, D, logscale)`` over all cells, for each ``z``.

    ``backend`` is ``"numba"``, ``"numpy"`` or ``None`` (environment default).
    """
    shape = np.shape(z)
    if backend is None:
        backend = "numba" if USE_NUMBA else "numpy"
    if backend == "numba":
        if transfer_numba is None:
            raise RuntimeError("numba backend unavailable")
        out = transfer_numba(np.ravel(z), length, rho, dw, mass)
    elif backend == "numpy":
        out = transfer_numpy(np.ravel(z), length, rho, dw, mass)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return tuple(np.reshape(o, shape) for o in out)


def jost_back(z, length, rho, dw, mass, f_end, fp_end, backend: str | None = None):
    """``(f(0), f'(0-), logscale)`` from end values, for each ``z``; see :func:`jost_back_numpy`."""
    shape = np.shape(z)
    if backend is None:
        backend = "numba" if USE_NUMBA else "numpy"
    z = np.ravel(z)
    f_end = np.ravel(np.broadcast_to(f_end, shape))
    fp_end = np.ravel(np.broadcast_to(fp_end, shape))
    if backend == "numba":
        if jost_back_numba is None:
            raise RuntimeError("numba backend unavailable")
        out = jost_back_numba(z, length, rho, dw, mass, f_end, fp_end)
    elif backend == "numpy":
        out = jost_back_numpy(z, length, rho, dw, mass, f_end, fp_end)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return tuple(np.reshape(o, shape) for o in out)
