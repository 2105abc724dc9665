"""Hot numeric kernels: Gegenbauer/Hermite recurrences evaluated over arrays.

Two interchangeable backends compute bit-identical results:

* ``numba`` -- ``@njit``-compiled scalar loops (default when numba imports),
* ``numpy`` -- vectorized recurrences with the same per-element op order.

Select with the environment variable ``RFNT_BACKEND`` (``auto``, ``numba``
or ``numpy``) before the first import.  ``benchmarks/bench_backends.py``
compares the two.
"""

from __future__ import annotations

import os

import numpy as np

_CHOICE = os.environ.get("RFNT_BACKEND", "auto").lower()
if _CHOICE not in ("auto", "numba", "numpy"):
    raise ValueError(f"RFNT_BACKEND must be auto|numba|numpy, got {_CHOICE!r}")

_HAVE_NUMBA = False
if _CHOICE in ("auto", "numba"):
    try:
        import numba

        _HAVE_NUMBA = True
    except ImportError:
        if _CHOICE == "numba":
            raise


def backend() -> str:
    """Name of the active backend, ``"numba"`` or ``"numpy"``."""
    return "numba" if _HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numpy reference implementations
#
# The recurrence, normalized so Q_k(d) = 1:
#   Q_0(t) = 1,  Q_1(t) = t/d,
#   (t/d) Q_k = s_k Q_{k-1} + t_k Q_{k+1},
#   s_k = k/(2k+d-2),  t_k = (k+d-2)/(2k+d-2).
# ---------------------------------------------------------------------------


def _gegenbauer_table_np(d: int, kmax: int, t: np.ndarray) -> np.ndarray:
    out = np.empty((kmax + 1, t.size))
    out[0] = 1.0
    if kmax >= 1:
        out[1] = t / d
    for k in range(1, kmax):
        s_k = k / (2.0 * k + d - 2.0)
        t_k = (k + d - 2.0) / (2.0 * k + d - 2.0)
        out[k + 1] = ((t / d) * out[k] - s_k * out[k - 1]) / t_k
    return out


def _gegenbauer_series_np(coef: np.ndarray, d: int, t: np.ndarray) -> np.ndarray:
    kmax = coef.size - 1
    q_prev = np.ones_like(t)
    acc = coef[0] * q_prev
    if kmax >= 1:
        q_cur = t / d
        acc = acc + coef[1] * q_cur
        for k in range(1, kmax):
            s_k = k / (2.0 * k + d - 2.0)
            t_k = (k + d - 2.0) / (2.0 * k + d - 2.0)
            q_prev, q_cur = q_cur, ((t / d) * q_cur - s_k * q_prev) / t_k
            acc = acc + coef[k + 1] * q_cur
    return acc


def _hermite_table_np(kmax: int, x: np.ndarray) -> np.ndarray:
    out = np.empty((kmax + 1, x.size))
    out[0] = 1.0
    if kmax >= 1:
        out[1] = x
    for k in range(1, kmax):
        out[k + 1] = x * out[k] - k * out[k - 1]
    return out


# ---------------------------------------------------------------------------
# numba backend: same arithmetic, scalar loops
# ---------------------------------------------------------------------------

if _HAVE_NUMBA:

    @numba.njit(cache=True)
    def _gegenbauer_table_nb(d, kmax, t):  # pragma: no cover - jitted
        n = t.size
        out = np.empty((kmax + 1, n))
        for i in range(n):
            out[0, i] = 1.0
        if kmax >= 1:
            for i in range(n):
                out[1, i] = t[i] / d
        for k in range(1, kmax):
            s_k = k / (2.0 * k + d - 2.0)
            t_k = (k + d - 2.0) / (2.0 * k + d - 2.0)
            for i in range(n):
                out[k + 1, i] = ((t[i] / d) * out[k, i] - s_k * out[k - 1, i]) / t_k
        return out

    @numba.njit(cache=True)
    def _gegenbauer_series_nb(coef, d, t):  # pragma: no cover - jitted
        kmax = coef.size - 1
        n = t.size
        acc = np.empty(n)
        for i in range(n):
            ti = t[i]
            q_prev = 1.0
            a = coef[0] * q_prev
            if kmax >= 1:
                q_cur = ti / d
                a = a + coef[1] * q_cur
                for k in range(1, kmax):
                    s_k = k / (2.0 * k + d - 2.0)
                    t_k = (k + d - 2.0) / (2.0 * k + d - 2.0)
                    q_next = ((ti / d) * q_cur - s_k * q_prev) / t_k
                    q_prev = q_cur
                    q_cur = q_next
                    a = a + coef[k + 1] * q_cur
            acc[i] = a
        return acc

    @numba.njit(cache=True)
    def _hermite_table_nb(kmax, x):  # pragma: no cover - jitted
        n = x.size
        out = np.empty((kmax + 1, n))
        for i in range(n):
            out[0, i] = 1.0
        if kmax >= 1:
            for i in range(n):
                out[1, i] = x[i]
        for k in range(1, kmax):
            for i in range(n):
                out[k + 1, i] = x[i] * out[k, i] - k * out[k - 1, i]
        return out


def _as_flat(t) -> tuple[np.ndarray, tuple[int, ...]]:
    arr = np.asarray(t, dtype=np.float64)
    return np.ascontiguousarray(arr.ravel()), arr.shape


def gegenbauer_table(d: int, kmax: int, t) -> np.ndarray:
    """Table of Q_k(t), k = 0..kmax, shape (kmax+1, *t.shape); t in [-d, d]."""
    flat, shape = _as_flat(t)
    if _HAVE_NUMBA:
        out = _gegenbauer_table_nb(d, kmax, flat)
    else:
        out = _gegenbauer_table_np(d, kmax, flat)
    return out.reshape((kmax + 1,) + shape)


def gegenbauer_series(coef, d: int, t) -> np.ndarray:
    """sum_k coef[k] * Q_k(t) evaluated elementwise; t in [-d, d]."""
    coef = np.ascontiguousarray(coef, dtype=np.float64)
    flat, shape = _as_flat(t)
    if _HAVE_NUMBA:
        out = _gegenbauer_series_nb(coef, d, flat)
    else:
        out = _gegenbauer_series_np(coef, d, flat)
    return out.reshape(shape)


def hermite_table(kmax: int, x) -> np.ndarray:
    """Table of probabilists' He_k(x), k = 0..kmax, shape (kmax+1, *x.shape)."""
    flat, shape = _as_flat(x)
    if _HAVE_NUMBA:
        out = _hermite_table_nb(kmax, flat)
    else:
        out = _hermite_table_np(kmax, flat)
    return out.reshape((kmax + 1,) + shape)
