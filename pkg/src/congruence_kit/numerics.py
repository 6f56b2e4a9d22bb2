"""Quadrature, extrapolation, and threading helpers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

SIMPSON_TOL = 1e-10
_MAX_DEPTH = 28


def _simpson(f, a, fa, b, fb, mid, fmid):
    return (b - a) / 6.0 * (fa + 4.0 * fmid + fb)


def adaptive_simpson(f, a: float, b: float, tol: float = SIMPSON_TOL):
    """Adaptive Simpson quadrature of a scalar/vector/complex-valued function.

    Classic bisection with the one-step Richardson correction; the tolerance
    is distributed over subintervals, absolute.
    """
    fa, fb = f(a), f(b)
    mid = 0.5 * (a + b)
    fmid = f(mid)
    whole = _simpson(f, a, fa, b, fb, mid, fmid)
    return _adaptive(f, a, fa, b, fb, mid, fmid, whole, tol, _MAX_DEPTH)


def _adaptive(f, a, fa, b, fb, mid, fmid, whole, tol, depth):
    lm = 0.5 * (a + mid)
    rm = 0.5 * (mid + b)
    flm, frm = f(lm), f(rm)
    left = _simpson(f, a, fa, mid, fmid, lm, flm)
    right = _simpson(f, mid, fmid, b, fb, rm, frm)
    err = np.max(np.abs(left + right - whole))
    if depth <= 0 or err <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    half = 0.5 * tol
    return _adaptive(f, a, fa, mid, fmid, lm, flm, left, half, depth - 1) + _adaptive(
        f, mid, fmid, b, fb, rm, frm, right, half, depth - 1
    )


def cumulative_quadrature(f, ts: np.ndarray, tol: float = SIMPSON_TOL) -> np.ndarray:
    """Antiderivative values F(ts) with F(ts[0]) = 0, panel-wise adaptive Simpson."""
    ts = np.asarray(ts, dtype=float)
    probe = f(ts[0])
    out = np.zeros((len(ts),) + np.shape(probe), dtype=np.asarray(probe).dtype)
    acc = np.zeros_like(np.asarray(probe))
    for i in range(1, len(ts)):
        acc = acc + adaptive_simpson(f, ts[i - 1], ts[i], tol)
        out[i] = acc
    return out


def richardson(coarse, fine, order: int = 2):
    """Extrapolate FD values sampled at steps h and h/2 with a known error order."""
    w = 2.0**order
    return (w * np.asarray(fine) - np.asarray(coarse)) / (w - 1.0)


def fd_convergence_order(errors) -> float:
    """Observed order from errors at successively halved steps (last pair)."""
    errors = np.asarray(errors, dtype=float)
    return float(np.log2(errors[-2] / errors[-1]))


def worker_count() -> int:
    """Thread cap from the CONGRUENCE_KIT_THREADS environment variable."""
    raw = os.environ.get("CONGRUENCE_KIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def tmap(fn, items):
    """Map preserving order, threaded when the environment allows it."""
    items = list(items)
    n = worker_count()
    if n <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
