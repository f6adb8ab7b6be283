"""Cyclic Jacobi eigensolver used as the ground-truth oracle."""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .core import QaeError, as_symmetric, spectral_scale

MAX_SWEEPS = 100


class NoConvergence(QaeError):
    pass


@dataclass(frozen=True, eq=False)
class FullSpectrum:
    values: np.ndarray   # ascending
    vectors: np.ndarray  # columns


@numba.njit(cache=True)
def _jacobi(a, tol, max_sweeps):
    n = a.shape[0]
    v = np.eye(n)
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off = max(off, abs(a[p, q]))
        if off < tol:
            return v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    return v, -1


def eigh_reference(A) -> FullSpectrum:
    """All eigenpairs of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps run until the largest off-diagonal entry drops below
    ``1e-12 * spectral_scale``.  Values come back ascending; each vector is
    signed so that its largest-magnitude component is positive.
    """
    S = as_symmetric(A)
    a = np.array(S.entries, dtype=float)
    v, sweeps = _jacobi(a, 1e-12 * spectral_scale(S), MAX_SWEEPS)
    if sweeps < 0:
        raise NoConvergence(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")
    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    v = v[:, order]
    for j in range(v.shape[1]):
        if v[np.argmax(np.abs(v[:, j])), j] < 0:
            v[:, j] = -v[:, j]
    return FullSpectrum(values, v)


def charpoly(A) -> np.ndarray:
    """Monic characteristic polynomial coefficients, highest degree first (Faddeev-LeVerrier)."""
    a = np.asarray(A, dtype=float)
    n = a.shape[0]
    coeffs = [1.0]
    M = np.zeros_like(a)
    for k in range(1, n + 1):
        M = a @ M + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ M) / k)
    return np.array(coeffs)


def _real_roots(c: np.ndarray, lo: float, hi: float) -> list:
    """Roots of a polynomial with only real roots, all inside ``[lo, hi]``."""
    deg = c.size - 1
    if deg == 0:
        return []
    crit = _real_roots(c[:-1] * np.arange(deg, 0, -1), lo, hi)
    edges = [lo] + crit + [hi]
    roots = []
    for a, b in zip(edges[:-1], edges[1:]):
        fa, fb = np.polyval(c, a), np.polyval(c, b)
        if fa == 0.0 or fb == 0.0 or (fa > 0) == (fb > 0):
            # no sign change: a multiple root sits on an edge
            roots.append(a if abs(fa) <= abs(fb) else b)
            continue
        mid = 0.5 * (a + b)
        while a < mid < b:
            fm = np.polyval(c, mid)
            if fm == 0.0:
                break
            if (fm > 0) == (fa > 0):
                a, fa = mid, fm
            else:
                b = mid
            mid = 0.5 * (a + b)
        roots.append(mid)
    return roots


def eigvals_charpoly(A) -> np.ndarray:
    """Eigenvalues by bisection on the characteristic polynomial; meant for n <= 4.

    Roots of the derivative interlace the roots of the polynomial, so each
    one is isolated between consecutive critical points.  Independent of
    the Jacobi path.
    """
    a = np.asarray(A, dtype=float)
    radius = np.sum(np.abs(a), axis=1) - np.abs(np.diag(a))
    lo = float(np.min(np.diag(a) - radius)) - 1.0
    hi = float(np.max(np.diag(a) + radius)) + 1.0
    return np.array(sorted(_real_roots(charpoly(a), lo, hi)))
