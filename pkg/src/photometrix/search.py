"""Scalar search helpers: golden-section maximization and monotone bisection."""

import math

import numpy as np

_INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section_max(f, a, b, tol=1e-8, max_iter=200):
    """Locate the maximum of a unimodal function on [a, b].

    Returns (x_max, f(x_max)). The bracket shrinks below ``tol`` in width.
    """
    a, b = min(a, b), max(a, b)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > tol and it < max_iter:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
        it += 1
    x = 0.5 * (a + b)
    return x, f(x)


def scan_then_golden(f, a, b, n_scan=64, tol=1e-8):
    """Coarse scan followed by golden-section refinement around the best point.

    Robust against mild non-unimodality; the scan picks the bracket.
    """
    xs = np.linspace(a, b, n_scan)
    vals = [f(x) for x in xs]
    i = int(np.argmax(vals))
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, n_scan - 1)]
    x, v = golden_section_max(f, lo, hi, tol=tol)
    if vals[i] > v:
        return xs[i], vals[i]
    return x, v


def bisect_root(f, a, b, tol=1e-6, max_iter=200):
    """Bisection for f(x) = 0 on [a, b]; requires a sign change."""
    fa, fb = f(a), f(b)
    if fa == 0:
        return a
    if fb == 0:
        return b
    if fa * fb > 0:
        raise ValueError("no sign change on the bracket")
    it = 0
    while b - a > tol and it < max_iter:
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0:
            return m
        if fa * fm < 0:
            b, fb = m, fm
        else:
            a, fa = m, fm
        it += 1
    return 0.5 * (a + b)
