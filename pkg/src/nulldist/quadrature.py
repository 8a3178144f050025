"""Adaptive Simpson quadrature with an absolute error target."""

from __future__ import annotations

from typing import Callable

from .errors import NumericError


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-9,
    max_depth: int = 60,
    breakpoints: tuple[float, ...] = (),
) -> float:
    """Integrate f over [a, b] to absolute tolerance tol.

    Interior breakpoints (kinks or jumps of f) split the range first so the
    recursion never has to discover them. Uses the Richardson-corrected
    Simpson estimate on accepted panels.

    Raises:
        NumericError: if some panel fails to converge within max_depth
            halvings. The error carries the accumulated error estimate.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    cuts = [a] + sorted(c for c in set(breakpoints) if a < c < b) + [b]
    total = 0.0
    width = b - a
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        total += _integrate_panel(f, lo, hi, tol * (hi - lo) / width, max_depth)
    return sign * total


def _integrate_panel(f, a0: float, b0: float, tol: float, max_depth: int, min_depth: int = 3) -> float:
    a, b = a0, b0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    # explicit stack keeps deep recursion off the Python call stack
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total = 0.0
    worst = 0.0
    failed = False
    while stack:
        a, b, fa, fm, fb, whole, eps, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
        right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
        delta = left + right - whole
        if (abs(delta) <= 15.0 * eps and depth >= min_depth) or depth >= max_depth:
            if depth >= max_depth and abs(delta) > 15.0 * eps:
                failed = True
                worst += abs(delta) / 15.0
            total += left + right + delta / 15.0
            continue
        stack.append((a, m, fa, flm, fm, left, 0.5 * eps, depth + 1))
        stack.append((m, b, fm, frm, fb, right, 0.5 * eps, depth + 1))
    if failed:
        raise NumericError(
            f"adaptive Simpson did not converge on [{a0}, {b0}] (error estimate {worst:.3e})",
            achieved=worst,
        )
    return total
