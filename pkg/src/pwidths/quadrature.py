"""Arc length of the hyperbola branches ``X * Y = k``.

Writing a branch as ``X = sqrt|k| e^t``, ``|Y| = sqrt|k| e^-t`` turns the arc
length element into ``sqrt|k| * sqrt(2 cosh 2t) dt``, which is smooth and
free of the steep ends a graph parametrization has.  Its antiderivative has a
closed form in Legendre elliptic integrals with parameter ``m = -1``; the
adaptive Simpson integrator is the independent numerical route.
"""

from __future__ import annotations

import math

from scipy.special import ellipeinc, ellipkinc


def adaptive_simpson(f, a: float, b: float, eps: float = 1e-10, max_depth: int = 60) -> float:
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``eps``."""
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4 * fm + fb)
    return _simpson(f, a, b, fa, fm, fb, whole, eps, max_depth)


def _simpson(f, a, b, fa, fm, fb, whole, eps, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15 * eps:
        return left + right + delta / 15.0
    return _simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) + _simpson(
        f, m, b, fm, frm, fb, right, eps / 2, depth - 1
    )


def hyperbola_speed(t: float) -> float:
    """Arc length element of ``XY = 1`` in the ``t`` parametrization."""
    return math.sqrt(math.exp(2 * t) + math.exp(-2 * t))


def _antiderivative(t: float) -> float:
    # int sqrt(cosh 2t) dt with theta = atan(sinh t), via integration by parts
    theta = math.atan(math.sinh(t))
    s = math.tanh(t)
    return math.sinh(t) * math.sqrt(1 + s * s) - float(ellipeinc(theta, -1.0)) + float(
        ellipkinc(theta, -1.0)
    )


def branch_length(k: float, u1: float, u2: float, method: str = "closed-form") -> float:
    """Length of ``|Y| = |k| / |X|`` for ``u1 <= |X| <= u2``."""
    if not 0 < u1 <= u2:
        raise ValueError("need 0 < u1 <= u2")
    if k == 0:
        raise ValueError("degenerate hyperbola")
    r = math.sqrt(abs(k))
    t1, t2 = math.log(u1 / r), math.log(u2 / r)
    if method == "closed-form":
        return r * math.sqrt(2.0) * (_antiderivative(t2) - _antiderivative(t1))
    if method == "simpson":
        return r * adaptive_simpson(hyperbola_speed, t1, t2, eps=1e-10 / r)
    raise ValueError(f"unknown method {method!r}")
