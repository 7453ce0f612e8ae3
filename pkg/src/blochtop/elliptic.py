"""Complete elliptic integrals and Jacobi elliptic functions.

Everything here uses the parameter convention m = k**2, so sn(u, m)
has real quarter period K(m) and the m -> 1 limit is hyperbolic.
The integrals come from the arithmetic-geometric mean, the functions
from a descending Landen transformation; both converge quadratically,
so a handful of iterations reaches double precision.
"""

from __future__ import annotations

import math

import numpy as np

_AGM_TOL = 1e-16
_AGM_MAX = 64

# Forward Landen chain stops at |a - b| <= tol * a; the truncation
# error in the results scales like tol**2.
_LANDEN_TOL = 1e-8
_LANDEN_MAX = 16

# Below this distance from m = 1 the chain cannot resolve the modulus
# and the exact m = 1 hyperbolic forms are used instead.
_HYPERBOLIC_SWITCH = 1e-12


def complete_K(m: float) -> float:
    """Complete elliptic integral of the first kind K(m)."""
    m = float(m)
    if m < 0.0:
        raise ValueError(f"m must lie in [0, 1), got {m}")
    if m >= 1.0:
        raise ValueError(f"K(m) diverges as m -> 1, got m = {m}")
    a, b = 1.0, math.sqrt(1.0 - m)
    for _ in range(_AGM_MAX):
        if abs(a - b) <= _AGM_TOL * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def complete_E(m: float) -> float:
    """Complete elliptic integral of the second kind E(m)."""
    m = float(m)
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"m must lie in [0, 1], got {m}")
    if m == 1.0:
        return 1.0
    a, b = 1.0, math.sqrt(1.0 - m)
    c2sum = 0.5 * m
    w = 0.5
    for _ in range(_AGM_MAX):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        w *= 2.0
        c2sum += w * c * c
        if c <= _AGM_TOL * a:
            break
    return math.pi / (2.0 * a) * (1.0 - c2sum)


def jacobi_sn_cn_dn(u, m: float):
    """Jacobi elliptic functions sn, cn, dn of argument u and parameter m.

    u may be a scalar or an array; the three outputs match its shape.
    Valid for 0 <= m <= 1.  There is no argument reduction: the Landen
    scaling maps the real period onto the trig period exactly, so large
    |u| loses no accuracy beyond ordinary sin/cos conditioning.
    """
    m = float(m)
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"m must lie in [0, 1], got {m}")
    arr = np.asarray(u, dtype=float)
    scalar = arr.ndim == 0
    if scalar:
        arr = arr.reshape(1)

    if 1.0 - m < _HYPERBOLIC_SWITCH:
        cn = 1.0 / np.cosh(arr)
        sn, dn = np.tanh(arr), cn.copy()
    else:
        # Scalar descending Landen chain, shared by every element of u.
        em: list[float] = []
        en: list[float] = []
        a, emc = 1.0, 1.0 - m
        c = 0.5 * (a + math.sqrt(emc))
        for _ in range(_LANDEN_MAX):
            em.append(a)
            emc = math.sqrt(emc)
            en.append(emc)
            c = 0.5 * (a + emc)
            if abs(a - emc) <= _LANDEN_TOL * a:
                break
            emc *= a
            a = c

        w = c * arr
        sn0 = np.sin(w)
        cn0 = np.cos(w)
        zero = sn0 == 0.0
        safe = np.where(zero, 1.0, sn0)
        aa = cn0 / safe
        cc = aa * c
        dd = np.ones_like(w)
        for b_em, b_en in zip(reversed(em), reversed(en)):
            t = aa * cc
            cc = cc * dd
            dd = (b_en + t) / (b_em + t)
            aa = cc / b_em
        amp = 1.0 / np.sqrt(cc * cc + 1.0)
        sn = np.where(sn0 >= 0.0, amp, -amp)
        cn = cc * sn
        sn = np.where(zero, 0.0, sn)
        cn = np.where(zero, cn0, cn)
        dn = np.where(zero, 1.0, dd)

    if scalar:
        return float(sn[0]), float(cn[0]), float(dn[0])
    return sn, cn, dn
