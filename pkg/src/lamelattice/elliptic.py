"""Jacobi elliptic functions and the complete elliptic integral K(m).

The parameter convention is ``dn^2 + m sn^2 = 1`` with ``0 <= m <= 1``.
Both routines are built on the arithmetic-geometric mean; ``jacobi`` uses
the descending Landen (Gauss) transformation in Bulirsch's form, which
keeps ``dn`` accurate near the quarter period where the textbook ratio
``cos(phi0) / cos(phi1 - phi0)`` degenerates to 0/0.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .config import TOL


class DivergenceError(ArithmeticError):
    """Raised for K(m) at m = 1, where the integral diverges logarithmically."""


class EllipticTriple(NamedTuple):
    sn: np.ndarray | float
    cn: np.ndarray | float
    dn: np.ndarray | float


def _check_modulus(m):
    m_arr = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(m_arr)) or np.any(m_arr < 0.0) or np.any(m_arr > 1.0):
        raise ValueError(f"modulus must lie in [0, 1], got {m!r}")
    return m_arr


def agm(a: float, b: float, rtol: float = TOL.convergence) -> float:
    """Arithmetic-geometric mean of two positive numbers."""
    for _ in range(64):
        if abs(a - b) <= rtol * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def complete_K(m: float) -> float:
    """Complete elliptic integral of the first kind, ``K(m) = pi / (2 agm(1, sqrt(1-m)))``.

    Raises
    ------
    ValueError
        If ``m`` is outside ``[0, 1]`` or not finite.
    DivergenceError
        If ``m == 1``.
    """
    m = float(_check_modulus(m))
    if m == 1.0:
        raise DivergenceError("K(m) diverges at m = 1")
    return math.pi / (2.0 * agm(1.0, math.sqrt(1.0 - m)))


def _sncndn(u: np.ndarray, m: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # Gauss transformation down to a near-circular case, then back-substitution.
    ca = math.sqrt(TOL.convergence)
    emc = 1.0 - m
    a = 1.0
    em, en = [], []
    while True:
        em.append(a)
        emc = math.sqrt(emc)
        en.append(emc)
        c = 0.5 * (a + emc)
        if abs(a - emc) <= ca * a or len(em) >= 32:
            break
        emc *= a
        a = c

    v = u * c
    sn = np.sin(v)
    cn = np.cos(v)
    dn = np.ones_like(v)
    small = np.abs(v) < 1e-100
    safe_sn = np.where(small, 1.0, sn)
    ratio = cn / safe_sn
    cc = c * ratio
    for b, e in zip(reversed(em), reversed(en)):
        ratio = ratio * cc
        cc = cc * dn
        dn = (e + ratio) / (b + ratio)
        ratio = cc / b
    amp = 1.0 / np.sqrt(cc * cc + 1.0)
    sn_out = np.where(sn >= 0.0, amp, -amp)
    cn_out = cc * sn_out

    sn_out = np.where(small, u, sn_out)
    cn_out = np.where(small, 1.0, cn_out)
    dn_out = np.where(small, 1.0, dn)
    return sn_out, cn_out, dn_out


def _jacobi_scalar_m(x: np.ndarray, m: float):
    if m == 0.0:
        return np.sin(x), np.cos(x), np.ones_like(x)
    if m == 1.0:
        sech = 1.0 / np.cosh(x)
        return np.tanh(x), sech, sech.copy()
    return _sncndn(x, m)


def jacobi(x, m) -> EllipticTriple:
    """Evaluate ``(sn, cn, dn)`` at argument ``x`` and parameter ``m``.

    ``x`` and ``m`` broadcast against each other. Scalars in give floats out.
    ``m = 0`` and ``m = 1`` are exact trigonometric and hyperbolic branches.
    """
    x_arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x_arr)):
        raise ValueError("jacobi: argument must be finite")
    m_arr = _check_modulus(m)
    scalar = x_arr.ndim == 0 and m_arr.ndim == 0

    if m_arr.ndim == 0:
        sn, cn, dn = _jacobi_scalar_m(np.atleast_1d(x_arr), float(m_arr))
        if scalar:
            return EllipticTriple(float(sn[0]), float(cn[0]), float(dn[0]))
        return EllipticTriple(sn.reshape(x_arr.shape), cn.reshape(x_arr.shape),
                              dn.reshape(x_arr.shape))

    xb, mb = np.broadcast_arrays(x_arr, m_arr)
    sn = np.empty(xb.shape)
    cn = np.empty(xb.shape)
    dn = np.empty(xb.shape)
    for mv in np.unique(mb):
        sel = mb == mv
        sn[sel], cn[sel], dn[sel] = _jacobi_scalar_m(xb[sel], float(mv))
    return EllipticTriple(sn, cn, dn)
