"""Lattice profiles (f_j, g_j) for the six substitution families.

Every family supplies a pair ``(y, s)`` of functions of ``x = beta (j + c2)``
with ``s^2 = 1 - y^2`` (bounded families) or ``s^2 = y^2 - 1`` (unbounded
families), and the profile is

    f_j = T_N(y_j) / sqrt|mu1|,    g_j = s_j U_{N-1}(y_j) / sqrt|mu2|,

so that ``1 + mu1 f_j^2 + mu2 g_j^2 = 0`` at every site.

``build_profile`` works in double precision. ``build_profile_mp`` evaluates
the same fields with mpmath at a working precision chosen from the field
magnitude, which keeps the absolute constraint residual small even where
the unbounded families reach 1e100 and beyond.
"""
from __future__ import annotations

import contextlib
import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .chebyshev import ChebKind, IntPoly, cheb_coeffs, cheb_eval
from .config import TOL
from .elliptic import complete_K, jacobi
from .lame import LameCoeffs, Parity


class ProfileError(ValueError):
    """Invalid profile specification (sign constraint, family/modulus mismatch)."""


class Family(enum.Enum):
    DN = "dn"
    CN = "cn"
    SECH = "sech"
    COS = "cos"
    ND = "nd"
    COSH = "cosh"

    @property
    def bounded(self) -> bool:
        return self in (Family.DN, Family.CN, Family.SECH, Family.COS)

    @property
    def fixed_modulus(self) -> float | None:
        """The modulus a closed-form family is tied to, or None for elliptic ones."""
        return {Family.COS: 0.0, Family.SECH: 1.0, Family.COSH: 1.0}.get(self)

    @property
    def periodic(self) -> bool:
        return self in (Family.DN, Family.CN, Family.COS, Family.ND)


BOUNDED = tuple(f for f in Family if f.bounded)
UNBOUNDED = tuple(f for f in Family if not f.bounded)


@dataclass(frozen=True)
class ProfileSpec:
    family: Family
    N: int
    beta: float
    c2: float = 0.0
    m: float | None = None
    mu1: float = -1.0
    mu2: float = -1.0

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        if self.m is None:
            if fam.fixed_modulus is None:
                raise ProfileError(f"family {fam.value} needs a modulus m")
            object.__setattr__(self, "m", fam.fixed_modulus)
        m = float(self.m)
        if not 0.0 <= m <= 1.0:
            raise ProfileError(f"modulus m={m} outside [0, 1]")
        if fam.fixed_modulus is not None and m != fam.fixed_modulus:
            raise ProfileError(
                f"family {fam.value} is defined only at m={fam.fixed_modulus:g}, got m={m:g}")
        if int(self.N) != self.N or self.N < 1:
            raise ProfileError("order N must be a positive integer")
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise ProfileError("width beta must be positive")
        if self.mu1 == 0 or self.mu2 == 0:
            raise ProfileError("sign constraint: couplings must be nonzero")
        if self.mu1 > 0 and self.mu2 > 0:
            raise ProfileError("sign constraint: mu1 > 0 and mu2 > 0 admit no real solution")
        if fam.bounded and not (self.mu1 < 0 and self.mu2 < 0):
            raise ProfileError(f"sign constraint: family {fam.value} requires mu1 < 0, mu2 < 0")
        if not fam.bounded and (self.mu1 < 0) == (self.mu2 < 0):
            raise ProfileError(
                f"sign constraint: family {fam.value} requires couplings of opposite sign")

    @property
    def swapped(self) -> bool:
        """Unbounded families with ``mu1 > 0 > mu2`` carry the T-part in g."""
        return not self.family.bounded and self.mu1 > 0

    def to_dict(self) -> dict:
        return {"family": self.family.value, "N": self.N, "beta": self.beta, "c2": self.c2,
                "m": self.m, "mu1": self.mu1, "mu2": self.mu2}

    @classmethod
    def from_dict(cls, d: dict) -> "ProfileSpec":
        return cls(family=Family(d["family"]), N=int(d["N"]), beta=float(d["beta"]),
                   c2=float(d.get("c2", 0.0)),
                   m=None if d.get("m") is None else float(d["m"]),
                   mu1=float(d.get("mu1", -1.0)), mu2=float(d.get("mu2", -1.0)))


def family_functions(family: Family, x, m: float):
    """``(y, s)`` for a family at arguments ``x``."""
    x = np.asarray(x, dtype=float)
    if family is Family.DN:
        sn, cn, dn = jacobi(x, m)
        return dn, math.sqrt(m) * sn
    if family is Family.CN:
        sn, cn, dn = jacobi(x, m)
        return cn, sn
    if family is Family.SECH:
        return 1.0 / np.cosh(x), np.tanh(x)
    if family is Family.COS:
        return np.cos(x), np.sin(x)
    if family is Family.ND:
        sn, cn, dn = jacobi(x, m)
        return 1.0 / dn, math.sqrt(m) * sn / dn
    if family is Family.COSH:
        return np.cosh(x), np.sinh(x)
    raise ProfileError(f"unknown family {family!r}")


def unit_fields(family: Family, N: int, x, m: float, coeffs: LameCoeffs | None = None):
    """Unscaled ``(T_N(y), s U_{N-1}(y))`` or, with ``coeffs``, the Lamé sums."""
    y, s = family_functions(family, x, m)
    if coeffs is None:
        return cheb_eval(ChebKind.FIRST, N, y), s * cheb_eval(ChebKind.SECOND, N - 1, y)
    if coeffs.N != N:
        raise ProfileError(f"coefficient order {coeffs.N} does not match N={N}")
    z = y * y
    A = np.polynomial.polynomial.polyval(z, np.array(coeffs.a, dtype=float))
    B = np.polynomial.polynomial.polyval(z, np.array(coeffs.b, dtype=float))
    if coeffs.parity is Parity.ODD:
        return y * A, s * B
    return A, s * y * B


def field_period(family: Family, N: int, m: float) -> tuple[float | None, float | None]:
    """x-periods of (f, g) inherited from the underlying elliptic functions."""
    if not family.periodic or (family is not Family.COS and m == 1.0):
        return None, None
    K = math.pi / 2 if family is Family.COS else complete_K(m)
    if family in (Family.DN, Family.ND):
        return 2 * K, 4 * K
    return (2 * K, 2 * K) if N % 2 == 0 else (4 * K, 4 * K)


@dataclass(frozen=True)
class Profile:
    spec: ProfileSpec
    j: np.ndarray
    x: np.ndarray
    f: np.ndarray
    g: np.ndarray
    period_f: float | None        # in lattice sites
    period_g: float | None
    saturated: np.ndarray = field(repr=False)
    dps: int | None = None        # mpmath digits when f, g hold mpf values

    def precision(self):
        """Context restoring the working precision the fields were built at."""
        return working_precision(self.dps)

    @property
    def residual(self) -> np.ndarray:
        """Sitewise ``1 + mu1 f^2 + mu2 g^2``."""
        with self.precision():
            return 1.0 + self.spec.mu1 * self.f ** 2 + self.spec.mu2 * self.g ** 2

    @property
    def scaled_residual(self) -> np.ndarray:
        """``|residual| / max(1, |mu1| f^2 + |mu2| g^2)``; equals ``|residual|`` for bounded families."""
        with self.precision():
            scale = np.maximum(1.0, abs(self.spec.mu1) * self.f ** 2 + abs(self.spec.mu2) * self.g ** 2)
            return np.asarray(np.abs(self.residual) / scale, dtype=float)

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residual)))

    @property
    def max_scaled_residual(self) -> float:
        return float(np.max(self.scaled_residual))

    def _text(self, v) -> str:
        if self.dps is not None:
            return mpmath.nstr(v, 17, min_fixed=-4, max_fixed=17)
        return format(float(v), ".17g")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["j", "x", "f", "g", "residual"])
        for row in zip(self.j, self.x, self.f, self.g, self.residual):
            w.writerow([int(row[0]), format(float(row[1]), ".17g")] + [self._text(v) for v in row[2:]])
        return buf.getvalue()

    def to_dict(self) -> dict:
        # multiprecision values may exceed the double range, so they travel as strings
        val = self._text if self.dps is not None else float
        return {
            "schema": 1,
            "spec": self.spec.to_dict(),
            "dps": self.dps,
            "period_f": self.period_f,
            "period_g": self.period_g,
            "max_residual": self.max_residual,
            "max_scaled_residual": self.max_scaled_residual,
            "sites": [
                {"j": int(j), "x": float(x), "f": val(f), "g": val(g), "residual": val(r)}
                for j, x, f, g, r in zip(self.j, self.x, self.f, self.g, self.residual)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def site_indices(L: int, origin: int | None = None) -> np.ndarray:
    if L < 1:
        raise ProfileError("lattice length must be >= 1")
    start = -(L // 2) if origin is None else origin
    return np.arange(start, start + L)


def build_profile(spec: ProfileSpec, L: int = 64, *, origin: int | None = None,
                  coeffs: LameCoeffs | None = None, x_cap: float = TOL.x_cap) -> Profile:
    """Sample the continuum profile of ``spec`` on ``L`` consecutive sites.

    Sites default to ``j = -L//2 .. L - L//2 - 1``. For the cosh family,
    arguments beyond ``x_cap`` are clamped and marked in ``saturated``.
    Passing ``coeffs`` evaluates the Lamé sums with those coefficients
    instead of the Chebyshev recurrence.
    """
    j = site_indices(L, origin)
    x = spec.beta * (j + spec.c2)
    saturated = np.zeros(x.shape, dtype=bool)
    if spec.family is Family.COSH:
        saturated = np.abs(x) > x_cap
        x = np.clip(x, -x_cap, x_cap)
    t_part, s_part = unit_fields(spec.family, spec.N, x, spec.m, coeffs)
    if spec.swapped:
        f = s_part / math.sqrt(abs(spec.mu1))
        g = t_part / math.sqrt(abs(spec.mu2))
    else:
        f = t_part / math.sqrt(abs(spec.mu1))
        g = s_part / math.sqrt(abs(spec.mu2))
    pf, pg = field_period(spec.family, spec.N, spec.m)
    if spec.swapped:
        pf, pg = pg, pf
    for arr in (j, x, f, g, saturated):
        arr.flags.writeable = False
    return Profile(spec=spec, j=j, x=x, f=f, g=g,
                   period_f=None if pf is None else pf / spec.beta,
                   period_g=None if pg is None else pg / spec.beta,
                   saturated=saturated)


def working_precision(dps: int | None):
    return mpmath.workdps(dps) if dps else contextlib.nullcontext()


def _log10_field_bound(spec: ProfileSpec, x: np.ndarray) -> float:
    """Upper bound on ``log10 max(|f|, |g|)`` over the sites."""
    fam, m = spec.family, float(spec.m)
    xmax = float(np.max(np.abs(x))) if x.size else 0.0
    if fam is Family.COSH or (fam is Family.ND and m == 1.0):
        ly = xmax / math.log(10)
    elif fam is Family.ND:
        ly = -0.5 * math.log10(1.0 - m)
    else:
        ly = 0.0
    amp = -0.5 * math.log10(min(abs(spec.mu1), abs(spec.mu2)))
    return spec.N * (math.log10(2.0) + ly) + max(amp, 0.0)


def required_digits(spec: ProfileSpec, x: np.ndarray, power: int = 3, guard: int = 30) -> int:
    """Working digits so that terms up to ``field**power`` keep ``guard`` digits."""
    return int(math.ceil(power * max(_log10_field_bound(spec, x), 0.0))) + guard


def _mp_family_functions(family: Family, x, m):
    if family in (Family.DN, Family.ND):
        sn = [mpmath.ellipfun("sn", v, m=m) for v in x]
        dn = [mpmath.sqrt(1 - m * v * v) for v in sn]
        rm = mpmath.sqrt(m)
        if family is Family.DN:
            return dn, [rm * v for v in sn]
        return [1 / d for d in dn], [rm * v / d for v, d in zip(sn, dn)]
    if family is Family.CN:
        return [mpmath.ellipfun("cn", v, m=m) for v in x], [mpmath.ellipfun("sn", v, m=m) for v in x]
    if family is Family.SECH:
        return [mpmath.sech(v) for v in x], [mpmath.tanh(v) for v in x]
    if family is Family.COS:
        return [mpmath.cos(v) for v in x], [mpmath.sin(v) for v in x]
    return [mpmath.cosh(v) for v in x], [mpmath.sinh(v) for v in x]


def build_profile_mp(spec: ProfileSpec, L: int = 64, *, origin: int | None = None,
                     coeffs: LameCoeffs | None = None, dps: int | None = None) -> Profile:
    """Multiprecision twin of :func:`build_profile` without an argument cap.

    ``f`` and ``g`` are object arrays of mpf values built at ``dps`` digits
    (default from :func:`required_digits`); arithmetic on them should run
    inside ``profile.precision()``.
    """
    j = site_indices(L, origin)
    xf = spec.beta * (j + spec.c2)
    dps = required_digits(spec, xf) if dps is None else int(dps)
    with mpmath.workdps(dps):
        beta, c2, m = mpmath.mpf(spec.beta), mpmath.mpf(spec.c2), mpmath.mpf(spec.m)
        x = [beta * (int(k) + c2) for k in j]
        y, s = _mp_family_functions(spec.family, x, m)
        if coeffs is None:
            T = cheb_coeffs(ChebKind.FIRST, spec.N)
            U = cheb_coeffs(ChebKind.SECOND, spec.N - 1)
            t_part = [T(v) for v in y]
            s_part = [sv * U(v) for v, sv in zip(y, s)]
        else:
            if coeffs.N != spec.N:
                raise ProfileError(f"coefficient order {coeffs.N} does not match N={spec.N}")
            A, B = IntPoly(coeffs.a), IntPoly(coeffs.b)
            if coeffs.parity is Parity.ODD:
                t_part = [v * A(v * v) for v in y]
                s_part = [sv * B(v * v) for v, sv in zip(y, s)]
            else:
                t_part = [A(v * v) for v in y]
                s_part = [sv * v * B(v * v) for v, sv in zip(y, s)]
        a1 = 1 / mpmath.sqrt(abs(mpmath.mpf(spec.mu1)))
        a2 = 1 / mpmath.sqrt(abs(mpmath.mpf(spec.mu2)))
        if spec.swapped:
            f = np.array([a1 * v for v in s_part], dtype=object)
            g = np.array([a2 * v for v in t_part], dtype=object)
        else:
            f = np.array([a1 * v for v in t_part], dtype=object)
            g = np.array([a2 * v for v in s_part], dtype=object)
    pf, pg = field_period(spec.family, spec.N, spec.m)
    if spec.swapped:
        pf, pg = pg, pf
    saturated = np.zeros(j.shape, dtype=bool)
    for arr in (j, xf, f, g, saturated):
        arr.flags.writeable = False
    return Profile(spec=spec, j=j, x=xf, f=f, g=g,
                   period_f=None if pf is None else pf / spec.beta,
                   period_g=None if pg is None else pg / spec.beta,
                   saturated=saturated, dps=dps)


def commensurate_beta(family: Family, N: int, m: float, L: int, windings: int = 1) -> float:
    """Width for which both fields are exactly periodic on a ring of ``L`` sites."""
    pf, pg = field_period(family, N, m)
    if pf is None:
        raise ProfileError(f"family {family.value} is not periodic")
    return windings * max(pf, pg) / L


# ---------------------------------------------------------------------------
# boundary periods and limits

@dataclass(frozen=True)
class PeriodReport:
    family: Family
    N: int
    m: float
    K: float
    claimed_f: float          # x-periods stated for the boundary condition
    claimed_g: float
    measured_f: float | None  # smallest of {2K, 4K} that holds, None if neither
    measured_g: float | None
    antiperiodic_f: bool      # F(x + 2K) = -F(x)
    antiperiodic_g: bool
    holds: bool               # the claimed periods hold literally
    holds_up_to_sign: bool


def _continuum(spec: ProfileSpec, x):
    t_part, s_part = unit_fields(spec.family, spec.N, x, spec.m)
    return t_part / math.sqrt(abs(spec.mu1)), s_part / math.sqrt(abs(spec.mu2))


def boundary_period_check(spec: ProfileSpec, samples: int = 100, seed: int = 0,
                          tol: float = TOL.period) -> PeriodReport:
    """Check the boundary periods of a periodic family on the continuum.

    Claimed periods: ``(2K, 4K)`` for dn/nd and ``(2K, 2K)`` for cn/cos.
    The report also records which of ``2K`` and ``4K`` actually hold.
    """
    fam = spec.family
    if not fam.periodic or (fam is not Family.COS and spec.m == 1.0):
        raise ProfileError(f"family {fam.value} is not periodic")
    K = math.pi / 2 if fam is Family.COS else complete_K(spec.m)
    claimed = (2 * K, 4 * K) if fam in (Family.DN, Family.ND) else (2 * K, 2 * K)
    rng = np.random.default_rng(seed)
    x = rng.uniform(-4 * K, 4 * K, samples)
    base = _continuum(spec, x)

    def shifted(p):
        return _continuum(spec, x + p)

    def periodic(idx, p, sign=1.0):
        return bool(np.max(np.abs(shifted(p)[idx] - sign * base[idx])) < tol)

    measured = []
    anti = []
    for idx in (0, 1):
        if periodic(idx, 2 * K):
            measured.append(2 * K)
        elif periodic(idx, 4 * K):
            measured.append(4 * K)
        else:
            measured.append(None)
        anti.append(periodic(idx, 2 * K, sign=-1.0))
    holds = periodic(0, claimed[0]) and periodic(1, claimed[1])
    up_to_sign = all(periodic(i, claimed[i]) or periodic(i, claimed[i], -1.0) for i in (0, 1))
    return PeriodReport(family=fam, N=spec.N, m=float(spec.m), K=K,
                        claimed_f=claimed[0], claimed_g=claimed[1],
                        measured_f=measured[0], measured_g=measured[1],
                        antiperiodic_f=anti[0], antiperiodic_g=anti[1],
                        holds=holds, holds_up_to_sign=up_to_sign)


LIMIT_PAIRS = {
    (Family.DN, Family.SECH): 1.0,
    (Family.CN, Family.SECH): 1.0,
    (Family.CN, Family.COS): 0.0,
    (Family.ND, Family.COSH): 1.0,
}


def limit_deviation(pair: tuple[Family, Family], N: int, beta: float, c2: float,
                    L: int = 64, mu1: float = -1.0, mu2: float | None = None) -> float:
    """Max sitewise deviation between an elliptic family at its limiting
    modulus and the closed-form family, relative to ``max(1, |value|)``."""
    pair = (Family(pair[0]), Family(pair[1]))
    if pair not in LIMIT_PAIRS:
        raise ProfileError(f"invalid limit pair {pair[0].value} -> {pair[1].value}")
    m = LIMIT_PAIRS[pair]
    if mu2 is None:
        mu2 = mu1 if pair[0].bounded else -mu1
    a = build_profile(ProfileSpec(pair[0], N, beta, c2, m, mu1, mu2), L)
    b = build_profile(ProfileSpec(pair[1], N, beta, c2, m, mu1, mu2), L)
    keep = ~b.saturated
    if not keep.any():
        raise ProfileError("every site lies beyond the x cap; shrink beta or L")
    dev = 0.0
    for u, v in ((a.f, b.f), (a.g, b.g)):
        rel = np.abs(u[keep] - v[keep]) / np.maximum(1.0, np.abs(v[keep]))
        dev = max(dev, float(np.max(rel)))
    return dev


def limit_check(pair, N: int, beta: float, c2: float, tol: float = TOL.identity, **kw) -> bool:
    return limit_deviation(pair, N, beta, c2, **kw) < tol
