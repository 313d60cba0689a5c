"""Field equations, parameter admissibility and stationary residuals of the
coupled Salerno, Ablowitz-Ladik, phi^6 and phi^4 lattices.

Salerno/AL fields obey ``i du/dt + L_u[u, v] = 0`` (and likewise for v); the
lattice operators ``L_u``, ``L_v`` are shared with :mod:`lamelattice.dynamics`.
A stationary state ``u = f exp(-i w1 t)`` turns this into
``w1 f + L_u[f, g] = 0``, which is what the residual functions evaluate.
"""
from __future__ import annotations

import functools
import math
from dataclasses import asdict, dataclass, field
from typing import Union

import mpmath
import numpy as np

from .config import TOL
from .profiles import Family, Profile, ProfileSpec, build_profile, build_profile_mp, working_precision
from .lame import LameCoeffs


class InadmissibleParams(ValueError):
    """Parameters violate the relations under which the exact solutions exist."""


class ConstraintError(ValueError):
    """A stationary pair does not satisfy the sitewise constraint."""


# ---------------------------------------------------------------------------
# parameter sets

@dataclass(frozen=True)
class SalernoParams:
    mu1: float
    mu2: float
    nu1: float
    nu2: float
    kind: str = field(default="salerno", init=False)

    def __post_init__(self):
        if self.mu1 == 0 or self.mu2 == 0:
            raise InadmissibleParams("Salerno couplings mu1, mu2 must be nonzero")

    def profile_couplings(self) -> tuple[float, float]:
        return self.mu1, self.mu2


@dataclass(frozen=True)
class ALParams:
    mu1: float
    mu2: float
    kind: str = field(default="al", init=False)

    def __post_init__(self):
        if self.mu1 == 0 or self.mu2 == 0:
            raise InadmissibleParams("AL couplings mu1, mu2 must be nonzero")

    def to_salerno(self) -> SalernoParams:
        return SalernoParams(self.mu1, self.mu2, 2 * self.mu1, 2 * self.mu2)

    def profile_couplings(self) -> tuple[float, float]:
        return self.mu1, self.mu2


def _close(a: float, b: float, tol: float = TOL.admissibility) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class Phi6Params:
    a1: float
    a2: float
    b1: float
    b2: float
    c1: float
    c2: float
    d: float
    e: float
    f: float
    h: float
    kind: str = field(default="phi6", init=False)

    @classmethod
    def admissible(cls, c1: float, b1: float, h: float = 1.0) -> "Phi6Params":
        """Complete ``(c1, b1, h)`` to a parameter set admitting the exact solutions."""
        a1 = b1 / math.sqrt(h * h * c1) - 2.0 / h ** 2
        return cls(a1=a1, a2=a1, b1=b1, b2=b1, c1=c1, c2=c1, d=-b1, e=2 * c1, f=c1, h=h)

    @property
    def b(self) -> float:
        """Constraint constant ``phi^2 + psi^2``; satisfies ``c1 h^2 b^2 = 1``."""
        return 1.0 / math.sqrt(self.c1 * self.h ** 2)

    def check(self) -> None:
        if not self.h > 0:
            raise InadmissibleParams("lattice spacing h must be positive")
        if not self.c1 * self.h ** 2 > 0:
            raise InadmissibleParams("phi6 requires c1 h^2 > 0")
        problems = []
        if not (_close(self.c1, self.c2) and _close(self.c1, self.f) and _close(self.c1, self.e / 2)):
            problems.append("c1 = c2 = f = e/2")
        if not (_close(self.b1, self.b2) and _close(self.b1, -self.d)):
            problems.append("b1 = b2 = -d")
        if not _close(self.a1, self.a2):
            problems.append("a1 = a2")
        if not _close(self.a1 + 2.0 / self.h ** 2, self.b1 / math.sqrt(self.h ** 2 * self.c1)):
            problems.append("a1 + 2/h^2 = b1/sqrt(h^2 c1)")
        if problems:
            raise InadmissibleParams("phi6 parameters violate " + "; ".join(problems))

    def profile_couplings(self) -> tuple[float, float]:
        return -1.0 / self.b, -1.0 / self.b


@dataclass(frozen=True)
class Phi4Params:
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    gamma: float
    h: float
    kind: str = field(default="phi4", init=False)

    @classmethod
    def admissible(cls, beta1: float, h: float = 1.0) -> "Phi4Params":
        alpha = -1.0 / h ** 2
        return cls(alpha1=alpha, alpha2=alpha, beta1=beta1, beta2=beta1, gamma=2 * beta1, h=h)

    @property
    def b(self) -> float:
        """Constraint constant ``phi^2 + psi^2 = 1 / (2 beta1 h^2)``."""
        return 1.0 / (2.0 * self.beta1 * self.h ** 2)

    def check(self) -> None:
        if not self.h > 0:
            raise InadmissibleParams("lattice spacing h must be positive")
        if not self.beta1 > 0:
            raise InadmissibleParams("phi4 requires beta1 > 0")
        problems = []
        if not (_close(2 * self.beta1, 2 * self.beta2) and _close(2 * self.beta1, self.gamma)):
            problems.append("2 beta1 = 2 beta2 = gamma")
        if not (_close(self.alpha1, -1.0 / self.h ** 2) and _close(self.alpha2, -1.0 / self.h ** 2)):
            problems.append("alpha1 = alpha2 = -1/h^2")
        if problems:
            raise InadmissibleParams("phi4 parameters violate " + "; ".join(problems))

    def profile_couplings(self) -> tuple[float, float]:
        return -1.0 / self.b, -1.0 / self.b


ModelParams = Union[SalernoParams, ALParams, Phi6Params, Phi4Params]


def params_to_dict(p: ModelParams) -> dict:
    return asdict(p)


def params_from_dict(d: dict) -> ModelParams:
    d = dict(d)
    kind = d.pop("kind")
    cls = {"salerno": SalernoParams, "al": ALParams, "phi6": Phi6Params, "phi4": Phi4Params}[kind]
    return cls(**d)


# ---------------------------------------------------------------------------
# stationary pairs

@dataclass(frozen=True)
class StationaryPair:
    f: np.ndarray
    g: np.ndarray
    family: Family | None = None
    dps: int | None = None        # set when f, g hold mpf values

    @classmethod
    def from_profile(cls, profile: Profile) -> "StationaryPair":
        return cls(np.asarray(profile.f), np.asarray(profile.g), profile.spec.family, profile.dps)

    def precision(self):
        return working_precision(self.dps)

    def flipped(self, sf: int = 1, sg: int = 1) -> "StationaryPair":
        return StationaryPair(sf * self.f, sg * self.g, self.family, self.dps)


def stationary_pair(params: ModelParams, family: Family, N: int, beta: float, c2: float = 0.0,
                    m: float | None = None, L: int = 64, *, coeffs: LameCoeffs | None = None,
                    origin: int | None = None, multiprecision: bool = False) -> StationaryPair:
    """Exact profile normalised for ``params`` (couplings or amplitude)."""
    mu1, mu2 = params.profile_couplings()
    spec = ProfileSpec(family, N, beta, c2, m, mu1, mu2)
    build = build_profile_mp if multiprecision else build_profile
    return StationaryPair.from_profile(build(spec, L, coeffs=coeffs, origin=origin))


# ---------------------------------------------------------------------------
# lattice operators

def _shift_sum(a: np.ndarray, boundary: str):
    """Neighbour sum ``a_{j+1} + a_{j-1}`` and the centre values it pairs with."""
    if boundary == "periodic":
        return np.roll(a, -1) + np.roll(a, 1), a
    if boundary == "open":
        return a[2:] + a[:-2], a[1:-1]
    if boundary == "zero":
        out = np.zeros_like(a)
        out[:-1] += a[1:]
        out[1:] += a[:-1]
        return out, a
    raise ValueError(f"unknown boundary mode {boundary!r}")


def salerno_operators(p: SalernoParams, u, v, boundary: str = "periodic"):
    """Spatial parts ``(L_u, L_v)`` of the Salerno equations.

    ``open`` covers interior sites ``1 .. L-2`` only; ``zero`` pads the chain
    with vanishing fields.
    """
    nu, uc = _shift_sum(u, boundary)
    nv, vc = _shift_sum(v, boundary)
    S = p.mu1 * np.abs(uc) ** 2 + p.mu2 * np.abs(vc) ** 2
    lin_v = 2.0 + p.nu1 * p.mu2 / p.mu1 ** 2 - p.nu2 / p.mu2
    Lu = (nu - 2.0 * uc) + S * (nu + (p.nu1 - 2 * p.mu1) / p.mu1 * uc)
    Lv = (nv - lin_v * vc) + S * (nv + (p.nu2 - 2 * p.mu2) / p.mu2 * vc)
    return Lu, Lv


def al_operators(p: ALParams, u, v, boundary: str = "periodic"):
    nu, uc = _shift_sum(u, boundary)
    nv, vc = _shift_sum(v, boundary)
    S = p.mu1 * np.abs(uc) ** 2 + p.mu2 * np.abs(vc) ** 2
    Lu = (nu - 2.0 * uc) + S * nu
    Lv = (nv - (2.0 * p.mu2 / p.mu1) * vc) + S * nv
    return Lu, Lv


# ---------------------------------------------------------------------------
# residual reports

@dataclass(frozen=True)
class ResidualReport:
    max_abs: float
    rms: float
    argmax: int          # array index of the worst site
    equation: int        # 1 or 2
    max_rel: float       # residual over the sum of magnitudes of its terms
    sites: int

    def to_dict(self) -> dict:
        return asdict(self)


def _report(r1, r2, s1, s2, offset: int) -> ResidualReport:
    # multiprecision residuals are tiny; scales beyond the double range become inf
    a1 = np.asarray(np.abs(r1), dtype=float)
    a2 = np.asarray(np.abs(r2), dtype=float)
    s1 = np.asarray(s1, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    both = np.concatenate([a1, a2])
    if both.size == 0:
        return ResidualReport(0.0, 0.0, -1, 0, 0.0, 0)
    k = int(np.argmax(both))
    eq = 1 if k < a1.size else 2
    idx = (k if eq == 1 else k - a1.size) + offset
    rel = np.concatenate([a1 / np.maximum(s1, np.finfo(float).tiny),
                          a2 / np.maximum(s2, np.finfo(float).tiny)])
    rel = np.where(both == 0.0, 0.0, rel)
    return ResidualReport(
        max_abs=float(both[k]),
        rms=float(np.sqrt(np.mean(both ** 2))),
        argmax=idx,
        equation=eq,
        max_rel=float(np.max(rel)),
        sites=int(a1.size),
    )


def _pair_precision(fn):
    """Evaluate ``fn(params, pair, ...)`` at the working precision of ``pair``."""
    @functools.wraps(fn)
    def wrapper(p, pair, *args, **kwargs):
        with pair.precision():
            return fn(p, pair, *args, **kwargs)
    return wrapper


def _offset(boundary: str) -> int:
    return 1 if boundary == "open" else 0


@_pair_precision
def residual_salerno(p: SalernoParams, pair: StationaryPair, omega1: float, omega2: float,
                     boundary: str = "periodic", v_form: str = "field") -> ResidualReport:
    """Stationary residuals ``w1 f + L_u`` and ``w2 g + L_v``.

    ``v_form="printed"`` evaluates the alternative stationary v-equation in
    which the linear coefficient reads ``w2 - 2 + nu1 mu2/mu1^2 - nu2/mu2``;
    it differs from the reduction of the time-dependent v-equation by the
    sign of ``nu1 mu2/mu1^2 - nu2/mu2``.
    """
    f, g = pair.f, pair.g
    Lu, Lv = salerno_operators(p, f, g, boundary)
    nf, fc = _shift_sum(f, boundary)
    ng, gc = _shift_sum(g, boundary)
    S_abs = abs(p.mu1) * fc ** 2 + abs(p.mu2) * gc ** 2
    r1 = omega1 * fc + Lu
    s1 = (abs(omega1) * np.abs(fc) + (1 + S_abs) * np.abs(nf) + 2 * np.abs(fc)
          + S_abs * abs((p.nu1 - 2 * p.mu1) / p.mu1) * np.abs(fc))
    lin = p.nu1 * p.mu2 / p.mu1 ** 2 - p.nu2 / p.mu2
    if v_form == "field":
        r2 = omega2 * gc + Lv
    elif v_form == "printed":
        S = p.mu1 * fc ** 2 + p.mu2 * gc ** 2
        r2 = ((omega2 - 2 + lin) * gc + (S + 1) * ng
              + S * (p.nu2 - 2 * p.mu2) / p.mu2 * gc)
    else:
        raise ValueError(f"unknown v_form {v_form!r}")
    s2 = ((abs(omega2) + 2 + abs(lin)) * np.abs(gc) + (1 + S_abs) * np.abs(ng)
          + S_abs * abs((p.nu2 - 2 * p.mu2) / p.mu2) * np.abs(gc))
    return _report(r1, r2, s1, s2, _offset(boundary))


@_pair_precision
def residual_al(p: ALParams, pair: StationaryPair, omega1: float, omega2: float,
                boundary: str = "periodic") -> ResidualReport:
    f, g = pair.f, pair.g
    Lu, Lv = al_operators(p, f, g, boundary)
    nf, fc = _shift_sum(f, boundary)
    ng, gc = _shift_sum(g, boundary)
    S_abs = abs(p.mu1) * fc ** 2 + abs(p.mu2) * gc ** 2
    r1 = omega1 * fc + Lu
    r2 = omega2 * gc + Lv
    s1 = (abs(omega1) + 2) * np.abs(fc) + (1 + S_abs) * np.abs(nf)
    s2 = (abs(omega2) + abs(2 * p.mu2 / p.mu1)) * np.abs(gc) + (1 + S_abs) * np.abs(ng)
    return _report(r1, r2, s1, s2, _offset(boundary))


def _require_bounded(pair: StationaryPair, model: str):
    if pair.family is not None and not pair.family.bounded:
        raise InadmissibleParams(f"{model}: family {pair.family.value} is not admissible")


@_pair_precision
def residual_phi6(p: Phi6Params, pair: StationaryPair, boundary: str = "periodic") -> ResidualReport:
    p.check()
    _require_bounded(pair, "phi6")
    nf, fc = _shift_sum(pair.f, boundary)
    ng, gc = _shift_sum(pair.g, boundary)
    ih2 = 1.0 / p.h ** 2
    br1 = p.c1 * fc ** 4 + p.e * fc ** 2 * gc ** 2 + p.f * gc ** 4
    br2 = p.c2 * gc ** 4 + 0.5 * p.e * fc ** 4 + 2 * p.f * fc ** 2 * gc ** 2
    r1 = ih2 * (nf - 2 * fc) - (p.a1 * fc - p.b1 * fc ** 3 + p.d * gc ** 2 * fc + br1 * nf)
    r2 = ih2 * (ng - 2 * gc) - (p.a2 * gc - p.b2 * gc ** 3 + p.d * fc ** 2 * gc + br2 * ng)
    s1 = (ih2 * (np.abs(nf) + 2 * np.abs(fc)) + abs(p.a1) * np.abs(fc) + abs(p.b1) * np.abs(fc) ** 3
          + abs(p.d) * gc ** 2 * np.abs(fc) + np.abs(br1) * np.abs(nf))
    s2 = (ih2 * (np.abs(ng) + 2 * np.abs(gc)) + abs(p.a2) * np.abs(gc) + abs(p.b2) * np.abs(gc) ** 3
          + abs(p.d) * fc ** 2 * np.abs(gc) + np.abs(br2) * np.abs(ng))
    return _report(r1, r2, s1, s2, _offset(boundary))


@_pair_precision
def residual_phi4(p: Phi4Params, pair: StationaryPair, boundary: str = "periodic") -> ResidualReport:
    p.check()
    _require_bounded(pair, "phi4")
    nf, fc = _shift_sum(pair.f, boundary)
    ng, gc = _shift_sum(pair.g, boundary)
    ih2 = 1.0 / p.h ** 2
    br1 = 2 * p.beta1 * fc ** 2 + p.gamma * gc ** 2
    br2 = 2 * p.beta2 * gc ** 2 + p.gamma * fc ** 2
    r1 = ih2 * (nf - 2 * fc) - 2 * p.alpha1 * fc - br1 * nf
    r2 = ih2 * (ng - 2 * gc) - 2 * p.alpha2 * gc - br2 * ng
    s1 = ih2 * (np.abs(nf) + 2 * np.abs(fc)) + 2 * abs(p.alpha1) * np.abs(fc) + np.abs(br1 * nf)
    s2 = ih2 * (np.abs(ng) + 2 * np.abs(gc)) + 2 * abs(p.alpha2) * np.abs(gc) + np.abs(br2 * ng)
    return _report(r1, r2, s1, s2, _offset(boundary))


def bracket_values(p: Phi6Params | Phi4Params, pair: StationaryPair) -> tuple[np.ndarray, np.ndarray]:
    """Sitewise values of the brackets multiplying the neighbour sums."""
    f, g = pair.f, pair.g
    if isinstance(p, Phi6Params):
        return (p.c1 * f ** 4 + p.e * f ** 2 * g ** 2 + p.f * g ** 4,
                p.c2 * g ** 4 + 0.5 * p.e * f ** 4 + 2 * p.f * f ** 2 * g ** 2)
    return 2 * p.beta1 * f ** 2 + p.gamma * g ** 2, 2 * p.beta2 * g ** 2 + p.gamma * f ** 2


# ---------------------------------------------------------------------------
# frequencies

def omega2_candidates(p: SalernoParams | ALParams) -> dict[str, float]:
    """Closed-form values proposed for the v-field frequency."""
    s = p.to_salerno() if isinstance(p, ALParams) else p
    return {
        "nu1*mu2/mu1^2": s.nu1 * s.mu2 / s.mu1 ** 2,
        "2*nu2/mu2 - nu1*mu2/mu1^2": 2 * s.nu2 / s.mu2 - s.nu1 * s.mu2 / s.mu1 ** 2,
        "2*mu1/mu2": 2 * s.mu1 / s.mu2,
    }


@dataclass(frozen=True)
class FrequencyReport:
    omega1: float
    omega2: float
    omega1_closed: float          # nu1/mu1
    omega2_paper: float           # nu1*mu2/mu1^2, the published closed form
    omega2_printed_form: float    # value zeroing the alternative printed v-equation
    candidates: dict
    matches: tuple                # candidate names agreeing with omega2
    flags: tuple

    def to_dict(self) -> dict:
        d = {k: float(v) if isinstance(v, mpmath.mpf) else v for k, v in asdict(self).items()}
        d["matches"] = list(self.matches)
        d["flags"] = list(self.flags)
        return d


def _zeroing_omega(c, L, scale) -> float:
    # residual w c + L is linear in w; least-squares zero with each site
    # weighted by the magnitude of its terms, so large-amplitude sites of the
    # unbounded families do not swamp the estimate with rounding noise
    sc = np.maximum(scale, np.finfo(float).tiny)
    cw, Lw = c / sc, L / sc
    den = np.dot(cw, cw)
    if den == 0:
        return float("nan")
    w = -np.dot(cw, Lw) / den
    # multiprecision pairs keep an mpf frequency; rounding it would cost |f| * 1e-16
    return w if isinstance(w, mpmath.mpf) else float(w)


@_pair_precision
def derive_frequencies(p: SalernoParams | ALParams, pair: StationaryPair,
                       boundary: str = "open", constraint_tol: float | None = 1e-10,
                       match_tol: float = 1e-9) -> FrequencyReport:
    """Frequencies making the stationary residuals vanish on ``pair``.

    Both frequencies enter the residuals linearly, so they are obtained as
    the least-squares zeros of the residuals themselves; closed forms are
    only compared against, never assumed. ``constraint_tol=None`` skips the
    constraint precondition (mutation controls rely on this).
    """
    mu1, mu2 = p.mu1, p.mu2
    f, g = pair.f, pair.g
    con = np.abs(1 + mu1 * f ** 2 + mu2 * g ** 2) / np.maximum(1.0, abs(mu1) * f ** 2 + abs(mu2) * g ** 2)
    if constraint_tol is not None and np.max(con) > constraint_tol:
        raise ConstraintError(f"pair violates 1 + mu1 f^2 + mu2 g^2 = 0 (max {np.max(con):.3g})")
    s = p.to_salerno() if isinstance(p, ALParams) else p
    if isinstance(p, ALParams):
        Lu, Lv = al_operators(p, f, g, boundary)
    else:
        Lu, Lv = salerno_operators(p, f, g, boundary)
    nf, fc = _shift_sum(f, boundary)
    ng, gc = _shift_sum(g, boundary)
    S_abs = abs(s.mu1) * fc ** 2 + abs(s.mu2) * gc ** 2
    lin = s.nu1 * s.mu2 / s.mu1 ** 2 - s.nu2 / s.mu2
    scale_u = (1 + S_abs) * np.abs(nf) + (2 + S_abs * abs((s.nu1 - 2 * s.mu1) / s.mu1) + 1) * np.abs(fc)
    scale_v = (1 + S_abs) * np.abs(ng) + (2 + abs(lin) + S_abs * abs((s.nu2 - 2 * s.mu2) / s.mu2) + 1) * np.abs(gc)
    w1 = _zeroing_omega(fc, Lu, scale_u)
    w2 = _zeroing_omega(gc, Lv, scale_v)

    # the printed v-equation: (w2 - 2 + lin) g + (S+1) g_nb + S (nu2-2mu2)/mu2 g
    S = s.mu1 * fc ** 2 + s.mu2 * gc ** 2
    L_printed = (lin - 2) * gc + (S + 1) * ng + S * (s.nu2 - 2 * s.mu2) / s.mu2 * gc
    w2_printed = _zeroing_omega(gc, L_printed, scale_v)

    cands = omega2_candidates(p)
    scale = max(1.0, abs(w2))
    matches = tuple(k for k, v in cands.items() if abs(v - w2) <= match_tol * scale)
    flags = []
    w1_closed = s.nu1 / s.mu1
    w2_closed = cands["nu1*mu2/mu1^2"]
    if abs(w1 - w1_closed) > match_tol * max(1.0, abs(w1)):
        flags.append("omega1_discrepancy")
    if abs(w2 - w2_closed) > match_tol * scale:
        flags.append("omega2_discrepancy")
    if abs(w2 - w2_printed) > match_tol * scale:
        flags.append("printed_v_equation_disagrees")
    if len(matches) > 1:
        flags.append("candidates_indistinguishable")
    return FrequencyReport(omega1=w1, omega2=w2, omega1_closed=w1_closed, omega2_paper=w2_closed,
                           omega2_printed_form=w2_printed, candidates=cands, matches=matches,
                           flags=tuple(flags))


def stationary_residual(params: ModelParams, pair: StationaryPair, boundary: str = "open",
                        omegas: tuple[float, float] | None = None) -> tuple[ResidualReport, FrequencyReport | None]:
    """Residual of any model; Salerno/AL frequencies are derived when not supplied."""
    if isinstance(params, (SalernoParams, ALParams)):
        freq = None
        if omegas is None:
            freq = derive_frequencies(params, pair, boundary)
            omegas = (freq.omega1, freq.omega2)
        if isinstance(params, ALParams):
            return residual_al(params, pair, *omegas, boundary=boundary), freq
        return residual_salerno(params, pair, *omegas, boundary=boundary), freq
    if isinstance(params, Phi6Params):
        return residual_phi6(params, pair, boundary), None
    if isinstance(params, Phi4Params):
        return residual_phi4(params, pair, boundary), None
    raise TypeError(f"unsupported model parameters {type(params).__name__}")
