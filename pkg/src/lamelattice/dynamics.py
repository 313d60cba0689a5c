"""Time integration of the coupled Salerno / Ablowitz-Ladik lattices.

The equations are ``i du/dt + L_u[u, v] = 0`` and ``i dv/dt + L_v[u, v] = 0``
with the lattice operators from :mod:`lamelattice.models`; they are advanced
with the classical fourth-order Runge-Kutta scheme at fixed step.
"""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass

import numpy as np

from .models import ALParams, SalernoParams, StationaryPair, al_operators, salerno_operators


class Boundary(enum.Enum):
    PERIODIC = "periodic"
    OPEN = "open"      # zero field outside the chain


class IntegrationError(ArithmeticError):
    def __init__(self, message: str, t: float):
        super().__init__(f"{message} at t={t:.6g}")
        self.t = t


@dataclass(frozen=True)
class LatticeState:
    u: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex)
        v = np.asarray(self.v, dtype=complex)
        if u.shape != v.shape or u.ndim != 1 or u.size < 3:
            raise ValueError("u and v must be 1-d arrays of equal length >= 3")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def from_pair(cls, pair: StationaryPair, t: float = 0.0) -> "LatticeState":
        return cls(pair.f.astype(complex), pair.g.astype(complex), t)


@dataclass(frozen=True)
class EvolveConfig:
    dt: float = 1e-3
    t_end: float = 10.0
    boundary: Boundary = Boundary.PERIODIC
    stride: int = 1

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if not self.dt > 0 or not self.t_end > 0:
            raise ValueError("dt and t_end must be positive")
        if int(self.stride) != self.stride or self.stride < 1:
            raise ValueError("stride must be a positive integer")

    @property
    def steps(self) -> int:
        return int(round(self.t_end / self.dt))


def _operators(params, u, v, boundary: Boundary):
    mode = "periodic" if boundary is Boundary.PERIODIC else "zero"
    if isinstance(params, ALParams):
        return al_operators(params, u, v, mode)
    if isinstance(params, SalernoParams):
        return salerno_operators(params, u, v, mode)
    raise TypeError("dynamics supports Salerno and AL parameters only")


def rhs(params, state: LatticeState, boundary: Boundary = Boundary.PERIODIC):
    """``(du/dt, dv/dt) = (i L_u, i L_v)``."""
    Lu, Lv = _operators(params, state.u, state.v, Boundary(boundary))
    return 1j * Lu, 1j * Lv


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray        # (n_rec,)
    u: np.ndarray        # (n_rec, L)
    v: np.ndarray

    def state(self, k: int) -> LatticeState:
        return LatticeState(self.u[k], self.v[k], float(self.t[k]))

    def modulus_drift(self, sites=None) -> float:
        """``max_{j,t} ||w_j(t)| - |w_j(0)||`` over both fields."""
        sel = slice(None) if sites is None else sites
        du = np.abs(np.abs(self.u[:, sel]) - np.abs(self.u[0, sel]))
        dv = np.abs(np.abs(self.v[:, sel]) - np.abs(self.v[0, sel]))
        return float(max(du.max(), dv.max()))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["t", "j", "re_u", "im_u", "abs_u", "arg_u", "re_v", "im_v", "abs_v", "arg_v"])
        fmt = lambda x: format(float(x), ".17g")  # noqa: E731
        for k, t in enumerate(self.t):
            for j in range(self.u.shape[1]):
                a, b = self.u[k, j], self.v[k, j]
                w.writerow([fmt(t), j, fmt(a.real), fmt(a.imag), fmt(abs(a)), fmt(np.angle(a)),
                            fmt(b.real), fmt(b.imag), fmt(abs(b)), fmt(np.angle(b))])
        return buf.getvalue()


def evolve(params, state0: LatticeState, cfg: EvolveConfig) -> Trajectory:
    """Fixed-step RK4; records every ``cfg.stride`` steps plus the final state."""
    dt = cfg.dt
    u, v = state0.u.copy(), state0.v.copy()
    t0 = state0.t
    times, us, vs = [t0], [u.copy()], [v.copy()]

    def f(uu, vv):
        # overflow is caught below as a non-finite state
        with np.errstate(over="ignore", invalid="ignore"):
            Lu, Lv = _operators(params, uu, vv, cfg.boundary)
            return 1j * Lu, 1j * Lv

    n = cfg.steps
    for step in range(1, n + 1):
        k1u, k1v = f(u, v)
        k2u, k2v = f(u + 0.5 * dt * k1u, v + 0.5 * dt * k1v)
        k3u, k3v = f(u + 0.5 * dt * k2u, v + 0.5 * dt * k2v)
        k4u, k4v = f(u + dt * k3u, v + dt * k3v)
        with np.errstate(over="ignore", invalid="ignore"):
            u = u + (dt / 6.0) * (k1u + 2 * k2u + 2 * k3u + k4u)
            v = v + (dt / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
        t = t0 + step * dt
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise IntegrationError("non-finite state (step size too large or blow-up)", t)
        if step % cfg.stride == 0 or step == n:
            times.append(t)
            us.append(u.copy())
            vs.append(v.copy())
    return Trajectory(np.array(times), np.array(us), np.array(vs))


def exact_trajectory(pair: StationaryPair, omega1: float, omega2: float, t) -> Trajectory:
    """``u = f exp(-i w1 t)``, ``v = g exp(-i w2 t)`` sampled at times ``t``."""
    t = np.asarray(t, dtype=float)
    u = pair.f[None, :] * np.exp(-1j * omega1 * t)[:, None]
    v = pair.g[None, :] * np.exp(-1j * omega2 * t)[:, None]
    return Trajectory(t, u, v)


@dataclass(frozen=True)
class FrequencyEstimate:
    omega1: float
    omega2: float
    fit_residual1: float   # rms deviation of the unwrapped phase from the fitted line
    fit_residual2: float


def _phase_slope(t, z):
    phase = np.unwrap(np.angle(z))
    A = np.vstack([t, np.ones_like(t)]).T
    coef, *_ = np.linalg.lstsq(A, phase, rcond=None)
    fit = A @ coef
    return -coef[0], float(np.sqrt(np.mean((phase - fit) ** 2)))


def extract_frequency(traj: Trajectory, site: int, min_modulus: float = 1e-6) -> FrequencyEstimate:
    """Least-squares rotation frequencies of ``u_j`` and ``v_j`` (``z ~ exp(-i w t)``)."""
    u, v = traj.u[:, site], traj.v[:, site]
    for name, z in (("u", u), ("v", v)):
        if abs(z[0]) < min_modulus:
            raise ValueError(f"|{name}_{site}(0)| = {abs(z[0]):.3g} is too small for a stable phase")
    w1, r1 = _phase_slope(traj.t, u)
    w2, r2 = _phase_slope(traj.t, v)
    return FrequencyEstimate(float(w1), float(w2), r1, r2)
