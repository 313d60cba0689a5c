"""Numerical tolerances shared across the package."""
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    identity: float = 1e-12        # sn^2+cn^2, dn^2+m sn^2, constraint residuals
    convergence: float = 1e-15     # AGM stopping rule (relative)
    period: float = 1e-10          # continuum periodicity checks
    residual: float = 1e-10        # stationary model residuals
    admissibility: float = 1e-12   # parameter relations of the phi^4 / phi^6 models
    x_cap: float = 20.0            # |x| cap for the cosh-type family


TOL = Tolerances()
