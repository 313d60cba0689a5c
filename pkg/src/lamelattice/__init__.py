"""Exact Lamé-Chebyshev solutions of coupled nonlinear lattices, with the
machinery to build, prove, verify and integrate them."""
from .chebyshev import ChebKind, IntPoly, ProofReport, cheb_coeffs, cheb_eval, prove_master_identity
from .dynamics import Boundary, EvolveConfig, LatticeState, Trajectory, evolve, extract_frequency
from .elliptic import DivergenceError, EllipticTriple, complete_K, jacobi
from .lame import LameCoeffs, Parity, general_coeffs
from .models import (ALParams, Phi4Params, Phi6Params, SalernoParams, StationaryPair,
                     derive_frequencies, residual_al, residual_phi4, residual_phi6,
                     residual_salerno, stationary_pair)
from .profiles import Family, Profile, ProfileError, ProfileSpec, build_profile

__version__ = "0.1.0"
