"""Interval resolutions of persistence modules over finite posets.

The main entry points are re-exported here; see the submodules for the rest.
"""

from ._accel import backend
from .approx import (
    ApproximationStep,
    IntervalResolution,
    euler_profile,
    interval_codimension,
    interval_dimension,
    interval_resolution,
    minimal_right_interval_approximation,
)
from .artrans import dual, intgldim, intgldim_detail, minimal_projective_presentation, tau, tau_inverse, top_dims, transpose
from .errors import DepthExceeded, InputError, InternalInconsistency, IntresError, InvariantViolation, JoinMissing
from .ladder import compress, compressed_multiplicity, interval_approximation_delta, xi, zigzag_top_multiplicity
from .module import (
    ModuleMorphism,
    PersistenceModule,
    cokernel,
    direct_sum,
    hom_basis,
    hom_dim,
    injective_at,
    interval_module,
    kernel,
    projective_at,
    scramble,
)
from .poset import Interval, IntervalPoset, Poset, enumerate_intervals, make_chain, make_grid, make_interval

__version__ = "0.1.0"

__all__ = [
    "ApproximationStep",
    "DepthExceeded",
    "InputError",
    "InternalInconsistency",
    "Interval",
    "IntervalPoset",
    "IntervalResolution",
    "IntresError",
    "InvariantViolation",
    "JoinMissing",
    "ModuleMorphism",
    "PersistenceModule",
    "Poset",
    "backend",
    "cokernel",
    "compress",
    "compressed_multiplicity",
    "direct_sum",
    "dual",
    "enumerate_intervals",
    "euler_profile",
    "hom_basis",
    "hom_dim",
    "injective_at",
    "interval_approximation_delta",
    "interval_codimension",
    "interval_dimension",
    "interval_module",
    "interval_resolution",
    "intgldim",
    "intgldim_detail",
    "kernel",
    "make_chain",
    "make_grid",
    "make_interval",
    "minimal_projective_presentation",
    "minimal_right_interval_approximation",
    "projective_at",
    "scramble",
    "tau",
    "tau_inverse",
    "top_dims",
    "transpose",
    "xi",
    "zigzag_top_multiplicity",
]
