"""Query-counted divide-and-conquer search for Sperner problems on pseudo-manifolds."""

from spernerlab.chains import Chain, Ring, boundary_chain, check_conservation, flow, local_conservation, standard_chain
from spernerlab.complex import (
    NotOrientable,
    NotPseudoManifold,
    OrientedSimplex,
    PseudoManifold,
    SkeletonGraph,
    boundary_complex,
    check_orientability,
    faces,
    induced_orientation,
    skeleton,
    validate_pseudo_manifold,
)
from spernerlab.oracle import LabelingOracle, OracleContradiction, UnknownVertex
from spernerlab.separation import (
    Separation,
    SeparatorStrategy,
    best_separation,
    separator_budget,
    iterated_separation_number,
    validate_separation,
)
from spernerlab.solver import PromiseViolation, SolveResult, SpmInstance, brute_force, solve_ospm, solve_spm

__version__ = "0.1.0"
