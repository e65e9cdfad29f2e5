"""Time-optimal K-P synthesis on SO(3) with the symmetry group G = K+ u K-.

Modules
-------
liegroup     so(3), SO(3), the Cartan split and the symmetry group
orbitspace   the half disc SO(3)/G, projections and orbit-type strata
geodesics    closed-form K-P geodesics and their projections
synthesis    minimum time, optimal geodesic and cut-locus reports
reachable    frontiers of the projected reachable sets
oracle       brute-force upper bounds from piecewise-constant controls
"""

from .exceptions import InvalidInputError, KPSynthError, LiftError, NoEstimateError, NumericalFailure
from .geodesics import GeodesicSpec, ReducedGeodesic, geodesic_at, optimal_control, reduced_projection
from .liegroup import AlgebraElement, SymmetryElement, cartan_split, conjugate, exp, inner_product
from .oracle import ControlSchedule, SearchBudget, estimate_min_time, integrate
from .orbitspace import OrbitPoint, Stratum, classify, lift_conjugator, project, representative
from .reachable import FrontierCurve, frontier, reachable_contains
from .synthesis import (
    CutLocusReport,
    SynthesisResult,
    cut_report,
    isotropy_invariance_check,
    loss_of_optimality_time,
    min_time_boundary,
    min_time_origin,
    min_time_segment_OB,
    solve,
)

__version__ = "0.1.0"
