"""Exact Cohen-Macaulay / Gorenstein* toolkit for simplicial complexes and
weight-filtered geometric lattices."""

__version__ = "0.1.0"

from .cm import (
    ClassificationReport,
    Tri,
    classify,
    gorenstein_core,
    is_cm,
    is_gorenstein,
    is_gorenstein_star,
    is_gorenstein_star_v2,
    is_homotopy_cm,
    is_homotopy_gorenstein_star,
    is_shellable,
)
from .complex import SimplicialComplex, from_facets
from .errors import CmtkError, NonGenericWeights, NotAFace, NotPure, OracleDisagreement, TheoremViolation
from .flats import (
    GeometricLatticeOfFlats,
    PointConfiguration,
    WeightedFiltration,
    check_filtered_cm,
    diameter,
    filtered_characteristic_polynomial,
    filtered_poset,
    lattice_of_flats_from_points,
    lattice_of_flats_graphic,
    positive_flat_graph,
    safe_walk,
    uniform_matroid,
)
from .homology import GF, QQ, ZZ, Coeff, HomologyProfile, IntegerMatrix, PiOne, reduced_homology, smith_normal_form
from .posets import FinitePoset, Lattice, Polynomial, characteristic_polynomial, order_complex
from .stanley_reisner import BettiTable, depth_type, hochster_betti, minimal_nonfaces
