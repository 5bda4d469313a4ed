"""supext: a finite-scale workbench for superextensions, weakly additive
functionals, binary normal subbases, regular embeddings, and inclusion
hyperspaces, all in exact rational arithmetic."""

from .setkit import GroundSet, PointMap, SetFamily, Subset
from .superext import MaxLinkedSystem, Superextension, complete_linked, enumerate_mls, eta_point
from .functionals import PointFunction, axiom_check, evaluate, phi
from .inclusion import InclusionHyperspace, enumerate_ih
from .subbase import Subbase, is_binary, is_normal, s_hull
from .embed import FiniteTopSpace, RegularOperator, validate_regular

__all__ = [
    "GroundSet",
    "PointMap",
    "SetFamily",
    "Subset",
    "MaxLinkedSystem",
    "Superextension",
    "complete_linked",
    "enumerate_mls",
    "eta_point",
    "PointFunction",
    "axiom_check",
    "evaluate",
    "phi",
    "InclusionHyperspace",
    "enumerate_ih",
    "Subbase",
    "is_binary",
    "is_normal",
    "s_hull",
    "FiniteTopSpace",
    "RegularOperator",
    "validate_regular",
]

__version__ = "0.1.0"
