"""Suborbit structure and subdegree growth of infinite primitive digraph constructions."""

from .constructions import (
    complete_lobe,
    lobe_from_group,
    petersen_lobe,
    product_wreath,
    tree_of_lobes,
    wrap_finite,
)
from .expr import build, parse, unparse
from .growth import average_subdegree, classify, classify_view, verify_growth_bounds
from .lazy import distance, end_profile, expand, local_params
from .suborbits import subdegree_sequences, suborbit_partition

__version__ = "0.1.0"
