"""Moduli spaces of discrete Morse functions, merge trees and barcodes."""

from .arrangement import (
    SignVector,
    enumerate_regions,
    facets_of_critical_region,
    is_morse_region,
    is_realizable,
    matching_complex,
    matching_to_flat,
    sign_vector,
)
from .barcode import Barcode, barcode_edit_distance, induced_barcode
from .cw_complex import Cell, Complex, CoverRelation, from_maximal_simplices
from .discrete_morse import (
    DiscreteFunction,
    Matching,
    critical_cells,
    induced_matching,
    is_discrete_morse,
)
from .merge_tree import MergeTree, edit_distance, induced_merge_tree
from .morphisms import CellMap, pullback, pushforward

__version__ = "0.1.0"

__all__ = [
    "Barcode",
    "Cell",
    "CellMap",
    "Complex",
    "CoverRelation",
    "DiscreteFunction",
    "Matching",
    "MergeTree",
    "SignVector",
    "barcode_edit_distance",
    "critical_cells",
    "edit_distance",
    "enumerate_regions",
    "facets_of_critical_region",
    "from_maximal_simplices",
    "induced_barcode",
    "induced_matching",
    "induced_merge_tree",
    "is_discrete_morse",
    "is_morse_region",
    "is_realizable",
    "matching_complex",
    "matching_to_flat",
    "pullback",
    "pushforward",
    "sign_vector",
]
