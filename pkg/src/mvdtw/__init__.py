"""Multivariate DTW nearest-neighbor search with cascaded lower bounds."""

from .core import (
    BoundResult,
    InvalidInputError,
    Method,
    MultivariateSeries,
    SearchParams,
    TiVariant,
    point_distance,
)
from .dtw import DtwResult, dtw_banded
from .ingest import (
    Dataset,
    ParseError,
    RawDataset,
    finalize,
    normalize,
    parse_native,
    parse_ts_subset,
    split,
    truncate_dims,
    write_native,
)
from .lb_mv import Envelope, build_envelope, lb_ad, lb_mv
from .lb_pc import BoundingBox, BoxGrouping, BoxSet, build_box_sets, lb_pc, quantize_cluster
from .lb_ti import NeighborDistances, lb_ti, neighbor_steps, ti_advance, ti_extend_top
from .search import NnOutcome, nn_search, tc_dtw_select, tune_params

__all__ = [
    "BoundResult", "BoundingBox", "BoxGrouping", "BoxSet", "Dataset", "DtwResult",
    "Envelope", "InvalidInputError", "Method", "MultivariateSeries", "NeighborDistances",
    "NnOutcome", "ParseError", "RawDataset", "SearchParams", "TiVariant",
    "build_box_sets", "build_envelope", "dtw_banded", "finalize", "lb_ad", "lb_mv",
    "lb_pc", "lb_ti", "neighbor_steps", "nn_search", "normalize", "parse_native",
    "parse_ts_subset", "point_distance", "quantize_cluster", "split", "tc_dtw_select",
    "ti_advance", "ti_extend_top", "truncate_dims", "tune_params", "write_native",
]
