"""Sampling and analysis of metastable wells in exponential random graph models.

The package is organized as follows:

- ``graphs``: dense simple-graph state with cached degrees and canonical
  edge indexing.
- ``patterns``: small pattern graphs and their labeled (homomorphism)
  counts, exact per-edge change counts, and fast closed-form deltas.
- ``model``: the ERGM specification (pattern graphs plus coefficients).
- ``landscape``: the scalar variational function whose local maximizers
  locate the metastable well densities, and regime classification.
- ``glauber``: single-edge-update dynamics, coupled chains, and the
  local-density well diagnostic.
- ``observables``: edge/triangle counts, signed differences between
  coupled samples, clustering of the difference graph.
- ``stats``: moments, log-log power-law fits, KS normality statistic.
- ``oracle``: exact enumeration of the Gibbs measure at tiny sizes.
- ``experiments``: reproducible dataset runner and CSV post-processing.
"""

from ergmwell.graphs import GraphState, edge_index, edge_pair, sample_er
from ergmwell.model import ErgmSpec
from ergmwell.patterns import Kind, SmallGraph

__all__ = [
    "GraphState",
    "ErgmSpec",
    "Kind",
    "SmallGraph",
    "edge_index",
    "edge_pair",
    "sample_er",
]

__version__ = "0.1.0"
