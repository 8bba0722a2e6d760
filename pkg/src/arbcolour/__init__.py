"""Implicit proper colourings of dynamic bounded-arboricity graphs."""
from .cover_free import CfParams, select_params
from .dispatcher import Dispatcher, PartitionFamily
from .engines import (
    DeterministicColouring,
    RandBetterColouring,
    RandSimpleColouring,
    make_engine,
)
from .estimator import ImplicitColouring
from .graph import DynGraph, DuplicateEdge, GraphError, MissingEdge, SelfLoop, VertexOutOfRange
from .harness import RunConfig, Session, run_stream
from .labels import ColourLabel
from .oracle import ValidationReport, materialise_and_check
from .orientation import AcyclicProvider, FlipProvider, Orientation, rebuild_acyclic

__version__ = "0.1.0"

__all__ = [
    "AcyclicProvider",
    "CfParams",
    "ColourLabel",
    "DeterministicColouring",
    "Dispatcher",
    "DuplicateEdge",
    "DynGraph",
    "FlipProvider",
    "GraphError",
    "ImplicitColouring",
    "MissingEdge",
    "Orientation",
    "PartitionFamily",
    "RandBetterColouring",
    "RandSimpleColouring",
    "RunConfig",
    "SelfLoop",
    "Session",
    "ValidationReport",
    "VertexOutOfRange",
    "make_engine",
    "materialise_and_check",
    "rebuild_acyclic",
    "run_stream",
    "select_params",
]
