"""Guarded Petri nets: colored token games, guard internalization into plain
nets, bounded reachability, and a calculus of net morphisms."""

__version__ = "0.1.0"

from .errors import (
    BoundaryError,
    BundleError,
    EvalError,
    GuardnetError,
    InvalidNetError,
    PreconditionError,
    TokenGameError,
    TooLargeError,
)
from .guards import (
    GuardedNet,
    PartialGuard,
    SpanArrow,
    SpanGuard,
    SpanTable,
    collapse_to_relation,
    embed_partial_as_span,
    eval_partial,
    eval_span,
    validate_guard,
)
from .internalize import (
    ColoredMarking,
    Projection,
    internalize,
    internalize_partial,
    internalize_span,
    project_marking,
    project_sequence,
)
from .nets import (
    Marking,
    Net,
    NetIsomorphism,
    Transition,
    disjoint_union,
    empty_net,
    enabled,
    fire,
    net_isomorphic,
    validate,
)
from .reach import (
    MarkingGraph,
    ReachQuery,
    ReachResult,
    Run,
    RunStep,
    marking_graph,
    reach_colored,
    reach_plain,
)
from .terms import Gen, Id, Par, ProcessTerm, Seq, Sym, par, seq, symmetry_for, typecheck
from .transform import (
    NetFunctor,
    QuotientResult,
    add_generators,
    check_flags,
    check_morphism,
    erase_generators,
    identify,
    identity_functor,
    lift,
    lift_synchronization,
    naturality_check,
    pullback_guard,
    synchronize,
)

__all__ = [name for name in dir() if not name.startswith("_")]
