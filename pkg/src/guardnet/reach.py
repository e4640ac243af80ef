"""Bounded reachability on plain and guarded nets, plus the marking graph.

Search is breadth-first over markings with deduplication, so an answer of
"not reachable" is exhaustive up to the depth bound.  Exceeding the state
cap is reported as a third outcome, inconclusive, never as a guess.  Ties
between witnesses are broken toward the lexicographically least run, and
identical queries always return identical answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from . import counts
from .errors import PreconditionError, TokenGameError
from .guards import ColorTuple, Guard, PartialGuard, colors_of
from .internalize import ColoredMarking, partial_transition_token, span_transition_token
from .nets import Marking, Net

DEFAULT_DEPTH_BOUND = 64
DEFAULT_STATE_CAP = 100_000

REACHABLE = "reachable"
NOT_REACHABLE = "not_reachable"
INCONCLUSIVE = "inconclusive"

AnyMarking = Union[Marking, ColoredMarking]


@dataclass(frozen=True)
class ReachQuery:
    source: AnyMarking
    target: AnyMarking
    depth_bound: int = DEFAULT_DEPTH_BOUND
    state_cap: int = DEFAULT_STATE_CAP

    def __post_init__(self):
        if self.depth_bound <= 0 or self.state_cap <= 0:
            raise PreconditionError("reachability bounds must be positive")
        if type(self.source) is not type(self.target):
            raise PreconditionError("source and target markings must be the same kind")


@dataclass(frozen=True, order=True)
class RunStep:
    """One colored firing: a transition, the consumed/produced color tuples,
    and the chosen witness (span guards only)."""

    transition: str
    inputs: ColorTuple
    outputs: ColorTuple
    witness: Optional[str] = None

    def compiled_name(self) -> str:
        if self.witness is None:
            return partial_transition_token(self.transition, self.inputs)
        return span_transition_token(self.transition, self.witness)


@dataclass(frozen=True)
class Run:
    start: ColoredMarking
    steps: Tuple[RunStep, ...]
    markings: Tuple[ColoredMarking, ...]

    def compiled_sequence(self) -> Tuple[str, ...]:
        return tuple(step.compiled_name() for step in self.steps)


@dataclass(frozen=True)
class ReachResult:
    status: str
    sequence: Optional[Tuple[str, ...]] = None
    run: Optional[Run] = None
    explored: int = 0

    @property
    def exit_code(self) -> int:
        return {REACHABLE: 0, NOT_REACHABLE: 1, INCONCLUSIVE: 2}[self.status]


@dataclass(frozen=True)
class MarkingGraph:
    """All states reachable within the bounds, with every labeled edge.

    Nodes are listed in discovery order; ``truncated`` is set when the state
    cap cut the exploration short.
    """

    nodes: tuple
    edges: Tuple[tuple, ...]
    truncated: bool

    def node_set(self) -> frozenset:
        return frozenset(self.nodes)


def _check_plain(net: Net, m: Marking) -> None:
    for place, _ in m.counts:
        if not net.has_place(place):
            raise TokenGameError(f"marking mentions unknown place {place!r}")


def _check_colored(net: Net, guard: Guard, cm: ColoredMarking) -> None:
    for (place, color), _ in cm.counts:
        if not net.has_place(place):
            raise TokenGameError(f"marking mentions unknown place {place!r}")
        if color not in colors_of(guard, place):
            raise TokenGameError(
                f"marking mentions color {color!r} outside the colors of place {place!r}"
            )


def colored_steps(net: Net, guard: Guard, cm: ColoredMarking):
    """Enabled colored firings at ``cm``, in sorted deterministic order.

    A step picks a transition, a color-matching token selection, and (span
    case) a witness; same-colored tokens are interchangeable, so the
    canonical selection is just the consumed multiset.
    """
    out = []
    for t in net.transitions:
        pre_word = counts.expand(t.pre)
        post_word = counts.expand(t.post)
        if isinstance(guard, PartialGuard):
            rows = [(tin, tout, None) for tin, tout in guard.rows(t.name).items()]
        else:
            rows = [(r.inputs, r.outputs, r.witness) for r in guard.rows(t.name)]
        for tin, tout, witness in rows:
            need = counts.from_items(tuple(zip(pre_word, tin)))
            if not counts.leq(need, cm.counts):
                continue
            produced = counts.from_items(tuple(zip(post_word, tout)))
            nxt = ColoredMarking(counts.add(counts.subtract(cm.counts, need), produced))
            out.append((RunStep(t.name, tin, tout, witness), nxt))
    out.sort(key=lambda pair: pair[0])
    return out


def reach_plain(net: Net, query: ReachQuery) -> ReachResult:
    """Shortest firing sequence within the bounds, or a definite/inconclusive no."""
    source, target = query.source, query.target
    if not isinstance(source, Marking):
        raise PreconditionError("reach_plain expects plain markings")
    _check_plain(net, source)
    _check_plain(net, target)
    if source == target:
        return ReachResult(REACHABLE, sequence=(), explored=1)

    parent: dict = {source: None}
    frontier = [source]
    depth = 0
    while frontier and depth < query.depth_bound:
        depth += 1
        nxt = []
        for m in frontier:
            for t in net.transitions:
                if not counts.leq(t.pre, m.counts):
                    continue
                m2 = Marking(counts.add(counts.subtract(m.counts, t.pre), t.post))
                if m2 in parent:
                    continue
                parent[m2] = (m, t.name)
                if m2 == target:
                    return ReachResult(
                        REACHABLE, sequence=_walk_back(parent, m2), explored=len(parent)
                    )
                if len(parent) > query.state_cap:
                    return ReachResult(INCONCLUSIVE, explored=len(parent))
                nxt.append(m2)
        frontier = nxt
    return ReachResult(NOT_REACHABLE, explored=len(parent))


def _walk_back(parent, end) -> tuple:
    steps = []
    node = end
    while parent[node] is not None:
        prev, label = parent[node]
        steps.append(label)
        node = prev
    return tuple(reversed(steps))


def reach_colored(net: Net, guard: Guard, query: ReachQuery) -> ReachResult:
    """The colored token game analogue of ``reach_plain``."""
    source, target = query.source, query.target
    if not isinstance(source, ColoredMarking):
        raise PreconditionError("reach_colored expects colored markings")
    _check_colored(net, guard, source)
    _check_colored(net, guard, target)
    if source == target:
        return ReachResult(REACHABLE, run=Run(source, (), ()), explored=1)

    parent: dict = {source: None}
    frontier = [source]
    depth = 0
    while frontier and depth < query.depth_bound:
        depth += 1
        nxt = []
        for cm in frontier:
            for step, cm2 in colored_steps(net, guard, cm):
                if cm2 in parent:
                    continue
                parent[cm2] = (cm, step)
                if cm2 == target:
                    return ReachResult(
                        REACHABLE, run=_run_back(parent, source, cm2), explored=len(parent)
                    )
                if len(parent) > query.state_cap:
                    return ReachResult(INCONCLUSIVE, explored=len(parent))
                nxt.append(cm2)
        frontier = nxt
    return ReachResult(NOT_REACHABLE, explored=len(parent))


def _run_back(parent, start, end) -> Run:
    steps = []
    markings = []
    node = end
    while parent[node] is not None:
        prev, step = parent[node]
        steps.append(step)
        markings.append(node)
        node = prev
    return Run(start, tuple(reversed(steps)), tuple(reversed(markings)))


def marking_graph(
    net: Net,
    init: AnyMarking,
    guard: Optional[Guard] = None,
    depth_bound: int = DEFAULT_DEPTH_BOUND,
    state_cap: int = DEFAULT_STATE_CAP,
) -> MarkingGraph:
    """Exhaustively enumerate the bounded state space (the search oracle)."""
    if depth_bound <= 0 or state_cap <= 0:
        raise PreconditionError("marking graph bounds must be positive")
    colored = isinstance(init, ColoredMarking)
    if colored and guard is None:
        raise PreconditionError("a colored marking graph needs a guard")
    if colored:
        _check_colored(net, guard, init)
    else:
        _check_plain(net, init)

    index = {init: 0}
    nodes = [init]
    edges = []
    frontier = [init]
    truncated = False
    depth = 0
    while frontier and depth < depth_bound and not truncated:
        depth += 1
        nxt = []
        for m in frontier:
            if colored:
                successors = [(step, m2) for step, m2 in colored_steps(net, guard, m)]
            else:
                successors = []
                for t in net.transitions:
                    if counts.leq(t.pre, m.counts):
                        m2 = Marking(counts.add(counts.subtract(m.counts, t.pre), t.post))
                        successors.append((t.name, m2))
            for label, m2 in successors:
                if m2 not in index:
                    if len(nodes) >= state_cap:
                        truncated = True
                        continue
                    index[m2] = len(nodes)
                    nodes.append(m2)
                    nxt.append(m2)
                edges.append((index[m], label, index[m2]))
        frontier = nxt
    return MarkingGraph(tuple(nodes), tuple(edges), truncated)
