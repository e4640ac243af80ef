"""Executable property suites behind the ``check`` command.

Each suite returns one result per property so the CLI and the service can
print a pass/fail line per line.  The randomized suites are seeded and
deterministic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

from .fixtures import (
    FIXTURE_NAMES,
    fixture,
    fixture_markings,
    sync_functor,
    sync_result,
    sync_witness,
)
from .guards import (
    GuardedNet,
    PartialGuard,
    collapse_to_relation,
    disjoint_union_guarded,
    embed_partial_as_span,
    eval_span,
    partial_table,
)
from .internalize import ColoredMarking, internalize
from .nets import disjoint_union, empty_net, net_isomorphic, replay
from .randgen import (
    random_addition,
    random_colored_marking,
    random_erasure,
    random_guarded_net,
    random_identification,
    random_renaming,
)
from .reach import ReachQuery, marking_graph, reach_colored, reach_plain
from .terms import Gen, Seq
from .transform import (
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

DEFAULT_REACH_SAMPLES = 200
DEFAULT_LIFT_SAMPLES = 50
DEFAULT_CROSS_SAMPLES = 50
DEFAULT_SEED = 2024


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _count_paths(graph, src, dst, length: int) -> int:
    outgoing = {}
    for i, label, j in graph.edges:
        outgoing.setdefault(i, []).append((label, j))

    def walk(node, remaining):
        if remaining == 0:
            return 1 if node == dst else 0
        return sum(walk(j, remaining - 1) for _, j in outgoing.get(node, ()))

    return walk(src, length)


def check_counterexamples() -> list[CheckResult]:
    """The two machine-checked counterexamples."""
    out = []

    c = fixture("C")
    table = eval_span(c.net, c.guard, Seq(Gen("f"), Gen("g")))
    pair = (("x",), ("z",))
    out.append(
        CheckResult(
            "span-composite-keeps-paths",
            len(table) == 2 and all((e.inputs, e.outputs) == pair for e in table),
            f"{len(table)} witnesses over {pair}",
        )
    )
    out.append(
        CheckResult(
            "relational-collapse-conflates",
            collapse_to_relation(table) == frozenset([pair]),
            "collapsed to one pair",
        )
    )
    ci, _ = internalize(c)
    graph = marking_graph(c.net, ColoredMarking.of(("X", "x")), guard=c.guard, depth_bound=4)
    start = graph.nodes.index(ColoredMarking.of(("X", "x")))
    goal = ColoredMarking.of(("Z", "z"))
    runs = _count_paths(graph, start, graph.nodes.index(goal), 2) if goal in graph.nodes else 0
    out.append(
        CheckResult(
            "compiled-net-has-two-runs",
            len(ci.transitions) == 4 and runs == 2,
            f"{runs} distinct length-2 runs",
        )
    )

    a, b = fixture("A"), fixture("B")
    composite = Seq(Gen("t1"), Gen("t2"))
    out.append(
        CheckResult(
            "deterministic-composite-empty",
            partial_table(a.net, a.guard, composite) == {},
            "t1;t2 has empty table",
        )
    )
    out.append(
        CheckResult(
            "span-composite-empty",
            len(eval_span(b.net, b.guard, composite)) == 0,
            "t1;t2 has empty span",
        )
    )

    d = fixture("D")
    w_net, along = sync_witness()
    fused, _ = internalize(synchronize(d, ["f", "g"], w_net, along))
    lifted = lift_synchronization(d, ["f", "g"], w_net, along)
    out.append(
        CheckResult(
            "synchronize-then-compile",
            len(fused.transitions) == 1,
            f"{len(fused.transitions)} transition(s)",
        )
    )
    out.append(
        CheckResult(
            "lifted-pipeline-keeps-branch",
            len(lifted.transitions) == 2,
            f"{len(lifted.transitions)} transition(s)",
        )
    )
    out.append(
        CheckResult(
            "synchronization-not-preserved",
            net_isomorphic(fused, lifted) is None,
            "results are not isomorphic",
        )
    )
    return out


def _fixture_inits() -> list[tuple[str, GuardedNet, ColoredMarking]]:
    out = []
    for name in FIXTURE_NAMES:
        gn = fixture(name)
        markings = fixture_markings(name)
        init = markings["red"] if name in ("A", "B") else markings["start"]
        out.append((name, gn, init))
    return out


def _reach_agreement(gn: GuardedNet, init: ColoredMarking, depth: int = 8, cap: int = 30000):
    """Bounded-equivalence of the colored game and the compiled token game.

    Returns None when the state cap truncated the graph (caller resamples),
    else an error string or "" on agreement.
    """
    colored = marking_graph(gn.net, init, guard=gn.guard, depth_bound=depth, state_cap=cap)
    if colored.truncated:
        return None
    compiled, projection = internalize(gn)
    plain = marking_graph(compiled, init.as_marking(), depth_bound=depth, state_cap=cap)
    if plain.truncated:
        return None
    colored_set = {cm.as_marking() for cm in colored.nodes}
    if colored_set != plain.node_set():
        return "reachable marking sets differ"

    probes = sorted(colored.nodes)[:3]
    for probe in probes:
        cq = ReachQuery(init, probe, depth, cap)
        pq = ReachQuery(init.as_marking(), probe.as_marking(), depth, cap)
        left = reach_colored(gn.net, gn.guard, cq)
        right = reach_plain(compiled, pq)
        if left.status != right.status:
            return f"status mismatch on {probe}"
        if left.status == "reachable" and left.run is not None and left.run.steps:
            seq = left.run.compiled_sequence()
            if replay(compiled, init.as_marking(), seq) != probe.as_marking():
                return "colored run does not replay on the compiled net"
            base_seq = tuple(projection.base_transition(s)[0] for s in seq)
            if replay(gn.net, init.forget_colors(), base_seq) != probe.forget_colors():
                return "projected run does not replay on the base net"
    # a marking outside the bounded space must be rejected on both sides
    foreign = init + ColoredMarking.of(*(init.tokens() or ()))
    if foreign not in colored.nodes and foreign.tokens():
        cq = ReachQuery(init, foreign, depth, cap)
        pq = ReachQuery(init.as_marking(), foreign.as_marking(), depth, cap)
        if reach_colored(gn.net, gn.guard, cq).status != reach_plain(compiled, pq).status:
            return "status mismatch on a foreign marking"
    return ""


def check_reachability(samples: int = DEFAULT_REACH_SAMPLES, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Colored reachability agrees with plain reachability after compiling."""
    out = []
    for name, gn, init in _fixture_inits():
        verdict = _reach_agreement(gn, init)
        out.append(
            CheckResult(f"fixture-{name}-agreement", verdict == "", verdict or "agrees")
        )

    a = fixture("A")
    marks = fixture_markings("A")
    blocked = reach_colored(a.net, a.guard, ReachQuery(marks["red"], marks["purple"], 10))
    passed = reach_colored(a.net, a.guard, ReachQuery(marks["red"], marks["green"], 10))
    out.append(
        CheckResult(
            "pipeline-blocked-color",
            blocked.status == "not_reachable" and passed.status == "reachable",
            "red reaches green but never purple",
        )
    )

    rng = random.Random(seed)
    failures = []
    checked = 0
    while checked < samples:
        gn = random_guarded_net(rng)
        init = random_colored_marking(rng, gn)
        verdict = _reach_agreement(gn, init)
        if verdict is None:
            continue
        checked += 1
        if verdict:
            failures.append(verdict)
    out.append(
        CheckResult(
            "randomized-agreement",
            not failures,
            failures[0] if failures else f"{checked} randomized nets agree",
        )
    )
    return out


def _fixture_morphisms():
    morphs = [(f"identity-{name}", identity_functor(fixture(name).net), fixture(name), fixture(name)) for name in FIXTURE_NAMES]
    morphs.append(("fuse-into-composite", sync_functor(), sync_result(), fixture("D")))
    return morphs


def _identify_commutes(witness, left, right, merged: GuardedNet) -> bool:
    quotient = identify(witness, left, right, merged)
    direct, _ = internalize(quotient.guarded())
    witness_guarded = GuardedNet(witness, pullback_guard(left, merged))
    lifted_left = lift(left, witness_guarded, merged)
    lifted_right = lift(right, witness_guarded, merged)
    compiled, _ = internalize(merged)
    compiled_witness, _ = internalize(witness_guarded)
    lifted_quotient = identify(
        compiled_witness, lifted_left, lifted_right, GuardedNet(compiled, None)
    )
    return net_isomorphic(direct, lifted_quotient.net) is not None


def _erase_commutes(guarded: GuardedNet, victims) -> bool:
    direct, _ = internalize(erase_generators(guarded, victims))
    compiled, projection = internalize(guarded)
    lifted_victims = [
        t for t in compiled.transition_names if projection.transition_map[t][0] in victims
    ]
    lifted = erase_generators(GuardedNet(compiled, None), lifted_victims).net
    return net_isomorphic(direct, lifted) is not None


def _add_commutes(guarded: GuardedNet, w_net, along) -> bool:
    direct, _ = internalize(add_generators(guarded, w_net, along))
    witness_guarded = GuardedNet(w_net, pullback_guard(along, guarded))
    lifted_along = lift(along, witness_guarded, guarded)
    compiled, _ = internalize(guarded)
    compiled_witness, _ = internalize(witness_guarded)
    lifted = add_generators(GuardedNet(compiled, None), compiled_witness, lifted_along).net
    return net_isomorphic(direct, lifted) is not None


def check_lifting(samples: int = DEFAULT_LIFT_SAMPLES, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Naturality, flag preservation, and surgery commuting with compilation."""
    out = []
    natural = all(naturality_check(f, src, dst) for _, f, src, dst in _fixture_morphisms())
    out.append(CheckResult("naturality-on-fixtures", natural, "projection squares commute"))

    flag_keys = ("transition_preserving", "injective_on_objects", "faithful_on_generators")
    preserved = True
    for _, functor, src, dst in _fixture_morphisms():
        before = check_flags(functor)
        after = check_flags(lift(functor, src, dst))
        preserved = preserved and all(after[k] for k in flag_keys if before[k])
    out.append(CheckResult("lift-preserves-flags", preserved, "verified flags survive lifting"))

    rng = random.Random(seed)
    renaming_ok = True
    for _ in range(10):
        gn = random_guarded_net(rng)
        functor, dst = random_renaming(rng, gn)
        renaming_ok = renaming_ok and check_morphism(functor, gn, dst)
        renaming_ok = renaming_ok and naturality_check(functor, gn, dst)
        before, after = check_flags(functor), check_flags(lift(functor, gn, dst))
        renaming_ok = renaming_ok and all(after[k] for k in flag_keys if before[k])
    out.append(CheckResult("randomized-renamings", renaming_ok, "10 renamings lift naturally"))

    fixture_commutes = (
        _erase_commutes(fixture("D"), ("f", "g"))
        and _erase_commutes(fixture("B"), ("t2",))
        and _add_commutes(fixture("D"), *sync_witness())
    )
    out.append(
        CheckResult("surgery-commutes-on-fixtures", fixture_commutes, "erase/add on fixtures")
    )

    failures = 0
    checked = 0
    for i in range(samples):
        kind = i % 3
        if kind == 0:
            ok = _identify_commutes(*random_identification(rng))
        elif kind == 1:
            ok = _add_commutes(*random_addition(rng))
        else:
            ok = _erase_commutes(*random_erasure(rng))
        checked += 1
        failures += 0 if ok else 1
    out.append(
        CheckResult(
            "randomized-surgery-commutes",
            failures == 0,
            f"{checked} randomized instances, {failures} failures",
        )
    )
    return out


def _as_span(gn: GuardedNet) -> GuardedNet:
    if isinstance(gn.guard, PartialGuard):
        return GuardedNet(gn.net, embed_partial_as_span(gn.guard))
    return gn


def check_monoidality(samples: int = DEFAULT_CROSS_SAMPLES, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Sums and the empty net commute with compiling; flavors cross-check."""
    out = []
    pair_ok = True
    for left_name in FIXTURE_NAMES:
        for right_name in FIXTURE_NAMES:
            left, right = fixture(left_name), fixture(right_name)
            if left.kind != right.kind:
                left, right = _as_span(left), _as_span(right)
            joined = disjoint_union_guarded(left, right)
            compiled_joined, _ = internalize(joined)
            compiled_left, _ = internalize(left)
            compiled_right, _ = internalize(right)
            summed = disjoint_union(compiled_left, compiled_right)
            pair_ok = pair_ok and net_isomorphic(compiled_joined, summed) is not None
    out.append(CheckResult("sum-commutes-with-compiling", pair_ok, "all 16 fixture pairs"))

    empty_partial, _ = internalize(GuardedNet(empty_net(), PartialGuard({}, {})))
    out.append(
        CheckResult(
            "empty-net-compiles-to-empty",
            empty_partial == empty_net(),
            "no places, no transitions",
        )
    )

    rng = random.Random(seed)
    cross_ok = True
    cases = [fixture("A"), fixture("D"), sync_result()]
    cases += [random_guarded_net(rng, kind="partial") for _ in range(samples)]
    for gn in cases:
        as_span, _ = internalize(GuardedNet(gn.net, embed_partial_as_span(gn.guard)))
        as_partial, _ = internalize(gn)
        cross_ok = cross_ok and net_isomorphic(as_span, as_partial) is not None
    out.append(
        CheckResult(
            "span-embedding-cross-check",
            cross_ok,
            f"{len(cases)} nets compile identically in either flavor",
        )
    )
    return out


SUITES: dict[str, Callable[..., list[CheckResult]]] = {
    "counterexamples": check_counterexamples,
    "reachability": check_reachability,
    "lifting": check_lifting,
    "monoidality": check_monoidality,
}


def run_suite(name: str, samples: Optional[int] = None, seed: Optional[int] = None) -> list[CheckResult]:
    if name == "all":
        results = []
        for suite in SUITES:
            results.extend(run_suite(suite, samples, seed))
        return results
    if name not in SUITES:
        raise KeyError(name)
    fn = SUITES[name]
    kwargs = {}
    if name != "counterexamples":
        if samples is not None:
            kwargs["samples"] = samples
        if seed is not None:
            kwargs["seed"] = seed
    return [
        CheckResult(f"{name}:{r.name}", r.passed, r.detail) for r in fn(**kwargs)
    ]
