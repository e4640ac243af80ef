"""Acceptance suite: one test per shipped criterion, one printed line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import time

from guardnet.checks import check_lifting, check_monoidality, check_reachability
from guardnet.fixtures import fixture, fixture_markings, sync_witness
from guardnet.guards import collapse_to_relation, eval_span, partial_table
from guardnet.internalize import ColoredMarking, internalize
from guardnet.nets import net_isomorphic
from guardnet.reach import ReachQuery, marking_graph, reach_colored
from guardnet.terms import Gen, Seq
from guardnet.transform import lift_synchronization, synchronize


def _report(number: int, label: str, passed: bool) -> None:
    print(f"criterion {number} ({label}): {'PASS' if passed else 'FAIL'}")
    assert passed, f"criterion {number} ({label}) failed"


def test_criterion_1_compiled_sizes():
    started = time.perf_counter()
    expected = {"A": (7, 3), "B": (7, 5), "C": (4, 4), "D": (4, 3)}
    ok = True
    for name, sizes in expected.items():
        net, _ = internalize(fixture(name))
        ok = ok and (len(net.places), len(net.transitions)) == sizes
    elapsed = time.perf_counter() - started
    _report(1, "compiled net sizes", ok and elapsed < 1.0)


def test_criterion_2_reachability_equivalence():
    started = time.perf_counter()
    results = check_reachability(samples=200)
    elapsed = time.perf_counter() - started
    _report(2, "reachability equivalence", all(r.passed for r in results) and elapsed < 60.0)


def test_criterion_3_pipeline_behavior():
    a, b = fixture("A"), fixture("B")
    marks = fixture_markings("A")
    blocked = reach_colored(a.net, a.guard, ReachQuery(marks["red"], marks["purple"], 16))
    found = reach_colored(a.net, a.guard, ReachQuery(marks["red"], marks["green"], 16))
    composite = Seq(Gen("t1"), Gen("t2"))
    ok = (
        blocked.status == "not_reachable"
        and blocked.exit_code == 1
        and found.status == "reachable"
        and partial_table(a.net, a.guard, composite) == {}
        and len(eval_span(b.net, b.guard, composite)) == 0
    )
    _report(3, "pipeline figure behavior", ok)


def test_criterion_4_freeness_counterexample():
    c = fixture("C")
    table = eval_span(c.net, c.guard, Seq(Gen("f"), Gen("g")))
    pair = (("x",), ("z",))
    start = ColoredMarking.of(("X", "x"))
    goal = ColoredMarking.of(("Z", "z"))
    graph = marking_graph(c.net, start, guard=c.guard, depth_bound=4)
    outgoing = {}
    for i, label, j in graph.edges:
        outgoing.setdefault(i, []).append((label, j))
    start_idx = graph.nodes.index(start)
    goal_idx = graph.nodes.index(goal)
    runs = [
        (first, second)
        for first, mid in outgoing.get(start_idx, ())
        for second, end in outgoing.get(mid, ())
        if end == goal_idx
    ]
    ok = (
        len(table) == 2
        and all((e.inputs, e.outputs) == pair for e in table)
        and collapse_to_relation(table) == frozenset([pair])
        and len(runs) == 2
        and len({(a.witness, b.witness) for a, b in runs}) == 2
    )
    _report(4, "freeness counterexample", ok)


def test_criterion_5_synchronization_counterexample():
    d = fixture("D")
    w_net, along = sync_witness()
    fused, _ = internalize(synchronize(d, ["f", "g"], w_net, along))
    lifted = lift_synchronization(d, ["f", "g"], w_net, along)
    ok = (
        len(fused.transitions) == 1
        and len(lifted.transitions) == 2
        and net_isomorphic(fused, lifted) is None
    )
    _report(5, "synchronization counterexample", ok)


def test_criterion_6_lifting_suite():
    results = check_lifting(samples=50)
    _report(6, "lifting and surgery suite", all(r.passed for r in results))


def test_criterion_7_monoidality():
    results = [r for r in check_monoidality(samples=0) if "cross" not in r.name]
    _report(7, "sums and empty net", all(r.passed for r in results))


def test_criterion_8_cross_semantics():
    results = [r for r in check_monoidality(samples=50) if "cross" in r.name]
    _report(8, "span embedding cross-check", all(r.passed for r in results))
