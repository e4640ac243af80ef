import random

import pytest

from guardnet import counts
from guardnet.errors import PreconditionError, TokenGameError
from guardnet.fixtures import fixture
from guardnet.guards import GuardedNet, PartialGuard, embed_partial_as_span
from guardnet.internalize import (
    ColoredMarking,
    internalize,
    internalize_partial,
    internalize_span,
    project_marking,
    project_sequence,
)
from guardnet.nets import Marking, Net, disjoint_union, empty_net, enabled, net_isomorphic
from guardnet.guards import disjoint_union_guarded
from guardnet.randgen import random_colored_marking, random_guarded_net
from guardnet.reach import colored_steps, marking_graph


def test_compiled_sizes_on_fixtures():
    expected = {"A": (7, 3), "B": (7, 5), "C": (4, 4), "D": (4, 3)}
    for name, (places, transitions) in expected.items():
        net, _ = internalize(fixture(name))
        assert (len(net.places), len(net.transitions)) == (places, transitions)


def test_compiled_identifiers():
    net, _ = internalize(fixture("D"))
    assert net.transition_names == ("f@x", "g@y1", "g@y2")
    assert net.places == ("X@x", "Y@y1", "Y@y2", "Z@z")


def test_place_without_colors_contributes_nothing():
    base = Net.build(["P", "Q"], [("t", ["P"], ["Q"])])
    guard = PartialGuard({"P": ("c",), "Q": ()}, {"t": {}})
    net, _ = internalize_partial(base, guard)
    assert net.places == ("P@c",)
    assert net.transitions == ()


def test_span_guard_with_no_witnesses():
    c = fixture("C")
    bare = type(c.guard)(c.guard.colors, {})
    net, _ = internalize_span(c.net, bare)
    assert len(net.places) == 4 and len(net.transitions) == 0


def test_projection_is_net_morphism():
    # projected pre/post multisets must equal the base transition's
    for name in "ABCD":
        gn = fixture(name)
        net, proj = internalize(gn)
        for t in net.transitions:
            base, _ = proj.transition_map[t.name]
            base_t = gn.net.transition(base)
            assert counts.freeze(
                {proj.place_map[p]: n for p, n in _merge(t.pre)}
            ) == base_t.pre
            assert counts.freeze(
                {proj.place_map[p]: n for p, n in _merge(t.post)}
            ) == base_t.post


def _merge(cnts):
    merged = {}
    for p, n in cnts:
        merged[p] = merged.get(p, 0) + n
    return merged.items()


def test_project_marking():
    _, proj = internalize(fixture("A"))
    cm = ColoredMarking.of(("P1", "red"))
    assert project_marking(proj, cm) == Marking.of("P1")
    assert project_marking(proj, ColoredMarking.of()) == Marking.of()


def test_project_marking_rejects_unknown():
    _, proj = internalize(fixture("A"))
    with pytest.raises(TokenGameError):
        project_marking(proj, ColoredMarking.of(("P1", "magenta")))


def test_project_sequence():
    _, proj = internalize(fixture("D"))
    assert project_sequence(proj, ["f@x", "g@y1"]) == ("f", "g")
    with pytest.raises(TokenGameError):
        project_sequence(proj, ["f@q"])


def test_cross_check_span_embedding_on_fixtures():
    for name in ("A", "D"):
        gn = fixture(name)
        direct, _ = internalize_partial(gn.net, gn.guard)
        via_span, _ = internalize_span(gn.net, embed_partial_as_span(gn.guard))
        assert net_isomorphic(direct, via_span) is not None


def test_compiling_commutes_with_sums():
    a, d = fixture("A"), fixture("D")
    joined, _ = internalize(disjoint_union_guarded(a, d))
    ca, _ = internalize(a)
    cd, _ = internalize(d)
    assert net_isomorphic(joined, disjoint_union(ca, cd)) is not None


def test_empty_net_compiles_to_empty():
    net, proj = internalize(GuardedNet(empty_net(), PartialGuard({}, {})))
    assert net == empty_net()
    assert not proj.place_map and not proj.transition_map


def test_identifier_collision_is_detected():
    # "P" with color "c@x" and "P@c" with color "x" would both compile to "P@c@x"
    base = Net.build(["P", "P@c"], [])
    guard = PartialGuard({"P": ("c@x",), "P@c": ("x",)}, {})
    with pytest.raises(PreconditionError, match="collide"):
        internalize_partial(base, guard)


def test_firing_correspondence_on_fixtures_and_randoms():
    # a colored step exists at cm iff its compiled transition is enabled at
    # the marking reading of cm
    cases = [(fixture(n), _init(n)) for n in "ABCD"]
    rng = random.Random(11)
    while len(cases) < 24:
        gn = random_guarded_net(rng)
        cases.append((gn, random_colored_marking(rng, gn)))
    for gn, init in cases:
        compiled, _ = internalize(gn)
        graph = marking_graph(gn.net, init, guard=gn.guard, depth_bound=5, state_cap=2000)
        if graph.truncated:
            continue
        for cm in graph.nodes:
            steps = {step.compiled_name() for step, _ in colored_steps(gn.net, gn.guard, cm)}
            assert steps == set(enabled(compiled, cm.as_marking()))


def _init(name: str) -> ColoredMarking:
    from guardnet.fixtures import fixture_markings

    markings = fixture_markings(name)
    return markings["red"] if name in "AB" else markings["start"]
