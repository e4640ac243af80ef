import dataclasses
import itertools
import random

import pytest

from guardnet.errors import BoundaryError, PreconditionError
from guardnet.fixtures import fixture, sync_functor, sync_result, sync_witness
from guardnet.guards import GuardedNet, PartialGuard, eval_partial
from guardnet.internalize import internalize
from guardnet.nets import Net, net_isomorphic
from guardnet.randgen import (
    random_addition,
    random_erasure,
    random_guarded_net,
    random_identification,
    random_renaming,
)
from guardnet.terms import Gen, Id, Par, Seq, symmetry_for
from guardnet.transform import (
    NetFunctor,
    _is_code,
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
    transition_decomposition,
    validate_functor,
)

A = fixture("A")
D = fixture("D")


def test_identity_is_a_morphism():
    assert check_morphism(identity_functor(A.net), A, A)


def test_sync_functor_is_a_morphism():
    assert check_morphism(sync_functor(), sync_result(), D)


def test_morphism_fails_when_target_guard_breaks_composite():
    altered = GuardedNet(
        D.net,
        PartialGuard(D.guard.colors, {"f": {("x",): ("y1",)}, "g": {("y2",): ("z",)}}),
    )
    # recompute the composite: f sends x to y1 but g is now undefined there
    assert eval_partial(altered.net, altered.guard, Seq(Gen("f"), Gen("g")), ("x",)) is None
    assert not check_morphism(sync_functor(), sync_result(), altered)


def test_morphism_fails_on_color_mismatch():
    shrunk = GuardedNet(
        D.net,
        PartialGuard({**D.guard.colors, "Y": ("y1",)}, {"f": {("x",): ("y1",)}, "g": {("y1",): ("z",)}}),
    )
    assert not check_morphism(sync_functor(), sync_result(), shrunk)


def test_validate_functor_boundary_error():
    bad = NetFunctor(sync_result().net, D.net, {"X": ("X",), "Y": ("Y",), "Z": ("Z",)}, {"fg": Gen("f")})
    with pytest.raises(BoundaryError, match="fg"):
        validate_functor(bad)


def test_lift_identity_is_identity():
    lifted = lift(identity_functor(A.net), A, A)
    compiled, _ = internalize(A)
    assert lifted == identity_functor(compiled)


def test_lift_sync_functor_images():
    lifted = lift(sync_functor(), sync_result(), D)
    assert lifted.morphism_map == {"fg@x": Seq(Gen("f@x"), Gen("g@y1"))}
    assert lifted.object_map["X@x"] == ("X@x",)


def test_lift_requires_a_morphism():
    broken = GuardedNet(D.net, PartialGuard(D.guard.colors, {"f": {}, "g": {}}))
    with pytest.raises(PreconditionError):
        lift(sync_functor(), sync_result(), broken)


def test_naturality_on_fixture_morphisms():
    for name in "ABCD":
        gn = fixture(name)
        assert naturality_check(identity_functor(gn.net), gn, gn)
    assert naturality_check(sync_functor(), sync_result(), D)


def test_naturality_detects_corruption():
    functor = sync_functor()
    lifted = lift(functor, sync_result(), D)
    corrupted = dataclasses.replace(
        lifted, morphism_map={"fg@x": Seq(Gen("f@x"), Gen("g@y2"))}
    )
    assert not naturality_check(functor, sync_result(), D, lifted=corrupted)


def test_check_flags_identity():
    flags = check_flags(identity_functor(A.net))
    assert flags == {
        "transition_preserving": True,
        "place_to_place": True,
        "injective_on_objects": True,
        "faithful_on_generators": True,
    }


def test_check_flags_sync_functor_not_transition_preserving():
    flags = check_flags(sync_functor())
    assert not flags["transition_preserving"]
    assert flags["place_to_place"]


def test_check_flags_place_merger_not_injective():
    two = Net.build(["A", "B"], [])
    one = Net.build(["C"], [])
    merger = NetFunctor(two, one, {"A": ("C",), "B": ("C",)}, {})
    assert not check_flags(merger)["injective_on_objects"]


def test_injectivity_needs_a_code():
    # images {AB, A, B} are pairwise distinct but A.B = AB decodes two ways
    three = Net.build(["x", "y", "z"], [])
    two = Net.build(["A", "B"], [])
    functor = NetFunctor(three, two, {"x": ("A", "B"), "y": ("A",), "z": ("B",)}, {})
    assert not check_flags(functor)["injective_on_objects"]
    prefix_free = NetFunctor(three, two, {"x": ("A", "A"), "y": ("A", "B"), "z": ("B",)}, {})
    assert check_flags(prefix_free)["injective_on_objects"]


def test_is_code_agrees_with_brute_force_concatenation():
    # oracle: a set of words is a code iff all distinct generator strings of
    # length <= 3 concatenate to distinct words
    rng = random.Random(3)
    for _ in range(120):
        words = {
            tuple(rng.choice("ab") for _ in range(rng.randint(1, 3)))
            for _ in range(rng.randint(1, 3))
        }
        seen = {}
        ambiguous = False
        labels = sorted(words)
        for k in range(1, 4):
            for combo in itertools.product(range(len(labels)), repeat=k):
                flat = tuple(x for i in combo for x in labels[i])
                if flat in seen and seen[flat] != combo:
                    ambiguous = True
                seen.setdefault(flat, combo)
        assert _is_code(words) == (not ambiguous)


def test_transition_decomposition_shapes():
    assert transition_decomposition(identity_functor(D.net), "f") == ((0,), "f", (0,))
    assert transition_decomposition(sync_functor(), "fg") is None
    net = Net.build(["A", "B"], [("t", ["A", "B"], ["A"])])
    sigma = symmetry_for((1, 0), ("A", "B"))
    dressed = NetFunctor(
        Net.build(["A", "B"], [("u", ["A", "B"], ["A"])]),
        net,
        {"A": ("B",), "B": ("A",)},
        {"u": Seq(sigma, Gen("t"))},
    )
    decomposition = transition_decomposition(dressed, "u")
    assert decomposition == ((1, 0), "t", (0,))


def test_strip_units_accepts_padded_generators():
    padded = NetFunctor(
        sync_result().net,
        D.net,
        {"X": ("X",), "Y": ("Y",), "Z": ("Z",)},
        {"fg": Seq(Par(Gen("f"), Id(())), Gen("g"))},
    )
    assert check_flags(padded)["transition_preserving"] is False
    single = NetFunctor(D.net, D.net, identity_functor(D.net).object_map, {
        "f": Par(Gen("f"), Id(())),
        "g": Par(Id(()), Gen("g")),
    })
    assert check_flags(single)["transition_preserving"] is True


# -- identification ----------------------------------------------------------


def test_identify_equal_witnesses_changes_nothing():
    o = Net.build(["P"], [])
    left = NetFunctor(o, A.net, {"P": ("P1",)}, {})
    quotient = identify(o, left, left, A)
    assert quotient.net == A.net
    assert quotient.guard == A.guard


def test_identify_merges_places():
    m = GuardedNet(
        Net.build(["A", "B"], []),
        PartialGuard({"A": ("c1", "c2"), "B": ("c1", "c2")}, {}),
    )
    o = Net.build(["P"], [])
    left = NetFunctor(o, m.net, {"P": ("A",)}, {})
    right = NetFunctor(o, m.net, {"P": ("B",)}, {})
    quotient = identify(o, left, right, m)
    assert quotient.net.places == ("A",)
    assert quotient.place_map == {"A": "A", "B": "A"}
    assert quotient.guard.colors == {"A": ("c1", "c2")}


def test_identify_requires_equal_colors():
    m = GuardedNet(
        Net.build(["A", "B"], []),
        PartialGuard({"A": ("c1",), "B": ("c2",)}, {}),
    )
    o = Net.build(["P"], [])
    left = NetFunctor(o, m.net, {"P": ("A",)}, {})
    right = NetFunctor(o, m.net, {"P": ("B",)}, {})
    with pytest.raises(PreconditionError, match="color sets differ"):
        identify(o, left, right, m)


def test_identify_merges_parallel_transitions():
    net = Net.build(["A", "B"], [("u", ["A"], ["B"]), ("v", ["A"], ["B"])])
    guard = PartialGuard(
        {"A": ("c1",), "B": ("c2",)},
        {"u": {("c1",): ("c2",)}, "v": {("c1",): ("c2",)}},
    )
    m = GuardedNet(net, guard)
    o = Net.build(["P", "Q"], [("h", ["P"], ["Q"])])
    shared = {"P": ("A",), "Q": ("B",)}
    left = NetFunctor(o, net, shared, {"h": Gen("u")})
    right = NetFunctor(o, net, shared, {"h": Gen("v")})
    quotient = identify(o, left, right, m)
    assert quotient.net.transition_names == ("u",)
    assert quotient.guard.rows("u") == {("c1",): ("c2",)}
    assert check_morphism(quotient.as_functor(), m, quotient.guarded())


def test_identify_rejects_disagreeing_tables():
    net = Net.build(["A", "B"], [("u", ["A"], ["B"]), ("v", ["A"], ["B"])])
    guard = PartialGuard(
        {"A": ("c1",), "B": ("c2", "c3")},
        {"u": {("c1",): ("c2",)}, "v": {("c1",): ("c3",)}},
    )
    o = Net.build(["P", "Q"], [("h", ["P"], ["Q"])])
    shared = {"P": ("A",), "Q": ("B",)}
    left = NetFunctor(o, net, shared, {"h": Gen("u")})
    right = NetFunctor(o, net, shared, {"h": Gen("v")})
    with pytest.raises(PreconditionError, match="disagree"):
        identify(o, left, right, GuardedNet(net, guard))


def test_identify_rejects_non_transition_preserving_witness():
    o = Net.build(["P", "R"], [("h", ["P"], ["R"])])
    left = NetFunctor(o, D.net, {"P": ("X",), "R": ("Z",)}, {"h": Seq(Gen("f"), Gen("g"))})
    with pytest.raises(PreconditionError, match="transition_preserving"):
        identify(o, left, left, D)


# -- surgery -----------------------------------------------------------------


def test_add_nothing_is_identity():
    w = Net((), ())
    along = NetFunctor(w, D.net, {}, {})
    out = add_generators(D, w, along)
    assert out == D


def test_add_composite_generator():
    w_net, along = sync_witness()
    out = add_generators(D, w_net, along)
    assert out.net.transition_names == ("f", "fg", "g")
    assert out.guard.rows("fg") == {("x",): ("z",)}


def test_add_generator_with_empty_table():
    w = Net.build(["P1", "P3"], [("u", ["P1"], ["P3"])])
    along = NetFunctor(
        w, A.net, {"P1": ("P1",), "P3": ("P3",)}, {"u": Seq(Gen("t1"), Gen("t2"))}
    )
    out = add_generators(A, w, along)
    assert "u" in out.net.transition_names
    assert out.guard.rows("u") == {}


def test_add_rejects_name_collisions():
    w = Net.build(["X"], [("f", ["X"], ["X"])])
    along = NetFunctor(w, D.net, {"X": ("X",)}, {"f": Id(("X",))})
    with pytest.raises(PreconditionError, match="collides"):
        add_generators(D, w, along)


def test_erase_nothing():
    assert erase_generators(D, []) == D


def test_erase_both_generators():
    out = erase_generators(D, ["f", "g"])
    assert len(out.net.places) == 3 and out.net.transitions == ()
    assert all(out.guard.rows(t) == {} for t in ("f", "g"))


def test_erase_unknown_victim():
    with pytest.raises(PreconditionError, match="'zap'"):
        erase_generators(D, ["zap"])


def test_synchronize_fixture():
    w_net, along = sync_witness()
    out = synchronize(D, ["f", "g"], w_net, along)
    assert out.net.places == ("X", "Y", "Z")
    assert out.net.transition_names == ("fg",)
    assert out.guard.rows("fg") == {("x",): ("z",)}
    assert out == sync_result()


def test_synchronize_empty_is_identity():
    w = Net((), ())
    along = NetFunctor(w, D.net, {}, {})
    assert synchronize(D, [], w, along) == D


def test_erase_then_add_back_round_trip():
    w = Net.build(["P2", "P3"], [("t2x", ["P2"], ["P3"])])
    along = NetFunctor(w, A.net, {"P2": ("P2",), "P3": ("P3",)}, {"t2x": Gen("t2")})
    out = synchronize(A, ["t2"], w, along)
    iso = net_isomorphic(out.net, A.net)
    assert iso is not None and iso.transitions["t2x"] == "t2"
    assert out.guard.rows("t2x") == A.guard.rows("t2")


def test_sync_counterexample_discrepancy():
    w_net, along = sync_witness()
    fused, _ = internalize(synchronize(D, ["f", "g"], w_net, along))
    lifted = lift_synchronization(D, ["f", "g"], w_net, along)
    assert len(fused.transitions) == 1
    assert len(lifted.transitions) == 2
    assert set(lifted.transition_names) == {"fg@x", "g@y2"}
    assert net_isomorphic(fused, lifted) is None


def test_pullback_guard_makes_a_morphism():
    w_net, along = sync_witness()
    guard = pullback_guard(along, D)
    assert check_morphism(along, GuardedNet(w_net, guard), D)


def test_lift_preserves_flags_on_fixture_morphisms():
    cases = [(identity_functor(fixture(n).net), fixture(n), fixture(n)) for n in "ABCD"]
    cases.append((sync_functor(), sync_result(), D))
    for functor, src, dst in cases:
        before = check_flags(functor)
        after = check_flags(lift(functor, src, dst))
        for key in ("transition_preserving", "injective_on_objects", "faithful_on_generators"):
            if before[key]:
                assert after[key]


def test_randomized_renamings_are_natural():
    rng = random.Random(21)
    for _ in range(15):
        gn = random_guarded_net(rng)
        functor, dst = random_renaming(rng, gn)
        assert check_morphism(functor, gn, dst)
        assert naturality_check(functor, gn, dst)


def test_randomized_surgery_commutes_with_compiling():
    from guardnet.checks import _add_commutes, _erase_commutes, _identify_commutes

    rng = random.Random(33)
    for i in range(18):
        if i % 3 == 0:
            assert _identify_commutes(*random_identification(rng))
        elif i % 3 == 1:
            assert _add_commutes(*random_addition(rng))
        else:
            assert _erase_commutes(*random_erasure(rng))
