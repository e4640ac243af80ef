import itertools

import pytest

from guardnet.errors import BoundaryError, BundleError
from guardnet.fixtures import fixture
from guardnet.guards import PartialGuard, eval_partial
from guardnet.nets import Net
from guardnet.terms import (
    Gen,
    Id,
    Par,
    Seq,
    Sym,
    apply_permutation,
    par,
    seq,
    symmetry_for,
    term_from_json,
    term_permutation,
    term_to_json,
    typecheck,
)

A = fixture("A")


def test_typecheck_identity():
    assert typecheck(A.net, Id(("P1",))) == (("P1",), ("P1",))


def test_typecheck_generator_arities():
    assert typecheck(A.net, Gen("t1")) == (("P1",), ("P2",))


def test_typecheck_rejects_bad_composition():
    with pytest.raises(BoundaryError, match=r"target \['P2'\] != source \['P1'\]"):
        typecheck(A.net, Seq(Gen("t1"), Gen("t1")))


def test_typecheck_unknown_generator_has_path():
    with pytest.raises(BoundaryError, match="root.1"):
        typecheck(A.net, Seq(Gen("t1"), Gen("missing")))


def test_seq_unit_law_on_boundaries():
    f = Gen("t1")
    composite = seq(A.net, Id(("P1",)), f)
    assert typecheck(A.net, composite) == typecheck(A.net, f)


def test_par_of_generators():
    composite = par(A.net, Gen("t1"), Gen("t2"))
    assert typecheck(A.net, composite) == (("P1", "P2"), ("P2", "P3"))


def test_par_unit():
    f = Gen("t1")
    assert typecheck(A.net, par(A.net, f, Id(()))) == typecheck(A.net, f)


def test_par_associates_on_boundaries():
    f, g, h = Gen("t1"), Gen("t2"), Id(("P1",))
    left = par(A.net, par(A.net, f, g), h)
    right = par(A.net, f, par(A.net, g, h))
    assert typecheck(A.net, left) == typecheck(A.net, right)


def test_seq_requires_matching_boundary():
    with pytest.raises(BoundaryError):
        seq(A.net, Gen("t1"), Gen("t1"))


def test_symmetry_identity_is_id():
    assert symmetry_for((0, 1), ("P1", "P2")) == Id(("P1", "P2"))


def test_symmetry_swap_is_sym():
    assert symmetry_for((1, 0), ("P1", "P2")) == Sym(("P1",), ("P2",))


def test_symmetry_arity_mismatch():
    with pytest.raises(BoundaryError, match="arity"):
        symmetry_for((0, 2), ("P1", "P2"))


def _distinct_color_guard(n: int) -> tuple[Net, PartialGuard]:
    places = tuple(f"w{i}" for i in range(n))
    net = Net(places, ())
    guard = PartialGuard({p: (f"k{i}",) for i, p in enumerate(places)}, {})
    return net, guard


def test_three_cycle_acts_as_expected():
    # the cycle sending position 0 -> 1 -> 2 -> 0, applied to distinct colors
    net, guard = _distinct_color_guard(3)
    word = ("w0", "w1", "w2")
    perm = (1, 2, 0)
    term = symmetry_for(perm, word)
    out = eval_partial(net, guard, term, ("k0", "k1", "k2"))
    assert out == apply_permutation(perm, ("k0", "k1", "k2")) == ("k2", "k0", "k1")


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_symmetry_matches_direct_permutation(n):
    # checked under both guard flavors, against plain tuple permutation
    from guardnet.guards import SpanGuard, eval_span

    net, guard = _distinct_color_guard(n)
    span_guard = SpanGuard(guard.colors, {})
    word = tuple(f"w{i}" for i in range(n))
    colors = tuple(f"k{i}" for i in range(n))
    for perm in itertools.permutations(range(n)):
        term = symmetry_for(perm, word)
        src, tgt = typecheck(net, term)
        assert src == word
        assert tgt == apply_permutation(perm, word)
        assert term_permutation(term) == list(perm)
        assert eval_partial(net, guard, term, colors) == apply_permutation(perm, colors)
        table = eval_span(net, span_guard, term)
        assert [(e.inputs, e.outputs) for e in table] == [
            (colors, apply_permutation(perm, colors))
        ]


def test_term_permutation_none_for_generators():
    assert term_permutation(Gen("t1")) is None
    assert term_permutation(Par(Id(("P1",)), Gen("t1"))) is None


def test_term_json_round_trip():
    term = Seq(Par(Gen("t1"), Id(("P1",))), Par(Sym(("P2",), ("P1",)), Id(())))
    assert term_from_json(term_to_json(term)) == term


def test_term_json_wire_shapes():
    assert term_to_json(Gen("t1")) == ["gen", "t1"]
    assert term_to_json(Id(("P1",))) == ["id", ["P1"]]
    assert term_to_json(Sym(("P1",), ("P2",))) == ["sym", ["P1"], ["P2"]]


def test_term_json_rejects_garbage():
    for bad in ([], ["nope"], ["gen", 3], ["seq", ["gen", "a"]], "gen"):
        with pytest.raises(BundleError):
            term_from_json(bad)
