"""Morphisms of guarded nets and the composition calculus.

A net functor is presented by generator data: where places go (words) and
where transitions go (terms over the target).  On top of that this module
builds guard-compatibility checking, lifting to compiled nets, quotients by
a pair of witnesses (identification), and generator surgery (addition,
erasing, and their composite, synchronization).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from . import counts
from .errors import BoundaryError, PreconditionError
from .guards import (
    GuardedNet,
    Guard,
    PartialGuard,
    SpanArrow,
    SpanGuard,
    colors_of,
    eval_span,
    partial_table,
    relation_pairs,
)
from .internalize import (
    colorize_partial,
    colorize_span,
    internalize,
    place_token,
    project_term,
)
from .nets import Net, Transition
from .terms import (
    Gen,
    Id,
    Par,
    ProcessTerm,
    Seq,
    Word,
    count_generators,
    generators_of,
    symmetry_for,
    term_permutation,
    typecheck,
)


@dataclass(frozen=True)
class NetFunctor:
    """Generator-level presentation of a strict monoidal functor.

    ``object_map`` sends each source place to a word of target places;
    ``morphism_map`` sends each source transition to a term over the target.
    Properties like transition preservation are computed by ``check_flags``,
    never trusted from the caller.
    """

    source: Net
    target: Net
    object_map: Mapping[str, Word]
    morphism_map: Mapping[str, ProcessTerm]

    def __post_init__(self):
        object.__setattr__(
            self, "object_map", {p: tuple(w) for p, w in sorted(self.object_map.items())}
        )
        object.__setattr__(self, "morphism_map", dict(sorted(self.morphism_map.items())))

    def map_word(self, word: Iterable[str]) -> Word:
        out: tuple = ()
        for p in word:
            out = out + self.object_map[p]
        return out


def identity_functor(net: Net) -> NetFunctor:
    return NetFunctor(
        net,
        net,
        {p: (p,) for p in net.places},
        {t.name: Gen(t.name) for t in net.transitions},
    )


def validate_functor(functor: NetFunctor) -> None:
    """Boundary validation; raises BoundaryError on the first failure."""
    src, dst = functor.source, functor.target
    for p in src.places:
        if p not in functor.object_map:
            raise BoundaryError(f"object map missing place {p!r}")
        for q in functor.object_map[p]:
            if not dst.has_place(q):
                raise BoundaryError(f"object map sends {p!r} to unknown place {q!r}")
    for t in src.transitions:
        if t.name not in functor.morphism_map:
            raise BoundaryError(f"morphism map missing transition {t.name!r}")
        expected_src = functor.map_word(counts.expand(t.pre))
        expected_tgt = functor.map_word(counts.expand(t.post))
        actual_src, actual_tgt = typecheck(dst, functor.morphism_map[t.name])
        if (actual_src, actual_tgt) != (expected_src, expected_tgt):
            raise BoundaryError(
                f"image of {t.name!r} has boundary {list(actual_src)} -> {list(actual_tgt)},"
                f" expected {list(expected_src)} -> {list(expected_tgt)}"
            )


def _strip_units(term: ProcessTerm) -> ProcessTerm:
    if isinstance(term, Seq):
        return Seq(_strip_units(term.first), _strip_units(term.second))
    if isinstance(term, Par):
        left, right = _strip_units(term.left), _strip_units(term.right)
        if left == Id(()):
            return right
        if right == Id(()):
            return left
        return Par(left, right)
    return term


def _seq_chain(term: ProcessTerm) -> list[ProcessTerm]:
    if isinstance(term, Seq):
        return _seq_chain(term.first) + _seq_chain(term.second)
    return [term]


def _compose_perms(p, q):
    return [q[p[i]] for i in range(len(p))]


def transition_decomposition(functor: NetFunctor, transition: str):
    """Parse an image as symmetry;generator;symmetry, or None.

    Returns ``(perm_in, generator, perm_out)`` where the permutations are
    the actions of the surrounding wire shuffles.
    """
    chain = _seq_chain(_strip_units(functor.morphism_map[transition]))
    gen_positions = [i for i, e in enumerate(chain) if count_generators(e) > 0]
    if len(gen_positions) != 1:
        return None
    k = gen_positions[0]
    core = chain[k]
    if not isinstance(core, Gen):
        return None
    src_word, tgt_word = typecheck(functor.target, core)
    before, after = chain[:k], chain[k + 1:]
    perm_in = list(range(len(src_word)))
    for e in before:
        p = term_permutation(e)
        if p is None:
            return None
        perm_in = _compose_perms(perm_in, p)
    perm_out = list(range(len(tgt_word)))
    for e in after:
        p = term_permutation(e)
        if p is None:
            return None
        perm_out = _compose_perms(perm_out, p)
    return tuple(perm_in), core.transition, tuple(perm_out)


def _suffixes(heads, tails):
    out = set()
    for u in heads:
        for v in tails:
            if len(v) >= len(u) and v[: len(u)] == u:
                out.add(v[len(u):])
    return out


def _is_code(words) -> bool:
    """Sardinas-Patterson: can every word over the images be decoded uniquely?"""
    wordset = set(words)
    if any(len(w) == 0 for w in wordset):
        return False
    pending = {s for s in _suffixes(wordset, wordset) if s != ()}
    seen = set()
    while pending:
        if () in pending:
            return False
        seen |= pending
        nxt = _suffixes(wordset, pending) | _suffixes(pending, wordset)
        pending = nxt - seen
    return True


def check_flags(functor: NetFunctor) -> dict[str, bool]:
    """Verified structural properties of a functor, computed from its data."""
    validate_functor(functor)
    object_images = [functor.object_map[p] for p in functor.source.places]
    morphism_images = [functor.morphism_map[t] for t in functor.source.transition_names]
    injective = len(set(object_images)) == len(object_images) and _is_code(object_images)
    return {
        "transition_preserving": all(
            transition_decomposition(functor, t) is not None
            for t in functor.source.transition_names
        ),
        "place_to_place": all(len(w) == 1 for w in object_images),
        "injective_on_objects": injective,
        "faithful_on_generators": len(set(morphism_images)) == len(morphism_images),
    }


def check_morphism(functor: NetFunctor, src: GuardedNet, dst: GuardedNet) -> bool:
    """Does the functor commute with the guards?

    True iff color sets correspond on places and, for every transition, the
    evaluated semantics of the image equals the stored table (span tables up
    to witness bijection).  Strictness forces each place image to be a
    single place with an identical color set.
    """
    validate_functor(functor)
    if src.guard is None or dst.guard is None or src.kind != dst.kind:
        raise PreconditionError("check_morphism needs guards of one matching flavor")
    for p in src.net.places:
        image = functor.object_map[p]
        if len(image) != 1:
            return False
        if colors_of(src.guard, p) != colors_of(dst.guard, image[0]):
            return False
    for t in src.net.transitions:
        image = functor.morphism_map[t.name]
        if isinstance(src.guard, PartialGuard):
            if dict(src.guard.rows(t.name)) != partial_table(dst.net, dst.guard, image):
                return False
        else:
            mine = Counter((r.inputs, r.outputs) for r in src.guard.rows(t.name))
            if mine != eval_span(dst.net, dst.guard, image).pairs():
                return False
    return True


def _unique_witnesses(entries):
    used = Counter()
    rows = []
    for e in sorted(entries):
        used[e.witness] += 1
        name = e.witness if used[e.witness] == 1 else f"{e.witness}#{used[e.witness]}"
        rows.append(SpanArrow(name, e.inputs, e.outputs))
    return tuple(rows)


def pullback_guard(functor: NetFunctor, dst: GuardedNet) -> Guard:
    """The induced guard on the source making the functor guard-compatible."""
    validate_functor(functor)
    if dst.guard is None:
        raise PreconditionError("cannot pull a guard back along an unguarded target")
    if not all(len(functor.object_map[p]) == 1 for p in functor.source.places):
        raise PreconditionError("pullback_guard needs a place-to-place functor")
    colors = {
        p: colors_of(dst.guard, functor.object_map[p][0]) for p in functor.source.places
    }
    if isinstance(dst.guard, PartialGuard):
        table = {
            t.name: partial_table(dst.net, dst.guard, functor.morphism_map[t.name])
            for t in functor.source.transitions
        }
        return PartialGuard(colors, table)
    table = {
        t.name: _unique_witnesses(eval_span(dst.net, dst.guard, functor.morphism_map[t.name]))
        for t in functor.source.transitions
    }
    return SpanGuard(colors, table)


def _stable_match(frm: Word, to: Word) -> list[int]:
    """A permutation p with ``to[p[i]] == frm[i]``, matching equal letters stably."""
    positions = defaultdict(list)
    for j, letter in enumerate(to):
        positions[letter].append(j)
    taken = defaultdict(int)
    out = []
    for letter in frm:
        idx = taken[letter]
        taken[letter] += 1
        out.append(positions[letter][idx])
    return out


def _mediate(
    target_net: Net, term: ProcessTerm, expected_src: Word, expected_tgt: Word
) -> ProcessTerm:
    """Wrap a term in relinearization symmetries to hit canonical boundaries.

    Compiled generators linearize their colored pre/post in sorted order,
    while a traced image term orders tokens by the base linearization; the
    two differ by a within-place permutation of equal colors.
    """
    actual_src, actual_tgt = typecheck(target_net, term)
    if actual_src != expected_src:
        term = Seq(symmetry_for(_stable_match(expected_src, actual_src), expected_src), term)
    if actual_tgt != expected_tgt:
        term = Seq(term, symmetry_for(_stable_match(actual_tgt, expected_tgt), actual_tgt))
    return term


def lift(functor: NetFunctor, src: GuardedNet, dst: GuardedNet) -> NetFunctor:
    """Lift a guard-compatible functor to the compiled nets.

    Compiled places carry their color along the object map; a compiled
    transition keeps its payload: the defining input tuple traces through
    the image term (deterministic case) or the matched witness path does
    (span case).
    """
    if not check_morphism(functor, src, dst):
        raise PreconditionError("lift needs a guard-compatible functor")
    src_net, src_proj = internalize(src)
    dst_net, _dst_proj = internalize(dst)

    object_map = {}
    for ip in src_net.places:
        p, c = src_proj.place_color[ip]
        q = functor.object_map[p][0]
        object_map[ip] = (place_token(q, c),)

    def boundaries(it: str) -> tuple[Word, Word]:
        compiled = src_net.transition(it)
        src_word = tuple(object_map[p][0] for p in counts.expand(compiled.pre))
        tgt_word = tuple(object_map[p][0] for p in counts.expand(compiled.post))
        return src_word, tgt_word

    morphism_map = {}
    if isinstance(src.guard, PartialGuard):
        for it in src_net.transition_names:
            t, payload = src_proj.transition_map[it]
            image, _ = colorize_partial(dst.net, dst.guard, functor.morphism_map[t], payload)
            morphism_map[it] = _mediate(dst_net, image, *boundaries(it))
    else:
        matches = {
            t.name: _match_span_entries(src.guard, dst, functor, t.name)
            for t in src.net.transitions
        }
        for it in src_net.transition_names:
            t, witness = src_proj.transition_map[it]
            entry = matches[t][witness]
            image, _, _ = colorize_span(dst.net, dst.guard, functor.morphism_map[t], entry.path)
            morphism_map[it] = _mediate(dst_net, image, *boundaries(it))
    return NetFunctor(src_net, dst_net, object_map, morphism_map)


def _match_span_entries(src_guard: SpanGuard, dst: GuardedNet, functor: NetFunctor, t: str):
    """Canonical witness-to-entry matching within each (inputs, outputs) class."""
    by_pair_src = defaultdict(list)
    for row in src_guard.rows(t):
        by_pair_src[(row.inputs, row.outputs)].append(row.witness)
    by_pair_dst = defaultdict(list)
    for entry in eval_span(dst.net, dst.guard, functor.morphism_map[t]).entries:
        by_pair_dst[(entry.inputs, entry.outputs)].append(entry)
    out = {}
    for pair, witnesses in by_pair_src.items():
        for idx, witness in enumerate(witnesses):
            out[witness] = by_pair_dst[pair][idx]
    return out


def naturality_check(
    functor: NetFunctor,
    src: GuardedNet,
    dst: GuardedNet,
    lifted: Optional[NetFunctor] = None,
) -> bool:
    """Does projecting the lifted functor give back the original one?

    Checks the commuting square on every compiled generator; a corrupted
    lift (e.g. one swapped payload) fails either the boundary validation or
    the image comparison.  Where the lift had to insert relinearization
    symmetries, the image is compared against the canonical construction
    (projection collapses those symmetries only up to re-sorting).
    """
    canonical = lift(functor, src, dst)
    if lifted is None:
        lifted = canonical
    src_net, src_proj = internalize(src)
    _dst_net, dst_proj = internalize(dst)
    try:
        validate_functor(lifted)
    except BoundaryError:
        return False
    for ip in src_net.places:
        base = src_proj.base_place(ip)
        projected = tuple(dst_proj.base_place(q) for q in lifted.object_map[ip])
        if projected != functor.map_word((base,)):
            return False
    for it in src_net.transition_names:
        base, _payload = src_proj.transition_map[it]
        image = lifted.morphism_map[it]
        if project_term(dst_proj, image) == functor.morphism_map[base]:
            continue
        if image == canonical.morphism_map[it]:
            continue
        return False
    return True


# -- identification (quotients by a pair of witnesses) ----------------------


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def classes(self) -> dict:
        out = defaultdict(list)
        for x in self.parent:
            out[self.find(x)].append(x)
        return {min(members): sorted(members) for members in out.values()}


@dataclass(frozen=True)
class QuotientResult:
    """A quotient net with the maps realizing the collapsing functor."""

    net: Net
    guard: Optional[Guard]
    place_map: Mapping[str, str]
    transition_map: Mapping[str, str]
    source: Net

    def guarded(self) -> GuardedNet:
        return GuardedNet(self.net, self.guard)

    def as_functor(self) -> NetFunctor:
        """The collapsing functor, images in symmetry;generator;symmetry form."""
        morphism_map = {}
        for t in self.source.transitions:
            pre_word = counts.expand(t.pre)
            post_word = counts.expand(t.post)
            mapped_pre = tuple(self.place_map[p] for p in pre_word)
            mapped_post = tuple(self.place_map[p] for p in post_word)
            pre_order = _stable_order(mapped_pre)
            post_order = _stable_order(mapped_post)
            term: ProcessTerm = Gen(self.transition_map[t.name])
            alpha = [0] * len(pre_order)
            for j, i in enumerate(pre_order):
                alpha[i] = j
            if alpha != list(range(len(alpha))):
                term = Seq(symmetry_for(alpha, mapped_pre), term)
            sorted_post = tuple(mapped_post[i] for i in post_order)
            if list(post_order) != list(range(len(post_order))):
                term = Seq(term, symmetry_for(list(post_order), sorted_post))
            morphism_map[t.name] = term
        return NetFunctor(
            self.source,
            self.net,
            {p: (rep,) for p, rep in self.place_map.items()},
            morphism_map,
        )


def _stable_order(mapped_word) -> list[int]:
    return sorted(range(len(mapped_word)), key=lambda i: (mapped_word[i], i))


def _rekey_tuple(tup, order):
    return tuple(tup[i] for i in order)


def identify(
    witness_net: Net, left: NetFunctor, right: NetFunctor, guarded: GuardedNet
) -> QuotientResult:
    """Quotient a guarded net by the coequalizer of two witnesses.

    Both witnesses must be transition-preserving and place-to-place, and
    must agree with the guard; the guard descends to the quotient, which is
    checked by comparing re-keyed tables on every merged generator.
    """
    for name, functor in (("left", left), ("right", right)):
        if functor.source != witness_net or functor.target != guarded.net:
            raise PreconditionError(f"{name} witness does not run between the given nets")
        validate_functor(functor)
        flags = check_flags(functor)
        for flag in ("transition_preserving", "place_to_place"):
            if not flags[flag]:
                raise PreconditionError(f"{name} witness is not {flag}")

    if guarded.guard is not None:
        for p in witness_net.places:
            lcolors = colors_of(guarded.guard, left.object_map[p][0])
            rcolors = colors_of(guarded.guard, right.object_map[p][0])
            if lcolors != rcolors:
                raise PreconditionError(
                    f"witnesses disagree with the guard: color sets differ at place {p!r}"
                )
        for h in witness_net.transition_names:
            lpairs = relation_pairs(guarded.net, guarded.guard, left.morphism_map[h])
            rpairs = relation_pairs(guarded.net, guarded.guard, right.morphism_map[h])
            if lpairs != rpairs:
                raise PreconditionError(
                    f"witnesses disagree with the guard at transition {h!r}"
                )

    places = _UnionFind(guarded.net.places)
    for p in witness_net.places:
        places.union(left.object_map[p][0], right.object_map[p][0])
    transitions = _UnionFind(guarded.net.transition_names)
    for h in witness_net.transition_names:
        _, lgen, _ = transition_decomposition(left, h)
        _, rgen, _ = transition_decomposition(right, h)
        transitions.union(lgen, rgen)

    place_classes = places.classes()
    place_map = {p: rep for rep, members in place_classes.items() for p in members}
    trans_classes = transitions.classes()
    trans_map = {t: rep for rep, members in trans_classes.items() for t in members}

    new_transitions = []
    for rep, members in sorted(trans_classes.items()):
        projected = {
            m: (
                counts.freeze(_project_counts(guarded.net.transition(m).pre, place_map)),
                counts.freeze(_project_counts(guarded.net.transition(m).post, place_map)),
            )
            for m in members
        }
        first = projected[members[0]]
        if any(v != first for v in projected.values()):
            raise PreconditionError(
                f"merged transitions {members} have incompatible pre/post multisets"
            )
        new_transitions.append(Transition(rep, first[0], first[1]))
    quotient_net = Net(tuple(place_classes), tuple(new_transitions))

    guard = None
    if guarded.guard is not None:
        guard = _descend_guard(guarded, place_map, trans_classes)
    return QuotientResult(quotient_net, guard, place_map, trans_map, guarded.net)


def _project_counts(cnts, place_map) -> dict:
    out: dict = {}
    for p, n in cnts:
        rep = place_map[p]
        out[rep] = out.get(rep, 0) + n
    return out


def _descend_guard(guarded: GuardedNet, place_map, trans_classes) -> Guard:
    old = guarded.guard
    colors = {}
    for p, rep in place_map.items():
        cs = colors_of(old, p)
        if rep in colors and colors[rep] != cs:
            raise PreconditionError(
                f"merged places with different color sets (representative {rep!r})"
            )
        colors[rep] = cs

    def orders(member: str):
        t = guarded.net.transition(member)
        mapped_pre = tuple(place_map[p] for p in counts.expand(t.pre))
        mapped_post = tuple(place_map[p] for p in counts.expand(t.post))
        return _stable_order(mapped_pre), _stable_order(mapped_post)

    if isinstance(old, PartialGuard):
        table = {}
        for rep, members in sorted(trans_classes.items()):
            rekeyed = {}
            for m in members:
                opre, opost = orders(m)
                rekeyed[m] = {
                    _rekey_tuple(k, opre): _rekey_tuple(v, opost)
                    for k, v in old.rows(m).items()
                }
            first = rekeyed[members[0]]
            if any(v != first for v in rekeyed.values()):
                raise PreconditionError(
                    f"guard tables disagree on merged transitions {members}"
                )
            table[rep] = first
        return PartialGuard(colors, table)

    table = {}
    for rep, members in sorted(trans_classes.items()):
        rekeyed = {}
        for m in members:
            opre, opost = orders(m)
            rekeyed[m] = tuple(
                SpanArrow(r.witness, _rekey_tuple(r.inputs, opre), _rekey_tuple(r.outputs, opost))
                for r in old.rows(m)
            )
        pair_counts = {
            m: Counter((r.inputs, r.outputs) for r in rows) for m, rows in rekeyed.items()
        }
        first = pair_counts[members[0]]
        if any(v != first for v in pair_counts.values()):
            raise PreconditionError(f"guard tables disagree on merged transitions {members}")
        table[rep] = rekeyed[members[0]]
    return SpanGuard(colors, table)


# -- generator surgery -------------------------------------------------------


def _require_surgery_flags(functor: NetFunctor) -> None:
    flags = check_flags(functor)
    for flag in ("place_to_place", "injective_on_objects"):
        if not flags[flag]:
            raise PreconditionError(f"surgery witness must be {flag}")


def _image_tables(guarded: GuardedNet, w_net: Net, along: NetFunctor):
    if guarded.guard is None:
        return None
    if isinstance(guarded.guard, PartialGuard):
        return {
            t.name: partial_table(guarded.net, guarded.guard, along.morphism_map[t.name])
            for t in w_net.transitions
        }
    return {
        t.name: _unique_witnesses(
            eval_span(guarded.net, guarded.guard, along.morphism_map[t.name]).entries
        )
        for t in w_net.transitions
    }


def _splice(base: GuardedNet, w_net: Net, along: NetFunctor, tables) -> GuardedNet:
    existing = set(base.net.transition_names)
    new_transitions = list(base.net.transitions)
    for t in w_net.transitions:
        if t.name in existing:
            raise PreconditionError(f"new transition {t.name!r} collides with an existing one")
        pre = counts.from_items(along.map_word(counts.expand(t.pre)))
        post = counts.from_items(along.map_word(counts.expand(t.post)))
        new_transitions.append(Transition(t.name, pre, post))
    net = Net(base.net.places, tuple(new_transitions))
    if base.guard is None:
        return GuardedNet(net, None)
    merged = dict(base.guard.table)
    merged.update(tables)
    if isinstance(base.guard, PartialGuard):
        return GuardedNet(net, PartialGuard(base.guard.colors, merged))
    return GuardedNet(net, SpanGuard(base.guard.colors, merged))


def add_generators(guarded: GuardedNet, w_net: Net, along: NetFunctor) -> GuardedNet:
    """Add one transition per generator of ``w_net``, guarded by evaluation.

    The new transition's table is the evaluated semantics of its image term,
    so an image whose composite is empty yields an empty table.
    """
    if along.source != w_net or along.target != guarded.net:
        raise PreconditionError("the addition witness does not run between the given nets")
    validate_functor(along)
    _require_surgery_flags(along)
    return _splice(guarded, w_net, along, _image_tables(guarded, w_net, along))


def erase_generators(guarded: GuardedNet, victims: Iterable[str]) -> GuardedNet:
    """Remove the victim transitions; places and remaining guard stay put."""
    victims = set(victims)
    known = set(guarded.net.transition_names)
    for v in sorted(victims):
        if v not in known:
            raise PreconditionError(f"cannot erase unknown transition {v!r}")
    net = Net(
        guarded.net.places,
        tuple(t for t in guarded.net.transitions if t.name not in victims),
    )
    if guarded.guard is None:
        return GuardedNet(net, None)
    table = {t: rows for t, rows in guarded.guard.table.items() if t not in victims}
    if isinstance(guarded.guard, PartialGuard):
        return GuardedNet(net, PartialGuard(guarded.guard.colors, table))
    return GuardedNet(net, SpanGuard(guarded.guard.colors, table))


def synchronize(
    guarded: GuardedNet, victims: Iterable[str], w_net: Net, along: NetFunctor
) -> GuardedNet:
    """Erase the victims, then add ``w_net``'s generators along ``along``.

    The new tables are evaluated against the original guard (the witness may
    mention the victims), then the victims are erased and the generators
    spliced in: the double-pushout composite.
    """
    if along.source != w_net or along.target != guarded.net:
        raise PreconditionError("the synchronization witness does not run between the given nets")
    validate_functor(along)
    _require_surgery_flags(along)
    tables = _image_tables(guarded, w_net, along)
    erased = erase_generators(guarded, victims)
    return _splice(erased, w_net, along, tables)


def lift_synchronization(
    guarded: GuardedNet, victims: Iterable[str], w_net: Net, along: NetFunctor
) -> Net:
    """Apply the lifted erase-then-add pipeline to the compiled net.

    Erases exactly the compiled generators occurring in the lifted images,
    then adds the compiled generators of the witness net.  This is the
    pipeline the synchronization counterexample compares against.
    """
    victims = set(victims)
    w_guarded = GuardedNet(w_net, pullback_guard(along, guarded))
    lifted = lift(along, w_guarded, guarded)
    compiled_net, compiled_proj = internalize(guarded)
    compiled_w, _ = internalize(w_guarded)
    lifted_victims = sorted(
        {
            g
            for t in compiled_w.transition_names
            for g in generators_of(lifted.morphism_map[t])
            if compiled_proj.base_transition(g)[0] in victims
        }
    )
    result = synchronize(GuardedNet(compiled_net, None), lifted_victims, compiled_w, lifted)
    return result.net
