"""Plain place/transition nets, markings, and the token game.

Everything downstream (guards, internalization, reachability) builds on the
types here.  All values are immutable and iterate in sorted identifier order,
so repeated runs produce bit-identical results.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Tuple

from . import counts
from .counts import Counts
from .errors import TokenGameError, TooLargeError

FiringSequence = Tuple[str, ...]

DEFAULT_ISO_CAP = 64


@dataclass(frozen=True, order=True)
class Transition:
    name: str
    pre: Counts
    post: Counts

    @classmethod
    def of(cls, name: str, pre: Iterable[str] = (), post: Iterable[str] = ()) -> "Transition":
        return cls(name, counts.from_items(pre), counts.from_items(post))


@dataclass(frozen=True)
class Net:
    """Finite places and transitions with pre/post multisets.

    Construction canonicalizes order but keeps duplicates, so ``validate``
    can report them instead of silently repairing the net.
    """

    places: Tuple[str, ...] = ()
    transitions: Tuple[Transition, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "places", tuple(sorted(self.places)))
        object.__setattr__(self, "transitions", tuple(sorted(self.transitions, key=lambda t: t.name)))

    @classmethod
    def build(cls, places: Iterable[str], transitions: Iterable[tuple]) -> "Net":
        """Build from ``(name, pre iterable, post iterable)`` triples."""
        return cls(tuple(places), tuple(Transition.of(*triple) for triple in transitions))

    @property
    def transition_names(self) -> Tuple[str, ...]:
        return tuple(t.name for t in self.transitions)

    def transition(self, name: str) -> Transition:
        for t in self.transitions:
            if t.name == name:
                return t
        raise TokenGameError(f"unknown transition {name!r}")

    def has_place(self, place: str) -> bool:
        return place in self.places


@dataclass(frozen=True, order=True)
class Marking:
    """A multiset of tokens over place identifiers."""

    counts: Counts = ()

    @classmethod
    def of(cls, *tokens: str) -> "Marking":
        return cls(counts.from_items(tokens))

    @classmethod
    def from_counter(cls, mapping: Mapping[str, int]) -> "Marking":
        return cls(counts.freeze(mapping))

    def tokens(self) -> Tuple[str, ...]:
        return counts.expand(self.counts)

    def size(self) -> int:
        return counts.size(self.counts)

    def __add__(self, other: "Marking") -> "Marking":
        return Marking(counts.add(self.counts, other.counts))

    def __sub__(self, other: "Marking") -> "Marking":
        return Marking(counts.subtract(self.counts, other.counts))

    def covered_by(self, other: "Marking") -> bool:
        """Multiset inclusion (lexicographic <= comes from ``order=True``)."""
        return counts.leq(self.counts, other.counts)


def empty_net() -> Net:
    return Net()


def validate(net: Net) -> list[str]:
    """Structural diagnostics; empty list iff the net is well formed."""
    diags = []
    seen = set()
    for p in net.places:
        if p in seen:
            diags.append(f"duplicate place identifier {p!r}")
        seen.add(p)
    tseen = set()
    for t in net.transitions:
        if t.name in tseen:
            diags.append(f"duplicate transition identifier {t.name!r}")
        tseen.add(t.name)
        for label, side in (("pre", t.pre), ("post", t.post)):
            for place, _ in side:
                if place not in seen:
                    diags.append(f"transition {t.name!r}: unknown place {place!r} in {label}")
    return diags


def _check_marking(net: Net, m: Marking) -> None:
    for place, _ in m.counts:
        if not net.has_place(place):
            raise TokenGameError(f"marking mentions unknown place {place!r}")


def enabled(net: Net, m: Marking) -> frozenset[str]:
    """Transitions whose pre multiset is contained in ``m``."""
    _check_marking(net, m)
    return frozenset(t.name for t in net.transitions if counts.leq(t.pre, m.counts))


def fire(net: Net, m: Marking, name: str) -> Marking:
    """Fire ``name`` at ``m``; total token change is ``|post| - |pre|``."""
    _check_marking(net, m)
    t = net.transition(name)
    if not counts.leq(t.pre, m.counts):
        raise TokenGameError(f"transition {name!r} is not enabled")
    return Marking(counts.add(counts.subtract(m.counts, t.pre), t.post))


def replay(net: Net, m: Marking, steps: Iterable[str]) -> Marking:
    for step in steps:
        m = fire(net, m, step)
    return m


def disjoint_union(a: Net, b: Net, tags: Tuple[str, str] = ("l", "r")) -> Net:
    """Tagged sum of two nets; places and transitions are renamed copies."""

    def rename(tag: str, net: Net) -> tuple:
        prefix = f"{tag}."
        places = tuple(prefix + p for p in net.places)
        transitions = tuple(
            Transition(
                prefix + t.name,
                tuple((prefix + p, n) for p, n in t.pre),
                tuple((prefix + p, n) for p, n in t.post),
            )
            for t in net.transitions
        )
        return places, transitions

    pa, ta = rename(tags[0], a)
    pb, tb = rename(tags[1], b)
    return Net(pa + pb, ta + tb)


@dataclass(frozen=True)
class NetIsomorphism:
    places: Mapping[str, str]
    transitions: Mapping[str, str]


def net_isomorphic(a: Net, b: Net, cap: int = DEFAULT_ISO_CAP) -> Optional[NetIsomorphism]:
    """Exact isomorphism search: refinement classes, then backtracking.

    Returns the witnessing bijections or None.  Refuses (TooLargeError)
    rather than guessing above ``cap`` places or transitions.
    """
    for net in (a, b):
        if len(net.places) > cap or len(net.transitions) > cap:
            raise TooLargeError(f"isomorphism search capped at {cap} places/transitions")
    if len(a.places) != len(b.places) or len(a.transitions) != len(b.transitions):
        return None

    place_labels_a, place_labels_b, trans_labels_a, trans_labels_b = _refinement_labels(a, b)

    # histogram mismatch: no bijection can respect the classes
    if Counter(place_labels_a.values()) != Counter(place_labels_b.values()):
        return None
    if Counter(trans_labels_a.values()) != Counter(trans_labels_b.values()):
        return None

    by_label = defaultdict(list)
    for p in b.places:
        by_label[place_labels_b[p]].append(p)

    order = sorted(a.places, key=lambda p: (place_labels_a[p], p))
    assignment: dict[str, str] = {}
    used: set[str] = set()

    def extend(i: int) -> Optional[dict]:
        if i == len(order):
            return _match_transitions(a, b, assignment)
        p = order[i]
        for q in by_label[place_labels_a[p]]:
            if q in used:
                continue
            assignment[p] = q
            used.add(q)
            tmap = extend(i + 1)
            if tmap is not None:
                return tmap
            del assignment[p]
            used.remove(q)
        return None

    tmap = extend(0)
    if tmap is None:
        return None
    return NetIsomorphism(dict(sorted(assignment.items())), dict(sorted(tmap.items())))


def _refinement_labels(a: Net, b: Net):
    """Jointly refine place/transition classes of both nets.

    Labels are interned in a shared table so classes are comparable across
    the two nets; iteration stops at a fixpoint of the partition sizes.
    """
    intern: dict = {}

    def lab(sig) -> int:
        return intern.setdefault(sig, len(intern))

    def init(net: Net):
        pl = {p: lab(("p",)) for p in net.places}
        tl = {t.name: lab(("t", counts.size(t.pre), counts.size(t.post))) for t in net.transitions}
        return pl, tl

    pla, tla = init(a)
    plb, tlb = init(b)

    def incidence(net: Net, pl, tl):
        cons = defaultdict(list)
        prod = defaultdict(list)
        for t in net.transitions:
            for p, n in t.pre:
                cons[p].append((tl[t.name], n))
            for p, n in t.post:
                prod[p].append((tl[t.name], n))
        return {
            p: lab((pl[p], tuple(sorted(cons[p])), tuple(sorted(prod[p]))))
            for p in net.places
        }

    def tsign(net: Net, pl, tl):
        return {
            t.name: lab(
                (
                    tl[t.name],
                    tuple(sorted((pl[p], n) for p, n in t.pre)),
                    tuple(sorted((pl[p], n) for p, n in t.post)),
                )
            )
            for t in net.transitions
        }

    for _ in range(len(a.places) + len(a.transitions) + 1):
        npa, npb = incidence(a, pla, tla), incidence(b, plb, tlb)
        nta, ntb = tsign(a, npa, tla), tsign(b, npb, tlb)
        stable = len(set(npa.values())) == len(set(pla.values())) and len(
            set(nta.values())
        ) == len(set(tla.values()))
        pla, tla, plb, tlb = npa, nta, npb, ntb
        if stable:
            break
    return pla, plb, tla, tlb


def _match_transitions(a: Net, b: Net, pmap: Mapping[str, str]) -> Optional[dict]:
    """Given a full place bijection, match transitions by mapped signature.

    Transitions of ``b`` with identical pre/post are interchangeable, so a
    pooled greedy match is exact.
    """
    pools = defaultdict(list)
    for t in b.transitions:
        pools[(t.pre, t.post)].append(t.name)
    tmap = {}
    for t in a.transitions:
        key = (
            counts.freeze({pmap[p]: n for p, n in t.pre}),
            counts.freeze({pmap[p]: n for p, n in t.post}),
        )
        pool = pools.get(key)
        if not pool:
            return None
        tmap[t.name] = pool.pop(0)
    return tmap
