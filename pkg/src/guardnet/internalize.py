"""Compile a guarded net into an ordinary net, one place per (place, color).

The compiled net has a place for every color a place can hold and a
transition for every defined input tuple (deterministic guards) or witness
(span guards).  The projection keeps the maps back to the base net, which is
a net morphism: projected pre/post multisets equal the base transition's.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Tuple, Union

from . import counts
from .counts import Counts
from .errors import EvalError, InvalidNetError, PreconditionError, TokenGameError
from .guards import (
    ColorTuple,
    GuardedNet,
    PartialGuard,
    SpanGuard,
    validate_guard,
)
from .nets import Marking, Net, Transition
from .terms import Gen, Id, Par, ProcessTerm, Seq, Sym, Word, typecheck

Payload = Union[ColorTuple, str]


def place_token(place: str, color: str) -> str:
    return f"{place}@{color}"


def partial_transition_token(name: str, inputs: ColorTuple) -> str:
    return f"{name}@{','.join(inputs)}"


def span_transition_token(name: str, witness: str) -> str:
    return f"{name}@{witness}"


def colored_word(word: Word, tup: ColorTuple) -> Word:
    return tuple(place_token(p, c) for p, c in zip(word, tup))


@dataclass(frozen=True, order=True)
class ColoredMarking:
    """A multiset of (place, color) tokens."""

    counts: Tuple[Tuple[Tuple[str, str], int], ...] = ()

    @classmethod
    def of(cls, *tokens: Tuple[str, str]) -> "ColoredMarking":
        return cls(counts.from_items(tuple(tokens)))

    def tokens(self) -> tuple:
        return counts.expand(self.counts)

    def size(self) -> int:
        return counts.size(self.counts)

    def as_marking(self) -> Marking:
        """Read the colored tokens as a plain marking of the compiled net."""
        return Marking(counts.freeze({place_token(p, c): n for (p, c), n in self.counts}))

    def forget_colors(self) -> Marking:
        out: dict = {}
        for (p, _c), n in self.counts:
            out[p] = out.get(p, 0) + n
        return Marking(counts.freeze(out))

    def __add__(self, other: "ColoredMarking") -> "ColoredMarking":
        return ColoredMarking(counts.add(self.counts, other.counts))

    def __sub__(self, other: "ColoredMarking") -> "ColoredMarking":
        return ColoredMarking(counts.subtract(self.counts, other.counts))

    def covered_by(self, other: "ColoredMarking") -> bool:
        return counts.leq(self.counts, other.counts)


@dataclass(frozen=True)
class Projection:
    """Generator-level maps from a compiled net back to its base."""

    place_map: Mapping[str, str]
    place_color: Mapping[str, Tuple[str, str]]
    transition_map: Mapping[str, Tuple[str, Payload]]

    def base_place(self, name: str) -> str:
        if name not in self.place_map:
            raise TokenGameError(f"unknown compiled place {name!r}")
        return self.place_map[name]

    def base_transition(self, name: str) -> Tuple[str, Payload]:
        if name not in self.transition_map:
            raise TokenGameError(f"unknown compiled transition {name!r}")
        return self.transition_map[name]

    def colored_marking(self, m: Marking) -> ColoredMarking:
        """Decode a marking of the compiled net into colored tokens."""
        out: dict = {}
        for place, n in m.counts:
            if place not in self.place_color:
                raise TokenGameError(f"unknown compiled place {place!r}")
            out[self.place_color[place]] = out.get(self.place_color[place], 0) + n
        return ColoredMarking(counts.freeze(out))


def _internal_places(net: Net, guard) -> tuple:
    places = []
    place_map = {}
    place_color = {}
    for p in net.places:
        for c in guard.colors.get(p, ()):
            name = place_token(p, c)
            places.append(name)
            place_map[name] = p
            place_color[name] = (p, c)
    if len(set(places)) != len(places):
        raise PreconditionError("compiled place identifiers collide; rename places or colors")
    return tuple(places), place_map, place_color


def _word_counts(word: Word, tup: ColorTuple) -> Counts:
    return counts.from_items(colored_word(word, tup))


def internalize_partial(net: Net, guard: PartialGuard) -> tuple[Net, Projection]:
    """One place per (place, color); one transition per defined input tuple."""
    diags = validate_guard(net, guard)
    if diags:
        raise InvalidNetError(diags)
    places, place_map, place_color = _internal_places(net, guard)
    transitions = []
    transition_map = {}
    for t in net.transitions:
        pre_word, post_word = counts.expand(t.pre), counts.expand(t.post)
        for tin, tout in guard.rows(t.name).items():
            name = partial_transition_token(t.name, tin)
            transitions.append(Transition(name, _word_counts(pre_word, tin), _word_counts(post_word, tout)))
            transition_map[name] = (t.name, tin)
    _check_transition_names(transitions)
    return Net(places, tuple(transitions)), Projection(place_map, place_color, transition_map)


def internalize_span(net: Net, guard: SpanGuard) -> tuple[Net, Projection]:
    """One place per (place, color); one transition per witness."""
    diags = validate_guard(net, guard)
    if diags:
        raise InvalidNetError(diags)
    places, place_map, place_color = _internal_places(net, guard)
    transitions = []
    transition_map = {}
    for t in net.transitions:
        pre_word, post_word = counts.expand(t.pre), counts.expand(t.post)
        for row in guard.rows(t.name):
            name = span_transition_token(t.name, row.witness)
            transitions.append(
                Transition(name, _word_counts(pre_word, row.inputs), _word_counts(post_word, row.outputs))
            )
            transition_map[name] = (t.name, row.witness)
    _check_transition_names(transitions)
    return Net(places, tuple(transitions)), Projection(place_map, place_color, transition_map)


def _check_transition_names(transitions) -> None:
    names = [t.name for t in transitions]
    if len(set(names)) != len(names):
        raise PreconditionError("compiled transition identifiers collide")


def internalize(guarded: GuardedNet) -> tuple[Net, Projection]:
    if isinstance(guarded.guard, PartialGuard):
        return internalize_partial(guarded.net, guarded.guard)
    if isinstance(guarded.guard, SpanGuard):
        return internalize_span(guarded.net, guarded.guard)
    raise PreconditionError("nothing to internalize: the net carries no guard")


def project_marking(projection: Projection, cm: ColoredMarking) -> Marking:
    """Token-wise application of the place map (colors forgotten)."""
    out: dict = {}
    for (p, c), n in cm.counts:
        base = projection.base_place(place_token(p, c))
        out[base] = out.get(base, 0) + n
    return Marking(counts.freeze(out))


def project_sequence(projection: Projection, steps: Iterable[str]) -> tuple[str, ...]:
    """Step-wise application of the transition map."""
    return tuple(projection.base_transition(s)[0] for s in steps)


def project_term(projection: Projection, term: ProcessTerm) -> ProcessTerm:
    """Rewrite a term of the compiled net as a term of the base net."""
    if isinstance(term, Gen):
        return Gen(projection.base_transition(term.transition)[0])
    if isinstance(term, Id):
        return Id(tuple(projection.base_place(p) for p in term.word))
    if isinstance(term, Sym):
        return Sym(
            tuple(projection.base_place(p) for p in term.left),
            tuple(projection.base_place(p) for p in term.right),
        )
    if isinstance(term, Seq):
        return Seq(project_term(projection, term.first), project_term(projection, term.second))
    return Par(project_term(projection, term.left), project_term(projection, term.right))


def colorize_partial(
    net: Net, guard: PartialGuard, term: ProcessTerm, inputs: ColorTuple
) -> tuple[ProcessTerm, ColorTuple]:
    """Trace a term on an input tuple, renaming every node to compiled ids.

    The input must be in the term's domain of definition; this is the
    morphism-level content of the compilation.
    """
    if isinstance(term, Gen):
        out = guard.rows(term.transition).get(tuple(inputs))
        if out is None:
            raise EvalError(
                f"generator {term.transition!r} is undefined on {list(inputs)}"
            )
        return Gen(partial_transition_token(term.transition, tuple(inputs))), out
    if isinstance(term, Id):
        return Id(colored_word(term.word, inputs)), tuple(inputs)
    if isinstance(term, Sym):
        k = len(term.left)
        return (
            Sym(colored_word(term.left, inputs[:k]), colored_word(term.right, inputs[k:])),
            tuple(inputs[k:] + inputs[:k]),
        )
    if isinstance(term, Seq):
        first, mid = colorize_partial(net, guard, term.first, inputs)
        second, out = colorize_partial(net, guard, term.second, mid)
        return Seq(first, second), out
    k = len(typecheck(net, term.left)[0])
    left, lout = colorize_partial(net, guard, term.left, tuple(inputs[:k]))
    right, rout = colorize_partial(net, guard, term.right, tuple(inputs[k:]))
    return Par(left, right), lout + rout


def colorize_span(
    net: Net, guard: SpanGuard, term: ProcessTerm, path
) -> tuple[ProcessTerm, ColorTuple, ColorTuple]:
    """Rename a term to compiled ids along one structured witness path."""
    tag = path[0]
    if isinstance(term, Gen):
        if tag != "w":
            raise EvalError(f"witness path {path!r} does not fit a generator")
        for row in guard.rows(term.transition):
            if row.witness == path[1]:
                return (
                    Gen(span_transition_token(term.transition, row.witness)),
                    row.inputs,
                    row.outputs,
                )
        raise EvalError(f"unknown witness {path[1]!r} for generator {term.transition!r}")
    if isinstance(term, Id):
        if tag != "unit":
            raise EvalError(f"witness path {path!r} does not fit an identity")
        x = tuple(path[1])
        return Id(colored_word(term.word, x)), x, x
    if isinstance(term, Sym):
        if tag != "unit":
            raise EvalError(f"witness path {path!r} does not fit a symmetry")
        x = tuple(path[1])
        k = len(term.left)
        return (
            Sym(colored_word(term.left, x[:k]), colored_word(term.right, x[k:])),
            x,
            x[k:] + x[:k],
        )
    if isinstance(term, Seq):
        if tag != "seq":
            raise EvalError(f"witness path {path!r} does not fit a composition")
        first, fin, fout = colorize_span(net, guard, term.first, path[1])
        second, sin, sout = colorize_span(net, guard, term.second, path[2])
        if fout != sin:
            raise EvalError("witness path does not compose: middle tuples differ")
        return Seq(first, second), fin, sout
    if tag != "pair":
        raise EvalError(f"witness path {path!r} does not fit a parallel composite")
    left, lin, lout = colorize_span(net, guard, term.left, path[1])
    right, rin, rout = colorize_span(net, guard, term.right, path[2])
    return Par(left, right), lin + rin, lout + rout
