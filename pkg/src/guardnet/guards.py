"""Guard data and evaluation: partial-function tables and span tables.

A guard assigns every place a finite color set and every transition either a
partial map on color tuples (deterministic) or a set of witness-indexed
rows (nondeterministic with side effects).  Evaluation interprets a process
term under a guard; span composition matches witnesses on the middle tuple,
so distinct paths between the same tuples stay distinct.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Tuple, Union

from .errors import EvalError
from .nets import Net
from .terms import Gen, Id, ProcessTerm, Seq, Sym, Word, typecheck

ColorTuple = Tuple[str, ...]


def _canon_colors(colors: Mapping[str, Iterable[str]]) -> dict:
    return {place: tuple(sorted(set(cs))) for place, cs in colors.items()}


@dataclass(frozen=True, eq=True)
class PartialGuard:
    """Deterministic guard: per transition, a partial map on color tuples."""

    colors: Mapping[str, Tuple[str, ...]]
    table: Mapping[str, Mapping[ColorTuple, ColorTuple]]

    def __post_init__(self):
        object.__setattr__(self, "colors", _canon_colors(self.colors))
        canon = {
            t: {tuple(k): tuple(v) for k, v in sorted((tuple(k), tuple(v)) for k, v in rows.items())}
            for t, rows in sorted(self.table.items())
        }
        object.__setattr__(self, "table", canon)

    __hash__ = None

    def rows(self, transition: str) -> Mapping[ColorTuple, ColorTuple]:
        return self.table.get(transition, {})


@dataclass(frozen=True, order=True)
class SpanArrow:
    """One row of a span table: a witness with its input/output tuples."""

    witness: str
    inputs: ColorTuple
    outputs: ColorTuple

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))


@dataclass(frozen=True, eq=True)
class SpanGuard:
    """Nondeterministic guard: witness-indexed rows per transition.

    Distinct witnesses may carry the same (inputs, outputs) pair; that is
    the point of spans.
    """

    colors: Mapping[str, Tuple[str, ...]]
    table: Mapping[str, Tuple[SpanArrow, ...]]

    def __post_init__(self):
        object.__setattr__(self, "colors", _canon_colors(self.colors))
        canon = {t: tuple(sorted(rows)) for t, rows in sorted(self.table.items())}
        object.__setattr__(self, "table", canon)

    __hash__ = None

    def rows(self, transition: str) -> Tuple[SpanArrow, ...]:
        return self.table.get(transition, ())


Guard = Union[PartialGuard, SpanGuard]


def guard_kind(guard: Optional[Guard]) -> str:
    if guard is None:
        return "none"
    return "partial" if isinstance(guard, PartialGuard) else "span"


@dataclass(frozen=True, eq=True)
class GuardedNet:
    net: Net
    guard: Optional[Guard]

    __hash__ = None

    @property
    def kind(self) -> str:
        return guard_kind(self.guard)


def colors_of(guard: Guard, place: str) -> Tuple[str, ...]:
    return guard.colors.get(place, ())


def word_tuples(guard: Guard, word: Word):
    """All color tuples inhabiting a word (the product of its color sets)."""
    return itertools.product(*(colors_of(guard, p) for p in word))


def validate_guard(net: Net, guard: Guard) -> list[str]:
    """Diagnostics against the net's arities; empty iff the guard is valid."""
    diags = []
    for place in guard.colors:
        if not net.has_place(place):
            diags.append(f"colors given for unknown place {place!r}")
    for place in net.places:
        if place not in guard.colors:
            diags.append(f"place {place!r} has no color set")

    def check_tuple(tname: str, side: str, word: Word, tup: ColorTuple):
        if len(tup) != len(word):
            diags.append(
                f"transition {tname!r}: {side} tuple {list(tup)} has arity "
                f"{len(tup)}, expected {len(word)}"
            )
            return
        for place, color in zip(word, tup):
            if color not in colors_of(guard, place):
                diags.append(
                    f"transition {tname!r}: color {color!r} not in colors of place {place!r}"
                )

    names = set(net.transition_names)
    for tname in guard.table:
        if tname not in names:
            diags.append(f"guard table for unknown transition {tname!r}")
            continue
        t = net.transition(tname)
        pre_word = tuple(p for p, n in t.pre for _ in range(n))
        post_word = tuple(p for p, n in t.post for _ in range(n))
        if isinstance(guard, PartialGuard):
            for tin, tout in guard.rows(tname).items():
                check_tuple(tname, "input", pre_word, tin)
                check_tuple(tname, "output", post_word, tout)
        else:
            seen = set()
            for row in guard.rows(tname):
                if row.witness in seen:
                    diags.append(
                        f"transition {tname!r}: duplicate witness {row.witness!r}"
                    )
                seen.add(row.witness)
                check_tuple(tname, "input", pre_word, row.inputs)
                check_tuple(tname, "output", post_word, row.outputs)
    return diags


def _check_inputs(guard: Guard, word: Word, inputs: ColorTuple) -> None:
    if len(inputs) != len(word):
        raise EvalError(f"input tuple {list(inputs)} has arity {len(inputs)}, expected {len(word)}")
    for place, color in zip(word, inputs):
        if color not in colors_of(guard, place):
            raise EvalError(f"color {color!r} is not a color of place {place!r}")


def _source_width(net: Net, term: ProcessTerm) -> int:
    if isinstance(term, Gen):
        return len(typecheck(net, term)[0])
    if isinstance(term, Id):
        return len(term.word)
    if isinstance(term, Sym):
        return len(term.left) + len(term.right)
    if isinstance(term, Seq):
        return _source_width(net, term.first)
    return _source_width(net, term.left) + _source_width(net, term.right)


def eval_partial(
    net: Net, guard: PartialGuard, term: ProcessTerm, inputs: Iterable[str]
) -> Optional[ColorTuple]:
    """Run a term on a color tuple; None means the guard rejects.

    A malformed query (wrong arity, color outside the place's set) raises
    EvalError instead: undefined and error are different outcomes.
    """
    inputs = tuple(inputs)
    source, _ = typecheck(net, term)
    _check_inputs(guard, source, inputs)

    def run(t: ProcessTerm, x: ColorTuple) -> Optional[ColorTuple]:
        if isinstance(t, Gen):
            return guard.rows(t.transition).get(x)
        if isinstance(t, Id):
            return x
        if isinstance(t, Sym):
            k = len(t.left)
            return x[k:] + x[:k]
        if isinstance(t, Seq):
            mid = run(t.first, x)
            if mid is None:
                return None
            return run(t.second, mid)
        k = _source_width(net, t.left)
        lout = run(t.left, x[:k])
        rout = run(t.right, x[k:])
        if lout is None or rout is None:
            return None
        return lout + rout

    return run(term, inputs)


# structured witness paths: ("w", id) | ("unit", tuple) | ("seq", p, q) | ("pair", p, q)


def render_path(path) -> str:
    tag = path[0]
    if tag == "w":
        return path[1]
    if tag == "unit":
        return ",".join(path[1]) if path[1] else "*"
    if tag == "seq":
        return f"{render_path(path[1])}.{render_path(path[2])}"
    return f"({render_path(path[1])}|{render_path(path[2])})"


@dataclass(frozen=True, order=True)
class SpanTableEntry:
    witness: str
    inputs: ColorTuple
    outputs: ColorTuple
    path: tuple = field(compare=False, default=("unit", ()))


@dataclass(frozen=True)
class SpanTable:
    entries: Tuple[SpanTableEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def pairs(self) -> Counter:
        """Multiset of (inputs, outputs) rows, witnesses forgotten."""
        return Counter((e.inputs, e.outputs) for e in self.entries)


def eval_span(net: Net, guard: SpanGuard, term: ProcessTerm) -> SpanTable:
    """The span denoted by a term: every witness path with its end tuples.

    Sequential composition keeps exactly the matching pairs (pullback);
    parallel composition takes all pairs; identities and symmetries
    contribute one witness per inhabiting tuple.
    """
    typecheck(net, term)

    def run(t: ProcessTerm) -> list[SpanTableEntry]:
        if isinstance(t, Gen):
            return [
                SpanTableEntry(row.witness, row.inputs, row.outputs, ("w", row.witness))
                for row in guard.rows(t.transition)
            ]
        if isinstance(t, Id):
            return [
                SpanTableEntry(render_path(("unit", x)), x, x, ("unit", x))
                for x in word_tuples(guard, t.word)
            ]
        if isinstance(t, Sym):
            k = len(t.left)
            out = []
            for x in word_tuples(guard, t.left + t.right):
                out.append(
                    SpanTableEntry(render_path(("unit", x)), x, x[k:] + x[:k], ("unit", x))
                )
            return out
        if isinstance(t, Seq):
            left, right = run(t.first), run(t.second)
            out = []
            for e in left:
                for f in right:
                    if e.outputs == f.inputs:
                        path = ("seq", e.path, f.path)
                        out.append(SpanTableEntry(render_path(path), e.inputs, f.outputs, path))
            return out
        left, right = run(t.left), run(t.right)
        out = []
        for e in left:
            for f in right:
                path = ("pair", e.path, f.path)
                out.append(
                    SpanTableEntry(
                        render_path(path), e.inputs + f.inputs, e.outputs + f.outputs, path
                    )
                )
        return out

    return SpanTable(tuple(run(term)))


def collapse_to_relation(table: SpanTable) -> frozenset:
    """The underlying relation: distinct paths between equal tuples conflate."""
    return frozenset((e.inputs, e.outputs) for e in table.entries)


def derived_witness(inputs: ColorTuple) -> str:
    """Deterministic witness name for the graph of a partial map."""
    return ",".join(inputs) if inputs else "*"


def embed_partial_as_span(guard: PartialGuard) -> SpanGuard:
    """The graph of each partial map, one witness per defined input."""
    table = {
        t: tuple(
            SpanArrow(derived_witness(tin), tin, tout) for tin, tout in rows.items()
        )
        for t, rows in guard.table.items()
    }
    return SpanGuard(guard.colors, table)


def partial_table(net: Net, guard: PartialGuard, term: ProcessTerm) -> dict:
    """The full partial map of a term, keyed by every inhabiting input tuple."""
    source, _ = typecheck(net, term)
    out = {}
    for x in word_tuples(guard, source):
        y = eval_partial(net, guard, term, x)
        if y is not None:
            out[x] = y
    return out


def relation_pairs(net: Net, guard: Guard, term: ProcessTerm) -> Counter:
    """Multiset of (inputs, outputs) rows a term denotes, either flavor."""
    if isinstance(guard, PartialGuard):
        return Counter(partial_table(net, guard, term).items())
    return eval_span(net, guard, term).pairs()


def disjoint_union_guarded(a: GuardedNet, b: GuardedNet, tags=("l", "r")) -> GuardedNet:
    """Tagged sum of guarded nets; the guards must share a flavor."""
    from .nets import disjoint_union

    net = disjoint_union(a.net, b.net, tags)
    if a.guard is None and b.guard is None:
        return GuardedNet(net, None)
    if a.kind != b.kind or a.guard is None or b.guard is None:
        raise EvalError(f"cannot join a {a.kind} guard with a {b.kind} guard")
    la, lb = f"{tags[0]}.", f"{tags[1]}."
    colors = {la + p: cs for p, cs in a.guard.colors.items()}
    colors.update({lb + p: cs for p, cs in b.guard.colors.items()})
    if isinstance(a.guard, PartialGuard):
        table = {la + t: rows for t, rows in a.guard.table.items()}
        table.update({lb + t: rows for t, rows in b.guard.table.items()})
        return GuardedNet(net, PartialGuard(colors, table))
    table = {la + t: rows for t, rows in a.guard.table.items()}
    table.update({lb + t: rows for t, rows in b.guard.table.items()})
    return GuardedNet(net, SpanGuard(colors, table))
