"""Process terms: the morphism syntax over a net.

A term denotes a morphism of the free symmetric strict monoidal category
presented by the net: generators (transitions), identities, wire swaps, and
sequential/parallel composition.  Terms are compared structurally only;
deciding semantic equality of terms is out of scope, and evaluation lives in
:mod:`guardnet.guards`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple, Union

from .counts import expand
from .errors import BoundaryError, BundleError
from .nets import Net

Word = Tuple[str, ...]


def _word(items) -> Word:
    return tuple(items)


@dataclass(frozen=True)
class Gen:
    transition: str


@dataclass(frozen=True)
class Id:
    word: Word

    def __post_init__(self):
        object.__setattr__(self, "word", _word(self.word))


@dataclass(frozen=True)
class Sym:
    left: Word
    right: Word

    def __post_init__(self):
        object.__setattr__(self, "left", _word(self.left))
        object.__setattr__(self, "right", _word(self.right))


@dataclass(frozen=True)
class Seq:
    first: "ProcessTerm"
    second: "ProcessTerm"


@dataclass(frozen=True)
class Par:
    left: "ProcessTerm"
    right: "ProcessTerm"


ProcessTerm = Union[Gen, Id, Sym, Seq, Par]

UNIT: Word = ()


def generator_arity(net: Net, name: str) -> tuple[Word, Word]:
    """Source/target words of a generator: sorted linearization of pre/post."""
    t = net.transition(name)
    return expand(t.pre), expand(t.post)


def typecheck(net: Net, term: ProcessTerm) -> tuple[Word, Word]:
    """Unique source/target words, or BoundaryError at the first bad node."""

    def walk(t: ProcessTerm, path: str) -> tuple[Word, Word]:
        if isinstance(t, Gen):
            try:
                return generator_arity(net, t.transition)
            except Exception:
                raise BoundaryError(f"unknown generator {t.transition!r} at {path}") from None
        if isinstance(t, Id):
            return t.word, t.word
        if isinstance(t, Sym):
            return t.left + t.right, t.right + t.left
        if isinstance(t, Seq):
            s1, t1 = walk(t.first, path + ".0")
            s2, t2 = walk(t.second, path + ".1")
            if t1 != s2:
                raise BoundaryError(
                    f"ill-typed composition at {path}: target {list(t1)} != source {list(s2)}"
                )
            return s1, t2
        if isinstance(t, Par):
            s1, t1 = walk(t.left, path + ".0")
            s2, t2 = walk(t.right, path + ".1")
            return s1 + s2, t1 + t2
        raise BoundaryError(f"not a process term at {path}: {t!r}")

    return walk(term, "root")


def seq(net: Net, f: ProcessTerm, g: ProcessTerm) -> Seq:
    """Sequential composite, revalidated (boundary mismatch raises)."""
    out = Seq(f, g)
    typecheck(net, out)
    return out


def par(net: Net, f: ProcessTerm, g: ProcessTerm) -> Par:
    out = Par(f, g)
    typecheck(net, out)
    return out


def apply_permutation(perm: Sequence[int], items: Sequence) -> tuple:
    """Move the element at position i to position ``perm[i]``."""
    out = [None] * len(items)
    for i, target in enumerate(perm):
        out[target] = items[i]
    return tuple(out)


def symmetry_for(perm: Sequence[int], word: Sequence[str]) -> ProcessTerm:
    """A Sym/Par/Id term realizing ``perm`` on ``word``.

    Built as layers of adjacent swaps; the identity permutation yields
    ``Id(word)``.
    """
    word = _word(word)
    n = len(word)
    if sorted(perm) != list(range(n)):
        raise BoundaryError(f"arity mismatch: permutation {list(perm)} on word of length {n}")
    if all(p == i for i, p in enumerate(perm)):
        return Id(word)

    arr = list(range(n))  # arr[j] = source position currently sitting at j
    cur = list(word)
    layers = []
    while True:
        for j in range(n - 1):
            if perm[arr[j]] > perm[arr[j + 1]]:
                layers.append(_adjacent_swap(cur, j))
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                cur[j], cur[j + 1] = cur[j + 1], cur[j]
                break
        else:
            break
    term = layers[0]
    for layer in layers[1:]:
        term = Seq(term, layer)
    return term


def _adjacent_swap(word: Sequence[str], j: int) -> ProcessTerm:
    core: ProcessTerm = Sym((word[j],), (word[j + 1],))
    if j + 2 < len(word):
        core = Par(core, Id(tuple(word[j + 2:])))
    if j > 0:
        core = Par(Id(tuple(word[:j])), core)
    return core


def term_permutation(term: ProcessTerm):
    """The underlying permutation of a Gen-free term, else None."""
    if isinstance(term, Gen):
        return None
    if isinstance(term, Id):
        return list(range(len(term.word)))
    if isinstance(term, Sym):
        la, lb = len(term.left), len(term.right)
        return [i + lb if i < la else i - la for i in range(la + lb)]
    if isinstance(term, Seq):
        pf = term_permutation(term.first)
        pg = term_permutation(term.second)
        if pf is None or pg is None:
            return None
        return [pg[pf[i]] for i in range(len(pf))]
    if isinstance(term, Par):
        pf = term_permutation(term.left)
        pg = term_permutation(term.right)
        if pf is None or pg is None:
            return None
        nf = len(pf)
        return pf + [nf + p for p in pg]
    return None


def count_generators(term: ProcessTerm) -> int:
    if isinstance(term, Gen):
        return 1
    if isinstance(term, (Id, Sym)):
        return 0
    if isinstance(term, Seq):
        return count_generators(term.first) + count_generators(term.second)
    return count_generators(term.left) + count_generators(term.right)


def generators_of(term: ProcessTerm) -> tuple[str, ...]:
    """Generator names occurring in the term, in syntactic order."""
    if isinstance(term, Gen):
        return (term.transition,)
    if isinstance(term, (Id, Sym)):
        return ()
    if isinstance(term, Seq):
        return generators_of(term.first) + generators_of(term.second)
    return generators_of(term.left) + generators_of(term.right)


def term_to_json(term: ProcessTerm) -> list:
    """Wire encoding: nested arrays, e.g. ``["seq", ["gen", "t1"], ...]``."""
    if isinstance(term, Gen):
        return ["gen", term.transition]
    if isinstance(term, Id):
        return ["id", list(term.word)]
    if isinstance(term, Sym):
        return ["sym", list(term.left), list(term.right)]
    if isinstance(term, Seq):
        return ["seq", term_to_json(term.first), term_to_json(term.second)]
    if isinstance(term, Par):
        return ["par", term_to_json(term.left), term_to_json(term.right)]
    raise BundleError(f"not a process term: {term!r}")


def term_from_json(data) -> ProcessTerm:
    if not isinstance(data, list) or not data:
        raise BundleError(f"bad term encoding: {data!r}")
    tag, *rest = data
    if tag == "gen" and len(rest) == 1 and isinstance(rest[0], str):
        return Gen(rest[0])
    if tag == "id" and len(rest) == 1 and isinstance(rest[0], list):
        return Id(tuple(rest[0]))
    if tag == "sym" and len(rest) == 2 and all(isinstance(w, list) for w in rest):
        return Sym(tuple(rest[0]), tuple(rest[1]))
    if tag == "seq" and len(rest) == 2:
        return Seq(term_from_json(rest[0]), term_from_json(rest[1]))
    if tag == "par" and len(rest) == 2:
        return Par(term_from_json(rest[0]), term_from_json(rest[1]))
    raise BundleError(f"bad term encoding: {data!r}")
