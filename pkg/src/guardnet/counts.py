"""Canonical finite multisets, stored as sorted ``(key, count)`` tuples.

Markings, pre/post sets, and colored token bags all share this
representation: it is hashable, ordered, and iterates deterministically.
"""

from __future__ import annotations

from collections import Counter
from typing import Hashable, Iterable, Mapping, Tuple

Counts = Tuple[Tuple[Hashable, int], ...]

EMPTY: Counts = ()


def freeze(counter: Mapping) -> Counts:
    """Canonical sorted tuple, dropping zero counts."""
    for key, n in counter.items():
        if n < 0:
            raise ValueError(f"negative multiplicity for {key!r}")
    return tuple(sorted((k, n) for k, n in counter.items() if n > 0))


def from_items(items: Iterable[Hashable]) -> Counts:
    """Multiset of the given occurrences (duplicates accumulate)."""
    return freeze(Counter(items))


def thaw(counts: Counts) -> Counter:
    return Counter(dict(counts))


def add(a: Counts, b: Counts) -> Counts:
    return freeze(thaw(a) + thaw(b))


def subtract(a: Counts, b: Counts) -> Counts:
    """``a - b``; raises ValueError unless ``b <= a``."""
    out = thaw(a)
    out.subtract(thaw(b))
    return freeze(out)


def leq(a: Counts, b: Counts) -> bool:
    """Multiset inclusion ``a <= b``."""
    bc = thaw(b)
    return all(n <= bc[k] for k, n in a)


def size(a: Counts) -> int:
    return sum(n for _, n in a)


def expand(a: Counts) -> tuple:
    """Sorted occurrence list with repetition (the canonical linearization)."""
    out = []
    for key, n in a:
        out.extend([key] * n)
    return tuple(out)


def keys(a: Counts) -> tuple:
    return tuple(k for k, _ in a)
