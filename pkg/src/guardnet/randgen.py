"""Seeded generators for randomized property-suite instances.

Everything takes an explicit ``random.Random`` so suites are reproducible;
sizes stay at desk scale (a few places, colors, and transitions).
"""

from __future__ import annotations

import itertools
import random
from typing import Optional

from .counts import expand
from .guards import GuardedNet, PartialGuard, SpanArrow, SpanGuard
from .internalize import ColoredMarking
from .nets import Net, Transition
from .terms import Gen, Id, Par, Seq, symmetry_for, typecheck
from .transform import NetFunctor

_PALETTE = ("c1", "c2", "c3", "c4")


def random_guarded_net(
    rng: random.Random,
    kind: Optional[str] = None,
    max_places: int = 4,
    max_colors: int = 4,
    max_transitions: int = 4,
    empty_color_chance: float = 0.1,
) -> GuardedNet:
    n_places = rng.randint(1, max_places)
    places = [f"p{i + 1}" for i in range(n_places)]
    colors = {}
    for p in places:
        if rng.random() < empty_color_chance:
            colors[p] = ()
        else:
            size = rng.randint(1, max_colors)
            colors[p] = tuple(sorted(rng.sample(_PALETTE, size)))

    transitions = []
    for i in range(rng.randint(1, max_transitions)):
        pre = tuple(rng.choice(places) for _ in range(rng.randint(0, 2)))
        post = tuple(rng.choice(places) for _ in range(rng.randint(0, 2)))
        transitions.append(Transition.of(f"t{i + 1}", pre, post))
    net = Net(tuple(places), tuple(transitions))

    kind = kind or rng.choice(("partial", "span"))
    if kind == "partial":
        table = {}
        for t in net.transitions:
            rows = {}
            for tin in _input_space(colors, t):
                tout = _random_output(rng, colors, t)
                if tout is not None and rng.random() < 0.6:
                    rows[tin] = tout
            table[t.name] = rows
        return GuardedNet(net, PartialGuard(colors, table))

    table = {}
    for t in net.transitions:
        arrows = []
        k = 0
        for tin in _input_space(colors, t):
            for _ in range(rng.choice((0, 1, 1, 2))):
                tout = _random_output(rng, colors, t)
                if tout is None:
                    continue
                k += 1
                arrows.append(SpanArrow(f"s{k}", tin, tout))
        table[t.name] = tuple(arrows)
    return GuardedNet(net, SpanGuard(colors, table))


def _input_space(colors, t: Transition):
    return itertools.product(*(colors[p] for p in expand(t.pre)))


def _random_output(rng, colors, t: Transition):
    out = []
    for p in expand(t.post):
        if not colors[p]:
            return None
        out.append(rng.choice(colors[p]))
    return tuple(out)


def random_colored_marking(rng: random.Random, guarded: GuardedNet, max_tokens: int = 3) -> ColoredMarking:
    pool = [
        (p, c)
        for p in guarded.net.places
        for c in guarded.guard.colors.get(p, ())
    ]
    if not pool:
        return ColoredMarking.of()
    tokens = tuple(rng.choice(pool) for _ in range(rng.randint(0, max_tokens)))
    return ColoredMarking.of(*tokens)


def random_renaming(rng: random.Random, guarded: GuardedNet) -> tuple[NetFunctor, GuardedNet]:
    """An order-preserving renaming, which is always a guarded morphism."""
    prefix = f"q{rng.randint(1, 9)}."
    net = guarded.net
    renamed = Net(
        tuple(prefix + p for p in net.places),
        tuple(
            Transition(
                prefix + t.name,
                tuple((prefix + p, n) for p, n in t.pre),
                tuple((prefix + p, n) for p, n in t.post),
            )
            for t in net.transitions
        ),
    )
    colors = {prefix + p: cs for p, cs in guarded.guard.colors.items()}
    if isinstance(guarded.guard, PartialGuard):
        guard = PartialGuard(colors, {prefix + t: rows for t, rows in guarded.guard.table.items()})
    else:
        guard = SpanGuard(colors, {prefix + t: rows for t, rows in guarded.guard.table.items()})
    functor = NetFunctor(
        net,
        renamed,
        {p: (prefix + p,) for p in net.places},
        {t: Gen(prefix + t) for t in net.transition_names},
    )
    return functor, GuardedNet(renamed, guard)


def random_identification(rng: random.Random):
    """An identification instance: clone a place or a transition, then merge."""
    base = random_guarded_net(rng)
    net, guard = base.net, base.guard
    if rng.random() < 0.5:
        victim = rng.choice(net.places)
        clone = f"{victim}.dup"
        bigger = Net(net.places + (clone,), net.transitions)
        colors = dict(guard.colors)
        colors[clone] = colors[victim]
        guard = type(guard)(colors, guard.table)
        merged = GuardedNet(bigger, guard)
        witness = Net((f"o.{victim}",), ())
        left = NetFunctor(witness, bigger, {f"o.{victim}": (victim,)}, {})
        right = NetFunctor(witness, bigger, {f"o.{victim}": (clone,)}, {})
        return witness, left, right, merged

    t = rng.choice(net.transitions)
    clone_name = f"{t.name}.dup"
    bigger = Net(net.places, net.transitions + (Transition(clone_name, t.pre, t.post),))
    table = dict(guard.table)
    table[clone_name] = table.get(t.name, {} if isinstance(guard, PartialGuard) else ())
    guard = type(guard)(guard.colors, table)
    merged = GuardedNet(bigger, guard)
    support = sorted({p for p, _ in t.pre} | {p for p, _ in t.post})
    witness = Net(tuple(f"o.{p}" for p in support), (Transition(
        "o.h",
        tuple((f"o.{p}", n) for p, n in t.pre),
        tuple((f"o.{p}", n) for p, n in t.post),
    ),))
    object_map = {f"o.{p}": (p,) for p in support}
    left = NetFunctor(witness, bigger, object_map, {"o.h": Gen(t.name)})
    right = NetFunctor(witness, bigger, object_map, {"o.h": Gen(clone_name)})
    return witness, left, right, merged


def random_image_term(rng: random.Random, guarded: GuardedNet):
    """A random well-typed term over the net, biased toward composites."""
    net = guarded.net
    if not net.transitions:
        return None
    shape = rng.choice(("gen", "seq", "seq", "par"))
    if shape == "seq":
        pairs = [
            (a, b)
            for a in net.transitions
            for b in net.transitions
            if expand(a.post) == expand(b.pre)
        ]
        if pairs:
            a, b = rng.choice(pairs)
            return Seq(Gen(a.name), Gen(b.name))
        shape = "gen"
    if shape == "par":
        t = rng.choice(net.transitions)
        spectator = rng.choice(net.places)
        return Par(Gen(t.name), Id((spectator,)))
    return Gen(rng.choice(net.transitions).name)


def _sorted_boundaries(net: Net, term):
    """Wrap a term in symmetries so its boundary words are sorted.

    Generator pre/post linearizations are sorted, so a new transition
    defined by this image has matching boundaries under an identity object
    map.
    """
    src, tgt = typecheck(net, term)
    order_src = sorted(range(len(src)), key=lambda i: (src[i], i))
    sorted_src = tuple(src[i] for i in order_src)
    if sorted_src != src:
        term = Seq(symmetry_for(list(order_src), sorted_src), term)
    order_tgt = sorted(range(len(tgt)), key=lambda i: (tgt[i], i))
    alpha = [0] * len(tgt)
    for j, i in enumerate(order_tgt):
        alpha[i] = j
    if alpha != list(range(len(tgt))):
        term = Seq(term, symmetry_for(alpha, tgt))
    return term


def random_addition(rng: random.Random):
    """An addition instance: fresh generators defined by image terms."""
    base = random_guarded_net(rng)
    additions = []
    for i in range(rng.randint(1, 2)):
        term = random_image_term(rng, base)
        if term is not None:
            additions.append((f"add{i + 1}", _sorted_boundaries(base.net, term)))
    transitions = []
    morphism_map = {}
    for name, term in additions:
        src, tgt = typecheck(base.net, term)
        transitions.append(Transition.of(name, src, tgt))
        morphism_map[name] = term
    w_net = Net(base.net.places, tuple(transitions))
    along = NetFunctor(w_net, base.net, {p: (p,) for p in base.net.places}, morphism_map)
    return base, w_net, along


def random_erasure(rng: random.Random):
    base = random_guarded_net(rng)
    names = list(base.net.transition_names)
    victims = tuple(sorted(rng.sample(names, rng.randint(0, len(names)))))
    return base, victims
