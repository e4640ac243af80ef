"""Shipped example nets, used by the CLI demos, the check suites, and tests.

The same four guarded nets exist both as builders here and as bundle files
under ``guardnet/data``; a test pins the two representations against each
other so the shipped files cannot drift.
"""

from __future__ import annotations

from importlib import resources

import json

from .bundle import Bundle, bundle_from_dict
from .guards import GuardedNet, PartialGuard, SpanArrow, SpanGuard
from .internalize import ColoredMarking
from .nets import Marking, Net
from .terms import Gen, Seq
from .transform import NetFunctor

FIXTURE_NAMES = ("A", "B", "C", "D")

_CHAIN_NET = Net.build(
    ["P1", "P2", "P3"],
    [("t1", ["P1"], ["P2"]), ("t2", ["P2"], ["P3"])],
)

_CHAIN_COLORS = {
    "P1": ("blue", "red"),
    "P2": ("green", "yellow"),
    "P3": ("brown", "orange", "purple"),
}

_THREE_STEP_NET = Net.build(
    ["X", "Y", "Z"],
    [("f", ["X"], ["Y"]), ("g", ["Y"], ["Z"])],
)

_THREE_STEP_COLORS = {"X": ("x",), "Y": ("y1", "y2"), "Z": ("z",)}


def fixture_a() -> GuardedNet:
    """Two-step pipeline with a deterministic guard whose composite is empty."""
    guard = PartialGuard(
        _CHAIN_COLORS,
        {
            "t1": {("blue",): ("green",), ("red",): ("green",)},
            "t2": {("yellow",): ("purple",)},
        },
    )
    return GuardedNet(_CHAIN_NET, guard)


def fixture_b() -> GuardedNet:
    """The same pipeline with witness-indexed rows, two of them parallel."""
    guard = SpanGuard(
        _CHAIN_COLORS,
        {
            "t1": (
                SpanArrow("s1", ("blue",), ("green",)),
                SpanArrow("s2", ("red",), ("green",)),
                SpanArrow("s3", ("red",), ("green",)),
            ),
            "t2": (
                SpanArrow("z1", ("yellow",), ("brown",)),
                SpanArrow("z2", ("yellow",), ("purple",)),
            ),
        },
    )
    return GuardedNet(_CHAIN_NET, guard)


def fixture_c() -> GuardedNet:
    """Maximal relations as spans: two distinct witness paths end into one pair."""
    guard = SpanGuard(
        _THREE_STEP_COLORS,
        {
            "f": (
                SpanArrow("w1", ("x",), ("y1",)),
                SpanArrow("w2", ("x",), ("y2",)),
            ),
            "g": (
                SpanArrow("v1", ("y1",), ("z",)),
                SpanArrow("v2", ("y2",), ("z",)),
            ),
        },
    )
    return GuardedNet(_THREE_STEP_NET, guard)


def fixture_d() -> GuardedNet:
    """Deterministic guard where one branch color is only produced by nobody."""
    guard = PartialGuard(
        _THREE_STEP_COLORS,
        {
            "f": {("x",): ("y1",)},
            "g": {("y1",): ("z",), ("y2",): ("z",)},
        },
    )
    return GuardedNet(_THREE_STEP_NET, guard)


_BUILDERS = {"A": fixture_a, "B": fixture_b, "C": fixture_c, "D": fixture_d}


def fixture(name: str) -> GuardedNet:
    return _BUILDERS[name.upper()]()


def fixture_markings(name: str) -> dict:
    name = name.upper()
    if name in ("A", "B"):
        return {
            "red": ColoredMarking.of(("P1", "red")),
            "blue": ColoredMarking.of(("P1", "blue")),
            "green": ColoredMarking.of(("P2", "green")),
            "purple": ColoredMarking.of(("P3", "purple")),
            "p1": Marking.of("P1"),
            "p3": Marking.of("P3"),
            "p1p3": Marking.of("P1", "P3"),
        }
    return {
        "start": ColoredMarking.of(("X", "x")),
        "goal": ColoredMarking.of(("Z", "z")),
        "y2": ColoredMarking.of(("Y", "y2")),
        "x": Marking.of("X"),
        "z": Marking.of("Z"),
    }


def fixture_bundle(name: str) -> Bundle:
    return Bundle.from_guarded(fixture(name), fixture_markings(name))


def shipped_bundle(name: str) -> Bundle:
    """Load the committed data file for a fixture."""
    text = (
        resources.files("guardnet").joinpath(f"data/fixture_{name.lower()}.json").read_text("utf-8")
    )
    return bundle_from_dict(json.loads(text))


def fixture_path(name: str):
    """Filesystem path of the shipped bundle (for CLI invocations)."""
    return resources.files("guardnet").joinpath(f"data/fixture_{name.lower()}.json")


def sync_result() -> GuardedNet:
    """The one-transition net a synchronization of fixture D produces."""
    net = Net.build(["X", "Y", "Z"], [("fg", ["X"], ["Z"])])
    guard = PartialGuard(_THREE_STEP_COLORS, {"fg": {("x",): ("z",)}})
    return GuardedNet(net, guard)


def sync_functor() -> NetFunctor:
    """The guarded morphism sending the fused generator to the composite."""
    src = sync_result().net
    dst = fixture_d().net
    return NetFunctor(
        src,
        dst,
        {"X": ("X",), "Y": ("Y",), "Z": ("Z",)},
        {"fg": Seq(Gen("f"), Gen("g"))},
    )


def sync_witness() -> tuple[Net, NetFunctor]:
    """The surgery witness (net and functor) fusing f;g in fixture D."""
    w_net = Net.build(["X", "Z"], [("fg", ["X"], ["Z"])])
    along = NetFunctor(
        w_net,
        fixture_d().net,
        {"X": ("X",), "Z": ("Z",)},
        {"fg": Seq(Gen("f"), Gen("g"))},
    )
    return w_net, along
