"""Deterministic DOT rendering: places as circles, transitions as boxes.

When a bundle carries a projection (a compiled net), its places are grouped
into one cluster per base place.  Output is byte-identical across runs.
"""

from __future__ import annotations

from collections import defaultdict

from .bundle import Bundle
from .counts import Counts


def _quote(name: str) -> str:
    escaped = name.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _arc_lines(name: str, side: Counts, out: list[str], incoming: bool) -> None:
    for place, n in side:
        label = f" [label={n}]" if n > 1 else ""
        if incoming:
            out.append(f"  {_quote(place)} -> {_quote(name)}{label};")
        else:
            out.append(f"  {_quote(name)} -> {_quote(place)}{label};")


def export_dot(bundle: Bundle) -> str:
    """Render a bundle (plain, guarded, or compiled-with-projection)."""
    lines = ["digraph net {", "  rankdir=LR;"]
    if bundle.projection is not None:
        groups = defaultdict(list)
        for place in bundle.net.places:
            groups[bundle.projection.place_map.get(place, place)].append(place)
        for idx, base in enumerate(sorted(groups)):
            lines.append(f"  subgraph cluster_{idx} {{")
            lines.append(f"    label={_quote(base)};")
            for place in sorted(groups[base]):
                lines.append(f"    {_quote(place)} [shape=circle];")
            lines.append("  }")
    else:
        for place in bundle.net.places:
            lines.append(f"  {_quote(place)} [shape=circle];")
    for t in bundle.net.transitions:
        lines.append(f"  {_quote(t.name)} [shape=box];")
    for t in bundle.net.transitions:
        _arc_lines(t.name, t.pre, lines, incoming=True)
        _arc_lines(t.name, t.post, lines, incoming=False)
    lines.append("}")
    return "\n".join(lines) + "\n"
