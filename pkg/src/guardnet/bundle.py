"""The bundle file format: one JSON document holding a net, its guard, and
named markings.

Bundles are the unit of exchange for the CLI and the service.  Serialization
is deterministic (sorted keys, multisets as sorted lists with repetition)
and ``save`` then ``load`` gives back an equal bundle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Union

from .counts import expand
from .errors import BundleError, InvalidNetError
from .guards import (
    GuardedNet,
    Guard,
    PartialGuard,
    SpanArrow,
    SpanGuard,
    guard_kind,
    validate_guard,
)
from .internalize import ColoredMarking, Projection
from .nets import Marking, Net, Transition, validate
from .terms import term_from_json, term_to_json
from .transform import NetFunctor

FORMAT_VERSION = 1

AnyMarking = Union[Marking, ColoredMarking]


@dataclass
class Bundle:
    net: Net
    colors: Mapping[str, tuple] = field(default_factory=dict)
    guard: Optional[Guard] = None
    markings: Mapping[str, AnyMarking] = field(default_factory=dict)
    projection: Optional[Projection] = None
    version: int = FORMAT_VERSION

    @property
    def kind(self) -> str:
        return guard_kind(self.guard)

    def guarded(self) -> GuardedNet:
        return GuardedNet(self.net, self.guard)

    @classmethod
    def from_guarded(cls, guarded: GuardedNet, markings=None, projection=None) -> "Bundle":
        colors = dict(guarded.guard.colors) if guarded.guard is not None else {}
        return cls(guarded.net, colors, guarded.guard, dict(markings or {}), projection)

    def marking(self, name: str) -> AnyMarking:
        if name not in self.markings:
            known = ", ".join(sorted(self.markings)) or "(none)"
            raise BundleError(f"unknown marking {name!r}; bundle defines: {known}")
        return self.markings[name]


def _expect(cond: bool, where: str, message: str) -> None:
    if not cond:
        raise BundleError(f"{where}: {message}")


def _str_list(value, where: str) -> list[str]:
    _expect(isinstance(value, list) and all(isinstance(x, str) for x in value), where, "expected a list of strings")
    return value


def marking_to_dict(m: AnyMarking) -> dict:
    if isinstance(m, ColoredMarking):
        return {"kind": "colored", "tokens": [[p, c] for p, c in m.tokens()]}
    return {"kind": "plain", "tokens": list(m.tokens())}


def marking_from_dict(data, where: str) -> AnyMarking:
    _expect(isinstance(data, dict), where, "expected an object")
    kind = data.get("kind")
    _expect(kind in ("plain", "colored"), f"{where}.kind", "expected 'plain' or 'colored'")
    tokens = data.get("tokens", [])
    _expect(isinstance(tokens, list), f"{where}.tokens", "expected a list")
    if kind == "plain":
        return Marking.of(*_str_list(tokens, f"{where}.tokens"))
    pairs = []
    for i, tok in enumerate(tokens):
        _expect(
            isinstance(tok, list) and len(tok) == 2 and all(isinstance(x, str) for x in tok),
            f"{where}.tokens[{i}]",
            "expected a [place, color] pair",
        )
        pairs.append((tok[0], tok[1]))
    return ColoredMarking.of(*pairs)


def net_to_dict(net: Net, colors: Mapping[str, tuple]) -> dict:
    return {
        "places": [{"id": p, "colors": list(colors.get(p, ()))} for p in net.places],
        "transitions": [
            {"id": t.name, "pre": list(expand(t.pre)), "post": list(expand(t.post))}
            for t in net.transitions
        ],
    }


def net_from_dict(data, where: str = "net") -> tuple[Net, dict]:
    _expect(isinstance(data, dict), where, "expected an object")
    places = []
    colors = {}
    raw_places = data.get("places", [])
    _expect(isinstance(raw_places, list), f"{where}.places", "expected a list")
    for i, entry in enumerate(raw_places):
        pwhere = f"{where}.places[{i}]"
        _expect(isinstance(entry, dict) and isinstance(entry.get("id"), str), pwhere, "expected {'id': ...}")
        places.append(entry["id"])
        colors[entry["id"]] = tuple(_str_list(entry.get("colors", []), f"{pwhere}.colors"))
    transitions = []
    raw_transitions = data.get("transitions", [])
    _expect(isinstance(raw_transitions, list), f"{where}.transitions", "expected a list")
    for i, entry in enumerate(raw_transitions):
        twhere = f"{where}.transitions[{i}]"
        _expect(isinstance(entry, dict) and isinstance(entry.get("id"), str), twhere, "expected {'id': ...}")
        transitions.append(
            Transition.of(
                entry["id"],
                _str_list(entry.get("pre", []), f"{twhere}.pre"),
                _str_list(entry.get("post", []), f"{twhere}.post"),
            )
        )
    return Net(tuple(places), tuple(transitions)), colors


def _guard_to_dict(guard: Optional[Guard]) -> dict:
    if guard is None:
        return {"kind": "none"}
    if isinstance(guard, PartialGuard):
        return {
            "kind": "partial",
            "tables": {
                t: [{"in": list(k), "out": list(v)} for k, v in rows.items()]
                for t, rows in guard.table.items()
                if rows
            },
        }
    return {
        "kind": "span",
        "tables": {
            t: [{"witness": r.witness, "in": list(r.inputs), "out": list(r.outputs)} for r in rows]
            for t, rows in guard.table.items()
            if rows
        },
    }


def _guard_from_dict(data, colors: dict, where: str) -> Optional[Guard]:
    if data is None:
        return None
    _expect(isinstance(data, dict), where, "expected an object")
    kind = data.get("kind", "none")
    _expect(kind in ("partial", "span", "none"), f"{where}.kind", "expected partial|span|none")
    if kind == "none":
        _expect("tables" not in data, f"{where}.tables", "a guard of kind none carries no tables")
        return None
    tables = data.get("tables", {})
    _expect(isinstance(tables, dict), f"{where}.tables", "expected an object")
    if kind == "partial":
        table = {}
        for t, rows in tables.items():
            twhere = f"{where}.tables.{t}"
            _expect(isinstance(rows, list), twhere, "expected a list of rows")
            mapping = {}
            for i, row in enumerate(rows):
                rwhere = f"{twhere}[{i}]"
                _expect(isinstance(row, dict), rwhere, "expected an object")
                tin = tuple(_str_list(row.get("in", []), f"{rwhere}.in"))
                tout = tuple(_str_list(row.get("out", []), f"{rwhere}.out"))
                _expect(tin not in mapping, rwhere, f"duplicate input tuple {list(tin)} (the table must be single-valued)")
                mapping[tin] = tout
            table[t] = mapping
        return PartialGuard(colors, table)
    table = {}
    for t, rows in tables.items():
        twhere = f"{where}.tables.{t}"
        _expect(isinstance(rows, list), twhere, "expected a list of rows")
        arrows = []
        for i, row in enumerate(rows):
            rwhere = f"{twhere}[{i}]"
            _expect(isinstance(row, dict) and isinstance(row.get("witness"), str), rwhere, "expected {'witness': ...}")
            arrows.append(
                SpanArrow(
                    row["witness"],
                    tuple(_str_list(row.get("in", []), f"{rwhere}.in")),
                    tuple(_str_list(row.get("out", []), f"{rwhere}.out")),
                )
            )
        table[t] = tuple(arrows)
    return SpanGuard(colors, table)


def projection_to_dict(projection: Projection) -> dict:
    transitions = {}
    for name, (base, payload) in sorted(projection.transition_map.items()):
        if isinstance(payload, str):
            transitions[name] = {"transition": base, "witness": payload}
        else:
            transitions[name] = {"transition": base, "payload": list(payload)}
    return {"places": dict(sorted(projection.place_map.items())), "transitions": transitions}


def projection_from_dict(data, where: str = "projection") -> Projection:
    _expect(isinstance(data, dict), where, "expected an object")
    places = data.get("places", {})
    _expect(isinstance(places, dict), f"{where}.places", "expected an object")
    place_map = {}
    place_color = {}
    for name, base in places.items():
        _expect(isinstance(base, str), f"{where}.places.{name}", "expected a string")
        place_map[name] = base
        suffix = name[len(base) + 1:] if name.startswith(base + "@") else name
        place_color[name] = (base, suffix)
    transition_map = {}
    raw = data.get("transitions", {})
    _expect(isinstance(raw, dict), f"{where}.transitions", "expected an object")
    for name, entry in raw.items():
        twhere = f"{where}.transitions.{name}"
        _expect(isinstance(entry, dict) and isinstance(entry.get("transition"), str), twhere, "expected {'transition': ...}")
        if "witness" in entry:
            _expect(isinstance(entry["witness"], str), f"{twhere}.witness", "expected a string")
            transition_map[name] = (entry["transition"], entry["witness"])
        else:
            payload = tuple(_str_list(entry.get("payload", []), f"{twhere}.payload"))
            transition_map[name] = (entry["transition"], payload)
    return Projection(place_map, place_color, transition_map)


def bundle_to_dict(bundle: Bundle) -> dict:
    out = {
        "format_version": bundle.version,
        "net": net_to_dict(bundle.net, bundle.colors),
        "guard": _guard_to_dict(bundle.guard),
    }
    if bundle.markings:
        out["markings"] = {
            name: marking_to_dict(m) for name, m in sorted(bundle.markings.items())
        }
    if bundle.projection is not None:
        out["projection"] = projection_to_dict(bundle.projection)
    return out


_TOP_KEYS = {"format_version", "net", "guard", "markings", "projection"}


def bundle_from_dict(data, check: bool = True) -> Bundle:
    _expect(isinstance(data, dict), "bundle", "expected a JSON object")
    unknown = set(data) - _TOP_KEYS
    _expect(not unknown, "bundle", f"unknown sections: {sorted(unknown)}")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise BundleError(
            f"format_version: expected {FORMAT_VERSION}, found {version!r}"
        )
    _expect("net" in data, "bundle", "missing net section")
    net, colors = net_from_dict(data["net"])
    guard = _guard_from_dict(data.get("guard"), colors, "guard")
    markings = {}
    raw_markings = data.get("markings") or {}
    _expect(isinstance(raw_markings, dict), "markings", "expected an object")
    for name, entry in raw_markings.items():
        markings[name] = marking_from_dict(entry, f"markings.{name}")
    projection = None
    if data.get("projection") is not None:
        projection = projection_from_dict(data["projection"])
    bundle = Bundle(net, colors, guard, markings, projection)
    if check:
        diags = diagnose_bundle(bundle)
        if diags:
            raise InvalidNetError(diags)
    return bundle


def diagnose_bundle(bundle: Bundle) -> list[str]:
    """Cross-validation diagnostics for a parsed bundle."""
    diags = validate(bundle.net)
    if bundle.guard is not None:
        diags += validate_guard(bundle.net, bundle.guard)
    for name, m in sorted(bundle.markings.items()):
        if isinstance(m, ColoredMarking):
            for (place, color), _ in m.counts:
                if not bundle.net.has_place(place):
                    diags.append(f"marking {name!r}: unknown place {place!r}")
                elif color not in bundle.colors.get(place, ()):
                    diags.append(
                        f"marking {name!r}: color {color!r} not in colors of place {place!r}"
                    )
        else:
            for place, _ in m.counts:
                if not bundle.net.has_place(place):
                    diags.append(f"marking {name!r}: unknown place {place!r}")
    return diags


def load_bundle(path, check: bool = True) -> Bundle:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise BundleError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BundleError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return bundle_from_dict(data, check=check)


def save_bundle(bundle: Bundle, path) -> None:
    Path(path).write_text(dumps_bundle(bundle), encoding="utf-8")


def dumps_bundle(bundle: Bundle) -> str:
    return json.dumps(bundle_to_dict(bundle), indent=2, sort_keys=True) + "\n"


def functor_to_dict(functor: NetFunctor) -> dict:
    return {
        "object_map": {p: list(w) for p, w in functor.object_map.items()},
        "morphism_map": {t: term_to_json(term) for t, term in functor.morphism_map.items()},
    }


def functor_from_dict(data, source: Net, target: Net, where: str = "functor") -> NetFunctor:
    _expect(isinstance(data, dict), where, "expected an object")
    raw_obj = data.get("object_map", {})
    _expect(isinstance(raw_obj, dict), f"{where}.object_map", "expected an object")
    object_map = {
        p: tuple(_str_list(w, f"{where}.object_map.{p}")) for p, w in raw_obj.items()
    }
    raw_mor = data.get("morphism_map", {})
    _expect(isinstance(raw_mor, dict), f"{where}.morphism_map", "expected an object")
    morphism_map = {t: term_from_json(encoded) for t, encoded in raw_mor.items()}
    return NetFunctor(source, target, object_map, morphism_map)
