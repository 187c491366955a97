"""JSON readers and writers for the command-line tool.

Formats::

    poset      {"n": 3, "relations": [[1, 2], [2, 3]]}
    partition  {"blocks": [[1, 3], [2]]}
    reverse    {"n": 5, "reverse": [[2, 1], [3, 1]]}
    digraph    {"n": 4, "arcs": [[1, 2], [2, 1]]}
    network    {"skeleton": {"n": 2, "arcs": [[1, 2]]},
                "modules": [{"size": 5, "target": "10"}, {"size": 3, "reverse": [[2, 1]]}]}

A path of ``-`` reads standard input. Counts are written as decimal strings.
"""

from __future__ import annotations

import json
import sys
from typing import Any

from .errors import ParseError
from .netbuild import ModuleSpec, NetworkSpec
from .poset import Poset, hasse_covers
from .tournament import Digraph, ReverseEdgeSet


def load_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(", ", ": "))


def _field(doc, key, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"missing field {key!r}")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise ParseError(f"field {key!r} has the wrong type")
    return value


def _pairs(raw, key):
    if not isinstance(raw, list):
        raise ParseError(f"{key!r} must be a list of pairs")
    out = []
    for item in raw:
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, int) for x in item)):
            raise ParseError(f"bad pair {item!r} in {key!r}")
        out.append((item[0], item[1]))
    return out


def _count(raw) -> int:
    if isinstance(raw, bool):
        raise ParseError("count must be an integer")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str) and raw.strip().isdigit():
        return int(raw)
    raise ParseError(f"bad count {raw!r}")


def parse_poset(doc) -> Poset:
    n = _field(doc, "n", int)
    return Poset(n, _pairs(doc.get("relations", []), "relations"))


def poset_to_doc(P: Poset) -> dict:
    return {"n": P.n, "relations": [list(p) for p in sorted(hasse_covers(P))]}


def parse_partition(doc) -> list[list[int]]:
    blocks = _field(doc, "blocks", list)
    if not all(isinstance(b, list) and all(isinstance(x, int) for x in b) for b in blocks):
        raise ParseError("blocks must be lists of integers")
    return blocks


def parse_reverse(doc) -> ReverseEdgeSet:
    n = _field(doc, "n", int)
    return ReverseEdgeSet(n, frozenset(_pairs(doc.get("reverse", []), "reverse")))


def parse_digraph(doc) -> Digraph:
    n = _field(doc, "n", int)
    return Digraph(n, frozenset(_pairs(doc.get("arcs", []), "arcs")))


def digraph_to_doc(G: Digraph) -> dict:
    return {"n": G.n, "arcs": [list(a) for a in sorted(G.arcs)]}


def parse_network(doc) -> NetworkSpec:
    skeleton = parse_digraph(_field(doc, "skeleton", dict))
    modules = []
    for m in _field(doc, "modules", list):
        size = _field(m, "size", int)
        if "reverse" in m:
            modules.append(ModuleSpec(size, reverse=ReverseEdgeSet(size, frozenset(_pairs(m["reverse"], "reverse")))))
        else:
            modules.append(ModuleSpec(size, target=_count(_field(m, "target"))))
    return NetworkSpec(skeleton, tuple(modules))
