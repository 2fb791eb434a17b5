"""The space document format: a JSON tree describing a finite preordered space.

    {
      "name": "ordered_circle",
      "points": ["m", "l", "r", "t"],
      "topology": {"relations": [["m", "l"], ...]},
      "direction": {"mode": "explicit", "relations": [["m", "l"], ...]},
      "subset": ["m", "t"]
    }

``subset`` is optional and turns the document into a pair (X, A).  Relation
pairs generate the relations; both are closed on load.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .spaces import FinitePreorderedSpace, InputError, PairSpace, bits, make_pair, validate

TOP_FIELDS = ("name", "points", "topology", "direction", "subset")
REQUIRED = ("name", "points", "topology", "direction")
MODES = ("explicit", "discrete", "indiscrete")


class DocumentError(InputError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None, source: str = "<document>"):
        self.line, self.column, self.source = line, column, source
        where = f"{source}:{line}:{column}: " if line is not None else f"{source}: "
        super().__init__(where + message)


@dataclass
class SpaceDocument:
    name: str
    points: list[str]
    topology: list[tuple[str, str]]
    mode: str = "explicit"
    direction: list[tuple[str, str]] = dc_field(default_factory=list)
    subset: list[str] | None = None

    def to_space(self) -> FinitePreorderedSpace:
        return validate(self.points, self.topology, self.direction, self.mode)

    def to_pair(self) -> PairSpace:
        return make_pair(self.to_space(), self.subset or ())

    def to_tree(self) -> dict:
        tree: dict = {
            "name": self.name,
            "points": list(self.points),
            "topology": {"relations": [list(p) for p in self.topology]},
            "direction": {"mode": self.mode},
        }
        if self.mode == "explicit":
            tree["direction"]["relations"] = [list(p) for p in self.direction]
        if self.subset is not None:
            tree["subset"] = list(self.subset)
        return tree


def _locate(text: str, key: str) -> tuple[int | None, int | None]:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    if not m:
        return None, None
    line = text.count("\n", 0, m.start()) + 1
    col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    return line, col


def _pairs(value, what: str, text: str, source: str) -> list[tuple[str, str]]:
    if not isinstance(value, list):
        raise DocumentError(f"{what} must be a list of pairs", *_locate(text, "relations"), source)
    out = []
    for pr in value:
        if not (isinstance(pr, list) and len(pr) == 2 and all(isinstance(p, str) for p in pr)):
            raise DocumentError(f"{what} entry {pr!r} is not a pair of point ids", *_locate(text, "relations"), source)
        out.append((pr[0], pr[1]))
    return out


def _strings(value, key: str, text: str, source: str) -> list[str]:
    if not (isinstance(value, list) and all(isinstance(p, str) for p in value)):
        raise DocumentError(f"{key!r} must be a list of strings", *_locate(text, key), source)
    return list(value)


def parse(text: str, source: str = "<document>") -> SpaceDocument:
    """Parse and validate a document; errors carry line and column where known."""
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno, source) from None
    if not isinstance(tree, dict):
        raise DocumentError("top level must be an object", 1, 1, source)
    for key in tree:
        if key not in TOP_FIELDS:
            raise DocumentError(f"unknown field {key!r}", *_locate(text, key), source)
    for key in REQUIRED:
        if key not in tree:
            raise DocumentError(f"missing field {key!r}", None, None, source)
    if not isinstance(tree["name"], str):
        raise DocumentError("'name' must be a string", *_locate(text, "name"), source)
    points = _strings(tree["points"], "points", text, source)

    topo = tree["topology"]
    if not isinstance(topo, dict):
        raise DocumentError("'topology' must be an object", *_locate(text, "topology"), source)
    for key in topo:
        if key != "relations":
            raise DocumentError(f"unknown field {key!r} in topology", *_locate(text, key), source)
    if "relations" not in topo:
        raise DocumentError("topology needs 'relations'", *_locate(text, "topology"), source)
    topo_pairs = _pairs(topo["relations"], "topology relations", text, source)

    d = tree["direction"]
    if not isinstance(d, dict):
        raise DocumentError("'direction' must be an object", *_locate(text, "direction"), source)
    for key in d:
        if key not in ("mode", "relations"):
            raise DocumentError(f"unknown field {key!r} in direction", *_locate(text, key), source)
    mode = d.get("mode")
    if mode not in MODES:
        raise DocumentError(f"direction mode must be one of {', '.join(MODES)}, got {mode!r}",
                            *_locate(text, "mode"), source)
    if mode == "explicit" and "relations" not in d:
        raise DocumentError("explicit direction needs 'relations'", *_locate(text, "direction"), source)
    if mode != "explicit" and "relations" in d:
        raise DocumentError(f"direction mode {mode!r} takes no 'relations'", *_locate(text, "relations"), source)
    dir_pairs = _pairs(d.get("relations", []), "direction relations", text, source)

    subset = None
    if "subset" in tree:
        subset = _strings(tree["subset"], "subset", text, source)
        known = set(points)
        for p in subset:
            if p not in known:
                raise DocumentError(f"unknown point id {p!r} in subset", *_locate(text, "subset"), source)

    doc = SpaceDocument(tree["name"], points, topo_pairs, mode, dir_pairs, subset)
    try:
        doc.to_space()
    except InputError as exc:
        raise DocumentError(str(exc), None, None, source) from None
    return doc


def _dump(v) -> str:
    return json.dumps(v, ensure_ascii=False)


def _pair_block(pairs, indent: str) -> str:
    if not pairs:
        return "[]"
    rows = ",\n".join(f"{indent}  {_dump(list(p))}" for p in pairs)
    return f"[\n{rows}\n{indent}]"


def serialize(doc: SpaceDocument) -> str:
    """Canonical text: one relation pair per line, everything else compact."""
    lines = [
        "{",
        f'  "name": {_dump(doc.name)},',
        f'  "points": {_dump(list(doc.points))},',
        f'  "topology": {{"relations": {_pair_block(doc.topology, "  ")}}},',
    ]
    direction = f'  "direction": {{"mode": {_dump(doc.mode)}'
    if doc.mode == "explicit":
        direction += f', "relations": {_pair_block(doc.direction, "  ")}'
    direction += "}"
    if doc.subset is not None:
        lines += [direction + ",", f'  "subset": {_dump(list(doc.subset))}']
    else:
        lines.append(direction)
    lines.append("}")
    return "\n".join(lines) + "\n"


def load(path: str | Path) -> SpaceDocument:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read: {exc.strerror}", None, None, str(p)) from None
    return parse(text, str(p))


# ---------------------------------------------------------------- export


def _covers(x: FinitePreorderedSpace, up: list[int]) -> list[tuple[str, str]]:
    """Generating pairs for a preorder: a cycle per equivalence class, covers between classes."""
    n = len(x)
    down = [0] * n
    for i in range(n):
        for j in bits(up[i]):
            down[j] |= 1 << i
    classes = []
    rep = {}
    for i in range(n):
        if i in rep:
            continue
        members = bits(up[i] & down[i])
        for j in members:
            rep[j] = i
        classes.append(members)
    pts = x.points
    out = []
    for members in classes:
        if len(members) > 1:
            for a, b in zip(members, members[1:] + members[:1]):
                out.append((pts[a], pts[b]))
    reps = [m[0] for m in classes]
    for a in reps:
        above = up[a] & ~(up[a] & down[a])
        for b in reps:
            if not above >> b & 1:
                continue
            between = above & ~(up[b] & down[b]) & down[b]
            if not between:
                out.append((pts[a], pts[b]))
    return out


def from_space(name: str, x: FinitePreorderedSpace, subset=None) -> SpaceDocument:
    mode = x.dir_mode()
    if mode == "indiscrete" and len(x) <= 1:
        mode = "discrete"
    direction = _covers(x, list(x.dir_up)) if mode == "explicit" else []
    sub = None if subset is None else x.ordered(x.mask(subset))
    return SpaceDocument(name, list(x.points), _covers(x, list(x.topo_up)), mode, direction, sub)


def from_pair(name: str, p: PairSpace) -> SpaceDocument:
    return from_space(name, p.space, p.subset)
