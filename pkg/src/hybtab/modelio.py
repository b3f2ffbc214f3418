"""Text and JSON exchange formats for finite models.

Text format, one declaration per line (``;`` also separates declarations,
``#`` starts a comment)::

    kind dproduct            # optional; inferred from r2@ lines otherwise
    worlds1 x0 x1
    worlds2 y0 y1
    r1 x0 x1
    r2 y0 y1                 # product models
    r2@x1 y0 y1              # dependent product models
    val p1 x1 y1
    nom i1 x0
    nom a1 y0
    designated x0 y0         # optional
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Any

from .semantics import KripkeDProduct, KripkeProduct, Model, ModelError, WorldPair


class ModelFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _sorted_pairs(rel) -> list[list[str]]:
    return [list(p) for p in sorted(rel)]


def dump_text(m: Model, designated: tuple[str, str] | None = None) -> str:
    lines = [f"kind {m.kind}", "worlds1 " + " ".join(m.w1), "worlds2 " + " ".join(m.w2)]
    lines += [f"r1 {a} {b}" for a, b in sorted(m.r1)]
    if isinstance(m, KripkeProduct):
        lines += [f"r2 {a} {b}" for a, b in sorted(m.r2)]
    else:
        for x in m.w1:
            lines += [f"r2@{x} {a} {b}" for a, b in sorted(m.r2_at(x))]
    for p in sorted(m.val):
        lines += [f"val {p} {x} {y}" for x, y in sorted(m.val[p])]
        if not m.val[p]:
            lines.append(f"val {p}")
    lines += [f"nom {n} {x}" for n, x in sorted(m.nom1.items())]
    lines += [f"nom {n} {y}" for n, y in sorted(m.nom2.items())]
    if designated is not None:
        lines.append(f"designated {designated[0]} {designated[1]}")
    return "\n".join(lines) + "\n"


def parse_text(text: str) -> tuple[Model, WorldPair | None]:
    kind = None
    w1: list[str] = []
    w2: list[str] = []
    r1: set = set()
    r2: set = set()
    r2d: dict[str, set] = {}
    val: dict[str, set] = {}
    nom1: dict[str, str] = {}
    nom2: dict[str, str] = {}
    designated = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        for decl in raw.split("#", 1)[0].split(";"):
            words = decl.split()
            if not words:
                continue
            head, args = words[0], words[1:]

            def need(n: int) -> None:
                if len(args) != n:
                    raise ModelFormatError(f"{head} takes {n} arguments, got {len(args)}", lineno)

            if head == "kind":
                need(1)
                if args[0] not in ("product", "dproduct"):
                    raise ModelFormatError(f"unknown kind {args[0]!r}", lineno)
                kind = args[0]
            elif head == "worlds1":
                w1 += args
            elif head == "worlds2":
                w2 += args
            elif head == "r1":
                need(2)
                r1.add(tuple(args))
            elif head == "r2":
                need(2)
                r2.add(tuple(args))
            elif head.startswith("r2@"):
                need(2)
                r2d.setdefault(head[3:], set()).add(tuple(args))
            elif head == "val":
                if len(args) not in (1, 3):
                    raise ModelFormatError("val takes a proposition and optionally a pair", lineno)
                cells = val.setdefault(args[0], set())
                if len(args) == 3:
                    cells.add((args[1], args[2]))
            elif head == "nom":
                need(2)
                name = args[0]
                if name[:1] == "i":
                    nom1[name] = args[1]
                elif name[:1] == "a":
                    nom2[name] = args[1]
                else:
                    raise ModelFormatError(f"{name!r} is not a nominal", lineno)
            elif head == "designated":
                need(2)
                designated = WorldPair(*args)
            else:
                raise ModelFormatError(f"unknown declaration {head!r}", lineno)
    if kind is None:
        kind = "dproduct" if r2d else "product"
    if kind == "product" and r2d:
        raise ModelFormatError("r2@ declarations in a product model")
    if kind == "dproduct" and r2:
        raise ModelFormatError("plain r2 declarations in a dependent product model")
    common = dict(
        w1=tuple(w1), w2=tuple(w2), r1=frozenset(r1),
        val={p: frozenset(c) for p, c in val.items()}, nom1=nom1, nom2=nom2,
    )
    try:
        if kind == "product":
            m: Model = KripkeProduct(r2=frozenset(r2), **common)
        else:
            m = KripkeDProduct(r2={x: frozenset(r) for x, r in r2d.items()}, **common)
    except ModelError as e:
        raise ModelFormatError(str(e)) from None
    if designated is not None and (designated.x not in m.w1 or designated.y not in m.w2):
        raise ModelFormatError(f"designated pair {tuple(designated)} is not in the model")
    return m, designated


def to_json(m: Model, designated: tuple[str, str] | None = None) -> dict[str, Any]:
    out: dict[str, Any] = {
        "kind": m.kind,
        "worlds1": list(m.w1),
        "worlds2": list(m.w2),
        "r1": _sorted_pairs(m.r1),
    }
    if isinstance(m, KripkeProduct):
        out["r2"] = _sorted_pairs(m.r2)
    else:
        out["r2"] = {x: _sorted_pairs(m.r2_at(x)) for x in m.w1}
    out["val"] = {p: _sorted_pairs(m.val[p]) for p in sorted(m.val)}
    out["nom1"] = dict(sorted(m.nom1.items()))
    out["nom2"] = dict(sorted(m.nom2.items()))
    if designated is not None:
        out["designated"] = list(designated)
    return out


def from_json(data: dict[str, Any]) -> tuple[Model, WorldPair | None]:
    try:
        common = dict(
            w1=tuple(data["worlds1"]), w2=tuple(data["worlds2"]),
            r1=frozenset(map(tuple, data["r1"])),
            val={p: frozenset(map(tuple, c)) for p, c in data.get("val", {}).items()},
            nom1=dict(data.get("nom1", {})), nom2=dict(data.get("nom2", {})),
        )
        if data["kind"] == "product":
            m: Model = KripkeProduct(r2=frozenset(map(tuple, data["r2"])), **common)
        else:
            m = KripkeDProduct(
                r2={x: frozenset(map(tuple, r)) for x, r in data["r2"].items()}, **common
            )
    except (KeyError, TypeError, AttributeError) as e:
        raise ModelFormatError(f"malformed model JSON: {e}") from None
    except ModelError as e:
        raise ModelFormatError(str(e)) from None
    d = data.get("designated")
    return m, WorldPair(*d) if d else None


def load_schema(name: str) -> dict[str, Any]:
    """One of the bundled JSON schemas: ``model``, ``trace_record`` or ``result``."""
    return json.loads(resources.files("hybtab.schemas").joinpath(f"{name}.schema.json").read_text())
