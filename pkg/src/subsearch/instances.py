"""JSON documents for search, precedence and tree instances.

Three document shapes are accepted:

* search: ``{"labels", "mode", "f": spec, "g": spec}``
* precedence: ``{"jobs", "edges", "p", "w" | "wA", "h"}``
* tree: ``{"root", "edges": [[u, v, cost], ...], "w"?}``

Oracle specs carry a ``kind`` of ``tabular``, ``modular``, ``dag``, ``tree``,
``subset_weights`` or ``h_of``. Rationals are written as ``"p/q"`` strings.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .density import SearchInstance
from .numeric import FLOAT, RATIONAL, bits, check_mode, format_value, parse_value
from .sched import (
    ClosureCost,
    PrecedenceInstance,
    RootedTree,
    SubsetWeights,
    TreeCost,
    h_from_json,
    search_instance,
)
from .setfn import (
    ComposedFunction,
    GroundSet,
    ModularFunction,
    SetFunction,
    TabularFunction,
)


class DocumentError(ValueError):
    pass


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(doc) -> str:
    return hashlib.sha256(canonical_dumps(doc).encode()).hexdigest()


def loads(text: str) -> dict:
    """Parse a JSON document; syntax errors report line and column."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        lines = text.splitlines()
        line = lines[exc.lineno - 1] if exc.lineno <= len(lines) else ""
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}\n  {line}") from None
    if not isinstance(doc, dict):
        raise DocumentError("instance document must be a JSON object")
    return doc


def document_kind(doc: dict) -> str:
    if "f" in doc:
        return "search"
    if "jobs" in doc or "p" in doc:
        return "precedence"
    if "root" in doc:
        return "tree"
    raise DocumentError("cannot tell the document kind: expected 'f', 'jobs' or 'root'")


# --- parsing ----------------------------------------------------------------------

def _values(raw, mode):
    return [parse_value(v, mode) for v in raw]


def _doc_mode(doc, default=RATIONAL) -> str:
    return check_mode(doc.get("mode", default))


def function_from_spec(spec: dict, ground: GroundSet, mode: str) -> SetFunction:
    kind = spec.get("kind")
    if kind == "tabular":
        return TabularFunction(ground, _values(spec["values"], mode), mode, spec.get("props", ()))
    if kind == "modular":
        return ModularFunction(ground, _values(spec["weights"], mode), mode)
    if kind == "dag":
        inst = PrecedenceInstance(
            p=_values(spec["p"], mode),
            edges=[(ground.index(_label(s)), ground.index(_label(t))) for s, t in spec.get("edges", [])],
            w=[1] * ground.n,
            h=h_from_json(spec.get("h")),
            labels=ground.labels,
        )
        return ClosureCost(inst, mode if inst.h.exact else FLOAT)
    if kind == "tree":
        tree = RootedTree(_label(spec["root"]), [(_label(u), _label(v), parse_value(c, mode))
                                                  for u, v, c in spec["edges"]])
        f = TreeCost(tree, mode)
        if f.ground.labels != ground.labels:
            raise DocumentError(f"tree elements {f.ground.labels} do not match labels {ground.labels}")
        return f
    if kind == "subset_weights":
        weights = {}
        for item in spec["weights"]:
            m = ground.mask(_label(x) for x in item["set"])
            weights[m] = weights.get(m, 0) + parse_value(item["w"], mode)
        return SubsetWeights(ground, weights, mode)
    if kind == "h_of":
        inner = function_from_spec(spec["inner"], ground, mode)
        return ComposedFunction(h_from_json(spec.get("h")), inner)
    raise DocumentError(f"unknown oracle kind {kind!r}")


def _label(x) -> str:
    return str(x)


def search_from_doc(doc: dict, validate: bool = True) -> SearchInstance:
    mode = _doc_mode(doc)
    if "labels" in doc:
        ground = GroundSet(tuple(doc["labels"]))
    elif "n" in doc:
        ground = GroundSet.of_size(int(doc["n"]))
    else:
        raise DocumentError("search document needs 'labels' or 'n'")
    if "n" in doc and int(doc["n"]) != ground.n:
        raise DocumentError(f"'n' = {doc['n']} disagrees with {ground.n} labels")
    f = function_from_spec(doc["f"], ground, mode)
    g = function_from_spec(doc["g"], ground, mode)
    return SearchInstance(f, g, validate=validate)


def precedence_from_doc(doc: dict) -> PrecedenceInstance:
    jobs = tuple(_label(j) for j in doc.get("jobs", range(1, len(doc["p"]) + 1)))
    index = {j: i for i, j in enumerate(jobs)}
    mode = _doc_mode(doc)

    def idx(j):
        try:
            return index[_label(j)]
        except KeyError:
            raise DocumentError(f"unknown job {j!r}") from None

    w = wA = None
    if "w" in doc:
        w = _values(doc["w"], mode)
    elif "wA" in doc:
        wA = {}
        for item in doc["wA"]:
            m = 0
            for j in item["set"]:
                m |= 1 << idx(j)
            wA[m] = wA.get(m, 0) + parse_value(item["w"], mode)
    return PrecedenceInstance(
        p=_values(doc["p"], mode),
        edges=[(idx(s), idx(t)) for s, t in doc.get("edges", [])],
        w=w,
        wA=wA,
        h=h_from_json(doc.get("h")),
        labels=jobs,
    )


def tree_from_doc(doc: dict):
    """``(tree, f, g)``; ``g`` is modular from ``w`` (by element label) or uniform."""
    mode = _doc_mode(doc)
    tree = RootedTree(_label(doc["root"]), [(_label(u), _label(v), parse_value(c, mode))
                                           for u, v, c in doc["edges"]])
    f = TreeCost(tree, mode)
    if "w" in doc:
        raw = doc["w"]
        if isinstance(raw, dict):
            weights = [parse_value(raw[_label(e)], mode) for e in tree.elements]
        else:
            weights = _values(raw, mode)
    else:
        weights = [Fraction(1, f.n) if mode == RATIONAL else 1.0 / f.n] * f.n
    return tree, f, ModularFunction(f.ground, weights, mode)


def instance_from_doc(doc: dict, validate: bool = True) -> SearchInstance:
    """Any document shape as a search instance."""
    kind = document_kind(doc)
    if kind == "search":
        return search_from_doc(doc, validate)
    if kind == "precedence":
        return search_instance(precedence_from_doc(doc), validate=validate)
    _, f, g = tree_from_doc(doc)
    return SearchInstance(f, g, validate=validate)


# --- serialization ------------------------------------------------------------------

def _fmt(vals) -> list:
    return [format_value(v) for v in vals]


def function_to_spec(f: SetFunction) -> dict:
    """Structured spec where the oracle kind has one; tabular otherwise."""
    labels = f.ground.labels
    if isinstance(f, ModularFunction):
        return {"kind": "modular", "weights": _fmt(f.weights)}
    if isinstance(f, ClosureCost):
        inst = f.inst
        return {
            "kind": "dag",
            "p": _fmt(inst.p),
            "edges": [[labels[s], labels[t]] for s, t in inst.edges],
            "h": inst.h.to_json(),
        }
    if isinstance(f, TreeCost):
        t = f.tree
        return {"kind": "tree", "root": t.root, "edges": [[u, v, format_value(c)] for u, v, c in t.edges]}
    if isinstance(f, SubsetWeights):
        return {
            "kind": "subset_weights",
            "weights": [{"set": f.ground.names(m), "w": format_value(w)} for m, w in sorted(f.weights.items())],
        }
    if isinstance(f, ComposedFunction):
        return {"kind": "h_of", "h": f.h.to_json(), "inner": function_to_spec(f.inner)}
    return {"kind": "tabular", "values": _fmt(f.table())}


def search_to_doc(inst: SearchInstance) -> dict:
    return {
        "labels": list(inst.ground.labels),
        "mode": inst.mode,
        "f": function_to_spec(inst.f),
        "g": function_to_spec(inst.g),
    }


def precedence_to_doc(inst: PrecedenceInstance) -> dict:
    labels = inst.labels
    doc = {
        "jobs": list(labels),
        "edges": [[labels[s], labels[t]] for s, t in inst.edges],
        "p": _fmt(inst.p),
        "h": inst.h.to_json(),
        "mode": inst.mode,
    }
    if inst.w is not None:
        doc["w"] = _fmt(inst.w)
    else:
        doc["wA"] = [{"set": [labels[j] for j in bits(m)], "w": format_value(w)}
                     for m, w in sorted(inst.wA.items())]
    return doc


def tree_to_doc(tree: RootedTree, weights=None, mode: str = RATIONAL) -> dict:
    doc = {"root": tree.root, "edges": [[u, v, format_value(c)] for u, v, c in tree.edges], "mode": mode}
    if weights is not None:
        doc["w"] = {e: format_value(w) for e, w in zip(tree.elements, weights)}
    return doc
