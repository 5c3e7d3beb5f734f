"""JSON instance specs for Ramsey searches and indicator computations.

Parsing is strict: unknown keys, wrong types and out-of-range values raise
``SpecError`` carrying a JSON-path to the offending field.

Instance layout::

    {
      "family":     {"kind": "K" | "P", "offset": 0}
                  | {"kind": "explicit", "graphs": [GRAPH, ...], "first_index": 0},
      "alphabet":   [label, ...] | {"by_index": {"i": [label, ...]}, "default": [...]},
      "admissible": {"kind": "maximal", "values": [...]?}
                  | {"kind": "explicit", "by_index": {"i": [[label per edge], ...]}}
                  | {"kind": "generated", "by_index": {"i": {"forced": {"edge": label}, "values": [...]?}}},
      "symbol":     {"uniform": true, "targets": [TARGET, ...]}
                  | {"uniform": false, "by_index": {"i": [TARGET, ...]}, "default": [TARGET, ...]},
      "field":      {"p": 2, "k": 1}?,
      "horizon":    8?
    }

    GRAPH  = {"family": "K", "n": 3} | {"family": "P", "t": 2} | {"vertices": 4, "edges": [[0, 1], ...]}
    TARGET = {"graph": GRAPH, "coloring": {"constant": label} | {"values": [label per edge]}}

Indicator layout::

    {"host": GRAPH, "field": {"p": 2, "k": 1}, "targets": [TARGET, ...]}

where indicator labels are field elements: an integer code or a list of
coefficients.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional

from .finite_field import FieldElement, FieldSpec, field, prime_power
from .graph_core import Graph, GraphFamily, complete_family, complete_graph, explicit_family, hereditary_violation, path_family, path_graph
from .indicator import ColoredTarget, IndicatorExpr, build_indicator
from .ramsey_engine import MAXIMAL, Admissible, RamseyBase, RamseySymbol

__all__ = ["SpecError", "Instance", "load_json", "parse_instance", "parse_graph", "parse_indicator", "parse_field"]


class SpecError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


@dataclass
class Instance:
    base: RamseyBase
    symbol: RamseySymbol
    horizon: Optional[int]
    raw: dict


def load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SpecError("$", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SpecError("$", f"invalid JSON at line {exc.lineno}: {exc.msg}") from None


def _obj(data, path, required=(), optional=()):
    if not isinstance(data, dict):
        raise SpecError(path, "expected an object")
    extra = set(data) - set(required) - set(optional)
    if extra:
        raise SpecError(f"{path}.{sorted(extra)[0]}", "unknown field")
    for k in required:
        if k not in data:
            raise SpecError(f"{path}.{k}", "missing required field")
    return data


def _int(v, path, lo=None):
    if isinstance(v, bool) or not isinstance(v, int):
        raise SpecError(path, "expected an integer")
    if lo is not None and v < lo:
        raise SpecError(path, f"must be >= {lo}")
    return v


def _list(v, path):
    if not isinstance(v, list):
        raise SpecError(path, "expected a list")
    return v


def _label(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise SpecError(path, "labels must be integers or strings")
    return v


def _by_index(data, path, parse_one, default_ok=True):
    """{"by_index": {"i": X}, "default": X} -> callable i -> X (raises on a gap)."""
    _obj(data, path, ["by_index"], ["default"] if default_ok else [])
    table = {}
    if not isinstance(data["by_index"], dict):
        raise SpecError(f"{path}.by_index", "expected an object keyed by index")
    for key, val in data["by_index"].items():
        try:
            i = int(key)
        except ValueError:
            raise SpecError(f"{path}.by_index.{key}", "index keys must be integers") from None
        table[i] = parse_one(val, f"{path}.by_index.{key}")
    default = parse_one(data["default"], f"{path}.default") if "default" in data else None

    def at(i):
        if i in table:
            return table[i]
        if default is None:
            raise SpecError(f"{path}.by_index", f"no entry for index {i} and no default")
        return default

    return at, table, default


def parse_field(data, path="$.field") -> FieldSpec:
    _obj(data, path, ["p"], ["k", "modulus"])
    p = _int(data["p"], f"{path}.p", 2)
    k = _int(data.get("k", 1), f"{path}.k", 1)
    if prime_power(p) != (p, 1):
        raise SpecError(f"{path}.p", f"{p} is not prime")
    try:
        return FieldSpec.from_json({"p": p, "k": k, **({"modulus": data["modulus"]} if "modulus" in data else {})})
    except ValueError as exc:
        raise SpecError(path, str(exc)) from None


def parse_graph(data, path) -> Graph:
    if isinstance(data, dict) and "family" in data:
        kind = data["family"]
        if kind == "K":
            _obj(data, path, ["family", "n"])
            return complete_graph(_int(data["n"], f"{path}.n", 1))
        if kind == "P":
            _obj(data, path, ["family", "t"])
            return path_graph(_int(data["t"], f"{path}.t", 1))
        raise SpecError(f"{path}.family", f"unknown graph family {kind!r}")
    _obj(data, path, ["vertices"], ["edges"])
    n = _int(data["vertices"], f"{path}.vertices", 0)
    edges = []
    for e, pair in enumerate(_list(data.get("edges", []), f"{path}.edges")):
        ep = f"{path}.edges[{e}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise SpecError(ep, "an edge is a pair of vertices")
        edges.append((_int(pair[0], ep), _int(pair[1], ep)))
    try:
        return Graph(n, tuple(edges))
    except ValueError as exc:
        raise SpecError(path, str(exc)) from None


def _target(data, path, label) -> ColoredTarget:
    _obj(data, path, ["graph", "coloring"])
    X = parse_graph(data["graph"], f"{path}.graph")
    col = data["coloring"]
    cp = f"{path}.coloring"
    if isinstance(col, dict) and "constant" in col:
        _obj(col, cp, ["constant"])
        return ColoredTarget.monochromatic(X, label(col["constant"], f"{cp}.constant"))
    _obj(col, cp, ["values"])
    vals = _list(col["values"], f"{cp}.values")
    if len(vals) != X.edge_count:
        raise SpecError(f"{cp}.values", f"{len(vals)} values for {X.edge_count} edges")
    return ColoredTarget(X, tuple(label(v, f"{cp}.values[{n}]") for n, v in enumerate(vals)))


def _targets(data, path, label) -> tuple:
    return tuple(_target(t, f"{path}[{n}]", label) for n, t in enumerate(_list(data, path)))


def _family(data, path) -> GraphFamily:
    _obj(data, path, ["kind"], ["offset", "graphs", "first_index"])
    kind = data["kind"]
    if kind in ("K", "P"):
        _obj(data, path, ["kind"], ["offset"])
        off = _int(data.get("offset", 0), f"{path}.offset", 0)
        return complete_family(off) if kind == "K" else path_family(off)
    if kind == "explicit":
        _obj(data, path, ["kind", "graphs"], ["first_index"])
        graphs = [parse_graph(g, f"{path}.graphs[{n}]") for n, g in enumerate(_list(data["graphs"], f"{path}.graphs"))]
        if not graphs:
            raise SpecError(f"{path}.graphs", "needs at least one graph")
        first = _int(data.get("first_index", 0), f"{path}.first_index", 0)
        fam = explicit_family(graphs, first)
        bad = hereditary_violation(fam, fam.indices(fam.last_index))
        if bad:
            raise SpecError(path, f"family is not hereditary: member {bad[0]} does not embed in member {bad[1]}")
        return fam
    raise SpecError(f"{path}.kind", f"unknown family kind {kind!r}")


def _alphabet(data, path):
    def one(v, p):
        labels = tuple(_label(x, f"{p}[{n}]") for n, x in enumerate(_list(v, p)))
        if len(set(labels)) != len(labels):
            raise SpecError(p, "alphabet labels must be distinct")
        if not labels:
            raise SpecError(p, "alphabet must be nonempty")
        return labels

    if isinstance(data, list):
        return one(data, path)
    at, _, _ = _by_index(data, path, one)
    return at


def _admissible(data, path):
    _obj(data, path, ["kind"], ["values", "by_index", "default"])
    kind = data["kind"]

    def values(v, p):
        return tuple(_label(x, f"{p}[{n}]") for n, x in enumerate(_list(v, p)))

    if kind == "maximal":
        _obj(data, path, ["kind"], ["values"])
        return Admissible.maximal(values(data["values"], f"{path}.values")) if "values" in data else MAXIMAL
    rest = {k: v for k, v in data.items() if k != "kind"}
    if kind == "explicit":
        def one(v, p):
            return Admissible.explicit([values(c, f"{p}[{n}]") for n, c in enumerate(_list(v, p))])
    elif kind == "generated":
        def one(v, p):
            _obj(v, p, ["forced"], ["values"])
            forced = {}
            if not isinstance(v["forced"], dict):
                raise SpecError(f"{p}.forced", "expected an object keyed by edge id")
            for key, lab in v["forced"].items():
                try:
                    e = int(key)
                except ValueError:
                    raise SpecError(f"{p}.forced.{key}", "edge keys must be integers") from None
                forced[e] = _label(lab, f"{p}.forced.{key}")
            vals = values(v["values"], f"{p}.values") if "values" in v else None
            return Admissible.generated(forced, vals)
    else:
        raise SpecError(f"{path}.kind", f"unknown admissible kind {kind!r}")
    at, _, _ = _by_index(rest, path, one)
    return at


def _symbol(data, path) -> RamseySymbol:
    _obj(data, path, ["uniform"], ["targets", "by_index", "default"])
    if not isinstance(data["uniform"], bool):
        raise SpecError(f"{path}.uniform", "expected true or false")
    if data["uniform"]:
        _obj(data, path, ["uniform", "targets"])
        return RamseySymbol(_targets(data["targets"], f"{path}.targets", _label), True)
    rest = {k: v for k, v in data.items() if k != "uniform"}
    at, _, _ = _by_index(rest, path, lambda v, p: _targets(v, p, _label))
    return RamseySymbol(at, False)


def parse_instance(data) -> Instance:
    _obj(data, "$", ["family", "alphabet", "symbol"], ["admissible", "field", "horizon"])
    family = _family(data["family"], "$.family")
    alphabet = _alphabet(data["alphabet"], "$.alphabet")
    admissible = _admissible(data["admissible"], "$.admissible") if "admissible" in data else MAXIMAL
    fld = parse_field(data["field"]) if "field" in data else None
    symbol = _symbol(data["symbol"], "$.symbol")
    horizon = _int(data["horizon"], "$.horizon", 0) if "horizon" in data else None
    if fld is not None and not callable(alphabet) and len(alphabet) > fld.q:
        raise SpecError("$.field", f"{len(alphabet)} labels do not fit in GF({fld.q})")
    return Instance(RamseyBase(family, alphabet, admissible, fld), symbol, horizon, data)


def field_label(F: FieldSpec):
    def label(v, path):
        try:
            if isinstance(v, bool):
                raise ValueError
            if isinstance(v, int):
                return F.element(v)
            if isinstance(v, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in v):
                if len(v) != F.k or any(not 0 <= c < F.p for c in v):
                    raise ValueError
                return F(v)
        except ValueError:
            pass
        raise SpecError(path, f"not an element of GF({F.q}): give a code 0..{F.q - 1} or {F.k} coefficients")

    return label


def parse_indicator(data) -> IndicatorExpr:
    _obj(data, "$", ["host", "field", "targets"])
    host = parse_graph(data["host"], "$.host")
    F = parse_field(data["field"])
    targets = _targets(data["targets"], "$.targets", field_label(F))
    return build_indicator(host, targets, F)


def parse_coloring(text: str, expr: IndicatorExpr) -> tuple:
    """Comma-separated element codes, one per host edge."""
    parts = [s for s in text.replace(" ", "").split(",") if s]
    label = field_label(expr.field)
    try:
        vals = [int(s) for s in parts]
    except ValueError:
        raise SpecError("--coloring", "expected comma-separated integers") from None
    if len(vals) != expr.host.edge_count:
        raise SpecError("--coloring", f"{len(vals)} values for {expr.host.edge_count} edges")
    return tuple(label(v, f"--coloring[{n}]") for n, v in enumerate(vals))
