import json

import pytest

from genramsey.finite_field import field
from genramsey.graph_core import complete_graph, path_graph
from genramsey.indicator import evaluate
from genramsey.instance import SpecError, parse_graph, parse_indicator, parse_instance
from genramsey.ramsey_engine import classical_instance, ramsey_number

R33 = {
    "family": {"kind": "K", "offset": 0},
    "alphabet": [0, 1],
    "admissible": {"kind": "maximal"},
    "symbol": {
        "uniform": True,
        "targets": [
            {"graph": {"family": "K", "n": 3}, "coloring": {"constant": 0}},
            {"graph": {"family": "K", "n": 3}, "coloring": {"constant": 1}},
        ],
    },
    "field": {"p": 2, "k": 1},
    "horizon": 8,
}


def with_(base, path, value):
    data = json.loads(json.dumps(base))
    cur = data
    for key in path[:-1]:
        cur = cur[key]
    cur[path[-1]] = value
    return data


def test_r33_spec_matches_classical():
    inst = parse_instance(R33)
    a = ramsey_number(inst.base, inst.symbol, inst.horizon).to_json()
    b = ramsey_number(*classical_instance([3, 3]), horizon=8).to_json()
    assert a == b


def test_graph_refs():
    assert parse_graph({"family": "K", "n": 4}, "$") == complete_graph(4)
    assert parse_graph({"family": "P", "t": 2}, "$") == path_graph(2)
    assert parse_graph({"vertices": 3, "edges": [[0, 1], [1, 2]]}, "$") == path_graph(2)


@pytest.mark.parametrize(
    "path,value,where",
    [
        (["colour"], 1, "$.colour"),
        (["family", "kind"], "Q", "$.family.kind"),
        (["alphabet"], [0, 0], "$.alphabet"),
        (["alphabet"], [0, 1.5], "$.alphabet[1]"),
        (["symbol", "targets", 0, "coloring"], {"values": [0, 1]}, "$.symbol.targets[0].coloring.values"),
        (["symbol", "targets", 1, "graph"], {"family": "K", "n": 0}, "$.symbol.targets[1].graph.n"),
        (["admissible"], {"kind": "maximal", "extra": 1}, "$.admissible.extra"),
        (["field"], {"p": 4}, "$.field.p"),
        (["horizon"], -1, "$.horizon"),
        (["alphabet"], [0, 1, 2], "$.field"),
    ],
)
def test_strict_errors_carry_paths(path, value, where):
    with pytest.raises(SpecError) as err:
        parse_instance(with_(R33, path, value))
    assert err.value.path == where


def test_non_hereditary_family_names_pair():
    spec = with_(R33, ["family"], {"kind": "explicit", "graphs": [{"family": "K", "n": 3}, {"family": "P", "t": 3}]})
    with pytest.raises(SpecError, match="member 0 does not embed in member 1"):
        parse_instance(spec)


def test_by_index_alphabet_and_explicit_admissible():
    spec = with_(R33, ["alphabet"], {"by_index": {"2": [0, 1, 2]}, "default": [0, 1]})
    spec["admissible"] = {"kind": "explicit", "by_index": {"2": [[0], [1]]}, "default": [[0, 0, 0]]}
    spec.pop("field")
    inst = parse_instance(spec)
    assert inst.base.alphabet_at(2) == (0, 1, 2) and inst.base.alphabet_at(5) == (0, 1)
    assert inst.base.admissible_at(2).colorings == ((0,), (1,))


def test_generated_admissible_and_nonuniform_symbol():
    spec = with_(R33, ["admissible"], {"kind": "generated", "by_index": {"3": {"forced": {"0": 1}}}, "default": {"forced": {}}})
    spec["symbol"] = {
        "uniform": False,
        "by_index": {"3": [{"graph": {"family": "K", "n": 2}, "coloring": {"constant": 1}}]},
        "default": [],
    }
    inst = parse_instance(spec)
    rep = ramsey_number(inst.base, inst.symbol, 4)
    assert rep.arrows_trace == [False, False, True, False]


def test_indicator_spec():
    spec = {
        "host": {"family": "K", "n": 4},
        "field": {"p": 2},
        "targets": [{"graph": {"family": "K", "n": 3}, "coloring": {"constant": c}} for c in (0, 1)],
    }
    expr = parse_indicator(spec)
    F = field(2)
    assert evaluate(expr, tuple(F.element(v) for v in (1, 1, 0, 0, 1, 0))) == F.one
    bad = json.loads(json.dumps(spec))
    bad["targets"][0]["coloring"]["constant"] = 2
    with pytest.raises(SpecError) as err:
        parse_indicator(bad)
    assert err.value.path == "$.targets[0].coloring.constant"
    gf4 = json.loads(json.dumps(spec))
    gf4["field"] = {"p": 2, "k": 2}
    gf4["targets"][1]["coloring"] = {"constant": [0, 1]}
    assert parse_indicator(gf4).targets[1].colors[0] == field(2, 2).element(2)
