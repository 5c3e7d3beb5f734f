"""Ramsey bases and symbols, the arrows predicate and horizon-bounded Ramsey numbers.

Two backends decide ``arrows`` at an index:

* ``direct`` scans every admissible coloring and looks for a colored target
  under some embedding by comparing colors;
* ``algebraic`` injects the alphabet into GF(q), builds the indicator
  polynomial and searches for an admissible point where it does not vanish.

``ramsey_number`` runs both over ``first_index..horizon`` and refuses to
continue if they disagree.  A value is reported as ``exact`` only for
maximal bases over a fixed alphabet with a uniform symbol and a hereditary
family, where arrows is monotone in the index; every other answer is
conditional on the horizon.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field, replace
from typing import Callable, Hashable, Mapping, Optional, Sequence, Union

import numpy as np

from .colorings import (
    DEFAULT_SCAN_BOUND,
    AllColorings,
    ColoringSource,
    ExplicitColorings,
    GeneratedColorings,
    all_failures,
    first_failure,
)
from .finite_field import FieldElement, FieldSpec, all_elements, inject_alphabet, prime_power, smallest_field_for
from .graph_core import (
    EmbeddingMap,
    Graph,
    GraphFamily,
    complete_family,
    complete_graph,
    disjoint_union,
    embedding_edge_array,
    enumerate_embeddings,
    has_embedding,
    hereditary_violation,
)
from .indicator import ColoredTarget, InconsistencyError, build_indicator, evaluate_rows, find_nonvanishing

log = logging.getLogger(__name__)

__all__ = [
    "Admissible",
    "MAXIMAL",
    "RamseyBase",
    "RamseySymbol",
    "ArrowsResult",
    "SearchReport",
    "NotHereditaryError",
    "arrows",
    "find_match",
    "ramsey_number",
    "classify",
    "resolve",
    "resolution_invariance_check",
    "embed_alphabet",
    "classical_instance",
    "label_to_json",
]


class NotHereditaryError(ValueError):
    def __init__(self, a: int, b: int):
        super().__init__(f"family member {a} does not embed in member {b}")
        self.pair = (a, b)


@dataclass(frozen=True)
class Admissible:
    """Admissible colorings S_i of one host, described over alphabet labels.

    maximal:   every coloring with values in ``values`` (default: the alphabet)
    explicit:  the listed colorings
    generated: ``forced`` edge values, every other edge free over ``values``
    """

    kind: str
    values: Optional[tuple] = None
    colorings: tuple = ()
    forced: tuple = ()

    def __post_init__(self):
        if self.kind not in ("maximal", "explicit", "generated"):
            raise ValueError(f"unknown admissible kind {self.kind!r}")

    @classmethod
    def maximal(cls, values=None) -> "Admissible":
        return cls("maximal", None if values is None else tuple(values))

    @classmethod
    def explicit(cls, colorings) -> "Admissible":
        return cls("explicit", colorings=tuple(tuple(c) for c in colorings))

    @classmethod
    def generated(cls, forced: Mapping[int, Hashable], values=None) -> "Admissible":
        return cls("generated", None if values is None else tuple(values), forced=tuple(sorted(forced.items())))

    def is_full(self, alphabet: Sequence) -> bool:
        return self.kind == "maximal" and (self.values is None or set(self.values) == set(alphabet))

    def value_set(self, alphabet: Sequence) -> frozenset:
        return frozenset(alphabet if self.values is None else self.values)

    def source(self, G: Graph, alphabet: Sequence) -> ColoringSource:
        """Enumeration over alphabet indices (label order of ``alphabet``)."""
        pos = {a: n for n, a in enumerate(alphabet)}

        def index_of(label, where):
            if label not in pos:
                raise ValueError(f"{where}: label {label!r} is not in the alphabet")
            return pos[label]

        E = G.edge_count
        if self.kind == "maximal":
            vals = alphabet if self.values is None else self.values
            return AllColorings(E, sorted(index_of(v, "admissible values") for v in vals))
        if self.kind == "explicit":
            rows = []
            for c in self.colorings:
                if len(c) != E:
                    raise ValueError(f"explicit coloring has {len(c)} values for {E} edges")
                rows.append([index_of(v, "explicit coloring") for v in c])
            return ExplicitColorings(E, np.array(rows, dtype=np.int64).reshape(len(rows), E))
        forced = {}
        for e, v in self.forced:
            if not 0 <= e < E:
                raise ValueError(f"forced edge {e} is not an edge of the host")
            forced[e] = index_of(v, "forced value")
        vals = alphabet if self.values is None else self.values
        return GeneratedColorings(E, forced, sorted(index_of(v, "free values") for v in vals))

    def relabeled(self, mapping: Mapping) -> "Admissible":
        if self.kind == "maximal":
            return Admissible("maximal", tuple(mapping[v] for v in self.values) if self.values else None)
        if self.kind == "explicit":
            return Admissible("explicit", colorings=tuple(tuple(mapping[v] for v in c) for c in self.colorings))
        return Admissible(
            "generated",
            tuple(mapping[v] for v in self.values) if self.values else None,
            forced=tuple((e, mapping[v]) for e, v in self.forced),
        )


MAXIMAL = Admissible("maximal")


@dataclass(frozen=True)
class RamseyBase:
    family: GraphFamily
    alphabet: Union[tuple, Callable[[int], Sequence]]
    admissible: Union[Admissible, Callable[[int], Admissible]] = MAXIMAL
    field: Optional[FieldSpec] = None

    def alphabet_at(self, i: int) -> tuple:
        a = self.alphabet(i) if callable(self.alphabet) else self.alphabet
        return tuple(a)

    def admissible_at(self, i: int) -> Admissible:
        return self.admissible(i) if callable(self.admissible) else self.admissible

    def restricted(self, k: int) -> "RamseyBase":
        return replace(self, family=self.family.truncated(k))

    def certify(self, horizon: int) -> None:
        bad = hereditary_violation(self.family, self.family.indices(horizon))
        if bad:
            raise NotHereditaryError(*bad)


@dataclass(frozen=True)
class RamseySymbol:
    """Per-index colored targets; a plain tuple means a uniform symbol."""

    targets: Union[tuple, Callable[[int], Sequence[ColoredTarget]]]
    uniform: Optional[bool] = None

    def __post_init__(self):
        if not callable(self.targets):
            object.__setattr__(self, "targets", tuple(self.targets))
        if self.uniform is None:
            object.__setattr__(self, "uniform", not callable(self.targets))

    def targets_at(self, i: int) -> tuple:
        return tuple(self.targets(i)) if callable(self.targets) else self.targets

    def relabeled(self, mapping_at: Callable[[int], Mapping]) -> "RamseySymbol":
        if callable(self.targets):
            src = self.targets
            return RamseySymbol(lambda i: [ct.relabeled(mapping_at(i)) for ct in src(i)], self.uniform)
        # uniform symbols share one label set; any index's mapping works
        return RamseySymbol(tuple(ct.relabeled(mapping_at(None)) for ct in self.targets), self.uniform)


@dataclass(frozen=True)
class ArrowsResult:
    holds: bool
    witness: Optional[tuple] = None
    dropped_targets: int = 0
    field: Optional[FieldSpec] = None
    injection: Optional[dict] = None
    all_witnesses: Optional[tuple] = None


def label_to_json(v):
    if isinstance(v, FieldElement):
        return v.coefficients
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, tuple):
        return [label_to_json(x) for x in v]
    return v


def _prepare(base: RamseyBase, symbol: RamseySymbol, i: int):
    G = base.family(i)
    alphabet = base.alphabet_at(i)
    if len(set(alphabet)) != len(alphabet):
        raise ValueError(f"alphabet at index {i} has repeated labels")
    source = base.admissible_at(i).source(G, alphabet)
    aset = set(alphabet)
    kept, dropped = [], 0
    for ct in symbol.targets_at(i):
        # a target colored outside A_i can never occur in an A_i-valued coloring
        if all(c in aset for c in ct.colors):
            kept.append(ct)
        else:
            dropped += 1
    return G, alphabet, source, kept, dropped


def _direct(G, alphabet, source, targets, workers, bound, collect=False):
    pos = {a: n for n, a in enumerate(alphabet)}
    compiled = []
    cost = 1
    for ct in targets:
        edges = embedding_edge_array(ct.target, G)
        if len(edges) == 0:
            continue
        compiled.append((edges, np.array([pos[c] for c in ct.colors], dtype=np.int64)))
        cost += edges.size

    def contains(rows):
        hit = np.zeros(len(rows), dtype=bool)
        for edges, colors in compiled:
            hit |= (rows[:, edges] == colors).all(axis=2).any(axis=1)
        return hit

    def labels(idx):
        return tuple(alphabet[v] for v in source.rows(idx, idx + 1)[0])

    if collect:
        return [labels(i) for i in all_failures(source, contains, row_cost=cost, bound=bound)]
    idx = first_failure(source, contains, workers=workers, row_cost=cost, bound=bound)
    return None if idx is None else labels(idx)


def _injection_for(base: RamseyBase, alphabet: tuple, injection) -> tuple[FieldSpec, dict]:
    if injection is not None:
        inj = dict(injection)
        missing = [a for a in alphabet if a not in inj]
        if missing:
            raise ValueError(f"injection misses labels {missing[:5]}")
        fields = {v.field for v in inj.values()}
        if len(fields) != 1:
            raise ValueError("injection must land in a single field")
        if len({inj[a] for a in alphabet}) != len(alphabet):
            raise ValueError("injection is not injective")
        return fields.pop(), inj
    if alphabet and all(isinstance(a, FieldElement) for a in alphabet):
        fields = {a.field for a in alphabet}
        if len(fields) == 1:
            return fields.pop(), {a: a for a in alphabet}
    if base.field is not None and base.field.q >= len(alphabet):
        F = base.field
    else:
        F = smallest_field_for(len(alphabet))
    return F, inject_alphabet(alphabet, F)


def _algebraic(base, G, alphabet, source, targets, workers, bound, injection, collect=False):
    F, inj = _injection_for(base, alphabet, injection)
    table = [inj[a].code for a in alphabet]
    back = {inj[a].code: a for a in alphabet}
    expr = build_indicator(G, [ct.relabeled(inj) for ct in targets], F)
    mapped = source.mapped(table)
    if collect:
        hits = all_failures(mapped, lambda rows: evaluate_rows(expr, rows) == 0, row_cost=expr.row_cost(), bound=bound)
        return [tuple(back[int(c)] for c in mapped.rows(h, h + 1)[0]) for h in hits], F, inj
    w = find_nonvanishing(expr, mapped, workers=workers, bound=bound)
    witness = None if w is None else tuple(back[v.code] for v in w.values)
    return witness, F, inj


def arrows(
    base: RamseyBase,
    symbol: RamseySymbol,
    i: int,
    backend: str = "direct",
    workers: int = 1,
    injection: Optional[Mapping] = None,
    bound: int = DEFAULT_SCAN_BOUND,
    all_witnesses: bool = False,
) -> ArrowsResult:
    """Does every admissible coloring of G_i contain some colored target?

    On failure the witness is the first admissible coloring (in enumeration
    order) with no colored target, as a tuple of labels indexed by edge id.
    ``all_witnesses=True`` additionally lists every such coloring.
    """
    G, alphabet, source, targets, dropped = _prepare(base, symbol, i)
    if backend == "direct":
        found = _direct(G, alphabet, source, targets, workers, bound, all_witnesses)
        F = inj = None
    elif backend == "algebraic":
        found, F, inj = _algebraic(base, G, alphabet, source, targets, workers, bound, injection, all_witnesses)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if all_witnesses:
        return ArrowsResult(not found, found[0] if found else None, dropped, F, inj, tuple(found))
    return ArrowsResult(found is None, found, dropped, F, inj)


def find_match(G: Graph, coloring: Sequence, targets: Sequence[ColoredTarget]) -> Optional[tuple[int, EmbeddingMap]]:
    """First (target index, embedding) whose restriction of ``coloring`` equals the target colors."""
    for j, ct in enumerate(targets):
        for emb in enumerate_embeddings(ct.target, G):
            if all(coloring[e] == c for e, c in zip(emb.edge_map, ct.colors)):
                return j, emb
    return None


# -- classification ------------------------------------------------------------

def _symbol_graphs(symbol: RamseySymbol, i: int) -> list[Graph]:
    return [ct.target for ct in symbol.targets_at(i)]


def resolve(family: GraphFamily, targets: Sequence[Graph], horizon: int) -> Optional[int]:
    """Least k such that some target embeds in every G_t, k <= t <= horizon."""
    idx = list(family.indices(horizon))
    targets = list(targets)
    for pos, k in enumerate(idx):
        rest = [family(t) for t in idx[pos:]]
        if any(all(has_embedding(X, G) for G in rest) for X in targets):
            return k
    return None


def _symbol_uniform_on(symbol: RamseySymbol, idx) -> bool:
    if not callable(symbol.targets):
        return True
    first = None
    for i in idx:
        cur = symbol.targets_at(i)
        if first is None:
            first = cur
        elif cur != first:
            return False
    return True


def _symbol_hereditary(symbol: RamseySymbol, idx) -> bool:
    """Consecutive check of the disjoint unions of the per-index targets."""
    if not callable(symbol.targets):
        return True
    unions = [disjoint_union(_symbol_graphs(symbol, i)) for i in idx]
    return all(has_embedding(a, b) for a, b in zip(unions, unions[1:]))


def classify(base: RamseyBase, symbol: RamseySymbol, horizon: int) -> dict:
    idx = list(base.family.indices(horizon))
    alphabets = [base.alphabet_at(i) for i in idx]
    adms = [base.admissible_at(i) for i in idx]
    locally_finite = all(len(a) < float("inf") for a in alphabets)
    finite_type = len({frozenset(a) for a in alphabets}) <= 1
    maximal = all(s.is_full(a) for s, a in zip(adms, alphabets))
    uniform = bool(symbol.uniform) and _symbol_uniform_on(symbol, idx)
    size = len(alphabets[0]) if alphabets else 0
    galois = finite_type and uniform and prime_power(size) is not None
    hereditary = hereditary_violation(base.family, idx) is None
    graphs = _symbol_graphs(symbol, idx[0]) if (uniform and idx) else []
    exact = uniform and any(all(has_embedding(X, base.family(i)) for i in idx) for X in graphs)
    exact_from = resolve(base.family, graphs, horizon) if uniform else None
    fixed_values = len({s.value_set(a) for s, a in zip(adms, alphabets)}) <= 1
    monotone = bool(idx) and all(s.kind == "maximal" for s in adms) and fixed_values and uniform and hereditary
    return {
        "locally_finite": locally_finite,
        "finite_type": finite_type,
        "maximal": maximal,
        "uniform": uniform,
        "exact": exact,
        "exact_from": exact_from,
        "galois_type": galois,
        "alphabet_size": size if finite_type else None,
        "hereditary_prefix": hereditary,
        "symbol_hereditary_prefix": _symbol_hereditary(symbol, idx),
        "monotone": monotone,
    }


# -- reports -----------------------------------------------------------------

@dataclass
class SearchReport:
    horizon: int
    indices: list
    arrows_trace: list
    computed: list
    candidate_value: Optional[int]
    soundness: str
    witnesses: dict
    classification: dict
    convention: dict
    backends: tuple
    i_m: Optional[int] = None
    i_m_next: Optional[int] = None
    i_k: Optional[int] = None
    notes: list = dc_field(default_factory=list)
    extras: dict = dc_field(default_factory=dict)

    def arrows_at(self, i: int) -> bool:
        return self.arrows_trace[self.indices.index(i)]

    def to_json(self) -> dict:
        out = {
            "candidate_value": self.candidate_value,
            "soundness": self.soundness,
            "horizon": self.horizon,
            "indices": list(self.indices),
            "arrows_trace": list(self.arrows_trace),
            "computed": list(self.computed),
            "i_m": self.i_m,
            "i_m_next": self.i_m_next,
            "i_k": self.i_k,
            "backends": list(self.backends),
            "classification": self.classification,
            "convention": self.convention,
            "witnesses": {str(i): label_to_json(w) for i, w in sorted(self.witnesses.items())},
            "notes": list(self.notes),
        }
        if self.extras:
            out["extras"] = self.extras
        return out


def _injection_json(F: FieldSpec, inj: dict, alphabet: tuple):
    entry = {"field": F.to_json()}
    if len(alphabet) <= 64:
        entry["map"] = [[label_to_json(a), inj[a].coefficients] for a in alphabet]
    else:
        entry["rule"] = "label n of the alphabet -> element with code n"
        entry["alphabet_size"] = len(alphabet)
    return entry


def ramsey_number(
    base: RamseyBase,
    symbol: RamseySymbol,
    horizon: int,
    workers: int = 1,
    backends: Sequence[str] = ("direct", "algebraic"),
    infer_monotone: bool = True,
    injection: Optional[Callable[[int], Mapping]] = None,
    bound: int = DEFAULT_SCAN_BOUND,
) -> SearchReport:
    """Arrows trace over the family up to ``horizon`` and the least index from which it holds.

    In the monotone configuration indices after the first true one are
    inferred rather than scanned (``infer_monotone=False`` scans them all).
    """
    base.certify(horizon)
    flags = classify(base, symbol, horizon)
    idx = list(base.family.indices(horizon))
    trace, computed, witnesses, notes = [], [], {}, []
    inj_meta = {}
    settled = False
    dropped_any = 0
    for i in idx:
        if settled:
            trace.append(True)
            computed.append(False)
            continue
        results = {}
        for b in backends:
            inj = injection(i) if (injection is not None and b == "algebraic") else None
            results[b] = arrows(base, symbol, i, b, workers=workers, injection=inj, bound=bound)
        vals = {b: r.holds for b, r in results.items()}
        wits = {b: r.witness for b, r in results.items()}
        if len(set(vals.values())) > 1 or len(set(wits.values())) > 1:
            raise InconsistencyError(f"backends disagree at index {i}: {vals}, witnesses {wits}")
        r0 = next(iter(results.values()))
        dropped_any += r0.dropped_targets
        alg = results.get("algebraic")
        if alg is not None:
            inj_meta[str(i)] = _injection_json(alg.field, alg.injection, base.alphabet_at(i))
        trace.append(r0.holds)
        computed.append(True)
        if not r0.holds:
            witnesses[i] = r0.witness
        if r0.holds and flags["monotone"] and infer_monotone:
            settled = True
    if settled and not all(computed):
        notes.append("indices after the first true index are inferred from monotonicity (maximal base, uniform symbol, hereditary family)")
    if dropped_any:
        notes.append("targets colored outside an index's alphabet were dropped at that index")

    false_idx = [i for i, v in zip(idx, trace) if not v]
    true_idx = [i for i, v in zip(idx, trace) if v]
    i_m = false_idx[-1] if false_idx else None
    if i_m is None:
        i_m_next = idx[0] if idx else None
    else:
        pos = idx.index(i_m)
        i_m_next = idx[pos + 1] if pos + 1 < len(idx) else None
    i_k = true_idx[0] if true_idx else None
    candidate = i_m_next if (trace and trace[-1]) else None
    soundness = "exact" if flags["monotone"] else "horizon-conditional"
    if i_m_next is not None and i_k is not None and i_m_next != i_k:
        if flags["monotone"]:
            raise InconsistencyError(f"monotone configuration with i_m+1={i_m_next} != i_k={i_k}")
        soundness = "horizon-conditional"
        notes.append(f"arrows trace is not monotone: successor of last false index {i_m_next} != first true index {i_k}")
    if candidate is None:
        notes.append(f"no candidate within horizon {horizon}; nothing is claimed beyond it")
    convention = {
        "family": base.family.metadata(),
        "witness_order": "lexicographic over alphabet order, edge 0 most significant",
        "injection": inj_meta,
    }
    return SearchReport(
        horizon=horizon,
        indices=idx,
        arrows_trace=trace,
        computed=computed,
        candidate_value=candidate,
        soundness=soundness,
        witnesses=witnesses,
        classification=flags,
        convention=convention,
        backends=tuple(backends),
        i_m=i_m,
        i_m_next=i_m_next,
        i_k=i_k,
        notes=notes,
    )


def resolution_invariance_check(base: RamseyBase, symbol: RamseySymbol, horizon: int, **kwargs) -> bool:
    """Compare the Ramsey search on the base and on its resolution G_{>=k}."""
    if not symbol.uniform:
        raise ValueError("resolution invariance needs a uniform symbol")
    graphs = _symbol_graphs(symbol, base.family.first_index)
    full = ramsey_number(base, symbol, horizon, **kwargs)
    k = resolve(base.family, graphs, horizon)
    if k is None:
        return full.candidate_value is None
    res = ramsey_number(base.restricted(k), symbol, horizon, **kwargs)
    common = [i for i in full.indices if i >= k]
    same_trace = [full.arrows_at(i) for i in common] == [res.arrows_at(i) for i in common]
    return same_trace and full.candidate_value == res.candidate_value


def embed_alphabet(base: RamseyBase, symbol: RamseySymbol, injection) -> tuple[RamseyBase, RamseySymbol]:
    """Push labels through an injection into a finite field.

    ``injection`` is a mapping label -> FieldElement (constant) or a callable
    index -> mapping.  The image base has the whole field as alphabet and the
    image of S_i as admissible set.
    """
    at = injection if callable(injection) else (lambda i: injection)

    def checked(i):
        m = dict(at(i))
        vals = list(m.values())
        if not all(isinstance(v, FieldElement) for v in vals) or len({v.field for v in vals}) != 1:
            raise ValueError("injection must map into a single finite field")
        if len(set(vals)) != len(vals):
            raise ValueError("injection is not injective")
        return m

    first = base.family.first_index

    def alphabet(i):
        m = checked(i)
        F = next(iter(m.values())).field
        missing = set(base.alphabet_at(i)) - set(m)
        if missing:
            raise ValueError(f"injection misses labels {sorted(map(str, missing))[:5]}")
        return tuple(all_elements(F))

    def admissible(i):
        m = checked(i)
        adm = base.admissible_at(i)
        if adm.kind in ("maximal", "generated") and adm.values is None:
            adm = replace(adm, values=base.alphabet_at(i))
        return adm.relabeled(m)

    field = None
    if not callable(injection):
        field = next(iter(checked(first).values())).field
        fixed_alpha = alphabet(first)
        new_base = RamseyBase(base.family, fixed_alpha, admissible, field)
    else:
        new_base = RamseyBase(base.family, alphabet, admissible, None)
    new_symbol = symbol.relabeled(lambda i: checked(first if i is None else i))
    return new_base, new_symbol


def classical_instance(zs: Sequence[int]) -> tuple[RamseyBase, RamseySymbol]:
    """R(z_1, ..., z_m): complete family G_n = K_n, colors 0..m-1, maximal base."""
    zs = [int(z) for z in zs]
    if not zs or any(z < 1 for z in zs):
        raise ValueError("classical Ramsey arguments must be positive integers")
    m = len(zs)
    alphabet = tuple(range(m))
    base = RamseyBase(complete_family(0), alphabet, MAXIMAL, smallest_field_for(m))
    symbol = RamseySymbol(tuple(ColoredTarget.monochromatic(complete_graph(z), a) for a, z in enumerate(zs)))
    return base, symbol
