"""Subgraph-coloring indicator polynomials over GF(q).

For a host G and colored targets (X_j, psi_j) the indicator is

    prod_j prod_{pi in G/X_j} ( 1 - prod_{e in X_j} (1 - (x_{pi(e)} - psi_j(e))^(q-1)) )

It vanishes at a coloring exactly when some colored target occurs in it.
Expressions are kept unexpanded (one term per embedding) and evaluated
with vectorized field arithmetic.  ``expand_reduced`` produces the canonical
representative modulo the field ideal <x_e^q - x_e>, with every exponent
kept below q.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .colorings import (
    DEFAULT_SCAN_BOUND,
    AllColorings,
    CapacityError,
    ColoringSource,
    ExplicitColorings,
    first_failure,
)
from .finite_field import FieldElement, FieldSpec
from .graph_core import EmbeddingMap, Graph, embedding_edge_array, enumerate_embeddings

__all__ = [
    "ColoredTarget",
    "Coloring",
    "IndicatorTerm",
    "IndicatorExpr",
    "ReducedPoly",
    "MembershipResult",
    "InconsistencyError",
    "DEFAULT_CAPACITY",
    "build_indicator",
    "evaluate",
    "evaluate_rows",
    "find_nonvanishing",
    "expand_reduced",
    "ideal_membership",
    "check_ideal_membership",
    "partial_factor",
]

DEFAULT_CAPACITY = 1 << 20


class InconsistencyError(AssertionError):
    """Two independent routes to the same answer disagreed."""


@dataclass(frozen=True)
class ColoredTarget:
    """A target graph with a total coloring of its edges (by edge id)."""

    target: Graph
    colors: tuple

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        if len(self.colors) != self.target.edge_count:
            raise ValueError(
                f"coloring has {len(self.colors)} values for {self.target.edge_count} edges"
            )

    @classmethod
    def monochromatic(cls, graph: Graph, color) -> "ColoredTarget":
        return cls(graph, (color,) * graph.edge_count)

    def relabeled(self, mapping) -> "ColoredTarget":
        return ColoredTarget(self.target, tuple(mapping[c] for c in self.colors))


@dataclass(frozen=True)
class Coloring:
    host: Graph
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.host.edge_count:
            raise ValueError(f"coloring has {len(self.values)} values for {self.host.edge_count} edges")

    def restrict(self, emb: EmbeddingMap) -> tuple:
        """rho restricted to the image of emb, read in target edge order."""
        return tuple(self.values[e] for e in emb.edge_map)


@dataclass(frozen=True)
class IndicatorTerm:
    target_index: int
    embedding: EmbeddingMap
    colors: tuple


class IndicatorExpr:
    """Unexpanded indicator: one factor per (target, embedding) pair.

    ``embeddings=None`` means the full isomorphism sets G/X_j.  An explicit
    per-target list of embeddings gives a sub-product (used by
    ``partial_factor``).  No terms at all is the constant polynomial 1.
    """

    def __init__(self, host: Graph, field: FieldSpec, targets: Sequence[ColoredTarget], embeddings=None):
        self.host = host
        self.field = field
        self.targets = tuple(targets)
        self._embeddings = None if embeddings is None else tuple(tuple(e) for e in embeddings)
        groups = []
        for j, ct in enumerate(self.targets):
            if self._embeddings is None:
                edges = embedding_edge_array(ct.target, host)
            else:
                embs = self._embeddings[j]
                edges = np.array([m.edge_map for m in embs], dtype=np.int64).reshape(len(embs), ct.target.edge_count)
            colors = np.array([c.code for c in ct.colors], dtype=np.int64)
            groups.append((edges, colors))
        self.groups = tuple(groups)

    @property
    def term_count(self) -> int:
        return sum(len(edges) for edges, _ in self.groups)

    @property
    def is_constant_one(self) -> bool:
        return self.term_count == 0

    def embeddings_for(self, j: int) -> tuple:
        if self._embeddings is None:
            return enumerate_embeddings(self.targets[j].target, self.host)
        return self._embeddings[j]

    @property
    def terms(self) -> list[IndicatorTerm]:
        out = []
        for j, ct in enumerate(self.targets):
            for emb in self.embeddings_for(j):
                out.append(IndicatorTerm(j, emb, ct.colors))
        return out

    def row_cost(self) -> int:
        return max(1, sum(edges.size for edges, _ in self.groups))

    def __repr__(self):
        return f"IndicatorExpr(host={self.host.label()}, field={self.field!r}, terms={self.term_count})"


def build_indicator(G: Graph, targets: Iterable[ColoredTarget], field: FieldSpec) -> IndicatorExpr:
    targets = list(targets)
    for ct in targets:
        for c in ct.colors:
            if not isinstance(c, FieldElement) or c.field != field:
                raise ValueError(f"target coloring value {c!r} is not an element of {field!r}")
    return IndicatorExpr(G, field, targets)


def _prod_last_axis(F: FieldSpec, arr: np.ndarray) -> np.ndarray:
    """Field product along the last axis by pairwise folding."""
    if arr.shape[-1] == 0:
        return np.ones(arr.shape[:-1], dtype=np.int64)
    while arr.shape[-1] > 1:
        if arr.shape[-1] % 2:
            arr = np.concatenate([arr, np.ones(arr.shape[:-1] + (1,), dtype=np.int64)], axis=-1)
        arr = F.vmul(arr[..., 0::2], arr[..., 1::2])
    return arr[..., 0]


def evaluate_rows(expr: IndicatorExpr, rows: np.ndarray) -> np.ndarray:
    """Indicator value (as field codes) at each row of a (N, |E|) code array."""
    F = expr.field
    rows = np.asarray(rows, dtype=np.int64)
    power = F.pow_table(F.q - 1)
    acc = np.ones(len(rows), dtype=np.int64)
    for edges, colors in expr.groups:
        if len(edges) == 0:
            continue
        vals = rows[:, edges]  # (N, T, L)
        hit = F.vsub(1, power[F.vsub(vals, colors)])
        inner = _prod_last_axis(F, hit)  # (N, T)
        factors = F.vsub(1, inner)
        acc = F.vmul(acc, _prod_last_axis(F, factors))
    return acc


def _as_codes(expr: IndicatorExpr, rho) -> np.ndarray:
    values = rho.values if isinstance(rho, Coloring) else tuple(rho)
    if isinstance(rho, Coloring) and rho.host != expr.host:
        raise ValueError("coloring is defined on a different host")
    if len(values) != expr.host.edge_count:
        raise ValueError(f"coloring has {len(values)} values for {expr.host.edge_count} edges")
    codes = []
    for v in values:
        if isinstance(v, FieldElement):
            if v.field != expr.field:
                raise ValueError("coloring value from a different field")
            codes.append(v.code)
        else:
            codes.append(expr.field(v).code)
    return np.array(codes, dtype=np.int64).reshape(1, -1)


def evaluate(expr: IndicatorExpr, rho) -> FieldElement:
    """The indicator at one coloring; zero iff some colored target occurs in rho."""
    return expr.field.element(int(evaluate_rows(expr, _as_codes(expr, rho))[0]))


def _source_for(expr: IndicatorExpr, admissible) -> ColoringSource:
    E = expr.host.edge_count
    if admissible is None:
        return AllColorings(E, range(expr.field.q))
    if isinstance(admissible, ColoringSource):
        if admissible.n_edges != E:
            raise ValueError("admissible colorings have the wrong width")
        return admissible
    rows = [_as_codes(expr, rho)[0] for rho in admissible]
    return ExplicitColorings(E, np.array(rows, dtype=np.int64).reshape(len(rows), E))


def find_nonvanishing(
    expr: IndicatorExpr,
    admissible: Union[None, ColoringSource, Iterable] = None,
    workers: int = 1,
    bound: int = DEFAULT_SCAN_BOUND,
) -> Optional[Coloring]:
    """First coloring (in source order) where the indicator is nonzero.

    ``admissible=None`` scans all of GF(q)^E; a None result then certifies
    that the indicator is identically zero as a function.
    """
    source = _source_for(expr, admissible)
    idx = first_failure(
        source, lambda rows: evaluate_rows(expr, rows) == 0, workers=workers, row_cost=expr.row_cost(), bound=bound
    )
    if idx is None:
        return None
    row = source.rows(idx, idx + 1)[0]
    return Coloring(expr.host, tuple(expr.field.element(int(c)) for c in row))


# -- reduction modulo the field ideal ----------------------------------------

def _reduce_exponent(n: int, q: int) -> int:
    # x^q = x, so exponents >= q drop by q-1
    return n if n < q else n - (q - 1)


def _univariate_match(F: FieldSpec, c: int) -> np.ndarray:
    """Coefficients (degree 0..q-1) of 1 - (x - c)^(q-1)."""
    q = F.q
    negc = F.neg(c)
    coeffs = np.zeros(q, dtype=np.int64)
    for a in range(q):
        binom = F.int_code(comb(q - 1, a))
        coeffs[a] = F.mul(binom, F.pow(negc, q - 1 - a))
    coeffs = F.vneg(coeffs)
    coeffs[0] = F.add(int(coeffs[0]), 1)
    return coeffs


def _mul_axis(F: FieldSpec, T: np.ndarray, axis: int, u: np.ndarray) -> np.ndarray:
    """Multiply the dense coefficient tensor by a univariate u(x_axis), reducing exponents."""
    q = F.q
    src = np.moveaxis(T, axis, 0)
    out = np.zeros_like(src)
    for a in range(q):
        sa = src[a]
        if not sa.any():
            continue
        for b in range(q):
            if u[b] == 0:
                continue
            t = _reduce_exponent(a + b, q)
            out[t] = F.vadd(out[t], F.vmul(sa, int(u[b])))
    return np.moveaxis(out, 0, axis)


class ReducedPoly:
    """Canonical polynomial modulo <x_e^q - x_e>: exponents < q, no zero coefficients."""

    def __init__(self, field: FieldSpec, n_vars: int, terms: dict):
        self.field = field
        self.n_vars = n_vars
        self.terms = {}
        for exps, coef in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n_vars or any(not 0 <= e < field.q for e in exps):
                raise ValueError(f"exponent vector {exps} not reduced")
            c = field(coef)
            if c.code:
                self.terms[exps] = c

    @property
    def variables(self) -> list[int]:
        return list(range(self.n_vars))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @classmethod
    def from_tensor(cls, field: FieldSpec, tensor: np.ndarray) -> "ReducedPoly":
        n = tensor.ndim
        if n == 0:
            return cls(field, 0, {(): field.element(int(tensor))})
        terms = {}
        for idx in zip(*np.nonzero(tensor)):
            terms[tuple(int(i) for i in idx)] = field.element(int(tensor[idx]))
        return cls(field, n, terms)

    def to_tensor(self) -> np.ndarray:
        T = np.zeros((self.field.q,) * self.n_vars, dtype=np.int64)
        for exps, c in self.terms.items():
            T[exps] = c.code
        return T

    def evaluate(self, point) -> FieldElement:
        F = self.field
        codes = [F(v).code for v in point]
        total = 0
        for exps, c in self.terms.items():
            term = c.code
            for x, e in zip(codes, exps):
                term = F.mul(term, F.pow(x, e))
            total = F.add(total, term)
        return F.element(total)

    def evaluate_all(self) -> np.ndarray:
        """Values at every point of GF(q)^n, flattened in lexicographic point order."""
        F = self.field
        q = F.q
        vand = np.array([[F.pow(x, a) for a in range(q)] for x in range(q)], dtype=np.int64)
        T = self.to_tensor()
        for axis in range(self.n_vars):
            src = np.moveaxis(T, axis, 0)
            out = np.zeros_like(src)
            for x in range(q):
                acc = np.zeros(src.shape[1:], dtype=np.int64)
                for a in range(q):
                    acc = F.vadd(acc, F.vmul(src[a], int(vand[x, a])))
                out[x] = acc
            T = np.moveaxis(out, 0, axis)
        return T.reshape(-1)

    def to_json(self) -> list:
        return [{"exps": list(e), "coef": c.coefficients} for e, c in sorted(self.terms.items())]

    def __eq__(self, other):
        return (
            isinstance(other, ReducedPoly)
            and self.field == other.field
            and self.n_vars == other.n_vars
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"ReducedPoly({self.field!r}, vars={self.n_vars}, terms={len(self.terms)})"


def expand_reduced(expr: IndicatorExpr, capacity: int = DEFAULT_CAPACITY) -> ReducedPoly:
    """Multiply the factors out one at a time, reducing exponents after each step."""
    F = expr.field
    q, E = F.q, expr.host.edge_count
    size = q ** E
    if size > capacity:
        raise CapacityError(f"reduced form needs up to {size} terms, capacity is {capacity}", capacity, size)
    acc = np.zeros((q,) * E, dtype=np.int64)
    acc[(0,) * E] = 1
    match_cache = {}
    for edges, colors in expr.groups:
        us = []
        for c in colors:
            c = int(c)
            if c not in match_cache:
                match_cache[c] = _univariate_match(F, c)
            us.append(match_cache[c])
        for row in edges:
            prod = acc
            for e, u in zip(row, us):
                prod = _mul_axis(F, prod, int(e), u)
            acc = F.vsub(acc, prod)
    return ReducedPoly.from_tensor(F, acc)


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    routes: dict

    def to_json(self) -> dict:
        return {"member": self.member, "routes": dict(self.routes)}


def check_ideal_membership(
    expr: IndicatorExpr,
    capacity: int = DEFAULT_CAPACITY,
    eval_bound: int = DEFAULT_SCAN_BOUND,
    workers: int = 1,
) -> MembershipResult:
    """Decide membership in <x_e^q - x_e> by reduction and by exhaustive evaluation.

    Each route runs when its bound allows; when both run they must agree.
    """
    points = expr.field.q ** expr.host.edge_count
    routes = {}
    if points <= capacity:
        routes["reduction"] = expand_reduced(expr, capacity).is_zero
    if points <= eval_bound:
        routes["evaluation"] = find_nonvanishing(expr, None, workers=workers, bound=eval_bound) is None
    if not routes:
        raise CapacityError(
            f"{points} points exceed both the reduction capacity {capacity} and the evaluation bound {eval_bound}",
            max(capacity, eval_bound),
            points,
        )
    if len(set(routes.values())) > 1:
        raise InconsistencyError(f"membership routes disagree: {routes}")
    return MembershipResult(next(iter(routes.values())), routes)


def ideal_membership(expr: IndicatorExpr, capacity: int = DEFAULT_CAPACITY, eval_bound: int = DEFAULT_SCAN_BOUND) -> bool:
    return check_ideal_membership(expr, capacity, eval_bound).member


def partial_factor(
    G_n: Graph, G_k: Graph, pi: EmbeddingMap, targets: Sequence[ColoredTarget], field: FieldSpec
) -> tuple[IndicatorExpr, IndicatorExpr]:
    """Split the indicator of G_n into the factor carried by pi(G_k) and the rest.

    The factor has one term per (j, pi∘eta), eta in G_k/X_j; the cofactor
    holds every other term of the full product.
    """
    if pi.target != G_k or pi.host != G_n:
        raise ValueError("pi must embed G_k into G_n")
    EmbeddingMap(G_k, G_n, pi.vertex_map)  # revalidates edge preservation
    full = build_indicator(G_n, targets, field)
    factor_embs, cofactor_embs = [], []
    for j, ct in enumerate(full.targets):
        inner = tuple(pi.compose(eta) for eta in enumerate_embeddings(ct.target, G_k))
        used = {m.vertex_map for m in inner}
        factor_embs.append(inner)
        cofactor_embs.append(tuple(m for m in enumerate_embeddings(ct.target, G_n) if m.vertex_map not in used))
    return (
        IndicatorExpr(G_n, field, full.targets, factor_embs),
        IndicatorExpr(G_n, field, full.targets, cofactor_embs),
    )
