"""Metrical colorings of prime windows and Ramsey encodings of prime patterns.

Index ``i`` hosts ``K_{i+1}``; its vertices carry consecutive primes
``v_r -> p_{m+r}`` (r = 0..i) and each edge is colored by the absolute
difference of its endpoint primes.  Labels range over
``A_(i,m) = {0, ..., p_{m+i+1} - 1}``.

Every search here is horizon-bounded and cross-checked against a direct
scan of the sieve.  A search that finds nothing reports exactly that:
nothing found up to the horizon.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .colorings import DEFAULT_SCAN_BOUND, CapacityError
from .graph_core import Graph, complete_family, complete_graph, enumerate_embeddings, path_graph
from .indicator import ColoredTarget, Coloring
from .ramsey_engine import Admissible, RamseyBase, RamseySymbol, SearchReport, arrows, find_match, ramsey_number

__all__ = [
    "DEFAULT_SIEVE_BOUND",
    "SIEVE_ENV",
    "InsufficientSieveError",
    "PrimeTable",
    "MetricalAssignment",
    "metrical_assignment",
    "metrical_coloring",
    "THETA_CONVENTION",
    "ap_ramsey",
    "twin_prime_ramsey",
    "polignac_ramsey",
    "greentao_ramsey",
    "zhang_ramsey_scan",
    "ap_oracle",
    "gap_oracle",
    "ap_from_path",
]

DEFAULT_SIEVE_BOUND = 10 ** 7
SIEVE_ENV = "GENRAMSEY_SIEVE_BOUND"
THETA_CONVENTION = "v_r -> p_(m+r) for r = 0..i; p_(m+i+1) only bounds the alphabet"


class InsufficientSieveError(ValueError):
    """The sieve does not reach a requested prime."""

    def __init__(self, n: int, bound: int, required: int):
        super().__init__(f"p_{n} lies beyond the sieve bound {bound}; a bound of at least {required} is required")
        self.n = n
        self.bound = bound
        self.required = required


def _nth_prime_upper(n: int) -> int:
    # Rosser-Schoenfeld style upper bound, valid for n >= 6
    if n < 6:
        return 13
    return int(math.ceil(n * (math.log(n) + math.log(math.log(n))))) + 1


class PrimeTable:
    """Primes up to ``bound`` from an Eratosthenes sieve; ``p(1) == 2``."""

    def __init__(self, bound: Optional[int] = None):
        if bound is None:
            bound = int(os.environ.get(SIEVE_ENV, DEFAULT_SIEVE_BOUND))
        bound = int(bound)
        if bound < 2:
            raise ValueError("sieve bound must be at least 2")
        sieve = np.ones(bound + 1, dtype=bool)
        sieve[:2] = False
        for q in range(2, math.isqrt(bound) + 1):
            if sieve[q]:
                sieve[q * q::q] = False
        self.bound = bound
        self.primes = np.flatnonzero(sieve).astype(np.int64)
        self.primes.setflags(write=False)
        self._set = None

    def __len__(self):
        return len(self.primes)

    def p(self, n: int) -> int:
        if n < 1:
            raise ValueError("primes are 1-indexed")
        if n > len(self.primes):
            raise InsufficientSieveError(n, self.bound, max(self.bound + 1, _nth_prime_upper(n)))
        return int(self.primes[n - 1])

    def window(self, m: int, count: int) -> list[int]:
        """[p_m, ..., p_{m+count-1}]"""
        self.p(m + count - 1)
        return [int(x) for x in self.primes[m - 1:m - 1 + count]]

    def is_prime(self, x: int) -> bool:
        if x > self.bound:
            raise InsufficientSieveError(len(self.primes) + 1, self.bound, x)
        if self._set is None:
            self._set = frozenset(int(v) for v in self.primes)
        return x in self._set


@dataclass(frozen=True)
class MetricalAssignment:
    host: Graph
    theta: tuple  # theta[r] = prime at vertex r
    alphabet_bound: int

    def __post_init__(self):
        if len(set(self.theta)) != len(self.theta):
            raise ValueError("theta must be injective")
        if len(self.theta) != self.host.vertex_count:
            raise ValueError("theta must cover every vertex")

    def coloring(self) -> Coloring:
        vals = tuple(abs(self.theta[u] - self.theta[v]) for u, v in self.host.edges)
        if any(c >= self.alphabet_bound for c in vals):
            raise ValueError("a distance falls outside the alphabet")
        return Coloring(self.host, vals)


def metrical_assignment(i: int, m: int, table: PrimeTable) -> MetricalAssignment:
    if i < 0 or m < 1:
        raise ValueError("need i >= 0 and m >= 1")
    primes = table.window(m, i + 2)
    return MetricalAssignment(complete_graph(i + 1), tuple(primes[:-1]), primes[-1])


def metrical_coloring(i: int, m: int, table: PrimeTable) -> Coloring:
    """The distance coloring of K_{i+1} induced by v_r -> p_{m+r}."""
    return metrical_assignment(i, m, table).coloring()


# -- oracles (plain prime scans, no graphs) ------------------------------------

def ap_oracle(t: int, gaps: Sequence[int], m: int, horizon: int, table: PrimeTable, min_gap_bound=None):
    """Least i <= horizon whose window p_m..p_{m+i} holds t+1 primes in AP with a gap in ``gaps``.

    ``min_gap_bound``: if set, only gaps j < i qualify at index i.
    Returns (i, progression) or (None, None).
    """
    window = table.window(m, horizon + 1)
    seen = set()
    for i, top in enumerate(window):
        seen.add(top)
        for k in gaps:
            if min_gap_bound and not k < i:
                continue
            # any AP inside the window; the newest prime may sit anywhere in it
            for start in sorted(seen):
                prog = [start + s * k for s in range(t + 1)]
                if all(x in seen for x in prog):
                    return i, prog
    return None, None


def gap_oracle(gap: int, m: int, horizon: int, table: PrimeTable):
    """Least i <= horizon with p_{m+r+1} - p_{m+r} == gap for some r < i."""
    window = table.window(m, horizon + 1)
    for r in range(len(window) - 1):
        if window[r + 1] - window[r] == gap:
            return r + 1, [window[r], window[r + 1]]
    return None, None


# -- engine instances ----------------------------------------------------------

def _metrical_base(m: int, table: PrimeTable, horizon: int) -> RamseyBase:
    table.p(m + horizon + 1)
    fam = complete_family(1)
    return RamseyBase(
        fam,
        lambda i: range(table.p(m + i + 1)),
        lambda i: Admissible.explicit([metrical_coloring(i, m, table).values]),
    )


def ap_from_path(theta: Sequence[int], vertex_map: Sequence[int]) -> list[int]:
    """Primes along an embedded path, oriented increasing; raises if not an AP."""
    seq = [theta[v] for v in vertex_map]
    if len(seq) > 1 and seq[0] > seq[-1]:
        seq = seq[::-1]
    d = {b - a for a, b in zip(seq, seq[1:])}
    if len(d) > 1 or (d and min(d) <= 0):
        raise AssertionError(f"path {seq} is not a strictly increasing progression")
    return seq


def _realize(report: SearchReport, m: int, table: PrimeTable, targets_at) -> Optional[list[int]]:
    i = report.candidate_value
    if i is None:
        return None
    mc = metrical_coloring(i, m, table)
    theta = metrical_assignment(i, m, table).theta
    found = find_match(mc.host, mc.values, targets_at(i))
    if found is None:
        raise AssertionError(f"arrows holds at {i} but no target matches the metrical coloring")
    return ap_from_path(theta, found[1].vertex_map)


def _persistence(report: SearchReport) -> bool:
    """Once true, the trace stays true: prime windows only grow."""
    seen = False
    for v in report.arrows_trace:
        if seen and not v:
            return False
        seen = seen or v
    return True


def _finish(report, m, table, targets_at, oracle_i, oracle_prog, params):
    realizing = _realize(report, m, table, targets_at)
    # several progressions may appear in the same window; any valid one agrees
    agreement = report.candidate_value == oracle_i and (realizing is None) == (oracle_prog is None)
    if realizing is not None:
        agreement = agreement and all(table.is_prime(x) for x in realizing) and realizing[0] >= table.p(m)
    report.convention["theta"] = THETA_CONVENTION
    report.convention["alphabet"] = "A_(i,m) = {0, ..., p_(m+i+1) - 1}"
    report.convention["sieve_bound"] = table.bound
    persistent = _persistence(report)
    if not persistent:
        report.notes.append("arrows trace is not persistent along growing windows")
    report.extras.update(
        {
            **params,
            "candidate_index": report.candidate_value,
            "realizing_primes": realizing,
            "oracle_candidate": oracle_i,
            "oracle_primes": oracle_prog,
            "oracle_agreement": bool(agreement and persistent),
            "window_primes": None if report.candidate_value is None else table.window(m, report.candidate_value + 1),
        }
    )
    return report


def ap_ramsey(
    t: int, k: int, m: int, horizon: int, table: Optional[PrimeTable] = None, workers: int = 1,
    backends=("direct", "algebraic"),
) -> SearchReport:
    """Least window index holding t+1 primes in arithmetic progression with gap k."""
    if min(t, k, m) < 1:
        raise ValueError("t, k and m must be positive")
    table = table or PrimeTable()
    base = _metrical_base(m, table, horizon)
    target = ColoredTarget.monochromatic(path_graph(t), k)
    symbol = RamseySymbol((target,))
    report = ramsey_number(base, symbol, horizon, workers=workers, backends=backends)
    oi, op = ap_oracle(t, [k], m, horizon, table)
    return _finish(report, m, table, lambda i: (target,), oi, op, {"t": t, "k": k, "m": m})


def twin_prime_ramsey(m: int, horizon: int, table: Optional[PrimeTable] = None, workers: int = 1,
                      backends=("direct", "algebraic")) -> SearchReport:
    """Least window index, starting at p_m, containing two primes at distance 2."""
    report = ap_ramsey(1, 2, m, horizon, table, workers, backends)
    report.extras["encoding"] = "twin"
    return report


def greentao_ramsey(t: int, horizon: int, table: Optional[PrimeTable] = None, workers: int = 1,
                    backends=("direct", "algebraic")) -> SearchReport:
    """Non-uniform symbol: at index i the targets are j-monochromatic P_t for 0 < j < i (m = 1)."""
    if t < 1:
        raise ValueError("t must be positive")
    table = table or PrimeTable()
    m = 1
    base = _metrical_base(m, table, horizon)
    P = path_graph(t)

    def targets_at(i):
        return tuple(ColoredTarget.monochromatic(P, j) for j in range(1, i))

    symbol = RamseySymbol(targets_at, uniform=False)
    report = ramsey_number(base, symbol, horizon, workers=workers, backends=backends)
    oi, op = ap_oracle(t, range(1, horizon), m, horizon, table, min_gap_bound=True)
    report.notes.append("symbol taken literally as {(P_t, j)} for 0 < j < i, so it changes with the index")
    return _finish(report, m, table, targets_at, oi, op, {"t": t, "m": m})


# -- Polignac ------------------------------------------------------------------

def _polignac_forced(i: int, m: int, table: PrimeTable) -> dict:
    """Forced values on the Hamiltonian path v_0 v_1 ... v_i."""
    host = complete_graph(i + 1)
    w = table.window(m, i + 1)
    return {host.edge_id(r, r + 1): w[r + 1] - w[r] for r in range(i)}


def _polignac_base(m: int, table: PrimeTable, horizon: int) -> RamseyBase:
    table.p(m + horizon + 1)
    return RamseyBase(
        complete_family(1),
        lambda i: range(table.p(m + i + 1)),
        lambda i: Admissible.generated(_polignac_forced(i, m, table)),
    )


def polignac_capacity(i: int, m: int, table: PrimeTable) -> int:
    E = i * (i + 1) // 2
    return table.p(m + i + 1) ** (E - i)


def _short_circuit_report(t, m, horizon, table) -> SearchReport:
    gap = 2 * t
    idx = list(range(0, horizon + 1))
    trace, witnesses = [], {}
    for i in idx:
        forced = _polignac_forced(i, m, table)
        A = table.p(m + i + 1)
        E = i * (i + 1) // 2
        # free edges can always avoid the gap when |A| > 1, so only path edges matter
        holds = A > 1 and gap < A and gap in forced.values()
        trace.append(holds)
        if not holds:
            # least counterexample: forced path, every free edge at label 0
            witnesses[i] = tuple(forced.get(e, 0) for e in range(E))
    false_idx = [i for i, v in zip(idx, trace) if not v]
    true_idx = [i for i, v in zip(idx, trace) if v]
    i_m = false_idx[-1] if false_idx else None
    i_m_next = (idx[0] if i_m is None else (i_m + 1 if i_m + 1 <= horizon else None))
    i_k = true_idx[0] if true_idx else None
    candidate = i_m_next if trace[-1] else None
    notes = []
    if candidate is None:
        notes.append(f"no candidate within horizon {horizon}; nothing is claimed beyond it")
    return SearchReport(
        horizon=horizon,
        indices=idx,
        arrows_trace=trace,
        computed=[True] * len(idx),
        candidate_value=candidate,
        soundness="horizon-conditional",
        witnesses=witnesses,
        classification={
            "locally_finite": True,
            "finite_type": False,
            "maximal": False,
            "uniform": True,
            "exact": True,
            "exact_from": 1,
            "galois_type": False,
            "alphabet_size": None,
            "hereditary_prefix": True,
            "symbol_hereditary_prefix": True,
            "monotone": False,
        },
        convention={
            "family": complete_family(1).metadata(),
            "witness_order": "lexicographic over alphabet order, edge 0 most significant",
            "injection": {},
        },
        backends=("short_circuit",),
        i_m=i_m,
        i_m_next=i_m_next,
        i_k=i_k,
        notes=notes,
    )


def polignac_ramsey(
    t: int, m: int, horizon: int, mode: str = "short_circuit", table: Optional[PrimeTable] = None,
    workers: int = 1, bound: int = DEFAULT_SCAN_BOUND,
) -> SearchReport:
    """Consecutive-prime gap 2t inside the window, via path-forced admissible colorings.

    ``short_circuit`` decides each index from the forced path edges alone,
    ``exhaustive`` runs the engine over every completion (CapacityError when
    too large), ``both`` runs the short circuit and checks it against the
    exhaustive engine on every index small enough to enumerate.
    """
    if min(t, m) < 1:
        raise ValueError("t and m must be positive")
    if mode not in ("short_circuit", "exhaustive", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    table = table or PrimeTable()
    table.p(m + horizon + 1)
    target = ColoredTarget.monochromatic(complete_graph(2), 2 * t)
    symbol = RamseySymbol((target,))
    base = _polignac_base(m, table, horizon)

    if mode == "exhaustive":
        for i in range(horizon + 1):
            need = polignac_capacity(i, m, table)
            if need > bound:
                raise CapacityError(f"exhaustive Polignac check at index {i} needs {need} colorings", bound, need)
        report = ramsey_number(base, symbol, horizon, workers=workers, bound=bound)
        checked = list(range(horizon + 1))
        agreement = None
    else:
        report = _short_circuit_report(t, m, horizon, table)
        checked = []
        agreement = None
        if mode == "both":
            agreement = True
            for i in range(horizon + 1):
                if polignac_capacity(i, m, table) > bound:
                    break
                for b in ("direct", "algebraic"):
                    r = arrows(base, symbol, i, b, workers=workers, bound=bound)
                    if r.holds != report.arrows_at(i) or r.witness != report.witnesses.get(i):
                        agreement = False
                checked.append(i)
            report.backends = ("short_circuit", "direct", "algebraic")

    oi, op = gap_oracle(2 * t, m, horizon, table)
    realizing = None
    if report.candidate_value is not None:
        w = table.window(m, report.candidate_value + 1)
        realizing = next([a, b] for a, b in zip(w, w[1:]) if b - a == 2 * t)
    report.convention["theta"] = THETA_CONVENTION
    report.convention["alphabet"] = "A_(i,m) = {0, ..., p_(m+i+1) - 1}"
    report.convention["forced_path"] = "edges {v_r, v_(r+1)} carry p_(m+r+1) - p_(m+r)"
    report.convention["sieve_bound"] = table.bound
    report.extras.update(
        {
            "t": t,
            "gap": 2 * t,
            "m": m,
            "mode": mode,
            "candidate_index": report.candidate_value,
            "realizing_primes": realizing,
            "oracle_candidate": oi,
            "oracle_primes": op,
            "oracle_agreement": report.candidate_value == oi and realizing == op and _persistence(report),
            "exhaustive_indices": checked,
            "window_primes": None if report.candidate_value is None else table.window(m, report.candidate_value + 1),
        }
    )
    if agreement is not None:
        report.extras["mode_agreement"] = agreement
    return report


def zhang_ramsey_scan(m_max: int, t_max: int, horizon: int, table: Optional[PrimeTable] = None) -> list[dict]:
    """For each t <= t_max: did the gap 2t show up for every starting prime p_m, m <= m_max?"""
    table = table or PrimeTable()
    rows = []
    for t in range(1, t_max + 1):
        cands = {}
        agree = True
        for m in range(1, m_max + 1):
            r = polignac_ramsey(t, m, horizon, "short_circuit", table)
            cands[m] = r.candidate_value
            agree = agree and r.extras["oracle_agreement"]
        rows.append(
            {
                "t": t,
                "gap": 2 * t,
                "found_for_all_m": all(c is not None for c in cands.values()),
                "candidates": {str(mm): c for mm, c in cands.items()},
                "oracle_agreement": agree,
            }
        )
    return rows
