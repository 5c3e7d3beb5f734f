"""Invariant checks behind ``genramsey selftest``.

Each check returns ``None`` on success or a short reproducer string naming
the smallest failing input it saw.  Field checks accept injected
``FieldSpec`` objects so a corrupted table can be fed through them.
"""

from __future__ import annotations

import itertools
import json
import random
from typing import Callable, Optional, Sequence

import numpy as np

from .finite_field import FieldSpec, field
from .graph_core import complete_family, complete_graph, enumerate_embeddings, path_graph
from .indicator import ColoredTarget, build_indicator, check_ideal_membership, evaluate_rows
from .finite_field import _polymulmod, _to_code, _to_coeffs, _trim, all_elements, inject_alphabet
from .ramsey_engine import MAXIMAL, Admissible, RamseyBase, RamseySymbol, classical_instance, ramsey_number, resolution_invariance_check

DEFAULT_FIELDS = ((2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2))


def _fields(fields):
    if fields is None:
        return [field(p, k) for p, k in DEFAULT_FIELDS]
    return list(fields)


def check_fermat(fields=None) -> Optional[str]:
    for F in _fields(fields):
        for a in range(1, F.q):
            if F.pow(a, F.q - 1) != 1:
                return f"{F!r}: element code {a} has a^(q-1) = {F.pow(a, F.q - 1)}"
    return None


def check_inverse(fields=None) -> Optional[str]:
    for F in _fields(fields):
        for a in range(1, F.q):
            if F.mul(a, F.inv(a)) != 1:
                return f"{F!r}: a * a^-1 != 1 for code {a}"
    return None


def check_mul_reference(fields=None) -> Optional[str]:
    """Table multiplication against schoolbook multiplication mod the modulus."""
    for F in _fields(fields):
        m = list(F.modulus)
        for a, b in itertools.product(range(F.q), repeat=2):
            ref = _trim(_polymulmod(_to_coeffs(a, F.p, F.k), _to_coeffs(b, F.p, F.k), m, F.p))
            ref_code = _to_code(ref + [0] * (F.k - len(ref)), F.p) if ref else 0
            if F.mul(a, b) != ref_code:
                return f"{F!r}: {a} * {b} gives {F.mul(a, b)}, expected {ref_code}"
    return None


def check_embedding_count() -> Optional[str]:
    n = len(enumerate_embeddings(complete_graph(3), complete_graph(4)))
    return None if n == 24 else f"|K4/K3| = {n}"


def _zero_set_agrees(G, targets, F) -> Optional[str]:
    expr = build_indicator(G, targets, F)
    rows = np.array(list(itertools.product(range(F.q), repeat=G.edge_count)), dtype=np.int64).reshape(-1, G.edge_count)
    vanish = evaluate_rows(expr, rows) == 0
    for r, v in zip(rows, vanish):
        direct = any(
            all(int(r[e]) == c.code for e, c in zip(emb.edge_map, ct.colors))
            for ct in targets
            for emb in enumerate_embeddings(ct.target, G)
        )
        if direct != bool(v):
            return f"host {G.edges} over {F!r}, coloring {r.tolist()}: vanishes={bool(v)} contains={direct}"
    return None


def check_zero_set() -> Optional[str]:
    F2, F3 = field(2), field(3)
    cases = [
        (complete_graph(4), [ColoredTarget.monochromatic(complete_graph(3), F2(0)), ColoredTarget.monochromatic(complete_graph(3), F2(1))], F2),
        (path_graph(3), [ColoredTarget(path_graph(2), (F3(1), F3(2)))], F3),
    ]
    for G, targets, F in cases:
        bad = _zero_set_agrees(G, targets, F)
        if bad:
            return bad
    return None


def check_classical(workers: int = 1) -> Optional[str]:
    base, sym = classical_instance([3, 3])
    r = ramsey_number(base, sym, 7, workers=workers)
    if r.candidate_value != 6 or r.soundness != "exact":
        return f"classical 3 3 --horizon 7 gave {r.candidate_value} ({r.soundness})"
    return None


def check_membership() -> Optional[str]:
    F = field(2)
    for n, want in ((4, False), (5, False), (6, True)):
        expr = build_indicator(
            complete_graph(n), [ColoredTarget.monochromatic(complete_graph(3), F(c)) for c in (0, 1)], F
        )
        got = check_ideal_membership(expr).member
        if got != want:
            return f"K{n} triangle instance: member={got}"
    return None


def _random_instance(rng: random.Random):
    q = rng.choice([2, 3])
    alphabet = tuple(range(q))
    X = rng.choice([complete_graph(2), path_graph(2), complete_graph(3)])
    ct = ColoredTarget(X, tuple(rng.randrange(q) for _ in X.edges))
    return RamseyBase(complete_family(0), alphabet, MAXIMAL), RamseySymbol((ct,))


def check_symbol_extension(trials: int = 10, seed: int = 7) -> Optional[str]:
    rng = random.Random(seed)
    for n in range(trials):
        base, sym = _random_instance(rng)
        q = len(base.alphabet)
        extra = ColoredTarget(complete_graph(2), (rng.randrange(q),))
        big = RamseySymbol(sym.targets + (extra,))
        a = ramsey_number(base, sym, 5).candidate_value
        b = ramsey_number(base, big, 5).candidate_value
        if a is not None and (b is None or b > a):
            return f"trial {n} (seed {seed}): extended symbol gave {b} > {a}"
    return None


def check_base_restriction(trials: int = 10, seed: int = 11) -> Optional[str]:
    rng = random.Random(seed)
    for n in range(trials):
        base, sym = _random_instance(rng)
        keep = {}

        def adm(i, keep=keep):
            if i not in keep:
                G = base.family(i)
                full = list(itertools.product(base.alphabet, repeat=G.edge_count))
                keep[i] = Admissible.explicit(full[:: 1 + (i % 3)])
            return keep[i]

        small = RamseyBase(base.family, base.alphabet, adm)
        s = ramsey_number(base, sym, 4).candidate_value
        l_ = ramsey_number(small, sym, 4).candidate_value
        if s is not None and (l_ is None or l_ > s):
            return f"trial {n} (seed {seed}): restricted base gave {l_} > {s}"
    return None


def check_resolution() -> Optional[str]:
    base, sym = classical_instance([3, 3])
    return None if resolution_invariance_check(base, sym, 6) else "classical 3 3 resolution at horizon 6"


def check_embedding_invariance() -> Optional[str]:
    base = RamseyBase(complete_family(0), ("a", "b", "c"), MAXIMAL)
    sym = RamseySymbol((ColoredTarget.monochromatic(complete_graph(2), "a"), ColoredTarget(path_graph(2), ("b", "c"))))
    F = field(2, 2)
    els = all_elements(F)
    inj1 = dict(zip(("a", "b", "c"), els[:3]))
    inj2 = dict(zip(("a", "b", "c"), [els[3], els[1], els[0]]))
    r1 = ramsey_number(base, sym, 4, injection=lambda i: inj1)
    r2 = ramsey_number(base, sym, 4, injection=lambda i: inj2)
    if (r1.arrows_trace, r1.candidate_value) != (r2.arrows_trace, r2.candidate_value):
        return f"injections {inj1} and {inj2} give different traces"
    return None


def check_prime_oracles() -> Optional[str]:
    from .prime_encodings import PrimeTable, ap_ramsey, polignac_ramsey, twin_prime_ramsey

    T = PrimeTable(10 ** 5)
    r = ap_ramsey(3, 6, 1, 12, T)
    if r.candidate_value != 8 or r.extras["realizing_primes"] != [5, 11, 17, 23]:
        return f"ap 3 6 1 gave {r.candidate_value} {r.extras['realizing_primes']}"
    for m in range(1, 11):
        r = twin_prime_ramsey(m, 10, T)
        if not r.extras["oracle_agreement"]:
            return f"twin m={m}: engine {r.candidate_value}, oracle {r.extras['oracle_candidate']}"
    r = polignac_ramsey(1, 1, 6, "both", T)
    if not (r.extras["mode_agreement"] and r.extras["oracle_agreement"]):
        return "polignac t=1 m=1 modes disagree"
    return None


def check_determinism() -> Optional[str]:
    base, sym = classical_instance([3, 3])
    a = json.dumps(ramsey_number(base, sym, 6, workers=1).to_json(), sort_keys=True)
    b = json.dumps(ramsey_number(base, sym, 6, workers=3).to_json(), sort_keys=True)
    return None if a == b else "classical 3 3 --horizon 6 differs between 1 and 3 workers"


def suite(fields: Optional[Sequence[FieldSpec]] = None) -> list[tuple[str, Callable[[], Optional[str]]]]:
    return [
        ("field: a^(q-1) = 1", lambda: check_fermat(fields)),
        ("field: a * a^-1 = 1", lambda: check_inverse(fields)),
        ("field: table product matches polynomial product", lambda: check_mul_reference(fields)),
        ("embeddings: |K4/K3| = 24", check_embedding_count),
        ("indicator: zero set equals containment", check_zero_set),
        ("engine: backends agree, R(3,3) = 6", check_classical),
        ("indicator: field-ideal membership", check_membership),
        ("monotonicity: symbol extension", check_symbol_extension),
        ("monotonicity: base restriction", check_base_restriction),
        ("resolution invariance", check_resolution),
        ("alphabet embedding invariance", check_embedding_invariance),
        ("primes: engine matches sieve oracles", check_prime_oracles),
        ("determinism across worker counts", check_determinism),
    ]


def run(fields: Optional[Sequence[FieldSpec]] = None, only: Optional[Sequence[str]] = None) -> list[dict]:
    results = []
    for name, fn in suite(fields):
        if only and not any(o in name for o in only):
            continue
        try:
            repro = fn()
        except Exception as exc:  # a crash is a failure of that property
            repro = f"raised {type(exc).__name__}: {exc}"
        results.append({"property": name, "passed": repro is None, "reproducer": repro})
    return results
