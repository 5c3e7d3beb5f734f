"""Arithmetic in GF(p^k) for q = p^k <= 2^16.

Elements are stored as integer codes ``c0 + c1*p + ... + c_{k-1}*p^(k-1)``
where ``c0 + c1*x + ...`` is the polynomial representative modulo the
field's monic irreducible modulus.  Multiplication goes through exp/log
tables built from a primitive element; addition is digit-wise.  The same
tables back the scalar API and the vectorized (numpy) API used by the
indicator evaluator.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Sequence

import numpy as np

__all__ = [
    "MAX_ORDER",
    "FieldSpec",
    "FieldElement",
    "FieldDomainError",
    "field",
    "all_elements",
    "inject_alphabet",
    "is_prime",
    "prime_power",
    "smallest_field_for",
]

MAX_ORDER = 1 << 16


class FieldDomainError(ArithmeticError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(n: int):
    """(p, k) with n == p**k, or None."""
    if n < 2:
        return None
    for p in range(2, n + 1):
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            return (p, k) if n == 1 else None
    return None


# -- polynomials over GF(p), coefficient lists low degree first ---------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(_trim(a)) - 1 >= dm:
        shift = len(a) - 1 - dm
        c = a[-1] * inv_lead % p
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
    return a


def _polymulmod(a, b, m, p):
    out = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _polymod(out, m, p)


def _monic_polys(degree, p):
    for code in range(p ** degree):
        coeffs = []
        c = code
        for _ in range(degree):
            coeffs.append(c % p)
            c //= p
        yield coeffs + [1]


def _is_irreducible(m, p):
    k = len(m) - 1
    if k == 1:
        return True
    for d in range(1, k // 2 + 1):
        for f in _monic_polys(d, p):
            if not _trim(_polymod(m, f, p)):
                return False
    return True


def _factorize(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _to_coeffs(code, p, k):
    out = []
    for _ in range(k):
        out.append(code % p)
        code //= p
    return out


def _to_code(coeffs, p):
    code = 0
    for c in reversed(coeffs):
        code = code * p + c
    return code


class FieldSpec:
    """GF(p^k) with a fixed modulus.  Equality is by (p, k, modulus)."""

    def __init__(self, p: int, k: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("degree k must be >= 1")
        q = p ** k
        if q > MAX_ORDER:
            raise ValueError(f"field order {q} exceeds {MAX_ORDER}")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if not _is_irreducible(list(modulus), p):
            raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        self.p, self.k, self.q, self.modulus = p, k, q, modulus
        self._build_tables()
        self._pow_cache = {}

    def _build_tables(self):
        p, k, q, m = self.p, self.k, self.q, list(self.modulus)
        order = q - 1
        primes = _factorize(order) if order > 1 else []

        def polypow(a, e):
            result, base = [1], list(a)
            while e:
                if e & 1:
                    result = _polymulmod(result, base, m, p)
                base = _polymulmod(base, base, m, p)
                e >>= 1
            return _trim(result)

        gen = None
        for code in range(1, q):
            g = _to_coeffs(code, p, k)
            if q == 2 or all(polypow(g, order // r) != [1] for r in primes):
                gen = g
                break
        exp = np.zeros(2 * order if order else 2, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        cur = [1]
        for e in range(order):
            code = _to_code(cur + [0] * (k - len(cur)), p)
            exp[e] = code
            log[code] = e
            cur = _trim(_polymulmod(cur, gen, m, p)) or [0]
        exp[order:] = exp[:order]
        self._exp, self._log = exp, log
        self.generator = _to_code(gen, p)

    # equality / identity
    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"GF({self.q})" if self.k == 1 else f"GF({self.p}^{self.k})"

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data) -> "FieldSpec":
        extra = set(data) - {"p", "k", "modulus"}
        if extra:
            raise ValueError(f"unknown field keys: {sorted(extra)}")
        spec = field(int(data["p"]), int(data.get("k", 1)))
        if "modulus" in data and tuple(data["modulus"]) != spec.modulus:
            return cls(spec.p, spec.k, data["modulus"])
        return spec

    # element construction
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element from a different field")
            return value
        if isinstance(value, (list, tuple)):
            if len(value) != self.k:
                raise ValueError(f"expected {self.k} coefficients")
            return FieldElement(self, _to_code([int(c) % self.p for c in value], self.p))
        return FieldElement(self, int(value) % self.p)

    def element(self, code: int) -> "FieldElement":
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range")
        return FieldElement(self, code)

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    def coefficients(self, code: int) -> list[int]:
        return _to_coeffs(code, self.p, self.k)

    # scalar arithmetic on codes
    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.k == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        out, scale = 0, 1
        for _ in range(self.k):
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if self.k == 1:
            return (-a) % p
        if p == 2:
            return a
        out, scale = 0, 1
        for _ in range(self.k):
            out += ((-(a % p)) % p) * scale
            a //= p
            scale *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldDomainError("inverse of zero")
        return int(self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return 1
        if a == 0:
            return 0
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # vectorized arithmetic on int64 code arrays
    def vadd(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        p = self.p
        if self.k == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.k):
            out += ((a % p + b % p) % p) * scale
            a, b = a // p, b // p
            scale *= p
        return out

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        p = self.p
        if self.k == 1:
            return (-a) % p
        if p == 2:
            return a.copy()
        out = np.zeros(a.shape, dtype=np.int64)
        scale = 1
        for _ in range(self.k):
            out += ((-(a % p)) % p) * scale
            a = a // p
            scale *= p
        return out

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        prod = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, prod)

    def pow_table(self, e: int) -> np.ndarray:
        """Lookup table ``t[a] = a**e`` over all codes, built by scalar pow."""
        t = self._pow_cache.get(e)
        if t is None:
            t = np.array([self.pow(a, e) for a in range(self.q)], dtype=np.int64)
            t.setflags(write=False)
            self._pow_cache[e] = t
        return t

    def vpow(self, a, e: int):
        return self.pow_table(e)[np.asarray(a, dtype=np.int64)]

    def int_code(self, n: int) -> int:
        """Code of the integer n viewed in the prime subfield (n * 1)."""
        return n % self.p


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    code: int

    @property
    def coefficients(self) -> list[int]:
        return self.field.coefficients(self.code)

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("operands from different fields")
            return other.code
        return self.field(other).code

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.code))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.code, e))

    def __truediv__(self, other):
        return self * self.inverse_of(other)

    def inverse_of(self, other):
        return FieldElement(self.field, self.field.inv(self._other(other)))

    def inv(self):
        return FieldElement(self.field, self.field.inv(self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        if self.field.k == 1:
            return f"{self.code}"
        terms = []
        for i, c in enumerate(self.coefficients):
            if c:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(mono if c == 1 and i else f"{c}{mono}")
        return "+".join(reversed(terms)) or "0"

    def to_json(self):
        return self.coefficients


@lru_cache(maxsize=None)
def field(p: int, k: int = 1) -> FieldSpec:
    """GF(p^k) with the least monic irreducible modulus.

    Moduli are ranked by the integer code of their lower coefficients, so
    the constant term varies fastest.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("degree k must be >= 1")
    if p ** k > MAX_ORDER:
        raise ValueError(f"field order {p ** k} exceeds {MAX_ORDER}")
    for m in _monic_polys(k, p):
        if _is_irreducible(m, p):
            return FieldSpec(p, k, m)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def all_elements(spec: FieldSpec) -> list[FieldElement]:
    """Every element, ordered by code: 0, 1, then the rest."""
    return [FieldElement(spec, c) for c in range(spec.q)]


def smallest_field_for(size: int) -> FieldSpec:
    """The smallest GF(q) with q >= max(size, 2)."""
    n = max(size, 2)
    while n <= MAX_ORDER:
        pk = prime_power(n)
        if pk:
            return field(*pk)
        n += 1
    raise ValueError(f"alphabet of size {size} does not fit in a field of order <= {MAX_ORDER}")


def inject_alphabet(labels: Sequence[Hashable], spec: FieldSpec) -> dict:
    """Map the i-th label to the i-th element of ``all_elements(spec)``."""
    labels = list(labels)
    if len(set(labels)) != len(labels):
        raise ValueError("labels must be pairwise distinct")
    if len(labels) > spec.q:
        raise ValueError(f"{len(labels)} labels do not inject into {spec!r}")
    return {lab: FieldElement(spec, i) for i, lab in enumerate(labels)}
