"""Arithmetic in small finite fields F_{p^k}.

Elements are plain integers.  The element with index ``c_0 + c_1 p + ... +
c_{k-1} p^{k-1}`` is the residue class of ``c_0 + c_1 z + ... + c_{k-1} z^{k-1}``
modulo the field's monic irreducible modulus.  Index 0 is zero, index 1 is one,
and indices below ``p`` are the prime subfield.

Moduli come from the shipped table ``data/moduli.txt`` so every output that
depends on a representation is reproducible.
"""

from __future__ import annotations

import functools
import itertools
from array import array
from dataclasses import dataclass
from importlib import resources
from math import isqrt

import numpy as np

MAX_ORDER = 2**14

# above this order addition goes through digit vectors instead of a table
_ADD_TABLE_LIMIT = 1400
_NUMPY_TABLE_LIMIT = 2048


class FieldError(ValueError):
    pass


class NotPrime(FieldError):
    pass


class UnsupportedSize(FieldError):
    pass


class ReducibleModulus(FieldError):
    pass


class NoEmbedding(FieldError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, a)`` with ``q == p**a`` or None if q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, isqrt(q) + 1):
        if q % p == 0:
            if not is_prime(p):
                return None
            a = 0
            while q % p == 0:
                q //= p
                a += 1
            return (p, a) if q == 1 else None
    return (q, 1)


def prime_factors(n: int) -> list[int]:
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


# -- polynomials over F_p as coefficient lists, low degree first ---------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _rem_mod_p(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        f = a[-1] * inv_lead % p
        for i, c in enumerate(b):
            a[i + shift] = (a[i + shift] - f * c) % p
        _trim(a)
    return a


def is_irreducible_mod_p(coeffs, p: int) -> bool:
    """Trial-divide a polynomial over F_p by every monic polynomial of degree
    at most half its degree."""
    f = _trim([c % p for c in coeffs])
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            if not _rem_mod_p(f, list(tail) + [1], p):
                return False
    return True


@functools.lru_cache(maxsize=1)
def modulus_table() -> dict[tuple[int, int], tuple[int, ...]]:
    text = resources.files("sigmacodes").joinpath("data/moduli.txt").read_text()
    table = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        nums = [int(t) for t in line.split()]
        p, k, coeffs = nums[0], nums[1], tuple(nums[2:])
        if len(coeffs) != k + 1:
            raise ReducibleModulus(f"malformed modulus entry for ({p}, {k})")
        table[p, k] = coeffs
    return table


class FieldSpec:
    """The field F_{p^k} with a fixed modulus and element enumeration order."""

    def __init__(self, p: int, k: int, modulus):
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ReducibleModulus(f"modulus for F_{p}^{k} must be monic of degree {k}")
        if not is_irreducible_mod_p(modulus, p):
            raise ReducibleModulus(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self._pows = [p**i for i in range(k)]
        self._build_tables()

    # -- table construction --

    def _digits(self, e: int) -> list[int]:
        out = []
        for _ in range(self.k):
            e, r = divmod(e, self.p)
            out.append(r)
        return out

    def _encode(self, digits) -> int:
        return sum(c * w for c, w in zip(digits, self._pows))

    def _slow_mul(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for i in range(2 * k - 2, k - 1, -1):
            f = prod[i]
            if f:
                for j in range(k + 1):
                    prod[i - k + j] = (prod[i - k + j] - f * self.modulus[j]) % p
        return self._encode(prod[:k])

    def _slow_pow(self, a: int, n: int) -> int:
        result = 1
        while n:
            if n & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            n >>= 1
        return result

    def _is_primitive(self, g: int) -> bool:
        n = self.q - 1
        if self.k == 1:
            return all(pow(g, n // l, self.p) != 1 for l in prime_factors(n))
        return all(self._slow_pow(g, n // l) != 1 for l in prime_factors(n))

    def _build_tables(self):
        q, p, k = self.q, self.p, self.k
        if q == 2:
            gen = 1
        elif k > 1 and self._is_primitive(p):
            gen = p
        else:
            gen = next(g for g in range(2, q) if self._is_primitive(g))
        self.generator = gen
        if k == 1:
            self._prime_tables(gen)
        else:
            self._power_tables(gen)
        self._finish_tables()

    def _prime_tables(self, gen: int):
        # powers by doubling: exp[L:2L] = exp[:L] * gen^L
        p = self.p
        powers = np.ones(p - 1, dtype=np.int64)
        filled, step = 1, gen % p
        while filled < p - 1:
            take = min(filled, p - 1 - filled)
            powers[filled : filled + take] = powers[:take] * step % p
            filled += take
            step = step * step % p
        log = np.zeros(p, dtype=np.int64)
        log[powers] = np.arange(p - 1)
        self._exp = powers.tolist() * 2
        self._log = log.tolist()

    def _power_tables(self, gen: int):
        q, p, k = self.q, self.p, self.k
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            if gen == p:
                # multiply by z: shift digits and reduce the overflow
                d = self._digits(x)
                top = d[-1]
                d = [0] + d[:-1]
                if top:
                    d = [(c - top * m) % p for c, m in zip(d, self.modulus)]
                x = self._encode(d)
            else:
                x = self._slow_mul(x, gen)
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        self._exp = exp
        self._log = log

    def _finish_tables(self):
        q, p, k = self.q, self.p, self.k
        if k == 1:
            self._neg = ((-np.arange(q)) % p).tolist()
        else:
            self._neg = [self._encode([(-c) % p for c in self._digits(e)]) for e in range(q)]
        self._add = None
        if p > 2 and k > 1 and q <= _ADD_TABLE_LIMIT:
            digits = np.array([self._digits(e) for e in range(q)], dtype=np.int64)
            weights = np.array(self._pows, dtype=np.int64)
            flat = array("i")
            for a in range(q):
                row = ((digits[a] + digits) % p) @ weights
                flat.extend(row.tolist())
            self._add = flat

        if p == 2:
            half = q // 2
            self._sqrt = [self.pow(e, half) for e in range(q)]
        else:
            if k == 1:
                # e and p - e share a square; the half-range holds each square once
                half = np.arange((p + 1) // 2, dtype=np.int64)
                roots = np.full(q, -1, dtype=np.int64)
                roots[half * half % p] = half
                self._sqrt = roots.tolist()
            else:
                roots = [-1] * q
                for e in range(q - 1, -1, -1):
                    roots[self.mul(e, e)] = e
                self._sqrt = roots

    # -- arithmetic on indices --

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add is not None:
            return self._add[a * self.q + b]
        if self.k == 1:
            return (a + b) % self.p
        return self._encode([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        if a == 0:
            return 1 if n == 0 else 0
        n %= self.q - 1
        result = 1
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def is_square(self, a: int) -> bool:
        return self._sqrt[a] >= 0

    def sqrt(self, a: int) -> int | None:
        r = self._sqrt[a]
        return None if r < 0 else r

    def frobenius(self, a: int, q: int) -> int:
        return self.pow(a, q)

    def coeffs(self, a: int) -> list[int]:
        return self._digits(a)

    def from_coeffs(self, coeffs) -> int:
        return self._encode([c % self.p for c in coeffs])

    def elements(self) -> range:
        return range(self.q)

    def element(self, index: int) -> FieldElement:
        if not 0 <= index < self.q:
            raise FieldError(f"index {index} outside F_{self.q}")
        return FieldElement(self, index)

    def sum(self, values) -> int:
        acc = 0
        for v in values:
            acc = self.add(acc, v)
        return acc

    def dot(self, xs, ys) -> int:
        acc = 0
        for x, y in zip(xs, ys):
            if x and y:
                acc = self.add(acc, self._exp[self._log[x] + self._log[y]])
        return acc

    def convolve(self, xs, ys, n: int) -> list[int]:
        """First n coefficients of the product of two coefficient lists."""
        out = [0] * n
        if self.k == 1:
            p = self.p
            for i, x in enumerate(xs[:n]):
                if x:
                    for j, y in enumerate(ys[: n - i]):
                        out[i + j] += x * y
            return [v % p for v in out]
        exp, log, add = self._exp, self._log, self.add
        for i, x in enumerate(xs[:n]):
            if x:
                lx = log[x]
                for j, y in enumerate(ys[: n - i]):
                    if y:
                        out[i + j] = add(out[i + j], exp[lx + log[y]])
        return out

    # -- vectorised tables --

    @functools.cached_property
    def add_table(self) -> np.ndarray:
        self._check_numpy_size()
        q = self.q
        return np.array([[self.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int32)

    @functools.cached_property
    def mul_table(self) -> np.ndarray:
        self._check_numpy_size()
        q = self.q
        log = np.array(self._log, dtype=np.int64)
        exp = np.array(self._exp, dtype=np.int32)
        table = exp[log[:, None] + log[None, :]]
        table[0, :] = 0
        table[:, 0] = 0
        return table

    def _check_numpy_size(self):
        if self.q > _NUMPY_TABLE_LIMIT:
            raise UnsupportedSize(f"no dense tables for F_{self.q}")

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.k, self.modulus) == (
            other.p,
            other.k,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"GF({self.q})"


@functools.lru_cache(maxsize=None)
def field_make(p: int, k: int = 1) -> FieldSpec:
    """Build F_{p^k} from the shipped modulus table (x for prime fields)."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1 or p**k > MAX_ORDER:
        raise UnsupportedSize(f"F_{p}^{k} is outside the supported range (order <= {MAX_ORDER})")
    if k == 1:
        return FieldSpec(p, 1, (0, 1))
    try:
        modulus = modulus_table()[p, k]
    except KeyError:
        raise UnsupportedSize(f"no shipped modulus for F_{p}^{k}") from None
    return FieldSpec(p, k, modulus)


def field_of_order(q: int) -> FieldSpec:
    pa = prime_power(q)
    if pa is None:
        raise NotPrime(f"{q} is not a prime power")
    return field_make(*pa)


def extension(field: FieldSpec, r: int) -> FieldSpec:
    """The degree-r extension F_{q^r} of ``field``."""
    return field_make(field.p, field.k * r)


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    index: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("operands from different fields")
            return other.index
        return self.field.from_coeffs([other])

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.index, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.index, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.index))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.index, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.index, self._other(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.index))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.index, n))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.index))

    def is_square(self) -> bool:
        return self.field.is_square(self.index)

    def sqrt(self):
        r = self.field.sqrt(self.index)
        return None if r is None else FieldElement(self.field, r)

    def __int__(self):
        return self.index

    def __repr__(self):
        return f"{self.index}@{self.field!r}"


_ARITH = {
    "add": 2,
    "sub": 2,
    "mul": 2,
    "neg": 1,
    "inv": 1,
    "pow": 2,
}


def arith(op: str, *operands) -> FieldElement:
    """Dispatch a named field operation on FieldElement operands.

    ``pow`` takes an element and an integer exponent.
    """
    if op not in _ARITH or len(operands) != _ARITH[op]:
        raise FieldError(f"bad operation {op!r} with {len(operands)} operands")
    first = operands[0]
    F = first.field
    if op == "pow":
        return FieldElement(F, F.pow(first.index, int(operands[1])))
    if op in ("neg", "inv"):
        return FieldElement(F, getattr(F, op)(first.index))
    second = operands[1]
    if second.field != F:
        raise FieldError("operands from different fields")
    return FieldElement(F, getattr(F, op)(first.index, second.index))


class Embedding:
    """Injective ring map F_{p^a} -> F_{p^b} for a | b.

    The generator of the small field goes to the smallest-index root of its
    modulus in the big field.
    """

    def __init__(self, sub: FieldSpec, sup: FieldSpec):
        if sub.p != sup.p or sup.k % sub.k:
            raise NoEmbedding(f"{sub!r} does not embed in {sup!r}")
        self.sub = sub
        self.sup = sup
        if sub.k == 1:
            self.root = None
            table = list(range(sub.q))
        else:
            self.root = next(z for z in sup.elements() if _eval_prime_poly(sup, sub.modulus, z) == 0)
            powers = [1]
            for _ in range(sub.k - 1):
                powers.append(sup.mul(powers[-1], self.root))
            table = []
            for e in sub.elements():
                acc = 0
                for c, zp in zip(sub.coeffs(e), powers):
                    for _ in range(c):
                        acc = sup.add(acc, zp)
                table.append(acc)
        self.table = table
        self._back = {v: i for i, v in enumerate(table)}

    def __call__(self, e: int) -> int:
        return self.table[e]

    def contains(self, z: int) -> bool:
        return z in self._back

    def restrict(self, z: int) -> int:
        """Inverse map on the image; raises if z is not in the subfield."""
        try:
            return self._back[z]
        except KeyError:
            raise NoEmbedding(f"{z} is not in the image of {self.sub!r}") from None


def _eval_prime_poly(field: FieldSpec, coeffs, z: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = field.add(field.mul(acc, z), c % field.p)
    return acc


@functools.lru_cache(maxsize=None)
def embedding(sub: FieldSpec, sup: FieldSpec) -> Embedding:
    return Embedding(sub, sup)


def embed(sub: FieldSpec, sup: FieldSpec, e) -> FieldElement:
    index = e.index if isinstance(e, FieldElement) else int(e)
    return FieldElement(sup, embedding(sub, sup)(index))


def frobenius(e: FieldElement, q: int) -> FieldElement:
    F = e.field
    if F.q % q or prime_power(q) is None or prime_power(q)[0] != F.p:
        raise FieldError(f"{q} is not a subfield order of {F!r}")
    return FieldElement(F, F.pow(e.index, q))


class TraceCoordinates:
    """F_q-linear coordinates on F_{q^r}: z -> (Tr(gamma^i z))_{i<r}.

    gamma is the smallest-index element outside F_q; for r in {2, 3} its powers
    form a basis, so the coordinates vanish together exactly when z = 0.
    """

    def __init__(self, base: FieldSpec, ext: FieldSpec):
        self.base = base
        self.ext = ext
        self.emb = embedding(base, ext)
        self.r = ext.k // base.k
        if self.r == 1:
            self.multipliers = [1]
            return
        gamma = next(z for z in ext.elements() if not self.emb.contains(z))
        if self.r not in (2, 3) and not _generates(ext, base, gamma, self.r):
            gamma = next(z for z in ext.elements() if _generates(ext, base, z, self.r))
        mults = [1]
        for _ in range(self.r - 1):
            mults.append(ext.mul(mults[-1], gamma))
        self.multipliers = mults

    def trace(self, z: int) -> int:
        ext, q = self.ext, self.base.q
        acc, w = 0, z
        for _ in range(self.r):
            acc = ext.add(acc, w)
            w = ext.pow(w, q)
        return self.emb.restrict(acc)

    def __call__(self, z: int) -> list[int]:
        if self.r == 1:
            return [z]
        return [self.trace(self.ext.mul(m, z)) for m in self.multipliers]


def _generates(ext, base, z, r) -> bool:
    w, q = z, base.q
    for i in range(1, r):
        w = ext.pow(w, q)
        if w == z:
            return False
    return True


@functools.lru_cache(maxsize=None)
def trace_coordinates(base: FieldSpec, ext: FieldSpec) -> TraceCoordinates:
    return TraceCoordinates(base, ext)
