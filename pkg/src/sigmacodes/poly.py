"""Dense univariate polynomials over a FieldSpec.

A polynomial is a tuple of element indices, constant term first, with no
trailing zeros; the zero polynomial is ``()``.
"""

from __future__ import annotations

from .gf import DivisionByZero, FieldSpec

Poly = tuple


def trim(a) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def deg(a: Poly) -> int:
    return len(a) - 1


def const(c: int) -> Poly:
    return (c,) if c else ()


def add(F: FieldSpec, a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return trim(out)


def neg(F: FieldSpec, a: Poly) -> Poly:
    return tuple(F.neg(c) for c in a)


def sub(F: FieldSpec, a: Poly, b: Poly) -> Poly:
    return add(F, a, neg(F, b))


def scale(F: FieldSpec, a: Poly, s: int) -> Poly:
    if s == 0:
        return ()
    return tuple(F.mul(c, s) for c in a)


def mul(F: FieldSpec, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def power(F: FieldSpec, a: Poly, n: int) -> Poly:
    result: Poly = (1,)
    while n:
        if n & 1:
            result = mul(F, result, a)
        a = mul(F, a, a)
        n >>= 1
    return result


def divmod_(F: FieldSpec, a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = list(a)
    inv_lead = F.inv(b[-1])
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = F.mul(a[-1], inv_lead)
        quot[shift] = f
        for i, c in enumerate(b):
            a[i + shift] = F.sub(a[i + shift], F.mul(f, c))
        a = list(trim(a))
    return trim(quot), trim(a)


def monic(F: FieldSpec, a: Poly) -> Poly:
    if not a:
        return a
    return scale(F, a, F.inv(a[-1]))


def gcd(F: FieldSpec, a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, divmod_(F, a, b)[1]
    return monic(F, a)


def lcm(F: FieldSpec, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    return monic(F, divmod_(F, mul(F, a, b), gcd(F, a, b))[0])


def evaluate(F: FieldSpec, a: Poly, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def derivative(F: FieldSpec, a: Poly) -> Poly:
    out = []
    for i in range(1, len(a)):
        c = 0
        for _ in range(i % F.p):
            c = F.add(c, a[i])
        out.append(c)
    return trim(out)


def taylor_shift(F: FieldSpec, a: Poly, x0: int) -> Poly:
    """Coefficients of a(x0 + t) as a polynomial in t."""
    out: Poly = ()
    shift = (x0, 1) if x0 else (0, 1)
    for c in reversed(a):
        out = add(F, mul(F, out, shift), const(c))
    return out


def map_coeffs(a: Poly, table) -> Poly:
    return tuple(table[c] for c in a)


def multiplicity(F: FieldSpec, a: Poly, pi: Poly) -> int:
    """Largest n with pi^n | a (a nonzero)."""
    n = 0
    while True:
        quo, rem = divmod_(F, a, pi)
        if rem:
            return n
        a, n = quo, n + 1
