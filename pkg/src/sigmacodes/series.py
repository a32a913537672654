"""Truncated Laurent series over a finite field with absolute precision."""

from __future__ import annotations

from .gf import DivisionByZero, FieldSpec

EXACT = 1 << 30


class Laurent:
    """sum_i coeffs[i] * t^(val + i), known for every exponent below ``prec``.

    Coefficients past the end of ``coeffs`` (and below ``prec``) are zero.
    After normalisation either ``coeffs[0] != 0`` or the series is zero to its
    precision, in which case ``val == prec``.
    """

    __slots__ = ("F", "val", "coeffs", "prec")

    def __init__(self, F: FieldSpec, val: int, coeffs, prec: int = EXACT):
        self.F = F
        coeffs = list(coeffs[: max(prec - val, 0)])
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        i = 0
        while i < len(coeffs) and coeffs[i] == 0:
            i += 1
        if i == len(coeffs):
            self.val, self.coeffs = min(prec, EXACT), []
        else:
            self.val, self.coeffs = val + i, coeffs[i:]
        self.prec = prec

    @classmethod
    def from_poly(cls, F, coeffs, shift: int = 0, prec: int = EXACT):
        return cls(F, shift, coeffs, prec)

    @property
    def exact(self) -> bool:
        return self.prec >= EXACT

    def is_zero(self) -> bool:
        """True if no nonzero coefficient is known (zero to precision)."""
        return not self.coeffs

    def valuation(self) -> int | None:
        return None if not self.coeffs else self.val

    def coeff(self, n: int) -> int:
        if n >= self.prec:
            raise ValueError(f"coefficient t^{n} beyond precision {self.prec}")
        i = n - self.val
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: Laurent) -> Laurent:
        F = self.F
        prec = min(self.prec, other.prec)
        live = [s for s in (self, other) if s.coeffs]
        if not live:
            return Laurent(F, prec, [], prec)
        lo = min(s.val for s in live)
        hi = min(max(s.val + len(s.coeffs) for s in live), prec)
        out = [0] * max(hi - lo, 0)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                j = s.val + i - lo
                if 0 <= j < len(out):
                    out[j] = F.add(out[j], c)
        return Laurent(F, lo, out, prec)

    def __neg__(self) -> Laurent:
        return Laurent(self.F, self.val, [self.F.neg(c) for c in self.coeffs], self.prec)

    def __sub__(self, other: Laurent) -> Laurent:
        return self + (-other)

    def scale(self, s: int) -> Laurent:
        return Laurent(self.F, self.val, [self.F.mul(c, s) for c in self.coeffs], self.prec)

    def shift(self, n: int) -> Laurent:
        """Multiply by t^n."""
        prec = self.prec if self.exact else self.prec + n
        return Laurent(self.F, self.val + n, self.coeffs, prec)

    def __mul__(self, other: Laurent) -> Laurent:
        F = self.F
        v = self.val + other.val
        prec = min(_padd(self.prec, other.val), _padd(other.prec, self.val))
        n = min(len(self.coeffs) + len(other.coeffs) - 1, prec - v)
        out = F.convolve(self.coeffs, other.coeffs, max(n, 0))
        return Laurent(F, v, out, prec)

    def inverse(self, rel_prec: int) -> Laurent:
        """1/self to relative precision ``rel_prec`` (exact inputs allowed)."""
        if not self.coeffs:
            raise DivisionByZero("series is zero to its precision")
        F = self.F
        if not self.exact:
            rel_prec = min(rel_prec, self.prec - self.val)
        a = self.coeffs
        inv0 = F.inv(a[0])
        out = [inv0]
        for n in range(1, rel_prec):
            acc = 0
            for i in range(1, min(n, len(a) - 1) + 1):
                acc = F.add(acc, F.mul(a[i], out[n - i]))
            out.append(F.neg(F.mul(acc, inv0)))
        return Laurent(F, -self.val, out, -self.val + rel_prec)

    def truncate(self, prec: int) -> Laurent:
        return Laurent(self.F, self.val, self.coeffs, min(prec, self.prec))

    def __repr__(self):
        terms = [f"{c}*t^{self.val + i}" for i, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(t^{self.prec})" if not self.exact else body


def _padd(prec: int, v: int) -> int:
    return EXACT if prec >= EXACT else prec + v


def power_series_sqrt(F: FieldSpec, a, root0: int, n: int) -> list[int]:
    """First n coefficients of the square root of power series ``a`` whose
    constant term is root0^2 (odd characteristic, root0 != 0)."""
    out = [root0]
    inv2r = F.inv(F.add(root0, root0))
    for k in range(1, n):
        acc = a[k] if k < len(a) else 0
        for i in range(1, k):
            acc = F.sub(acc, F.mul(out[i], out[k - i]))
        out.append(F.mul(acc, inv2r))
    return out


def poly_compose_series(F: FieldSpec, coeffs, s: Laurent) -> Laurent:
    """Evaluate a polynomial at a Laurent series by Horner's rule."""
    acc = Laurent(F, 0, [], EXACT)
    for c in reversed(coeffs):
        acc = acc * s + Laurent(F, 0, [c], EXACT)
    return acc
