"""L-polynomials and counts of effective divisors by degree."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .gf import prime_power

MAX_IMAX = 64


class ZetaError(ValueError):
    pass


class HasseWeilViolation(ZetaError):
    pass


class NotASquare(ZetaError):
    pass


class FunctionalEquationError(ZetaError):
    pass


@dataclass(frozen=True)
class LPolynomial:
    q: int
    g: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != 2 * self.g + 1 or self.coeffs[0] != 1:
            raise ZetaError(f"need 2g+1 = {2 * self.g + 1} coefficients with a_0 = 1")

    @property
    def n_rational(self) -> int:
        """N_1 = q + 1 + a_1."""
        return self.q + 1 + (self.coeffs[1] if self.g else 0)

    def __call__(self, t):
        return sum(a * t**j for j, a in enumerate(self.coeffs))


@dataclass(frozen=True)
class ZetaTable:
    lpoly: LPolynomial
    counts: tuple

    @property
    def q(self) -> int:
        return self.lpoly.q

    @property
    def g(self) -> int:
        return self.lpoly.g

    def __getitem__(self, i: int) -> int:
        return self.counts[i]

    def __len__(self):
        return len(self.counts)

    def to_json(self) -> str:
        return json.dumps(
            {"q": self.q, "g": self.g, "coeffs": list(self.lpoly.coeffs), "counts": list(self.counts)}
        )

    @classmethod
    def from_json(cls, text: str) -> ZetaTable:
        obj = json.loads(text)
        L = lpoly_custom(obj["q"], obj["coeffs"])
        if L.g != obj["g"]:
            raise ZetaError(f"genus {obj['g']} does not match {len(obj['coeffs'])} coefficients")
        table = effective_counts(L, len(obj["counts"]) - 1)
        if list(table.counts) != [int(c) for c in obj["counts"]]:
            raise ZetaError("stored counts disagree with the L-polynomial")
        return table


def _check_q(q: int):
    if prime_power(q) is None:
        raise ZetaError(f"{q} is not a prime power")


def lpoly_rational(q: int) -> LPolynomial:
    _check_q(q)
    return LPolynomial(q, 0, (1,))


def lpoly_elliptic(q: int, N: int) -> LPolynomial:
    """1 + (N - q - 1) t + q t^2 for an elliptic field with N rational places."""
    _check_q(q)
    a1 = N - q - 1
    if a1 * a1 > 4 * q:
        raise HasseWeilViolation(f"N = {N} is outside the Hasse-Weil interval for q = {q}")
    return LPolynomial(q, 1, (1, a1, q))


def lpoly_maximal(q: int, g: int) -> LPolynomial:
    """(1 + sqrt(q) t)^(2g)."""
    _check_q(q)
    r = math.isqrt(q)
    if r * r != q:
        raise NotASquare(f"{q} is not a square")
    return LPolynomial(q, g, tuple(math.comb(2 * g, j) * r**j for j in range(2 * g + 1)))


def lpoly_custom(q: int, coeffs) -> LPolynomial:
    """User-supplied coefficients, validated by the functional equation."""
    _check_q(q)
    coeffs = tuple(int(c) for c in coeffs)
    if len(coeffs) % 2 != 1:
        raise ZetaError("an L-polynomial has odd length 2g+1")
    g = len(coeffs) // 2
    for j in range(g + 1):
        if coeffs[2 * g - j] != q ** (g - j) * coeffs[j]:
            raise FunctionalEquationError(f"a_{2 * g - j} != q^{g - j} a_{j}")
    return LPolynomial(q, g, coeffs)


def effective_counts(L: LPolynomial, imax: int) -> ZetaTable:
    """A_0..A_imax, the numbers of effective divisors of each degree."""
    if not 0 <= imax <= MAX_IMAX:
        raise ZetaError(f"imax must lie in [0, {MAX_IMAX}]")
    q, a = L.q, L.coeffs
    counts = []
    for i in range(imax + 1):
        total = 0
        for j in range(min(i, 2 * L.g) + 1):
            total += (q ** (i + 1 - j) - 1) // (q - 1) * a[j]
        counts.append(total)
    return ZetaTable(L, tuple(counts))


def zeta_for_model(model, imax: int = 4) -> ZetaTable:
    """Table for a curve model from its genus and rational-place count."""
    if model.genus == 0:
        L = lpoly_rational(model.q)
    elif model.genus == 1:
        L = lpoly_elliptic(model.q, model.point_count(1))
    else:
        L = lpoly_maximal(model.q, model.genus)
        if L.n_rational != model.point_count(1):
            raise ZetaError("only maximal fields are supported in genus >= 2")
    return effective_counts(L, imax)
