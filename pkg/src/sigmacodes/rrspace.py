"""Riemann-Roch spaces L(A) by valuation-constrained linear algebra.

Every f in L(A) is written as (a + b*y)/c with a fixed denominator c built from
the positive finite part of A.  The unknown coefficients of a and b are
constrained by the vanishing of low-order expansion coefficients of the
numerator at each place where the required order is positive, and by degree
bounds derived from the places at infinity.  Conditions with coefficients in
F_{q^r} are split into F_q equations with trace coordinates, and the kernel
is found by row reduction over F_q.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from dataclasses import dataclass, field

from . import gf
from . import poly as P
from .curve import (
    MAX_PLACE_DEGREE,
    CurveModel,
    Divisor,
    FunctionElt,
    Place,
    RationalModel,
)
from .series import Laurent

ENUMERATION_LIMIT = 2**26


class RRError(ValueError):
    pass


class UnsupportedSupport(RRError):
    pass


class DimensionMismatch(RuntimeError):
    pass


class TooLarge(RRError):
    pass


@dataclass
class RRBasis:
    """Basis of L(A).

    ``numerators`` holds, for each basis element, the pair (a, b) with the
    element equal to (a + b*y)/denominator; ``basis`` holds the same elements
    in canonical form.
    """

    model: CurveModel
    divisor: Divisor
    denominator: tuple
    numerators: list
    basis: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def combine(self, coeffs) -> FunctionElt:
        F = self.model.field
        a: tuple = ()
        b: tuple = ()
        for lam, (na, nb) in zip(coeffs, self.numerators):
            if lam:
                a = P.add(F, a, P.scale(F, na, lam))
                b = P.add(F, b, P.scale(F, nb, lam))
        return self.model.canonical(a, b, self.denominator)


def kernel_basis(F: gf.FieldSpec, rows, ncols: int) -> list[list[int]]:
    """Basis of {v : M v = 0} from the reduced row echelon form of M.

    One vector per free column, with a 1 in that column, in column order.
    """
    rows = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][col])
        rows[r] = [F.mul(v, inv) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [F.sub(v, F.mul(f, w)) for v, w in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(rows[i][fc])
        out.append(v)
    return out


def _monomial_series(model: CurveModel, place: Place, da: int, db: int, need: int):
    """Expansions of x^0..x^da and x^0*y..x^db*y, each correct below t^need."""
    prec = need + 4
    while True:
        ch = model.chart(place, prec)
        one = Laurent(ch.K, 0, [1])
        xs = [one]
        for _ in range(max(da, db)):
            xs.append(xs[-1] * ch.x)
        mons = xs[: da + 1]
        if db >= 0:
            mons += [xs[j] * ch.y for j in range(db + 1)]
        short = need - min(m.prec for m in mons)
        if short <= 0:
            return ch.K, mons
        prec += short + 4
        if prec > 4096:
            raise DimensionMismatch(f"cannot reach expansion precision {need} at {place!r}")


def _denominator(model: CurveModel, A: Divisor):
    """Product over x-factors pi of pi^k, k the largest ceil(A_P / e_P) above pi."""
    F = model.field
    expo = {}
    for place, n in A.items():
        if place.infinite or n <= 0:
            continue
        pi = model.xpoly(place)
        k = -(-n // model.ramification(place))
        expo[pi] = max(expo.get(pi, 0), k)
    c = (1,)
    for pi, k in sorted(expo.items()):
        c = P.mul(F, c, P.power(F, pi, k))
    return c, sorted(expo)


def rr_basis(model: CurveModel, A: Divisor) -> RRBasis:
    """Basis of L(A) = {f : (f) + A >= 0} together with 0."""
    if model.counting_only:
        raise RRError("Riemann-Roch spaces need a rational or hyperelliptic model")
    for place in A.support:
        if place.degree > MAX_PLACE_DEGREE:
            raise UnsupportedSupport(f"place of degree {place.degree} in the support")
    F = model.field
    c, factors = _denominator(model, A)

    # thresholds: the numerator must have valuation >= thr at each place
    thresholds = {}
    for pi in factors:
        for place in model.places_above(pi):
            thresholds[place] = model._poly_valuation(place, c) - A[place]
    for place, n in A.items():
        if not place.infinite and place not in thresholds and n < 0:
            thresholds[place] = -n
    inf_places = model.infinite_places()
    for place in inf_places:
        thresholds[place] = model._poly_valuation(place, c) - A[place]

    if isinstance(model, RationalModel):
        da, db = -thresholds[inf_places[0]], -1
    elif model.hdeg == 4:
        K = max(-thresholds[p] for p in inf_places)
        da, db = K, K - 2
    else:
        T = -thresholds[inf_places[0]]
        da, db = math.floor(T / 2), math.floor((T - 3) / 2)
    da, db = max(da, -1), max(db, -1)
    ncols = (da + 1) + (db + 1)

    rows = []
    if ncols:
        for place, thr in sorted(thresholds.items()):
            K, mons = _monomial_series(model, place, da, db, thr)
            lo = min(m.val for m in mons)
            if lo >= thr:
                continue
            tc = gf.trace_coordinates(F, K) if place.degree > 1 else None
            for k in range(lo, thr):
                vals = [m.coeff(k) for m in mons]
                if tc is None:
                    rows.append(vals)
                else:
                    coords = [tc(v) for v in vals]
                    for j in range(place.degree):
                        rows.append([cv[j] for cv in coords])

    kernel = kernel_basis(F, rows, ncols) if ncols else []
    numerators = []
    basis = []
    for v in kernel:
        a, b = P.trim(v[: da + 1]), P.trim(v[da + 1 :])
        numerators.append((a, b))
        basis.append(model.canonical(a, b, c))
    out = RRBasis(model, A, c, numerators, basis)
    _check_dimension(out)
    return out


def expected_dimension(genus: int, A: Divisor):
    """Riemann-Roch dimension when it is determined by degree alone, else None."""
    d = A.degree
    if d < 0:
        return 0
    if not A:
        return 1
    if d >= 2 * genus - 1:
        return d - genus + 1
    return None


def _check_dimension(rb: RRBasis):
    dim = rb.dim
    exp = expected_dimension(rb.model.genus, rb.divisor)
    if exp is not None and dim != exp:
        raise DimensionMismatch(f"dim L({rb.divisor!r}) = {dim}, expected {exp}")
    if not 0 <= dim <= max(rb.divisor.degree + 1, 0) and rb.divisor:
        raise DimensionMismatch(f"dim L({rb.divisor!r}) = {dim} out of range")


def space_enumerate(rb: RRBasis):
    """All F_q-combinations of the basis; index i has coefficient k equal to
    the k-th base-q digit of i, so the zero function comes first."""
    q = rb.model.q
    if q**rb.dim > ENUMERATION_LIMIT:
        raise TooLarge(f"{q}^{rb.dim} functions exceed the enumeration limit")
    for digits in itertools.product(range(q), repeat=rb.dim):
        yield rb.combine(reversed(digits))


def exact_pole_subset(model: CurveModel, D: Divisor, G: Divisor, space) -> list[FunctionElt]:
    """Functions of L(D+G) whose pole order at each place of G is exactly (D+G)_Q."""
    A = D + G
    out = []
    for f in space:
        if f.is_zero():
            if not G:
                out.append(f)
            continue
        if all(model.valuation(Q, f) == -A[Q] for Q in G.support):
            out.append(f)
    return out


def exact_pole_count(q: int, genus: int, m: int, G: Divisor) -> int:
    """Closed-form |L_D(G)| = q^(m + deg G - g + 1) * prod over supp G of (1 - q^-deg Q)."""
    count = Fraction(q) ** (m + G.degree - genus + 1)
    for place in G.support:
        count *= 1 - Fraction(1, q**place.degree)
    if count.denominator != 1:
        raise ValueError(f"closed form is not an integer for m={m}, G={G!r}")
    return int(count)
