"""Function-field models, their places, valuations and local expansions.

Three models are supported:

* ``RationalModel``: the projective line over F_q.
* ``HyperellipticModel``: y^2 = h(x) with h squarefree of degree 3 or 4
  (genus 1), odd characteristic.
* ``PlaneAffineModel``: an arbitrary plane curve F(x, y) = 0, used only for
  counting points (its places at infinity are declared by the caller).

Functions are stored as ``(a + b*y)/c`` with a, b, c in F_q[x]; a place is the
Frobenius orbit of a geometric point over F_{q^deg}, represented by the orbit
element with the smallest (x, y) index pair.  Valuations and values come from
power-series expansions in a uniformizer at one geometric point of the orbit.
"""

from __future__ import annotations

import ast
import functools
import itertools
import math
from dataclasses import dataclass

from . import gf
from . import poly as P
from .gf import FieldSpec
from .series import EXACT, Laurent, poly_compose_series, power_series_sqrt

MAX_PLACE_DEGREE = 3
MAX_EXPANSION_PREC = 64
_MAX_INTERNAL_PREC = 512


class CurveError(ValueError):
    pass


class UnsupportedModel(CurveError):
    pass


class UnsupportedDegree(CurveError):
    pass


class UnsupportedFactor(CurveError):
    pass


class PrecisionExceeded(CurveError):
    pass


class CurveParseError(CurveError):
    pass


class _Infinity:
    """The extra code symbol: value of a function at one of its poles."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


@dataclass(frozen=True)
class Place:
    """Closed point: orbit representative over F_{q^degree}.

    Affine places carry the point (x, y); places at infinity have ``x=None``
    and, for quartic models, ``y`` holds the branch value of y/x^2.
    """

    degree: int
    x: int | None = None
    y: int | None = None

    @property
    def infinite(self) -> bool:
        return self.x is None

    def sort_key(self):
        return (
            self.degree,
            0 if self.infinite else 1,
            -1 if self.x is None else self.x,
            -1 if self.y is None else self.y,
        )

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        if self.infinite:
            branch = "" if self.y is None else f", s={self.y}"
            return f"Place(deg={self.degree}, inf{branch})"
        ys = "" if self.y is None else f", y={self.y}"
        return f"Place(deg={self.degree}, x={self.x}{ys})"


class Divisor:
    """Finite formal sum of places with nonzero integer coefficients."""

    __slots__ = ("_c", "_key")

    def __init__(self, coeffs=None):
        c = {}
        for place, n in dict(coeffs or {}).items():
            if n:
                c[place] = int(n)
        self._c = c
        self._key = tuple(sorted(c.items(), key=lambda kv: kv[0].sort_key()))

    @classmethod
    def point(cls, place: Place, n: int = 1) -> Divisor:
        return cls({place: n})

    def __getitem__(self, place: Place) -> int:
        return self._c.get(place, 0)

    def items(self):
        return iter(self._key)

    @property
    def support(self) -> list[Place]:
        return [p for p, _ in self._key]

    @property
    def degree(self) -> int:
        return sum(n * p.degree for p, n in self._key)

    @property
    def is_effective(self) -> bool:
        return all(n > 0 for _, n in self._key)

    def _combine(self, other: Divisor, op) -> Divisor:
        places = set(self._c) | set(other._c)
        return Divisor({p: op(self[p], other[p]) for p in places})

    def __add__(self, other: Divisor) -> Divisor:
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: Divisor) -> Divisor:
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self) -> Divisor:
        return Divisor({p: -n for p, n in self._c.items()})

    def __mul__(self, k: int) -> Divisor:
        return Divisor({p: k * n for p, n in self._c.items()})

    __rmul__ = __mul__

    def union(self, other: Divisor) -> Divisor:
        return self._combine(other, max)

    def intersection(self, other: Divisor) -> Divisor:
        return self._combine(other, min)

    __or__ = union
    __and__ = intersection

    def __le__(self, other: Divisor) -> bool:
        return all(self[p] <= other[p] for p in set(self._c) | set(other._c))

    def __eq__(self, other):
        return isinstance(other, Divisor) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __bool__(self):
        return bool(self._c)

    def __repr__(self):
        if not self._c:
            return "Divisor(0)"
        return "Divisor(" + " + ".join(f"{n}*{p!r}" for p, n in self._key) + ")"


def divisor_ops(G: Divisor, D: Divisor) -> dict:
    """Union, intersection, sum, degrees and supports of a pair of divisors."""
    return {
        "union": G | D,
        "intersection": G & D,
        "sum": G + D,
        "degree": (G.degree, D.degree),
        "support": (G.support, D.support),
    }


@dataclass(frozen=True)
class FunctionElt:
    """(a + b*y)/c with polynomial coefficient tuples; see CurveModel.canonical."""

    a: tuple = ()
    b: tuple = ()
    c: tuple = (1,)

    def is_zero(self) -> bool:
        return not self.a and not self.b


ZERO = FunctionElt()


@dataclass
class Chart:
    """Local coordinates at a geometric point: x and y as Laurent series in a
    uniformizer t over the residue field ``K``."""

    K: FieldSpec
    emb: gf.Embedding
    x: Laurent
    y: Laurent | None


class CurveModel:
    genus = 0
    counting_only = False

    def __init__(self, field: FieldSpec):
        self.field = field
        self._charts = {}

    @property
    def q(self) -> int:
        return self.field.q

    # -- function arithmetic (overridden where y exists) --

    def canonical(self, a, b=(), c=(1,)) -> FunctionElt:
        F = self.field
        a, b, c = P.trim(a), P.trim(b), P.trim(c)
        if not c:
            raise gf.DivisionByZero("zero denominator")
        if not a and not b:
            return ZERO
        g = P.gcd(F, P.gcd(F, a, b), c)
        if g != (1,):
            a = P.divmod_(F, a, g)[0]
            b = P.divmod_(F, b, g)[0]
            c = P.divmod_(F, c, g)[0]
        lead = F.inv(c[-1])
        return FunctionElt(P.scale(F, a, lead), P.scale(F, b, lead), P.scale(F, c, lead))

    def constant(self, value: int) -> FunctionElt:
        return self.canonical(P.const(value))

    def x(self) -> FunctionElt:
        return self.canonical((0, 1))

    def add(self, f: FunctionElt, g: FunctionElt) -> FunctionElt:
        F = self.field
        a = P.add(F, P.mul(F, f.a, g.c), P.mul(F, g.a, f.c))
        b = P.add(F, P.mul(F, f.b, g.c), P.mul(F, g.b, f.c))
        return self.canonical(a, b, P.mul(F, f.c, g.c))

    def neg(self, f: FunctionElt) -> FunctionElt:
        F = self.field
        return FunctionElt(P.neg(F, f.a), P.neg(F, f.b), f.c)

    def sub(self, f: FunctionElt, g: FunctionElt) -> FunctionElt:
        return self.add(f, self.neg(g))

    def scale(self, f: FunctionElt, s: int) -> FunctionElt:
        F = self.field
        return self.canonical(P.scale(F, f.a, s), P.scale(F, f.b, s), f.c)

    def mul(self, f: FunctionElt, g: FunctionElt) -> FunctionElt:
        F = self.field
        if f.b or g.b:
            raise UnsupportedModel("y-terms on a model without y")
        return self.canonical(P.mul(F, f.a, g.a), (), P.mul(F, f.c, g.c))

    def inv(self, f: FunctionElt) -> FunctionElt:
        if f.is_zero():
            raise gf.DivisionByZero("inverse of the zero function")
        return self.canonical(f.c, (), f.a)

    # -- places --

    def rational_places(self) -> list[Place]:
        return self.places_of_degree(1)

    def places_of_degree(self, r: int) -> list[Place]:
        raise NotImplementedError

    def point_count(self, r: int = 1) -> int:
        raise NotImplementedError

    def places_above(self, pi) -> list[Place]:
        raise NotImplementedError

    def ramification(self, place: Place) -> int:
        return 1

    def residue_field(self, place: Place) -> FieldSpec:
        return gf.extension(self.field, place.degree)

    def frobenius_orbit(self, K: FieldSpec, point):
        q = self.field.q
        orbit = [point]
        while True:
            nxt = tuple(None if z is None else K.pow(z, q) for z in orbit[-1])
            if nxt == point:
                return orbit
            orbit.append(nxt)

    def canonical_place(self, degree: int, x, y) -> Place:
        K = gf.extension(self.field, degree)
        orbit = self.frobenius_orbit(K, (x, y))
        if len(orbit) != degree:
            raise CurveError(f"point {(x, y)} has degree {len(orbit)}, not {degree}")
        best = min(orbit, key=lambda pt: tuple(-1 if z is None else z for z in pt))
        return Place(degree, *best)

    def xpoly(self, place: Place):
        """Minimal polynomial over F_q of the x-coordinate of an affine place."""
        if place.infinite:
            return None
        F = self.field
        K = self.residue_field(place)
        emb = gf.embedding(F, K)
        conj = {place.x}
        z = place.x
        while True:
            z = K.pow(z, F.q)
            if z in conj:
                break
            conj.add(z)
        prod = (1,)
        for r in sorted(conj):
            prod = P.mul(K, prod, (K.neg(r), 1))
        return tuple(emb.restrict(c) for c in prod)

    # -- local analysis --

    def chart(self, place: Place, prec: int) -> Chart:
        prec = max(prec, 4)
        key = (place, prec)
        ch = self._charts.get(key)
        if ch is None:
            ch = self._make_chart(place, prec)
            self._charts[key] = ch
        return ch

    def _make_chart(self, place: Place, prec: int) -> Chart:
        raise NotImplementedError

    def _series(self, chart: Chart, a) -> Laurent:
        return poly_compose_series(chart.K, P.map_coeffs(a, chart.emb.table), chart.x)

    def numerator_series(self, place: Place, f: FunctionElt, prec: int) -> Laurent:
        ch = self.chart(place, prec)
        s = self._series(ch, f.a)
        if f.b:
            s = s + self._series(ch, f.b) * ch.y
        return s

    def _poly_valuation(self, place: Place, a) -> int:
        prec = 16
        while True:
            s = self._series(self.chart(place, prec), a)
            if s.coeffs:
                return s.val
            prec *= 2
            if prec > _MAX_INTERNAL_PREC:
                raise PrecisionExceeded(f"cannot resolve valuation at {place!r}")

    def valuation(self, place: Place, f: FunctionElt):
        """Exact valuation of f at place; ``math.inf`` for the zero function."""
        if f.is_zero():
            return math.inf
        prec = _default_prec(f)
        while True:
            num = self.numerator_series(place, f, prec)
            if num.coeffs:
                return num.val - self._poly_valuation(place, f.c)
            prec *= 2
            if prec > _MAX_INTERNAL_PREC:
                raise PrecisionExceeded(f"cannot resolve valuation at {place!r}")

    def local_expand(self, place: Place, f: FunctionElt, prec: int | None = None) -> Laurent:
        """Laurent expansion of f in the uniformizer, correct below t^prec."""
        if prec is None:
            prec = min(_default_prec(f), MAX_EXPANSION_PREC)
        if prec > MAX_EXPANSION_PREC:
            raise PrecisionExceeded(f"precision {prec} exceeds {MAX_EXPANSION_PREC}")
        K = self.residue_field(place)
        if f.is_zero():
            return Laurent(K, prec, [], prec)
        cval = self._poly_valuation(place, f.c)
        work = prec + abs(cval) + 4
        while True:
            num = self.numerator_series(place, f, work)
            den = self._series(self.chart(place, work), f.c)
            rel = max(prec + den.val - min(num.val, prec), 1)
            out = num * den.inverse(rel)
            if out.prec >= prec:
                return out.truncate(prec)
            work += max(prec - out.prec, 1)
            if work > _MAX_INTERNAL_PREC:
                raise PrecisionExceeded(f"cannot reach precision {prec} at {place!r}")

    def evaluate(self, f: FunctionElt, place: Place):
        """f(P) in F_q, or INF when P is a pole of f (P rational)."""
        if place.degree != 1:
            raise CurveError("evaluation needs a rational place")
        if f.is_zero():
            return 0
        if self.valuation(place, f) < 0:
            return INF
        return self.local_expand(place, f, 1).coeff(0)

    def norm_poly(self, f: FunctionElt):
        return f.a

    def infinite_places(self) -> list[Place]:
        raise NotImplementedError

    def principal_divisor(self, f: FunctionElt) -> Divisor:
        if f.is_zero():
            raise CurveError("the zero function has no divisor")
        F = self.field
        rest = P.monic(F, P.mul(F, self.norm_poly(f), f.c))
        factors = []
        for pi in irreducibles_upto(F, MAX_PLACE_DEGREE):
            if len(rest) <= 1:
                break
            if len(pi) > len(rest):
                continue
            n = 0
            while True:
                quo, rem = P.divmod_(F, rest, pi)
                if rem:
                    break
                rest, n = quo, n + 1
            if n:
                factors.append(pi)
        if len(rest) > 1:
            raise UnsupportedFactor(f"x-factor of degree {len(rest) - 1} > {MAX_PLACE_DEGREE}")
        places = list(self.infinite_places())
        for pi in factors:
            try:
                places.extend(self.places_above(pi))
            except UnsupportedDegree as exc:
                raise UnsupportedFactor(str(exc)) from None
        return Divisor({pl: self.valuation(pl, f) for pl in places})

    def describe(self) -> str:
        raise NotImplementedError


def _default_prec(f: FunctionElt) -> int:
    return 2 * (len(f.a) + len(f.b) + len(f.c)) + 8


@functools.lru_cache(maxsize=None)
def irreducibles(F: FieldSpec, r: int) -> tuple:
    """Monic irreducible polynomials of degree r over F (r <= 3), sorted."""
    line = RationalModel(F)
    return tuple(sorted(line.xpoly(pl) for pl in line.places_of_degree(r) if not pl.infinite))


def irreducibles_upto(F: FieldSpec, r: int):
    for d in range(1, r + 1):
        yield from irreducibles(F, d)


class RationalModel(CurveModel):
    """The rational function field F_q(x)."""

    genus = 0

    def __init__(self, field: FieldSpec):
        super().__init__(field)

    def places_of_degree(self, r: int) -> list[Place]:
        if not 1 <= r <= MAX_PLACE_DEGREE:
            raise UnsupportedDegree(f"places of degree {r} are not supported")
        K = gf.extension(self.field, r)
        seen = set()
        for x in K.elements():
            orbit = self.frobenius_orbit(K, (x,))
            if len(orbit) == r:
                seen.add(min(orbit)[0])
        places = [Place(r, x) for x in sorted(seen)]
        if r == 1:
            places.insert(0, Place(1))
        return places

    def point_count(self, r: int = 1) -> int:
        if self.field.q**r > gf.MAX_ORDER:
            raise gf.UnsupportedSize(f"F_{self.field.q}^{r} too large")
        return self.field.q**r + 1

    def places_above(self, pi) -> list[Place]:
        r = len(pi) - 1
        if r > MAX_PLACE_DEGREE:
            raise UnsupportedDegree(f"x-factor of degree {r}")
        K = gf.extension(self.field, r)
        emb = gf.embedding(self.field, K)
        pik = P.map_coeffs(pi, emb.table)
        x0 = next(z for z in K.elements() if P.evaluate(K, pik, z) == 0)
        orbit = self.frobenius_orbit(K, (x0,))
        return [Place(r, min(orbit)[0])]

    def infinite_places(self) -> list[Place]:
        return [Place(1)]

    def _make_chart(self, place: Place, prec: int) -> Chart:
        K = self.residue_field(place)
        emb = gf.embedding(self.field, K)
        if place.infinite:
            x = Laurent(K, -1, [1])
        else:
            x = Laurent(K, 0, [place.x, 1])
        return Chart(K, emb, x, None)

    def describe(self) -> str:
        return f"rational/F_{self.q}"


class HyperellipticModel(CurveModel):
    """y^2 = h(x), h squarefree of degree 3 or 4 over F_q, q odd."""

    genus = 1

    def __init__(self, field: FieldSpec, h):
        super().__init__(field)
        if field.p == 2:
            raise UnsupportedModel("y^2 = h(x) models need odd characteristic")
        h = P.trim(h)
        if len(h) - 1 not in (3, 4):
            raise UnsupportedModel(f"h must have degree 3 or 4, got {len(h) - 1}")
        if P.gcd(field, h, P.derivative(field, h)) != (1,):
            raise UnsupportedModel("h is not squarefree")
        self.h = h

    @property
    def hdeg(self) -> int:
        return len(self.h) - 1

    def y(self) -> FunctionElt:
        return FunctionElt((), (1,), (1,))

    def mul(self, f: FunctionElt, g: FunctionElt) -> FunctionElt:
        F = self.field
        a = P.add(F, P.mul(F, f.a, g.a), P.mul(F, P.mul(F, f.b, g.b), self.h))
        b = P.add(F, P.mul(F, f.a, g.b), P.mul(F, f.b, g.a))
        return self.canonical(a, b, P.mul(F, f.c, g.c))

    def norm_poly(self, f: FunctionElt):
        F = self.field
        return P.sub(F, P.mul(F, f.a, f.a), P.mul(F, P.mul(F, f.b, f.b), self.h))

    def inv(self, f: FunctionElt) -> FunctionElt:
        if f.is_zero():
            raise gf.DivisionByZero("inverse of the zero function")
        F = self.field
        n = self.norm_poly(f)
        return self.canonical(P.mul(F, f.a, f.c), P.neg(F, P.mul(F, f.b, f.c)), n)

    def _h_in(self, K: FieldSpec):
        return P.map_coeffs(self.h, gf.embedding(self.field, K).table)

    def _infinite_points(self, K: FieldSpec):
        """Geometric points at infinity defined over K, as (None, branch)."""
        if self.hdeg == 3:
            return [(None, None)]
        lc = self._h_in(K)[-1]
        s = K.sqrt(lc)
        if s is None:
            return []
        return sorted({(None, s), (None, K.neg(s))}, key=lambda pt: pt[1])

    def _affine_points(self, K: FieldSpec):
        hk = self._h_in(K)
        for x in K.elements():
            v = P.evaluate(K, hk, x)
            if v == 0:
                yield (x, 0)
            else:
                s = K.sqrt(v)
                if s is not None:
                    yield (x, s)
                    yield (x, K.neg(s))

    def places_of_degree(self, r: int) -> list[Place]:
        if not 1 <= r <= MAX_PLACE_DEGREE:
            raise UnsupportedDegree(f"places of degree {r} are not supported")
        K = gf.extension(self.field, r)
        reps = set()
        for pt in itertools.chain(self._infinite_points(K), self._affine_points(K)):
            orbit = self.frobenius_orbit(K, pt)
            if len(orbit) == r:
                reps.add(Place(r, *min(orbit, key=_pt_key)))
        return sorted(reps)

    def point_count(self, r: int = 1) -> int:
        K = gf.extension(self.field, r)
        return len(self._infinite_points(K)) + sum(1 for _ in self._affine_points(K))

    def infinite_places(self) -> list[Place]:
        if self.hdeg == 3:
            return [Place(1)]
        F = self.field
        s = F.sqrt(self.h[-1])
        if s is not None:
            return sorted([Place(1, None, s), Place(1, None, F.neg(s))])
        K = gf.extension(F, 2)
        s = K.sqrt(self._h_in(K)[-1])
        return [Place(2, None, min(s, K.neg(s)))]

    def places_above(self, pi) -> list[Place]:
        F = self.field
        r = len(pi) - 1
        if r > MAX_PLACE_DEGREE:
            raise UnsupportedDegree(f"x-factor of degree {r}")
        K = gf.extension(F, r)
        pik = P.map_coeffs(pi, gf.embedding(F, K).table)
        x0 = next(z for z in K.elements() if P.evaluate(K, pik, z) == 0)
        v = P.evaluate(K, self._h_in(K), x0)
        if v == 0:
            return [self.canonical_place(r, x0, 0)]
        s = K.sqrt(v)
        if s is not None:
            return sorted([self.canonical_place(r, x0, s), self.canonical_place(r, x0, K.neg(s))])
        if 2 * r > MAX_PLACE_DEGREE:
            raise UnsupportedDegree(f"inert place of degree {2 * r}")
        K2 = gf.extension(F, 2 * r)
        x0e = gf.embedding(K, K2)(x0)
        s = K2.sqrt(P.evaluate(K2, self._h_in(K2), x0e))
        return [self.canonical_place(2 * r, x0e, s)]

    def ramification(self, place: Place) -> int:
        if place.infinite:
            return 2 if self.hdeg == 3 else 1
        return 2 if place.y == 0 else 1

    def _make_chart(self, place: Place, prec: int) -> Chart:
        K = self.residue_field(place)
        emb = gf.embedding(self.field, K)
        hk = self._h_in(K)
        if place.infinite and self.hdeg == 4:
            rev = list(reversed(hk))
            S = power_series_sqrt(K, rev, place.y, prec + 2)
            return Chart(K, emb, Laurent(K, -1, [1]), Laurent(K, -2, S, prec))
        if place.infinite:
            # t = x/y, u = 1/x satisfies u = t^2 * H(u) with H(u) = u^3 h(1/u)
            rev = list(reversed(hk))
            nt = (prec + 5) // 2 + 2
            u = _fixed_point(K, lambda w: poly_compose_series(K, rev, w).shift(1), nt)
            ut = Laurent(K, 0, _spread(u.coeffs, u.val), 2 * nt)
            x = ut.inverse(2 * nt)
            return Chart(K, emb, x, x.shift(-1))
        if place.y == 0:
            # y is a uniformizer; x - x0 = w(y^2) with w = T / H1(w)
            H = P.taylor_shift(K, hk, place.x)
            H1 = list(H[1:])
            nt = prec // 2 + 2

            def step(w):
                return poly_compose_series(K, H1, w).inverse(nt).shift(1)

            w = _fixed_point(K, step, nt)
            xs = _spread(w.coeffs, w.val)
            xs = [place.x] + xs[1:] if xs else [place.x]
            return Chart(K, emb, Laurent(K, 0, xs, 2 * nt), Laurent(K, 1, [1]))
        H = P.taylor_shift(K, hk, place.x)
        ys = power_series_sqrt(K, H, place.y, prec)
        return Chart(K, emb, Laurent(K, 0, [place.x, 1]), Laurent(K, 0, ys, prec))

    def describe(self) -> str:
        return f"y^2=h(x), h={list(self.h)} over F_{self.q}"


def _pt_key(pt):
    return tuple(-1 if z is None else z for z in pt)


def _spread(coeffs, val):
    """Coefficients of w(t^2) given w(T) = sum coeffs[i] T^(val+i)."""
    out = [0] * (2 * (val + len(coeffs)))
    for i, c in enumerate(coeffs):
        out[2 * (val + i)] = c
    return out


def _fixed_point(K, step, n) -> Laurent:
    w = Laurent(K, n, [], n)
    for _ in range(n + 1):
        w = step(w).truncate(n)
    return w


class PlaneAffineModel(CurveModel):
    """F(x, y) = 0 with a declared number of places at infinity (counting only)."""

    counting_only = True

    def __init__(self, field: FieldSpec, terms: dict, infinite: int, genus: int = 0):
        super().__init__(field)
        self.terms = {k: v for k, v in terms.items() if v}
        self.n_infinite = infinite
        self.genus = genus

    def point_count(self, r: int = 1) -> int:
        import numpy as np

        K = gf.extension(self.field, r)
        emb = gf.embedding(self.field, K)
        add, mul = K.add_table, K.mul_table
        elems = np.arange(K.q)
        maxdx = max(i for i, _ in self.terms)
        maxdy = max(j for _, j in self.terms)
        xp = [np.ones(K.q, dtype=np.int64)]
        for _ in range(maxdx):
            xp.append(mul[xp[-1], elems])
        yp = [np.ones(K.q, dtype=np.int64)]
        for _ in range(maxdy):
            yp.append(mul[yp[-1], elems])
        total = np.zeros((K.q, K.q), dtype=np.int64)
        for (i, j), c in self.terms.items():
            term = mul[mul[xp[i], emb(c)][:, None], yp[j][None, :]]
            total = add[total, term]
        return int((total == 0).sum()) + self.n_infinite

    def places_of_degree(self, r: int) -> list[Place]:
        raise UnsupportedModel("plane affine models only support point counting")

    def _make_chart(self, place, prec):
        raise UnsupportedModel("plane affine models only support point counting")

    def describe(self) -> str:
        return f"affine plane curve over F_{self.q} (genus {self.genus}, declared)"


# -- module-level operations ------------------------------------------------

def rational_places(model: CurveModel) -> list[Place]:
    return model.rational_places()


def places_of_degree(model: CurveModel, r: int) -> list[Place]:
    return model.places_of_degree(r)


def point_count(model: CurveModel, r: int = 1) -> int:
    if model.q**r > gf.MAX_ORDER:
        raise gf.UnsupportedSize(f"F_{model.q}^{r} exceeds the supported field size")
    return model.point_count(r)


def valuation(model: CurveModel, place: Place, f: FunctionElt):
    return model.valuation(place, f)


def local_expand(model: CurveModel, place: Place, f: FunctionElt, prec: int | None = None) -> Laurent:
    return model.local_expand(place, f, prec)


def evaluate(model: CurveModel, f: FunctionElt, place: Place):
    return model.evaluate(f, place)


def principal_divisor(model: CurveModel, f: FunctionElt) -> Divisor:
    return model.principal_divisor(f)


# -- curve description strings ---------------------------------------------

def _parse_poly(expr: str, variables=("x", "y")) -> dict:
    """Integer polynomial expression -> {(deg_x, deg_y): coefficient}."""
    try:
        tree = ast.parse(expr.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise CurveParseError(f"cannot parse {expr!r}") from exc

    def mul(a, b):
        out = {}
        for (i1, j1), c1 in a.items():
            for (i2, j2), c2 in b.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return out

    def add(a, b, sign=1):
        out = dict(a)
        for k, c in b.items():
            out[k] = out.get(k, 0) + sign * c
        return out

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return {(0, 0): node.value}
        if isinstance(node, ast.Name) and node.id in variables:
            return {(1, 0) if node.id == variables[0] else (0, 1): 1}
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = walk(node.operand)
            return {k: -c for k, c in inner.items()} if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int) and exp.value >= 0):
                    raise CurveParseError("exponents must be non-negative integers")
                out = {(0, 0): 1}
                base = walk(node.left)
                for _ in range(exp.value):
                    out = mul(out, base)
                return out
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return add(left, right)
            if isinstance(node.op, ast.Sub):
                return add(left, right, -1)
            if isinstance(node.op, ast.Mult):
                return mul(left, right)
        raise CurveParseError(f"unsupported syntax in {expr!r}")

    return walk(tree)


def parse_curve(desc: str, q: int) -> CurveModel:
    """Build a model from 'rational', 'y2=POLY(x)' or 'affine:POLY(x,y):inf=k[:g=G]'."""
    try:
        F = gf.field_of_order(q)
    except gf.FieldError as exc:
        raise CurveParseError(str(exc)) from exc
    desc = desc.strip().replace(" ", "")
    if desc == "rational":
        return RationalModel(F)
    if desc.startswith("y2="):
        terms = _parse_poly(desc[3:])
        if any(j for _, j in terms if terms[_, j]):
            raise CurveParseError("right-hand side must be a polynomial in x")
        n = max((i for (i, _), c in terms.items() if c % F.p), default=-1)
        h = [0] * (n + 1)
        for (i, _), c in terms.items():
            if i <= n:
                h[i] = F.from_coeffs([c % F.p])
        return HyperellipticModel(F, tuple(h))
    if desc.startswith("affine:"):
        parts = desc.split(":")
        opts = {}
        for part in parts[2:]:
            key, _, val = part.partition("=")
            if key not in ("inf", "g") or not val.isdigit():
                raise CurveParseError(f"bad option {part!r}")
            opts[key] = int(val)
        if "inf" not in opts:
            raise CurveParseError("affine models need inf=k")
        terms = {k: F.from_coeffs([c % F.p]) for k, c in _parse_poly(parts[1]).items() if c % F.p}
        return PlaneAffineModel(F, terms, opts["inf"], opts.get("g", 0))
    raise CurveParseError(f"unknown curve description {desc!r}")
