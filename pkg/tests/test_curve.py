import math

import pytest

from helpers import MODEL_DESCS, model, places_upto, random_divisor, random_function, rng
from sigmacodes import curve, gf, zeta
from sigmacodes.curve import INF, Divisor, Place, divisor_ops, parse_curve

HERMITIAN = "affine:y^3+y-x^4:inf=1:g=3"


class TestPlaces:
    def test_projective_line(self):
        m = model("p1_q5")
        assert len(curve.rational_places(m)) == 6
        assert len(curve.places_of_degree(m, 2)) == 10
        assert len(curve.places_of_degree(m, 3)) == (125 - 5) // 3

    def test_quartic_q5(self):
        m = model("quartic_q5")
        pls = curve.rational_places(m)
        assert len(pls) == 10
        assert all(not p.infinite for p in pls)
        deg2 = curve.places_of_degree(m, 2)
        assert len(deg2) == 5
        # the non-square leading coefficient makes infinity one place of degree 2
        assert deg2[0].infinite and m.infinite_places() == [deg2[0]]

    def test_quartic_q9(self):
        m = model("quartic_q9")
        pls = curve.rational_places(m)
        assert len(pls) == 16
        assert sum(p.infinite for p in pls) == 2

    def test_canonical_order_is_sorted_and_unique(self):
        for name in MODEL_DESCS:
            m = model(name)
            for r in (1, 2, 3):
                pls = m.places_of_degree(r)
                assert pls == sorted(pls) and len(set(pls)) == len(pls)
                assert all(p.degree == r for p in pls)

    def test_degree_cap(self):
        with pytest.raises(curve.UnsupportedDegree):
            model("quartic_q5").places_of_degree(4)

    def test_orbit_representatives_by_brute_force(self):
        # affine degree-2 places of y^2 = 3(x^4+2) from points over F_25
        m = model("quartic_q5")
        K = m.residue_field(m.places_of_degree(2)[1])
        emb = gf.embedding(m.field, K)
        h = [emb(c) for c in m.h]
        points = set()
        for x in range(K.q):
            rhs = 0
            for c in reversed(h):
                rhs = K.add(K.mul(rhs, x), c)
            for y in range(K.q):
                if K.mul(y, y) == rhs:
                    points.add((x, y))
        new = {pt for pt in points if not (emb.contains(pt[0]) and emb.contains(pt[1]))}
        reps = {min(pt, (K.frobenius(pt[0], 5), K.frobenius(pt[1], 5))) for pt in new}
        got = {(p.x, p.y) for p in m.places_of_degree(2) if not p.infinite}
        assert got == reps


class TestPointCount:
    def test_hermitian(self):
        m = parse_curve(HERMITIAN, 9)
        assert curve.point_count(m, 1) == 28
        # affine solutions alone
        F = m.field
        affine = sum(1 for x in range(9) for y in range(9)
                     if F.add(F.pow(y, 3), y) == F.pow(x, 4))
        assert affine == 27

    def test_quartic_q5_extension(self):
        m = model("quartic_q5")
        assert curve.point_count(m, 1) == 10
        assert curve.point_count(m, 2) == 20

    def test_size_guard(self):
        with pytest.raises(gf.UnsupportedSize):
            curve.point_count(model("p1_q9"), 5)

    @pytest.mark.parametrize("name", sorted(MODEL_DESCS))
    def test_hasse_weil_interval(self, name):
        m = model(name)
        for r in (1, 2, 3):
            Q = m.q**r
            N = m.point_count(r)
            assert (N - Q - 1) ** 2 <= 4 * m.genus**2 * Q

    def test_hermitian_is_maximal(self):
        m = parse_curve(HERMITIAN, 9)
        assert m.point_count(1) == 9 + 1 + 2 * 3 * 3
        assert parse_curve(HERMITIAN, 81).point_count(1) == 28  # dense table over F_81 agrees

    @pytest.mark.parametrize("name", ["quartic_q5", "quartic_q9", "cubic_q7", "cubic_q5", "p1_q5"])
    def test_place_counts_match_zeta(self, name):
        m = model(name)
        table = zeta.zeta_for_model(m, 3)
        B1 = len(m.places_of_degree(1))
        B2 = len(m.places_of_degree(2))
        B3 = len(m.places_of_degree(3))
        assert B1 == table[1]
        assert B2 == (m.point_count(2) - m.point_count(1)) // 2
        assert table[2] == B2 + B1 * (B1 + 1) // 2
        # degree-3 effective divisors: 3 rational, rational + quadratic, one cubic
        assert table[3] == math.comb(B1 + 2, 3) + B1 * B2 + B3


class TestValuation:
    def test_rational_examples(self):
        m = model("p1_q5")
        f = m.canonical((1, 3, 1), (), (1, 1))  # (x-1)^2 / (x+1)
        P1 = Place(1, 1)
        assert curve.valuation(m, P1, f) == 2
        assert curve.valuation(m, m.infinite_places()[0], f) == -1
        assert curve.valuation(m, P1, curve.ZERO) == math.inf

    def test_quartic_infinity(self):
        m = model("quartic_q9")
        for P in m.infinite_places():
            assert m.valuation(P, m.y()) == -2
            assert m.valuation(P, m.x()) == -1

    def test_ramified(self):
        m = model("quartic_q9")
        ram = [p for p in m.rational_places() if m.ramification(p) == 2]
        assert len(ram) == 4
        for P in ram:
            assert m.valuation(P, m.y()) == 1
            assert m.valuation(P, m.canonical((m.field.neg(P.x), 1))) == 2

    def test_cubic_infinity(self):
        m = model("cubic_q7")
        P = m.infinite_places()[0]
        assert m.valuation(P, m.x()) == -2
        assert m.valuation(P, m.y()) == -3

    @pytest.mark.parametrize("name", sorted(MODEL_DESCS))
    def test_additive_and_ultrametric(self, name):
        m = model(name)
        r = rng(hash(name) % 1000)
        places = places_upto(m, 2)
        for _ in range(120):
            f = random_function(m, r)
            g = random_function(m, r)
            P = r.choice(places)
            vf, vg = m.valuation(P, f), m.valuation(P, g)
            assert m.valuation(P, m.mul(f, g)) == vf + vg
            assert m.valuation(P, m.add(f, g)) >= min(vf, vg)
            assert m.valuation(P, m.inv(f)) == -vf


class TestLocalExpansion:
    def test_geometric_series(self):
        m = model("p1_q5")
        s = curve.local_expand(m, Place(1, 0), m.canonical((1,), (), (1, 4)), 8)
        assert s.val == 0 and [s.coeff(k) for k in range(8)] == [1] * 8

    def test_x_at_ramified_place(self):
        m = model("quartic_q9")
        P = next(p for p in m.rational_places() if m.ramification(p) == 2)
        s = m.local_expand(P, m.x(), 6)
        assert s.coeff(0) == P.x and s.coeff(1) == 0 and s.coeff(2) != 0

    def test_precision_cap(self):
        m = model("p1_q5")
        with pytest.raises(curve.PrecisionExceeded):
            m.local_expand(Place(1, 0), m.x(), 65)

    def test_leading_exponent_is_valuation(self):
        for name in ("quartic_q5", "quartic_q9", "cubic_q7"):
            m = model(name)
            r = rng(7)
            places = places_upto(m, 2)
            for _ in range(60):
                f = random_function(m, r)
                P = r.choice(places)
                s = m.local_expand(P, f, 12)
                assert s.val == m.valuation(P, f)

    @pytest.mark.parametrize("name", ["p1_q5", "quartic_q5", "quartic_q9", "cubic_q7"])
    def test_expansion_is_multiplicative(self, name):
        m = model(name)
        r = rng(8)
        places = places_upto(m, 2)
        for _ in range(100):
            f, g = random_function(m, r), random_function(m, r)
            P = r.choice(places)
            prec = 10
            sf, sg = m.local_expand(P, f, prec), m.local_expand(P, g, prec)
            sfg = m.local_expand(P, m.mul(f, g), prec)
            prod = sf * sg
            assert prod.val == sfg.val
            top = min(sfg.prec, prod.prec)
            assert top > sfg.val
            for k in range(sfg.val, top):
                assert prod.coeff(k) == sfg.coeff(k)


class TestEvaluate:
    def test_pole(self):
        m = model("p1_q5")
        assert curve.evaluate(m, m.canonical((1,), (), (3, 1)), Place(1, 2)) is INF

    def test_polynomial(self):
        m = model("p1_q5")
        assert curve.evaluate(m, m.canonical((1, 0, 1)), Place(1, 2)) == 0

    def test_y_at_affine_point(self):
        m = model("quartic_q5")
        for P in m.rational_places():
            assert m.evaluate(m.y(), P) == P.y

    def test_pole_iff_negative_valuation(self):
        m = model("quartic_q9")
        r = rng(9)
        for _ in range(150):
            f = random_function(m, r)
            for P in m.rational_places():
                assert (m.evaluate(f, P) is INF) == (m.valuation(P, f) < 0)

    def test_rejects_nonrational_place(self):
        m = model("quartic_q5")
        with pytest.raises(curve.CurveError):
            m.evaluate(m.x(), m.places_of_degree(2)[0])


class TestPrincipalDivisor:
    def test_rational_example(self):
        m = model("p1_q5")
        f = m.canonical((4, 1), (), (3, 1))  # (x-1)/(x-2)
        assert curve.principal_divisor(m, f) == Divisor({Place(1, 1): 1, Place(1, 2): -1})

    def test_y_on_quartic(self):
        m = model("quartic_q9")
        div = curve.principal_divisor(m, m.y())
        ram = [p for p in m.rational_places() if m.ramification(p) == 2]
        expected = Divisor({p: 1 for p in ram}) + Divisor({p: -2 for p in m.infinite_places()})
        assert div == expected and div.degree == 0

    def test_constant(self):
        for name in MODEL_DESCS:
            m = model(name)
            assert curve.principal_divisor(m, m.constant(3)) == Divisor()

    def test_unsupported_factor(self):
        with pytest.raises(curve.UnsupportedFactor):
            curve.principal_divisor(model("quartic_q5"), model("quartic_q5").y())

    @pytest.mark.parametrize("name", sorted(MODEL_DESCS))
    def test_degree_zero(self, name):
        m = model(name)
        r = rng(10 + len(name))
        checked = 0
        for _ in range(200):
            f = random_function(m, r, max_deg=2)
            try:
                div = m.principal_divisor(f)
            except curve.UnsupportedFactor:
                continue
            checked += 1
            assert div.degree == 0
            for P, n in div.items():
                assert m.valuation(P, f) == n
        assert checked >= 100


class TestDivisors:
    def test_same_point(self):
        P = Place(1, 0)
        G = D = Divisor.point(P)
        ops = divisor_ops(G, D)
        assert ops["union"] == G and ops["intersection"] == G

    def test_union_intersection(self):
        P, Q = Place(1, 0), Place(1, 1)
        G, D = Divisor.point(P, 2), Divisor({P: 1, Q: 1})
        assert G | D == Divisor({P: 2, Q: 1})
        assert G & D == Divisor({P: 1})
        assert (G & D) + (G | D) == G + D

    def test_arithmetic(self):
        P, Q = Place(1, 0), Place(2, 7)
        A = Divisor({P: 2, Q: -1})
        assert A.degree == 0 and not A.is_effective
        assert (A - A) == Divisor() and not (A - A)
        assert A * 3 == A + A + A
        assert -A == Divisor({P: -2, Q: 1})
        assert Divisor.point(P) <= Divisor({P: 2})
        assert A.support == [P, Q]
        assert hash(A) == hash(Divisor({Q: -1, P: 2}))

    def test_lattice_identity(self):
        m = model("quartic_q5")
        places = places_upto(m, 2)
        r = rng(11)
        for _ in range(500):
            G = random_divisor(m, r, places, terms=4, lo=-3, hi=4)
            D = random_divisor(m, r, places, terms=4, lo=-3, hi=4)
            assert (G & D) + (G | D) == G + D
            assert (G | D).degree + (G & D).degree == G.degree + D.degree
            assert G & D <= G <= G | D


class TestParse:
    def test_descriptions(self):
        assert parse_curve("rational", 7).genus == 0
        m = parse_curve("y2 = 3*(x^4 + 2)", 5)
        assert m.h == (1, 0, 0, 0, 3)
        assert parse_curve(HERMITIAN, 9).genus == 3

    @pytest.mark.parametrize("desc,q,exc", [
        ("foo", 5, curve.CurveParseError),
        ("y2=x^", 5, curve.CurveParseError),
        ("rational", 6, curve.CurveParseError),
        ("y2=x^3+y", 5, curve.CurveParseError),
        ("affine:y-x:inf", 5, curve.CurveParseError),
        ("y2=x^4+1", 4, curve.UnsupportedModel),
        ("y2=(x-1)^2*(x+1)", 5, curve.UnsupportedModel),
        ("y2=x^5+1", 7, curve.UnsupportedModel),
    ])
    def test_errors(self, desc, q, exc):
        with pytest.raises(exc):
            parse_curve(desc, q)

    def test_counting_only(self):
        m = parse_curve(HERMITIAN, 9)
        assert m.counting_only
        with pytest.raises(curve.UnsupportedModel):
            m.places_of_degree(1)
