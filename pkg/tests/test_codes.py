import hashlib
import itertools
import json

import numpy as np
import pytest

from conftest import QUARTIC_Q5, QUARTIC_Q9
from helpers import model, rng
from sigmacodes import bounds, codes, curve, zeta
from sigmacodes.codes import (
    INF_SYMBOL,
    ConstructionParams,
    SigmaCode,
    audit,
    build_code,
    choose_D,
    code_bytes,
    effective_divisors,
    min_distance,
    parse_code,
)
from sigmacodes.curve import INF, Divisor


def naive_min_distance(words):
    best = words.shape[1] + 1
    for i in range(words.shape[0] - 1):
        d = (words[i + 1 :] != words[i]).sum(axis=1).min()
        best = min(best, int(d))
    return best


class TestChooseD:
    def test_quartic_q5(self):
        m = model("quartic_q5")
        Qinf = m.infinite_places()[0]
        assert choose_D(m, 2) == Divisor.point(Qinf)
        assert choose_D(m, 4) == Divisor.point(Qinf, 2)
        assert choose_D(m, 0) == Divisor()

    def test_odd_degrees_use_a_cubic_place(self):
        m = model("quartic_q5")
        cubic = m.places_of_degree(3)[0]
        assert choose_D(m, 3) == Divisor.point(cubic)
        assert choose_D(m, 5) == Divisor.point(m.places_of_degree(2)[0]) + Divisor.point(cubic)

    def test_disjoint_from_evaluation_set(self):
        for name in ("quartic_q5", "quartic_q9", "cubic_q7", "p1_q5"):
            m = model(name)
            for deg in (0, 2, 3, 4, 5, 6, 7):
                D = choose_D(m, deg)
                assert D.degree == deg and D.is_effective or deg == 0
                assert all(P.degree > 1 for P in D.support)

    def test_degree_one(self):
        m = model("quartic_q5")
        with pytest.raises(codes.NoDisjointSupport):
            choose_D(m, 1)
        assert choose_D(m, 1, "allow-rational") == Divisor.point(m.rational_places()[0])

    def test_bad_inputs(self):
        m = model("quartic_q5")
        with pytest.raises(codes.ParameterError):
            choose_D(m, -1)
        with pytest.raises(codes.ParameterError):
            choose_D(m, 2, "anything")
        with pytest.raises(codes.ParameterError):
            ConstructionParams(-1, 0)


class TestEffectiveDivisors:
    @pytest.mark.parametrize("name", ["quartic_q5", "quartic_q9", "cubic_q7", "p1_q5"])
    def test_strata_match_zeta(self, name):
        m = model(name)
        A = zeta.zeta_for_model(m, 3)
        divs = effective_divisors(m, 3)
        for i in range(4):
            stratum = [G for G in divs if G.degree == i]
            assert len(stratum) == A[i]
            assert all(G.is_effective or not G for G in stratum)
        assert len(set(divs)) == len(divs)

    def test_small_cases(self):
        m = model("quartic_q5")
        assert effective_divisors(m, 0) == [Divisor()]
        assert len(effective_divisors(m, 1)) == 11
        assert len(effective_divisors(m, 2)) == 71

    def test_cap(self):
        with pytest.raises(codes.UnsupportedS):
            effective_divisors(model("quartic_q5"), 4)


class TestBuild:
    def test_1026(self, code_1026):
        assert code_1026.M == 1026 and code_1026.n == 10
        assert code_1026.metadata["strata"] == {"0": 25, "1": 1000}

    def test_25626(self, code_25626):
        assert code_25626.M == 25626
        assert code_25626.metadata["strata"] == {"0": 625, "1": 25000}

    def test_constants_only(self):
        code = codes.construct("rational", 5, 0, 0)
        assert code.M == 6
        assert sorted(map(tuple, code.words[:-1])) == [(c,) * 6 for c in range(5)]

    def test_all_inf_word_is_last(self, code_1026):
        assert (code_1026.words[-1] == INF_SYMBOL).all()
        assert code_1026.has_inf_word

    def test_symbols_in_range(self, code_10450):
        w = code_10450.words
        assert ((w < 9) | (w == INF_SYMBOL)).all()

    def test_metadata(self, code_1026):
        meta = code_1026.metadata
        assert meta["m"] == 2 and meta["s"] == 1 and meta["genus"] == 1
        assert meta["D_rational_overlap"] == 0
        assert meta["deviation"] == codes.DEVIATION_NOTE
        assert meta["curve_desc"] == QUARTIC_Q5

    def test_words_are_evaluations(self, code_1026):
        m = curve.parse_curve(QUARTIC_Q5, 5)
        places = m.rational_places()
        for row in range(code_1026.M - 1):
            f = code_1026.function(row)
            for j, P in enumerate(places):
                v = m.evaluate(f, P)
                sym = code_1026.words[row, j]
                assert (v is INF) == (sym == INF_SYMBOL) == (m.valuation(P, f) < 0)
                if v is not INF:
                    assert sym == v

    def test_functions_have_exact_poles(self, code_1026):
        m = curve.parse_curve(QUARTIC_Q5, 5)
        Qinf = choose_D(m, 2).support[0]
        seen = set()
        for row in range(0, code_1026.M - 1, 7):
            f = code_1026.function(row)
            seen.add(f)
            if f.is_zero():
                continue
            poles = [m.valuation(P, f) for P in m.rational_places()]
            assert min(poles) >= -1 and sum(v < 0 for v in poles) <= 1
            assert m.valuation(Qinf, f) >= -1
        assert len(seen) == len(range(0, code_1026.M - 1, 7))

    def test_function_requires_sources(self, code_25626):
        with pytest.raises(codes.CodeError):
            code_25626.function(0)

    def test_parameter_domain(self):
        m = model("quartic_q5")
        with pytest.raises(codes.ParameterError):
            build_code(m, ConstructionParams(6, 2))

    def test_too_large(self, monkeypatch):
        monkeypatch.setattr(codes, "ENUMERATION_LIMIT", 100)
        with pytest.raises(codes.TooLarge):
            codes.construct(QUARTIC_Q5, 5, 2, 1)

    def test_deterministic(self, code_1026):
        again = codes.construct(QUARTIC_Q5, 5, 2, 1)
        assert code_bytes(again) == code_bytes(code_1026)

    def test_per_stratum_closed_form(self):
        for desc, q, m, s in [(QUARTIC_Q5, 5, 2, 2), (QUARTIC_Q5, 5, 3, 1), ("rational", 5, 0, 2),
                              ("y2=x^3+2*x+1", 5, 2, 1), (QUARTIC_Q9, 9, 2, 1)]:
            code = codes.construct(desc, q, m, s)
            mod = curve.parse_curve(desc, q)
            expected = {}
            for G in effective_divisors(mod, s):
                n = rrspace_count(mod, m, G)
                expected[str(G.degree)] = expected.get(str(G.degree), 0) + n
            assert code.metadata["strata"] == expected
            assert code.M == 1 + sum(expected.values())

    def test_strata_meet_size_formula_for_s1(self, code_1026, code_25626, code_10450):
        for code in (code_1026, code_25626, code_10450):
            q, m, g = code.q, code.metadata["m"], code.metadata["genus"]
            A = codes.zeta_for_code(code)
            for i in range(2):
                assert code.metadata["strata"][str(i)] == (q - 1) ** i * q ** (m - g + 1) * A[i]

    def test_disjointness_checked_on_every_build(self, monkeypatch):
        calls = []
        real = codes._check_disjoint

        def spy(keys, owner, Gs):
            calls.append(len(Gs))
            return real(keys, owner, Gs)

        monkeypatch.setattr(codes, "_check_disjoint", spy)
        codes.construct(QUARTIC_Q5, 5, 2, 1)
        codes.construct("rational", 5, 0, 2)
        codes.construct("y2=x^3+2*x+1", 5, 2, 1)
        assert calls == [11, 1 + 6 + 31, 1 + 7]

    def test_disjointness_violation_detected(self):
        keys = np.array([[1, 2], [3, 4], [1, 2]])
        with pytest.raises(codes.DisjointnessViolation):
            codes._check_disjoint(keys, np.array([0, 1, 1]), ["G0", "G1"])

    def test_duplicate_detected_with_witnesses(self):
        words = np.array([[0, 1, 2], [1, 1, 1], [0, 1, 2]], dtype=np.uint8)
        with pytest.raises(codes.DuplicateCodeword) as err:
            codes._check_injective(SigmaCode(5, words))
        assert err.value.witnesses == [0, 2]


def rrspace_count(mod, m, G):
    return codes.exact_pole_count(mod.q, mod.genus, m, G)


class TestMinDistance:
    def test_two_words(self):
        words = np.array([[0] * 7, [INF_SYMBOL] * 7], dtype=np.uint8)
        assert min_distance(SigmaCode(5, words)) == 7

    def test_needs_two_words(self):
        with pytest.raises(codes.CodeError):
            min_distance(SigmaCode(5, np.zeros((1, 4), dtype=np.uint8)))

    def test_1026_exact(self, code_1026):
        d, hist = min_distance(code_1026, exact_profile=True)
        assert d == naive_min_distance(code_1026.words) >= 6
        assert hist.sum() == 1026 * 1025 // 2
        assert hist[:d].sum() == 0 and hist[d] > 0

    def test_random_codes_against_naive(self):
        r = rng(80)
        for trial in range(100):
            q = r.choice([2, 3, 5])
            n, M = r.randint(2, 9), r.randint(2, 60)
            words = np.array([[r.randrange(q) for _ in range(n)] for _ in range(M)], dtype=np.uint8)
            words = np.unique(words, axis=0)
            if words.shape[0] < 2:
                continue
            code = SigmaCode(q, words)
            expect = naive_min_distance(words)
            block = r.choice([1, 3, 16, 256])
            assert min_distance(code, block=block) == expect
            assert min_distance(code, workers=3, block=block) == expect
            assert min_distance(code, exact_profile=True, block=block)[0] == expect

    def test_worker_invariance(self, code_10450):
        sub = SigmaCode(9, code_10450.words[::3].copy())
        results = {min_distance(sub, workers=w, block=b) for w in (1, 2, 5) for b in (64, 500)}
        assert len(results) == 1


class TestAudit:
    def test_1026(self, code_1026):
        rep = audit(code_1026)
        assert rep.passed
        assert rep.size_lower == 1026 and rep.dist_lower == 6
        assert rep.d_min >= 6 and rep.singleton_cap == 6 ** (10 - rep.d_min + 1)
        assert 1026 <= 6**5

    def test_rational_companion_note(self, code_126):
        rep = audit(code_126)
        assert rep.passed and rep.M == 126 == rep.size_lower
        assert rep.d_min >= 4
        assert any("142" in note for note in rep.notes)

    def test_rational_s2_note(self):
        rep = audit(codes.construct("rational", 5, 0, 2))
        assert rep.passed and any("3702" in note for note in rep.notes)

    def test_no_metadata(self, code_1026):
        bare = SigmaCode(5, code_1026.words.copy())
        rep = audit(bare)
        assert rep.passed and rep.size_lower is None
        assert rep.notes

    def test_duplicate_row_flagged(self, code_126):
        words = np.concatenate([code_126.words, code_126.words[:1]])
        rep = audit(SigmaCode(5, words, dict(code_126.metadata)))
        assert not rep.passed and rep.d_min == 0
        assert any(f.startswith("injectivity") for f in rep.flags)

    def test_size_shortfall_flagged(self, code_1026):
        words = code_1026.words[:-5].copy()
        rep = audit(SigmaCode(5, words, dict(code_1026.metadata)))
        assert any(f.startswith("size") for f in rep.flags)

    def test_singleton_flagged(self):
        # nine words over three symbols, declared as a 2-symbol alphabet: 9 > 2^2
        words = np.array(list(itertools.product(range(3), repeat=2)), dtype=np.uint8)
        rep = audit(SigmaCode(1, words))
        assert any(f.startswith("singleton") for f in rep.flags)

    def test_too_small(self):
        with pytest.raises(codes.CodeError):
            audit(SigmaCode(5, np.zeros((1, 3), dtype=np.uint8)))

    def test_allow_rational_policy(self):
        code = codes.construct(QUARTIC_Q5, 5, 2, 1, "allow-rational")
        assert code.metadata["D_rational_overlap"] == 1
        rep = audit(code)
        assert rep.dist_lower == 10 - 2 - 2 - 1
        assert rep.passed

    @pytest.mark.parametrize("desc,q,m,s", [
        (QUARTIC_Q5, 5, 2, 1), (QUARTIC_Q5, 5, 3, 1), (QUARTIC_Q5, 5, 2, 2),
        ("rational", 5, 0, 1), ("rational", 5, 0, 2), ("rational", 7, 2, 1),
        ("y2=x^3+2*x+1", 5, 2, 1), ("y2=x^3+2*x+1", 5, 3, 1), (QUARTIC_Q9, 9, 2, 1),
    ])
    def test_every_admissible_build_passes(self, desc, q, m, s):
        code = codes.construct(desc, q, m, s)
        rep = audit(code)
        assert rep.passed, rep.flags
        assert rep.M <= bounds.singleton_cap(q + 1, code.n, rep.d_min)
        assert rep.d_min >= code.n - m - 2 * s

    def test_report_dict(self, code_126):
        doc = audit(code_126).to_dict()
        assert list(doc)[:4] == ["M", "n", "q", "d_min"]
        json.dumps(doc)


class TestFileFormat:
    def test_round_trip(self, code_1026, tmp_path):
        path = tmp_path / "c.sigc"
        codes.write_code(code_1026, path)
        raw = path.read_bytes()
        back = codes.read_code(path)
        assert np.array_equal(back.words, code_1026.words)
        assert back.metadata["m"] == 2
        path2 = tmp_path / "d.sigc"
        codes.write_code(back, path2)
        assert hashlib.sha256(path2.read_bytes()).digest() == hashlib.sha256(raw).digest()

    def test_header_layout(self, code_126):
        raw = code_bytes(code_126)
        assert raw[:4] == b"SIGC" and raw[4] == 1
        assert int.from_bytes(raw[5:7], "little") == 5
        assert raw[7] == 1
        assert int.from_bytes(raw[8:12], "little") == 6
        assert int.from_bytes(raw[12:20], "little") == 126
        assert len(raw) == 20 + 126 * 6

    def test_sidecar_is_sorted_json(self, code_126, tmp_path):
        path = tmp_path / "c.sigc"
        codes.write_code(code_126, path)
        meta = json.loads((tmp_path / "c.sigc.json").read_text())
        assert list(meta) == sorted(meta)

    def test_empty_word_count(self):
        raw = codes.HEADER.pack(b"SIGC", 1, 5, 0, 4, 0)
        with pytest.raises(codes.TruncatedFile):
            parse_code(raw)

    def test_symbol_out_of_range(self):
        raw = codes.HEADER.pack(b"SIGC", 1, 5, 0, 2, 1) + bytes([0, 0xFE])
        with pytest.raises(codes.SymbolOutOfRange):
            parse_code(raw)

    def test_bad_magic(self):
        with pytest.raises(codes.BadMagic):
            parse_code(b"NOPE" + bytes(30))

    def test_bad_version(self):
        raw = codes.HEADER.pack(b"SIGC", 2, 5, 0, 2, 1) + bytes(2)
        with pytest.raises(codes.BadVersion):
            parse_code(raw)

    def test_truncated(self, code_126):
        raw = code_bytes(code_126)
        with pytest.raises(codes.TruncatedFile):
            parse_code(raw[:-1])
        with pytest.raises(codes.TruncatedFile):
            parse_code(raw[:10])
        with pytest.raises(codes.CodeFormatError):
            parse_code(raw + b"\x00")

    def test_large_q_rejected(self):
        with pytest.raises(codes.CodeFormatError):
            code_bytes(SigmaCode(255, np.zeros((2, 2), dtype=np.uint8)))
