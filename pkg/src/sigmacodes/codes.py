"""Nonlinear codes over F_q ∪ {∞} from Riemann-Roch spaces, and their audit.

A code is built from a divisor D of degree m and a pole budget s: for every
effective G with deg G <= s, the functions of L(D+G) whose pole order at each
place of G is exactly (D+G)_Q are evaluated at all rational places, a pole
giving the symbol ∞.  The all-∞ word is appended last.
"""

from __future__ import annotations

import json
import os
import struct
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from . import zeta as zeta_mod
from . import poly as P
from .curve import CurveModel, Divisor, parse_curve
from .gf import FieldSpec, trace_coordinates
from .rrspace import ENUMERATION_LIMIT, RRBasis, TooLarge, exact_pole_count, rr_basis

INF_SYMBOL = 0xFF
MAX_S = 3
MAGIC = b"SIGC"
VERSION = 1
HEADER = struct.Struct("<4sBHBIQ")
FLAG_INF_WORD = 0x01

DEVIATION_NOTE = (
    "D is an effective divisor of degree m supported on places of degree 2 and 3 "
    "outside the evaluation set, in place of a difference of two high-degree places; "
    "only deg D enters the size and distance bounds."
)
COMPANION_NOTE = (
    "closed form q^(2s+1)+q^(2s)-2q^s+2 = {value} for the D = 0 rational case is not "
    "reproduced: direct enumeration gives M = {M}"
)


class CodeError(ValueError):
    pass


class NoDisjointSupport(CodeError):
    pass


class UnsupportedS(CodeError):
    pass


class ParameterError(CodeError):
    pass


class DuplicateCodeword(CodeError):
    def __init__(self, message, witnesses=()):
        super().__init__(message)
        self.witnesses = list(witnesses)


class DisjointnessViolation(RuntimeError):
    """Two different G produced the same function."""


class CountMismatch(RuntimeError):
    """A per-G exact-pole count disagrees with its closed form."""


class CodeFormatError(CodeError):
    pass


class BadMagic(CodeFormatError):
    pass


class BadVersion(CodeFormatError):
    pass


class TruncatedFile(CodeFormatError):
    pass


class SymbolOutOfRange(CodeFormatError):
    pass


POLICIES = ("disjoint", "allow-rational")


@dataclass(frozen=True)
class ConstructionParams:
    m: int
    s: int
    d_policy: str = "disjoint"

    def __post_init__(self):
        if self.m < 0 or self.s < 0:
            raise ParameterError("m and s must be non-negative")
        if self.d_policy not in POLICIES:
            raise ParameterError(f"unknown D policy {self.d_policy!r}")


@dataclass
class SigmaCode:
    q: int
    words: np.ndarray
    metadata: dict = field(default_factory=dict)
    has_inf_word: bool = True
    sources: list | None = None

    @property
    def n(self) -> int:
        return int(self.words.shape[1])

    @property
    def M(self) -> int:
        return int(self.words.shape[0])

    def function(self, row: int):
        """The function evaluated in a row (needs ``keep_functions=True``)."""
        if self.sources is None:
            raise CodeError("code was built without keep_functions")
        if row == self.M - 1 and self.has_inf_word:
            return None
        rb, digits = self.sources[row]
        return rb.combine(digits)


# -- divisors --------------------------------------------------------------

def choose_D(model: CurveModel, m: int, policy: str = "disjoint") -> Divisor:
    """Effective divisor of degree m for the construction."""
    if m < 0:
        raise ParameterError("m must be non-negative")
    if policy not in POLICIES:
        raise ParameterError(f"unknown D policy {policy!r}")
    if m == 0:
        return Divisor()
    if policy == "allow-rational":
        return Divisor.point(model.rational_places()[0], m)
    if m == 1:
        raise NoDisjointSupport("degree 1 needs a rational place; use allow-rational")
    b = m % 2
    a = (m - 3 * b) // 2
    D = Divisor()
    if a:
        D = D + Divisor.point(model.places_of_degree(2)[0], a)
    if b:
        cubic = model.places_of_degree(3)
        if not cubic:
            raise NoDisjointSupport("no place of degree 3")
        D = D + Divisor.point(cubic[0], b)
    return D


def effective_divisors(model: CurveModel, s: int) -> list[Divisor]:
    """All effective divisors of degree <= s, by degree then canonical order."""
    if not 0 <= s <= MAX_S:
        raise UnsupportedS(f"s must lie in [0, {MAX_S}]")
    places = [p for r in range(1, s + 1) for p in model.places_of_degree(r)]
    out = [Divisor()]
    for total in range(1, s + 1):
        found = []

        def extend(start, remaining, acc):
            if remaining == 0:
                found.append(Divisor(acc))
                return
            for i in range(start, len(places)):
                pl = places[i]
                if pl.degree <= remaining:
                    nxt = dict(acc)
                    nxt[pl] = nxt.get(pl, 0) + 1
                    extend(i, remaining - pl.degree, nxt)

        extend(0, total, {})
        out.extend(found)
    return out


# -- vectorised F_q-linear maps ------------------------------------------------

def _combos(q: int, dim: int) -> np.ndarray:
    """Every coefficient vector, row i holding the base-q digits of i (low first)."""
    idx = np.arange(q**dim, dtype=np.int64)
    out = np.empty((q**dim, dim), dtype=np.int64)
    for k in range(dim):
        out[:, k] = idx % q
        idx //= q
    return out


def _lincomb(F: FieldSpec, lam: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Rows sum_k lam[:, k] * V[k] over F."""
    rows = lam.shape[0]
    if V.shape[1] == 0:
        return np.zeros((rows, 0), dtype=np.int64)
    if F.k == 1:
        return (lam @ V) % F.p
    add, mul = F.add_table, F.mul_table
    acc = np.zeros((rows, V.shape[1]), dtype=np.int64)
    for k in range(lam.shape[1]):
        acc = add[acc, mul[lam[:, k][:, None], V[k][None, :]]]
    return acc


def _pad(a, n):
    return list(a) + [0] * (n - len(a))


@dataclass
class _Stratum:
    G: Divisor
    rb: RRBasis
    keep: np.ndarray
    count: int


def build_code(model: CurveModel, params: ConstructionParams, keep_functions: bool = False) -> SigmaCode:
    F = model.field
    q = F.q
    if q > 254:
        raise CodeError("alphabet too large for one-byte symbols")
    evals = model.rational_places()
    n = len(evals)
    m, s = params.m, params.s
    if n - m - 2 * s <= 0:
        raise ParameterError(f"need n - m - 2s > 0, got n={n}, m={m}, s={s}")
    D = choose_D(model, m, params.d_policy)
    Gs = effective_divisors(model, s)

    bases = []
    for G in Gs:
        rb = rr_basis(model, D + G)
        if q**rb.dim > ENUMERATION_LIMIT:
            raise TooLarge(f"L(D+G) has {q}^{rb.dim} elements")
        bases.append(rb)

    common = (1,)
    for rb in bases:
        common = P.lcm(F, common, rb.denominator)
    la = lb = 0
    scaled = []
    for rb in bases:
        mult = P.divmod_(F, common, rb.denominator)[0]
        nums = [(P.mul(F, a, mult), P.mul(F, b, mult)) for a, b in rb.numerators]
        scaled.append(nums)
        for a, b in nums:
            la, lb = max(la, len(a)), max(lb, len(b))

    genus = model.genus
    key_rows, word_rows, strata, sources = [], [], [], []
    for G, rb, nums in zip(Gs, bases, scaled):
        A = D + G
        lam = _combos(q, rb.dim)
        keep = np.ones(lam.shape[0], dtype=bool)
        for Q in G.support:
            lead = []
            tc = trace_coordinates(F, model.residue_field(Q)) if Q.degree > 1 else None
            for f in rb.basis:
                c = model.local_expand(Q, f, -A[Q] + 1).coeff(-A[Q]) if not f.is_zero() else 0
                lead.append(tc(c) if tc else [c])
            keep &= _lincomb(F, lam, np.array(lead, dtype=np.int64)).any(axis=1)
        lam = lam[keep]
        count = int(lam.shape[0])
        if m >= 2 * genus - 1:
            expected = exact_pole_count(q, genus, m, G)
            if count != expected:
                raise CountMismatch(f"|L_D({G!r})| = {count}, closed form {expected}")
        strata.append(_Stratum(G, rb, keep, count))

        V = np.array([_pad(a, la) + _pad(b, lb) for a, b in nums], dtype=np.int64).reshape(rb.dim, la + lb)
        key_rows.append(_lincomb(F, lam, V))

        words = np.empty((count, n), dtype=np.uint8)
        for j, Pl in enumerate(evals):
            depth = max(A[Pl], 0)
            E = []
            for f in rb.basis:
                ser = model.local_expand(Pl, f, 1)
                E.append([ser.coeff(k) for k in range(-depth, 1)])
            vals = _lincomb(F, lam, np.array(E, dtype=np.int64).reshape(rb.dim, depth + 1))
            pole = vals[:, :depth].any(axis=1)
            words[:, j] = np.where(pole, INF_SYMBOL, vals[:, depth])
        word_rows.append(words)
        if keep_functions:
            sources.extend((rb, [int(v) for v in row]) for row in lam)

    keys = np.concatenate(key_rows) if key_rows else np.zeros((0, la + lb), dtype=np.int64)
    owner = np.concatenate([np.full(st.count, i) for i, st in enumerate(strata)])
    _check_disjoint(keys, owner, Gs)

    words = np.concatenate(word_rows + [np.full((1, n), INF_SYMBOL, dtype=np.uint8)])
    per_degree = {}
    for st in strata:
        per_degree[st.G.degree] = per_degree.get(st.G.degree, 0) + st.count
    meta = {
        "curve": model.describe(),
        "q": q,
        "n": n,
        "genus": genus,
        "m": m,
        "s": s,
        "d_policy": params.d_policy,
        "D": repr(D),
        "D_rational_overlap": sum(1 for p in D.support if p.degree == 1),
        "strata": {str(k): v for k, v in sorted(per_degree.items())},
        "deviation": DEVIATION_NOTE,
    }
    code = SigmaCode(q, words, meta, True, sources + [None] if keep_functions else None)
    _check_injective(code)
    return code


def _check_disjoint(keys: np.ndarray, owner: np.ndarray, Gs):
    if keys.shape[0] < 2:
        return
    _, first, counts = np.unique(keys, axis=0, return_index=True, return_counts=True)
    if (counts > 1).any():
        dup = keys[first[np.argmax(counts > 1)]]
        who = sorted({int(o) for o in owner[(keys == dup).all(axis=1)]})
        raise DisjointnessViolation(f"function shared by {[Gs[i] for i in who]}")


def _check_injective(code: SigmaCode):
    _, inverse, counts = np.unique(code.words, axis=0, return_inverse=True, return_counts=True)
    if (counts > 1).any():
        cls = int(np.argmax(counts > 1))
        rows = np.flatnonzero(inverse.ravel() == cls)[:2].tolist()
        raise DuplicateCodeword(f"rows {rows} have equal evaluation vectors", rows)


# -- minimum distance ----------------------------------------------------------

def _block_min(words: np.ndarray, start: int, stop: int, bound, early: bool):
    """Minimum distance over pairs (i, j), start <= i < stop, i < j."""
    block = words[start:stop]
    rest = words[start:]
    dist = np.zeros((block.shape[0], rest.shape[0]), dtype=np.uint8)
    n = words.shape[1]
    tri = np.arange(rest.shape[0])[None, :] <= np.arange(block.shape[0])[:, None]
    for c in range(n):
        dist += block[:, c][:, None] != rest[:, c][None, :]
        if early and c + 1 < n and c >= bound():
            masked = np.where(tri, 255, dist)
            if masked.min() > bound():
                return int(masked.min())
    dist[tri] = 255
    return int(dist.min()), dist


def min_distance(code: SigmaCode, workers: int = 1, exact_profile: bool = False, block: int = 256):
    """Exact minimum Hamming distance over all pairs of distinct rows.

    The pair space is split into row blocks handled by a thread pool; the
    minimum is reduced over blocks, so the result does not depend on
    ``workers``.  By default a block stops scanning columns once every pair
    in it is already farther apart than the best distance found so far;
    ``exact_profile=True`` disables that and also returns the full
    distance distribution.
    """
    words = np.ascontiguousarray(code.words)
    M, n = words.shape
    if M < 2:
        raise CodeError("minimum distance needs at least two words")
    best = [n + 1]

    def current():
        return best[0]

    hist = np.zeros(n + 1, dtype=np.int64)

    def run(start):
        stop = min(start + block, M)
        res = _block_min(words, start, stop, current, not exact_profile)
        if isinstance(res, int):
            return res, None
        value, dist = res
        best[0] = min(best[0], value)
        local = None
        if exact_profile:
            vals = dist[dist != 255]
            local = np.bincount(vals, minlength=n + 1)
        return value, local

    starts = range(0, M - 1, block)
    if workers <= 1:
        results = [run(s0) for s0 in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, starts))
    d = min(r[0] for r in results)
    if exact_profile:
        for _, h in results:
            hist += h
        return d, hist
    return d


# -- audit ---------------------------------------------------------------------

@dataclass
class AuditReport:
    M: int
    n: int
    q: int
    d_min: int
    size_lower: int | None
    dist_lower: int | None
    singleton_cap: int | None
    strata: dict
    strata_lower: dict
    flags: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.flags

    def to_dict(self) -> dict:
        return {
            "M": self.M,
            "n": self.n,
            "q": self.q,
            "d_min": self.d_min,
            "size_lower_bound": self.size_lower,
            "distance_lower_bound": self.dist_lower,
            "singleton_cap": self.singleton_cap,
            "strata": self.strata,
            "strata_lower": self.strata_lower,
            "flags": self.flags,
            "notes": self.notes,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
        }


def zeta_for_code(code: SigmaCode):
    """Effective-divisor counts implied by the metadata (genus, q, n = N_1)."""
    g = code.metadata.get("genus")
    if g is None:
        return None
    if g == 0:
        L = zeta_mod.lpoly_rational(code.q)
    elif g == 1:
        L = zeta_mod.lpoly_elliptic(code.q, code.n)
    else:
        L = zeta_mod.lpoly_maximal(code.q, g)
    return zeta_mod.effective_counts(L, max(code.metadata.get("s", 0), 1))


def audit(code: SigmaCode, zeta=None, workers: int = 1) -> AuditReport:
    """Exact d_min plus every inequality the construction promises.

    Without construction metadata only injectivity and the Singleton cap are
    checked.
    """
    if code.M < 2:
        raise CodeError("audit needs at least two words")
    meta = code.metadata
    q, n, M = code.q, code.n, code.M
    known = all(k in meta for k in ("m", "s", "genus"))
    if zeta is None and known:
        zeta = zeta_for_code(code)
    t0 = time.perf_counter()
    d = min_distance(code, workers)
    elapsed = time.perf_counter() - t0

    flags, notes = [], []
    if d == 0:
        flags.append("injectivity: duplicate codewords")
    cap = bounds.singleton_cap(q + 1, n, d) if d else None
    if cap is not None and M > cap:
        flags.append(f"singleton: M = {M} > {cap}")
    if not known:
        notes.append("no construction metadata: size and distance bounds not checked")
        return AuditReport(M, n, q, d, None, None, cap, {}, {}, flags, notes, elapsed)

    m, s, g = meta["m"], meta["s"], meta["genus"]
    size_lower = None
    strata_lower = {}
    if zeta is not None and m >= g - 1:
        size_lower = bounds.size_lower_bound(q, g, zeta, m, s)
        A = bounds._counts(zeta, s)
        strata_lower = {str(i): (q - 1) ** i * q ** (m - g + 1) * A[i] for i in range(s + 1)}
        if m >= 2 * g - 1:
            if M < size_lower:
                flags.append(f"size: M = {M} < {size_lower}")
            for i, lower in strata_lower.items():
                got = meta.get("strata", {}).get(i)
                if got is not None and got < lower:
                    flags.append(f"stratum {i}: {got} < {lower}")
        else:
            notes.append(f"m = {m} < 2g-1: size bound {size_lower} is not guaranteed")
    dist_lower = n - m - 2 * s - meta.get("D_rational_overlap", 0)
    if d < dist_lower:
        flags.append(f"distance: d_min = {d} < {dist_lower}")
    if g == 0 and m == 0:
        companion = q ** (2 * s + 1) + q ** (2 * s) - 2 * q**s + 2
        if companion != M:
            notes.append(COMPANION_NOTE.format(value=companion, M=M))
    return AuditReport(
        M, n, q, d, size_lower, dist_lower, cap, dict(meta.get("strata", {})),
        strata_lower, flags, notes, elapsed,
    )


# -- file format ---------------------------------------------------------------

def code_bytes(code: SigmaCode) -> bytes:
    if code.q > 254:
        raise CodeFormatError("q must be at most 254")
    flags = FLAG_INF_WORD if code.has_inf_word else 0
    header = HEADER.pack(MAGIC, VERSION, code.q, flags, code.n, code.M)
    return header + np.ascontiguousarray(code.words, dtype=np.uint8).tobytes()


def write_code(code: SigmaCode, path, sidecar: bool = True):
    path = os.fspath(path)
    with open(path, "wb") as fh:
        fh.write(code_bytes(code))
    if sidecar:
        with open(path + ".json", "w") as fh:
            json.dump(code.metadata, fh, indent=2, sort_keys=True)
            fh.write("\n")


def parse_code(data: bytes) -> SigmaCode:
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagic("not a SIGC file")
    if len(data) < HEADER.size:
        if len(data) >= 5 and data[4] != VERSION:
            raise BadVersion(f"unsupported version {data[4]}")
        raise TruncatedFile("header is incomplete")
    magic, version, q, flags, n, M = HEADER.unpack_from(data)
    if version != VERSION:
        raise BadVersion(f"unsupported version {version}")
    if M == 0:
        raise TruncatedFile("file holds no codewords")
    body = data[HEADER.size :]
    if len(body) < M * n:
        raise TruncatedFile(f"expected {M * n} symbol bytes, found {len(body)}")
    if len(body) > M * n:
        raise CodeFormatError("trailing bytes after the symbol matrix")
    words = np.frombuffer(body, dtype=np.uint8).reshape(M, n).copy()
    bad = (words >= q) & (words != INF_SYMBOL)
    if bad.any():
        r, c = map(int, np.argwhere(bad)[0])
        raise SymbolOutOfRange(f"symbol {words[r, c]} at row {r}, column {c} with q = {q}")
    return SigmaCode(q, words, {}, bool(flags & FLAG_INF_WORD))


def read_code(path) -> SigmaCode:
    path = os.fspath(path)
    with open(path, "rb") as fh:
        code = parse_code(fh.read())
    side = path + ".json"
    if os.path.exists(side):
        with open(side) as fh:
            code.metadata = json.load(fh)
    return code


def construct(curve: str, q: int, m: int, s: int, policy: str = "disjoint", **kw) -> SigmaCode:
    """Build from a curve description string (see ``curve.parse_curve``)."""
    code = build_code(parse_curve(curve, q), ConstructionParams(m, s, policy), **kw)
    code.metadata["curve_desc"] = curve
    return code


__all__ = [
    "AuditReport",
    "ConstructionParams",
    "SigmaCode",
    "audit",
    "build_code",
    "choose_D",
    "construct",
    "effective_divisors",
    "min_distance",
    "read_code",
    "write_code",
]

