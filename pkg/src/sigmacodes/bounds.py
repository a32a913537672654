"""Closed-form size bounds, propagation rules and the comparison tables.

All quantities are exact Python integers.  Scientific-notation strings are
produced only when rendering.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources

from .gf import prime_power
from .zeta import (
    LPolynomial,
    ZetaTable,
    effective_counts,
    lpoly_elliptic,
    lpoly_maximal,
)

MODES = ("strict", "paper")


class BoundsError(ValueError):
    pass


class EmptyDomain(BoundsError):
    pass


class BadAlphabets(BoundsError):
    pass


class NotPrimePower(BoundsError):
    pass


def _counts(zeta, upto: int):
    """A_0..A_upto from a ZetaTable (extended when short) or a plain sequence."""
    if isinstance(zeta, ZetaTable):
        if len(zeta) <= upto:
            zeta = effective_counts(zeta.lpoly, upto)
        return zeta.counts
    if len(zeta) <= upto:
        raise BoundsError(f"need A_0..A_{upto}, got {len(zeta)} counts")
    return tuple(zeta)


def size_lower_bound(q: int, g: int, zeta, m: int, s: int) -> int:
    """1 + sum_{i<=s} (q-1)^i q^(m-g+1) A_i."""
    if m < g - 1:
        raise BoundsError(f"m = {m} < g - 1 = {g - 1}")
    if s < 0:
        raise BoundsError("s must be non-negative")
    A = _counts(zeta, s)
    base = q ** (m - g + 1)
    return 1 + sum((q - 1) ** i * base * A[i] for i in range(s + 1))


@dataclass(frozen=True)
class BoundQuery:
    q: int
    g: int
    zeta: ZetaTable
    n: int
    d: int
    mode: str = "strict"

    def __post_init__(self):
        if self.mode not in MODES:
            raise BoundsError(f"mode must be one of {MODES}")
        if not 1 <= self.d <= self.n:
            raise BoundsError(f"need 1 <= d <= n, got d={self.d}, n={self.n}")


@dataclass(frozen=True)
class Optimum:
    m: int
    s: int
    value: int


def candidates(query: BoundQuery):
    """(m, s) pairs scanned by ``optimize``; s is the largest allowed per m."""
    q, g, n, d = query.q, query.g, query.n, query.d
    lo = max(0, 2 * g - 1) if query.mode == "strict" else max(0, g - 1)
    for m in range(lo, n - d + 1):
        s = (n - d - m) // 2
        if query.mode == "paper":
            s = min(2, s)
        yield m, s


def optimize(query: BoundQuery) -> Optimum:
    """Largest size bound over the mode's (m, s) domain, smallest m on ties."""
    best = None
    for m, s in candidates(query):
        v = size_lower_bound(query.q, query.g, query.zeta, m, s)
        if best is None or v > best.value:
            best = Optimum(m, s, v)
    if best is None:
        raise EmptyDomain(f"no admissible m for n={query.n}, d={query.d}, g={query.g}")
    return best


def singleton_cap(alphabet: int, n: int, d: int) -> int:
    return alphabet ** (n - d + 1)


def rule_extension(M: int, d: int) -> tuple[int, int]:
    """A code over a smaller alphabet keeps size and distance over a larger one."""
    return M, d


def rule_restriction(M: int, r: int, s_alpha: int, n: int) -> int:
    """Guaranteed size ceil(M r^n / s^n) after restricting an s-ary code to r symbols."""
    if not 1 <= r < s_alpha:
        raise BadAlphabets(f"restriction needs 1 <= r < s, got r={r}, s={s_alpha}")
    return -(-M * r**n // s_alpha**n)


def rule_multiplication(M1: int, M2: int, d1: int, d2: int) -> tuple[int, int]:
    return M1 * M2, min(d1, d2)


def _check_prime_power(q: int):
    pp = prime_power(q)
    if pp is None:
        raise NotPrimePower(f"{q} is not a prime power")
    return pp


def hasse_weil(q: int, g: int) -> tuple[int, int]:
    _check_prime_power(q)
    w = math.isqrt(4 * g * g * q)
    return q + 1 - w, q + 1 + w


def is_exceptional(q: int) -> bool:
    p, a = _check_prime_power(q)
    return a >= 3 and a % 2 == 1 and math.isqrt(4 * q) % p == 0


def nq1(q: int) -> int:
    """Maximum number of rational points on an elliptic curve over F_q."""
    w = math.isqrt(4 * q)
    return q + w if is_exceptional(q) else q + 1 + w


def least_prime_power_at_least(x: int) -> int:
    while prime_power(x) is None:
        x += 1
    return x


def _compare(lhs: int, rhs: int) -> str:
    if lhs > rhs:
        return "true"
    return "boundary" if lhs == rhs else "false"


def comparison_predicates(q: int, g: int, n: int, d: int, zeta) -> dict:
    """Hypotheses and conclusions of the extension/restriction comparisons.

    The logarithmic thresholds are decided by exact integer comparison of the
    exponentiated inequalities, e.g. ``d + g - 1 >= n ln(1+1/q)/ln(1+2/q)``
    becomes ``(q+2)^(d+g-1) q^n >= (q+1)^n q^(d+g-1)``; equality is reported
    as ``boundary``.
    """
    report = {}
    query_mode = "strict" if n - d >= max(0, 2 * g - 1) else "paper"
    try:
        best = optimize(BoundQuery(q, g, zeta, n, d, query_mode))
        M = best.value
    except EmptyDomain:
        best, M = None, None
    report["lower_bound"] = {
        "mode": query_mode,
        "m": best.m if best else None,
        "s": best.s if best else None,
        "value": M,
    }

    ext = q ** (n - g + 1 - d) if n - g + 1 - d >= 0 else None
    report["extension"] = {
        "hypothesis": 2 <= d <= n - g,
        "target": ext,
        "conclusion": None if M is None or ext is None else M > ext,
    }

    e = d + g - 1
    thr_ok = _compare((q + 2) ** e * q**n, (q + 1) ** n * q**e) if e >= 0 else "false"
    hyp = {"true": True, "boundary": True, "false": False}[thr_ok]
    k = n - g - d - 1
    prop_M = 1 + q**k * (1 + (q - 1) * n) if k >= 0 else None
    concl = None
    if M is not None and e >= 0:
        concl = M * (q + 2) ** e > (q + 1) ** n
    report["restriction"] = {
        "hypothesis": hyp,
        "threshold": 1 - g + n * math.log1p(1 / q) / math.log1p(2 / q),
        "threshold_status": thr_ok,
        "guaranteed": prop_M,
        "target": f"(q+1)^{n} / (q+2)^{e}",
        "conclusion": concl,
        "guaranteed_conclusion": None if prop_M is None or e < 0 else prop_M * (q + 2) ** e > (q + 1) ** n,
    }

    qa = least_prime_power_at_least(max(n - 1, q + 2))
    a = qa - q
    status = _compare(qa**d * q**n, (q + 1) ** n * qa * q**d)
    report["restriction_mds"] = {
        "alphabet": qa,
        "a": a,
        "hypothesis": status != "false",
        "threshold": (n * math.log1p(1 / q) + math.log(qa)) / math.log1p(a / q),
        "threshold_status": status,
        "conclusion": None if M is None or d < 1 else M * qa ** (d - 1) > (q + 1) ** n,
    }
    return report


# -- best-known dataset --------------------------------------------------------

@dataclass(frozen=True)
class BestKnownEntry:
    alphabet: int
    n: int
    d: int
    size: int
    note: str = ""

    def __post_init__(self):
        if self.size > singleton_cap(self.alphabet, self.n, self.d):
            raise BoundsError(f"entry {self} exceeds the Singleton bound")


@functools.lru_cache(maxsize=None)
def bestknown() -> tuple[BestKnownEntry, ...]:
    text = resources.files("sigmacodes").joinpath("data/bestknown.tsv").read_text()
    return parse_bestknown(text)


def parse_bestknown(text: str) -> tuple[BestKnownEntry, ...]:
    out = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        a, n, d, size, *note = line.split("\t")
        out.append(BestKnownEntry(int(a), int(n), int(d), int(size), note[0] if note else ""))
    return tuple(out)


def lookup(alphabet: int, n: int, d: int) -> BestKnownEntry | None:
    for e in bestknown():
        if (e.alphabet, e.n, e.d) == (alphabet, n, d):
            return e
    return None


# -- table presets -------------------------------------------------------------

@dataclass(frozen=True)
class TableSpec:
    name: str
    title: str
    q: int
    g: int
    n: int
    lpoly: LPolynomial
    distances: tuple
    restriction_alphabet: int
    restriction_n: int
    restriction_shift: int
    multiplication: bool
    style: str


PRESETS = {
    "I": TableSpec(
        "I", "6-ary codes of length 10 from y^2 = 3(x^4+2) over F_5",
        5, 1, 10, lpoly_elliptic(5, 10), tuple(range(4, 9)), 7, 10, 0, True, "plain",
    ),
    "II": TableSpec(
        "II", "10-ary codes of length 16 from y^2 = x^4+1 over F_9",
        9, 1, 16, lpoly_elliptic(9, 16), tuple(range(7, 15)), 11, 16, 0, False, "grouped",
    ),
    "III": TableSpec(
        "III", "10-ary codes of length 28 from the Hermitian curve y^3+y = x^4 over F_9",
        9, 3, 28, lpoly_maximal(9, 3), tuple(range(6, 23)), 11, 28, 2, False, "scientific",
    ),
}


@dataclass
class TableRow:
    d: int
    extension: int
    restriction: int
    multiplication: int | None
    ours: int
    ours_ms: tuple
    strict: int | None
    strict_ms: tuple | None

    @property
    def diverges(self) -> bool:
        return self.strict != self.ours


@dataclass
class Table:
    layout: TableSpec
    rows: list = field(default_factory=list)


def _multiplication_cell(n: int, d: int) -> int | None:
    two, three = lookup(2, n, d), lookup(3, n, d)
    if two and three:
        return rule_multiplication(two.size, three.size, d, d)[0]
    six = lookup(6, n, d)
    return six.size if six else None


def table_preset(name: str) -> Table:
    try:
        layout = PRESETS[name]
    except KeyError:
        raise BoundsError(f"unknown table preset {name!r}; choose from {sorted(PRESETS)}") from None
    q, g, n = layout.q, layout.g, layout.n
    zeta = effective_counts(layout.lpoly, n)
    table = Table(layout)
    for d in layout.distances:
        ext = q ** (n - g + 1 - d)
        entry = lookup(layout.restriction_alphabet, layout.restriction_n, d)
        if entry is None:
            raise BoundsError(f"no best-known entry for alphabet {layout.restriction_alphabet}, d={d}")
        restr = rule_restriction(entry.size, q + 1, layout.restriction_alphabet, n)
        mult = _multiplication_cell(n, d) if layout.multiplication else None
        ours = optimize(BoundQuery(q, g, zeta, n, d, "paper"))
        try:
            strict = optimize(BoundQuery(q, g, zeta, n, d, "strict"))
        except EmptyDomain:
            strict = None
        table.rows.append(
            TableRow(
                d, ext, restr, mult, ours.value, (ours.m, ours.s),
                strict.value if strict else None, (strict.m, strict.s) if strict else None,
            )
        )
    return table


# -- rendering -----------------------------------------------------------------

def sci3(value: int, truncate: bool = False) -> str:
    """Three significant digits as 'a.bc x 10^e' (rounded, or truncated)."""
    e = len(str(value)) - 1
    if truncate:
        mant = value // 10 ** (e - 2) if e >= 2 else value * 10 ** (2 - e)
    else:
        if e >= 2:
            div = 10 ** (e - 2)
            mant = (2 * value + div) // (2 * div)
        else:
            mant = value * 10 ** (2 - e)
        if mant >= 1000:
            mant //= 10
            e += 1
    s = str(mant)
    return f"{s[0]}.{s[1:]}x10^{e}"


def format_cell(value, style: str, scientific: bool, truncate: bool) -> str:
    if value is None:
        return "-"
    if scientific:
        return sci3(value, truncate)
    if style == "plain":
        return str(value)
    return f"{value:,}"


def _row_cells(layout: TableSpec, row: TableRow) -> list[str]:
    sci = layout.style == "scientific" and max(row.extension, row.restriction, row.ours) >= 10**6
    # the construction column is truncated to three digits, the comparison columns rounded
    cells = [
        str(row.d),
        format_cell(row.extension, layout.style, sci, False),
        format_cell(row.restriction, layout.style, sci, False),
    ]
    if layout.multiplication:
        cells.append(format_cell(row.multiplication, layout.style, sci, False))
    cells.append(format_cell(row.ours, layout.style, sci, True))
    strict_sci = sci or (
        layout.style == "scientific" and row.strict is not None and row.strict >= 10**6
    )
    cells.append(format_cell(row.strict, layout.style, strict_sci, True))
    if row.strict is None:
        note = "strict domain empty"
    elif row.diverges:
        rel = "below" if row.strict < row.ours else "above"
        note = f"strict {rel}: (m,s)={row.strict_ms} vs {row.ours_ms}"
    else:
        note = ""
    cells.append(note)
    return cells


def headers(layout: TableSpec) -> list[str]:
    h = ["d", "extension", "restriction"]
    if layout.multiplication:
        h.append("multiplication")
    return h + ["ours", "strict", "divergence"]


def render_table(table: Table, fmt: str = "md") -> str:
    layout = table.layout
    if fmt == "json":
        rows = []
        for r in table.rows:
            obj = {"d": r.d, "extension": r.extension, "restriction": r.restriction}
            if layout.multiplication:
                obj["multiplication"] = r.multiplication
            obj.update(
                {
                    "ours": r.ours,
                    "ours_m": r.ours_ms[0],
                    "ours_s": r.ours_ms[1],
                    "strict": r.strict,
                    "strict_m": r.strict_ms[0] if r.strict_ms else None,
                    "strict_s": r.strict_ms[1] if r.strict_ms else None,
                    "diverges": r.diverges,
                }
            )
            rows.append(obj)
        doc = {"table": layout.name, "title": layout.title, "q": layout.q, "g": layout.g, "n": layout.n, "rows": rows}
        return json.dumps(doc, indent=2) + "\n"
    body = [_row_cells(layout, r) for r in table.rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(headers(layout))
        w.writerows(body)
        return buf.getvalue()
    if fmt != "md":
        raise BoundsError(f"unknown format {fmt!r}")
    head = headers(layout)
    widths = [max(len(x) for x in col) for col in zip(head, *body)]

    def line(cells):
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

    out = [f"Table {layout.name}: {layout.title}", "", line(head)]
    out.append("|" + "|".join("-" * (w + 2) for w in widths) + "|")
    out.extend(line(c) for c in body)
    return "\n".join(out) + "\n"

