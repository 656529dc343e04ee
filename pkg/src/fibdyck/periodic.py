"""Periodic points of the Fibonacci-Dyck shift: enumeration, multipliers,
open indices, Λ-statistics and orbit tables.

A periodic point is represented by its period word (a ``str``); index ``i``
of the point is ``w[i % n]``.  Rotations of a word are different points of
the same orbit.
"""

from __future__ import annotations

import enum
import hashlib
import json
import os
import tempfile
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from . import __version__
from .core import LABEL, SOURCE, TARGET, order_key, reduce_word, rotate, time_reverse


class Sign(str, enum.Enum):
    NEUTRAL = "neutral"
    NEGATIVE = "negative"
    POSITIVE = "positive"


class NonIntegral(ArithmeticError):
    pass


@dataclass(frozen=True)
class MultiplierClass:
    sign: Sign
    necklace: str  # over "01"; empty for neutral points
    kappa: int = 1

    @property
    def nu0(self) -> int:
        return self.necklace.count("0")

    @property
    def nu1(self) -> int:
        return self.necklace.count("1")

    def __str__(self):
        if self.sign is Sign.NEUTRAL:
            return "1"
        s = "⁻" if self.sign is Sign.NEGATIVE else "⁺"
        return "".join(f"α{s}({c})" for c in self.necklace)


# ---------------------------------------------------------------------------
# Words on Z/nZ


def smallest_period(w: str) -> int:
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return d
    return n


def is_primitive(w: str) -> bool:
    return smallest_period(w) == len(w)


def canonical(w: str) -> str:
    """Least rotation of ``w`` under the global symbol order."""
    return min((rotate(w, k) for k in range(len(w))), key=order_key)


def least_rotation_01(w: str) -> str:
    return min(rotate(w, k) for k in range(len(w))) if w else w


def primitive_root(w: str) -> str:
    return w[: smallest_period(w)]


def window(w: str, j: int) -> str:
    """The length-n word p_(j-n, j] of the point ``w``."""
    return rotate(w, j + 1)


# ---------------------------------------------------------------------------
# Enumeration


def enumerate_points(n: int) -> Iterator[str]:
    """Every admissible period word of length ``n`` (all rotations)."""
    if n < 1:
        raise ValueError("period must be positive")
    buf: List[str] = []

    def extend(v: int, stack: List[int], plus: List[int]):
        if len(buf) == n:
            w = "".join(buf)
            if TARGET[w[-1]] == SOURCE[w[0]] and reduce_word(w + w) is not None:
                yield w
            return
        for s in "abcABC":
            if SOURCE[s] != v:
                continue
            kind, idx = LABEL[s]
            if kind > 0:
                if stack:
                    if stack[-1] != idx:
                        continue
                    top = stack.pop()
                    buf.append(s)
                    yield from extend(TARGET[s], stack, plus)
                    buf.pop()
                    stack.append(top)
                    continue
                plus.append(idx)
                buf.append(s)
                yield from extend(TARGET[s], stack, plus)
                buf.pop()
                plus.pop()
                continue
            if kind < 0:
                stack.append(idx)
            buf.append(s)
            yield from extend(TARGET[s], stack, plus)
            buf.pop()
            if kind < 0:
                stack.pop()

    for start in (0, 1):
        yield from extend(start, [], [])


def enumerate_orbits(n: int) -> Iterator[str]:
    """Canonical representatives of the orbits of smallest period ``n``."""
    for w in enumerate_points(n):
        if is_primitive(w) and canonical(w) == w:
            yield w


# ---------------------------------------------------------------------------
# Multipliers


def period_labels(w: str) -> List[Optional[Tuple[str, str]]]:
    """Reduced per-period label λ(p_[i, i+n)) for every phase ``i``."""
    return [reduce_word(rotate(w, i)) for i in range(len(w))]


def _multiplier(indices: str, sign: Sign) -> MultiplierClass:
    root = primitive_root(indices)
    return MultiplierClass(sign, least_rotation_01(root), len(indices) // len(root))


def classify(w: str) -> MultiplierClass:
    """Sign, multiplier necklace and exponent κ of the point ``w``.

    For positive points the multiplier is read right to left, so that
    time reversal maps μ⁻ onto μ⁺.
    """
    for r in period_labels(w):
        if r is None:
            raise ValueError(f"{w!r} is not an admissible cycle")
        plus, minus = r
        if not plus and not minus:
            return MultiplierClass(Sign.NEUTRAL, "", 1)
        if not plus:
            return _multiplier(minus, Sign.NEGATIVE)
        if not minus:
            return _multiplier(plus[::-1], Sign.POSITIVE)
    raise AssertionError(f"no phase of {w!r} has a one-signed label")


def nu_counts(w: str, start: int = 0) -> Tuple[int, int]:
    """(ν0, ν1) of the per-period label λ(p_[start, start+n))."""
    r = reduce_word(rotate(w, start))
    if r is None:
        raise ValueError(f"{w!r} is not admissible")
    word = r[1] if r[1] else r[0]
    return word.count("0"), word.count("1")


def open_indices(w: str, horizon: int = 2) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """Indices of β⁻(0) (resp. β⁻(1)) whose bracket never closes.

    The bracket opened at ``i`` is followed ``horizon`` periods ahead;
    one period already decides it for admissible points.
    """
    n = len(w)
    i0, i1 = set(), set()
    for i, s in enumerate(w):
        if s not in "ab":
            continue
        depth = 1
        for k in range(1, horizon * n + 1):
            kind = LABEL[w[(i + k) % n]][0]
            depth -= kind
            if depth == 0:
                break
        else:
            (i0 if s == "a" else i1).add(i)
    return frozenset(i0), frozenset(i1)


# ---------------------------------------------------------------------------
# Block structure of points with negative multiplier


@dataclass(frozen=True)
class Block:
    """Segment p_(o', o] between consecutive open indices o' < o.

    kind 0: ``f a`` with f ∈ C*;  kind 1: ``f c fo b`` with f ∈ C*, fo ∈ C°(1)*.
    """

    end: int  # index of the open symbol (mod n)
    kind: int
    f: str
    fo: str = ""

    @property
    def word(self) -> str:
        if self.kind == 0:
            return self.f + "a"
        return self.f + "c" + self.fo + "b"


def blocks(w: str) -> List[Block]:
    """Blocks of a point with negative multiplier, ordered by end index."""
    i0, i1 = open_indices(w)
    opens = sorted(i0 | i1)
    if not opens:
        raise ValueError(f"{w!r} has no open indices")
    n = len(w)
    out = []
    for k, o in enumerate(opens):
        prev = opens[k - 1] if k else opens[-1] - n
        seg = "".join(w[(prev + 1 + t) % n] for t in range(o - prev - 1))
        if w[o] == "a":
            out.append(Block(o, 0, seg))
        else:
            cut = _last_depth0_c(seg)
            out.append(Block(o, 1, seg[:cut], seg[cut + 1:]))
    return out


def _last_depth0_c(seg: str) -> int:
    depth = 0
    last = -1
    for i, s in enumerate(seg):
        if s == "c" and depth == 0:
            last = i
        depth -= LABEL[s][0]
    if last < 0:
        raise ValueError(f"segment {seg!r} has no β⁻ at depth zero")
    return last


# ---------------------------------------------------------------------------
# Λ statistics

CLASSES = ("B00", "B1", "D11", "D01", "D10")


@dataclass(frozen=True)
class LambdaStats:
    lam: int
    J: Dict[str, FrozenSet[int]]
    Jo: Dict[str, FrozenSet[int]]
    # word of each class appearing openly at each index, for callers that splice
    words: Dict[Tuple[str, int], str] = field(default_factory=dict)


def class_appearances(w: str) -> List[Tuple[str, int, int, str]]:
    """Open appearances ``(class, index, Λ, word)`` of the B- and D-class words."""
    bl = blocks(w)
    out = []
    for k, blk in enumerate(bl):
        prev = bl[k - 1]
        lf = len(blk.f)
        if blk.kind == 0 and prev.kind == 0:
            out.append(("B00", blk.end, lf, "a" + blk.f + "a"))
        if blk.kind == 1:
            b1 = "c" + blk.fo + "b"
            out.append(("B1", blk.end, len(blk.fo), b1))
            if prev.kind == 0 and lf >= len(blk.fo):
                out.append(("D01", blk.end, lf, "a" + blk.f + b1))
            if prev.kind == 1 and lf >= len(blk.fo) and lf >= len(prev.fo):
                out.append(("D11", blk.end, lf, "c" + prev.fo + "b" + blk.f + b1))
        if blk.kind == 0 and prev.kind == 1 and lf >= len(prev.fo):
            out.append(("D10", blk.end, lf, "c" + prev.fo + "b" + blk.f + "a"))
    return out


def lex_least(w: str, indices) -> FrozenSet[int]:
    """Indices j whose window p_(j-n, j] is lexicographically least."""
    if not indices:
        return frozenset()
    keys = {j: order_key(window(w, j)) for j in indices}
    best = min(keys.values())
    return frozenset(j for j, k in keys.items() if k == best)


def lambda_stats(w: str) -> LambdaStats:
    """Λ(p), the J-sets and their lex-least parts.

    Only appearances that fit in one period of the given cycle count, so the
    statistics depend on the length of ``w`` and not just on the point.
    """
    apps = [a for a in class_appearances(w) if len(a[3]) <= len(w)]
    lam = max((a[2] for a in apps), default=-1)
    J = {c: frozenset(j for cls, j, v, _ in apps if cls == c and v == lam) for c in CLASSES}
    Jo = {c: lex_least(w, J[c]) for c in CLASSES}
    words = {(cls, j): word for cls, j, _, word in apps}
    return LambdaStats(lam, J, Jo, words)


# ---------------------------------------------------------------------------
# Orbit tables


@dataclass
class OrbitTable:
    period: int
    rows: Dict[Tuple[Sign, str], int]
    neutral: int
    points: int  # card P_n (all points of period dividing n)

    @property
    def orbits(self) -> int:
        return self.neutral + sum(self.rows.values())

    @property
    def primitive_points(self) -> int:
        return self.period * self.orbits

    def count(self, sign: Sign, necklace: str) -> int:
        return self.rows.get((sign, necklace), 0)

    def signed_total(self, sign: Sign) -> int:
        return sum(c for (s, _), c in self.rows.items() if s is sign)

    def necklaces(self, sign: Sign = Sign.NEGATIVE) -> List[str]:
        return sorted(nk for (s, nk) in self.rows if s is sign)

    def to_records(self) -> List[list]:
        recs = [["neutral", "", self.neutral]]
        for (s, nk), c in sorted(self.rows.items(), key=lambda kv: (kv[0][0].value, len(kv[0][1]), kv[0][1])):
            recs.append([s.value, nk, c])
        return recs

    @classmethod
    def from_records(cls, period: int, points: int, recs: Sequence[Sequence]) -> "OrbitTable":
        rows = {}
        neutral = 0
        for s, nk, c in recs:
            if s == "neutral":
                neutral = int(c)
            else:
                rows[(Sign(s), nk)] = int(c)
        return cls(period, rows, neutral, points)

    def __eq__(self, other):
        if not isinstance(other, OrbitTable):
            return NotImplemented
        return (self.period, self.rows, self.neutral, self.points) == (
            other.period, other.rows, other.neutral, other.points)


def build_orbit_table(n: int) -> OrbitTable:
    tally: Counter = Counter()
    neutral = 0
    points = 0
    for w in enumerate_points(n):
        points += 1
        if not is_primitive(w) or canonical(w) != w:
            continue
        m = classify(w)
        if m.sign is Sign.NEUTRAL:
            neutral += 1
        else:
            tally[(m.sign, m.necklace)] += 1
    return OrbitTable(n, dict(tally), neutral, points)


_CACHE_DIR: Optional[str] = os.environ.get("FIBDYCK_CACHE_DIR")


def set_cache_dir(path: Optional[str]) -> None:
    global _CACHE_DIR
    _CACHE_DIR = path
    orbit_table.cache_clear()


def _checksum(recs) -> str:
    return hashlib.sha256(json.dumps(recs, sort_keys=True).encode()).hexdigest()[:16]


def cache_path(cache_dir: str, n: int) -> str:
    return os.path.join(cache_dir, f"orbits-{n:03d}.jsonl")


def write_table(path: str, table: OrbitTable) -> None:
    """Atomically write one orbit table as JSON lines (header, then rows)."""
    recs = table.to_records()
    header = {"n": table.period, "version": __version__, "points": table.points,
              "checksum": _checksum(recs)}
    d = os.path.dirname(path) or "."
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".orbits-", suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(json.dumps(header) + "\n")
        for r in recs:
            fh.write(json.dumps(r, ensure_ascii=False) + "\n")
    os.replace(tmp, path)


def read_table(path: str, n: Optional[int] = None) -> Optional[OrbitTable]:
    """Read a cached table; ``None`` on any mismatch (cache is advisory)."""
    try:
        with open(path) as fh:
            lines = [json.loads(x) for x in fh if x.strip()]
    except (OSError, ValueError):
        return None
    if not lines:
        return None
    header, recs = lines[0], lines[1:]
    if header.get("version") != __version__ or (n is not None and header.get("n") != n):
        return None
    if header.get("checksum") != _checksum(recs):
        return None
    return OrbitTable.from_records(header["n"], header["points"], recs)


@lru_cache(maxsize=None)
def orbit_table(n: int) -> OrbitTable:
    if n < 1:
        raise ValueError("period must be positive")
    if _CACHE_DIR:
        path = cache_path(_CACHE_DIR, n)
        t = read_table(path, n)
        if t is not None:
            return t
        t = build_orbit_table(n)
        write_table(path, t)
        return t
    return build_orbit_table(n)


def is_exceptional(necklace: str, n: int) -> bool:
    """card O_n(μ⁻) > card of all other negative-multiplier orbits of period n."""
    t = orbit_table(n)
    mine = t.count(Sign.NEGATIVE, necklace)
    return mine > t.signed_total(Sign.NEGATIVE) - mine


def exceptional_pairs(max_n: int) -> List[Tuple[str, int]]:
    out = []
    for n in range(1, max_n + 1):
        for nk in orbit_table(n).necklaces():
            if is_exceptional(nk, n):
                out.append((nk, n))
    return out


# ---------------------------------------------------------------------------
# Möbius inversion


def mobius(n: int) -> int:
    res, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            res = -res
        p += 1
    if m > 1:
        res = -res
    return res


def divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def mobius_orbits(point_counts: Sequence[int]) -> List[int]:
    """Orbit counts from point counts; ``point_counts[k-1]`` is card P_k."""
    out = []
    for n in range(1, len(point_counts) + 1):
        s = sum(mobius(n // d) * point_counts[d - 1] for d in divisors(n))
        q = Fraction(s, n)
        if q.denominator != 1 or q < 0:
            raise NonIntegral(f"orbit count {q} at period {n} from {list(point_counts[:n])}")
        out.append(int(q))
    return out


def orbits_to_points(orbit_counts: Sequence[int]) -> List[int]:
    return [sum(d * orbit_counts[d - 1] for d in divisors(n)) for n in range(1, len(orbit_counts) + 1)]


def reversal_pairs(n: int) -> Iterator[Tuple[str, str]]:
    """(p, ρ(p)) for every negative-multiplier point of smallest period n."""
    for w in enumerate_points(n):
        if is_primitive(w) and classify(w).sign is Sign.NEGATIVE:
            yield w, time_reverse(w)
