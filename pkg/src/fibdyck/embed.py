"""Embedding test for irreducible subshifts of finite type into the
Fibonacci-Dyck shift.

An SFT is given as the edge shift of a nonnegative integer matrix. Its orbit
counts are compared against the neutral, α(0), α(1) and positive orbit counts
of the Fibonacci-Dyck shift, and its entropy against the two bounds
3/2 log 3 - log 2 and 3 log 2 - log 3.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .periodic import Sign, mobius_orbits, orbit_table
from .series import ALPHA_COVERS_BOTH_SIGNS, entropy_constants, point_counts


class NotIrreducible(ValueError):
    pass


class ConsistencyFailure(RuntimeError):
    """Enumerated and zeta-derived reference counts disagree."""


class BadMatrix(ValueError):
    pass


Matrix = Tuple[Tuple[int, ...], ...]


def _mat_mul(x: Matrix, y: Matrix) -> Matrix:
    cols = list(zip(*y))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in x)


def _reachable(adj: Matrix, start: int) -> set:
    seen = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for j, v in enumerate(adj[i]):
            if v and j not in seen:
                seen.add(j)
                stack.append(j)
    return seen


@dataclass(frozen=True)
class SFTGraph:
    size: int
    adjacency: Matrix

    def __post_init__(self):
        adj = tuple(tuple(int(v) for v in row) for row in self.adjacency)
        object.__setattr__(self, "adjacency", adj)
        if self.size < 1 or len(adj) != self.size or any(len(r) != self.size for r in adj):
            raise BadMatrix(f"adjacency must be {self.size}x{self.size}")
        if any(v < 0 for r in adj for v in r):
            raise BadMatrix("adjacency entries must be nonnegative")
        if not any(v for r in adj for v in r):
            raise NotIrreducible("graph has no edges")
        # strongly connected: everything reachable from 0 in A and in Aᵀ
        if len(_reachable(adj, 0)) != self.size or len(_reachable(self.transpose().adjacency, 0)) != self.size:
            raise NotIrreducible("graph is not strongly connected")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "SFTGraph":
        return cls(len(rows), tuple(tuple(r) for r in rows))

    @classmethod
    def from_json(cls, text: str) -> "SFTGraph":
        try:
            data = json.loads(text)
            n, adj = data["n"], data["adj"]
        except (ValueError, KeyError, TypeError) as e:
            raise BadMatrix(f"expected {{\"n\": size, \"adj\": [[...]]}}: {e}") from None
        if not isinstance(n, int) or not isinstance(adj, list) or not all(isinstance(r, list) for r in adj):
            raise BadMatrix("n must be an integer and adj a list of rows")
        if not all(isinstance(v, int) and not isinstance(v, bool) for r in adj for v in r):
            raise BadMatrix("adjacency entries must be integers")
        return cls(n, tuple(tuple(r) for r in adj))

    @classmethod
    def load(cls, path: str) -> "SFTGraph":
        with open(path) as fh:
            return cls.from_json(fh.read())

    def to_json(self) -> str:
        return json.dumps({"n": self.size, "adj": [list(r) for r in self.adjacency]})

    def transpose(self) -> "SFTGraph":
        t = tuple(zip(*self.adjacency))
        obj = object.__new__(SFTGraph)
        object.__setattr__(obj, "size", self.size)
        object.__setattr__(obj, "adjacency", t)
        return obj


def from_forbidden(alphabet: Sequence[str], forbidden: Sequence[str]) -> SFTGraph:
    """Higher-block presentation of a vertex shift given by forbidden words.

    Only forbidden words of length at most 3 are supported.
    """
    L = max((len(w) for w in forbidden), default=1)
    if L > 3:
        raise BadMatrix("forbidden words longer than 3 are not supported")
    bad = set(forbidden)
    m = max(L - 1, 1)

    def allowed(w: str) -> bool:
        return not any(w[i:j] in bad for i in range(len(w)) for j in range(i + 1, len(w) + 1))

    verts = [w for w in map("".join, itertools.product(alphabet, repeat=m)) if allowed(w)]
    index = {w: i for i, w in enumerate(verts)}
    adj = [[0] * len(verts) for _ in verts]
    for w in verts:
        for s in alphabet:
            nxt = (w + s)[1:]
            if nxt in index and allowed(w + s):
                adj[index[w]][index[nxt]] = 1
    return SFTGraph.from_rows(adj)


# ---------------------------------------------------------------------------
# entropy and orbit counts


@dataclass(frozen=True)
class Entropy:
    value: float
    lower: float
    upper: float


def spectral_bracket(g: SFTGraph, tol: float = 1e-12, max_iter: int = 1_000_000) -> Tuple[float, float]:
    """Collatz-Wielandt bounds on the Perron root, tightened by power iteration.

    Iterates with A + I, which is primitive whenever A is irreducible and has
    the same Perron vector, so periodic graphs converge too.
    """
    n = g.size
    a = g.adjacency
    x = [1.0] * n
    lo, hi = 0.0, math.inf
    for _ in range(max_iter):
        y = [x[i] + sum(a[i][j] * x[j] for j in range(n)) for i in range(n)]
        ratios = [y[i] / x[i] for i in range(n)]
        lo, hi = max(lo, min(ratios) - 1), min(hi, max(ratios) - 1)
        if hi - lo <= tol * max(lo, 1e-300):
            break
        s = max(y)
        x = [v / s for v in y]
    return lo, hi


def sft_entropy_bracket(g: SFTGraph, tol: float = 1e-12) -> Entropy:
    lo, hi = spectral_bracket(g, tol)
    lo_e = math.log(lo) if lo > 0 else -math.inf
    hi_e = math.log(hi) if hi > 0 else -math.inf
    mid = math.log((lo + hi) / 2) if hi > 0 else -math.inf
    return Entropy(mid, lo_e, hi_e)


def sft_entropy(g: SFTGraph, tol: float = 1e-12) -> float:
    return sft_entropy_bracket(g, tol).value


def sft_traces(g: SFTGraph, k_max: int) -> List[int]:
    """trace(A^k) for k = 1..k_max with exact integers."""
    out = []
    p = g.adjacency
    for k in range(1, k_max + 1):
        if k > 1:
            p = _mat_mul(p, g.adjacency)
        out.append(sum(p[i][i] for i in range(g.size)))
    return out


def sft_orbit_counts(g: SFTGraph, k_max: int) -> List[int]:
    return mobius_orbits(sft_traces(g, k_max))


# ---------------------------------------------------------------------------
# reference counts


@dataclass
class ReferenceCounts:
    """Orbit counts of the Fibonacci-Dyck shift for k = 1..k_max (index k-1).

    ``alpha0`` and ``alpha1`` count orbits of either sign; ``plus`` counts
    orbits with a positive multiplier.
    """
    k_max: int
    enum_limit: int
    neutral: List[int]
    alpha0: List[int]
    alpha1: List[int]
    plus: List[int]
    total: List[int]

    def union(self, cond: str, k: int) -> int:
        # neutral orbits carry no multiplier, so the unions are disjoint
        other = {"a": self.alpha0, "b": self.alpha1, "c": self.plus}[cond]
        return self.neutral[k - 1] + other[k - 1]


def _zeta_orbits(k_max: int) -> Dict[str, List[int]]:
    z = {kind: mobius_orbits(point_counts(kind, k_max)) for kind in ("neutral", "alpha0", "alpha1", "full")}
    plus = []
    for k in range(k_max):
        diff = z["full"][k] - z["neutral"][k]
        if diff % 2:
            raise ConsistencyFailure(f"odd count of non-neutral orbits at period {k + 1}")
        plus.append(diff // 2)
    z["plus"] = plus
    return z


def fd_reference_counts(k_max: int, enum_limit: int = 12) -> ReferenceCounts:
    if k_max < 1:
        raise ValueError("k_max must be positive")
    z = _zeta_orbits(k_max)
    limit = min(enum_limit, k_max)
    signs = (Sign.NEGATIVE, Sign.POSITIVE) if ALPHA_COVERS_BOTH_SIGNS else (Sign.NEGATIVE,)
    for k in range(1, limit + 1):
        t = orbit_table(k)
        enum = {
            "neutral": t.neutral,
            "alpha0": sum(t.count(s, "0") for s in signs),
            "alpha1": sum(t.count(s, "1") for s in signs),
            "plus": t.signed_total(Sign.POSITIVE),
            "full": t.orbits,
        }
        for kind, v in enum.items():
            if z[kind][k - 1] != v:
                raise ConsistencyFailure(
                    f"{kind} orbits at period {k}: enumeration {v}, zeta {z[kind][k - 1]}")
        assert t.neutral + enum["alpha0"] + enum["alpha1"] <= t.orbits
    return ReferenceCounts(k_max, enum_limit, z["neutral"], z["alpha0"], z["alpha1"], z["plus"], z["full"])


# ---------------------------------------------------------------------------
# verdict

CONDITIONS = ("a", "b", "c")
HOLDS = "holds-to-horizon"
FAILS = "fails-at-k"
ENTROPY_FAILS = "entropy-fails"
ENTROPY_UNSURE = "inconclusive-entropy"

EMBEDDABLE = "embeddable"
NOT_EMBEDDABLE = "not-embeddable"
INCONCLUSIVE = "inconclusive"


@dataclass
class ConditionResult:
    name: str
    bound: float
    status: str
    fails_at: Optional[int] = None


@dataclass
class EmbeddingVerdict:
    k_max: int
    entropy: Entropy
    margin_a: float
    margin_c: float
    conditions: Dict[str, ConditionResult]
    orbits: List[int]
    reference: ReferenceCounts = field(repr=False)

    @property
    def overall(self) -> str:
        st = [c.status for c in self.conditions.values()]
        if HOLDS in st:
            return EMBEDDABLE
        if all(s in (FAILS, ENTROPY_FAILS) for s in st):
            return NOT_EMBEDDABLE
        return INCONCLUSIVE

    @property
    def summary(self) -> str:
        o = self.overall
        if o == EMBEDDABLE:
            return f"embeddable (holds to horizon {self.k_max})"
        if o == INCONCLUSIVE:
            return "inconclusive-entropy"
        return o

    @property
    def exit_code(self) -> int:
        return {EMBEDDABLE: 0, NOT_EMBEDDABLE: 1, INCONCLUSIVE: 2}[self.overall]

    def table(self) -> List[dict]:
        r = self.reference
        return [{"k": k, "orbits": self.orbits[k - 1],
                 "a": r.union("a", k), "b": r.union("b", k), "c": r.union("c", k)}
                for k in range(1, self.k_max + 1)]

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "summary": self.summary,
            "k_max": self.k_max,
            "entropy": self.entropy.value,
            "entropy_bracket": [self.entropy.lower, self.entropy.upper],
            "margin_a": self.margin_a,
            "margin_c": self.margin_c,
            "conditions": {n: {"status": c.status, "fails_at": c.fails_at, "bound": c.bound}
                           for n, c in self.conditions.items()},
            "table": self.table(),
        }


def _entropy_status(e: Entropy, bound: float) -> Optional[str]:
    if e.upper < bound:
        return None
    if e.lower >= bound:
        return ENTROPY_FAILS
    return ENTROPY_UNSURE


def check_embedding(g: SFTGraph, k_max: int = 30, enum_limit: int = 12,
                    reference: Optional[ReferenceCounts] = None, tol: float = 1e-12) -> EmbeddingVerdict:
    if reference is None or reference.k_max < k_max:
        reference = fd_reference_counts(k_max, enum_limit)
    h_a, h_c = entropy_constants()
    ent = sft_entropy_bracket(g, tol)
    orbits = sft_orbit_counts(g, k_max)
    results = {}
    for name, bound in (("a", h_a), ("b", h_a), ("c", h_c)):
        status = _entropy_status(ent, bound)
        fails_at = next((k for k in range(1, k_max + 1) if orbits[k - 1] > reference.union(name, k)), None)
        if status == ENTROPY_FAILS:
            pass
        elif fails_at is not None:
            status = FAILS
        elif status is None:
            status = HOLDS
        results[name] = ConditionResult(name, bound, status, fails_at)
    return EmbeddingVerdict(k_max, ent, h_a - ent.value, h_c - ent.value, results, orbits, reference)
