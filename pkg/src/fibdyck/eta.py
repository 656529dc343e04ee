"""Shift-commuting injections η_n out of P_n°(μ⁻) for the four multiplier
families, with the partitions they are built on and the inverse maps.

Families:

* ``L1``  multiplier α(0)α(1), n > 5
* ``L2``  every multiplier outside {α(0), α(1), α(0)α(1)}, n > 4
* ``M0``  multiplier α(0), n >= 7
* ``M1``  multiplier α(1), n > 2

Every rule rewrites the point near a designated open index.  The index is
chosen from data that rotates with the point (open appearances, Λ-maximisers,
lexicographically least windows), so the maps commute with the shift.
Replacement words always have the length of the words they replace.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .codes import (
    Code, NotInDomain, Star, delta0, delta1, factorize, in_c0_star, in_c_star,
    member, parse, phi0, phi0_inv, phi1_inv, psi, psi_inv, xi_map, xi_map_inv,
)
from .core import LABEL, is_admissible_cycle, order_key, rotate
from .periodic import (
    Block, Sign, blocks, classify, enumerate_points, is_primitive, lambda_stats,
    lex_least, nu_counts, open_indices, orbit_table, smallest_period, window,
)

FAMILIES = ("L1", "L2", "M0", "M1")

CELLS: Dict[str, Tuple[str, ...]] = {
    "L1": ("[1]", "[0]", "[β]", "(1)", "(0,1)", "(1,0)"),
    "L2": ("(0,0)", "(1,1)", "(0,1,0)", "(•,1,1)", "(1,1,•)", "(0,1)", "(1,0)"),
    "M0": ("(1)", "(β)", "(β,0)", "(0,2)", "(0,1,l)", "(0,1,m)", "(0,1,r)",
           "(0,1,r,β)", "(0,1,r,1)"),
    "M1": ("(1)", "(2)", "(3)", "(4)"),
}

# smallest period each family is defined for
THRESHOLD = {"L1": 6, "L2": 5, "M0": 7, "M1": 3}

_EXCLUDED_FROM_L2 = frozenset({"0", "1", "01"})


class NotInImage(ValueError):
    """``reconstruct`` was given a point outside the image of the cell."""


@dataclass(frozen=True)
class PartitionCell:
    family: str
    cell: str

    def __str__(self):
        return f"{self.family}{self.cell}"


@dataclass(frozen=True)
class EtaResult:
    image: str
    cell: PartitionCell
    nu: Tuple[int, int]


# ---------------------------------------------------------------------------
# Word surgery on cyclic words


def _splice(w: str, start: int, old: str, new: str) -> str:
    """Replace the occurrence of ``old`` beginning at cyclic index ``start``."""
    if len(old) != len(new):
        raise AssertionError(f"length change {old!r} -> {new!r}")
    r = rotate(w, start)
    if not r.startswith(old):
        raise AssertionError(f"{old!r} does not occur at {start} in {w!r}")
    return rotate(new + r[len(old):], -start)


def _from_window(new_window: str, i: int) -> str:
    """The point whose window p_(i-n, i] is ``new_window``."""
    return rotate(new_window, -(i + 1))


class _Point:
    """Cached block data of a point with negative multiplier."""

    def __init__(self, w: str):
        self.w = w
        self.n = len(w)
        self.bl: List[Block] = blocks(w)
        ends = [b.end for b in self.bl]
        self.starts = [(ends[k - 1] + 1) % self.n for k in range(len(ends))]
        self.index_of_end = {e: k for k, e in enumerate(ends)}

    def block(self, k: int) -> Block:
        return self.bl[k % len(self.bl)]

    def start(self, k: int) -> int:
        return self.starts[k % len(self.bl)]

    def b1_start(self, k: int) -> int:
        """Index of the β⁻ opening the B(1) word of a type-1 block."""
        blk = self.block(k)
        return (self.start(k) + len(blk.f)) % self.n


def _c0_occurrences(w: str) -> List[Tuple[int, int]]:
    """Cyclic appearances ``(start, length)`` of words in C(0)."""
    n = len(w)
    out = []
    for i, s in enumerate(w):
        if s != "a":
            continue
        depth = 0
        for k in range(n):
            depth -= LABEL[w[(i + k) % n]][0]
            if depth == 0:
                out.append((i, k + 1))
                break
    return out


class _Chooser:
    """Replays one branch through the tie points of a reconstruction.

    Identifications such as "the longest C(0) word appearing in q" can tie.
    Each tie is a branch point; ``reconstruct`` walks every branch and keeps
    the candidates that ``eta`` sends back to q.
    """

    def __init__(self, path: Sequence[int] = ()):
        self.path = list(path)
        self.widths: List[int] = []

    def __call__(self, hits):
        i = len(self.widths)
        self.widths.append(len(hits))
        return hits[self.path[i] if i < len(self.path) else 0]


_choose = _Chooser()


def _unique_longest(occs: Sequence[Tuple[int, int]], what: str) -> Tuple[int, int]:
    if not occs:
        raise NotInImage(f"no {what} appears")
    top = max(L for _, L in occs)
    return _choose([o for o in occs if o[1] == top])


def _open_b00(pt: _Point) -> List[Tuple[int, int, int]]:
    """Open B(0,0) appearances as ``(start, length, block index)``."""
    out = []
    m = len(pt.bl)
    if m < 2:
        return out
    for k in range(m):
        cur, prev = pt.block(k), pt.block(k - 1)
        if cur.kind == 0 and prev.kind == 0:
            out.append((prev.end, len(cur.f) + 2, k))
    return out


def _cut(w: str, start: int, length: int) -> str:
    return rotate(w, start)[:length]


# ---------------------------------------------------------------------------
# Domain


def source_ok(family: str, necklace: str) -> bool:
    if family == "L1":
        return necklace == "01"
    if family == "M0":
        return necklace == "0"
    if family == "M1":
        return necklace == "1"
    if family == "L2":
        return necklace not in _EXCLUDED_FROM_L2
    raise ValueError(f"unknown family {family!r}")


def _check_domain(w: str, family: str):
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    n = len(w)
    if n < THRESHOLD[family]:
        raise NotInDomain(f"{family} is defined for periods >= {THRESHOLD[family]}, got {n}")
    if not w or not is_admissible_cycle(w) or not is_primitive(w):
        raise NotInDomain(f"{w!r} is not a point of smallest period {n}")
    m = classify(w)
    if m.sign is not Sign.NEGATIVE or not source_ok(family, m.necklace):
        raise NotInDomain(f"{w!r} has multiplier {m}, outside the domain of {family}")
    return m


# ---------------------------------------------------------------------------
# L1: multiplier α(0)α(1)


def _l1_plan(w: str, kappa: int) -> Tuple[str, str]:
    pt = _Point(w)
    if kappa == 1:
        # window at the open β⁻(1):  f⁻ β⁻(0) f⁺ β⁻ f° β⁻(1)
        k = next(k for k, b in enumerate(pt.bl) if b.kind == 1)
        blk = pt.block(k)
        fplus = blk.f
        if member(fplus, Code.Q1):
            return "[1]", _splice(w, pt.start(k), fplus, delta1(fplus))
        if member(fplus, Code.Q0):
            return "[0]", _splice(w, pt.start(k), fplus, delta0(fplus))
        b = "c" + blk.fo + "b"
        return "[β]", _splice(w, pt.b1_start(k), b, xi_map(b))
    st = lambda_stats(w)
    if st.Jo["B1"]:
        j = min(st.Jo["B1"])
        b = st.words[("B1", j)]
        return "(1)", _splice(w, j - len(b) + 1, b, xi_map(b))
    if st.Jo["D01"]:
        j = min(st.Jo["D01"])
        k = pt.index_of_end[j]
        b = "c" + pt.block(k).fo + "b"
        return "(0,1)", _splice(w, pt.b1_start(k), b, phi0(xi_map(b)))
    if st.Jo["D10"]:
        j = min(st.Jo["D10"])
        d = st.words[("D10", j)]
        k = pt.index_of_end[j]
        prev = pt.block(k - 1)
        b = "c" + prev.fo + "b"
        f = pt.block(k).f
        return "(1,0)", _splice(w, j - len(d) + 1, d, phi0(xi_map(b)) + f + "a")
    raise AssertionError(f"L1 cascade exhausted on {w!r}")


def _l1_reconstruct(q: str, cell: str) -> str:
    pt = _Point(q)
    m = len(pt.bl)
    if cell == "[1]":
        # after the open β⁻(0): B(1,1) split over two type-1 blocks
        if m != 4:
            raise NotInImage("expected four open indices")
        k0 = next((k for k, b in enumerate(pt.bl) if b.kind == 0), None)
        if k0 is None or [pt.block(k0 + t).kind for t in range(1, 4)] != [1, 1, 1]:
            raise NotInImage("wrong block pattern")
        b1, b2 = pt.block(k0 + 1), pt.block(k0 + 2)
        if b2.fo:
            raise NotInImage("B(1,1) does not end in β⁻β⁻(1)")
        old = "c" + b1.fo + "b" + b2.f + "cb"
        return _splice(q, pt.b1_start(k0 + 1), old, phi1_inv(old))
    if cell == "[0]":
        if m != 4:
            raise NotInImage("expected four open indices")
        k1 = next((k for k, b in enumerate(pt.bl) if b.kind == 1), None)
        if k1 is None or [pt.block(k1 + t).kind for t in range(1, 4)] != [0, 0, 0]:
            raise NotInImage("wrong block pattern")
        inner = pt.block(k1 + 3).f
        old = "a" + inner + "a"
        return _splice(q, pt.block(k1 + 2).end, old, phi0_inv(old))
    if cell == "[β]":
        if m != 1 or pt.bl[0].kind != 0:
            raise NotInImage("expected a single open β⁻(0)")
        x = pt.bl[0].f
        lead = 0
        while x.startswith("cC", lead):
            lead += 2
        cw = parse(("a", Star.C, "A"), x[lead:lead + _c0_len(x, lead)])
        if cw is None:
            raise NotInImage("no C(0) word after the {β⁻β⁺}* prefix")
        c = x[lead:lead + _c0_len(x, lead)]
        return _splice(q, pt.start(0) + lead, c, xi_map_inv(c))
    if cell == "(1)":
        s, L = _unique_longest(_c0_occurrences(q), "C(0) word")
        c = _cut(q, s, L)
        return _splice(q, s, c, xi_map_inv(c))
    if cell == "(0,1)":
        s, L, k = _unique_longest_b00(pt)
        nxt = pt.block(k + 1)
        if nxt.kind != 0:
            raise NotInImage("longest B(0,0) is not followed by C*β⁻(0)")
        old = "a" + nxt.f + "a"
        return _splice(q, pt.block(k).end, old, xi_map_inv(phi0_inv(old)))
    if cell == "(1,0)":
        s, L, k = _unique_longest_b00(pt)
        prev = pt.block(k - 1)
        if prev.kind != 0 or pt.block(k - 2).kind != 0:
            raise NotInImage("longest B(0,0) is not preceded by B(0,0)")
        old = "a" + prev.f + "a"
        return _splice(q, pt.block(k - 2).end, old, xi_map_inv(phi0_inv(old)))
    raise ValueError(f"unknown L1 cell {cell!r}")


def _c0_len(x: str, i: int) -> int:
    if not x.startswith("a", i):
        return 0
    depth = 0
    for k in range(i, len(x)):
        depth -= LABEL[x[k]][0]
        if depth == 0:
            return k - i + 1
    return 0


def _unique_longest_b00(pt: _Point) -> Tuple[int, int, int]:
    occ = _open_b00(pt)
    if not occ:
        raise NotInImage("no open B(0,0) word")
    top = max(L for _, L, _ in occ)
    return _choose([o for o in occ if o[1] == top])


# ---------------------------------------------------------------------------
# L2: the remaining multipliers


def _l2_plan(w: str) -> Tuple[str, str]:
    pt = _Point(w)
    st = lambda_stats(w)
    if st.Jo["B00"]:
        j = min(st.Jo["B00"])
        b = st.words[("B00", j)]
        return "(0,0)", _splice(w, j - len(b) + 1, b, phi0_inv(b))
    if st.Jo["D11"]:
        j = min(st.Jo["D11"])
        d = st.words[("D11", j)]
        k = pt.index_of_end[j]
        prev, cur = pt.block(k - 1), pt.block(k)
        b = "c" + prev.fo + "b"
        new = phi0(xi_map(b)) + cur.f + "A" + psi(cur.fo) + "a"
        return "(1,1)", _splice(w, j - len(d) + 1, d, new)
    if st.Jo["B1"]:
        j = min(st.Jo["B1"])
        k = pt.index_of_end[j]
        blk, prev, nxt = pt.block(k), pt.block(k - 1), pt.block(k + 1)
        b = "c" + blk.fo + "b"
        s = pt.b1_start(k)
        if prev.kind == 0 and nxt.kind == 0:
            old = b + nxt.f + "a"
            return "(0,1,0)", _splice(w, s, old, xi_map(b) + nxt.f + "A")
        if nxt.kind == 1:
            return "(•,1,1)", _splice(w, s, b, phi0(xi_map(b)))
        return "(1,1,•)", _splice(w, s, b, xi_map(b))
    if st.Jo["D01"]:
        j = min(st.Jo["D01"])
        k = pt.index_of_end[j]
        b = "c" + pt.block(k).fo + "b"
        return "(0,1)", _splice(w, pt.b1_start(k), b, phi0(xi_map(b)))
    if st.Jo["D10"]:
        j = min(st.Jo["D10"])
        d = st.words[("D10", j)]
        k = pt.index_of_end[j]
        b = "c" + pt.block(k - 1).fo + "b"
        f = pt.block(k).f
        return "(1,0)", _splice(w, j - len(d) + 1, d, phi0(xi_map(b)) + f + "A")
    raise AssertionError(f"L2 cascade exhausted on {w!r}")


def _l2_reconstruct(q: str, cell: str) -> str:
    if cell == "(0,0)":
        s, L = _unique_longest(_c0_occurrences(q), "C(0) word")
        c = _cut(q, s, L)
        return _splice(q, s, c, phi0(c))
    if cell == "(1,1)":
        # β⁻(0) h⁻ β⁻(0) h β⁺(0) h⁺ β⁻(0)  ->  β⁻ Ψ⁻¹(h⁻) β⁻(1) h β⁻ Ψ⁻¹(h⁺) β⁻(1)
        s, L = _unique_longest(_c0_occurrences(q), "C(0) word")
        pt = _Point(q)
        k = _block_containing(pt, s)
        blk = pt.block(k)
        if blk.kind != 0 or pt.block(k - 1).kind != 0:
            raise NotInImage("longest C(0) word is not inside a β⁻(0)-block")
        off = (s - pt.start(k)) % pt.n
        hm, core, hp = blk.f[:off], blk.f[off:off + L], blk.f[off + L:]
        if not (in_c0_star(hm) and in_c0_star(hp)):
            raise NotInImage("flanks are not in C(0)*")
        old = "a" + hm + core + hp + "a"
        new = "c" + psi_inv(hm) + "b" + core[1:-1] + "c" + psi_inv(hp) + "b"
        return _splice(q, pt.block(k - 1).end, old, new)
    if cell == "(0,1,0)":
        s, L = _unique_longest(_c0_occurrences(q), "C(0) word")
        c = _cut(q, s, L)
        q1 = _splice(q, s, c, phi0(c))
        s, L = _unique_longest(_c0_occurrences(q1), "C(0) word")
        c = _cut(q1, s, L)
        return _splice(q1, s, c, xi_map_inv(c))
    if cell == "(•,1,1)":
        pt = _Point(q)
        s, L, _ = _unique_longest_b00(pt)
        b = _cut(q, s, L)
        return _splice(q, s, b, xi_map_inv(phi0_inv(b)))
    if cell == "(1,1,•)":
        s, L = _unique_longest(_c0_occurrences(q), "C(0) word")
        c = _cut(q, s, L)
        return _splice(q, s, c, xi_map_inv(c))
    if cell == "(0,1)":
        pt = _Point(q)
        s, L, k = _unique_longest_b00(pt)
        nxt = pt.block(k + 1)
        if nxt.kind != 0 or not in_c0_star(nxt.f):
            raise NotInImage("longest B(0,0) is not followed by C(0)*β⁻(0)")
        old = "a" + nxt.f + "a"
        return _splice(q, pt.block(k).end, old, "c" + psi_inv(nxt.f) + "b")
    if cell == "(1,0)":
        s, L = _unique_longest(_c0_occurrences(q), "C(0) word")
        pt = _Point(q)
        k = _block_containing(pt, s)
        blk = pt.block(k)
        off = (s - pt.start(k)) % pt.n
        h = blk.f[:off]
        if not in_c0_star(h) or pt.block(k - 1).kind != 0:
            raise NotInImage("longest C(0) word is not preceded by β⁻(0)C(0)*")
        g = blk.f[off + 1:off + L - 1]
        rest = blk.f[off + L:]
        old = "a" + h + "a" + g + "A" + rest
        new = "c" + psi_inv(h) + "b" + g + "a" + rest
        return _splice(q, pt.block(k - 1).end, old, new)
    raise ValueError(f"unknown L2 cell {cell!r}")


def _block_containing(pt: _Point, s: int) -> int:
    for k in range(len(pt.bl)):
        off = (s - pt.start(k)) % pt.n
        length = (pt.block(k).end - pt.start(k)) % pt.n + 1
        if off < length:
            return k
    raise AssertionError("index outside every block")


# ---------------------------------------------------------------------------
# M1: multiplier α(1)


def _m1_plan(w: str) -> Tuple[str, str]:
    pt = _Point(w)
    cbs = [k for k, b in enumerate(pt.bl) if not b.fo]
    if cbs:
        q = w
        for k in cbs:
            q = _splice(q, pt.block(k).end - 1, "cb", "aa")
        return "(1)", q
    if len(pt.bl) >= 2:
        (j,) = lex_least(w, [b.end for b in pt.bl])
        k = pt.index_of_end[j]
        fo = pt.block(k).fo
        b = "c" + fo + "b"
        return "(2)", _splice(w, pt.b1_start(k), b, "a" + psi(fo) + "a")
    blk = pt.bl[0]
    fo = blk.fo
    if blk.f:
        b = "c" + fo + "b"
        return "(3)", _splice(w, pt.b1_start(0), b, "a" + psi(fo)[:-1] + "cb")
    first = factorize(fo, Code.Co1).factors[0]
    rest = fo[len(first):]
    old = "c" + fo
    new = phi0(psi(first)) + psi(rest) + "c"
    return "(4)", _splice(w, pt.start(0), old, new)


def _m1_reconstruct(q: str, cell: str) -> str:
    pt = _Point(q)
    n = pt.n
    if cell == "(1)":
        i0, i1 = open_indices(q)
        if not i0:
            raise NotInImage("no open β⁻(0)")
        runs = []
        for i in sorted(i0):
            if (i - 1) % n in i0:
                continue
            L = 1
            while (i + L) % n in i0 and L < n:
                L += 1
            runs.append((i, L))
        out = q
        for i, L in runs:
            if L % 2:
                raise NotInImage("odd run of open β⁻(0)")
            out = _splice(out, i, "a" * L, "cb" * (L // 2))
        return out
    if cell == "(2)":
        s, L, k = _unique_longest_b00(pt)
        inner = pt.block(k).f
        if not in_c0_star(inner):
            raise NotInImage("open B(0,0) word is not β⁻(0)C(0)*β⁻(0)")
        old = "a" + inner + "a"
        return _splice(q, s, old, "c" + psi_inv(inner) + "b")
    if cell == "(3)":
        kinds = [b.kind for b in pt.bl]
        if sorted(kinds) != [0, 0, 1]:
            raise NotInImage("expected open indices β⁻(0), β⁻(0), β⁻(1)")
        k1 = kinds.index(1)
        first, second, last = pt.block(k1 + 1), pt.block(k1 + 2), pt.block(k1)
        if last.fo or second.kind != 0 or first.kind != 0:
            raise NotInImage("wrong block pattern")
        old = "a" + second.f + "a" + last.f + "cb"
        new = "c" + psi_inv(second.f + "a" + last.f + "A") + "b"
        return _splice(q, first.end, old, new)
    if cell == "(4)":
        kinds = [b.kind for b in pt.bl]
        if sorted(kinds) != [0, 0, 1]:
            raise NotInImage("expected open indices β⁻(0), β⁻(0), β⁻(1)")
        k1 = kinds.index(1)
        a1, a2, last = pt.block(k1 + 1), pt.block(k1 + 2), pt.block(k1)
        if a1.f or last.fo or a1.kind != 0 or a2.kind != 0:
            raise NotInImage("wrong block pattern")
        b00 = "a" + a2.f + "a"
        g = last.f
        old = b00 + g + "c"
        new = "c" + psi_inv(phi0_inv(b00)) + psi_inv(g)
        return _splice(q, a1.end, old, new)
    raise ValueError(f"unknown M1 cell {cell!r}")


# ---------------------------------------------------------------------------
# M0: multiplier α(0)


def _top_factors(f: str) -> Tuple[str, ...]:
    return factorize(f, Code.C).factors


def _m0_plan(w: str, kappa: int) -> Tuple[str, str]:
    pt = _Point(w)
    fs = [b.f for b in pt.bl]
    # (1): some block word lies in Q1
    q1 = [k for k, f in enumerate(fs) if member(f, Code.Q1)]
    if q1:
        best = min(order_key(fs[k]) for k in q1)
        q = w
        for k in q1:
            if order_key(fs[k]) == best:
                q = _splice(q, pt.start(k), fs[k], delta1(fs[k]))
        return "(1)", q
    # (β), (β,0): the last top-level β⁻β⁺ of some block
    beta = {}
    for k, f in enumerate(fs):
        facs = _top_factors(f)
        idx = [t for t, c in enumerate(facs) if c == "cC"]
        if idx:
            t = idx[-1]
            beta[k] = (sum(map(len, facs[:t])), "".join(facs[t + 1:]))
    with_tail = [k for k, (_, g) in beta.items() if g]
    if with_tail:
        (j,) = lex_least(w, [pt.block(k).end for k in with_tail])
        k = pt.index_of_end[j]
        off, g = beta[k]
        s = pt.start(k) + off
        return "(β)", _splice(w, s, "cC" + g, "c" + psi_inv(g) + "b")
    if beta:
        (j,) = lex_least(w, [pt.block(k).end for k in beta])
        k = pt.index_of_end[j]
        off, _ = beta[k]
        return "(β,0)", _splice(w, pt.start(k) + off, "cC", "cb")
    if kappa >= 2:
        cand = [pt.block(k).end for k, f in enumerate(fs) if f]
        (j,) = lex_least(w, cand)
        k = pt.index_of_end[j]
        f = pt.block(k).f
        old = "a" + f + "a"
        return "(0,2)", _splice(w, pt.block(k - 1).end, old, "c" + psi_inv(f) + "b")
    return _m0_kappa1(w, pt)


def _m0_kappa1(w: str, pt: _Point) -> Tuple[str, str]:
    i = pt.bl[0].end
    f = pt.bl[0].f  # window p_(i-n, i] = f β⁻(0), f ∈ C(0)*
    facs = _top_factors(f)
    c1, G = facs[0], "".join(facs[1:])
    F1 = c1[1:-1]
    if not F1:
        return "(0,1,l)", _from_window("cb" + G + "a", i)
    if G:
        return "(0,1,m)", _from_window("b" + F1 + "a" + G + "c", i)
    inner = _top_factors(F1)
    d, G2 = inner[0], "".join(inner[1:])
    if d[0] == "a" and len(d) > 2 and (in_c0_star(d[1:-1]) or G2):
        F = d[1:-1]
        return "(0,1,r)", _from_window("cb" + F + "a" + G2 + "aa", i)
    if d == "aA" and in_c0_star(G2):
        return "(0,1,r,1)", _from_window("bc" + psi_inv(G2) + "bac", i)
    if d == "aA":
        return "(0,1,r,β)", _from_window("acb" + G2 + "aa", i)
    if d[0] == "a":
        return "(0,1,r,β)", _from_window("baA" + d[1:-1] + "ac", i)
    return "(0,1,r,β)", _from_window("b" + d + G2 + "ac", i)


def _m0_reconstruct(q: str, cell: str) -> str:
    pt = _Point(q)
    n = pt.n
    if cell == "(1)":
        out = q
        hits = 0
        for k, blk in enumerate(pt.bl):
            prev = pt.block(k - 1)
            if len(pt.bl) > 1 and blk.kind == 1 and not blk.fo and prev.kind == 1:
                old = "c" + prev.fo + "b" + blk.f + "cb"
                out = _splice(out, pt.b1_start(k - 1), old, phi1_inv(old))
                hits += 1
        if not hits:
            raise NotInImage("no open B(1,1) word")
        return out
    ones = [k for k, b in enumerate(pt.bl) if b.kind == 1]
    if cell in ("(β)", "(β,0)", "(0,2)"):
        if len(ones) != 1:
            raise NotInImage("expected exactly one open β⁻(1)")
        k = ones[0]
        blk = pt.block(k)
        s = pt.b1_start(k)
        b = "c" + blk.fo + "b"
        if cell == "(β)":
            if not blk.fo:
                raise NotInImage("empty C°(1)* factor")
            return _splice(q, s, b, "cC" + psi(blk.fo))
        if cell == "(β,0)":
            if blk.fo:
                raise NotInImage("B(1) word is not β⁻β⁻(1)")
            return _splice(q, s, b, "cC")
        return _splice(q, s, b, "a" + psi(blk.fo) + "a")
    # κ = 1 cells: read the window at the designated index
    kinds = "".join(str(b.kind) for b in pt.bl)
    if cell == "(0,1,l)":
        k = _single(kinds, "1")
        i = pt.block(k + 1).end
        x = window(q, i)
        caps = parse(("cb", Star.C0, "a"), x)
        if caps is None:
            raise NotInImage("window is not β⁻β⁻(1)C(0)*β⁻(0)")
        return _from_window("aA" + caps[0] + "a", i)
    if cell == "(0,1,m)":
        k = _single(kinds, "1")
        i = (pt.block(k).end - 1) % n
        x = window(q, i)
        for F1, G in _match(("b", Star.C, "a", Star.C0, "c"), x):
            return _from_window("a" + F1 + "A" + G + "a", i)
        raise NotInImage("window is not β⁻(1)C*β⁻(0)C(0)*β⁻")
    if cell == "(0,1,r)":
        k = _single(kinds, "1")
        i = (pt.block(k).end - 2) % n
        x = window(q, i)
        for F, G2 in _match(("cb", Star.C, "a", Star.C, "aa"), x):
            return _from_window("aa" + F + "A" + G2 + "Aa", i)
        raise NotInImage("window does not match the (0,1,r) image")
    if cell == "(0,1,r,1)":
        i = _window_end_for(q, lambda x: parse(("bc", Star.CO1, "bac"), x))
        (o,) = parse(("bc", Star.CO1, "bac"), window(q, i))
        return _from_window("aaA" + psi(o) + "Aa", i)
    if cell == "(0,1,r,β)":
        for pat, build in (
            (("acb", Star.C, "aa"), lambda G2: "aaA" + G2 + "Aa"),
            (("baA", Star.C, "ac"), lambda F: "aa" + F + "AAa"),
            (("b", Star.C, "ac"), lambda x: "a" + x + "Aa"),
        ):
            try:
                i = _window_end_for(q, lambda x: parse(pat, x))
            except NotInImage:
                continue
            (cap,) = parse(pat, window(q, i))
            return _from_window(build(cap), i)
        raise NotInImage("window does not match a (0,1,r,β) image")
    raise ValueError(f"unknown M0 cell {cell!r}")


def _single(kinds: str, kind: str) -> int:
    if kinds.count(kind) != 1:
        raise NotInImage("wrong number of open indices")
    return kinds.index(kind)


def _match(pattern, x):
    from .codes import match
    return match(pattern, x)


def _window_end_for(q: str, pred) -> int:
    hits = [i for i in range(len(q)) if pred(window(q, i)) is not None]
    if not hits:
        raise NotInImage("no window matches")
    return _choose(hits)


# ---------------------------------------------------------------------------
# Public maps


def _plan(w: str, family: str) -> Tuple[str, str]:
    m = _check_domain(w, family)
    if family == "L1":
        return _l1_plan(w, m.kappa)
    if family == "L2":
        return _l2_plan(w)
    if family == "M0":
        return _m0_plan(w, m.kappa)
    return _m1_plan(w)


def cell_of(p: str, family: str) -> PartitionCell:
    """The cell of the partition of P_n°(μ⁻) that contains ``p``."""
    return PartitionCell(family, _plan(p, family)[0])


def eta(p: str, family: str) -> EtaResult:
    cell, q = _plan(p, family)
    return EtaResult(q, PartitionCell(family, cell), nu_counts(q, _negative_phase(q)))


def _negative_phase(q: str) -> int:
    from .core import reduce_word
    for i in range(len(q)):
        r = reduce_word(rotate(q, i))
        if r is not None and not r[0]:
            return i
    return 0


_RECONSTRUCTORS = {}


def _candidates(q: str, family: str, name: str) -> List[str]:
    """Every preimage the recipe yields, over all branches at ties."""
    global _choose
    recipe = _RECONSTRUCTORS[family]
    out, todo = [], [()]
    while todo:
        path = todo.pop()
        _choose = _Chooser(path)
        try:
            out.append(recipe(q, name))
        except (NotInDomain, ValueError, AssertionError, StopIteration, KeyError):
            pass
        finally:
            widths, _choose = _choose.widths, _Chooser()
        # branch on every tie point past the fixed prefix
        for depth in range(len(path), len(widths)):
            for alt in range(1, widths[depth]):
                todo.append(tuple(path) + (0,) * (depth - len(path)) + (alt,))
    return out


def reconstruct(q: str, family: str, cell) -> str:
    """The unique ``p`` in the given cell with ``eta(p).image == q``."""
    name = cell.cell if isinstance(cell, PartitionCell) else cell
    if isinstance(cell, PartitionCell) and cell.family != family:
        raise ValueError("cell belongs to another family")
    if name not in CELLS.get(family, ()):
        raise ValueError(f"unknown cell {name!r} for {family}")
    found = set()
    for p in _candidates(q, family, name):
        try:
            if _plan(p, family) == (name, q):
                found.add(p)
        except (NotInDomain, AssertionError):
            continue
    if not found:
        raise NotInImage(f"{q!r} is not in the image of {family}{name}")
    if len(found) > 1:
        raise NotInImage(f"{q!r} has {len(found)} preimages in {family}{name}")
    return found.pop()


_RECONSTRUCTORS.update(L1=_l1_reconstruct, L2=_l2_reconstruct,
                       M0=_m0_reconstruct, M1=_m1_reconstruct)


# ---------------------------------------------------------------------------
# Exhaustive verification

CHECKS = ("coverage", "image", "round_trip", "shift", "injective",
          "avoid_alpha0", "count", "annotation")

# claimed (ν0, ν1) of the image per cell, as a function of (κ, ν0(μ), ν1(μ))
_Annot = Callable[[int, int, int], Tuple[int, int]]
ANNOTATION: Dict[str, Dict[str, _Annot]] = {
    "L1": {
        "[1]": lambda k, a, b: (1, 3),
        "[0]": lambda k, a, b: (3, 1),
        "[β]": lambda k, a, b: (1, 0),
        "(1)": lambda k, a, b: (k, k - 1),
        "(0,1)": lambda k, a, b: (k + 2, k - 1),
        "(1,0)": lambda k, a, b: (k + 2, k - 1),
    },
    "L2": {
        "(0,0)": lambda k, a, b: (k * a - 2, k * b),
        "(1,1)": lambda k, a, b: (k * a + 2, k * b - 2),
        "(0,1,0)": lambda k, a, b: (k * a - 2, k * b - 1),
        "(•,1,1)": lambda k, a, b: (k * a + 2, k * b - 1),
        "(1,1,•)": lambda k, a, b: (k * a, k * b - 1),
        "(0,1)": lambda k, a, b: (k * a + 2, k * b - 1),
        "(1,0)": lambda k, a, b: (k * a, k * b - 1),
    },
    "M0": {
        "(1)": lambda k, a, b: (k, 2),
        "(β)": lambda k, a, b: (k, 2),
        "(β,0)": lambda k, a, b: (k, 2),
        "(0,2)": lambda k, a, b: (k - 2, 1),
        "(0,1,l)": lambda k, a, b: (1, 1),
        "(0,1,m)": lambda k, a, b: (1, 1),
        "(0,1,r)": lambda k, a, b: (3, 1),
        "(0,1,r,β)": lambda k, a, b: (3, 1),
        "(0,1,r,1)": lambda k, a, b: (1, 2),
    },
}
_WITNESSES = 5


@dataclass
class CheckResult:
    name: str
    failures: int = 0
    witnesses: List[dict] = field(default_factory=list)

    def fail(self, **witness):
        self.failures += 1
        if len(self.witnesses) < _WITNESSES:
            self.witnesses.append(witness)

    @property
    def ok(self) -> bool:
        return self.failures == 0


@dataclass
class VerifyReport:
    family: str
    n: int
    domain: int = 0
    cells: Dict[str, int] = field(default_factory=dict)
    checks: Dict[str, CheckResult] = field(default_factory=dict)
    # per cell: Counter of image ν minus κ·ν(μ)
    nu_shift: Dict[str, Dict[str, int]] = field(default_factory=dict)
    count_lhs: Dict[str, int] = field(default_factory=dict)
    count_rhs: int = 0

    def ok_for(self, names: Iterable[str]) -> bool:
        return all(self.checks[c].ok for c in names if c in self.checks)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks.values())

    def lines(self) -> List[str]:
        """Line-delimited JSON: one summary, one line per check, one per witness."""
        out = [json.dumps({
            "type": "summary", "family": self.family, "n": self.n,
            "domain": self.domain, "ok": self.ok, "cells": self.cells,
            "count": {"lhs": self.count_lhs, "rhs": self.count_rhs},
            "nu_shift": self.nu_shift,
        }, ensure_ascii=False, sort_keys=True)]
        for c in self.checks.values():
            out.append(json.dumps({"type": "check", "family": self.family, "n": self.n,
                                   "check": c.name, "ok": c.ok, "failures": c.failures},
                                  ensure_ascii=False))
            for w in c.witnesses:
                out.append(json.dumps({"type": "witness", "family": self.family,
                                       "n": self.n, "check": c.name, **w},
                                      ensure_ascii=False, sort_keys=True))
        return out


def _orbit_rows(args) -> List[tuple]:
    """Plan every rotation of one orbit; rows are (p, necklace, κ, cell, q, err)."""
    rep, family = args
    m = classify(rep)
    rows = []
    for k in range(len(rep)):
        p = rotate(rep, k)
        try:
            cell, q = _plan(p, family)
            rows.append((p, m.necklace, m.kappa, cell, q, None))
        except Exception as exc:  # reported as a coverage failure
            rows.append((p, m.necklace, m.kappa, None, None, repr(exc)))
    return rows


def _round_trip(args) -> Optional[str]:
    p, q, family, cell = args
    try:
        r = reconstruct(q, family, cell)
    except NotInImage as exc:
        return f"NotInImage: {exc}"
    return None if r == p else f"reconstructed {r}"


def _domain_orbits(family: str, n: int) -> List[str]:
    from .periodic import enumerate_orbits
    out = []
    for rep in enumerate_orbits(n):
        m = classify(rep)
        if m.sign is Sign.NEGATIVE and source_ok(family, m.necklace):
            out.append(rep)
    return out


def domain_points(family: str, n: int) -> List[str]:
    """Every point of smallest period ``n`` in the domain of the family."""
    return [rotate(o, k) for o in _domain_orbits(family, n) for k in range(n)]


def verify_family(family: str, n: int, workers: int = 1) -> VerifyReport:
    """Exhaustively check η_n of one family on every point of its domain."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if n < THRESHOLD[family]:
        raise NotInDomain(f"{family} is defined for periods >= {THRESHOLD[family]}, got {n}")
    rep = VerifyReport(family, n)
    names = [c for c in CHECKS if (c != "avoid_alpha0" or family == "L1")
             and (c != "annotation" or family in ANNOTATION)]
    rep.checks = {c: CheckResult(c) for c in names}
    chk = rep.checks

    orbits = _domain_orbits(family, n)
    jobs = [(o, family) for o in orbits]
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        mapper = pool.map if pool else map
        rows = [r for chunk in mapper(_orbit_rows, jobs, **({"chunksize": 16} if pool else {}))
                for r in chunk]
        rep.domain = len(rows)
        planned = {p: (nk, kappa, cell, q) for p, nk, kappa, cell, q, err in rows if err is None}
        for p, nk, kappa, cell, q, err in rows:
            if err is not None:
                chk["coverage"].fail(point=p, error=err)

        cells: Counter = Counter()
        shifts: Dict[str, Counter] = defaultdict(Counter)
        images: Dict[Tuple[str, str], List[str]] = defaultdict(list)
        for p, (nk, kappa, cell, q) in planned.items():
            cells[cell] += 1
            images[(nk, q)].append(p)
            if len(q) != n or not is_admissible_cycle(q) or not is_primitive(q):
                chk["image"].fail(point=p, cell=cell, image=q, reason="not a point of smallest period n")
                continue
            mq = classify(q)
            if mq.sign is not Sign.NEGATIVE or mq.necklace == nk:
                chk["image"].fail(point=p, cell=cell, image=q, reason=f"image multiplier {mq}")
            else:
                nu = nu_counts(q, _negative_phase(q))
                base = (kappa * nk.count("0"), kappa * nk.count("1"))
                shifts[cell][f"{nu[0] - base[0]:+d},{nu[1] - base[1]:+d}"] += 1
                claim = ANNOTATION.get(family, {}).get(cell)
                if claim and claim(kappa, nk.count("0"), nk.count("1")) != nu:
                    chk["annotation"].fail(point=p, cell=cell, image=q, nu=list(nu),
                                           claimed=list(claim(kappa, nk.count("0"), nk.count("1"))))
            if family == "L1" and mq.sign is Sign.NEGATIVE and mq.necklace == "0":
                chk["avoid_alpha0"].fail(point=p, cell=cell, image=q)
            nxt = planned.get(rotate(p, 1))
            if nxt is None or nxt[2] != cell or nxt[3] != rotate(q, 1):
                chk["shift"].fail(point=p, cell=cell, image=q,
                                  rotated_image=None if nxt is None else nxt[3])
        for (nk, q), ps in images.items():
            if len(ps) > 1:
                chk["injective"].fail(image=q, preimages=sorted(ps),
                                      cells=[planned[x][2] for x in sorted(ps)])

        trips = [(p, v[3], family, v[2]) for p, v in planned.items()]
        for (p, q, _, cell), bad in zip(trips, mapper(_round_trip, trips,
                                                       **({"chunksize": 64} if pool else {}))):
            if bad:
                chk["round_trip"].fail(point=p, cell=cell, image=q, error=bad)
    finally:
        if pool:
            pool.shutdown()

    rep.cells = {c: cells[c] for c in CELLS[family] if cells[c]}
    rep.nu_shift = {c: dict(sorted(v.items())) for c, v in sorted(shifts.items())}

    table = orbit_table(n)
    total = sum(table.count(Sign.NEGATIVE, nk) for nk in table.necklaces(Sign.NEGATIVE))
    sources = sorted({nk for nk, *_ in planned.values()})
    rep.count_lhs = {nk: table.count(Sign.NEGATIVE, nk) for nk in sources}
    rep.count_rhs = total
    for nk in sources:
        lhs = table.count(Sign.NEGATIVE, nk)
        if lhs > total - lhs:
            chk["count"].fail(multiplier=nk, lhs=lhs, rhs=total - lhs)
    return rep
