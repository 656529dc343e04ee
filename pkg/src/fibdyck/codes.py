"""Circular codes C(0), C(1), C°(1), C, the derived word classes, and the
bijections between them.

Membership is decided by a small backtracking matcher over patterns made of
literal words and *star atoms* (``C*``, ``C°(1)*``, ``C(0)*``, ``{β⁻β⁺}*``).
Star atoms are recognised by a depth/vertex scan, since the label conditions
defining the codes are context-free.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .core import LABEL, SOURCE, TARGET


class NotInDomain(ValueError):
    """A map was applied outside the set it is defined on."""


class NotInClassStar(ValueError):
    """A word has no factorization over the requested code."""


class Star(enum.Enum):
    C = "C*"
    CO1 = "C°(1)*"
    C0 = "C(0)*"
    BB = "{β⁻β⁺}*"


class Code(enum.Enum):
    C0 = "C(0)"
    C1 = "C(1)"
    Co1 = "C°(1)"
    C = "C"
    B1 = "B(1)"
    B00 = "B(0,0)"
    B11 = "B(1,1)"
    Q0 = "Q0"
    Q1 = "Q1"
    D11 = "D(1,1)"
    D01 = "D(0,1)"
    D10 = "D(1,0)"
    C0orBB = "C(0)∪{β⁻β⁺}"


Atom = Union[str, Star]


def star_ends(w: str, i: int, star: Star) -> Iterator[int]:
    """Yield every ``j >= i`` with ``w[i:j]`` in the given star class."""
    yield i
    if star is Star.BB:
        j = i
        while w.startswith("cC", j):
            j += 2
            yield j
        return
    home = 1 if star is Star.CO1 else 0
    v = home
    stack: List[int] = []
    for j in range(i, len(w)):
        s = w[j]
        if SOURCE[s] != v:
            return
        if not stack:
            # a new codeword starts here
            if star is Star.CO1 and s != "b":
                return
            if star is Star.C0 and s != "a":
                return
        kind, idx = LABEL[s]
        if kind < 0:
            stack.append(idx)
        elif kind > 0:
            if not stack or stack.pop() != idx:
                return
        v = TARGET[s]
        if not stack and v == home:
            yield j + 1


def match(pattern: Sequence[Atom], w: str) -> Iterator[Tuple[str, ...]]:
    """All parses of ``w`` against ``pattern``; yields the star captures."""

    def go(k: int, i: int, caps: Tuple[str, ...]):
        if k == len(pattern):
            if i == len(w):
                yield caps
            return
        atom = pattern[k]
        if isinstance(atom, str):
            if w.startswith(atom, i):
                yield from go(k + 1, i + len(atom), caps)
            return
        for j in star_ends(w, i, atom):
            yield from go(k + 1, j, caps + (w[i:j],))

    yield from go(0, 0, ())


def parse(pattern: Sequence[Atom], w: str) -> Optional[Tuple[str, ...]]:
    return next(match(pattern, w), None)


def in_star(w: str, star: Star) -> bool:
    return len(w) in set(star_ends(w, 0, star))


def in_c_star(w: str) -> bool:
    return in_star(w, Star.C)


def in_co1_star(w: str) -> bool:
    return in_star(w, Star.CO1)


def in_c0_star(w: str) -> bool:
    return in_star(w, Star.C0)


# ---------------------------------------------------------------------------
# Factorization


@dataclass(frozen=True)
class Factorization:
    code: Code
    factors: Tuple[str, ...]
    starts: Tuple[int, ...]


_HOME = {Code.C: 0, Code.C0: 0, Code.C0orBB: 0, Code.Co1: 1, Code.C1: 0}


def factorize(w: str, code: Code = Code.C) -> Factorization:
    """Unique factorization of ``w`` over ``code``.

    ``code`` may be ``C``, ``C0``, ``C1``, ``Co1`` or ``C0orBB``; the cut
    points are the returns to depth zero at the home vertex.
    """
    if code not in _HOME:
        raise ValueError(f"no factorization for {code}")
    star = Star.CO1 if code is Code.Co1 else Star.C
    cuts = list(star_ends(w, 0, star))
    if cuts[-1] != len(w):
        raise NotInClassStar(f"{w!r} is not in {code.value}*")
    factors = []
    starts = []
    for lo, hi in zip(cuts, cuts[1:]):
        f = w[lo:hi]
        if not member(f, code):
            raise NotInClassStar(f"factor {f!r} of {w!r} is not in {code.value}")
        factors.append(f)
        starts.append(lo)
    return Factorization(code, tuple(factors), tuple(starts))


# ---------------------------------------------------------------------------
# Membership

_PATTERNS: Dict[Code, Tuple[Atom, ...]] = {
    Code.C0: ("a", Star.C, "A"),
    Code.Co1: ("b", Star.C, "B"),
    Code.B1: ("c", Star.CO1, "b"),
    Code.B00: ("a", Star.C, "a"),
    Code.B11: ("c", Star.CO1, "b", Star.C, "cb"),
    Code.D11: ("c", Star.CO1, "b", Star.C, "c", Star.CO1, "b"),
    Code.D01: ("a", Star.C, "c", Star.CO1, "b"),
    Code.D10: ("c", Star.CO1, "b", Star.C, "a"),
}


def _c_factors(w: str) -> Optional[Tuple[str, ...]]:
    try:
        return factorize(w, Code.C).factors
    except NotInClassStar:
        return None


def member(w: str, code: Code) -> bool:
    if code is Code.C1:
        caps = parse(("c", Star.CO1, "C"), w)
        return caps is not None and caps[0] != ""
    if code is Code.C:
        return w == "cC" or member(w, Code.C0) or member(w, Code.C1)
    if code is Code.C0orBB:
        return w == "cC" or member(w, Code.C0)
    if code in (Code.Q0, Code.Q1):
        fs = _c_factors(w)
        if fs is None:
            return False
        has_c1 = any(f[0] == "c" and f != "cC" for f in fs)
        has_c0 = any(f[0] == "a" for f in fs)
        if code is Code.Q1:
            return has_c1
        return has_c0 and not has_c1
    if code in (Code.D11, Code.D01, Code.D10):
        return lambda_len_or_none(w, code) is not None
    return parse(_PATTERNS[code], w) is not None


def lambda_len_or_none(w: str, code: Code) -> Optional[int]:
    if code is Code.B1:
        caps = parse(_PATTERNS[Code.B1], w)
        return None if caps is None else len(caps[0])
    if code is Code.B00:
        caps = parse(_PATTERNS[Code.B00], w)
        return None if caps is None else len(caps[0])
    if code is Code.D11:
        for fm, f, fp in match(_PATTERNS[Code.D11], w):
            if len(f) >= len(fm) and len(f) >= len(fp):
                return len(f)
        return None
    if code is Code.D01:
        for f, fo in match(_PATTERNS[Code.D01], w):
            if len(f) >= len(fo):
                return len(f)
        return None
    if code is Code.D10:
        for fo, f in match(_PATTERNS[Code.D10], w):
            if len(f) >= len(fo):
                return len(f)
        return None
    raise ValueError(f"Λ is not defined on {code.value}")


def lambda_len(w: str, code: Code) -> int:
    """Length of the designated interior factor of a B- or D-class word."""
    v = lambda_len_or_none(w, code)
    if v is None:
        raise NotInDomain(f"{w!r} is not in {code.value}")
    return v


# ---------------------------------------------------------------------------
# Bijections


def _require(w: str, code: Code):
    if not member(w, code):
        raise NotInDomain(f"{w!r} is not in {code.value}")


def psi0(w: str) -> str:
    """C°(1) -> C(0): b f B  |->  a f A."""
    _require(w, Code.Co1)
    return "a" + w[1:-1] + "A"


def psi0_inv(w: str) -> str:
    _require(w, Code.C0)
    return "b" + w[1:-1] + "B"


def psi(w: str) -> str:
    """C°(1)* -> C(0)*, codeword by codeword."""
    if not in_co1_star(w):
        raise NotInDomain(f"{w!r} is not in C°(1)*")
    return "".join(psi0(f) for f in factorize(w, Code.Co1).factors)


def psi_inv(w: str) -> str:
    if not in_c0_star(w):
        raise NotInDomain(f"{w!r} is not in C(0)*")
    return "".join(psi0_inv(f) for f in factorize(w, Code.C0).factors)


def xi_map(w: str) -> str:
    """B(1) -> C(0): c f° b  |->  a Ψ(f°) A."""
    caps = parse(_PATTERNS[Code.B1], w)
    if caps is None:
        raise NotInDomain(f"{w!r} is not in B(1)")
    return "a" + psi(caps[0]) + "A"


def xi_map_inv(w: str) -> str:
    _require(w, Code.C0)
    inner = w[1:-1]
    if not in_c0_star(inner):
        raise NotInDomain(f"{w!r} is not in the image of Ξ")
    return "c" + psi_inv(inner) + "b"


def phi0(w: str) -> str:
    """C(0) -> B(0,0): final β⁺(0) becomes β⁻(0)."""
    _require(w, Code.C0)
    return w[:-1] + "a"


def phi0_inv(w: str) -> str:
    _require(w, Code.B00)
    return w[:-1] + "A"


def phi1(w: str) -> str:
    """C(1) -> B(1,1): final β⁺(1)β⁺ becomes β⁻β⁻(1)."""
    _require(w, Code.C1)
    return w[:-2] + "cb"


def phi1_inv(w: str) -> str:
    _require(w, Code.B11)
    return w[:-2] + "BC"


def _delta(f: str, code: Code, target: str, phi) -> str:
    if not member(f, code):
        raise NotInDomain(f"{f!r} is not in {code.value}")
    fac = factorize(f, Code.C)
    k = max(i for i, c in enumerate(fac.factors) if c[0] == target and c != "cC")
    start = fac.starts[k]
    c = fac.factors[k]
    return f[:start] + phi(c) + f[start + len(c):]


def delta0(f: str) -> str:
    """Q0 -> L: apply Φ0 to the last C(0) factor."""
    return _delta(f, Code.Q0, "a", phi0)


def delta1(f: str) -> str:
    """Q1 -> L: apply Φ1 to the last C(1) factor."""
    return _delta(f, Code.Q1, "c", phi1)


def delta0_inv(g: str) -> str:
    """Recover f from Δ0(f) by locating the unique B(0,0) factor."""
    # Δ0(f) = u Φ0(c) v with u ∈ (C(0)∪{β⁻β⁺})*, v ∈ {β⁻β⁺}*
    for u, mid, v in match((Star.C, "a", Star.C, "a", Star.BB), g):
        f = u + "a" + mid + "A" + v
        if member(f, Code.Q0) and delta0(f) == g:
            return f
    raise NotInDomain(f"{g!r} is not in the image of Δ0")


def delta1_inv(g: str) -> str:
    """Recover f from Δ1(f) by locating the unique B(1,1) factor."""
    for u, fo, mid, v in match((Star.C, "c", Star.CO1, "b", Star.C, "cb", Star.C), g):
        f = u + "c" + fo + "b" + mid + "BC" + v
        if member(f, Code.Q1) and delta1(f) == g:
            return f
    raise NotInDomain(f"{g!r} is not in the image of Δ1")
