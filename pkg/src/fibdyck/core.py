"""Alphabet, presentation graph and Dyck inverse monoid for the Fibonacci-Dyck shift.

Words are plain ``str`` objects over the compact alphabet ``"abcABC"``::

    a = beta-(0)   b = beta-(1)   c = beta-
    A = beta+(0)   B = beta+(1)   C = beta+

Lowercase letters are the negative symbols, uppercase their time-reversal
partners.  Comparisons between words must go through :func:`order_key`,
since ASCII order puts uppercase first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

NEG0, NEG1, NEG = "a", "b", "c"
POS0, POS1, POS = "A", "B", "C"

# Global symbol order: beta-(0) < beta-(1) < beta- < beta+(0) < beta+(1) < beta+.
ALPHABET = "abcABC"

SOURCE = {"a": 0, "c": 0, "b": 1, "A": 0, "B": 0, "C": 1}
TARGET = {"a": 0, "c": 1, "b": 0, "A": 0, "B": 1, "C": 0}

# (kind, index): kind -1 for alpha-, +1 for alpha+, 0 for the identity label.
LABEL = {"a": (-1, 0), "b": (-1, 1), "A": (1, 0), "B": (1, 1), "c": (0, 0), "C": (0, 0)}

TOKENS = {"m0": "a", "m1": "b", "m": "c", "p0": "A", "p1": "B", "p": "C"}
TOKEN_OF = {v: k for k, v in TOKENS.items()}

PRETTY = {
    "a": "β⁻(0)", "b": "β⁻(1)", "c": "β⁻",
    "A": "β⁺(0)", "B": "β⁺(1)", "C": "β⁺",
}

_ORDER = str.maketrans(ALPHABET, "012345")
_CHI = str.maketrans("abcABC", "ABCabc")


def order_key(w: str) -> str:
    """Sort key realising the global symbol order on words."""
    return w.translate(_ORDER)


class NotAWord(ValueError):
    pass


def parse_word(text: str) -> str:
    """Accept either the compact alphabet or space-separated ASCII tokens."""
    text = text.strip()
    if not text:
        return ""
    parts = text.split()
    if all(t in TOKENS for t in parts):
        return "".join(TOKENS[t] for t in parts)
    compact = "".join(parts)
    bad = set(compact) - set(ALPHABET)
    if bad:
        raise NotAWord(f"unknown symbols {sorted(bad)!r} in {text!r}")
    return compact


def format_word(w: str, style: str = "compact") -> str:
    if style == "compact":
        return w
    if style == "tokens":
        return " ".join(TOKEN_OF[s] for s in w)
    if style == "pretty":
        return "".join(PRETTY[s] for s in w) or "ε"
    raise ValueError(f"unknown style {style!r}")


# ---------------------------------------------------------------------------
# Dyck inverse monoid D_2


class _Zero:
    """The absorbing zero of D_2."""

    _instance: Optional["_Zero"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    is_zero = True
    is_one = False

    def __mul__(self, other):
        return self

    def __rmul__(self, other):
        return self

    def __repr__(self):
        return "ZERO"

    def __reduce__(self):
        return (_Zero, ())


ZERO = _Zero()


@dataclass(frozen=True)
class Element:
    """Nonzero element of D_2 in normal form alpha+(plus) alpha-(minus).

    ``plus`` and ``minus`` are strings over ``"01"`` listing generator
    indices left to right.
    """

    plus: str = ""
    minus: str = ""

    is_zero = False

    @property
    def is_one(self) -> bool:
        return not self.plus and not self.minus

    @property
    def is_negative(self) -> bool:
        return not self.plus and bool(self.minus)

    @property
    def is_positive(self) -> bool:
        return bool(self.plus) and not self.minus

    def __mul__(self, other):
        return multiply(self, other)

    def involution(self) -> "Element":
        """Image under alpha-(n) <-> alpha+(n) combined with order reversal."""
        return Element(plus=self.minus[::-1], minus=self.plus[::-1])

    def __str__(self):
        if self.is_one:
            return "1"
        return "".join(f"α⁺({i})" for i in self.plus) + "".join(f"α⁻({i})" for i in self.minus)


ONE = Element()


def multiply(a, b):
    """Reduced product in D_2 (zero absorbing)."""
    if a is ZERO or b is ZERO:
        return ZERO
    m, p = a.minus, b.plus
    k = min(len(m), len(p))
    # a.minus closes against b.plus innermost-first
    if m[len(m) - k:][::-1] != p[:k]:
        return ZERO
    if len(m) >= len(p):
        return Element(a.plus, m[: len(m) - k] + b.minus)
    return Element(a.plus + p[k:], b.minus)


def generator(kind: int, index: int) -> Element:
    if kind < 0:
        return Element(minus=str(index))
    if kind > 0:
        return Element(plus=str(index))
    return ONE


def reduce_word(w: Iterable[str]) -> Optional[Tuple[str, str]]:
    """Fast label of a word as ``(plus, minus)``, or ``None`` for zero."""
    plus = []
    stack = []
    for s in w:
        kind, idx = LABEL[s]
        if kind < 0:
            stack.append(idx)
        elif kind > 0:
            if stack:
                if stack.pop() != idx:
                    return None
            else:
                plus.append(idx)
    return "".join(map(str, plus)), "".join(map(str, stack))


def label_word(w: str):
    """The label λ(w) as an :class:`Element` or ``ZERO``."""
    r = reduce_word(w)
    if r is None:
        return ZERO
    return Element(*r)


def is_path(w: str, cyclic: bool = False) -> bool:
    for x, y in zip(w, w[1:]):
        if TARGET[x] != SOURCE[y]:
            return False
    if cyclic and w and TARGET[w[-1]] != SOURCE[w[0]]:
        return False
    return True


def is_admissible(w: str) -> bool:
    return is_path(w) and reduce_word(w) is not None


def is_admissible_cycle(w: str) -> bool:
    """Whether the periodic point with period word ``w`` lies in the shift.

    Every window of w^∞ is a factor of some power of w, and a nonzero
    square forces every power to be nonzero, so two periods suffice.
    """
    if not w:
        raise ValueError("cycle must be nonempty")
    return is_path(w, cyclic=True) and reduce_word(w + w) is not None


def chi(w: str) -> str:
    return w.translate(_CHI)


def time_reverse(w: str) -> str:
    """Reverse ``w`` and swap every symbol with its partner."""
    return w[::-1].translate(_CHI)


def rotate(w: str, k: int) -> str:
    if not w:
        return w
    k %= len(w)
    return w[k:] + w[:k]
