"""Multi-index arithmetic on the integer lattice Z^n.

Multi-indices are plain tuples of Python ints, so every operation is exact
and hashable without wrapping. A :class:`Box` is an inclusive rectangular
window of the lattice; its points are enumerated in lexicographic order
(last coordinate varies fastest).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

from . import mutants

MultiIndex = Tuple[int, ...]

__all__ = [
    "MultiIndex",
    "Box",
    "divides",
    "unit",
    "scale",
    "add",
    "sub",
    "negate",
    "zero",
    "enumerate_box",
    "cube",
    "format_index",
    "parse_index",
    "parse_box",
    "format_box",
]


def divides(k: int, m: MultiIndex) -> bool:
    """True iff ``k`` divides every coordinate of ``m``."""
    return all(x % k == 0 for x in m)


def unit(j: int, n: int) -> MultiIndex:
    """The unit multi-index with a 1 in coordinate ``j`` (1-based)."""
    if not 1 <= j <= n:
        raise ValueError(f"coordinate {j} out of range 1..{n}")
    if mutants.active() == "epsilon-off-by-one":
        # 1-based j compared against 0-based slots
        return tuple(1 if b == j else 0 for b in range(n))
    return tuple(1 if b == j - 1 else 0 for b in range(n))


def zero(n: int) -> MultiIndex:
    return (0,) * n


def scale(c: int, m: MultiIndex) -> MultiIndex:
    return tuple(c * x for x in m)


def add(m: MultiIndex, p: MultiIndex) -> MultiIndex:
    if len(m) != len(p):
        raise ValueError(f"dimension mismatch: {len(m)} vs {len(p)}")
    return tuple(x + y for x, y in zip(m, p))


def sub(m: MultiIndex, p: MultiIndex) -> MultiIndex:
    if len(m) != len(p):
        raise ValueError(f"dimension mismatch: {len(m)} vs {len(p)}")
    return tuple(x - y for x, y in zip(m, p))


def negate(m: MultiIndex) -> MultiIndex:
    return tuple(-x for x in m)


@dataclass(frozen=True)
class Box:
    """Inclusive lattice box ``lower <= m <= upper`` (componentwise)."""

    lower: MultiIndex
    upper: MultiIndex

    def __post_init__(self) -> None:
        lower, upper = tuple(self.lower), tuple(self.upper)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if len(lower) != len(upper) or not lower:
            raise ValueError("box bounds must have equal, positive length")
        for lo, hi in zip(lower, upper):
            if lo > hi:
                raise ValueError(f"empty box: {format_index(lower)}..{format_index(upper)}")

    @property
    def dim(self) -> int:
        return len(self.lower)

    def __len__(self) -> int:
        size = 1
        for lo, hi in zip(self.lower, self.upper):
            size *= hi - lo + 1
        return size

    def __iter__(self) -> Iterator[MultiIndex]:
        return enumerate_box(self)

    def __contains__(self, m: object) -> bool:
        if not isinstance(m, tuple) or len(m) != self.dim:
            return False
        return all(lo <= x <= hi for lo, x, hi in zip(self.lower, m, self.upper))

    def padded(self, pad: int) -> "Box":
        return Box(tuple(x - pad for x in self.lower), tuple(x + pad for x in self.upper))

    def hull(self, other: "Box") -> "Box":
        return Box(
            tuple(map(min, self.lower, other.lower)),
            tuple(map(max, self.upper, other.upper)),
        )

    def __str__(self) -> str:
        return format_box(self)


def enumerate_box(b: Box) -> Iterator[MultiIndex]:
    """Lattice points of ``b`` in lexicographic order."""
    ranges = [range(lo, hi + 1) for lo, hi in zip(b.lower, b.upper)]
    return itertools.product(*ranges)


def cube(lo: int, hi: int, n: int) -> Box:
    """The box ``[lo, hi]^n``."""
    return Box((lo,) * n, (hi,) * n)


def format_index(m: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in m) + ")"


_INDEX_RE = re.compile(r"^\(\s*([+-]?\d+(?:\s*,\s*[+-]?\d+)*)\s*\)$")


def parse_index(text: str) -> MultiIndex:
    """Parse ``"(−2,0,3)"``-style text; accepts ASCII and Unicode minus."""
    cleaned = text.strip().replace("−", "-")
    match = _INDEX_RE.match(cleaned)
    if not match:
        raise ValueError(f"malformed multi-index: {text!r}")
    return tuple(int(part) for part in match.group(1).split(","))


def format_box(b: Box) -> str:
    return f"{format_index(b.lower)}..{format_index(b.upper)}"


def parse_box(text: str) -> Box:
    """Parse ``"(-2,-2)..(2,2)"`` into a :class:`Box`."""
    if ".." not in text:
        raise ValueError(f"malformed box (expected 'LOWER..UPPER'): {text!r}")
    lower, upper = text.split("..", 1)
    return Box(parse_index(lower), parse_index(upper))
