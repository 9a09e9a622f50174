"""Laurent polynomial symbols and finitely supported Fourier vectors on T^n.

Both are sparse maps ``MultiIndex -> Scalar`` kept in canonical form: no
stored coefficient is zero, so the zero element is the empty map and equality
is plain dict equality.

Text format (one term per line, ``#`` comments and blank lines ignored)::

    (1,0) : 2 0
    (0,-1) : -1/2 3/4
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

import numpy as np

from . import mutants
from .lattice import MultiIndex, format_index, parse_index
from .scalars import ONE, ZERO, Scalar, as_scalar, format_rational, parse_rational

__all__ = [
    "SymbolParseError",
    "LaurentSymbol",
    "FourierVector",
    "monomial",
    "constant",
    "basis",
    "sym_add",
    "sym_mul",
    "sym_equal",
    "conjugate",
    "substitute_neg_k",
    "slant_transform",
    "l2_norm_sq",
    "sup_norm_estimate",
    "parse_terms",
    "format_terms",
]


class SymbolParseError(ValueError):
    """Malformed symbol or vector text; ``line`` is 1-based."""

    def __init__(self, message: str, line: Optional[int] = None, source: str = "<text>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


class _Sparse:
    """Shared canonical sparse map. Treat instances as immutable."""

    __slots__ = ("dim", "_c")

    def __init__(self, dim: int, coeffs: Optional[Mapping[MultiIndex, object]] = None):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        c: Dict[MultiIndex, Scalar] = {}
        for key, value in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != dim:
                raise ValueError(f"index {format_index(key)} has length {len(key)}, expected {dim}")
            s = as_scalar(value)
            if s:
                c[key] = s
        self.dim = dim
        self._c = c

    @classmethod
    def _wrap(cls, dim: int, c: Dict[MultiIndex, Scalar]):
        """Adopt an already-canonical dict without copying."""
        obj = cls.__new__(cls)
        obj.dim = dim
        obj._c = c
        return obj

    @property
    def coeffs(self) -> Mapping[MultiIndex, Scalar]:
        return self._c

    def __getitem__(self, m: MultiIndex) -> Scalar:
        return self._c.get(m if type(m) is tuple else tuple(m), ZERO)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(sorted(self._c))

    def items(self) -> Iterator[Tuple[MultiIndex, Scalar]]:
        for key in sorted(self._c):
            yield key, self._c[key]

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def support(self) -> list:
        return sorted(self._c)

    def radius(self) -> int:
        """Largest ``|r_j|`` over the support (0 for the zero element)."""
        return max((abs(x) for key in self._c for x in key), default=0)

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.dim == other.dim and self._c == other._c

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.dim, frozenset(self._c.items())))

    def _check(self, other: "_Sparse") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._check(other)
        c = dict(self._c)
        for key, value in other._c.items():
            s = c.get(key)
            s = value if s is None else s + value
            if s:
                c[key] = s
            else:
                c.pop(key, None)
        return type(self)._wrap(self.dim, c)

    def __neg__(self):
        return type(self)._wrap(self.dim, {key: -v for key, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, factor: object):
        f = as_scalar(factor)
        if not f:
            return type(self)._wrap(self.dim, {})
        return type(self)._wrap(self.dim, {key: f * v for key, v in self._c.items()})

    def norm_sq(self):
        """Exact squared l2 norm."""
        return sum((v.abs_sq() for v in self._c.values()), 0)

    def to_text(self) -> str:
        return format_terms(self)

    def __repr__(self) -> str:
        inner = ", ".join(f"{format_index(k)}: {v.format()}" for k, v in self.items())
        return f"{type(self).__name__}(dim={self.dim}, {{{inner}}})"


class LaurentSymbol(_Sparse):
    """Finitely supported symbol ``phi(z) = sum a_r z^r`` on T^n."""

    __slots__ = ()

    def __mul__(self, other: "LaurentSymbol") -> "LaurentSymbol":
        if isinstance(other, LaurentSymbol):
            return sym_mul(self, other)
        return self.scaled(other)

    def __rmul__(self, other: object) -> "LaurentSymbol":
        return self.scaled(other)

    def is_constant(self) -> bool:
        return all(not any(key) for key in self._c)

    @classmethod
    def zero(cls, dim: int) -> "LaurentSymbol":
        return cls._wrap(dim, {})

    @classmethod
    def from_text(cls, text: str, dim: Optional[int] = None, source: str = "<text>") -> "LaurentSymbol":
        d, c = parse_terms(text, dim, source)
        return cls(d, c)


class FourierVector(_Sparse):
    """Finitely supported element ``sum u_m e_m`` of L^2(T^n)."""

    __slots__ = ()

    @classmethod
    def zero(cls, dim: int) -> "FourierVector":
        return cls._wrap(dim, {})

    @classmethod
    def from_text(cls, text: str, dim: Optional[int] = None, source: str = "<text>") -> "FourierVector":
        d, c = parse_terms(text, dim, source)
        return cls(d, c)

    def inner(self, other: "FourierVector") -> Scalar:
        """``<self, other>``, conjugate-linear in ``other``."""
        self._check(other)
        total = Scalar(0)
        for key, value in self._c.items():
            w = other._c.get(key)
            if w is not None:
                total = total + value * w.conjugate()
        return total


def monomial(r: Iterable[int], coeff: object = 1) -> LaurentSymbol:
    r = tuple(r)
    return LaurentSymbol(len(r), {r: coeff})


def constant(c: object, dim: int) -> LaurentSymbol:
    return LaurentSymbol(dim, {(0,) * dim: c})


def basis(m: Iterable[int]) -> FourierVector:
    """The basis vector ``e_m``."""
    m = tuple(m)
    return FourierVector._wrap(len(m), {m: ONE})


def sym_add(phi: LaurentSymbol, psi: LaurentSymbol) -> LaurentSymbol:
    return phi + psi


def convolve(a: Mapping[MultiIndex, Scalar], b: Mapping[MultiIndex, Scalar]) -> Dict[MultiIndex, Scalar]:
    """Coefficient convolution ``c_t = sum_{r+s=t} a_r b_s``, canonical output."""
    if len(a) == 1:
        # a basis vector or monomial: shift (and scale) b
        ((r, x),) = a.items()
        if x == ONE:
            return {tuple([u + v for u, v in zip(r, s)]): y for s, y in b.items()}
        return {tuple([u + v for u, v in zip(r, s)]): x * y for s, y in b.items()}
    out: Dict[MultiIndex, Scalar] = {}
    for r, x in a.items():
        for s, y in b.items():
            t = tuple([u + v for u, v in zip(r, s)])
            p = x * y
            prev = out.get(t)
            out[t] = p if prev is None else prev + p
    return {t: v for t, v in out.items() if v}


def sym_mul(phi: LaurentSymbol, psi: LaurentSymbol) -> LaurentSymbol:
    phi._check(psi)
    return LaurentSymbol._wrap(phi.dim, convolve(phi._c, psi._c))


def sym_equal(phi: LaurentSymbol, psi: LaurentSymbol) -> bool:
    return phi.dim == psi.dim and phi._c == psi._c


def conjugate(phi: LaurentSymbol) -> LaurentSymbol:
    """Pointwise complex conjugate on the torus: ``a_r z^r -> conj(a_r) z^-r``."""
    if mutants.active() == "conjugate-no-negation":
        return LaurentSymbol._wrap(phi.dim, {r: a.conjugate() for r, a in phi._c.items()})
    return LaurentSymbol._wrap(
        phi.dim, {tuple(-x for x in r): a.conjugate() for r, a in phi._c.items()}
    )


def substitute_neg_k(phi: LaurentSymbol, k: int) -> LaurentSymbol:
    """``phi(z^-k)``: the coefficient at ``r`` moves to ``-k r``."""
    _check_order(k)
    return LaurentSymbol._wrap(phi.dim, {tuple(-k * x for x in r): a for r, a in phi._c.items()})


def slant_transform(phi: LaurentSymbol, k: int) -> LaurentSymbol:
    """Apply the slant map to a symbol: keep ``a_{km}`` and place it at ``-m``."""
    _check_order(k)
    out = {}
    for r, a in phi._c.items():
        if all(x % k == 0 for x in r):
            out[tuple(-(x // k) for x in r)] = a
    return LaurentSymbol._wrap(phi.dim, out)


def l2_norm_sq(phi: _Sparse):
    return phi.norm_sq()


def sup_norm_estimate(phi: LaurentSymbol, grid_per_dim: int) -> float:
    """Max of ``|phi|`` over a uniform grid on T^n.

    This is a lower bound for the true sup norm, converging to it as the
    grid is refined.
    """
    if grid_per_dim < 1:
        raise ValueError("grid_per_dim must be >= 1")
    if phi.is_zero():
        return 0.0
    n = phi.dim
    angles = 2.0 * np.pi * np.arange(grid_per_dim) / grid_per_dim
    total = np.zeros((grid_per_dim,) * n, dtype=complex)
    for r, a in phi._c.items():
        phase = np.zeros((grid_per_dim,) * n)
        for j, rj in enumerate(r):
            if rj:
                shape = [1] * n
                shape[j] = grid_per_dim
                phase = phase + rj * angles.reshape(shape)
        total += complex(a) * np.exp(1j * phase)
    return float(np.abs(total).max())


def _check_order(k: int) -> None:
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"slant order k must be an integer >= 2, got {k!r}")


def parse_terms(text: str, dim: Optional[int] = None, source: str = "<text>") -> Tuple[int, Dict[MultiIndex, Scalar]]:
    """Parse the one-term-per-line format into ``(dim, coeffs)``.

    Repeated indices are summed. Terms may also be separated by ``;`` so the
    same parser serves the inline symbols of the word syntax.
    """
    coeffs: Dict[MultiIndex, Scalar] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for chunk in line.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if ":" not in chunk:
                raise SymbolParseError("expected '(r_1,...,r_n) : re im'", lineno, source)
            left, right = chunk.split(":", 1)
            try:
                r = parse_index(left)
            except ValueError as exc:
                raise SymbolParseError(str(exc), lineno, source) from None
            parts = right.split()
            if len(parts) != 2:
                raise SymbolParseError("expected exactly two rationals 're im'", lineno, source)
            try:
                value = Scalar(parse_rational(parts[0]), parse_rational(parts[1]))
            except ValueError as exc:
                raise SymbolParseError(str(exc), lineno, source) from None
            if dim is None:
                dim = len(r)
            elif len(r) != dim:
                raise SymbolParseError(f"index has length {len(r)}, expected {dim}", lineno, source)
            prev = coeffs.get(r)
            coeffs[r] = value if prev is None else prev + value
    if dim is None:
        raise SymbolParseError("empty input: dimension cannot be inferred", None, source)
    return dim, {r: v for r, v in coeffs.items() if v}


def format_terms(x: _Sparse, sep: str = "\n") -> str:
    lines = [
        f"{format_index(r)} : {format_rational(v.re)} {format_rational(v.im)}" for r, v in x.items()
    ]
    if sep == "\n":
        return "".join(line + "\n" for line in lines)
    return sep.join(lines)


def pretty(phi: _Sparse, var: str = "z") -> str:
    """Human-readable rendering such as ``2 z1^-1 + (1/2+1 i) z2``."""
    if phi.is_zero():
        return "0"
    parts = []
    for r, a in phi.items():
        if a.im == 0:
            coeff = format_rational(a.re)
        else:
            coeff = f"({a.format()})"
        if phi.dim == 1:
            mono = "" if r[0] == 0 else (f"{var}" if r[0] == 1 else f"{var}^{r[0]}")
        else:
            mono = " ".join(
                (f"{var}{j + 1}" if x == 1 else f"{var}{j + 1}^{x}") for j, x in enumerate(r) if x
            )
        if not mono:
            parts.append(coeff)
        elif coeff == "1":
            parts.append(mono)
        elif coeff == "-1":
            parts.append("-" + mono)
        else:
            parts.append(f"{coeff} {mono}")
    return " + ".join(parts)

