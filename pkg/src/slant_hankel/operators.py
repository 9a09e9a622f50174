"""Operators on L^2(T^n) as words in the alphabet {M_phi, W_k, W_k*, V_k, V_k*}.

A word ``(L1, L2, ..., Lp)`` denotes the composition ``L1 L2 ... Lp``, so the
rightmost letter acts first. Words act exactly on finitely supported
vectors; nothing is truncated, so slant actions near a window edge are never
corrupted.

Generator actions on the basis ``e_m``::

    M_phi e_m = sum_r a_r e_{m+r}
    W_k e_m   = e_{m/k}   if k | m, else 0       W_k* e_m = e_{km}
    V_k e_m   = e_{-m/k}  if k | m, else 0       V_k* e_m = e_{-km}
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Tuple

from . import mutants
from .lattice import Box, MultiIndex, cube, format_box, format_index
from .scalars import Scalar
from .symbols import (
    FourierVector,
    LaurentSymbol,
    SymbolParseError,
    basis,
    conjugate,
    convolve,
    format_terms,
    parse_terms,
)

__all__ = [
    "Generator",
    "Mul",
    "SlantW",
    "SlantWAdj",
    "SlantV",
    "SlantVAdj",
    "OperatorWord",
    "identity",
    "slant_hankel",
    "slant_toeplitz",
    "apply_generator",
    "apply",
    "adjoint",
    "compose",
    "entry",
    "MatrixWindow",
    "matrix_window",
    "IdentityCheck",
    "equal_on_box",
    "covariance",
    "auto_box",
    "parse_word",
    "format_word",
    "WordParseError",
]

MUL, W, W_ADJ, V, V_ADJ = "mul", "W", "W*", "V", "V*"
_STAR = {MUL: MUL, W: W_ADJ, W_ADJ: W, V: V_ADJ, V_ADJ: V}


@dataclass(frozen=True)
class Generator:
    """One letter of an operator word."""

    kind: str
    dim: int
    k: int = 0
    symbol: Optional[LaurentSymbol] = None

    def __post_init__(self) -> None:
        if self.kind not in _STAR:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind == MUL:
            if self.symbol is None or self.symbol.dim != self.dim:
                raise ValueError("multiplication letter needs a symbol of matching dimension")
        elif not isinstance(self.k, int) or self.k < 2:
            raise ValueError(f"slant order k must be an integer >= 2, got {self.k!r}")

    @property
    def is_slant(self) -> bool:
        return self.kind != MUL

    def star(self) -> "Generator":
        if self.kind == MUL:
            return Generator(MUL, self.dim, symbol=conjugate(self.symbol))
        return Generator(_STAR[self.kind], self.dim, self.k)

    def __str__(self) -> str:
        if self.kind == MUL:
            return f"M[{format_terms(self.symbol, sep='; ')}]"
        return f"{self.kind}_{self.k}"


def Mul(phi: LaurentSymbol) -> Generator:
    return Generator(MUL, phi.dim, symbol=phi)


def SlantW(k: int, n: int) -> Generator:
    return Generator(W, n, k)


def SlantWAdj(k: int, n: int) -> Generator:
    return Generator(W_ADJ, n, k)


def SlantV(k: int, n: int) -> Generator:
    return Generator(V, n, k)


def SlantVAdj(k: int, n: int) -> Generator:
    return Generator(V_ADJ, n, k)


@dataclass(frozen=True)
class OperatorWord:
    """Composition of generators; the empty word is the identity."""

    dim: int
    letters: Tuple[Generator, ...] = ()

    def __post_init__(self) -> None:
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        for g in letters:
            if g.dim != self.dim:
                raise ValueError(f"letter {g} has dimension {g.dim}, word has {self.dim}")

    def __matmul__(self, other: "OperatorWord") -> "OperatorWord":
        return compose(self, other)

    def __len__(self) -> int:
        return len(self.letters)

    def is_zero(self) -> bool:
        """True when some letter multiplies by the zero symbol."""
        return any(g.kind == MUL and g.symbol.is_zero() for g in self.letters)

    def orders(self) -> set:
        return {g.k for g in self.letters if g.is_slant}

    @property
    def mixed_orders(self) -> bool:
        return len(self.orders()) > 1

    def __str__(self) -> str:
        return format_word(self)


def identity(n: int) -> OperatorWord:
    return OperatorWord(n, ())


def word(*letters: Generator) -> OperatorWord:
    if not letters:
        raise ValueError("use identity(n) for the empty word")
    return OperatorWord(letters[0].dim, letters)


def slant_hankel(phi: LaurentSymbol, k: int) -> OperatorWord:
    """``S_phi = V_k M_phi``."""
    return OperatorWord(phi.dim, (SlantV(k, phi.dim), Mul(phi)))


def slant_toeplitz(phi: LaurentSymbol, k: int) -> OperatorWord:
    """``A_phi = W_k M_phi``."""
    return OperatorWord(phi.dim, (SlantW(k, phi.dim), Mul(phi)))


def multiplication(phi: LaurentSymbol) -> OperatorWord:
    return OperatorWord(phi.dim, (Mul(phi),))


def compose(w1: OperatorWord, w2: OperatorWord) -> OperatorWord:
    if w1.dim != w2.dim:
        raise ValueError(f"dimension mismatch: {w1.dim} vs {w2.dim}")
    return OperatorWord(w1.dim, w1.letters + w2.letters)


def adjoint(w: OperatorWord) -> OperatorWord:
    letters = [g.star() for g in w.letters]
    if mutants.active() != "adjoint-order":
        letters.reverse()
    return OperatorWord(w.dim, tuple(letters))


# -- exact action -------------------------------------------------------------

Coeffs = Dict[MultiIndex, Scalar]


def _act(g: Generator, c: Coeffs, mutant: Optional[str]) -> Coeffs:
    kind = g.kind
    if kind == MUL:
        return convolve(c, g.symbol.coeffs)
    k = g.k
    if kind == V:
        if mutant == "v-sign":
            return {tuple([x // k for x in m]): v for m, v in c.items() if all(x % k == 0 for x in m)}
        if mutant == "v-no-divisibility":
            out: Coeffs = {}
            for m, v in c.items():
                key = tuple([-(x // k) for x in m])
                prev = out.get(key)
                out[key] = v if prev is None else prev + v
            return {key: v for key, v in out.items() if v}
        return {tuple([-(x // k) for x in m]): v for m, v in c.items() if all(x % k == 0 for x in m)}
    if kind == V_ADJ:
        if mutant == "vadj-direction":
            return {tuple([k * x for x in m]): v for m, v in c.items()}
        return {tuple([-k * x for x in m]): v for m, v in c.items()}
    if kind == W:
        return {tuple([x // k for x in m]): v for m, v in c.items() if all(x % k == 0 for x in m)}
    return {tuple([k * x for x in m]): v for m, v in c.items()}


def _check_dim(dim: int, v: FourierVector) -> None:
    if dim != v.dim:
        raise ValueError(f"dimension mismatch: operator on T^{dim}, vector on T^{v.dim}")


def apply_generator(g: Generator, v: FourierVector) -> FourierVector:
    _check_dim(g.dim, v)
    return FourierVector._wrap(v.dim, _act(g, dict(v.coeffs), mutants.active()))


def apply(w: OperatorWord, v: FourierVector) -> FourierVector:
    """Exact image ``w v``; letters are applied right to left."""
    _check_dim(w.dim, v)
    mutant = mutants.active()
    c: Coeffs = dict(v.coeffs)
    for g in reversed(w.letters):
        if not c:
            break
        c = _act(g, c, mutant)
    return FourierVector._wrap(v.dim, c)


def image(w: OperatorWord, m: MultiIndex) -> FourierVector:
    """``w e_m``."""
    return apply(w, basis(m))


def entry(w: OperatorWord, m: MultiIndex, m_prime: MultiIndex) -> Scalar:
    """Matrix entry ``<w e_m, e_{m'}>``."""
    return image(w, tuple(m))[tuple(m_prime)]


# -- matrix windows -------------------------------------------------------------

WINDOW_FORMAT = "slant-hankel-window/1"


@dataclass(frozen=True)
class MatrixWindow:
    """Dense block of ``<T e_m, e_{m'}>`` for ``m'`` in ``rows`` and ``m`` in ``cols``.

    ``entries[i][j]`` holds the entry for the i-th row index and j-th column
    index in lexicographic enumeration order.
    """

    rows: Box
    cols: Box
    entries: Tuple[Tuple[Scalar, ...], ...]
    row_index: Dict[MultiIndex, int] = field(compare=False, repr=False, default_factory=dict)
    col_index: Dict[MultiIndex, int] = field(compare=False, repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        if not self.row_index:
            self.row_index.update({m: i for i, m in enumerate(self.rows)})
        if not self.col_index:
            self.col_index.update({m: j for j, m in enumerate(self.cols)})

    def __getitem__(self, key: Tuple[MultiIndex, MultiIndex]) -> Scalar:
        m_prime, m = key
        return self.entries[self.row_index[m_prime]][self.col_index[m]]

    def is_zero(self) -> bool:
        return not any(x for row in self.entries for x in row)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        cols = list(self.cols)
        writer.writerow(["m'\\m"] + [format_index(m) for m in cols])
        for m_prime, row in zip(self.rows, self.entries):
            writer.writerow([format_index(m_prime)] + [x.format() for x in row])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "format": WINDOW_FORMAT,
            "rows": format_box(self.rows),
            "cols": format_box(self.cols),
            "row_indices": [format_index(m) for m in self.rows],
            "col_indices": [format_index(m) for m in self.cols],
            "entries": [[x.format() for x in row] for row in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def matrix_window(w: OperatorWord, rows: Box, cols: Box) -> MatrixWindow:
    if rows.dim != w.dim or cols.dim != w.dim:
        raise ValueError("window boxes must match the operator dimension")
    row_list = list(rows)
    columns = [image(w, m) for m in cols]
    entries = tuple(tuple(col[m_prime] for col in columns) for m_prime in row_list)
    return MatrixWindow(rows, cols, entries)


# -- identity checks --------------------------------------------------------------


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of comparing two operators on the basis vectors of a box."""

    equal: bool
    checked: int
    box: Box
    witness: Optional[MultiIndex] = None
    lhs: Optional[FourierVector] = None
    rhs: Optional[FourierVector] = None
    nonzero: int = 0

    def __bool__(self) -> bool:
        return self.equal


def equal_on_box(w1: OperatorWord, w2: OperatorWord, cols: Box) -> IdentityCheck:
    """Compare ``w1 e_m`` and ``w2 e_m`` exactly for every ``m`` in ``cols``.

    Stops at the first mismatch, which is therefore the lexicographically
    smallest witness.
    """
    if w1.dim != w2.dim or cols.dim != w1.dim:
        raise ValueError("dimension mismatch between words and box")
    checked = nonzero = 0
    for m in cols:
        e = basis(m)
        a, b = apply(w1, e), apply(w2, e)
        checked += 1
        if a != b:
            return IdentityCheck(False, checked, cols, m, a, b, nonzero)
        if a:
            nonzero += 1
    return IdentityCheck(True, checked, cols, nonzero=nonzero)


def covariance(w: OperatorWord) -> Tuple[int, Fraction]:
    """Translation covariance of a word.

    Returns ``(period, factor)`` such that ``w e_{m+q} = z^{factor q} w e_m``
    for every ``q`` in ``period * Z^n``. Shifting the input by a multiple of
    the period shifts the output rigidly, so two words with the same factor
    agree everywhere as soon as they agree on one complete residue system
    modulo the period.
    """
    factor = Fraction(1)
    period = 1
    for g in reversed(w.letters):
        if g.kind == V:
            factor = -factor / g.k
        elif g.kind == V_ADJ:
            factor = -factor * g.k
        elif g.kind == W:
            factor = factor / g.k
        elif g.kind == W_ADJ:
            factor = factor * g.k
        period = lcm(period, factor.denominator)
    return period, factor


def auto_box(*words: OperatorWord, pad: int = 1) -> Tuple[Box, bool]:
    """Comparison box for an identity between ``words``.

    Returns ``(box, complete)``. When all nonzero words share a covariance
    factor the box is the residue cube ``[0, P-1]^n`` padded by ``pad``,
    where ``P`` is the common period; agreement on it then implies agreement
    on all of Z^n, and disagreement anywhere shows up inside it
    (``complete`` is True). Otherwise a support-derived cube is returned
    and ``complete`` is False.
    """
    n = words[0].dim
    live = [w for w in words if not w.is_zero()]
    covs = [covariance(w) for w in live]
    period = 1
    for p, _ in covs:
        period = lcm(period, p)
    if len({f for _, f in covs}) <= 1:
        return cube(-pad, period - 1 + pad, n), True
    spread = 0
    for w in live:
        scale = max([g.k for g in w.letters if g.is_slant], default=1)
        spread += scale * sum(g.symbol.radius() for g in w.letters if g.kind == MUL)
    return cube(-(spread + period + pad), spread + period + pad, n), False


# -- text format for words --------------------------------------------------------


class WordParseError(ValueError):
    pass


def _tokenize(text: str) -> List[str]:
    tokens: List[str] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == ";" and text.startswith(";;", i):
            j = text.find("\n", i)
            i = n if j < 0 else j
        elif ch in "()":
            tokens.append(ch)
            i += 1
        elif ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise WordParseError("unterminated string")
            tokens.append(text[i : j + 1])
            i = j + 1
        elif ch == "{":
            j = text.find("}", i + 1)
            if j < 0:
                raise WordParseError("unterminated inline symbol")
            tokens.append(text[i : j + 1])
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in '()"{':
                j += 1
            tokens.append(text[i:j])
            i = j
    return tokens


def _read(tokens: List[str], pos: int):
    if pos >= len(tokens):
        raise WordParseError("unexpected end of word")
    tok = tokens[pos]
    if tok == "(":
        items = []
        pos += 1
        while True:
            if pos >= len(tokens):
                raise WordParseError("missing ')'")
            if tokens[pos] == ")":
                return items, pos + 1
            item, pos = _read(tokens, pos)
            items.append(item)
    if tok == ")":
        raise WordParseError("unexpected ')'")
    return tok, pos + 1


_SLANT_HEADS = {"V": V, "V*": V_ADJ, "W": W, "W*": W_ADJ}


def parse_word(text: str, dim: Optional[int] = None, base_dir: Optional[str] = None) -> OperatorWord:
    """Parse the S-expression word syntax.

    Forms (the optional trailing ``EXPR`` acts first)::

        (V k [EXPR])  (V* k [EXPR])  (W k [EXPR])  (W* k [EXPR])
        (mul SYM [EXPR])     SYM is "path/to/file.sym" or {(1,0) : 1 0; ...}
        (S k SYM)  (A k SYM)  slant Hankel V_k M_SYM / slant Toeplitz W_k M_SYM
        (adj EXPR)  (compose EXPR ...)  (id)
    """
    tokens = _tokenize(text)
    if not tokens:
        raise WordParseError("empty word")
    tree, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise WordParseError(f"trailing input after word: {' '.join(tokens[pos:])}")
    symbols: Dict[str, LaurentSymbol] = {}
    dims = set()

    def load(tok: object) -> str:
        if not isinstance(tok, str):
            raise WordParseError(f"expected a symbol, got {tok!r}")
        if tok in symbols:
            return tok
        if tok.startswith("{"):
            body = tok[1:-1]
            if not body.strip():
                symbols[tok] = None  # zero symbol, dimension resolved later
                return tok
            d, c = parse_terms(body, None, "<inline symbol>")
            symbols[tok] = LaurentSymbol(d, c)
        elif tok.startswith('"'):
            path = tok[1:-1]
            if base_dir and not os.path.isabs(path):
                path = os.path.join(base_dir, path)
            try:
                with open(path, encoding="utf-8") as fh:
                    content = fh.read()
            except OSError as exc:
                raise WordParseError(f"cannot read symbol file {path!r}: {exc}") from None
            if not _has_terms(content):
                symbols[tok] = None
                return tok
            d, c = parse_terms(content, None, path)
            symbols[tok] = LaurentSymbol(d, c)
        else:
            raise WordParseError(f"expected a quoted path or {{...}} symbol, got {tok!r}")
        dims.add(symbols[tok].dim)
        return tok

    def scan(node: object) -> None:
        if not isinstance(node, list) or not node:
            if node not in ("I", "id"):
                raise WordParseError(f"unexpected atom {node!r}")
            return
        head = node[0]
        if head in ("mul",):
            load(node[1] if len(node) > 1 else None)
            for child in node[2:]:
                scan(child)
        elif head in ("S", "A"):
            if len(node) != 3:
                raise WordParseError(f"({head} k SYM) takes exactly two arguments")
            load(node[2])
        else:
            for child in node[1:]:
                if isinstance(child, list):
                    scan(child)

    scan(tree)
    if len(dims) > 1:
        raise WordParseError(f"symbols of different dimensions: {sorted(dims)}")
    if dims:
        n = dims.pop()
        if dim is not None and dim != n:
            raise WordParseError(f"word symbols live on T^{n}, expected T^{dim}")
    elif dim is not None:
        n = dim
    else:
        raise WordParseError("word has no symbols; its dimension must be supplied")

    def sym(tok: str) -> LaurentSymbol:
        s = symbols[tok]
        return LaurentSymbol.zero(n) if s is None else s

    def order(tok: object) -> int:
        try:
            k = int(tok)
        except (TypeError, ValueError):
            raise WordParseError(f"expected slant order, got {tok!r}") from None
        if k < 2:
            raise WordParseError(f"slant order must be >= 2, got {k}")
        return k

    def build(node: object) -> OperatorWord:
        if not isinstance(node, list) or not node:
            return identity(n)
        head, args = node[0], node[1:]
        if head in ("id", "I"):
            if args:
                raise WordParseError("(id) takes no arguments")
            return identity(n)
        if head in _SLANT_HEADS:
            if not args or len(args) > 2:
                raise WordParseError(f"({head} k [EXPR]) expects 1 or 2 arguments")
            letter = OperatorWord(n, (Generator(_SLANT_HEADS[head], n, order(args[0])),))
            return letter @ build(args[1]) if len(args) == 2 else letter
        if head == "mul":
            if not args or len(args) > 2:
                raise WordParseError("(mul SYM [EXPR]) expects 1 or 2 arguments")
            letter = multiplication(sym(args[0]))
            return letter @ build(args[1]) if len(args) == 2 else letter
        if head == "S":
            return slant_hankel(sym(args[1]), order(args[0]))
        if head == "A":
            return slant_toeplitz(sym(args[1]), order(args[0]))
        if head == "adj":
            if len(args) != 1:
                raise WordParseError("(adj EXPR) expects one argument")
            return adjoint(build(args[0]))
        if head == "compose":
            out = identity(n)
            for child in args:
                out = out @ build(child)
            return out
        raise WordParseError(f"unknown form {head!r}")

    try:
        return build(tree)
    except SymbolParseError as exc:
        raise WordParseError(str(exc)) from None


def _has_terms(content: str) -> bool:
    return any(line.split("#", 1)[0].strip() for line in content.splitlines())


def format_word(w: OperatorWord) -> str:
    """Self-contained S-expression; :func:`parse_word` reads it back."""
    if not w.letters:
        return "(id)"
    out = ""
    for g in reversed(w.letters):
        if g.kind == MUL:
            head = f"mul {{{format_terms(g.symbol, sep='; ')}}}"
        else:
            head = f"{g.kind} {g.k}"
        out = f"({head} {out})" if out else f"({head})"
    return out
