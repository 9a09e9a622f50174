"""Structural decisions about slant operators, with located counterexamples.

The "iff phi = 0" characterisations are decided by witness search inside
support-derived boxes. Each search box below is chosen so that, for a
nonzero symbol, the coefficient argument guarantees a witness inside it;
the box formula is documented on the function that builds it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .lattice import Box, MultiIndex, cube, divides, format_index, scale, sub, unit, zero
from .operators import (
    IdentityCheck,
    OperatorWord,
    adjoint,
    apply,
    auto_box,
    compose,
    equal_on_box,
    image,
    matrix_window,
    MatrixWindow,
    multiplication,
    slant_hankel,
    SlantV,
    SlantVAdj,
)
from .scalars import Scalar
from .symbols import (
    FourierVector,
    LaurentSymbol,
    basis,
    conjugate,
    monomial,
    slant_transform,
    substitute_neg_k,
    sym_mul,
)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass(frozen=True)
class Violation:
    """A located counterexample.

    ``kind`` is one of ``entry_recurrence``, ``intertwining``,
    ``norm_defect``, ``word_identity`` or ``missing_witness``.
    """

    kind: str
    location: Dict[str, object]
    lhs: object = None
    rhs: object = None
    theorem: str = ""
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "theorem": self.theorem,
            "location": {key: _render(v) for key, v in self.location.items()},
            "lhs": _render(self.lhs),
            "rhs": _render(self.rhs),
            "detail": self.detail,
        }


def _render(x: object) -> object:
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, tuple):
        return format_index(x)
    if isinstance(x, Scalar):
        return x.format()
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (FourierVector, LaurentSymbol)):
        return x.to_text().strip().replace("\n", "; ")
    return str(x)


@dataclass(frozen=True)
class WindowVerdict:
    status: str
    pairs_checked: int
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return self.status == PASS


# -- recurrence recognizer ------------------------------------------------------


def is_slant_hankel_window(wnd: MatrixWindow, k: int, max_violations: Optional[int] = None) -> WindowVerdict:
    """Check ``entry[m'+e_j][m-k e_j] == entry[m'][m]`` on every in-window pair.

    A window too small to hold a single pair is ``inconclusive``.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    n = wnd.rows.dim
    rows, cols = wnd.row_index, wnd.col_index
    entries = wnd.entries
    pairs = 0
    found: List[Violation] = []
    for j in range(1, n + 1):
        e = unit(j, n)
        ke = scale(k, e)
        col_pairs = []
        for m, jc in cols.items():
            jc2 = cols.get(tuple(x - y for x, y in zip(m, ke)))
            if jc2 is not None:
                col_pairs.append((m, jc, jc2))
        if not col_pairs:
            continue
        for mp, ir in rows.items():
            ir2 = rows.get(tuple(x + y for x, y in zip(mp, e)))
            if ir2 is None:
                continue
            row, row2 = entries[ir], entries[ir2]
            for m, jc, jc2 in col_pairs:
                pairs += 1
                base, shifted = row[jc], row2[jc2]
                if base != shifted:
                    found.append(
                        Violation(
                            "entry_recurrence",
                            {"m": m, "m_prime": mp, "j": j},
                            lhs=shifted,
                            rhs=base,
                            detail="<T e_{m-k e_j}, e_{m'+e_j}> != <T e_m, e_{m'}>",
                        )
                    )
                    if max_violations is not None and len(found) >= max_violations:
                        return WindowVerdict(FAIL, pairs, tuple(found))
    if pairs == 0:
        return WindowVerdict(INCONCLUSIVE, 0)
    return WindowVerdict(FAIL if found else PASS, pairs, tuple(found))


def extreme_index(phi: LaurentSymbol) -> MultiIndex:
    """Support element with the largest first coordinate (ties: lexicographically largest)."""
    if phi.is_zero():
        return zero(phi.dim)
    return max(phi.support(), key=lambda r: (r[0], r))


def anchored_window(row_anchor: MultiIndex, col_anchor: MultiIndex, k: int) -> Tuple[Box, Box]:
    """Rows ``row_anchor + [-1,1]^n`` and cols ``col_anchor + [-k,1]^n``.

    Holds the recurrence pair through ``(row_anchor, col_anchor)`` for every
    coordinate direction.
    """
    rows = Box(tuple(x - 1 for x in row_anchor), tuple(x + 1 for x in row_anchor))
    cols = Box(tuple(x - k for x in col_anchor), tuple(x + 1 for x in col_anchor))
    return rows, cols


def witness_windows(phi: LaurentSymbol, k: int) -> List[Tuple[Box, Box]]:
    """Two windows anchored at ``(0, -r*)`` and ``(-r*, 0)``, ``r*`` = :func:`extreme_index`.

    For a word whose entries read ``a_{A m' + B m}`` off a nonzero symbol, the
    pair through the anchor compares ``a_{r*}`` with a coefficient whose
    first index coordinate exceeds ``r*_1``, hence zero. Slant Toeplitz,
    multiplication, ``V S_phi`` and their kin are caught at the first
    anchor; the adjoint ``S_phi*`` at the second.
    """
    r = extreme_index(phi)
    o = zero(phi.dim)
    neg = tuple(-x for x in r)
    return [anchored_window(o, neg, k), anchored_window(neg, o, k)]


def window_verdict(word: OperatorWord, windows: List[Tuple[Box, Box]], k: int) -> WindowVerdict:
    """Combine recurrence verdicts over several windows of one operator."""
    pairs = 0
    found: List[Violation] = []
    for rows, cols in windows:
        v = is_slant_hankel_window(matrix_window(word, rows, cols), k)
        pairs += v.pairs_checked
        found.extend(v.violations)
    if pairs == 0:
        return WindowVerdict(INCONCLUSIVE, 0)
    return WindowVerdict(FAIL if found else PASS, pairs, tuple(found))


# -- intertwining ------------------------------------------------------------------


@dataclass(frozen=True)
class IntertwiningCheck:
    ok: bool
    checks: Tuple[IdentityCheck, ...]
    violations: Tuple[Violation, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def check_intertwining(word: OperatorWord, k: int, box: Optional[Box] = None) -> IntertwiningCheck:
    """``M_{z_j} T == T M_{z_j^-k}`` for each coordinate ``j``."""
    n = word.dim
    checks = []
    found = []
    for j in range(1, n + 1):
        e = unit(j, n)
        lhs = compose(multiplication(monomial(e)), word)
        rhs = compose(word, multiplication(monomial(scale(-k, e))))
        b = box if box is not None else auto_box(lhs, rhs)[0]
        res = equal_on_box(lhs, rhs, b)
        checks.append(res)
        if not res.equal:
            found.append(
                Violation("intertwining", {"m": res.witness, "j": j}, res.lhs, res.rhs,
                          detail="M_{z_j} T e_m != T M_{z_j^-k} e_m")
            )
    return IntertwiningCheck(not found, tuple(checks), tuple(found))


# -- hyponormality and isometry ----------------------------------------------------


def _by_size(box: Box) -> List[MultiIndex]:
    return sorted(box, key=lambda m: (sum(abs(x) for x in m), m))


@dataclass(frozen=True)
class HyponormalWitness:
    m: MultiIndex
    norm_sq_s: object
    norm_sq_adjoint: object

    @property
    def defect(self):
        return self.norm_sq_adjoint - self.norm_sq_s


def hyponormality_witness(phi: LaurentSymbol, k: int, search_box: Optional[Box] = None) -> Optional[HyponormalWitness]:
    """Basis vector ``e_m`` with ``||S* e_m||^2 > ||S e_m||^2``, or None.

    Candidates are scanned closest-to-origin first (L1 norm, then
    lexicographic). ``||S* e_m||^2 = ||phi||^2`` for every ``m`` while
    ``||S e_m||^2`` only collects the coefficients with index congruent to
    ``-m`` mod ``k``, so the default box ``[-1, k]^n`` (a padded complete
    residue system) always contains a witness when ``phi != 0``.
    """
    s = slant_hankel(phi, k)
    s_adj = adjoint(s)
    box = search_box if search_box is not None else cube(-1, k, phi.dim)
    for m in _by_size(box):
        e = basis(m)
        a = apply(s, e).norm_sq()
        b = apply(s_adj, e).norm_sq()
        if b > a:
            return HyponormalWitness(m, a, b)
    return None


def isometry_box(phi: LaurentSymbol, k: int) -> Box:
    """``[0, N-1]^n`` with ``N > ceil((N + 2R) / k)``, ``R`` the support radius.

    The images of the ``N^n`` basis vectors then lie in a span of smaller
    dimension, so their Gram matrix cannot be the identity.
    """
    r = phi.radius()
    size = 1
    while size <= -(-(size + 2 * r) // k):
        size += 1
    return cube(0, size - 1, phi.dim)


@dataclass(frozen=True)
class IsometryReport:
    diagonal_defect: object
    diagonal_witness: Optional[MultiIndex]
    offdiagonal_abs_sq: object
    offdiagonal_witness: Optional[Tuple[MultiIndex, MultiIndex]]
    identity_check: bool
    box: Box

    @property
    def defect_found(self) -> bool:
        return self.diagonal_defect > 0 or self.offdiagonal_abs_sq > 0


def isometry_defect(phi: LaurentSymbol, k: int, box: Optional[Box] = None) -> IsometryReport:
    """Gram-matrix defect of ``S_phi`` on a box, plus the ``S S* = M_{V(|phi|^2)}`` identity.

    ``diagonal_defect`` is ``max | ||S e_m||^2 - 1 |``. It can vanish for a
    nonzero symbol (``1 + z`` with ``k = 2`` maps every ``e_m`` to a unit
    vector but ``S e_0 = S e_{-1}``), so the largest ``|<S e_m, S e_m'>|^2``
    over ``m != m'`` is reported alongside it.
    """
    s = slant_hankel(phi, k)
    box = box if box is not None else isometry_box(phi, k)
    images = {m: image(s, m) for m in _by_size(box)}
    diag, diag_at = Fraction(0), None
    for m, img in images.items():
        d = abs(img.norm_sq() - 1)
        if d > diag:
            diag, diag_at = d, m
    # Gram off-diagonal via shared output indices
    by_output: Dict[MultiIndex, List[Tuple[MultiIndex, Scalar]]] = {}
    for m, img in images.items():
        for p, c in img.coeffs.items():
            by_output.setdefault(p, []).append((m, c))
    gram: Dict[Tuple[MultiIndex, MultiIndex], Scalar] = {}
    for hits in by_output.values():
        for i, (m1, c1) in enumerate(hits):
            for m2, c2 in hits[i + 1 :]:
                key = (m1, m2)
                gram[key] = gram.get(key, Scalar(0)) + c1 * c2.conjugate()
    off, off_at = Fraction(0), None
    for key in sorted(gram, key=lambda pr: (_size(pr[0]) + _size(pr[1]), pr)):
        a = gram[key].abs_sq()
        if a > off:
            off, off_at = a, key
    rhs = multiplication(slant_transform(sym_mul(phi, conjugate(phi)), k))
    lhs = compose(s, adjoint(s))
    check = equal_on_box(lhs, rhs, auto_box(lhs, rhs)[0])
    return IsometryReport(_q(diag), diag_at, _q(off), off_at, check.equal, box)


def _size(m: MultiIndex) -> int:
    return sum(abs(x) for x in m)


def _q(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def ss_adjoint_identity(phi: LaurentSymbol, k: int, box: Optional[Box] = None) -> IdentityCheck:
    """``S_phi S_phi* == M_{V(|phi|^2)}``."""
    s = slant_hankel(phi, k)
    lhs = compose(s, adjoint(s))
    rhs = multiplication(slant_transform(sym_mul(phi, conjugate(phi)), k))
    return equal_on_box(lhs, rhs, box if box is not None else auto_box(lhs, rhs)[0])


# -- symbol criteria ----------------------------------------------------------------


def product_symbol(phi: LaurentSymbol, psi: LaurentSymbol, k: int) -> LaurentSymbol:
    """``phi(z^-k) psi(z)``, the symbol with ``S_phi S_psi = V S_{product}``."""
    return sym_mul(substitute_neg_k(phi, k), psi)


def commutator_symbol(phi: LaurentSymbol, psi: LaurentSymbol, k: int) -> LaurentSymbol:
    """``phi(z^-k) psi(z) - psi(z^-k) phi(z)``."""
    if phi.dim != psi.dim:
        raise ValueError(f"dimension mismatch: {phi.dim} vs {psi.dim}")
    return product_symbol(phi, psi, k) - product_symbol(psi, phi, k)


def double_slant(sigma: LaurentSymbol, k: int) -> OperatorWord:
    """``V_k V_k M_sigma``."""
    n = sigma.dim
    return OperatorWord(n, (SlantV(k, n), SlantV(k, n))) @ multiplication(sigma)


def commutator_reduction_check(phi: LaurentSymbol, psi: LaurentSymbol, k: int, box: Optional[Box] = None) -> IdentityCheck:
    """``S_phi S_psi - S_psi S_phi`` acts as ``V^2 M_sigma`` on every ``e_m`` in the box."""
    s_phi, s_psi = slant_hankel(phi, k), slant_hankel(psi, k)
    ab, ba = s_phi @ s_psi, s_psi @ s_phi
    red = double_slant(commutator_symbol(phi, psi, k), k)
    box = box if box is not None else auto_box(ab, ba, red)[0]
    checked = nonzero = 0
    for m in box:
        e = basis(m)
        lhs = apply(ab, e) - apply(ba, e)
        rhs = apply(red, e)
        checked += 1
        if lhs != rhs:
            return IdentityCheck(False, checked, box, m, lhs, rhs, nonzero)
        if lhs:
            nonzero += 1
    return IdentityCheck(True, checked, box, nonzero=nonzero)


def operators_commute(phi: LaurentSymbol, psi: LaurentSymbol, k: int, box: Optional[Box] = None) -> IdentityCheck:
    s_phi, s_psi = slant_hankel(phi, k), slant_hankel(psi, k)
    ab, ba = s_phi @ s_psi, s_psi @ s_phi
    return equal_on_box(ab, ba, box if box is not None else auto_box(ab, ba)[0])


@dataclass(frozen=True)
class ProductVanishing:
    symbol_zero: bool
    operator_zero: bool
    window_slant_hankel: str
    operator_witness: Optional[MultiIndex] = None
    window: Optional[WindowVerdict] = None


def product_vanishing_check(phi: LaurentSymbol, psi: LaurentSymbol, k: int, box: Optional[Box] = None) -> ProductVanishing:
    """Decide ``phi(z^-k) psi = 0``, ``S_phi S_psi = 0`` and the recurrence for ``S_phi S_psi``.

    ``S_phi S_psi = V^2 M_chi`` with ``chi = phi(z^-k) psi``. The operator
    test runs on a complete residue box, so it is exact. The recurrence is
    tested on windows anchored at the extreme support element of ``chi``.
    """
    chi = product_symbol(phi, psi, k)
    word = slant_hankel(phi, k) @ slant_hankel(psi, k)
    box = box if box is not None else auto_box(word, double_slant(chi, k))[0]
    witness = None
    for m in box:
        if apply(word, basis(m)):
            witness = m
            break
    verdict = window_verdict(word, witness_windows(chi, k)[:1], k)
    return ProductVanishing(chi.is_zero(), witness is None, verdict.status, witness, verdict)


def idempotence_witness(phi: LaurentSymbol, k: int) -> Optional[MultiIndex]:
    """Basis index with ``S^2 e_m != S e_m``; None when ``S^2 = S`` on the search box.

    Box formula: ``m = -r* - k q e_1`` padded by 1, where ``r*`` is the
    extreme support element and ``q = floor(max(0, -min_1) / (k+1)) + 1``.
    There ``<S e_m, e_{q e_1}> = a_{r*} != 0`` while the matching entry of
    ``S^2`` reads a coefficient of ``phi(z^-k) phi`` outside its support.
    """
    n = phi.dim
    s = slant_hankel(phi, k)
    s2 = s @ s
    if phi.is_zero():
        box = cube(-1, 1, n)
    else:
        low = min(r[0] for r in phi.support())
        q = max(0, -low) // (k + 1) + 1
        centre = sub(tuple(-x for x in extreme_index(phi)), scale(k * q, unit(1, n)))
        box = Box(tuple(x - 1 for x in centre), tuple(x + 1 for x in centre))
    res = equal_on_box(s2, s, box)
    return None if res.equal else res.witness


# -- coefficient recovery -------------------------------------------------------------


class InsufficientBoxError(ValueError):
    """The box cannot reach some coefficient of the symbol."""


def _reachable(r: MultiIndex, box: Box, step: int) -> bool:
    """Some ``m = -r - step * m'`` lies in the box."""
    for x, lo, hi in zip(r, box.lower, box.upper):
        target = -x
        # need m with lo <= m <= hi and m == target (mod step)
        first = lo + ((target - lo) % step)
        if first > hi:
            return False
    return True


def _recover(word: OperatorWord, box: Box, index_of: Callable[[MultiIndex, MultiIndex], MultiIndex]):
    """Read symbol coefficients off matrix entries; None if two entries disagree."""
    recovered: Dict[MultiIndex, Scalar] = {}
    seen = set()
    for m in box:
        img = image(word, m)
        for mp, c in img.coeffs.items():
            r = index_of(m, mp)
            prev = recovered.get(r)
            if prev is not None and prev != c:
                return None
            recovered[r] = c
            seen.add(r)
    return recovered


def injectivity_check(phi: LaurentSymbol, k: int, box: Optional[Box] = None) -> bool:
    """Recover ``phi`` from ``<S_phi e_m, e_{m'}> = a_{-k m' - m}`` and compare.

    The default box is the hull of ``-supp(phi)`` (``[-1,1]^n`` for zero).
    True iff the recovered symbol equals ``phi`` and ``S_phi`` vanishes on
    the box exactly when ``phi`` does.
    """
    n = phi.dim
    if box is None:
        radius = max(phi.radius(), 1)
        box = cube(-radius, radius, n)
    for r in phi.support():
        if not _reachable(r, box, k):
            raise InsufficientBoxError(
                f"coefficient a_{format_index(r)} is not reachable from box {box}"
            )
    s = slant_hankel(phi, k)
    recovered = _recover(s, box, lambda m, mp: tuple(-k * y - x for x, y in zip(m, mp)))
    if recovered is None:
        return False
    rec = LaurentSymbol(n, recovered)
    operator_zero = not recovered
    return rec == phi and operator_zero == phi.is_zero()


def s1_product_check(phi: LaurentSymbol, k: int, box: Optional[Box] = None) -> bool:
    """``S_1 S_phi = V^2 M_phi`` has entries ``a_{k^2 m' - m}``; recover ``phi`` from them.

    True iff recovery succeeds and ``S_1 S_phi`` vanishes on the box exactly
    when ``phi = 0``.
    """
    n = phi.dim
    one = LaurentSymbol(n, {zero(n): 1})
    word = slant_hankel(one, k) @ slant_hankel(phi, k)
    if box is None:
        radius = max(phi.radius(), 1)
        box = cube(-radius, radius, n)
    for r in phi.support():
        if not _reachable(r, box, k * k):
            raise InsufficientBoxError(
                f"coefficient a_{format_index(r)} is not reachable from box {box}"
            )
    recovered = _recover(word, box, lambda m, mp: tuple(k * k * y - x for x, y in zip(m, mp)))
    if recovered is None:
        return False
    return LaurentSymbol(n, recovered) == phi and (not recovered) == phi.is_zero()


# -- conjugation and reduction identities --------------------------------------------


def _vmv(sym: LaurentSymbol, k: int) -> OperatorWord:
    n = sym.dim
    return OperatorWord(n, (SlantV(k, n),) + multiplication(sym).letters + (SlantVAdj(k, n),))


def conjugation_identity_check(k: int, n: int, m: MultiIndex, l: MultiIndex, box: Optional[Box] = None) -> bool:
    """``V M_{z^-km} V* = M_{z^m}`` and, for ``k`` not dividing ``l``, ``V M_{z^-l} V* = 0``."""
    first = _vmv(monomial(scale(-k, m)), k)
    target = multiplication(monomial(m))
    b = box if box is not None else auto_box(first, target)[0]
    if not equal_on_box(first, target, b):
        return False
    if divides(k, l):
        raise ValueError(f"l = {format_index(l)} is divisible by k = {k}")
    second = _vmv(monomial(tuple(-x for x in l)), k)
    zero_op = multiplication(LaurentSymbol.zero(n))
    b = box if box is not None else auto_box(second, zero_op)[0]
    return equal_on_box(second, zero_op, b).equal


def conjugation_checks(k: int, n: int, m: MultiIndex, l: MultiIndex, box: Optional[Box] = None) -> Tuple[IdentityCheck, IdentityCheck]:
    first = _vmv(monomial(scale(-k, m)), k)
    target = multiplication(monomial(m))
    second = _vmv(monomial(tuple(-x for x in l)), k)
    zero_op = multiplication(LaurentSymbol.zero(n))
    b1 = box if box is not None else auto_box(first, target)[0]
    b2 = box if box is not None else auto_box(second, zero_op)[0]
    return equal_on_box(first, target, b1), equal_on_box(second, zero_op, b2)


def chi_symbol(phi: LaurentSymbol, t: MultiIndex, k: int) -> LaurentSymbol:
    """``V(conj(z^t phi))``."""
    return slant_transform(conjugate(sym_mul(monomial(t), phi)), k)


def lambda_symbol(phi: LaurentSymbol, psi: LaurentSymbol, k: int) -> LaurentSymbol:
    """``V(V(conj(psi) conj(phi)(z^-k)))``."""
    inner = sym_mul(conjugate(psi), substitute_neg_k(conjugate(phi), k))
    return slant_transform(slant_transform(inner, k), k)


def chi_reduction(phi: LaurentSymbol, t: MultiIndex, k: int, box: Optional[Box] = None) -> IdentityCheck:
    """``V (S_phi M_{z^t})* == M_chi``."""
    n = phi.dim
    lhs = OperatorWord(n, (SlantV(k, n),)) @ adjoint(slant_hankel(phi, k) @ multiplication(monomial(t)))
    rhs = multiplication(chi_symbol(phi, t, k))
    return equal_on_box(lhs, rhs, box if box is not None else auto_box(lhs, rhs)[0])


def lambda_reduction(phi: LaurentSymbol, psi: LaurentSymbol, k: int, box: Optional[Box] = None) -> IdentityCheck:
    """``V^2 (S_phi S_psi)* == M_Lambda``."""
    n = phi.dim
    vv = OperatorWord(n, (SlantV(k, n), SlantV(k, n)))
    lhs = vv @ adjoint(slant_hankel(phi, k) @ slant_hankel(psi, k))
    rhs = multiplication(lambda_symbol(phi, psi, k))
    return equal_on_box(lhs, rhs, box if box is not None else auto_box(lhs, rhs)[0])


def mul_reduction_check(phi: LaurentSymbol, psi: LaurentSymbol, t: MultiIndex, k: int, box: Optional[Box] = None) -> bool:
    return chi_reduction(phi, t, k, box).equal and lambda_reduction(phi, psi, k, box).equal
