"""Command-line front end.

Exit status: 0 pass, 1 theorem or witness failure, 2 usage or input error.
The default arithmetic mode for ``verify`` comes from ``SLANT_HANKEL_MODE``
(``exact`` when unset).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .lattice import format_index, parse_box
from .mutants import MUTANTS
from .operators import WINDOW_FORMAT, WordParseError, apply, matrix_window, parse_word
from .structure import (
    PASS,
    commutator_symbol,
    hyponormality_witness,
    isometry_defect,
    product_symbol,
)
from .suite import ERROR, REPORT_FORMAT, TAGS, ConfigError, SuiteConfig, report_json, report_table, run_suite
from .symbols import FourierVector, LaurentSymbol, SymbolParseError, format_terms, pretty

MODE_ENV = "SLANT_HANKEL_MODE"
SYMBOL_FORMAT = "slant-hankel-terms/1"


class InputError(Exception):
    pass


def _positive_order(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if k < 2:
        raise argparse.ArgumentTypeError(f"k must be >= 2, got {k}")
    return k


def _at_least(lo: int):
    def conv(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {v}")
        return v

    return conv


def _box(text: str):
    try:
        return parse_box(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}")


def _load_symbols(paths: List[str], dim: Optional[int] = None) -> List[LaurentSymbol]:
    """Parse symbol files; an empty file (the zero symbol) borrows its dimension from a sibling or ``--n``."""
    parsed: List[Optional[LaurentSymbol]] = []
    for p in paths:
        text = _read(p)
        try:
            parsed.append(LaurentSymbol.from_text(text, dim=dim, source=p))
        except SymbolParseError as exc:
            if "inferred" not in str(exc):
                raise InputError(str(exc))
            parsed.append(None)
    dims = {phi.dim for phi in parsed if phi is not None}
    if len(dims) > 1:
        listing = ", ".join(f"{p} on T^{phi.dim}" for p, phi in zip(paths, parsed) if phi is not None)
        raise InputError(f"dimension mismatch between files: {listing}")
    if not dims:
        raise InputError(f"{paths[0]}: empty input is the zero symbol; give its dimension with --n")
    (common,) = dims
    return [phi if phi is not None else LaurentSymbol.zero(common) for phi in parsed]


def _load_word(path: str, dim: Optional[int]):
    try:
        return parse_word(_read(path), dim=dim, base_dir=str(Path(path).parent))
    except (WordParseError, SymbolParseError) as exc:
        raise InputError(f"{path}: {exc}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slant-hankel",
        description="Exact slant Hankel operator workbench.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--version",
        action="version",
        version=(
            f"slant-hankel {__version__} (report {REPORT_FORMAT}, window {WINDOW_FORMAT}, "
            f"symbols {SYMBOL_FORMAT})"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    v = sub.add_parser("verify", help="run the theorem suite")
    v.add_argument("--k", type=_positive_order, default=2)
    v.add_argument("--n", type=_at_least(1), default=1)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cases", type=_at_least(1), default=25)
    v.add_argument("--radius", type=_at_least(1), default=3, help="support radius of random symbols")
    v.add_argument("--coeff-bound", type=_at_least(1), default=3)
    v.add_argument("--max-terms", type=_at_least(1), default=4)
    v.add_argument("--mode", choices=("exact", "float"), default=None,
                   help=f"arithmetic mode (default: ${MODE_ENV} or exact)")
    v.add_argument("--theorems", default=None, help="comma-separated tags: " + ",".join(TAGS))
    v.add_argument("--mutant", choices=sorted(MUTANTS), default=None, help="inject an engine fault")
    v.add_argument("--out", default=None, help="write the JSON report here")
    v.add_argument("--timings", action="store_true", help="include wall times in the JSON report")

    a = sub.add_parser("apply", help="apply an operator word to a vector")
    a.add_argument("--word", required=True)
    a.add_argument("--vector", required=True)

    m = sub.add_parser("matrix", help="export a matrix window")
    m.add_argument("--word", required=True)
    m.add_argument("--rows", type=_box, required=True)
    m.add_argument("--cols", type=_box, required=True)
    m.add_argument("--format", choices=("csv", "json"), default="csv")

    w = sub.add_parser("witness", help="search a hyponormality or isometry witness")
    w.add_argument("--property", choices=("hyponormal", "isometry"), required=True)
    w.add_argument("--symbol", required=True)
    w.add_argument("--k", type=_positive_order, required=True)
    w.add_argument("--box", type=_box, default=None)
    w.add_argument("--n", type=_at_least(1), default=None, help="dimension, needed only for an empty symbol file")

    s = sub.add_parser("symbol-check", help="evaluate the product and commutation criteria")
    s.add_argument("--phi", required=True)
    s.add_argument("--psi", required=True)
    s.add_argument("--k", type=_positive_order, required=True)
    s.add_argument("--n", type=_at_least(1), default=None, help="dimension, needed only if both files are empty")
    return parser


def cmd_verify(args, parser) -> int:
    mode = args.mode or os.environ.get(MODE_ENV) or "exact"
    if mode not in ("exact", "float"):
        parser.error(f"${MODE_ENV} must be 'exact' or 'float', got {mode!r}")
    theorems = tuple(t for t in args.theorems.split(",") if t.strip()) if args.theorems else None
    config = SuiteConfig(
        k=args.k, n=args.n, seed=args.seed, cases=args.cases, support_radius=args.radius,
        coeff_bound=args.coeff_bound, max_terms=args.max_terms, mode=mode, theorems=theorems,
        mutant=args.mutant,
    )
    try:
        config.validate()
    except ConfigError as exc:
        parser.error(str(exc))
    reports = run_suite(config)
    sys.stdout.write(report_table(config, reports))
    if args.out:
        try:
            Path(args.out).write_text(report_json(config, reports, args.timings), encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc.strerror or exc}")
    if any(r.verdict == ERROR for r in reports):
        return 2
    return 0 if all(r.verdict == PASS for r in reports) else 1


def cmd_apply(args) -> int:
    try:
        vec = FourierVector.from_text(_read(args.vector), source=args.vector)
    except SymbolParseError as exc:
        raise InputError(str(exc))
    word = _load_word(args.word, vec.dim)
    if word.dim != vec.dim:
        raise InputError(f"dimension mismatch: word acts on T^{word.dim}, vector lives on T^{vec.dim}")
    out = apply(word, vec)
    text = format_terms(out)
    sys.stdout.write(text or "# zero vector\n")
    return 0


def cmd_matrix(args) -> int:
    if args.rows.dim != args.cols.dim:
        raise InputError("row and column boxes have different dimensions")
    word = _load_word(args.word, args.rows.dim)
    if word.dim != args.rows.dim:
        raise InputError(f"dimension mismatch: word acts on T^{word.dim}, boxes are {args.rows.dim}-dimensional")
    wnd = matrix_window(word, args.rows, args.cols)
    sys.stdout.write(wnd.to_csv() if args.format == "csv" else wnd.to_json())
    return 0


def cmd_witness(args) -> int:
    (phi,) = _load_symbols([args.symbol], args.box.dim if args.box else args.n)
    if args.box is not None and args.box.dim != phi.dim:
        raise InputError(f"box is {args.box.dim}-dimensional, symbol lives on T^{phi.dim}")
    if args.property == "hyponormal":
        wit = hyponormality_witness(phi, args.k, args.box)
        if wit is None:
            print("none in box")
            return 0 if phi.is_zero() else 1
        print(f"witness m={format_index(wit.m)}")
        print(f"||S e_m||^2 = {str(wit.norm_sq_s)}")
        print(f"||S* e_m||^2 = {str(wit.norm_sq_adjoint)}")
        return 0
    rep = isometry_defect(phi, args.k, args.box)
    at = format_index(rep.diagonal_witness) if rep.diagonal_witness is not None else "-"
    print(f"box {rep.box}")
    print(f"diagonal defect max | ||S e_m||^2 - 1 | = {str(rep.diagonal_defect)} at m={at}")
    if rep.offdiagonal_witness is not None:
        p, q = rep.offdiagonal_witness
        print(f"off-diagonal max |<S e_m, S e_m'>|^2 = {str(rep.offdiagonal_abs_sq)} at m={format_index(p)}, m'={format_index(q)}")
    else:
        print("off-diagonal max |<S e_m, S e_m'>|^2 = 0")
    print(f"identity S S* = M_V(|phi|^2): {'holds' if rep.identity_check else 'fails'}")
    return 0 if rep.identity_check and rep.defect_found else 1


def cmd_symbol_check(args) -> int:
    phi, psi = _load_symbols([args.phi, args.psi], args.n)
    if phi.dim != psi.dim:
        raise InputError(f"dimension mismatch: {args.phi} is on T^{phi.dim}, {args.psi} on T^{psi.dim}")
    chi = product_symbol(phi, psi, args.k)
    sigma = commutator_symbol(phi, psi, args.k)
    print(f"product criterion phi(z^-k) psi(z) = 0: {'holds' if chi.is_zero() else 'fails'}")
    print(f"  residual: {pretty(chi)}")
    print(f"commutation criterion phi(z^-k) psi(z) = psi(z^-k) phi(z): {'holds' if sigma.is_zero() else 'fails'}")
    print(f"  residual: {pretty(sigma)}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args, parser)
        if args.command == "apply":
            return cmd_apply(args)
        if args.command == "matrix":
            return cmd_matrix(args)
        if args.command == "witness":
            return cmd_witness(args)
        return cmd_symbol_check(args)
    except InputError as exc:
        print(f"slant-hankel: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"slant-hankel: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
