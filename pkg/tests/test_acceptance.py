"""Acceptance criteria 1-9.  Each test prints one PASS/FAIL line with its wall time."""

import time

import pytest

from slant_hankel.lattice import Box, cube, divides, unit
from slant_hankel.mutants import MUTANTS, injected
from slant_hankel.operators import (
    OperatorWord,
    SlantV,
    SlantVAdj,
    adjoint,
    apply,
    auto_box,
    compose,
    equal_on_box,
    image,
    matrix_window,
    multiplication,
    slant_hankel,
)
from slant_hankel.structure import (
    check_intertwining,
    chi_reduction,
    commutator_reduction_check,
    commutator_symbol,
    hyponormality_witness,
    is_slant_hankel_window,
    idempotence_witness,
    injectivity_check,
    isometry_defect,
    lambda_reduction,
    operators_commute,
    product_vanishing_check,
    s1_product_check,
    ss_adjoint_identity,
    window_verdict,
    witness_windows,
)
from slant_hankel.scalars import Scalar
from slant_hankel.suite import SuiteConfig, random_symbol, report_json, run_suite, tag_rng
from slant_hankel.symbols import FourierVector, LaurentSymbol, basis, constant, substitute_neg_k, sym_mul

CONFIGS = [(k, n) for k in (2, 3) for n in (1, 2, 3)]
SAMPLES = 25


class Criterion:
    def __init__(self):
        self.ok = False
        self.budget = None

    def __call__(self, number, title, budget=None):
        self.number, self.title, self.budget = number, title, budget
        self.start = time.perf_counter()


@pytest.fixture
def report(capsys):
    """Yield a recorder; on exit print the criterion line straight to the terminal."""
    crit = Criterion()
    yield crit
    elapsed = time.perf_counter() - crit.start
    in_time = crit.budget is None or elapsed < crit.budget
    limit = f", limit {crit.budget} s" if crit.budget else ""
    with capsys.disabled():
        print(f"\ncriterion {crit.number}: {'PASS' if crit.ok and in_time else 'FAIL'} - {crit.title} "
              f"[{elapsed:.2f} s{limit}]")
    assert in_time, f"criterion {crit.number} took {elapsed:.2f} s"


def samples(k, n, label):
    rng = tag_rng(2024, f"acceptance:{label}:{k}:{n}")
    cfg = SuiteConfig(k=k, n=n)
    return [random_symbol(cfg, rng) for _ in range(SAMPLES)]


def test_criterion_1_generator_algebra(report):
    report(1, "V V* = I, V* V = P_e, |V e_m| <= |e_m| with equality iff k | m", budget=1.0)
    for k in (2, 3):
        for n in (1, 2, 3):
            v = OperatorWord(n, (SlantV(k, n),))
            va = OperatorWord(n, (SlantVAdj(k, n),))
            vva, vav = v @ va, va @ v
            for m in cube(-6, 6, n):
                e = basis(m)
                assert apply(vva, e) == e
                assert apply(vav, e) == (e if divides(k, m) else FourierVector.zero(n))
                norm = image(v, m).norm_sq()
                assert norm <= 1 and (norm == 1) == divides(k, m)
    report.ok = True


def test_criterion_2_characterisation(report):
    report(2, "S_phi passes recurrence and intertwining; V' e_m = e_{m/k} fails both, located", budget=10.0)
    for k, n in CONFIGS:
        for phi in samples(k, n, "char"):
            s = slant_hankel(phi, k)
            windows = witness_windows(phi, k)
            rows, cols = windows[0]
            full = matrix_window(s, rows, cols)
            verdict = is_slant_hankel_window(full, k)
            assert verdict.status == "pass" and not verdict.violations
            assert window_verdict(s, windows, k).ok
            assert check_intertwining(s, k)
            with injected("v-sign"):
                bad_window = window_verdict(s, windows, k)
                bad_inter = check_intertwining(s, k)
            assert bad_window.status == "fail" and bad_window.violations[0].location
            assert not bad_inter and bad_inter.violations[0].location
    report.ok = True


def test_criterion_3_product_formula(report):
    report(3, "M_phi S_psi = S_{phi(z^-k) psi} on residue boxes, 25 pairs per (k,n)", budget=10.0)
    for k, n in CONFIGS:
        phis, psis = samples(k, n, "prod-phi"), samples(k, n, "prod-psi")
        for phi, psi in zip(phis, psis):
            lhs = compose(multiplication(phi), slant_hankel(psi, k))
            rhs = slant_hankel(sym_mul(substitute_neg_k(phi, k), psi), k)
            box, complete = auto_box(lhs, rhs)
            assert complete and equal_on_box(lhs, rhs, box)
    report.ok = True


def test_criterion_4_commutator(report):
    report(4, "commutator equals V^2 M_sigma; S_phi, S_psi commute iff sigma = 0", budget=10.0)
    for k, n in CONFIGS:
        phis, psis = samples(k, n, "comm-phi"), samples(k, n, "comm-psi")
        for phi, psi in zip(phis, psis):
            assert commutator_reduction_check(phi, psi, k)
            sigma_zero = commutator_symbol(phi, psi, k).is_zero()
            assert operators_commute(phi, psi, k).equal == sigma_zero
            assert not sigma_zero or phi == psi  # random pairs are generically non-commuting
        for phi in phis[:5]:
            for c in (Scalar(1), Scalar(6), Scalar(-2, 1)):
                psi = phi.scaled(c)
                assert commutator_symbol(phi, psi, k).is_zero()
                assert operators_commute(phi, psi, k)
    report.ok = True


def test_criterion_5_product_vanishing(report):
    report(5, "symbol_zero <=> operator_zero on constructed and random pairs")
    for k, n in CONFIGS:
        zero = LaurentSymbol.zero(n)
        phis, psis = samples(k, n, "van-phi"), samples(k, n, "van-psi")
        pairs = list(zip(phis, psis)) + [(zero, psis[0]), (phis[0], zero), (zero, zero)]
        for phi, psi in pairs:
            res = product_vanishing_check(phi, psi, k)
            assert res.symbol_zero == res.operator_zero
            assert res.symbol_zero == (phi.is_zero() or psi.is_zero())
    report.ok = True


def _family(phi, k):
    """Results of the seven 'iff phi = 0' checks, True meaning the zero-symbol behaviour."""
    n = phi.dim
    s = slant_hankel(phi, k)
    windows = witness_windows(phi, k) if not phi.is_zero() else [(cube(-1, 1, n), cube(-k - 1, 1, n))]
    s1 = slant_hankel(constant(1, n), k) @ s
    center = tuple(-x for x in max(phi.support())) if not phi.is_zero() else (0,) * n
    s1_box = Box(tuple(c - 1 for c in center), tuple(c + 1 for c in center))
    return {
        "T3.2": window_verdict(OperatorWord(n, (SlantV(k, n),)) @ s, windows, k).status != "fail",
        "T3.4": window_verdict(adjoint(s), windows, k).status != "fail",
        "T3.5": hyponormality_witness(phi, k) is None,
        "corollary": idempotence_witness(phi, k) is None,
        "T-S1": all(image(s1, m).is_zero() for m in s1_box),
        "T-inj": injectivity_check(phi, k) and s1_product_check(phi, k),
        "T-iso": isometry_defect(phi, k).defect_found,
    }


def test_criterion_6_iff_zero_family(report):
    report(6, "'iff phi = 0' family: zero passes everything, every nonzero phi yields a witness", budget=20.0)
    for k, n in CONFIGS:
        zero_results = _family(LaurentSymbol.zero(n), k)
        assert all(zero_results.values()), zero_results
        for phi in samples(k, n, "family"):
            res = _family(phi, k)
            witnesses = {key: not val for key, val in res.items() if key not in ("T-inj", "T-iso")}
            assert all(witnesses.values()), (phi, res)
            assert res["T-inj"] and res["T-iso"]
    report.ok = True


def test_criterion_7_reductions(report):
    report(7, "V (S_phi M_{z^t})* = M_chi for t in 1..k^2-1, V^2 (S_phi S_psi)* = M_Lambda, "
              "S S* = M_{V(|phi|^2)}", budget=20.0)
    for k, n in CONFIGS:
        phis, psis = samples(k, n, "red-phi"), samples(k, n, "red-psi")
        shifts = [(t,) * n for t in range(1, k * k)] + [
            tuple(t * x for x in unit(j, n)) for t in range(1, k * k) for j in range(2, n + 1)
        ]
        for phi, psi in zip(phis, psis):
            for t in shifts:
                assert chi_reduction(phi, t, k)
            assert lambda_reduction(phi, psi, k)
            assert ss_adjoint_identity(phi, k)
    report.ok = True


def test_criterion_8_mutants(report):
    report(8, f"each of {len(MUTANTS)} engine mutants fails at least one suite tag")
    assert len(MUTANTS) >= 5
    caught = {}
    for mutant in sorted(MUTANTS):
        reports = run_suite(SuiteConfig(k=2, n=2, seed=0, cases=10, mutant=mutant))
        caught[mutant] = [r.tag for r in reports if r.verdict == "fail"]
    assert all(caught.values()), caught
    clean = run_suite(SuiteConfig(k=2, n=2, seed=0, cases=10))
    assert all(r.verdict == "pass" for r in clean)
    report.ok = True


def test_criterion_9_determinism(report):
    report(9, "identical seeds give byte-identical JSON reports")
    for cfg in (SuiteConfig(k=2, n=1, seed=3, cases=8), SuiteConfig(k=3, n=2, seed=3, cases=4)):
        first = report_json(cfg, run_suite(cfg)).encode()
        second = report_json(cfg, run_suite(cfg)).encode()
        assert first == second
    report.ok = True
