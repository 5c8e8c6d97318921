"""Acceptance suite.

One test per criterion, each printing a PASS line (run with ``pytest -v -s``
to see them).  The shared corpus is 100 seeded constructive instances

    p = sum d_i f_i' f_i + sum e_j k_j k_j' + F + F'

with g cycling over {1, 2, 3}, analytic pieces of degree <= 3, at most 3
summands per family, rational coefficients, and at least one summand of
degree >= 2 (so every instance owns a wed class with several members).
"""

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from ncplush.calculus import complex_hessian
from ncplush.classify import decide_plush, verify_decomposition
from ncplush.freealg import (
    NcPoly,
    evaluate,
    is_antihereditary_word,
    is_hereditary_word,
    parse_poly,
)
from ncplush.ldlt import LdltFactorization, ldlt_factor
from ncplush.mmr import block_view, build_mmr, check_degree_bound, expand_mmr
from ncplush.numeval import (
    eval_middle_matrix,
    min_eigenvalue,
    quadratic_min_eigenvalue,
    random_tuple,
    symmetrize,
)
from ncplush.wed import is_complex_hessian, levi_class

from conftest import build_corpus, mixed_second_difference

CORPUS_SEED = 73911
CORPUS_SIZE = 100
TOL = 1e-8


@pytest.fixture(scope="module")
def corpus():
    return build_corpus(seed=CORPUS_SEED, count=CORPUS_SIZE)


@pytest.fixture(scope="module")
def certified(corpus):
    """decide_plush over the corpus, with per-instance wall time."""
    results = []
    for inst in corpus:
        start = time.perf_counter()
        verdict = decide_plush(inst["p"])
        elapsed = time.perf_counter() - start
        results.append((inst, verdict, elapsed))
    return results


@pytest.fixture(scope="module")
def refutation_family():
    """x'xx'x plus 20 seeded symmetric mixed cubic perturbations."""
    base = parse_poly("x1'*x1*x1'*x1")
    rng = random.Random(CORPUS_SEED + 1)
    family = [base]
    while len(family) < 21:
        word = tuple(rng.choice([0, 1]) for _ in range(3))
        if len(set(word)) < 2:
            continue  # need a mixed word
        bump = NcPoly.monomial(1, word, Fraction(1, 10))
        family.append(base + bump + bump.T)
    return family


def test_acceptance_1_constructive_roundtrip(certified):
    times = []
    for inst, verdict, elapsed in certified:
        assert verdict.is_plush, f"instance not certified: {inst['p']}"
        assert verify_decomposition(inst["p"], verdict.decomposition)
        times.append(elapsed)
    mean = sum(times) / len(times)
    assert max(times) < 1.0, f"slowest decision {max(times):.3f}s exceeds 1s"
    print(f"\nACCEPTANCE 1 PASS: 100/100 certified and re-expanded exactly "
          f"(mean {mean * 1000:.1f} ms, max {max(times) * 1000:.1f} ms)")


def test_acceptance_2_hessian_recognition(corpus):
    flips = 0
    for inst in corpus:
        q = complex_hessian(inst["p"])
        ok, witness = is_complex_hessian(q)
        assert ok, f"hessian not recognized, witness {witness}"
        multi = next(w for w in sorted(q.terms) if len(levi_class(w)) >= 2)
        trimmed = NcPoly(q.nvars, {w: c for w, c in q.terms.items() if w != multi})
        ok_after, _ = is_complex_hessian(trimmed)
        assert not ok_after
        flips += 1
    assert flips == CORPUS_SIZE
    print(f"\nACCEPTANCE 2 PASS: {flips}/100 recognized, and single-member "
          "deletion flips recognition every time")


def test_acceptance_3_mmr_identity(corpus):
    for inst in corpus:
        q = complex_hessian(inst["p"])
        border, middle = build_mmr(q)
        assert expand_mmr(border, middle) == q
        assert check_degree_bound(border, q.degree())
    print("\nACCEPTANCE 3 PASS: V'MV re-expands exactly on 100/100, border "
          "degrees within floor(d/2)")


def test_acceptance_4_block_structure(corpus):
    for inst in corpus:
        q = complex_hessian(inst["p"])
        assert q.degree() % 2 == 0
        border, middle = build_mmr(q)
        assert not border.family_indices("B")
        assert not border.family_indices("Bt")
        blocks = block_view(middle, border)

        def vanishes(block):
            return all(entry.is_zero() for row in block for entry in row)

        assert vanishes(blocks.q2) and vanishes(blocks.q4)
        assert vanishes(blocks.q6) and vanishes(blocks.q8)
        for row in blocks.q1:
            for entry in row:
                assert all(is_hereditary_word(w) for w in entry.terms)
        for row in blocks.q5:
            for entry in row:
                assert all(is_antihereditary_word(w) for w in entry.terms)
    print("\nACCEPTANCE 4 PASS: mixed blocks vanish, Q1 hereditary, "
          "Q5 antihereditary, hessian degree even on 100/100")


def test_acceptance_5_ldlt_exactness(corpus):
    factored = 0
    for inst in corpus:
        q = complex_hessian(inst["p"])
        border, middle = build_mmr(q)
        blocks = block_view(middle, border)
        for block in (blocks.q1, blocks.q5):
            if not block:
                continue
            fac = ldlt_factor(block)
            assert isinstance(fac, LdltFactorization), "obstruction on plush input"
            permuted = [[block[i][j] for j in fac.perm] for i in fac.perm]
            assert permuted == fac.reconstruct()
            for value, flag in zip(fac.diag_values(), fac.constant):
                assert flag and value is not None and value >= 0
            factored += 1
    print(f"\nACCEPTANCE 5 PASS: {factored} block factorizations, all exact "
          "with constant nonnegative rational D and polynomial L")


def test_acceptance_6_refutation(refutation_family):
    for p in refutation_family:
        verdict = decide_plush(p)
        assert verdict.kind == "not_plush", f"expected refutation for {p}"
        cex = verdict.counterexample
        assert cex.size <= 3
        assert cex.eigenvalue <= -TOL
        q = complex_hessian(p)
        replay = quadratic_min_eigenvalue(q, cex.X, cex.H)
        assert replay <= -TOL
    print(f"\nACCEPTANCE 6 PASS: {len(refutation_family)}/21 refuted with "
          "verified witnesses at n <= 3")


def test_acceptance_7_positivity_transfer(corpus, refutation_family):
    rng = np.random.default_rng(CORPUS_SEED + 2)
    plush_cases = [inst["p"] for inst in corpus
                   if not complex_hessian(inst["p"]).is_zero()][:15]
    cases = [(p, True) for p in plush_cases]
    cases += [(p, False) for p in refutation_family[:5]]
    assert len(cases) == 20
    for p, expect_psd in cases:
        q = complex_hessian(p)
        _, middle = build_mmr(q)
        q_min = np.inf
        m_min = np.inf
        for n in (1, 2, 3):
            for _ in range(50):
                X = random_tuple(p.nvars, n, rng)
                H = random_tuple(p.nvars, n, rng)
                q_min = min(q_min, quadratic_min_eigenvalue(q, X, H))
                m_min = min(m_min, min_eigenvalue(
                    symmetrize(eval_middle_matrix(middle, X))))
        assert (q_min >= -TOL) == (m_min >= -TOL) == expect_psd
    print("\nACCEPTANCE 7 PASS: 20/20 instances with full sign agreement "
          "between hessian and middle-matrix sampling")


def test_acceptance_8_finite_difference_crosscheck(corpus):
    rng = np.random.default_rng(CORPUS_SEED + 3)
    for inst in corpus:
        p = inst["p"]
        q = complex_hessian(p)
        for _ in range(10):
            X = random_tuple(p.nvars, 3, rng)
            H = random_tuple(p.nvars, 3, rng)
            stencil = mixed_second_difference(p, X, H)
            exact = (evaluate(q, X, H) if not q.is_zero()
                     else np.zeros((3, 3)))
            rel = np.max(np.abs(stencil - exact)) / max(1.0, np.max(np.abs(exact)))
            assert rel <= 1e-5
    print("\nACCEPTANCE 8 PASS: hessian matches the mixed second difference "
          "at 10 points on 100/100 instances (rel err <= 1e-5)")


def test_acceptance_9_size_independent_certificate(certified):
    rng = np.random.default_rng(CORPUS_SEED + 4)
    for inst, verdict, _ in certified:
        assert verdict.is_plush
        q = complex_hessian(inst["p"])
        if q.is_zero():
            continue
        for n in range(1, 6):
            for _ in range(8):
                X = random_tuple(inst["g"], n, rng)
                H = random_tuple(inst["g"], n, rng)
                assert quadratic_min_eigenvalue(q, X, H) >= -TOL
    print("\nACCEPTANCE 9 PASS: certified instances stay PSD at every size "
          "n in 1..5 (constant-D certificate is size independent)")
