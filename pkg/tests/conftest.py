"""Shared random generators for the test suite.

Everything is driven by explicit `random.Random` seeds so failures replay
exactly.  The "constructive corpus" built here is the sum-of-squares shape
whose membership the classifier must certify:

    p = sum_i d_i * f_i' * f_i  +  sum_j e_j * k_j * k_j'  +  F + F'

with all f_i, k_j, F analytic and d_i, e_j positive rationals.
"""

import random
from fractions import Fraction

import numpy as np
import pytest

from ncplush.freealg import NcPoly, lh, lht, lx, lxt

COEFF_POOL = [
    Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
    Fraction(1, 2), Fraction(-1, 2), Fraction(3, 2), Fraction(1, 3),
]
WEIGHT_POOL = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3), Fraction(3, 2)]


def random_word(rng: random.Random, g: int, length: int, alphabet: str = "x xt") -> tuple:
    """A random word over the requested letter families ('x', 'xt', 'h', 'ht')."""
    makers = {"x": lx, "xt": lxt, "h": lh, "ht": lht}
    fams = alphabet.split()
    return tuple(makers[rng.choice(fams)](rng.randint(1, g)) for _ in range(length))


def random_poly(rng: random.Random, g: int, max_deg: int = 3, max_terms: int = 4,
                alphabet: str = "x xt") -> NcPoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        w = random_word(rng, g, rng.randint(0, max_deg), alphabet)
        terms[w] = terms.get(w, 0) + rng.choice(COEFF_POOL)
    return NcPoly(g, terms)


def random_analytic(rng: random.Random, g: int, max_deg: int = 3, max_terms: int = 3,
                    min_deg: int = 0, force_deg: int | None = None) -> NcPoly:
    """A nonzero analytic polynomial; `force_deg` pins the degree of one term."""
    terms = {}
    degrees = [rng.randint(min_deg, max_deg) for _ in range(rng.randint(1, max_terms))]
    if force_deg is not None:
        degrees[0] = force_deg
    for d in degrees:
        w = random_word(rng, g, d, "x")
        terms[w] = terms.get(w, 0) + rng.choice(COEFF_POOL)
    p = NcPoly(g, terms)
    if p.is_zero():  # coefficient pool collision; retry
        return random_analytic(rng, g, max_deg, max_terms, min_deg, force_deg)
    return p


def plush_instance(rng: random.Random, g: int, max_deg: int = 3, max_summands: int = 3,
                   ensure_deg2: bool = True) -> dict:
    """One constructive-corpus instance with its generating pieces."""
    n_f = rng.randint(0, max_summands)
    n_k = rng.randint(0 if n_f else 1, max_summands)
    fs = [random_analytic(rng, g, max_deg) for _ in range(n_f)]
    ks = [random_analytic(rng, g, max_deg) for _ in range(n_k)]
    if ensure_deg2 and not any(q.degree() >= 2 for q in fs + ks):
        # regenerate one summand with a degree >= 2 term, keeping counts
        target = fs if fs else ks
        target[0] = random_analytic(rng, g, max_deg,
                                    force_deg=rng.randint(2, max_deg))
    weights_f = [rng.choice(WEIGHT_POOL) for _ in fs]
    weights_k = [rng.choice(WEIGHT_POOL) for _ in ks]
    F = random_analytic(rng, g, max_deg) if rng.random() < 0.7 else NcPoly.zero(g)
    p = NcPoly.zero(g)
    for d, f in zip(weights_f, fs):
        p = p + d * (f.T * f)
    for e, k in zip(weights_k, ks):
        p = p + e * (k * k.T)
    p = p + F + F.T
    return {"p": p, "weights_f": weights_f, "fs": fs,
            "weights_k": weights_k, "ks": ks, "F": F, "g": g}


def build_corpus(seed: int, count: int, gs=(1, 2, 3)) -> list:
    rng = random.Random(seed)
    return [plush_instance(rng, gs[i % len(gs)]) for i in range(count)]


@pytest.fixture(scope="session")
def small_corpus():
    """A 30-instance constructive corpus for module-level property tests."""
    return build_corpus(seed=20240811, count=30)


def bivariate_eval(p: NcPoly, X, H, t: float, s: float) -> np.ndarray:
    """Evaluate p with x_j -> X_j + t*H_j and x_j' -> X_j' + s*H_j',
    keeping the transposed letters independent of the untransposed ones.
    Independent of the library evaluator on purpose: it is the oracle."""
    n = X.n
    xmats = [X.entries[j] + t * H.entries[j] for j in range(p.nvars)]
    ymats = [X.entries[j].T + s * H.entries[j].T for j in range(p.nvars)]
    out = np.zeros((n, n))
    for word, coeff in p.terms.items():
        acc = np.eye(n)
        for c in word:
            assert not c & 2, "bivariate oracle expects direction-free input"
            acc = acc @ (ymats[c >> 2] if c & 1 else xmats[c >> 2])
        out += float(coeff) * acc
    return out


def mixed_second_difference(p: NcPoly, X, H, delta: float = 1e-3) -> np.ndarray:
    """Central 4-point stencil for the mixed second derivative in (t, s)."""
    return (bivariate_eval(p, X, H, delta, delta)
            - bivariate_eval(p, X, H, delta, -delta)
            - bivariate_eval(p, X, H, -delta, delta)
            + bivariate_eval(p, X, H, -delta, -delta)) / (4 * delta * delta)
