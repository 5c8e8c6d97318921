"""Numeric backend: matrix-tuple sampling, quadratic and middle-matrix
evaluation, and eigenvalue tests.

Floats live only here.  Random tuples have i.i.d. uniform [-1, 1] entries
with no symmetry imposed, and every sampler takes an explicit seed so runs
replay exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from .errors import NotSymmetric, WrongBidegree
from .freealg import MatrixTuple, NcPoly, evaluate
from .mmr import MiddleMatrix


@dataclass(frozen=True)
class SamplePolicy:
    """Sampling plan for positivity and witness searches."""

    sizes: tuple[int, ...]
    samples_per_size: int = 200
    tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if not self.sizes:
            raise ValueError("sample policy needs at least one size")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def default_policy(hessian_degree: int, seed: int = 0) -> SamplePolicy:
    """Witness-search default: sizes 1..max(3, ceil(d/2)+1), 200 samples each."""
    n_max = max(3, ceil(hessian_degree / 2) + 1)
    return SamplePolicy(tuple(range(1, n_max + 1)), 200, 1e-8, seed)


def identity_test_size(g: int, degree: int, paranoid: bool = False) -> int:
    """Matrix size at which a nonzero polynomial of the given degree is
    expected not to vanish at generic tuples.

    The default ``degree + 1`` suffices for generic evaluation; the paranoid
    variant returns the finite-dimension bound sum_{j=0}^{2d} (2g)^j that is
    provably sufficient.
    """
    if paranoid:
        return sum((2 * g) ** j for j in range(2 * degree + 1))
    return degree + 1


def random_tuple(g: int, n: int, rng: np.random.Generator) -> MatrixTuple:
    return MatrixTuple(rng.uniform(-1.0, 1.0, (g, n, n)))


def eval_quadratic(q: NcPoly, X: MatrixTuple, H: MatrixTuple) -> np.ndarray:
    """Evaluate a hessian-shaped quadratic (one h and one h' per term)."""
    for word in q.terms:
        hs = sum(1 for c in word if c & 2 and not c & 1)
        hts = sum(1 for c in word if c & 2 and c & 1)
        if (hs, hts) != (1, 1):
            raise WrongBidegree(
                "eval_quadratic expects bidegree (1,1) in the direction letters")
    if q.is_zero():
        return np.zeros((X.n, X.n))
    return evaluate(q, X, H)


def eval_middle_matrix(M: MiddleMatrix, X: MatrixTuple) -> np.ndarray:
    """Blockwise evaluation: an (N*n) x (N*n) real symmetric matrix."""
    size = M.size
    n = X.n
    out = np.zeros((size * n, size * n))
    for i in range(size):
        for j in range(size):
            entry = M.entries[i][j]
            if not entry.is_zero():
                out[i * n:(i + 1) * n, j * n:(j + 1) * n] = evaluate(entry, X)
    return out


def symmetrize(A: np.ndarray) -> np.ndarray:
    return 0.5 * (A + A.T)


def min_eigenvalue(A: np.ndarray) -> float:
    """Smallest eigenvalue of a symmetric matrix (dense eigensolve)."""
    A = np.asarray(A, dtype=float)
    scale = max(1.0, float(np.max(np.abs(A))) if A.size else 1.0)
    if float(np.max(np.abs(A - A.T))) > 1e-12 * scale:
        raise NotSymmetric("min_eigenvalue expects a symmetric matrix")
    return float(np.linalg.eigvalsh(A)[0])


def quadratic_min_eigenvalue(q: NcPoly, X: MatrixTuple, H: MatrixTuple) -> float:
    """Min eigenvalue of the symmetrized evaluation of q at (X, H)."""
    return min_eigenvalue(symmetrize(eval_quadratic(q, X, H)))
