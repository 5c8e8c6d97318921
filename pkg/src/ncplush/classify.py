"""The plurisubharmonicity decision pipeline.

``decide_plush`` takes a symmetric polynomial p and either

* certifies it by producing the canonical decomposition

      p = sum_i d_i f_i' f_i + sum_j e_j k_j k_j' + F + F'

  with positive rational weights and analytic f_i, k_j, F, re-expanded and
  checked exactly; or

* refutes it with a concrete matrix-tuple counterexample on which the
  complex hessian has a verified negative eigenvalue; or

* reports inconclusive when a refutation is mathematically forced but the
  sampling budget found no witness (never silently labelled a refutation).

The certificate route: build the middle-matrix representation of the complex
hessian, screen the structural necessary conditions (even degree, no mixed
border strata, hereditary/antihereditary blocks, border degree bound), then
LDL'-factor the analytic and antianalytic blocks.  Constant nonnegative
pivots make q a weighted sum of squares of border contractions; each
contraction is a directional derivative, and its antiderivative is the
corresponding f_i (or k_j after transposing back to analytic form).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .calculus import complex_hessian
from .errors import InternalInconsistency, MixedLetters, NotSymmetric
from .freealg import (
    MatrixTuple,
    NcPoly,
    Word,
    classify_shape,
    format_word,
    is_analytic_word,
    is_antihereditary_word,
    is_hereditary_word,
    letter_index,
)
from .ldlt import LdltFactorization, Obstruction, ldlt_factor
from .mmr import BorderVector, MiddleMatrix, block_view, build_mmr, check_degree_bound
from .numeval import (
    SamplePolicy,
    default_policy,
    quadratic_min_eigenvalue,
    random_tuple,
)
from .wed import antiderivative, is_directional_derivative

# refutation paths
MIXED_BLOCK = "mixed_block"
HEREDITARY_VIOLATION = "hereditary_violation"
ODD_DEGREE = "odd_degree"
DEGREE_BOUND = "degree_bound"
OBSTRUCTION = "obstruction"
NUMERIC_SAMPLE = "numeric_sample"


@dataclass(frozen=True)
class Violation:
    """A failed structural necessary condition (sound refutation signal)."""

    kind: str
    detail: str
    border_word: Optional[Word] = None


@dataclass(frozen=True)
class Counterexample:
    """Matrix tuples on which the hessian evaluation is indefinite."""

    X: MatrixTuple
    H: MatrixTuple
    eigenvalue: float
    path: str

    @property
    def size(self) -> int:
        return self.X.n


@dataclass(frozen=True)
class Decomposition:
    """The weighted canonical form; weights stay rational so the
    re-expansion check is exact (unit weights would need square roots)."""

    weights_f: tuple[Fraction, ...]
    fs: tuple[NcPoly, ...]
    weights_k: tuple[Fraction, ...]
    ks: tuple[NcPoly, ...]
    F: NcPoly

    def expand(self) -> NcPoly:
        out = NcPoly.zero(self.F.nvars)
        for d, f in zip(self.weights_f, self.fs):
            out = out + d * (f.T * f)
        for e, k in zip(self.weights_k, self.ks):
            out = out + e * (k * k.T)
        return out + self.F + self.F.T


@dataclass(frozen=True)
class PlushVerdict:
    """Outcome of the decision: exactly one arm is populated."""

    kind: str  # "plush" | "not_plush" | "inconclusive"
    decomposition: Optional[Decomposition] = None
    ldlt_analytic: Optional[LdltFactorization] = None
    ldlt_antianalytic: Optional[LdltFactorization] = None
    counterexample: Optional[Counterexample] = None
    reason: Optional[str] = None

    @property
    def is_plush(self) -> bool:
        return self.kind == "plush"

    def exit_code(self) -> int:
        return {"plush": 0, "not_plush": 2, "inconclusive": 3}[self.kind]

    def report(self) -> str:
        return format_report(self)


def structural_screen(q: NcPoly, border: BorderVector, middle: MiddleMatrix
                      ) -> Optional[Violation]:
    """Check the necessary conditions for positivity of a complex hessian.

    Returns None on pass; any violation soundly implies the polynomial is
    not plush on any nc open set (a numeric witness is still searched for).
    """
    degree = q.degree()
    if degree % 2 == 1:
        return Violation(ODD_DEGREE, f"hessian degree {degree} is odd")
    mixed = border.family_indices("B") + border.family_indices("Bt")
    if mixed:
        word = border.entries[min(mixed)]
        return Violation(
            MIXED_BLOCK,
            f"mixed border monomial {format_word(word)} forces a nonzero "
            "coupling outside the analytic/antianalytic blocks",
            border_word=word)
    blocks = block_view(middle, border)
    for row in blocks.q1:
        for entry in row:
            for w in entry.terms:
                if not is_hereditary_word(w):
                    return Violation(
                        HEREDITARY_VIOLATION,
                        f"analytic-block entry term {format_word(w)} is not hereditary")
    for row in blocks.q5:
        for entry in row:
            for w in entry.terms:
                if not is_antihereditary_word(w):
                    return Violation(
                        HEREDITARY_VIOLATION,
                        f"antianalytic-block entry term {format_word(w)} "
                        "is not antihereditary")
    if not check_degree_bound(border, degree):
        return Violation(
            DEGREE_BOUND,
            f"border degree {border.max_degree()} exceeds {degree // 2}")
    return None


def find_witness(q: NcPoly, hint: Optional[Violation] = None,
                 policy: Optional[SamplePolicy] = None) -> Optional[Counterexample]:
    """Random search for (X, H) with a negative hessian eigenvalue.

    Entries are i.i.d. uniform on [-1, 1] over the policy's sizes; for
    mixed-block hints the direction tuple is first seeded one-hot from the
    offending border monomial's direction letter.  Returns None when the
    budget is exhausted (the caller reports inconclusive).
    """
    if policy is None:
        policy = default_policy(q.degree())
    rng = policy.rng()
    g = q.nvars
    path = hint.kind if hint is not None else NUMERIC_SAMPLE
    hinted_index = None
    if hint is not None and hint.border_word:
        hinted_index = letter_index(hint.border_word[0])

    def check(X: MatrixTuple, H: MatrixTuple) -> Optional[Counterexample]:
        value = quadratic_min_eigenvalue(q, X, H)
        if value <= -policy.tol:
            return Counterexample(X, H, value, path)
        return None

    for n in policy.sizes:
        if hinted_index is not None:
            seed_h = [np.zeros((n, n)) for _ in range(g)]
            seed_h[hinted_index - 1] = np.eye(n)
            for _ in range(2):
                hit = check(random_tuple(g, n, rng), MatrixTuple(seed_h))
                if hit:
                    return hit
        for _ in range(policy.samples_per_size):
            hit = check(random_tuple(g, n, rng), random_tuple(g, n, rng))
            if hit:
                return hit
    return None


def _analytic_completion(p_residual: NcPoly) -> NcPoly:
    """Split a symmetric, hessian-free residual as F + F'.

    F collects the nonconstant analytic terms plus half the constant."""
    g = p_residual.nvars
    analytic = p_residual.filter_terms(lambda w: bool(w) and is_analytic_word(w))
    return analytic + NcPoly.const(g, p_residual.constant_term() / 2)


def _extract_column_contraction(fac: LdltFactorization, pivot: int,
                                border_words: list[Word]) -> NcPoly:
    """(L e_pivot)' V over the block's border entries (in permuted order)."""
    g = fac.nvars
    out = NcPoly.zero(g)
    column = fac.column(pivot)
    for r, entry in enumerate(column):
        if not entry.is_zero():
            out = out + entry.T * NcPoly.monomial(g, border_words[fac.perm[r]])
    return out


def decide_plush(p: NcPoly, policy: Optional[SamplePolicy] = None,
                 seed: int = 0) -> PlushVerdict:
    """Decide nc plurisubharmonicity of a symmetric polynomial."""
    if not p.is_symmetric():
        raise NotSymmetric("decide_plush requires p' = p")
    q = complex_hessian(p)
    g = p.nvars

    if q.is_zero():
        F = _analytic_completion(p)
        decomposition = Decomposition((), (), (), (), F)
        _assert_exact(p, decomposition)
        return PlushVerdict("plush", decomposition=decomposition)

    border, middle = build_mmr(q)
    if policy is None:
        policy = default_policy(q.degree(), seed)

    violation = structural_screen(q, border, middle)
    if violation is not None:
        return _refute(q, violation, policy)

    a_idx = border.family_indices("A")
    at_idx = border.family_indices("At")
    blocks = block_view(middle, border)

    fac_a = ldlt_factor(blocks.q1) if a_idx else None
    if isinstance(fac_a, Obstruction):
        return _refute(q, Violation(OBSTRUCTION,
                                    "no constant pivot in the analytic block:\n"
                                    + fac_a.dump()), policy)
    fac_at = ldlt_factor(blocks.q5) if at_idx else None
    if isinstance(fac_at, Obstruction):
        return _refute(q, Violation(OBSTRUCTION,
                                    "no constant pivot in the antianalytic block:\n"
                                    + fac_at.dump()), policy)

    for fac in (fac_a, fac_at):
        if fac and any(v < 0 for v in fac.diag_values()):
            return _refute(q, Violation(
                NUMERIC_SAMPLE, "a negative constant pivot appeared in the "
                "factorized middle matrix"), policy)

    weights_f: list[Fraction] = []
    fs: list[NcPoly] = []
    if fac_a is not None:
        words_a = [border.entries[i] for i in a_idx]
        for pivot, value in enumerate(fac_a.diag_values()):
            if value > 0:
                contraction = _extract_column_contraction(fac_a, pivot, words_a)
                fs.append(_certified_antiderivative(contraction, "analytic"))
                weights_f.append(value)

    weights_k: list[Fraction] = []
    ks: list[NcPoly] = []
    if fac_at is not None:
        words_at = [border.entries[i] for i in at_idx]
        for pivot, value in enumerate(fac_at.diag_values()):
            if value > 0:
                contraction = _extract_column_contraction(fac_at, pivot, words_at)
                ks.append(_certified_antiderivative(contraction, "antianalytic").T)
                weights_k.append(value)

    residual = p
    for d, f in zip(weights_f, fs):
        residual = residual - d * (f.T * f)
    for e, k in zip(weights_k, ks):
        residual = residual - e * (k * k.T)
    F = _analytic_completion(residual)
    if residual - F - F.T != NcPoly.zero(g):
        raise InternalInconsistency(
            "residual after removing certified squares is not of the form F + F'")

    decomposition = Decomposition(tuple(weights_f), tuple(fs),
                                  tuple(weights_k), tuple(ks), F)
    _assert_exact(p, decomposition)
    return PlushVerdict("plush", decomposition=decomposition,
                        ldlt_analytic=fac_a, ldlt_antianalytic=fac_at)


def _certified_antiderivative(contraction: NcPoly, side: str) -> NcPoly:
    """Column contractions of a certified factorization must be directional
    derivatives; a failure here is a pipeline bug, not a math outcome."""
    try:
        ok, witness = is_directional_derivative(contraction)
    except MixedLetters as exc:
        raise InternalInconsistency(
            f"{side} column contraction mixes letter classes: {exc}") from exc
    if not ok:
        raise InternalInconsistency(
            f"{side} column contraction is not a directional derivative; "
            f"witness {format_word(witness) if witness else '()'}")
    return antiderivative(contraction)


def _assert_exact(p: NcPoly, decomposition: Decomposition) -> None:
    if not verify_decomposition(p, decomposition):
        raise InternalInconsistency("certified decomposition failed re-expansion")


def _refute(q: NcPoly, violation: Violation, policy: SamplePolicy) -> PlushVerdict:
    witness = find_witness(q, violation, policy)
    if witness is not None:
        return PlushVerdict("not_plush", counterexample=witness)
    return PlushVerdict(
        "inconclusive",
        reason=f"{violation.kind}: {violation.detail} (refutation is forced, "
               f"but no witness within {policy.samples_per_size} samples per "
               f"size {list(policy.sizes)})")


def verify_decomposition(p: NcPoly, decomposition: Decomposition) -> bool:
    """Exact re-expansion check, plus hessian re-derivation and shape audit."""
    if any(d <= 0 for d in decomposition.weights_f):
        return False
    if any(e <= 0 for e in decomposition.weights_k):
        return False
    for poly in (*decomposition.fs, *decomposition.ks, decomposition.F):
        if not classify_shape(poly).analytic:
            return False
    expansion = decomposition.expand()
    if expansion != p:
        return False
    return complex_hessian(expansion) == complex_hessian(p)


# ---------------------------------------------------------------------------
# reports and JSON
# ---------------------------------------------------------------------------

def _format_float(x: float) -> str:
    return f"{x:.17g}"


def _matrix_lines(name: str, tup: MatrixTuple) -> list[str]:
    lines = []
    for j, mat in enumerate(tup.entries, start=1):
        rows = "; ".join(" ".join(_format_float(v) for v in row) for row in mat)
        lines.append(f"{name}{j} = [{rows}]")
    return lines


def format_report(verdict: PlushVerdict) -> str:
    lines = [f"verdict: {verdict.kind}"]
    if verdict.kind == "plush":
        dec = verdict.decomposition
        for d, f in zip(dec.weights_f, dec.fs):
            lines.append(f"f (weight {d}): {f}")
        for e, k in zip(dec.weights_k, dec.ks):
            lines.append(f"k (weight {e}): {k}")
        lines.append(f"F: {dec.F}")
        if verdict.ldlt_analytic is not None:
            lines.append("ldlt of the analytic block:")
            lines.append(verdict.ldlt_analytic.dump())
        if verdict.ldlt_antianalytic is not None:
            lines.append("ldlt of the antianalytic block:")
            lines.append(verdict.ldlt_antianalytic.dump())
    elif verdict.kind == "not_plush":
        cex = verdict.counterexample
        lines.append(f"path: {cex.path}")
        lines.append(f"size: {cex.size}")
        lines.append(f"eigenvalue: {_format_float(cex.eigenvalue)}")
        lines.extend(_matrix_lines("X", cex.X))
        lines.extend(_matrix_lines("H", cex.H))
    else:
        lines.append(f"reason: {verdict.reason}")
    return "\n".join(lines)


def _ldlt_to_dict(fac: Optional[LdltFactorization]) -> Optional[dict]:
    if fac is None:
        return None
    return {
        "perm": list(fac.perm),
        "diag": [str(d) for d in fac.diag],
        "lower": [[str(e) for e in row] for row in fac.lower],
    }


def _ldlt_from_dict(data: Optional[dict], nvars: int) -> Optional[LdltFactorization]:
    from .freealg import parse_poly

    if data is None:
        return None
    diag = tuple(parse_poly(s, nvars) for s in data["diag"])
    lower = tuple(tuple(parse_poly(s, nvars) for s in row) for row in data["lower"])
    return LdltFactorization(nvars, tuple(data["perm"]), lower, diag,
                             tuple(d.constant_value() is not None for d in diag))


def verdict_to_dict(verdict: PlushVerdict, nvars: int) -> dict:
    out: dict = {"verdict": verdict.kind, "nvars": nvars}
    if verdict.decomposition is not None:
        dec = verdict.decomposition
        out["decomposition"] = {
            "weights_f": [str(d) for d in dec.weights_f],
            "fs": [str(f) for f in dec.fs],
            "weights_k": [str(e) for e in dec.weights_k],
            "ks": [str(k) for k in dec.ks],
            "F": str(dec.F),
        }
    if verdict.ldlt_analytic is not None or verdict.ldlt_antianalytic is not None:
        out["ldlt"] = {
            "analytic": _ldlt_to_dict(verdict.ldlt_analytic),
            "antianalytic": _ldlt_to_dict(verdict.ldlt_antianalytic),
        }
    if verdict.counterexample is not None:
        cex = verdict.counterexample
        out["counterexample"] = {
            "path": cex.path,
            "eigenvalue": cex.eigenvalue,
            "size": cex.size,
            "X": [m.tolist() for m in cex.X.entries],
            "H": [m.tolist() for m in cex.H.entries],
        }
    if verdict.reason is not None:
        out["reason"] = verdict.reason
    return out


def verdict_from_dict(data: dict) -> PlushVerdict:
    from .freealg import parse_poly

    nvars = data["nvars"]
    decomposition = None
    if "decomposition" in data:
        dec = data["decomposition"]
        decomposition = Decomposition(
            tuple(Fraction(s) for s in dec["weights_f"]),
            tuple(parse_poly(s, nvars) for s in dec["fs"]),
            tuple(Fraction(s) for s in dec["weights_k"]),
            tuple(parse_poly(s, nvars) for s in dec["ks"]),
            parse_poly(dec["F"], nvars),
        )
    ldlt_a = ldlt_at = None
    if "ldlt" in data:
        ldlt_a = _ldlt_from_dict(data["ldlt"].get("analytic"), nvars)
        ldlt_at = _ldlt_from_dict(data["ldlt"].get("antianalytic"), nvars)
    counterexample = None
    if "counterexample" in data:
        cex = data["counterexample"]
        counterexample = Counterexample(
            MatrixTuple([np.array(m) for m in cex["X"]]),
            MatrixTuple([np.array(m) for m in cex["H"]]),
            cex["eigenvalue"],
            cex["path"],
        )
    return PlushVerdict(data["verdict"], decomposition=decomposition,
                        ldlt_analytic=ldlt_a, ldlt_antianalytic=ldlt_at,
                        counterexample=counterexample, reason=data.get("reason"))
