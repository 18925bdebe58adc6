"""Connective K-theory classes of vexillary degeneracy loci, three ways.

The oracle path sums over flagged set-valued tableaux; the two determinant
paths build Jacobi-Trudi style matrices out of Segre coefficients extracted
from a generating series in u.  All three agree exactly as polynomials in
x, b and the deformation parameter B, which the test suite exploits as its
main correctness check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .perms import (FlaggingSet, NotVexillaryError, Partition, Permutation,
                    canonical_flagging, is_flagging_set, is_vexillary, length,
                    shape)
from .poly import (BETA, B_, Polynomial, USeries, X, const, one, space_of,
                   determinant, zero)

__all__ = [
    "GrothConfig",
    "SetValuedTableau",
    "TruncationError",
    "DET_VARIANTS",
    "oplus",
    "segre_coeff",
    "enumerate_fsvt",
    "groth_tableau",
    "det_entry",
    "groth_det",
    "groth_det_stable",
    "specialize",
    "binomial",
    "clear_caches",
]

DET_VARIANTS = ("det1", "det2")

_BETAVAR = (BETA, 0)


class TruncationError(ArithmeticError):
    """The requested truncation degree was too small for a stable result."""


@dataclass(frozen=True)
class GrothConfig:
    """Variable bounds and truncation degree for the determinant path.

    ``nx``/``nb`` bound how many x/b variables may appear; ``trunc`` is the
    truncation degree of the quotient ring the computation runs in.
    """
    nx: int
    nb: int
    trunc: int

    def __post_init__(self):
        if self.nx < 0 or self.nb < 0 or self.trunc < 0:
            raise ValueError("GrothConfig wants nonnegative bounds")


def oplus(a: Polynomial, bb: Polynomial) -> Polynomial:
    """Formal sum a + b + B*a*b (first Chern class of a tensor product)."""
    return a + bb + Polynomial.variable(_BETAVAR) * a * bb


# -- Segre coefficient series -------------------------------------------------

@lru_cache(maxsize=None)
def _factor_series(p: int, q: int, trunc: int) -> USeries:
    """The u-expansion of prod_i (1+B x_i)/(1 - x_i u) * prod_j (1 + b_j(B+u)),
    exact on [0, trunc] in the truncation-degree quotient."""
    bvar = Polynomial.variable(_BETAVAR, trunc)
    series = USeries.of_const(const(1, trunc))
    for i in range(1, p + 1):
        xi = Polynomial.variable((X, i), trunc)
        unit_plus = const(1, trunc) + bvar * xi
        coeffs = {}
        power = unit_plus
        for nu in range(0, trunc + 1):
            if power.is_zero():
                break
            coeffs[nu] = power
            power = power * xi
        series = series * USeries.exact(coeffs, lo=0, hi=trunc)
    for j in range(1, q + 1):
        bj = Polynomial.variable((B_, j), trunc)
        series = series * USeries.exact({0: const(1, trunc) + bvar * bj, 1: bj})
    # Coefficients above the truncation degree vanish in the quotient (the
    # u-exponent is a lower bound for the truncation degree), so the window
    # can be clamped.
    hi = min(series.hi, trunc)
    return USeries({e: c for e, c in series.coeffs.items() if e <= hi},
                   0, hi, exact_below=True)


def segre_coeff(p: int, q: int, mexp: int, cfg: GrothConfig) -> Polynomial:
    """Coefficient of u^mexp in the degree-graded Segre series for p
    x-variables against q b-variables.

    The geometric prefactor 1/(1+B/u) is folded in exactly: the result is
    sum_k (-B)^k [u^(mexp+k)] of the polynomial factors, a finite sum in
    the truncated quotient.

    >>> str(segre_coeff(0, 0, -1, GrothConfig(0, 0, 3)))
    '-B'
    >>> str(segre_coeff(1, 0, 1, GrothConfig(1, 0, 3)))
    'x1'
    """
    if p > cfg.nx or q > cfg.nb:
        raise ValueError(f"series bounds ({p},{q}) exceed config "
                         f"({cfg.nx},{cfg.nb})")
    series = _factor_series(p, q, cfg.trunc)
    total = zero()
    sign_beta = -Polynomial.variable(_BETAVAR, cfg.trunc)
    scale = const(1, cfg.trunc)
    for k in range(0, series.hi - mexp + 1):
        if mexp + k >= 0:
            coeff = series.coeffs.get(mexp + k)
            if coeff is not None:
                total = total + scale * coeff
        scale = scale * sign_beta
        if scale.is_zero():
            break
    if __debug__ and not total.is_zero():
        assert total.homogeneous_degree() == mexp, \
            f"Segre coefficient not homogeneous of degree {mexp}"
    return total


# -- flagged set-valued tableaux ----------------------------------------------

@dataclass(frozen=True)
class SetValuedTableau:
    """A filling of a partition shape by nonempty sets of positive ints.

    Rows weakly increase (max of a cell <= min of its right neighbour),
    columns strictly increase (max above < min below), and every entry in
    row r is at most ``flag[r-1]``.
    """
    shape: Partition
    rows: tuple[tuple[frozenset[int], ...], ...]
    flag: tuple[int, ...]

    def size(self) -> int:
        """Total number of entries, counted across all cells."""
        return sum(len(cell) for row in self.rows for cell in row)

    def is_valid(self) -> bool:
        lam = self.shape.parts
        if len(self.rows) != len(lam):
            return False
        for r, row in enumerate(self.rows):
            if len(row) != lam[r]:
                return False
            for c, cell in enumerate(row):
                if not cell or min(cell) < 1:
                    return False
                if max(cell) > self.flag[r]:
                    return False
                if c > 0 and max(row[c - 1]) > min(cell):
                    return False
                if r > 0 and c < lam[r - 1] and \
                        max(self.rows[r - 1][c]) >= min(cell):
                    return False
        return True


def _cell_candidates(lo: int, hi: int) -> list[frozenset[int]]:
    """Nonempty subsets of {lo..hi} in shortlex order (size, then lex)."""
    values = range(lo, hi + 1)
    out = []
    for size in range(1, hi - lo + 2):
        out.extend(frozenset(c) for c in itertools.combinations(values, size))
    return out


def enumerate_fsvt(lam: Partition, flag: Sequence[int]) -> Iterator[SetValuedTableau]:
    """Stream all flagged set-valued tableaux of the given shape, exactly
    once each, in row-major / shortlex order.

    >>> lams = Partition((1,))
    >>> [sorted(t.rows[0][0]) for t in enumerate_fsvt(lams, (2,))]
    [[1], [2], [1, 2]]
    """
    parts = [p for p in lam.parts if p]
    if len(flag) < len(parts):
        raise ValueError("flag shorter than the shape")
    cells = [(r, c) for r, p in enumerate(parts) for c in range(p)]
    filling: list[list[frozenset[int] | None]] = [[None] * p for p in parts]

    def fill(k: int) -> Iterator[SetValuedTableau]:
        if k == len(cells):
            yield SetValuedTableau(
                Partition(tuple(parts)),
                tuple(tuple(row) for row in filling),
                tuple(flag[:len(parts)]))
            return
        r, c = cells[k]
        lo = 1
        if c > 0:
            lo = max(lo, max(filling[r][c - 1]))
        if r > 0:
            lo = max(lo, max(filling[r - 1][c]) + 1)
        hi = flag[r]
        if lo > hi:
            return
        for cand in _cell_candidates(lo, hi):
            filling[r][c] = cand
            yield from fill(k + 1)
        filling[r][c] = None

    return fill(0)


@lru_cache(maxsize=None)
def _tableau_factor(v: int, k: int) -> Polynomial:
    return oplus(Polynomial.variable((X, v)), Polynomial.variable((B_, k)))


@lru_cache(maxsize=None)
def groth_tableau(w: Permutation) -> Polynomial:
    """The tableau-sum class of a vexillary permutation: the signed sum
    over flagged set-valued tableaux of products of x (+) b factors, one
    per entry.  This path is independent of the determinant formulas and
    serves as the oracle for them.

    >>> str(groth_tableau(Permutation((2, 1))))
    'x1 + b1 + B*x1*b1'
    """
    if not is_vexillary(w):
        raise NotVexillaryError(f"{w} contains a 2143 pattern")
    lam = shape(w)
    flags = canonical_flagging(w).row_flags()
    parts = [p for p in lam.parts if p]
    if not parts:
        return one()

    # One working space up front keeps every product on the fast path.
    max_b = max(flags[r] + parts[r] - (r + 1) for r in range(len(parts)))
    sp = space_of([(X, i) for i in range(1, max(flags) + 1)]
                  + [(B_, j) for j in range(1, max(max_b, 1) + 1)]
                  + [_BETAVAR])
    cells = [(r, c) for r, p in enumerate(parts) for c in range(p)]

    # Per cell: (candidate set, its min, weighted product of its factors).
    # Every entry beyond the first in a cell carries one power of B; at
    # B = -1 this is the classical (-1)^(extra entries) sign, and it is the
    # only weighting compatible with the grading (each extra factor has
    # degree +1, each B degree -1).
    bvar = Polynomial.variable(_BETAVAR).in_space(sp)
    options: list[list[tuple[frozenset[int], int, Polynomial]]] = []
    for r, c in cells:
        opts = []
        for cand in _cell_candidates(r + 1, flags[r]):
            prod = one().in_space(sp)
            for v in sorted(cand):
                prod = prod * _tableau_factor(v, v + (c + 1) - (r + 1)).in_space(sp)
            for _ in range(len(cand) - 1):
                prod = prod * bvar
            opts.append((cand, min(cand), prod))
        options.append(opts)

    total = zero().in_space(sp)
    maxes: list[list[int]] = [[0] * p for p in parts]

    def fill(k: int, running: Polynomial):
        nonlocal total
        if k == len(cells):
            total = total + running
            return
        r, c = cells[k]
        lo = 1
        if c > 0:
            lo = max(lo, maxes[r][c - 1])
        if r > 0:
            lo = max(lo, maxes[r - 1][c] + 1)
        for cand, cmin, prod in options[k]:
            if cmin < lo:
                continue
            maxes[r][c] = max(cand)
            fill(k + 1, running * prod)

    fill(0, one().in_space(sp))
    if __debug__:
        assert total.is_integral()
        assert total.homogeneous_degree() == length(w)
    return total


# -- determinant formulas ------------------------------------------------------

def binomial(a: int, s: int) -> int:
    """Generalized binomial a(a-1)...(a-s+1)/s!, exact for any integer a.

    >>> [binomial(-1, s) for s in range(4)]
    [1, -1, 1, -1]
    """
    if s < 0:
        return 0
    if a >= 0:
        return math.comb(a, s)
    return (-1) ** (s & 1) * math.comb(-a + s - 1, s)


@lru_cache(maxsize=None)
def _segre_pool(p: int, q: int, mexp: int, trunc: int) -> Polynomial:
    return segre_coeff(p, q, mexp, GrothConfig(p, q, trunc))


def det_entry(i: int, j: int, variant: str, flagging: FlaggingSet,
              lam: Partition, cfg: GrothConfig) -> Polynomial:
    """Entry (i, j) of the determinant formula: the B-binomial sum of Segre
    coefficients at index lam_i + j - i + s.  ``variant`` selects the
    binomial's upper argument: i - d for "det1", i - j for "det2".  The sum
    is finite in the quotient because B^s times the (m+s)-th coefficient
    has truncation degree at least m+s.
    """
    if variant not in DET_VARIANTS:
        raise ValueError(f"unknown determinant variant {variant!r}")
    d = flagging.d
    if not (1 <= i <= d and 1 <= j <= d):
        raise ValueError(f"entry position ({i},{j}) outside 1..{d}")
    p, q = flagging.boxes[i - 1]
    mexp = lam.part(i) + j - i
    upper = i - d if variant == "det1" else i - j
    total = zero()
    bvar = Polynomial.variable(_BETAVAR, cfg.trunc)
    beta_pow = const(1, cfg.trunc)
    smax = cfg.trunc - mexp
    for s in range(0, max(smax, 0) + 1):
        coeff = binomial(upper, s)
        if coeff:
            g = _segre_pool(p, q, mexp + s, cfg.trunc)
            if not g.is_zero():
                total = total + coeff * beta_pow * g
        if s < smax:
            beta_pow = beta_pow * bvar
    return total


def groth_det(w: Permutation, flagging: FlaggingSet | None = None,
              variant: str = "det1", trunc: int | None = None) -> Polynomial:
    """The degeneracy-locus class of a vexillary permutation as a d x d
    determinant of Segre-coefficient sums.

    With ``trunc=None`` the truncation degree is taken from the tableau
    oracle, which makes the result exact (the class has no monomials above
    that degree, and truncation is a ring quotient).  With an explicit
    ``trunc`` the result is the image of the class in the quotient; use
    `groth_det_stable` to detect a too-small choice.
    """
    if not is_vexillary(w):
        raise NotVexillaryError(f"{w} contains a 2143 pattern")
    if flagging is None:
        flagging = canonical_flagging(w)
    elif not is_flagging_set(w, flagging.boxes):
        raise ValueError(f"{flagging} is not a flagging set for {w}")
    if trunc is None:
        trunc = groth_tableau(w).xbt_degree()
    lam = shape(w)
    d = flagging.d
    cfg = GrothConfig(max((box.p for box in flagging.boxes), default=0),
                      max((box.q for box in flagging.boxes), default=0),
                      trunc)
    matrix = [[det_entry(i, j, variant, flagging, lam, cfg)
               for j in range(1, d + 1)] for i in range(1, d + 1)]
    result = determinant(matrix)
    if __debug__ and not result.is_zero():
        assert result.homogeneous_degree() == length(w)
    return result


def groth_det_stable(w: Permutation, flagging: FlaggingSet | None,
                     variant: str, trunc: int) -> Polynomial:
    """`groth_det` at an explicit truncation degree, recomputed at trunc+1;
    a difference means the truncation clipped the class, which raises."""
    lo = groth_det(w, flagging, variant, trunc)
    hi = groth_det(w, flagging, variant, trunc + 1)
    if lo != hi:
        raise TruncationError(
            f"truncation degree {trunc} is too small for {w}: "
            f"results at {trunc} and {trunc + 1} differ")
    return lo


def specialize(p: Polynomial, beta_value: int) -> Polynomial:
    """Send the deformation parameter B to 0 (Chow ring) or -1
    (Grothendieck ring)."""
    if beta_value not in (0, -1):
        raise ValueError("beta specializes to 0 or -1 only")
    return p.substitute(_BETAVAR, beta_value)


def clear_caches() -> None:
    """Drop the memoized Segre series and tableau sums (bounds memory
    across long sweeps; the small combinatorial caches are kept)."""
    _factor_series.cache_clear()
    _segre_pool.cache_clear()
    groth_tableau.cache_clear()
