"""Degeneracy-locus classes over an arbitrary formal group law.

A law is modelled through a truncated logarithm l(t) = t + sum m_i t^(i+1)
over rational coefficients: the additive law has all m_i = 0, the
multiplicative law has m_i = (-B)^i/(i+1), and the generic law keeps the
m_i as symbols (a rational model of the universal coefficient ring).

From the law we derive the formal inverse chi, the two-variable deformation
factor P(z, x) defined by F(z, chi(x)) = (z - x) P(z, x), the w-classes,
the projective-class series, and relative Segre series; the class of the
resolution attached to a flagging set is the resulting infinite Schur
expansion, evaluated in the truncation-degree quotient where it is finite.
For the multiplicative law everything collapses to the connective K-theory
formulas, which the tests check term by term.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence, Union

from .perms import (FlaggingSet, NotVexillaryError, Permutation,
                    canonical_flagging, enumerate_flaggings, is_flagging_set,
                    is_vexillary, length, shape, vexillary_permutations)
from .poly import (BETA, B_, M, Polynomial, T, USeries, X, const, one,
                   determinant, useries_reciprocal, zero)
from .ktheory import groth_tableau

__all__ = [
    "FormalGroupLaw",
    "CobordismSeries",
    "formal_inverse",
    "fgl_exp_inverse",
    "p_deformation",
    "w_classes",
    "projective_class_series",
    "relative_segre",
    "p_product_coeffs",
    "schur_delta",
    "resolution_class",
    "specialize_log_coeffs",
    "find_flagging_dependence_witness",
]

_BETAVAR = (BETA, 0)
# The bivariate deformation factor lives in two reserved t-slots.
_ZVAR = (T, 1)
_XVAR = (T, 2)

CobordismSeries = Union[Polynomial, USeries]


class FormalGroupLaw:
    """A formal group law represented by its truncated logarithm.

    ``order`` is the number of stored logarithm coefficients; the law is
    exact in any truncation-degree quotient up to order+1 and its
    projective-class series is exact down to u^(-order).
    """

    def __init__(self, mode: str, order: int, log_coeffs: Sequence[Polynomial]):
        if order < 0:
            raise ValueError("logarithm order must be nonnegative")
        self.mode = mode
        self.order = order
        self.log_coeffs = tuple(log_coeffs)
        self._p_cache: dict = {}
        self._chi_cache: dict = {}

    @staticmethod
    def additive(order: int) -> "FormalGroupLaw":
        return FormalGroupLaw("additive", order, [zero()] * order)

    @staticmethod
    def multiplicative(order: int) -> "FormalGroupLaw":
        bvar = Polynomial.variable(_BETAVAR)
        coeffs = [Fraction((-1) ** i, i + 1) * bvar ** i
                  for i in range(1, order + 1)]
        return FormalGroupLaw("multiplicative", order, coeffs)

    @staticmethod
    def generic(order: int) -> "FormalGroupLaw":
        return FormalGroupLaw("generic", order,
                              [Polynomial.variable((M, i))
                               for i in range(1, order + 1)])

    def __repr__(self):
        return f"FormalGroupLaw({self.mode}, order={self.order})"

    # -- logarithm and its inverse ---------------------------------------

    def _log_tail(self, v: Polynomial, trunc: int) -> Polynomial:
        total = zero()
        power = (v * v).truncated(trunc)
        for coeff in self.log_coeffs:
            if power.is_zero():
                break
            if not coeff.is_zero():
                total = total + coeff * power
            power = power * v
        return total

    def log_series(self, v: Polynomial, trunc: int) -> Polynomial:
        """l(v) = v + sum m_i v^(i+1), truncated."""
        v = v.truncated(trunc)
        return v + self._log_tail(v, trunc)

    def exp_series(self, v: Polynomial, trunc: int) -> Polynomial:
        """The w with l(w) = v (inverse of the logarithm), solved order by
        order; requires a zero constant term."""
        if v.constant_term():
            raise ValueError("series inversion needs a zero constant term")
        v = v.truncated(trunc)
        w = v
        for _ in range(trunc + 2):
            nxt = v - self._log_tail(w, trunc)
            if nxt == w:
                return w
            w = nxt
        raise ArithmeticError("logarithm inversion failed to stabilize")

    def chi(self, v: Polynomial, trunc: int) -> Polynomial:
        """The formal inverse: F(v, chi(v)) = 0."""
        return self.exp_series(-self.log_series(v, trunc), trunc)

    def chi_var(self, var, trunc: int, mcap: int | None = None) -> Polynomial:
        key = (var, trunc, mcap)
        got = self._chi_cache.get(key)
        if got is None:
            got = self.chi(Polynomial.variable(var, trunc, mcap), trunc)
            self._chi_cache[key] = got
        return got

    def formal_sum(self, a: Polynomial, bb: Polynomial, trunc: int) -> Polynomial:
        """F(a, b) = exp(log a + log b), truncated."""
        return self.exp_series(self.log_series(a, trunc)
                               + self.log_series(bb, trunc), trunc)


def formal_inverse(fgl: FormalGroupLaw, v: Polynomial, trunc: int) -> Polynomial:
    return fgl.chi(v, trunc)


def fgl_exp_inverse(fgl: FormalGroupLaw, v: Polynomial, trunc: int) -> Polynomial:
    """Apply the inverse of the truncated logarithm to ``v``."""
    return fgl.exp_series(v, trunc)


# -- the deformation factor P(z, x) -----------------------------------------

def p_deformation(fgl: FormalGroupLaw, trunc: int,
                  mcap: int | None = None) -> Polynomial:
    """The unique series P with F(z, chi(x)) = (z - x) P(z, x), as a
    bivariate polynomial in the reserved slots (z, x), exact up to joint
    degree ``trunc``.

    The division is synthetic division in z, computed one degree higher so
    the quotient is exact at ``trunc``; a nonzero remainder would mean the
    law is inconsistent and raises.
    """
    key = (trunc, mcap)
    got = fgl._p_cache.get(key)
    if got is not None:
        return got
    if fgl.order < trunc:
        raise ValueError(
            f"law of order {fgl.order} is too short for truncation {trunc}")
    inner = trunc + 1
    zv = Polynomial.variable(_ZVAR, inner, mcap)
    xv = Polynomial.variable(_XVAR, inner, mcap)
    f_series = fgl.formal_sum(zv, fgl.chi(xv, inner), inner)
    by_z = f_series.coefficients_of(_ZVAR)
    top = max(by_z)
    quot: dict[int, Polynomial] = {}
    carry = zero()
    for j in range(top - 1, -1, -1):
        carry = by_z.get(j + 1, zero()) + xv * carry
        quot[j] = carry
    remainder = by_z.get(0, zero()) + xv * quot.get(0, zero())
    if not remainder.is_zero():
        raise ArithmeticError(
            "division of F(z, chi(x)) by (z - x) left a remainder")
    result = zero()
    zpow = const(1, inner)
    for j in range(0, top):
        piece = quot.get(j, zero())
        if not piece.is_zero():
            result = result + piece * zpow
        zpow = zpow * zv
    result = result.truncated(trunc, mcap)
    if __debug__:
        assert result.coefficient({}) == 1 or not result.terms, \
            "P(0, 0) must be 1"
    fgl._p_cache[key] = result
    return result


def _p_of_uinv(fgl: FormalGroupLaw, root: Polynomial, trunc: int,
               mcap: int | None) -> USeries:
    """P(1/u, root) as a u-series supported in nonpositive powers."""
    slices = p_deformation(fgl, trunc, mcap).coefficients_of(_ZVAR)
    coeffs = {-a: piece.substitute(_XVAR, root)
              for a, piece in slices.items()}
    return USeries.exact(coeffs, lo=min(coeffs, default=0), hi=0)


def w_classes(fgl: FormalGroupLaw, chern_roots: Sequence[Polynomial],
              trunc: int, mcap: int | None = None) -> USeries:
    """prod_q P(1/u, x_q) over the given Chern roots; 1 for an empty list.

    For the multiplicative law this is 1/prod(1 + B x_q); for the additive
    law it is identically 1.
    """
    series = USeries.of_const(const(1, trunc).truncated(trunc, mcap))
    for root in chern_roots:
        series = series * _p_of_uinv(fgl, root, trunc, mcap)
    return series


def projective_class_series(fgl: FormalGroupLaw, trunc: int,
                            mcap: int | None = None) -> USeries:
    """sum_i [P^i] u^(-i) with [P^0] = 1 and [P^i] = (i+1) m_i, the class
    of i-dimensional projective space in logarithm coordinates.  For the
    multiplicative law the coefficients are (-B)^i, recovering the
    geometric prefactor of the K-theory Segre series.
    """
    coeffs = {0: const(1, trunc).truncated(trunc, mcap)}
    for i, mi in enumerate(fgl.log_coeffs, 1):
        piece = ((i + 1) * mi).truncated(trunc, mcap)
        if not piece.is_zero():
            coeffs[-i] = piece
    return USeries(coeffs, -fgl.order, 0, exact_below=True)


def _geometric(root: Polynomial, trunc: int) -> USeries:
    """1/(1 - root*u) in the quotient: sum root^nu u^nu up to trunc."""
    if root.constant_term():
        raise ValueError("geometric expansion needs a zero constant term")
    coeffs = {}
    power = const(1, trunc).truncated(trunc, root.mcap)
    for nu in range(0, trunc + 1):
        if power.is_zero():
            break
        coeffs[nu] = power
        power = power * root
    return USeries.exact(coeffs, lo=0, hi=trunc)


def _segre_series(fgl: FormalGroupLaw, e_roots: Sequence[Polynomial],
                  f_roots: Sequence[Polynomial], kmin: int, trunc: int,
                  mcap: int | None = None) -> USeries:
    """The full relative Segre series, exact on [kmin, hi]."""
    series = projective_class_series(fgl, trunc, mcap)
    for root in f_roots:
        series = series * USeries.exact(
            {0: const(1, trunc).truncated(trunc, mcap), 1: -root})
    series = series * w_classes(fgl, f_roots, trunc, mcap)
    for root in e_roots:
        series = series * _geometric(root, trunc)
    # Everything so far is fully exact, and the u^nu coefficient has
    # truncation degree >= nu, so nothing survives above the truncation;
    # re-tighten the window before dividing by w(E; u).
    series = USeries.exact(series.coeffs)
    if e_roots:
        w_e = w_classes(fgl, e_roots, trunc, mcap)
        depth = max(0, series.hi - kmin)
        series = series * useries_reciprocal(w_e, depth, trunc)
    return series


def relative_segre(fgl: FormalGroupLaw, e_roots: Sequence[Polynomial],
                   f_roots: Sequence[Polynomial], k: int, trunc: int,
                   mcap: int | None = None) -> Polynomial:
    """Coefficient of u^k in the relative Segre series

        P(u) / (c(E-F; -u) w(E-F; u))

    for bundles with the given Chern roots.  Exact in the quotient provided
    the law's order covers trunc + len(f_roots) - k.
    """
    series = _segre_series(fgl, e_roots, f_roots, k, trunc, mcap)
    if k > series.hi:
        return zero()
    return series.coeff(k)


# -- Schur expansion of the resolution class ---------------------------------

def p_product_coeffs(fgl: FormalGroupLaw, d: int, smax: int,
                     mcap: int | None = None) -> dict[tuple[int, ...], Polynomial]:
    """Expansion coefficients a_s of prod_{i<j} P(t_j, t_i) over monomials
    t_1^{s_1}...t_d^{s_d}, for all |s| <= smax.  a_0 = 1."""
    if d < 1:
        raise ValueError("need at least one row")
    if d == 1:
        return {(0,): one().with_caps(None, mcap)}
    unit = const(1, smax).truncated(smax, mcap)
    slices = p_deformation(fgl, smax, mcap).coefficients_of_vars([_ZVAR, _XVAR])
    total = unit
    for i in range(1, d + 1):
        ti = Polynomial.variable((T, i + 2), smax, mcap)
        for j in range(i + 1, d + 1):
            tj = Polynomial.variable((T, j + 2), smax, mcap)
            factor = zero()
            for (a, bexp), piece in slices.items():
                factor = factor + piece * tj ** a * ti ** bexp
            total = total * factor
    tvars = [(T, i + 2) for i in range(1, d + 1)]
    # The extracted coefficients live in B and the m's only; the t-degree
    # cap has done its job and must not constrain later products.
    return {key: piece.with_caps(None, mcap)
            for key, piece in total.coefficients_of_vars(tvars).items()
            if sum(key) <= smax}


def schur_delta(mvec: Sequence[int],
                providers: Sequence[Callable[[int], Polynomial]]) -> Polynomial:
    """det( A^(i)_(m_i + j - i) ) over the given coefficient providers."""
    d = len(mvec)
    if len(providers) != d:
        raise ValueError("one provider per row required")
    matrix = [[providers[i](mvec[i] + (j + 1) - (i + 1)) for j in range(d)]
              for i in range(d)]
    return determinant(matrix)


def resolution_class(w: Permutation, flagging: FlaggingSet | None,
                     fgl: FormalGroupLaw, trunc: int | None = None) -> Polynomial:
    """The class of the resolution attached to a flagging set, as the
    Schur-determinant expansion sum_s a_s det(A^(i) at shape+s), evaluated
    in the truncation quotient (where the sum over s is finite because each
    summand is homogeneous of degree |shape|+|s|).

    Unlike the K-theory class this genuinely depends on the flagging set.
    Terms whose m-weight exceeds trunc - |shape| are pruned throughout: the
    result is homogeneous of degree |shape|, so they could never survive.
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
    if d == 0:
        return one()
    size = lam.size()
    if trunc < size:
        return zero()
    mcap = trunc - size
    needed = trunc + max(d - 1, 0)
    if fgl.order < needed:
        raise ValueError(
            f"law of order {fgl.order} too short: truncation {trunc} with "
            f"{d} rows needs order >= {needed}")

    series: list[USeries] = []
    for i in range(1, d + 1):
        p, q = flagging.boxes[i - 1]
        e_roots = [Polynomial.variable((X, a), trunc, mcap)
                   for a in range(1, p + 1)]
        f_roots = [fgl.chi_var((B_, jj), trunc, mcap)
                   for jj in range(1, q + 1)]
        kmin = lam.part(i) + 1 - i
        series.append(_segre_series(fgl, e_roots, f_roots, kmin, trunc, mcap))

    entries: dict[tuple[int, int], Polynomial] = {}

    def entry(i: int, k: int) -> Polynomial:
        got = entries.get((i, k))
        if got is None:
            s = series[i - 1]
            got = s.coeff(k) if k <= s.hi else zero()
            entries[(i, k)] = got
        return got

    minors: dict[tuple, Polynomial] = {}

    def minor(rows: tuple[int, ...], alphas: tuple[int, ...]) -> Polynomial:
        if not rows:
            return one()
        key = (rows, alphas)
        got = minors.get(key)
        if got is not None:
            return got
        col = d - len(rows) + 1
        total = None
        for idx, r in enumerate(rows):
            e = entry(r, alphas[idx] + col)
            if e.is_zero():
                continue
            piece = e * minor(rows[:idx] + rows[idx + 1:],
                              alphas[:idx] + alphas[idx + 1:])
            if idx & 1:
                piece = -piece
            total = piece if total is None else total + piece
        if total is None:
            total = zero()
        minors[key] = total
        return total

    coeffs = p_product_coeffs(fgl, d, mcap, mcap)
    rows = tuple(range(1, d + 1))
    result = zero()
    for svec in sorted(coeffs):
        alphas = tuple(lam.part(i) + svec[i - 1] - i for i in rows)
        delta = minor(rows, alphas)
        if not delta.is_zero():
            result = result + coeffs[svec] * delta
    if __debug__ and not result.is_zero():
        assert result.homogeneous_degree() == length(w)
    return result


def specialize_log_coeffs(p: Polynomial, fgl: FormalGroupLaw) -> Polynomial:
    """Substitute the law's logarithm coefficients for the symbols m_i
    (sends a generic-law result to the law's own coefficient ring)."""
    for i, coeff in enumerate(fgl.log_coeffs, 1):
        p = p.substitute((M, i), coeff)
    return p


def find_flagging_dependence_witness(n: int = 4, max_trunc: int | None = None):
    """Search S_n for a vexillary permutation with two flagging sets whose
    generic resolution classes differ while the multiplicative
    specializations of both agree.  Returns (w, f1, f2, class1, class2) or
    None; the scan order (one-line lex, then flagging lex) is fixed.
    """
    for w in vexillary_permutations(n):
        d = shape(w).nonzero_length()
        flaggings = enumerate_flaggings(w, d)
        if len(flaggings) < 2:
            continue
        trunc = groth_tableau(w).xbt_degree()
        if max_trunc is not None and trunc > max_trunc:
            continue
        order = trunc + max(d - 1, 0)
        generic = FormalGroupLaw.generic(order)
        multiplicative = FormalGroupLaw.multiplicative(order)
        classes = [resolution_class(w, f, generic, trunc) for f in flaggings]
        for a in range(len(flaggings)):
            for bb in range(a + 1, len(flaggings)):
                if classes[a] != classes[bb]:
                    spec_a = specialize_log_coeffs(classes[a], multiplicative)
                    spec_b = specialize_log_coeffs(classes[bb], multiplicative)
                    if spec_a == spec_b:
                        return (w, flaggings[a], flaggings[bb],
                                classes[a], classes[bb])
    return None
