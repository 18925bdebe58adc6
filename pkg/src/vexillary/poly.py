"""Exact sparse multivariate polynomials over graded variables.

Variables come in five classes with a fixed global order

    x1 < x2 < ... < b1 < b2 < ... < B < m1 < m2 < ... < t1 < t2 < ...

where ``B`` is the K-theoretic deformation parameter.  Coefficients are
exact rationals (Python ints wherever possible, ``fractions.Fraction``
otherwise).

Two gradings matter:

* the *truncation degree* of a monomial counts only x/b/t exponents.
  Monomials of truncation degree > D span an ideal (B and the m's never
  lower x/b/t degree), so cutting at D is a genuine ring quotient and all
  arithmetic below stays exact in that quotient ring.
* the *homogeneous degree* weights x/b/t by +1, B by -1 and m_i by -i.
  Most classes computed downstream are homogeneous; `homogeneous_degree`
  checks this.

Monomials are packed into single ints: one 8-bit field per exponent, a
12-bit m-weight field, and a 12-bit truncation-degree field on top.  The
top placement makes ``sorted(terms)`` degree-major, which lets products
break out of the inner loop as soon as the truncation cap is exceeded.

`USeries` holds truncated Laurent expansions in an auxiliary variable u
with polynomial coefficients and an explicit exactness window; requesting
a coefficient outside the window raises instead of silently returning 0.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Var",
    "VarSpace",
    "Polynomial",
    "USeries",
    "PolynomialError",
    "WindowError",
    "x",
    "b",
    "beta",
    "m",
    "t",
    "const",
    "zero",
    "one",
    "space_of",
    "formal_bar",
    "determinant",
    "useries_mul",
    "useries_coeff",
    "poly_to_json",
    "poly_from_json",
]


class PolynomialError(ValueError):
    pass


class WindowError(PolynomialError):
    """A u-series coefficient was requested outside its exactness window."""


# Variable classes, in global order.
X, B_, BETA, M, T = 0, 1, 2, 3, 4
_CLASS_PREFIX = {X: "x", B_: "b", BETA: "B", M: "m", T: "t"}
# x/b/t exponents count toward the truncation degree.
_GRADED = frozenset((X, B_, T))

Var = tuple  # (class_code, index); beta is (BETA, 0)

_EXP_BITS = 8
_EXP_MASK = (1 << _EXP_BITS) - 1
_FIELD_BITS = 12
_FIELD_MASK = (1 << _FIELD_BITS) - 1


def var_name(v: Var) -> str:
    code, idx = v
    return "B" if code == BETA else f"{_CLASS_PREFIX[code]}{idx}"


_VAR_RE = re.compile(r"^([xbmt])([1-9][0-9]*)$")
_CODE_OF_PREFIX = {"x": X, "b": B_, "m": M, "t": T}


def var_from_name(name: str) -> Var:
    if name == "B" or name == "beta":
        return (BETA, 0)
    mt = _VAR_RE.match(name)
    if not mt:
        raise PolynomialError(f"unknown variable name {name!r}")
    return (_CODE_OF_PREFIX[mt.group(1)], int(mt.group(2)))


class VarSpace:
    """An interned, ordered set of variables with a fixed packing layout."""

    __slots__ = ("vars", "n", "pos", "shifts", "mw_shift", "deg_shift")

    def __init__(self, variables: tuple[Var, ...]):
        self.vars = variables
        self.n = len(variables)
        self.pos = {v: i for i, v in enumerate(variables)}
        self.shifts = tuple(_EXP_BITS * i for i in range(self.n))
        self.mw_shift = _EXP_BITS * self.n
        self.deg_shift = self.mw_shift + _FIELD_BITS

    def encode(self, exps: Mapping[Var, int]) -> int:
        mono = 0
        deg = 0
        mw = 0
        for v, e in exps.items():
            if e < 0:
                raise PolynomialError(f"negative exponent on {var_name(v)}")
            if e == 0:
                continue
            if e > _EXP_MASK:
                raise PolynomialError(f"exponent {e} too large to pack")
            mono |= e << self.shifts[self.pos[v]]
            code = v[0]
            if code in _GRADED:
                deg += e
            elif code == M:
                mw += v[1] * e
        if deg > _FIELD_MASK or mw > _FIELD_MASK:
            raise PolynomialError("monomial degree too large to pack")
        return mono | (mw << self.mw_shift) | (deg << self.deg_shift)

    def decode(self, mono: int) -> tuple[int, ...]:
        return tuple((mono >> s) & _EXP_MASK for s in self.shifts)

    def deg(self, mono: int) -> int:
        return mono >> self.deg_shift

    def mweight(self, mono: int) -> int:
        return (mono >> self.mw_shift) & _FIELD_MASK

    def __repr__(self):
        return f"VarSpace({', '.join(var_name(v) for v in self.vars)})"


_SPACES: dict[tuple[Var, ...], VarSpace] = {}


def space_of(variables: Iterable[Var]) -> VarSpace:
    key = tuple(sorted(set(variables)))
    sp = _SPACES.get(key)
    if sp is None:
        sp = _SPACES[key] = VarSpace(key)
    return sp


_EMPTY = space_of(())


def _realign(terms: dict, old: VarSpace, new: VarSpace) -> dict:
    if old is new:
        return terms
    out: dict[int, object] = {}
    slots = [new.shifts[new.pos[v]] for v in old.vars]
    hi_shift = old.mw_shift
    mw_shift, deg_shift = new.mw_shift, new.deg_shift
    for mono, c in terms.items():
        k = ((mono >> hi_shift) & _FIELD_MASK) << mw_shift
        k |= (mono >> old.deg_shift) << deg_shift
        for s_old, s_new in zip(old.shifts, slots):
            k |= ((mono >> s_old) & _EXP_MASK) << s_new
        prev = out.get(k)
        out[k] = c if prev is None else prev + c
    return out


def _min_cap(a: int | None, bcap: int | None) -> int | None:
    if a is None:
        return bcap
    if bcap is None:
        return a
    return min(a, bcap)


class Polynomial:
    """Immutable sparse polynomial; do not mutate ``terms``.

    ``trunc`` is the truncation degree D of the quotient ring the value
    lives in (None = no truncation).  ``mcap`` optionally bounds the total
    m-weight the same way (used by the cobordism layer, where terms whose
    m-weight exceeds the homogeneity budget can never contribute).
    """

    __slots__ = ("space", "terms", "trunc", "mcap")

    def __init__(self, space: VarSpace, terms: dict, trunc: int | None = None,
                 mcap: int | None = None, _clean: bool = False):
        self.space = space
        self.trunc = trunc
        self.mcap = mcap
        if _clean:
            self.terms = terms
        else:
            self.terms = self._filtered(space, terms, trunc, mcap)

    @staticmethod
    def _filtered(space, terms, trunc, mcap) -> dict:
        out = {}
        ds, ms = space.deg_shift, space.mw_shift
        for mono, c in terms.items():
            if not c:
                continue
            if trunc is not None and (mono >> ds) > trunc:
                continue
            if mcap is not None and ((mono >> ms) & _FIELD_MASK) > mcap:
                continue
            out[mono] = c
        return out

    # -- constructors ---------------------------------------------------

    @staticmethod
    def constant(c, trunc: int | None = None, mcap: int | None = None) -> "Polynomial":
        terms = {} if not c else {0: c}
        return Polynomial(_EMPTY, terms, trunc, mcap, _clean=not c)

    @staticmethod
    def variable(v: Var, trunc: int | None = None, mcap: int | None = None) -> "Polynomial":
        sp = space_of((v,))
        return Polynomial(sp, {sp.encode({v: 1}): 1}, trunc, mcap)

    # -- inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def used_vars(self) -> tuple[Var, ...]:
        if not self.terms:
            return ()
        sp = self.space
        used = 0
        for mono in self.terms:
            used |= mono
        return tuple(v for i, v in enumerate(sp.vars)
                     if (used >> sp.shifts[i]) & _EXP_MASK)

    def xbt_degree(self) -> int:
        """Largest truncation degree among the stored monomials (0 if zero)."""
        ds = self.space.deg_shift
        return max((mono >> ds for mono in self.terms), default=0)

    def constant_term(self):
        return self.terms.get(0, 0)

    def homogeneous_degree(self) -> int | None:
        """The common homogeneous degree of all monomials, or None.

        Weighting: +1 for every x/b/t exponent, -1 per power of B, -i per
        power of m_i.
        """
        sp = self.space
        beta_slot = sp.pos.get((BETA, 0))
        deg = None
        for mono in self.terms:
            g = sp.deg(mono) - sp.mweight(mono)
            if beta_slot is not None:
                g -= (mono >> sp.shifts[beta_slot]) & _EXP_MASK
            if deg is None:
                deg = g
            elif deg != g:
                return None
        return 0 if deg is None else deg

    def is_integral(self) -> bool:
        return all(not isinstance(c, Fraction) or c.denominator == 1
                   for c in self.terms.values())

    def coefficient(self, exps: Mapping[Var, int]):
        """Coefficient of the monomial with the given exponents."""
        sp = space_of(tuple(sorted(set(self.space.vars) | set(exps))))
        terms = _realign(self.terms, self.space, sp)
        return terms.get(sp.encode(exps), 0)

    # -- alignment ------------------------------------------------------

    def _aligned(self, other: "Polynomial"):
        sa, sb = self.space, other.space
        if sa is sb:
            return sa, self.terms, other.terms
        sp = space_of(sa.vars + sb.vars)
        return sp, _realign(self.terms, sa, sp), _realign(other.terms, sb, sp)

    def in_space(self, sp: VarSpace) -> "Polynomial":
        if sp is self.space:
            return self
        return Polynomial(sp, _realign(self.terms, self.space, sp),
                          self.trunc, self.mcap, _clean=True)

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = Polynomial.constant(other)
        sp, ta, tb = self._aligned(other)
        trunc = _min_cap(self.trunc, other.trunc)
        mcap = _min_cap(self.mcap, other.mcap)
        if len(ta) < len(tb):
            ta, tb = tb, ta
        out = dict(ta)
        for mono, c in tb.items():
            prev = out.get(mono)
            if prev is None:
                out[mono] = c
            else:
                s = prev + c
                if s:
                    out[mono] = s
                else:
                    del out[mono]
        return Polynomial(sp, out, trunc, mcap)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.space, {k: -c for k, c in self.terms.items()},
                          self.trunc, self.mcap, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, (Polynomial, int, Fraction)):
            return NotImplemented
        return self + (-other if isinstance(other, Polynomial) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            if not other:
                return Polynomial(self.space, {}, self.trunc, self.mcap, _clean=True)
            return Polynomial(self.space,
                              {k: c * other for k, c in self.terms.items()},
                              self.trunc, self.mcap, _clean=True)
        sp, ta, tb = self._aligned(other)
        trunc = _min_cap(self.trunc, other.trunc)
        mcap = _min_cap(self.mcap, other.mcap)
        terms = _mul_terms(ta, tb, sp, trunc, mcap)
        return Polynomial(sp, terms, trunc, mcap, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise PolynomialError("polynomial powers must be nonnegative ints")
        result = Polynomial.constant(1, self.trunc, self.mcap)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        _, ta, tb = self._aligned(other)
        return ta == tb

    __hash__ = None  # mutable dict inside; equality is mathematical

    # -- quotient housekeeping -------------------------------------------

    def truncated(self, trunc: int | None, mcap: int | None = None) -> "Polynomial":
        """Image in the quotient with the given caps (caps only tighten)."""
        trunc = _min_cap(self.trunc, trunc)
        mcap = _min_cap(self.mcap, mcap)
        return Polynomial(self.space, self.terms, trunc, mcap)

    def with_caps(self, trunc: int | None, mcap: int | None = None) -> "Polynomial":
        """Same terms, new cap metadata (checked against the terms)."""
        return Polynomial(self.space, self.terms, trunc, mcap)

    # -- substitution -----------------------------------------------------

    def substitute(self, v: Var, value) -> "Polynomial":
        """Ring homomorphism sending variable ``v`` to ``value``.

        ``value`` may be a Polynomial, int or Fraction.  The input is never
        mutated; the result keeps this polynomial's caps.
        """
        if not isinstance(value, Polynomial):
            value = Polynomial.constant(value)
        sp = self.space
        slot = sp.pos.get(v)
        if slot is None:
            return self
        shift = sp.shifts[slot]
        code, idx = v
        out = Polynomial(sp, {}, self.trunc, self.mcap, _clean=True)
        powers: dict[int, Polynomial] = {}
        parts: dict[int, dict] = {}
        for mono, c in self.terms.items():
            e = (mono >> shift) & _EXP_MASK
            rest = mono - (e << shift)
            if e and code in _GRADED:
                rest -= e << sp.deg_shift
            elif e and code == M:
                rest -= (idx * e) << sp.mw_shift
            parts.setdefault(e, {})[rest] = c
        for e, terms in sorted(parts.items()):
            piece = Polynomial(sp, terms, self.trunc, self.mcap, _clean=True)
            if e:
                pw = powers.get(e)
                if pw is None:
                    pw = powers[e] = value.truncated(self.trunc, self.mcap) ** e
                piece = piece * pw
            out = out + piece
        return out

    def coefficients_of(self, v: Var) -> dict[int, "Polynomial"]:
        """Split into {exponent of v: coefficient polynomial (v removed)}."""
        sp = self.space
        slot = sp.pos.get(v)
        if slot is None:
            return {} if self.is_zero() else {0: self}
        shift = sp.shifts[slot]
        code, idx = v
        parts: dict[int, dict] = {}
        for mono, c in self.terms.items():
            e = (mono >> shift) & _EXP_MASK
            rest = mono - (e << shift)
            if e and code in _GRADED:
                rest -= e << sp.deg_shift
            elif e and code == M:
                rest -= (idx * e) << sp.mw_shift
            parts.setdefault(e, {})[rest] = c
        return {e: Polynomial(sp, terms, self.trunc, self.mcap, _clean=True)
                for e, terms in parts.items()}

    def coefficients_of_vars(self, variables: Sequence[Var]) -> dict[tuple, "Polynomial"]:
        """Split into {exponent vector over ``variables``: coefficient}."""
        sp = self.space
        slots = [(sp.pos.get(v), v) for v in variables]
        parts: dict[tuple, dict] = {}
        for mono, c in self.terms.items():
            rest = mono
            key = []
            for slot, v in slots:
                if slot is None:
                    key.append(0)
                    continue
                shift = sp.shifts[slot]
                e = (mono >> shift) & _EXP_MASK
                key.append(e)
                if e:
                    rest -= e << shift
                    code, idx = v
                    if code in _GRADED:
                        rest -= e << sp.deg_shift
                    elif code == M:
                        rest -= (idx * e) << sp.mw_shift
            parts.setdefault(tuple(key), {})[rest] = c
        return {k: Polynomial(sp, terms, self.trunc, self.mcap, _clean=True)
                for k, terms in parts.items()}

    # -- rendering --------------------------------------------------------

    def sorted_terms(self) -> list:
        """Terms in canonical graded-lex order (degree ascending, then
        exponent vectors descending along the global variable order).

        Returns [(((var, exp), ...), coeff), ...] with zero exponents
        dropped.
        """
        sp = self.space
        rows = []
        for mono, c in self.terms.items():
            exps = sp.decode(mono)
            rows.append((sum(exps), tuple(-e for e in exps), exps, c))
        rows.sort(key=lambda r: (r[0], r[1]))
        out = []
        for _, _, exps, c in rows:
            mono = tuple((v, e) for v, e in zip(sp.vars, exps) if e)
            out.append((mono, c))
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for mono, c in self.sorted_terms():
            # B leads a monomial in text output; other variables keep the
            # global order.
            shown = sorted(mono, key=lambda ve: (ve[0][0] != BETA, ve[0]))
            factors = [var_name(v) if e == 1 else f"{var_name(v)}^{e}"
                       for v, e in shown]
            mag = abs(c)
            neg = c < 0
            if not factors:
                body = _fmt_coeff(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_fmt_coeff(mag)] + factors)
            if not chunks:
                chunks.append(("-" if neg else "") + body)
            else:
                chunks.append(("- " if neg else "+ ") + body)
        return " ".join(chunks)

    def __repr__(self):
        s = str(self)
        return f"Polynomial({s if len(s) <= 60 else s[:57] + '...'})"


def _fmt_coeff(c) -> str:
    if isinstance(c, Fraction) and c.denominator == 1:
        c = c.numerator
    return str(c)


def _mul_terms(ta: dict, tb: dict, sp: VarSpace, trunc: int | None,
               mcap: int | None) -> dict:
    if not ta or not tb:
        return {}
    if len(ta) > len(tb):
        ta, tb = tb, ta
    out: dict[int, object] = {}
    get = out.get
    bitems = sorted(tb.items())
    if trunc is None:
        for ma, ca in ta.items():
            for mb, cb in bitems:
                k = ma + mb
                c = get(k)
                prod = ca * cb
                out[k] = prod if c is None else c + prod
    else:
        limit = (trunc + 1) << sp.deg_shift
        for ma, ca in sorted(ta.items()):
            mlim = limit - ma
            if bitems[0][0] >= mlim:
                break
            for mb, cb in bitems:
                if mb >= mlim:
                    break
                k = ma + mb
                c = get(k)
                prod = ca * cb
                out[k] = prod if c is None else c + prod
    if mcap is not None:
        ms, mask = sp.mw_shift, _FIELD_MASK
        return {k: c for k, c in out.items()
                if c and ((k >> ms) & mask) <= mcap}
    return {k: c for k, c in out.items() if c}


# -- leaf constructors ----------------------------------------------------

def x(i: int) -> Polynomial:
    return Polynomial.variable((X, i))


def b(i: int) -> Polynomial:
    return Polynomial.variable((B_, i))


def beta() -> Polynomial:
    return Polynomial.variable((BETA, 0))


def m(i: int) -> Polynomial:
    return Polynomial.variable((M, i))


def t(i: int) -> Polynomial:
    return Polynomial.variable((T, i))


def const(c, trunc: int | None = None) -> Polynomial:
    return Polynomial.constant(c, trunc)


def zero() -> Polynomial:
    return Polynomial.constant(0)


def one() -> Polynomial:
    return Polynomial.constant(1)


# -- derived operations ----------------------------------------------------

def formal_bar(v: Polynomial, trunc: int) -> Polynomial:
    """The involution v -> -v/(1+B*v), expanded and truncated at ``trunc``.

    ``v`` must have zero constant term (otherwise the expansion is not a
    polynomial in the quotient).
    """
    if v.constant_term():
        raise PolynomialError("formal_bar requires a zero constant term")
    v = v.truncated(trunc)
    factor = Polynomial.variable((BETA, 0), trunc) * v * -1
    term = -v
    total = term
    while True:
        term = term * factor
        if term.is_zero():
            return total
        total = total + term


def determinant(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Division-free determinant by first-column cofactor expansion with
    memoized minors.  The empty matrix has determinant 1.
    """
    d = len(matrix)
    for row in matrix:
        if len(row) != d:
            raise PolynomialError("determinant requires a square matrix")
    if d == 0:
        return one()
    memo: dict[tuple[int, ...], Polynomial] = {}

    def minor(rows: tuple[int, ...]) -> Polynomial:
        if not rows:
            return one()
        got = memo.get(rows)
        if got is not None:
            return got
        col = d - len(rows)
        total = None
        for k, r in enumerate(rows):
            entry = matrix[r][col]
            if entry.is_zero():
                continue
            sub = minor(rows[:k] + rows[k + 1:])
            piece = entry * sub
            if k & 1:
                piece = -piece
            total = piece if total is None else total + piece
        if total is None:
            total = zero()
        memo[rows] = total
        return total

    return minor(tuple(range(d)))


# -- truncated Laurent series in u -----------------------------------------

_ZERO = zero()


class USeries:
    """A truncated Laurent series in ``u`` with Polynomial coefficients.

    Invariants: the support is contained in (-inf, hi]; the stored
    coefficients are exact for every exponent in [lo, hi]; if
    ``exact_below`` is set the coefficients below lo are exactly zero as
    well (the series is then fully known).  Products track the exactness
    window so that a coefficient is never reported from a region that
    untracked tails could have polluted.
    """

    __slots__ = ("coeffs", "lo", "hi", "exact_below")

    def __init__(self, coeffs: Mapping[int, Polynomial], lo: int, hi: int,
                 exact_below: bool = False):
        if lo > hi:
            raise WindowError(f"empty u-window [{lo}, {hi}]")
        self.coeffs = {e: p for e, p in coeffs.items()
                       if lo <= e <= hi and not p.is_zero()}
        self.lo = lo
        self.hi = hi
        self.exact_below = exact_below

    @staticmethod
    def exact(coeffs: Mapping[int, Polynomial], lo: int | None = None,
              hi: int | None = None) -> "USeries":
        """A fully known series (zero outside the given exponents)."""
        keys = [e for e, p in coeffs.items() if not p.is_zero()]
        lo = min(keys, default=0) if lo is None else lo
        hi = max(keys, default=0) if hi is None else hi
        return USeries(coeffs, lo, hi, exact_below=True)

    @staticmethod
    def of_const(p: Polynomial) -> "USeries":
        return USeries.exact({0: p})

    def coeff(self, e: int) -> Polynomial:
        if e > self.hi or (e < self.lo and not self.exact_below):
            raise WindowError(
                f"coefficient of u^{e} outside tracked window "
                f"[{'-inf' if self.exact_below else self.lo}, {self.hi}]")
        return self.coeffs.get(e, _ZERO)

    def __mul__(self, other: "USeries") -> "USeries":
        if not isinstance(other, USeries):
            return NotImplemented
        hi = self.hi + other.hi
        los = []
        if not self.exact_below:
            los.append(self.lo + other.hi)
        if not other.exact_below:
            los.append(other.lo + self.hi)
        eb = not los
        lo = max(los) if los else self.lo + other.lo
        out: dict[int, Polynomial] = {}
        for ea, pa in self.coeffs.items():
            for eb_, pb in other.coeffs.items():
                e = ea + eb_
                if e < lo or e > hi:
                    continue
                prod = pa * pb
                prev = out.get(e)
                out[e] = prod if prev is None else prev + prod
        return USeries(out, lo, hi, exact_below=eb)

    def __add__(self, other: "USeries") -> "USeries":
        if not isinstance(other, USeries):
            return NotImplemented
        hi = max(self.hi, other.hi)
        los = []
        if not self.exact_below:
            los.append(self.lo)
        if not other.exact_below:
            los.append(other.lo)
        eb = not los
        lo = max(los) if los else min(self.lo, other.lo)
        out = dict(self.coeffs)
        for e, p in other.coeffs.items():
            prev = out.get(e)
            out[e] = p if prev is None else prev + p
        return USeries(out, lo, hi, exact_below=eb)

    def scaled(self, p: Polynomial) -> "USeries":
        return USeries({e: c * p for e, c in self.coeffs.items()},
                       self.lo, self.hi, self.exact_below)

    def shifted(self, k: int) -> "USeries":
        return USeries({e + k: c for e, c in self.coeffs.items()},
                       self.lo + k, self.hi + k, self.exact_below)

    def restricted(self, lo: int) -> "USeries":
        """Forget coefficients below ``lo`` (window shrinks; stays sound)."""
        if lo <= self.lo:
            return self
        return USeries(self.coeffs, lo, self.hi, exact_below=False)

    def __repr__(self):
        return (f"USeries(window=[{self.lo},{self.hi}], "
                f"exact_below={self.exact_below}, {len(self.coeffs)} coeffs)")


def useries_mul(a: USeries, bseries: USeries) -> USeries:
    return a * bseries


def useries_coeff(s: USeries, mexp: int) -> Polynomial:
    return s.coeff(mexp)


def useries_reciprocal(s: USeries, depth: int, trunc: int | None) -> USeries:
    """Invert a series supported in (-inf, 0] whose u^0 coefficient is
    1 + (positive truncation degree), exactly on the window [-depth, 0].

    Dropping sub-window terms during the iteration is sound because every
    support exponent is <= 0: tails below the window can never climb back.
    """
    if s.hi != 0:
        raise WindowError("reciprocal requires support in nonpositive powers")
    c0 = s.coeff(0)
    if c0.constant_term() != 1:
        raise PolynomialError("reciprocal requires unit constant coefficient")
    eps_coeffs = {e: -p for e, p in s.coeffs.items()}
    unit = one() if trunc is None else const(1, trunc)
    if 0 in eps_coeffs:
        eps_coeffs[0] = eps_coeffs[0] + unit
    else:
        eps_coeffs[0] = unit
    eps = USeries(eps_coeffs, -depth, 0, exact_below=False)
    total = USeries({0: unit}, -depth, 0, exact_below=False)
    term = USeries({0: unit}, -depth, 0, exact_below=False)
    limit = depth + (trunc if trunc is not None else 0) + 1
    for _ in range(limit):
        term = (term * eps).restricted(-depth)
        if not term.coeffs:
            break
        total = total + term
    else:
        if term.coeffs:
            raise PolynomialError("u-series reciprocal did not terminate")
    return USeries(total.coeffs, -depth, 0, exact_below=False)


# -- canonical JSON ---------------------------------------------------------

def poly_to_json(p: Polynomial) -> dict:
    """Canonical JSON form: used variable names in global order plus the
    term list (canonical order, exponent rows parallel to ``vars``)."""
    used = p.used_vars()
    idx = {v: i for i, v in enumerate(used)}
    terms = []
    for mono, c in p.sorted_terms():
        row = [0] * len(used)
        for v, e in mono:
            row[idx[v]] = e
        terms.append({"c": _fmt_coeff(c), "e": row})
    return {"vars": [var_name(v) for v in used], "terms": terms}


def poly_from_json(obj) -> Polynomial:
    if isinstance(obj, str):
        obj = json.loads(obj)
    variables = [var_from_name(s) for s in obj["vars"]]
    if list(variables) != sorted(set(variables)):
        raise PolynomialError("JSON vars must be distinct and in global order")
    sp = space_of(variables)
    terms: dict[int, object] = {}
    for item in obj["terms"]:
        frac = Fraction(item["c"])
        c = frac.numerator if frac.denominator == 1 else frac
        exps = item["e"]
        if len(exps) != len(variables):
            raise PolynomialError("exponent row length mismatch")
        mono = sp.encode(dict(zip(variables, exps)))
        if mono in terms:
            raise PolynomialError("duplicate monomial in JSON terms")
        terms[mono] = c
    return Polynomial(sp, terms)
