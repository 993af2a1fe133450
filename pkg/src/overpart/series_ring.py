"""Exact truncated series arithmetic in three nested variables.

Counting overpartitions refined by the number of non-overlined parts
needs three levels of structure:

* ``DPoly``    - polynomials in the part-count marker ``d`` with integer
  coefficients (the coefficient of ``d^k`` counts objects with ``k``
  non-overlined parts),
* ``QLaurent`` - Laurent series in ``q`` truncated above at ``trunc``,
  with ``DPoly`` coefficients; negative ``q``-exponents are kept exactly,
* ``XSeries``  - series in an auxiliary variable ``x`` truncated at
  ``x_trunc``, with ``QLaurent`` coefficients.

All coefficients are Python integers, so everything is exact at the
chosen truncation; there is no floating point anywhere.  Values are
immutable by convention and every operation returns a new object.
Operands must share truncations; mixing them raises
``TruncationMismatch`` instead of silently coercing.
"""

from __future__ import annotations

from functools import lru_cache


class TruncationMismatch(ValueError):
    """Operands carry different q- or x-truncations."""


class NonConvergent(ValueError):
    """Infinite product whose factors do not tend to 1 coefficientwise."""


class NonUnitLeadingTerm(ValueError):
    """Series division by a divisor that does not start with constant 1."""


class DPoly:
    """Polynomial in the marker ``d`` with integer coefficients.

    Stored sparsely as a degree -> coefficient map with no explicit
    zeros.  Degrees are non-negative.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        if coeffs:
            for deg, c in coeffs.items():
                if c:
                    if deg < 0:
                        raise ValueError("d-degrees must be non-negative")
                    clean[deg] = c
        self.coeffs = clean

    @classmethod
    def const(cls, c):
        return cls({0: c})

    @classmethod
    def monomial(cls, deg, c=1):
        return cls({deg: c})

    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        return max(self.coeffs) if self.coeffs else -1

    def __add__(self, other):
        other = _as_dpoly(other)
        out = dict(self.coeffs)
        for deg, c in other.coeffs.items():
            s = out.get(deg, 0) + c
            if s:
                out[deg] = s
            else:
                out.pop(deg, None)
        return DPoly._wrap(out)

    def __sub__(self, other):
        return self + (-_as_dpoly(other))

    def __neg__(self):
        return DPoly._wrap({deg: -c for deg, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return DPoly()
            return DPoly._wrap({deg: c * other for deg, c in self.coeffs.items()})
        other = _as_dpoly(other)
        out = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                deg = d1 + d2
                s = out.get(deg, 0) + c1 * c2
                if s:
                    out[deg] = s
                else:
                    out.pop(deg, None)
        return DPoly._wrap(out)

    __rmul__ = __mul__

    def shift(self, deg):
        """Multiply by ``d**deg``."""
        if deg == 0:
            return self
        return DPoly._wrap({k + deg: c for k, c in self.coeffs.items()})

    def at_d0(self):
        """Constant term, i.e. the value at d = 0."""
        return self.coeffs.get(0, 0)

    def __eq__(self, other):
        if isinstance(other, int):
            other = DPoly.const(other)
        if not isinstance(other, DPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None

    def __str__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for deg in sorted(self.coeffs):
            c = self.coeffs[deg]
            if deg == 0:
                term = str(c)
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                sign = "-" if c < 0 else ""
                var = "d" if deg == 1 else f"d^{deg}"
                term = f"{sign}{mag}{var}"
            if bits and not term.startswith("-"):
                bits.append("+ " + term)
            elif bits:
                bits.append("- " + term.lstrip("-"))
            else:
                bits.append(term)
        return " ".join(bits)

    __repr__ = __str__

    @classmethod
    def _wrap(cls, clean):
        # internal: `clean` already has no zeros / negative degrees
        obj = cls.__new__(cls)
        obj.coeffs = clean
        return obj


def _as_dpoly(value):
    if isinstance(value, DPoly):
        return value
    if isinstance(value, int):
        return DPoly.const(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to DPoly")


_DPOLY_ONE = DPoly.const(1)


class QLaurent:
    """Truncated Laurent series in ``q`` with ``DPoly`` coefficients.

    ``trunc`` is the largest retained ``q``-exponent.  Exponents may be
    negative and are tracked exactly; nothing below is ever dropped.
    Terms above ``trunc`` are discarded by every operation, so two series
    can only interact when their ``trunc`` values agree.
    """

    __slots__ = ("trunc", "coeffs")

    def __init__(self, trunc, coeffs=None):
        self.trunc = int(trunc)
        clean = {}
        if coeffs:
            for e, p in coeffs.items():
                p = _as_dpoly(p)
                if e <= self.trunc and not p.is_zero():
                    clean[e] = p
        self.coeffs = clean

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, trunc):
        return cls(trunc)

    @classmethod
    def one(cls, trunc):
        return cls(trunc, {0: _DPOLY_ONE})

    @classmethod
    def monomial(cls, trunc, q_exp, d_deg=0, c=1):
        """The single term ``c * d**d_deg * q**q_exp`` (or 0 past trunc)."""
        return cls(trunc, {q_exp: DPoly.monomial(d_deg, c)})

    @classmethod
    def from_terms(cls, trunc, terms):
        """Build from an iterable of ``(q_exp, d_deg, coeff)`` triples."""
        acc = {}
        for q_exp, d_deg, c in terms:
            if q_exp > trunc or not c:
                continue
            row = acc.setdefault(q_exp, {})
            row[d_deg] = row.get(d_deg, 0) + c
        return cls._wrap(trunc, acc)

    # -- structure ---------------------------------------------------

    @property
    def min_exp(self):
        """Smallest stored exponent (0 for the zero series)."""
        return min(self.coeffs) if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def coefficient(self, q_exp):
        """The ``DPoly`` coefficient of ``q**q_exp``."""
        return self.coeffs.get(q_exp, DPoly())

    def coefficient_int(self, q_exp, d_deg):
        p = self.coeffs.get(q_exp)
        return p.coeffs.get(d_deg, 0) if p is not None else 0

    def terms(self):
        """Yield ``(q_exp, d_deg, coeff)`` sorted by exponent then degree."""
        for e in sorted(self.coeffs):
            p = self.coeffs[e]
            for deg in sorted(p.coeffs):
                yield e, deg, p.coeffs[deg]

    def first_nonzero(self):
        """Lexicographically first ``(q_exp, d_deg, coeff)``, or None."""
        for t in self.terms():
            return t
        return None

    def _require_same(self, other):
        if self.trunc != other.trunc:
            raise TruncationMismatch(
                f"q-truncations differ: {self.trunc} != {other.trunc}")

    # -- arithmetic --------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        self._require_same(other)
        out = dict(self.coeffs)
        for e, p in other.coeffs.items():
            s = out.get(e)
            s = p if s is None else s + p
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return QLaurent._wrap_clean(self.trunc, out)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return QLaurent._wrap_clean(
            self.trunc, {e: -p for e, p in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, DPoly)):
            p = _as_dpoly(other)
            if p.is_zero():
                return QLaurent.zero(self.trunc)
            out = {}
            for e, q in self.coeffs.items():
                prod = q * p
                if not prod.is_zero():
                    out[e] = prod
            return QLaurent._wrap_clean(self.trunc, out)
        self._require_same(other)
        acc = {}
        for e1, p1 in self.coeffs.items():
            for e2, p2 in other.coeffs.items():
                e = e1 + e2
                if e > self.trunc:
                    continue
                row = acc.setdefault(e, {})
                for d1, c1 in p1.coeffs.items():
                    for d2, c2 in p2.coeffs.items():
                        deg = d1 + d2
                        row[deg] = row.get(deg, 0) + c1 * c2
        return QLaurent._wrap(self.trunc, acc)

    __rmul__ = __mul__

    def scale_by_monomial(self, e_q, e_d=0, c=1):
        """Multiply by the monomial ``c * d**e_d * q**e_q``.

        A negative ``e_q`` lowers ``min_exp``; terms pushed above
        ``trunc`` are dropped.
        """
        if not c:
            return QLaurent.zero(self.trunc)
        out = {}
        for e, p in self.coeffs.items():
            ne = e + e_q
            if ne > self.trunc:
                continue
            np_ = p.shift(e_d) * c if c != 1 else p.shift(e_d)
            out[ne] = np_
        return QLaurent._wrap_clean(self.trunc, out)

    def divide(self, den):
        """Exact series quotient ``self / den``.

        ``den`` must start with the constant term 1 at ``q**0`` (no
        negative exponents), which makes the quotient a well defined
        truncated Laurent series computed by coefficient recursion.
        """
        den = self._coerce(den)
        self._require_same(den)
        if den.min_exp != 0 or den.coeffs.get(0) != _DPOLY_ONE:
            raise NonUnitLeadingTerm(
                "divisor must have leading coefficient 1 at q^0")
        if self.is_zero():
            return QLaurent.zero(self.trunc)
        den_items = sorted((e, p) for e, p in den.coeffs.items() if e > 0)
        nmin = self.min_exp
        quo = {}
        for e in range(nmin, self.trunc + 1):
            row = dict(self.coeffs[e].coeffs) if e in self.coeffs else {}
            for ed, pd in den_items:
                prev = quo.get(e - ed)
                if not prev:
                    if e - ed < nmin:
                        break
                    continue
                for d1, c1 in pd.coeffs.items():
                    for d2, c2 in prev.items():
                        deg = d1 + d2
                        row[deg] = row.get(deg, 0) - c1 * c2
            row = {deg: c for deg, c in row.items() if c}
            if row:
                quo[e] = row
        return QLaurent._wrap(self.trunc, quo)

    def d0(self):
        """Specialize d = 0, keeping only the ``d**0`` part."""
        out = {}
        for e, p in self.coeffs.items():
            c = p.at_d0()
            if c:
                out[e] = DPoly.const(c)
        return QLaurent._wrap_clean(self.trunc, out)

    def with_trunc(self, new_trunc):
        """Re-truncate to ``new_trunc``.

        Lowering drops terms above the new bound.  Raising keeps the
        terms as-is and asserts nothing new appears below the raised
        bound, so it is only sound for exact Laurent polynomials (all
        terms known), not for genuinely truncated series.
        """
        if new_trunc == self.trunc:
            return self
        return QLaurent(new_trunc, self.coeffs)

    # -- inspection / io ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, DPoly)):
            other = QLaurent(self.trunc, {0: _as_dpoly(other)})
        if not isinstance(other, QLaurent):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    __hash__ = None

    def to_json_obj(self):
        """Canonical JSON shape: exponent-sorted terms, integer strings."""
        return {
            "trunc": self.trunc,
            "terms": [
                {"q": e, "d": deg, "c": str(c)} for e, deg, c in self.terms()
            ],
        }

    def __str__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for e in sorted(self.coeffs):
            p = self.coeffs[e]
            if e == 0:
                bits.append(f"({p})")
            else:
                bits.append(f"({p})*q^{e}")
        return " + ".join(bits)

    __repr__ = __str__

    def _coerce(self, other):
        if isinstance(other, (int, DPoly)):
            return QLaurent(self.trunc, {0: _as_dpoly(other)})
        if isinstance(other, QLaurent):
            return other
        raise TypeError(f"cannot combine QLaurent with {type(other).__name__}")

    @classmethod
    def _wrap(cls, trunc, raw):
        # internal: `raw` maps exponent -> {degree: int}, may hold zeros
        obj = cls.__new__(cls)
        obj.trunc = trunc
        coeffs = {}
        for e, row in raw.items():
            row = {deg: c for deg, c in row.items() if c}
            if row:
                coeffs[e] = DPoly._wrap(row)
        obj.coeffs = coeffs
        return obj

    @classmethod
    def _wrap_clean(cls, trunc, coeffs):
        # internal: values are already zero-free DPoly past the trunc filter
        obj = cls.__new__(cls)
        obj.trunc = trunc
        obj.coeffs = coeffs
        return obj


class XSeries:
    """Truncated series in ``x`` whose coefficients are ``QLaurent``.

    ``coeffs[j]`` is the coefficient of ``x**j``; the list always has
    ``x_trunc + 1`` entries sharing one q-truncation.
    """

    __slots__ = ("x_trunc", "coeffs")

    def __init__(self, x_trunc, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != x_trunc + 1:
            raise ValueError("need exactly x_trunc + 1 coefficients")
        qt = coeffs[0].trunc
        for c in coeffs:
            if c.trunc != qt:
                raise TruncationMismatch("x-coefficients mix q-truncations")
        self.x_trunc = x_trunc
        self.coeffs = coeffs

    @classmethod
    def zero(cls, x_trunc, trunc):
        z = QLaurent.zero(trunc)
        return cls(x_trunc, [z] * (x_trunc + 1))

    @classmethod
    def one(cls, x_trunc, trunc):
        row = [QLaurent.one(trunc)]
        row += [QLaurent.zero(trunc)] * x_trunc
        return cls(x_trunc, row)

    @property
    def trunc(self):
        return self.coeffs[0].trunc

    def _require_same(self, other):
        if self.x_trunc != other.x_trunc:
            raise TruncationMismatch(
                f"x-truncations differ: {self.x_trunc} != {other.x_trunc}")
        if self.trunc != other.trunc:
            raise TruncationMismatch(
                f"q-truncations differ: {self.trunc} != {other.trunc}")

    def __add__(self, other):
        self._require_same(other)
        return XSeries(self.x_trunc,
                       [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._require_same(other)
        return XSeries(self.x_trunc,
                       [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return XSeries(self.x_trunc, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, DPoly)):
            return XSeries(self.x_trunc, [a * other for a in self.coeffs])
        if isinstance(other, QLaurent):
            return XSeries(self.x_trunc, [a * other for a in self.coeffs])
        self._require_same(other)
        out = [QLaurent.zero(self.trunc) for _ in range(self.x_trunc + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if i + j > self.x_trunc:
                    break
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + a * b
        return XSeries(self.x_trunc, out)

    __rmul__ = __mul__

    def shift_x(self, k):
        """Multiply by ``x**k``, dropping degrees past ``x_trunc``."""
        z = QLaurent.zero(self.trunc)
        row = [z] * min(k, self.x_trunc + 1) + list(
            self.coeffs[: self.x_trunc + 1 - k])
        return XSeries(self.x_trunc, row)

    def divide(self, den):
        """Exact quotient in ``x``; ``den`` must have constant term 1."""
        self._require_same(den)
        if den.coeffs[0] != QLaurent.one(self.trunc):
            raise NonUnitLeadingTerm(
                "x-divisor must have constant coefficient 1")
        quo = []
        for j in range(self.x_trunc + 1):
            acc = self.coeffs[j]
            for i in range(1, j + 1):
                if den.coeffs[i].is_zero():
                    continue
                acc = acc - den.coeffs[i] * quo[j - i]
            quo.append(acc)
        return XSeries(self.x_trunc, quo)

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def first_nonzero(self):
        """First nonzero ``(x_deg, q_exp, d_deg, coeff)``, or None."""
        for j, c in enumerate(self.coeffs):
            t = c.first_nonzero()
            if t is not None:
                return (j,) + t
        return None

    def with_q_trunc(self, new_trunc):
        return XSeries(self.x_trunc,
                       [c.with_trunc(new_trunc) for c in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, XSeries):
            return NotImplemented
        return (self.x_trunc == other.x_trunc
                and list(self.coeffs) == list(other.coeffs))

    __hash__ = None

    def __str__(self):
        bits = [f"x^{j}: {c}" for j, c in enumerate(self.coeffs)
                if not c.is_zero()]
        return "{" + "; ".join(bits) + "}" if bits else "0"

    __repr__ = __str__


# -- named series constructors ---------------------------------------


@lru_cache(maxsize=None)
def _gauss_coeffs(m, r):
    """Coefficient tuple of the Gaussian binomial [m r] in ascending degree."""
    if r < 0 or r > m:
        return ()
    if r == 0 or r == m:
        return (1,)
    lo = _gauss_coeffs(m - 1, r - 1)
    hi = _gauss_coeffs(m - 1, r)
    out = [0] * (r * (m - r) + 1)
    for i, c in enumerate(lo):
        out[i] += c
    for i, c in enumerate(hi):
        out[i + r] += c
    return tuple(out)


def qbinomial(m, r, base_exp, trunc=None):
    """Gaussian binomial [m r] evaluated at ``q**base_exp``.

    Returns the exact Laurent polynomial, which is 0 whenever ``r`` lies
    outside ``0..m`` (in particular for negative ``m``).  When ``trunc``
    is omitted it is chosen just large enough to hold every monomial of
    the result.
    """
    if base_exp == 0:
        raise ValueError("base exponent must be nonzero")
    coeffs = _gauss_coeffs(m, r)
    exps = [i * base_exp for i in range(len(coeffs))]
    if trunc is None:
        trunc = max([0] + exps)
    return QLaurent.from_terms(
        trunc, ((e, 0, c) for e, c in zip(exps, coeffs) if c))


def pochhammer_expand(t_sign, t_d_degree, offset_exp, step_exp,
                      num_factors, trunc):
    """Expand ``prod_j (1 - t * q**(offset_exp + j*step_exp))`` exactly.

    ``t`` is the monomial ``t_sign * d**t_d_degree``.  ``num_factors``
    counts the factors, or ``None`` for the infinite product; factors
    whose exponent exceeds ``trunc`` contribute nothing and stop the
    expansion.  The infinite case needs ``offset_exp >= 1`` so that each
    truncated coefficient is reached by finitely many factors.
    """
    if t_sign not in (1, -1):
        raise ValueError("t_sign must be +1 or -1")
    if t_d_degree not in (0, 1):
        raise ValueError("t_d_degree must be 0 or 1")
    if step_exp <= 0:
        raise ValueError("step_exp must be positive")
    infinite = num_factors is None
    if infinite and offset_exp <= 0:
        raise NonConvergent(
            "infinite product needs a positive starting exponent")
    result = QLaurent.one(trunc)
    j = 0
    while infinite or j < num_factors:
        e = offset_exp + j * step_exp
        if e > trunc:
            break
        factor = QLaurent.one(trunc) + QLaurent.monomial(
            trunc, e, t_d_degree, -t_sign)
        result = result * factor
        j += 1
    return result


def product_F(sys, trunc):
    """Generating function for congruence-restricted overpartitions.

    Expands ``prod_j (-q^(N-a(j)); q^N)_inf / (d q^(N-a(j)); q^N)_inf``:
    the coefficient of ``q^n d^k`` counts overpartitions of ``n`` whose
    parts are all congruent to some ``-a(j)`` modulo ``N``, with ``k``
    non-overlined parts.
    """
    result = QLaurent.one(trunc)
    for g in sys.a:
        e = sys.N - g
        result = result * pochhammer_expand(-1, 0, e, sys.N, None, trunc)
        result = result.divide(pochhammer_expand(1, 1, e, sys.N, None, trunc))
    return result


def substitute_x(f, m, N):
    """The series ``x -> f(x * q**(m*N))``."""
    if m <= 0 or N <= 0:
        raise ValueError("m and N must be positive")
    return XSeries(f.x_trunc, [
        c.scale_by_monomial(j * m * N) for j, c in enumerate(f.coeffs)
    ])
