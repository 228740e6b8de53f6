"""Truncated power series with exact rational coefficients.

Two flavours:

* ``Series``    -- one variable x, coefficients for x^0 .. x^N.
* ``BiSeries``  -- x plus a marker variable u.  Row n holds the
  u-polynomial multiplying x^n.  Rows are ragged; the structural
  invariant "u-degree <= x-degree" holds for counting series but is
  deliberately not enforced on intermediates (marker substitutions
  like u*C temporarily raise the u-degree before an x factor lands).

All arithmetic is exact modulo x^(N+1).  Mixing truncation orders is an
error, never a silent truncation.
"""

from __future__ import annotations

from fractions import Fraction

try:  # gmpy2 rationals are ~20x faster; plain Fractions work identically
    from gmpy2 import mpq as _ratio
except ImportError:  # pragma: no cover
    _ratio = Fraction

_ZERO = _ratio(0)
_ONE = _ratio(1)


def rat(p, q=1):
    """Exact rational from integers (or a rational-like value)."""
    return _ratio(p) / _ratio(q) if q != 1 else _ratio(p)


def is_rational(v) -> bool:
    return isinstance(v, (int, Fraction, type(_ZERO)))


class OrderMismatchError(ValueError):
    pass


def _check_orders(f, g):
    if f.order != g.order:
        raise OrderMismatchError(
            f"series orders differ: {f.order} vs {g.order}")


class Series:
    """Univariate truncated series over the rationals."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs=None):
        if order < 0:
            raise ValueError("order must be >= 0")
        self.order = order
        if coeffs is None:
            self.coeffs = tuple(_ZERO for _ in range(order + 1))
        else:
            coeffs = [_ratio(c) for c in coeffs]
            if len(coeffs) != order + 1:
                raise ValueError("coefficient list does not match order")
            self.coeffs = tuple(coeffs)

    @staticmethod
    def constant(value, order: int) -> "Series":
        c = [_ratio(value)] + [_ZERO] * order
        return Series(order, c)

    @staticmethod
    def x(order: int) -> "Series":
        c = [_ZERO] * (order + 1)
        if order >= 1:
            c[1] = _ONE
        return Series(order, c)

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def __eq__(self, other):
        return (isinstance(other, Series) and self.order == other.order
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        terms = [f"{c}*x^{n}" for n, c in enumerate(self.coeffs) if c != 0]
        return "Series(" + (" + ".join(terms) or "0") + f" + O(x^{self.order+1}))"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def truncate(self, order: int) -> "Series":
        """Copy at a lower (or equal) order."""
        if order > self.order:
            raise OrderMismatchError("cannot raise truncation order")
        return Series(order, self.coeffs[:order + 1])

    def __add__(self, other):
        if is_rational(other):
            c = list(self.coeffs)
            c[0] = c[0] + _ratio(other)
            return Series(self.order, c)
        _check_orders(self, other)
        return Series(self.order,
                      [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Series(self.order, [-a for a in self.coeffs])

    def __sub__(self, other):
        if is_rational(other):
            return self + (-_ratio(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_rational(other):
            q = _ratio(other)
            return Series(self.order, [a * q for a in self.coeffs])
        _check_orders(self, other)
        n = self.order
        out = [_ZERO] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return Series(n, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if is_rational(other):
            q = _ratio(other)
            if q == 0:
                raise ZeroDivisionError("division by zero scalar")
            return Series(self.order, [a / q for a in self.coeffs])
        return divide(self, other)

    def __rtruediv__(self, other):
        return divide(Series.constant(other, self.order), self)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = Series.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result


def add(f: Series, g: Series) -> Series:
    return f + g


def mul(f: Series, g: Series) -> Series:
    return f * g


def derive(f):
    """Formal d/dx; truncation order drops by one."""
    if f.order == 0:
        raise ValueError("cannot derive an order-0 series")
    if isinstance(f, BiSeries):
        rows = [[c * (n + 1) for c in f.rows[n + 1]] for n in range(f.order)]
        return BiSeries(f.order - 1, rows)
    return Series(f.order - 1,
                  [c * (n + 1) for n, c in enumerate(f.coeffs[1:])])


def integrate(f):
    """Antiderivative with constant term 0; order rises by one."""
    if isinstance(f, BiSeries):
        rows = [[]] + [[c / (n + 1) for c in f.rows[n]] for n in range(f.order + 1)]
        return BiSeries(f.order + 1, rows)
    return Series(f.order + 1,
                  [_ZERO] + [c / (n + 1) for n, c in enumerate(f.coeffs)])


def divide(f, g):
    """Exact quotient f/g, requires g(0) != 0 (a unit)."""
    if isinstance(f, BiSeries) or isinstance(g, BiSeries):
        return _bi_divide(f, g)
    _check_orders(f, g)
    g0 = g.coeffs[0]
    if g0 == 0:
        raise ZeroDivisionError("divisor has zero constant term")
    n = f.order
    out = [_ZERO] * (n + 1)
    for m in range(n + 1):
        acc = f.coeffs[m]
        for k in range(1, m + 1):
            if g.coeffs[k] != 0:
                acc -= g.coeffs[k] * out[m - k]
        out[m] = acc / g0
    return Series(n, out)


def exp_series(f):
    """exp(f) for f(0) = 0, via the recurrence exp(f)' = f' exp(f)."""
    if isinstance(f, BiSeries):
        return _bi_exp(f)
    if f.coeffs[0] != 0:
        raise ValueError("exp requires zero constant term")
    n = f.order
    out = [_ZERO] * (n + 1)
    out[0] = _ONE
    for m in range(1, n + 1):
        acc = _ZERO
        for k in range(1, m + 1):
            if f.coeffs[k] != 0:
                acc += k * f.coeffs[k] * out[m - k]
        out[m] = acc / m
    return Series(n, out)


def exp_ge(f, k: int):
    """Restricted set construction: exp(f) minus the terms f^r/r! for r < k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    e = exp_series(f)
    if k == 0:
        return e
    term = (BiSeries.constant(1, f.order) if isinstance(f, BiSeries)
            else Series.constant(1, f.order))
    fact = 1
    for r in range(k):
        if r > 0:
            term = term * f
            fact *= r
        e = e - term / fact
    return e


def log_inv(f):
    """log(1/(1-f)) for f(0) = 0, the cycle construction."""
    if isinstance(f, BiSeries):
        one = BiSeries.constant(1, f.order)
    else:
        if f.coeffs[0] != 0:
            raise ValueError("log_inv requires zero constant term")
        one = Series.constant(1, f.order)
    h = divide(one, one - f)
    # g' = f' h, g(0) = 0
    g = integrate(derive(f) * h.truncate(f.order - 1)) if f.order > 0 else f * 0
    return g


def log_inv_ge(f, k: int):
    """log(1/(1-f)) minus the power terms f^r/r for r < k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    g = log_inv(f)
    term = f
    for r in range(1, k):
        if r > 1:
            term = term * f
        g = g - term / r
    return g


def compose(f, g):
    """f(g(x)) by Horner evaluation; requires g(0) = 0."""
    if isinstance(f, BiSeries) or isinstance(g, BiSeries):
        raise TypeError("compose is defined for univariate series")
    _check_orders(f, g)
    if g.coeffs[0] != 0:
        raise ValueError("inner series must have zero constant term")
    acc = Series.constant(f.coeffs[f.order], f.order)
    for n in range(f.order - 1, -1, -1):
        acc = acc * g + f.coeffs[n]
    return acc


class BiSeries:
    """Bivariate truncated series: rows[n] is the u-polynomial at x^n."""

    __slots__ = ("order", "rows")

    def __init__(self, order: int, rows=None):
        if order < 0:
            raise ValueError("order must be >= 0")
        self.order = order
        if rows is None:
            self.rows = tuple(() for _ in range(order + 1))
        else:
            if len(rows) != order + 1:
                raise ValueError("row count does not match order")
            self.rows = tuple(_trim(tuple(_ratio(c) for c in row))
                              for row in rows)

    @staticmethod
    def constant(value, order: int) -> "BiSeries":
        rows = [[_ratio(value)]] + [[] for _ in range(order)]
        return BiSeries(order, rows)

    @staticmethod
    def x(order: int) -> "BiSeries":
        rows = [[] for _ in range(order + 1)]
        if order >= 1:
            rows[1] = [_ONE]
        return BiSeries(order, rows)

    @staticmethod
    def marker(order: int) -> "BiSeries":
        """The bare marker u (x-degree 0, u-degree 1)."""
        rows = [[_ZERO, _ONE]] + [[] for _ in range(order)]
        return BiSeries(order, rows)

    def coeff(self, n: int, k: int):
        row = self.rows[n]
        return row[k] if k < len(row) else _ZERO

    def __eq__(self, other):
        return (isinstance(other, BiSeries) and self.order == other.order
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.order, self.rows))

    def __repr__(self):
        terms = []
        for n, row in enumerate(self.rows):
            for k, c in enumerate(row):
                if c != 0:
                    terms.append(f"{c}*x^{n}u^{k}")
        return "BiSeries(" + (" + ".join(terms) or "0") + f" + O(x^{self.order+1}))"

    def is_zero(self) -> bool:
        return all(len(r) == 0 for r in self.rows)

    def truncate(self, order: int) -> "BiSeries":
        if order > self.order:
            raise OrderMismatchError("cannot raise truncation order")
        return BiSeries(order, [list(r) for r in self.rows[:order + 1]])

    def at_marker_one(self) -> Series:
        """Collapse u = 1, giving a univariate Series."""
        return Series(self.order, [sum(r, _ZERO) if r else _ZERO
                                   for r in self.rows])

    def max_marker_degree(self) -> int:
        return max((len(r) - 1 for r in self.rows if r), default=-1)

    def __add__(self, other):
        if is_rational(other):
            other = BiSeries.constant(other, self.order)
        _check_orders(self, other)
        rows = []
        for ra, rb in zip(self.rows, other.rows):
            m = max(len(ra), len(rb))
            rows.append([(ra[k] if k < len(ra) else _ZERO)
                         + (rb[k] if k < len(rb) else _ZERO)
                         for k in range(m)])
        return BiSeries(self.order, rows)

    __radd__ = __add__

    def __neg__(self):
        return BiSeries(self.order, [[-c for c in r] for r in self.rows])

    def __sub__(self, other):
        if is_rational(other):
            other = BiSeries.constant(other, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if is_rational(other):
            q = _ratio(other)
            return BiSeries(self.order,
                            [[c * q for c in r] for r in self.rows])
        _check_orders(self, other)
        n = self.order
        rows = [dict() for _ in range(n + 1)]
        for i, ra in enumerate(self.rows):
            if not ra:
                continue
            for j in range(n + 1 - i):
                rb = other.rows[j]
                if not rb:
                    continue
                dst = rows[i + j]
                for ka, ca in enumerate(ra):
                    if ca == 0:
                        continue
                    for kb, cb in enumerate(rb):
                        if cb != 0:
                            key = ka + kb
                            dst[key] = dst.get(key, _ZERO) + ca * cb
        out = []
        for d in rows:
            if d:
                m = max(d)
                out.append([d.get(k, _ZERO) for k in range(m + 1)])
            else:
                out.append([])
        return BiSeries(n, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if is_rational(other):
            q = _ratio(other)
            if q == 0:
                raise ZeroDivisionError("division by zero scalar")
            return BiSeries(self.order,
                            [[c / q for c in r] for r in self.rows])
        return _bi_divide(self, other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = BiSeries.constant(1, self.order)
        for _ in range(k):
            result = result * self
        return result


def _trim(row):
    i = len(row)
    while i > 0 and row[i - 1] == 0:
        i -= 1
    return tuple(row[:i])


def _row_mul(ra, rb):
    if not ra or not rb:
        return []
    out = [_ZERO] * (len(ra) + len(rb) - 1)
    for i, a in enumerate(ra):
        if a == 0:
            continue
        for j, b in enumerate(rb):
            if b != 0:
                out[i + j] += a * b
    return out


def _row_sub(ra, rb):
    m = max(len(ra), len(rb))
    return [(ra[k] if k < len(ra) else _ZERO)
            - (rb[k] if k < len(rb) else _ZERO) for k in range(m)]


def _bi_exp(f: BiSeries) -> BiSeries:
    if f.rows[0]:
        raise ValueError("exp requires zero constant term")
    n = f.order
    rows = [[] for _ in range(n + 1)]
    rows[0] = [_ONE]
    for m in range(1, n + 1):
        acc = []
        for k in range(1, m + 1):
            if f.rows[k]:
                scaled = [c * k for c in f.rows[k]]
                acc = [a + b for a, b in
                       _pad_pair(acc, _row_mul(scaled, rows[m - k]))]
        rows[m] = [c / m for c in acc]
    return BiSeries(n, rows)


def _pad_pair(ra, rb):
    m = max(len(ra), len(rb))
    ra = list(ra) + [_ZERO] * (m - len(ra))
    rb = list(rb) + [_ZERO] * (m - len(rb))
    return zip(ra, rb)


def _bi_divide(f, g):
    if isinstance(f, Series):
        f = BiSeries(f.order, [[c] for c in f.coeffs])
    if isinstance(g, Series):
        g = BiSeries(g.order, [[c] for c in g.coeffs])
    _check_orders(f, g)
    g0 = g.rows[0]
    if len(g0) != 1:
        raise ZeroDivisionError(
            "divisor constant term must be a nonzero marker-free scalar")
    c0 = g0[0]
    n = f.order
    rows = []
    for m in range(n + 1):
        acc = list(f.rows[m])
        for k in range(1, m + 1):
            if g.rows[k]:
                prod = _row_mul(g.rows[k], rows[m - k])
                acc = _row_sub(acc, prod)
        rows.append([c / c0 for c in acc])
    return BiSeries(n, rows)
