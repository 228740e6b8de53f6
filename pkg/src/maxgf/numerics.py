"""High-precision numerics: forward-mode jets, LU solves, spectral radius.

``NumericValue`` is an mpmath value optionally carrying first partials
(``grad``) and second partials (``hess``) with respect to a declared seed
basis.  All solver derivative propagation in this package runs through
this one class; seeds are whatever the caller declares (unknowns, x, the
size marker, kernel arguments).
"""

from __future__ import annotations

from mpmath import mp, mpf

__all__ = [
    "NumericValue", "seed_values", "to_mp", "value_of",
    "nexp", "nlog", "nexp_ge", "nlog_inv",
    "lu_factor", "lu_solve_factored", "lu_solve", "lu_det",
    "spectral_radius", "SolverError",
]


class SolverError(RuntimeError):
    """Numeric solver failure (divergence, singular system, no bracket)."""


def to_mp(v):
    """Coerce ints/rationals/floats to mpf at current precision."""
    if isinstance(v, mpf):
        return v
    try:
        num, den = v.numerator, v.denominator
        return mpf(int(num)) / mpf(int(den))
    except AttributeError:
        return mpf(v)


def value_of(v):
    return v.v if isinstance(v, NumericValue) else to_mp(v)


class NumericValue:
    """Jet: value, optional gradient, optional symmetric Hessian."""

    __slots__ = ("v", "g", "h")

    def __init__(self, v, g=None, h=None):
        self.v = v
        self.g = g      # list[mpf] of length s, or None
        self.h = h      # list[list[mpf]] s x s symmetric, or None

    # -- construction -------------------------------------------------
    @staticmethod
    def lift(value, nseeds=None, second=False):
        """Constant jet (zero derivatives)."""
        if nseeds is None:
            return NumericValue(to_mp(value))
        z = mpf(0)
        g = [z] * nseeds
        h = [[z] * nseeds for _ in range(nseeds)] if second else None
        return NumericValue(to_mp(value), g, h)

    @staticmethod
    def seed(value, index, nseeds, second=False):
        """Jet for the `index`-th seed variable."""
        z = mpf(0)
        g = [z] * nseeds
        g[index] = mpf(1)
        h = [[z] * nseeds for _ in range(nseeds)] if second else None
        return NumericValue(to_mp(value), g, h)

    @property
    def nseeds(self):
        return len(self.g) if self.g is not None else 0

    def __repr__(self):
        return f"NumericValue({mp.nstr(self.v, 12)}, seeds={self.nseeds})"

    # -- helpers ------------------------------------------------------
    def _like(self, v, g, h):
        return NumericValue(v, g, h)

    def _coerce(self, other):
        if isinstance(other, NumericValue):
            return other
        return NumericValue.lift(other, self.nseeds if self.g is not None else None,
                                 self.h is not None)

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        a, b = _align(self, o)
        g = [x + y for x, y in zip(a.g, b.g)] if a.g is not None else None
        h = None
        if a.h is not None:
            h = [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a.h, b.h)]
        return NumericValue(a.v + b.v, g, h)

    __radd__ = __add__

    def __neg__(self):
        g = [-x for x in self.g] if self.g is not None else None
        h = ([[-x for x in r] for r in self.h] if self.h is not None else None)
        return NumericValue(-self.v, g, h)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        a, b = _align(self, o)
        v = a.v * b.v
        g = h = None
        if a.g is not None:
            g = [x * b.v + a.v * y for x, y in zip(a.g, b.g)]
            if a.h is not None:
                s = len(a.g)
                h = [[a.h[i][j] * b.v + a.g[i] * b.g[j]
                      + a.g[j] * b.g[i] + a.v * b.h[i][j]
                      for j in range(s)] for i in range(s)]
        return NumericValue(v, g, h)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o._reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self._reciprocal()

    def _reciprocal(self):
        v = 1 / self.v
        g = h = None
        if self.g is not None:
            v2 = v * v
            g = [-x * v2 for x in self.g]
            if self.h is not None:
                s = len(self.g)
                v3 = v2 * v
                h = [[2 * self.g[i] * self.g[j] * v3 - self.h[i][j] * v2
                      for j in range(s)] for i in range(s)]
        return NumericValue(v, g, h)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = NumericValue.lift(1, self.nseeds if self.g is not None else None,
                                self.h is not None)
        for _ in range(k):
            out = out * self
        return out

    # -- analytic primitives -------------------------------------------
    def _chain(self, f0, f1, f2):
        """Apply scalar function with value f0, df = f1, d2f = f2."""
        g = h = None
        if self.g is not None:
            g = [f1 * x for x in self.g]
            if self.h is not None:
                s = len(self.g)
                h = [[f1 * self.h[i][j] + f2 * self.g[i] * self.g[j]
                      for j in range(s)] for i in range(s)]
        return NumericValue(f0, g, h)

    def exp(self):
        e = mp.exp(self.v)
        return self._chain(e, e, e)

    def log(self):
        v = mp.log(self.v)
        inv = 1 / self.v
        return self._chain(v, inv, -inv * inv)


def _align(a: NumericValue, b: NumericValue):
    """Promote derivative structure so both operands match."""
    if (a.g is None) != (b.g is None) or (a.h is None) != (b.h is None):
        ns = max(a.nseeds, b.nseeds)
        second = a.h is not None or b.h is not None
        if a.g is None or (second and a.h is None):
            a = NumericValue.lift(a.v, ns, second)
        if b.g is None or (second and b.h is None):
            b = NumericValue.lift(b.v, ns, second)
    return a, b


def seed_values(values, second=False):
    """Jets seeding each entry of `values` as an independent variable."""
    n = len(values)
    return [NumericValue.seed(v, i, n, second) for i, v in enumerate(values)]


def compose_jet(f: NumericValue, args):
    """Chain rule: f is a jet in len(args) local seeds, each arg an outer jet.

    Returns f composed with the args, a jet in the outer seed basis.
    Plain-valued args (no gradients) collapse to a plain value.
    """
    if not args or args[0].g is None:
        return NumericValue(f.v)
    s_out = args[0].nseeds
    second = f.h is not None and args[0].h is not None
    m = len(args)
    g = [mpf(0)] * s_out
    for k in range(m):
        fk = f.g[k]
        if fk == 0:
            continue
        ak = args[k].g
        for t in range(s_out):
            g[t] += fk * ak[t]
    h = None
    if second:
        h = [[mpf(0)] * s_out for _ in range(s_out)]
        for k in range(m):
            fk = f.g[k]
            if fk != 0:
                ah = args[k].h
                for t in range(s_out):
                    for u in range(t, s_out):
                        h[t][u] += fk * ah[t][u]
        for k in range(m):
            for l in range(m):
                fkl = f.h[k][l]
                if fkl == 0:
                    continue
                gk, gl = args[k].g, args[l].g
                for t in range(s_out):
                    for u in range(t, s_out):
                        h[t][u] += fkl * gk[t] * gl[u]
        for t in range(s_out):
            for u in range(t):
                h[t][u] = h[u][t]
    return NumericValue(f.v, g, h)


# ---------------------------------------------------------------------------
# scalar analytic helpers shared by the generic ops layer

def nexp(v):
    return v.exp() if isinstance(v, NumericValue) else mp.exp(to_mp(v))


def nlog(v):
    return v.log() if isinstance(v, NumericValue) else mp.log(to_mp(v))


def nexp_ge(v, k: int):
    """exp_{>=k}(v) = sum_{r>=k} v^r / r!  (numeric, cancellation-safe)."""
    val = value_of(v)
    if abs(val) < mpf("1e-4") and k > 0:
        # direct Taylor sum; avoids cancellation for tiny arguments
        term = _const_like(v, 1)
        fact = 1
        for r in range(1, k):
            term = term * v / r
        # term = v^(k-1)/(k-1)!; start summing at r = k
        acc = _const_like(v, 0)
        r = k
        while True:
            term = term * v / r
            acc = acc + term
            if abs(value_of(term)) < mp.eps * (abs(value_of(acc)) + mp.eps):
                break
            r += 1
        return acc
    e = nexp(v)
    term = _const_like(v, 1)
    fact = 1
    for r in range(k):
        if r > 0:
            term = term * v
            fact *= r
        e = e - term / fact
    return e


def nlog_inv(v):
    """log(1/(1-v)) numerically."""
    one = _const_like(v, 1)
    return -((one - v).log() if isinstance(v, NumericValue)
             else mp.log(1 - to_mp(v)))


def _const_like(v, c):
    if isinstance(v, NumericValue):
        return NumericValue.lift(c, v.nseeds if v.g is not None else None,
                                 v.h is not None)
    return mpf(c)


# ---------------------------------------------------------------------------
# generic dense linear algebra (entries: mpf or NumericValue)

def _mag(x):
    return abs(value_of(x))


def lu_factor(a):
    """In-place-ish LU with partial pivoting.  Returns (lu, perm, sign)."""
    n = len(a)
    lu = [list(row) for row in a]
    perm = list(range(n))
    sign = 1
    for col in range(n):
        piv = max(range(col, n), key=lambda r: _mag(lu[r][col]))
        if _mag(lu[piv][col]) == 0:
            raise SolverError("singular matrix in LU factorization")
        if piv != col:
            lu[piv], lu[col] = lu[col], lu[piv]
            perm[piv], perm[col] = perm[col], perm[piv]
            sign = -sign
        inv = 1 / lu[col][col] if not isinstance(lu[col][col], NumericValue) \
            else lu[col][col]._reciprocal()
        for r in range(col + 1, n):
            if _mag(lu[r][col]) == 0:
                continue
            f = lu[r][col] * inv
            lu[r][col] = f
            for c in range(col + 1, n):
                lu[r][c] = lu[r][c] - f * lu[col][c]
    return lu, perm, sign


def lu_solve_factored(lu, perm, b):
    """Solve with a prefactored LU; `b` is a vector."""
    n = len(lu)
    y = [b[perm[i]] for i in range(n)]
    for i in range(n):
        for j in range(i):
            y[i] = y[i] - lu[i][j] * y[j]
    for i in range(n - 1, -1, -1):
        for j in range(i + 1, n):
            y[i] = y[i] - lu[i][j] * y[j]
        y[i] = y[i] / lu[i][i]
    return y


def lu_solve(a, b):
    lu, perm, _ = lu_factor(a)
    return lu_solve_factored(lu, perm, b)


def lu_det(a):
    """Determinant via LU; works on jets (pivoting compares value parts)."""
    lu, _, sign = lu_factor(a)
    det = lu[0][0]
    for i in range(1, len(lu)):
        det = det * lu[i][i]
    return det * sign if sign == 1 else -det


def spectral_radius(m, tol=None, max_iter=5000):
    """Largest eigenvalue modulus of a non-negative square matrix.

    Power iteration with a Rayleigh-style ratio estimate; falls back to
    mpmath's dense eigensolver if the iteration stalls (deflation-style
    safeguard for non-dominant or defective cases).
    """
    n = len(m)
    if n == 0:
        return mpf(0)
    m = [[to_mp(v) for v in row] for row in m]
    if all(v == 0 for row in m for v in row):
        return mpf(0)
    tol = tol or mpf(10) ** (-(mp.dps - 5))
    v = [mpf(1)] * n
    lam_prev = mpf(0)
    for _ in range(max_iter):
        w = [sum(m[i][j] * v[j] for j in range(n)) for i in range(n)]
        norm = max(abs(x) for x in w)
        if norm == 0:
            return mpf(0)
        w = [x / norm for x in w]
        num = sum(w[i] * sum(m[i][j] * w[j] for j in range(n)) for i in range(n))
        den = sum(w[i] * w[i] for i in range(n))
        lam = num / den
        if abs(lam - lam_prev) < tol * (1 + abs(lam)):
            return abs(lam)
        lam_prev = lam
        v = w
    import mpmath
    eigs = mpmath.eig(mpmath.matrix(m), left=False, right=False)
    return max(abs(e) for e in eigs)
