"""Implicit fixed-point systems C = F(x, params, C).

A `SystemSpec` bundles the number of unknowns with a mode-generic
right-hand-side callable ``rhs(x, c, params) -> sequence``; the same
callable is evaluated on exact series for coefficient extraction and on
mpmath jets for the branch-point machinery.

Series solving iterates from zero with progressive truncation: the pass
at order p reuses coefficients settled at earlier passes and verifies
they did not move (the well-foundedness check; a moving settled
coefficient means the system does not gain an x-order per pass and is
rejected).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from mpmath import mp, mpf

from .series import Series, BiSeries, rat, is_rational
from .numerics import (NumericValue, SolverError, lu_factor,
                       lu_solve_factored, lu_solve, spectral_radius, to_mp,
                       value_of, seed_values)

__all__ = ["SystemSpec", "IllFoundedError", "solve_series", "solve_numeric",
           "jacobian", "spectral_radius", "SolverError", "MARKER"]


class IllFoundedError(RuntimeError):
    """Series iteration failed to gain an x-order per pass."""


class _MarkerToken:
    """Sentinel: solve in bivariate mode with this parameter as the marker u."""

    def __repr__(self):
        return "MARKER"


MARKER = _MarkerToken()


@dataclass(frozen=True)
class SystemSpec:
    """k unknown functions and their fixed-point right-hand side."""

    k: int
    rhs: Callable
    name: str = ""
    unknowns: Sequence[str] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.unknowns:
            object.__setattr__(self, "unknowns",
                               tuple(f"C{i}" for i in range(self.k)))


def _ring_params(params, order, bivariate):
    out = {}
    for name, v in (params or {}).items():
        if v is MARKER:
            out[name] = BiSeries.marker(order)
        elif is_rational(v):
            out[name] = (BiSeries.constant(v, order) if bivariate
                         else Series.constant(v, order))
        else:
            raise TypeError(f"param {name!r} must be rational or MARKER")
    return out


def solve_series(spec: SystemSpec, order: int, params=None):
    """Exact series solution through x^order.

    Returns a list of `Series` (or `BiSeries` when a param is MARKER).
    Raises IllFoundedError if a settled coefficient changes between
    passes, and ValueError if a solution coefficient is negative.
    """
    bivariate = any(v is MARKER for v in (params or {}).values())
    cls = BiSeries if bivariate else Series
    c = [cls(0) for _ in range(spec.k)]
    for p in range(order + 1):
        xs = cls.x(p)
        ps = _ring_params(params, p, bivariate)
        cur = [_extend(ci, p, cls) for ci in c]
        new = list(spec.rhs(xs, cur, ps))
        if p > 0:
            for i in range(spec.k):
                if new[i].truncate(p - 1) != c[i]:
                    raise IllFoundedError(
                        f"{spec.name or 'system'}: settled coefficients of "
                        f"{spec.unknowns[i]} changed at pass {p}")
        c = new
    # one verification pass: the solution must reproduce itself exactly
    xs = cls.x(order)
    ps = _ring_params(params, order, bivariate)
    again = list(spec.rhs(xs, c, ps))
    for i in range(spec.k):
        if again[i] != c[i]:
            raise IllFoundedError(
                f"{spec.name or 'system'}: not a fixed point at order {order}")
    _check_nonnegative(spec, c)
    return c


def _extend(s, order, cls):
    """Re-truncate a series to `order`, padding with zeros if needed."""
    if s.order >= order:
        return s.truncate(order)
    if cls is Series:
        return Series(order, list(s.coeffs) + [rat(0)] * (order - s.order))
    rows = [list(r) for r in s.rows] + [[] for _ in range(order - s.order)]
    return BiSeries(order, rows)


def _check_nonnegative(spec, c):
    for i, s in enumerate(c):
        it = (s.coeffs if isinstance(s, Series)
              else (v for row in s.rows for v in row))
        for v in it:
            if v < 0:
                raise ValueError(
                    f"{spec.name or 'system'}: negative coefficient in "
                    f"solution {spec.unknowns[i]}")


# ---------------------------------------------------------------------------
# numeric mode

def _mp_params(params):
    return {k: to_mp(v) for k, v in (params or {}).items()}


def solve_numeric(spec: SystemSpec, x, params=None, init=None,
                  tol=None, max_iter=200, warmup=40):
    """Minimal non-negative fixed point at numeric x (below branch point).

    Plain iteration warms up from `init` (or zero), then Newton polishes
    to residual infinity-norm below `tol` (default 10^-25).  Divergence
    raises SolverError: x is at or beyond the branch point, or the start
    was outside the attraction basin.
    """
    x = to_mp(x)
    ps = _mp_params(params)
    tol = to_mp(tol) if tol is not None else mpf(10) ** -25
    c = [to_mp(v) for v in init] if init is not None else [mpf(0)] * spec.k
    cap = mpf(10) ** 12
    for _ in range(warmup):
        try:
            c2 = [value_of(v) for v in spec.rhs(x, c, ps)]
        except (ZeroDivisionError, ValueError) as e:
            raise SolverError(f"iteration left analyticity domain: {e}")
        if any(abs(v) > cap for v in c2):
            raise SolverError(f"iteration diverged at x={mp.nstr(x, 10)}")
        c = c2
    for _ in range(max_iter):
        jets = seed_values(c)
        try:
            f = spec.rhs(x, jets, ps)
        except (ZeroDivisionError, ValueError) as e:
            raise SolverError(f"Newton left analyticity domain: {e}")
        resid = [c[i] - f[i].v for i in range(spec.k)]
        if max(abs(r) for r in resid) < tol:
            return c
        a = [[(1 if i == j else 0) - f[i].g[j] for j in range(spec.k)]
             for i in range(spec.k)]
        try:
            step = lu_solve(a, resid)
        except SolverError:
            raise SolverError(f"singular Newton system at x={mp.nstr(x, 10)}")
        c = [c[i] - step[i] for i in range(spec.k)]
        if any(abs(v) > cap for v in c):
            raise SolverError(f"Newton diverged at x={mp.nstr(x, 10)}")
    raise SolverError(f"no convergence after {max_iter} Newton steps "
                      f"at x={mp.nstr(x, 10)}")


def solve_numeric_jets(spec: SystemSpec, x, params=None, init=None,
                       seeds=("x",), second=False, tol=None):
    """Fixed point plus implicit partials with respect to `seeds`.

    Seeds name "x" and/or parameter names.  First partials come from
    (I - J) c' = F_theta; second partials reuse the same factorization
    with the curvature right-hand side.
    """
    x = to_mp(x)
    ps = _mp_params(params)
    cvals = solve_numeric(spec, x, ps, init=init, tol=tol)
    k, s = spec.k, len(seeds)

    def lifted(second_pass, cjets):
        names = list(seeds)
        xj = (NumericValue.seed(x, names.index("x"), s, second_pass)
              if "x" in names else NumericValue.lift(x, s, second_pass))
        pjets = {}
        for name, v in ps.items():
            if name in names:
                pjets[name] = NumericValue.seed(v, names.index(name), s,
                                                second_pass)
            else:
                pjets[name] = NumericValue.lift(v, s, second_pass)
        return spec.rhs(xj, cjets, pjets)

    # J wrt unknowns from a separate unknown-seeded evaluation
    uj = seed_values(cvals)
    psj = {n: NumericValue.lift(v, k, False) for n, v in ps.items()}
    fu = spec.rhs(NumericValue.lift(x, k, False), uj, psj)
    jmat = [[fu[i].g[j] for j in range(k)] for i in range(k)]
    a = [[(1 if i == j else 0) - jmat[i][j] for j in range(k)] for i in range(k)]
    lu, perm, _ = lu_factor(a)

    f_theta = lifted(False, [NumericValue.lift(v, s, False) for v in cvals])
    grads = []
    for t in range(s):
        col = lu_solve_factored(lu, perm, [f_theta[i].g[t] for i in range(k)])
        grads.append(col)
    cgrad = [[grads[t][i] for t in range(s)] for i in range(k)]  # [unknown][seed]

    if not second:
        return [NumericValue(cvals[i], cgrad[i]) for i in range(k)]

    cjets = [NumericValue(cvals[i], list(cgrad[i]),
                          [[mpf(0)] * s for _ in range(s)]) for i in range(k)]
    f2 = lifted(True, cjets)
    hess = [[[mpf(0)] * s for _ in range(s)] for _ in range(k)]
    for p in range(s):
        for q in range(p, s):
            col = lu_solve_factored(lu, perm, [f2[i].h[p][q] for i in range(k)])
            for i in range(k):
                hess[i][p][q] = col[i]
                hess[i][q][p] = col[i]
    return [NumericValue(cvals[i], cgrad[i], hess[i]) for i in range(k)]


def jacobian(spec: SystemSpec, x, c, params=None):
    """Matrix of dF_i/dC_j at the given numeric point."""
    x = to_mp(x)
    ps = _mp_params(params)
    jets = seed_values([to_mp(v) for v in c])
    psj = {n: NumericValue.lift(v, spec.k, False) for n, v in ps.items()}
    f = spec.rhs(NumericValue.lift(x, spec.k, False), jets, psj)
    return [[f[i].g[j] for j in range(spec.k)] for i in range(spec.k)]
