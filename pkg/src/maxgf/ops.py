"""Mode-generic analytic operations.

Kernel and system right-hand sides are written once against these
functions and run unchanged on exact series (`Series`/`BiSeries`), on
plain mpmath floats, and on derivative-carrying `NumericValue` jets.
Addition/multiplication/division go through operator overloading; only
the transcendental constructions need explicit dispatch.
"""

from __future__ import annotations

from .series import Series, BiSeries
from .series import exp_series as _s_exp, exp_ge as _s_exp_ge
from .series import log_inv as _s_log_inv, log_inv_ge as _s_log_inv_ge
from . import numerics as _num


def exp(f):
    if isinstance(f, (Series, BiSeries)):
        return _s_exp(f)
    return _num.nexp(f)


def exp_ge(f, k: int):
    if isinstance(f, (Series, BiSeries)):
        return _s_exp_ge(f, k)
    return _num.nexp_ge(f, k)


def expm1(f):
    """exp(f) - 1, the non-empty set construction."""
    return exp_ge(f, 1)


def log_inv(f):
    if isinstance(f, (Series, BiSeries)):
        return _s_log_inv(f)
    return _num.nlog_inv(f)


def log_inv_ge(f, k: int):
    if isinstance(f, (Series, BiSeries)):
        return _s_log_inv_ge(f, k)
    g = _num.nlog_inv(f)
    term = f
    for r in range(1, k):
        if r > 1:
            term = term * f
        g = g - term / r
    return g


def one_like(f):
    """Multiplicative unit in the same ring as f."""
    if isinstance(f, Series):
        return Series.constant(1, f.order)
    if isinstance(f, BiSeries):
        return BiSeries.constant(1, f.order)
    return _num._const_like(f, 1)


def zero_like(f):
    if isinstance(f, Series):
        return Series(f.order)
    if isinstance(f, BiSeries):
        return BiSeries(f.order)
    return _num._const_like(f, 0)
