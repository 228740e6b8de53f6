"""Series-parallel network systems and the vertex-rooting layer.

Networks are SP graphs with two ordered poles; writing S for series
networks, P for parallel networks and e for the bare root edge, every
network is e + S + P.  Pole types are 0/1/2 (in the independent set /
matched, at distance one / matched, other).  D is eliminated throughout
(D = e + S + P), leaving a positive strongly connected system in the
twelve unknowns S_ij, P_ij over ij in {00,01,02,11,12,22}.

The pointed-block functions B0, B1, B2 are then assembled from the
solved network values through ring (R), bundle (M) and R-M tree-edge
counts of the decomposition tree, rooted at the discounted vertex.

Everything is mode-generic: the same expressions run on exact series
and on numeric jets.  The edge-marking variable is fixed to 1.
"""

from __future__ import annotations

from .ops import exp, exp_ge, one_like
from .systems import SystemSpec

PAIRS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
N_UNKNOWNS = 12  # 6 series + 6 parallel


def _sym(d, i, j):
    return d[(i, j)] if i <= j else d[(j, i)]


def _unpack(c):
    s = {p: c[i] for i, p in enumerate(PAIRS)}
    p = {q: c[6 + i] for i, q in enumerate(PAIRS)}
    return s, p


# ---------------------------------------------------------------------------
# independent-set decoration

MIS_EDGES = {(0, 1): 1, (2, 2): 1}          # root edge by pole types
MATCH_EDGES = {(0, 2): 1, (1, 1): 1, (2, 2): 1}


def _mis_network(x, c, a):
    a0, a1, a2 = a
    S, P = _unpack(c)

    def D(i, j):
        return _sym(S, i, j) + _sym(P, i, j) + MIS_EDGES.get((min(i, j), max(i, j)), 0)

    def DS(i, j):  # non-series networks: e + P
        return _sym(P, i, j) + MIS_EDGES.get((min(i, j), max(i, j)), 0)

    news = {}
    for (i, j) in PAIRS:
        news[(i, j)] = (D(i, 0) * x * a0 * DS(0, j)
                        + (D(i, 1) + D(i, 2)) * x * a1 * DS(1, j)
                        + (D(i, 1) * a1 + D(i, 2) * a2) * x * DS(2, j))

    # parallel counts read the freshly composed series networks so one
    # pass of the map gains a full x-order (the P equations carry no
    # bare x factor of their own); fixed points are unchanged
    s00, s01, s02 = news[(0, 0)], news[(0, 1)], news[(0, 2)]
    s11, s12, s22 = news[(1, 1)], news[(1, 2)], news[(2, 2)]
    e22 = exp(s22)
    newp = {
        (0, 0): exp_ge(s00, 2),
        (0, 1): (exp_ge(s01 + s02, 1) + exp_ge(s01, 2)
                 + exp_ge(s01, 1) * exp_ge(s02, 1)),
        (0, 2): exp_ge(s02, 2),
        (1, 1): (exp_ge(s11, 2)
                 + exp_ge(s11, 1) * (exp(2 * s12 + s22) + exp_ge(2 * s12 + s22, 1))
                 + 2 * exp_ge(s12, 1) ** 2 * e22),
        (1, 2): (exp_ge(s12, 1) * e22 + exp_ge(s12, 2)
                 + exp_ge(s12, 1) * exp_ge(s22, 1)),
        (2, 2): exp_ge(s22, 1) + exp_ge(s22, 2),
    }
    return news, newp


def mis_pointed_blocks(x, c, a, m11_tail="census"):
    """B0, B1, B2 for SP blocks decorated with an independent set.

    `m11_tail` picks the no-double-witness part of the type-(1,1)
    bundle count: "census" is the inclusion-exclusion form validated
    against exhaustive 2-connected counts; "grouped" is an alternative
    half/triple grouping kept for comparison (it undercounts).
    """
    a0, a1, a2 = a
    S, P = _unpack(c)

    def D(i, j):
        return _sym(S, i, j) + _sym(P, i, j) + MIS_EDGES.get((min(i, j), max(i, j)), 0)

    def DS(i, j):
        return _sym(P, i, j) + MIS_EDGES.get((min(i, j), max(i, j)), 0)

    s00, s01, s02 = S[(0, 0)], S[(0, 1)], S[(0, 2)]
    s11, s12, s22 = S[(1, 1)], S[(1, 2)], S[(2, 2)]
    e22 = exp(s22)
    e02 = exp(s02)

    m = {}
    m[(0, 0)] = exp_ge(s00, 3)
    m[(0, 2)] = exp_ge(s02, 3)
    m[(2, 2)] = exp_ge(s22, 2) + exp_ge(s22, 3)
    m[(0, 1)] = (exp_ge(s01 + s02, 2) + exp_ge(s02, 2) * s01
                 + exp_ge(s02, 1) * s01 ** 2 / 2 + exp_ge(s01, 3) * e02)
    m[(1, 2)] = (exp_ge(s12, 3) * e22 + s12 * exp_ge(s22, 2)
                 + exp_ge(s22, 1) * s12 ** 2 / 2
                 + exp_ge(s12, 1) * exp_ge(s22, 1) + exp_ge(s12, 2))
    core11 = (exp(2 * s12 + s22) * (exp_ge(s11, 2) + exp_ge(s11, 3))
              + exp_ge(2 * s12 + s22, 1) * (s11 + s11 ** 2 / 2)
              + exp_ge(2 * s12 + s22, 2) * s11)
    if m11_tail == "census":
        tail = 2 * exp_ge(s12, 1) ** 2 * e22 - s12 ** 2
    elif m11_tail == "grouped":
        tail = (e22 + exp_ge(s22, 1)) * s12 ** 2 / 2 + 2 * exp_ge(s12, 3) * e22
    else:
        raise ValueError(f"unknown m11_tail {m11_tail!r}")
    m[(1, 1)] = core11 + tail

    t_m = [x * (a0 * _sym(m, i, 0) + a1 * _sym(m, i, 1) + a2 * _sym(m, i, 2))
           for i in range(3)]

    def A(j, i):
        return (D(j, 0) * a0 * DS(0, i)
                + (D(j, 1) + D(j, 2)) * a1 * DS(1, i)
                + (D(j, 1) * a1 + D(j, 2) * a2) * DS(2, i))

    av = {}
    for (i, j) in ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)):
        av[(i, j)] = A(i, j)

    def Av(i, j):
        return _sym(av, i, j)

    x2h = x * x / 2
    t_r = [None] * 3
    for i in (0, 2):
        t_r[i] = x2h * (DS(i, 0) * a0 * Av(0, i)
                        + DS(i, 1) * a1 * (Av(1, i) + Av(2, i))
                        + DS(i, 2) * (a1 * Av(1, i) + a2 * Av(2, i)))
    t_r[1] = x2h * (DS(1, 0) * a0 * (Av(0, 1) + Av(0, 2))
                    + DS(2, 0) * a0 * Av(0, 1)
                    + DS(2, 2) * (a2 * Av(2, 1) + a1 * Av(1, 1))
                    + DS(1, 2) * (2 * a1 * (Av(1, 1) + Av(1, 2))
                                  + a2 * (Av(2, 1) + Av(2, 2)))
                    + DS(1, 1) * a1 * (Av(1, 1) + Av(2, 1) + Av(1, 2) + Av(2, 2)))

    def Sv(i, j):
        return _sym(S, i, j)

    def Pv(i, j):
        return _sym(P, i, j)

    t_rm = [None] * 3
    for i in (0, 2):
        t_rm[i] = x * (a0 * Sv(i, 0) * Pv(i, 0)
                       + a1 * (Sv(i, 1) * (Pv(i, 1) + Pv(i, 2)) + Sv(i, 2) * Pv(i, 1))
                       + a2 * Sv(i, 2) * Pv(i, 2))
    t_rm[1] = x * (a0 * (Sv(1, 0) * (Pv(1, 0) + Pv(2, 0)) + Sv(2, 0) * Pv(1, 0))
                   + a2 * (Sv(1, 2) * (Pv(1, 2) + Pv(2, 2)) + Sv(2, 2) * Pv(1, 2))
                   + a1 * (Sv(1, 1) * (Pv(1, 1) + 2 * Pv(1, 2) + Pv(2, 2))
                           + 2 * Sv(1, 2) * (Pv(1, 1) + Pv(1, 2))
                           + Sv(2, 2) * Pv(1, 1)))

    # single-edge blocks pointed by type: the partner of an I-vertex has
    # type 1, of a type-1 vertex type 0, of a type-2 vertex type 2
    edge = (x * a1, x * a0, x * a2)
    return tuple(t_m[i] + t_r[i] - t_rm[i] + edge[i] for i in range(3))


# ---------------------------------------------------------------------------
# matching decoration

def _match_network(x, c, a):
    a0, a1, a2 = a
    S, P = _unpack(c)

    def D(i, j):
        return _sym(S, i, j) + _sym(P, i, j) + MATCH_EDGES.get((min(i, j), max(i, j)), 0)

    def DS(i, j):
        return _sym(P, i, j) + MATCH_EDGES.get((min(i, j), max(i, j)), 0)

    news = {}
    for (i, j) in PAIRS:
        news[(i, j)] = (DS(i, 0) * x * a0 * D(0, j)
                        + DS(i, 1) * x * a1 * D(2, j)
                        + DS(i, 2) * x * (a1 * D(1, j) + a2 * D(2, j)))

    # fresh series values for the same one-order-per-pass reason as above
    s00, s01, s02 = news[(0, 0)], news[(0, 1)], news[(0, 2)]
    s11, s12, s22 = news[(1, 1)], news[(1, 2)], news[(2, 2)]
    e22 = exp(s22)
    newp = {
        (0, 0): exp_ge(s00, 2),
        (0, 1): s01 * (exp(s02) + exp_ge(s02, 1)),
        (0, 2): exp_ge(s02, 1) + exp_ge(s02, 2),
        (1, 1): (s11 + 2 * s12 ** 2) * e22 + (1 + s11) * exp_ge(s22, 1),
        (1, 2): s12 * (e22 + exp_ge(s22, 1)),
        (2, 2): exp_ge(s22, 1) + exp_ge(s22, 2),
    }
    return news, newp


def match_pointed_blocks(x, c, a):
    """B0, B1, B2 for SP blocks decorated with a matching."""
    a0, a1, a2 = a
    S, P = _unpack(c)

    def D(i, j):
        return _sym(S, i, j) + _sym(P, i, j) + MATCH_EDGES.get((min(i, j), max(i, j)), 0)

    def DS(i, j):
        return _sym(P, i, j) + MATCH_EDGES.get((min(i, j), max(i, j)), 0)

    s01, s02 = S[(0, 1)], S[(0, 2)]
    s11, s12, s22 = S[(1, 1)], S[(1, 2)], S[(2, 2)]
    e22 = exp(s22)

    m = {}
    m[(0, 0)] = exp_ge(S[(0, 0)], 3)
    m[(0, 1)] = s01 * (exp_ge(s02, 1) + exp_ge(s02, 2))
    m[(0, 2)] = exp_ge(s02, 2) + exp_ge(s02, 3)
    m[(1, 1)] = (exp_ge(s22, 2) * (1 + s11) + exp_ge(s22, 1) * (s11 + s12 ** 2)
                 + e22 * s12 ** 2)
    m[(1, 2)] = s12 * (exp_ge(s22, 1) + exp_ge(s22, 2))
    m[(2, 2)] = exp_ge(s22, 2) + exp_ge(s22, 3)

    t_m = [x * (a0 * _sym(m, i, 0) + a1 * _sym(m, i, 1) + a2 * _sym(m, i, 2))
           for i in range(3)]

    def A(j, i):
        return (DS(j, 0) * a0 * D(0, i)
                + DS(j, 1) * a1 * D(2, i)
                + DS(j, 2) * (a1 * D(1, i) + a2 * D(2, i)))

    av = {}
    for (i, j) in ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)):
        av[(i, j)] = A(i, j)

    def Av(i, j):
        return _sym(av, i, j)

    x2h = x * x / 2
    t_r = [None] * 3
    for i in (0, 2):
        t_r[i] = x2h * (DS(i, 0) * a0 * Av(0, i)
                        + DS(i, 1) * a1 * Av(2, i)
                        + DS(i, 2) * (a1 * Av(1, i) + a2 * Av(2, i)))
    t_r[1] = x2h * (DS(1, 0) * a0 * Av(0, 2)
                    + DS(2, 0) * a0 * Av(0, 1)
                    + DS(1, 1) * a1 * Av(2, 2)
                    + DS(1, 2) * (2 * a1 * Av(1, 2) + a2 * Av(2, 2))
                    + DS(2, 2) * (a1 * Av(1, 1) + a2 * Av(2, 1)))

    def Sv(i, j):
        return _sym(S, i, j)

    def Pv(i, j):
        return _sym(P, i, j)

    t_rm = [None] * 3
    for i in (0, 2):
        t_rm[i] = x * (a0 * Sv(i, 0) * Pv(i, 0)
                       + a1 * (Sv(i, 1) * Pv(i, 2) + Sv(i, 2) * Pv(i, 1))
                       + a2 * Sv(i, 2) * Pv(i, 2))
    t_rm[1] = x * (a0 * (Sv(1, 0) * Pv(2, 0) + Sv(2, 0) * Pv(1, 0))
                   + a2 * (Sv(1, 2) * Pv(2, 2) + Sv(2, 2) * Pv(1, 2))
                   + a1 * (Sv(1, 1) * Pv(2, 2) + 2 * Sv(1, 2) * Pv(1, 2)
                           + Sv(2, 2) * Pv(1, 1)))

    # single matched edge: partner of an I-vertex is marginal, a matched
    # vertex pairs with a matched vertex, a marginal one with type 0 or 2
    edge = (x * a2, x * a1, x * (a0 + a2))
    return tuple(t_m[i] + t_r[i] - t_rm[i] + edge[i] for i in range(3))


def network_spec(structure: str) -> SystemSpec:
    """The 12-unknown SP network system with type weights as params."""
    eqs = _mis_network if structure == "mis" else _match_network
    names = tuple(f"S{i}{j}" for (i, j) in PAIRS) + \
        tuple(f"P{i}{j}" for (i, j) in PAIRS)

    def rhs(x, c, p):
        a = (p["a0"], p["a1"], p["a2"])
        news, newp = eqs(x, c, a)
        return [news[q] for q in PAIRS] + [newp[q] for q in PAIRS]

    return SystemSpec(k=N_UNKNOWNS, rhs=rhs, name=f"sp-network-{structure}",
                      unknowns=names)


def pointed_blocks_fn(structure: str):
    if structure == "mis":
        return mis_pointed_blocks
    if structure == "matching":
        return match_pointed_blocks
    raise ValueError(f"unknown structure {structure!r}")
