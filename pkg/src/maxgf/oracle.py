"""Exhaustive ground truth at desk scale.

Labeled graphs on n <= 8 vertices are edge bitmasks over the C(n,2)
vertex pairs in lexicographic order.  For each family the sweep walks
every mask, filters by membership, and accumulates exact censuses of
maximal independent sets and maximal matchings, with size distributions
and marked-vertex ("triple") counts at three levels: all graphs,
connected graphs, and blocks (the single edge plus 2-connected graphs).

The sweep is embarrassingly parallel over contiguous mask ranges;
workers return additive tallies, so results are independent of the
thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

MAX_N = 8
MAX_N_GENERAL = 7

__all__ = ["LabeledGraph", "member", "maximal_is_census",
           "maximal_matching_census", "class_census", "census_run",
           "CountTable", "pair_list"]


def pair_list(n: int):
    return list(combinations(range(n), 2))


@dataclass(frozen=True)
class LabeledGraph:
    """n <= 8 vertices; edges as a bitmask over lexicographic pairs."""

    n: int
    mask: int

    def edges(self):
        ps = pair_list(self.n)
        return [ps[i] for i in range(len(ps)) if (self.mask >> i) & 1]

    def adjacency(self):
        adj = [0] * self.n
        for a, b in self.edges():
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return adj


# ---------------------------------------------------------------------------
# membership

def _is_forest(n, edges):
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def _block_edge_sets(n, edges):
    """Edge-index sets of the biconnected components (iterative DFS)."""
    adj = [[] for _ in range(n)]
    for i, (a, b) in enumerate(edges):
        adj[a].append((b, i))
        adj[b].append((a, i))
    visited = [False] * n
    depth = [0] * n
    low = [0] * n
    estack = []
    out = []
    for s in range(n):
        if visited[s]:
            continue
        stack = [(s, -1, iter(adj[s]))]
        visited[s] = True
        while stack:
            u, pe, it = stack[-1]
            advanced = False
            for (v, ei) in it:
                if ei == pe:
                    continue
                if visited[v]:
                    if depth[v] < depth[u]:
                        estack.append(ei)
                        low[u] = min(low[u], depth[v])
                else:
                    visited[v] = True
                    depth[v] = low[v] = depth[u] + 1
                    estack.append(ei)
                    stack.append((v, ei, iter(adj[v])))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            if stack:
                pu = stack[-1][0]
                low[pu] = min(low[pu], low[u])
                if low[u] >= depth[pu]:
                    comp = []
                    while True:
                        e = estack.pop()
                        comp.append(e)
                        if e == pe:
                            break
                    out.append(comp)
    return out


def _is_cactus(n, edges):
    # every block an edge or a simple cycle: |block edges| == |block vertices|
    if not edges:
        return True
    for comp in _block_edge_sets(n, edges):
        if len(comp) == 1:
            continue
        vs = set()
        for ei in comp:
            vs.update(edges[ei])
        if len(comp) != len(vs):
            return False
    return True


def _is_sp(n, edges):
    # series-parallel reduction: strip isolated/pendant vertices, suppress
    # degree-2 vertices (collapsing any parallel edge that appears); the
    # graph is K4-minor-free iff this empties it
    adj = [set() for _ in range(n)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    alive = set(range(n))
    queue = [v for v in alive if len(adj[v]) <= 2]
    while queue:
        v = queue.pop()
        if v not in alive or len(adj[v]) > 2:
            continue
        ns = list(adj[v])
        for w in ns:
            adj[w].discard(v)
        adj[v].clear()
        alive.discard(v)
        if len(ns) == 2:
            a, b = ns
            if b not in adj[a]:
                adj[a].add(b)
                adj[b].add(a)
        for w in ns:
            if w in alive and len(adj[w]) <= 2:
                queue.append(w)
    return not alive


_MEMBER = {"forest": _is_forest, "cactus": _is_cactus, "sp": _is_sp}


def member(family: str, g: LabeledGraph) -> bool:
    """Does the graph belong to the (component-stable) family?"""
    return _MEMBER[family](g.n, g.edges())


# ---------------------------------------------------------------------------
# connectivity levels

def _is_connected(n, adj):
    if n == 0:
        return False
    seen = 1
    frontier = [0]
    while frontier:
        v = frontier.pop()
        nb = adj[v] & ~seen
        while nb:
            w = (nb & -nb).bit_length() - 1
            seen |= 1 << w
            frontier.append(w)
            nb &= nb - 1
    return seen == (1 << n) - 1


def _is_block(n, adj, n_edges):
    """Single edge, or 2-connected on n >= 3 vertices."""
    if n == 2:
        return n_edges == 1
    if n < 3 or not _is_connected(n, adj):
        return False
    for v in range(n):
        rest = [adj[u] & ~(1 << v) for u in range(n) if u != v]
        idx = [u for u in range(n) if u != v]
        remap = {u: i for i, u in enumerate(idx)}
        seen = {idx[0]}
        frontier = [idx[0]]
        while frontier:
            u = frontier.pop()
            nb = adj[u] & ~(1 << v)
            while nb:
                w = (nb & -nb).bit_length() - 1
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
                nb &= nb - 1
        if len(seen) != n - 1:
            return False
    return True


# ---------------------------------------------------------------------------
# per-graph censuses

def maximal_is_census(g: LabeledGraph) -> dict:
    """size -> number of maximal independent sets (exhaustive subsets)."""
    n, adj = g.n, g.adjacency()
    out = {}
    for sub in range(1 << n):
        if not _is_maximal_independent(n, adj, sub):
            continue
        k = bin(sub).count("1")
        out[k] = out.get(k, 0) + 1
    return out


def _is_maximal_independent(n, adj, sub):
    dominated = sub
    m = sub
    while m:
        v = (m & -m).bit_length() - 1
        if adj[v] & sub:
            return False
        dominated |= adj[v]
        m &= m - 1
    return dominated == (1 << n) - 1


def _matchings(edges, maximal_only=False):
    """Yield matchings as (used-vertex mask, edge count)."""
    out = []
    L = len(edges)

    def rec(i, used, cnt):
        if i == L:
            if maximal_only:
                for a, b in edges:
                    if not (used >> a) & 1 and not (used >> b) & 1:
                        return
            out.append((used, cnt))
            return
        rec(i + 1, used, cnt)
        a, b = edges[i]
        if not (used >> a) & 1 and not (used >> b) & 1:
            rec(i + 1, used | (1 << a) | (1 << b), cnt + 1)

    rec(0, 0, 0)
    return out


def maximal_matching_census(g: LabeledGraph) -> dict:
    """edge-count -> number of maximal matchings."""
    out = {}
    for _, cnt in _matchings(g.edges(), maximal_only=True):
        out[cnt] = out.get(cnt, 0) + 1
    return out


def _independent_subsets(n, adj, allowed_mask):
    """All independent subsets within `allowed_mask` (includes empty)."""
    verts = [v for v in range(n) if (allowed_mask >> v) & 1]
    out = []

    def rec(i, cur):
        if i == len(verts):
            out.append(cur)
            return
        rec(i + 1, cur)
        v = verts[i]
        if not (adj[v] & cur):
            rec(i + 1, cur | (1 << v))

    rec(0, 0)
    return out


def _special_is_triples(n, adj):
    """Count (J', v): v not adjacent to the independent J', J'+v maximal."""
    total = 0
    for sub in range(1 << n):
        if not _is_maximal_independent(n, adj, sub):
            continue
        total += bin(sub).count("1")   # remove any v in J
    return total


def _special_matching_triples(n, edges):
    """Count (M, v): v unmatched and M maximal once v is set aside."""
    total = 0
    for v in range(n):
        sub_edges = [(a, b) for (a, b) in edges if a != v and b != v]
        keep = []
        for used, _cnt in _matchings(sub_edges, maximal_only=True):
            keep.append(used)
        total += len(keep)
    return total


# ---------------------------------------------------------------------------
# sweeps

def _empty_level(triples=True):
    d = {"total": 0, "joint": {}}
    if triples:
        d["triples"] = [0, 0, 0]
    return d


def _new_tally(want_triples):
    levels = lambda: {"all": _empty_level(False),
                      "connected": _empty_level(want_triples),
                      "two_connected": _empty_level(want_triples)}
    return {"mis": levels(), "matching": levels()}


def _merge_tally(a, b):
    for st in a:
        for lv in a[st]:
            a[st][lv]["total"] += b[st][lv]["total"]
            for k, v in b[st][lv]["joint"].items():
                a[st][lv]["joint"][k] = a[st][lv]["joint"].get(k, 0) + v
            if "triples" in a[st][lv]:
                for i in range(3):
                    a[st][lv]["triples"][i] += b[st][lv]["triples"][i]
    return a


def _accumulate_graph(tally, n, mask, edges, adj, want_triples):
    connected = _is_connected(n, adj)
    block = _is_block(n, adj, len(edges))

    mis_joint = {}
    t0 = t1 = 0
    for sub in range(1 << n):
        if _is_maximal_independent(n, adj, sub):
            k = bin(sub).count("1")
            mis_joint[k] = mis_joint.get(k, 0) + 1
            t0 += k
            t1 += n - k
    total_mis = sum(mis_joint.values())
    for lv, on in (("all", True), ("connected", connected)):
        if not on:
            continue
        d = tally["mis"][lv]
        d["total"] += total_mis
        for k, v in mis_joint.items():
            d["joint"][k] = d["joint"].get(k, 0) + v
    if connected and want_triples:
        tr = tally["mis"]["connected"]["triples"]
        tr[0] += t0
        tr[1] += t1
        tr[2] += _special_is_triples(n, adj)

    m_joint = {}
    mt0 = mt1 = 0
    for _used, cnt in _matchings(edges, maximal_only=True):
        m_joint[cnt] = m_joint.get(cnt, 0) + 1
        mt0 += n - 2 * cnt
        mt1 += 2 * cnt
    total_m = sum(m_joint.values())
    for lv, on in (("all", True), ("connected", connected)):
        if not on:
            continue
        d = tally["matching"][lv]
        d["total"] += total_m
        for k, v in m_joint.items():
            d["joint"][k] = d["joint"].get(k, 0) + v
    if connected and want_triples:
        tr = tally["matching"]["connected"]["triples"]
        tr[0] += mt0
        tr[1] += mt1
        tr[2] += _special_matching_triples(n, edges)

    if block and want_triples:
        # block level: decorations need not be maximal
        tr = tally["mis"]["two_connected"]["triples"]
        full = (1 << n) - 1
        for sub in _independent_subsets(n, adj, full):
            k = bin(sub).count("1")
            nbr = 0
            m = sub
            while m:
                v = (m & -m).bit_length() - 1
                nbr |= adj[v]
                m &= m - 1
            d1 = bin(nbr & ~sub).count("1")
            tr[0] += k
            tr[1] += d1
            tr[2] += n - k - d1
        tally["mis"]["two_connected"]["total"] += 1
        trm = tally["matching"]["two_connected"]["triples"]
        for used, cnt in _matchings(edges, maximal_only=False):
            free = full & ~used
            for sub in _independent_subsets(n, adj, free):
                k = bin(sub).count("1")
                trm[0] += k
                trm[1] += 2 * cnt
                trm[2] += n - k - 2 * cnt
        tally["matching"]["two_connected"]["total"] += 1


def _sweep_range(family, n, lo, hi, want_triples):
    tally = _new_tally(want_triples)
    ps = pair_list(n)
    np = len(ps)
    memberfn = _MEMBER[family]
    for mask in range(lo, hi):
        edges = [ps[i] for i in range(np) if (mask >> i) & 1]
        if not memberfn(n, edges):
            continue
        adj = [0] * n
        for a, b in edges:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        _accumulate_graph(tally, n, mask, edges, adj, want_triples)
    return tally


def census_run(family: str, n: int, threads: int = 1, want_triples=None):
    """Full sweep for one family at one n; returns the nested tally."""
    if family not in _MEMBER:
        raise ValueError(f"unknown family {family!r}")
    if n > MAX_N or (n > MAX_N_GENERAL and family != "forest"):
        raise ValueError(f"n={n} beyond oracle ceiling for {family}")
    if want_triples is None:
        want_triples = n <= 6
    if n == 0:
        tally = _new_tally(want_triples)
        for st in ("mis", "matching"):
            tally[st]["all"]["total"] = 1
            tally[st]["all"]["joint"] = {0: 1}
        return tally
    nmasks = 1 << len(pair_list(n))
    threads = max(1, threads)
    if threads == 1 or nmasks < 4096:
        return _sweep_range(family, n, 0, nmasks, want_triples)
    chunk = (nmasks + threads - 1) // threads
    ranges = [(i, min(i + chunk, nmasks)) for i in range(0, nmasks, chunk)]
    tally = _new_tally(want_triples)
    with ProcessPoolExecutor(max_workers=threads) as ex:
        futs = [ex.submit(_sweep_range, family, n, lo, hi, want_triples)
                for lo, hi in ranges]
        for f in futs:
            _merge_tally(tally, f.result())
    return tally


# ---------------------------------------------------------------------------
# CLI-facing table

@dataclass
class CountTable:
    family: str
    structure: str
    level: str                      # all | connected | two_connected
    totals: dict = field(default_factory=dict)    # n -> int
    joint: dict = field(default_factory=dict)     # n -> {size: int}
    triples: dict = field(default_factory=dict)   # n -> [t0, t1, t2]

    def check_marginals(self) -> bool:
        return all(sum(self.joint.get(n, {}).values()) == t
                   for n, t in self.totals.items())


def class_census(family: str, structure: str, max_n: int,
                 level: str = "all", threads: int = 1) -> CountTable:
    """Censuses for n = 0..max_n at one level (see module doc)."""
    if level not in ("all", "connected", "two_connected"):
        raise ValueError(f"unknown level {level!r}")
    table = CountTable(family, structure, level)
    for n in range(max_n + 1):
        tally = census_run(family, n, threads=threads)
        d = tally[structure][level]
        table.totals[n] = d["total"]
        table.joint[n] = dict(sorted(d["joint"].items()))
        if "triples" in d:
            table.triples[n] = list(d["triples"])
    return table
