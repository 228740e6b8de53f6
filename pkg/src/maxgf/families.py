"""Family x structure models: block kernels plugged into the pointed
connected-graph systems, plus the derived counting series.

The connected-level system for an independent-set decoration is

    C0 = exp(B0(x, y0*C0, y1*(C1+C2), y1*C1))
    C1 = (exp(B1(...)) - 1) * C2
    C2 = exp(B2(...))

and for a matching decoration

    C0 = exp(B0(x, z0*C0, z1*C2, z1*C1))
    C1 = C2 * B1(...)
    C2 = exp(B2(...))

with the size marker on y0 (independent vertices) resp. z1 (matched
vertices; structure size in edges is half the marker degree).  Totals
come from dC/dx = m0*C0 + m1*C1, C = integral, G = exp(C).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from mpmath import mp, mpf

from . import ops, sp_networks
from .kernels import (BlockKernel, tree_kernel, cactus_kernel,
                      cactus_matching_variant_kernel, cacti_univariate_B)
from .numerics import NumericValue, compose_jet, to_mp
from .series import Series, BiSeries, integrate, rat
from .systems import (MARKER, SystemSpec, solve_series, solve_numeric_jets,
                      solve_numeric)

FAMILIES = ("forest", "cactus", "sp")
STRUCTURES = ("mis", "matching")

__all__ = ["FAMILIES", "STRUCTURES", "ClassRadius", "FamilyStructureModel",
           "CountingTable", "build_model", "counting_series", "pointed_series",
           "block_series"]


def _subst_args(structure, c, m0, m1):
    """Type-weight substitution of the connected-level decomposition."""
    if structure == "mis":
        return (m0 * c[0], m1 * (c[1] + c[2]), m1 * c[1])
    return (m0 * c[0], m1 * c[2], m1 * c[1])


def _c_equations(structure, x, blocks_out):
    b0, b1, b2 = blocks_out
    e2 = ops.exp(b2)
    if structure == "mis":
        return [ops.exp(b0), ops.expm1(b1) * e2, e2]
    return [ops.exp(b0), e2 * b1, e2]


@dataclass(frozen=True)
class ClassRadius:
    value: mpf
    provenance: str


def _forest_radius():
    return ClassRadius(mp.exp(-1), "exact: rho = e^-1 (rooted-tree branch point)")


def _cactus_radius():
    # c0 * B''(c0) = 1 with B the univariate cacti block EGF,
    # B'(x) = x/2 - 1/2 + 1/(2(1-x)),  B''(x) = 1/2 + 1/(2(1-x)^2)
    def cond(c):
        return c * (mpf(1) / 2 + 1 / (2 * (1 - c) ** 2)) - 1

    c0 = mp.findroot(cond, mpf("0.55"))
    bp = c0 / 2 - mpf(1) / 2 + 1 / (2 * (1 - c0))
    rho = c0 * mp.exp(-bp)
    return ClassRadius(rho, "recomputed: c0*B''(c0)=1, rho=c0*exp(-B'(c0))")


_SP_RHO_STR = "0.1102133467"


def _sp_radius():
    return ClassRadius(mpf(_SP_RHO_STR),
                       "reference constant (2-connected SP grammar, external)")


@dataclass
class FamilyStructureModel:
    """Kernel + connected-level system + class radius for one family."""

    family: str
    structure: str
    kernel: BlockKernel
    c_system: SystemSpec = field(init=False)
    series_system: SystemSpec = field(init=False)

    def __post_init__(self):
        self.c_system = SystemSpec(3, self.make_c_rhs(), name=self._name(),
                                   unknowns=("C0", "C1", "C2"))
        if self.family == "sp":
            self.series_system = _sp_combined_spec(self.structure)
        else:
            self.series_system = self.c_system

    def _name(self):
        return f"{self.family}-{self.structure}"

    @property
    def marker_params(self):
        """Param names (size marker first, the other fixed weight second)."""
        return ("m0", "m1") if self.structure == "mis" else ("m1", "m0")

    def class_radius(self) -> ClassRadius:
        if self.family == "forest":
            return _forest_radius()
        if self.family == "cactus":
            return _cactus_radius()
        return _sp_radius()

    def make_c_rhs(self, workspace: Optional[dict] = None):
        """Connected-system right-hand side; `workspace` threads warm
        starts through nested SP network solves (one dict per solver
        run; never share across threads)."""
        structure = self.structure
        if self.family != "sp":
            blocks = self.kernel.blocks

            def rhs(x, c, p):
                a = _subst_args(structure, c, p["m0"], p["m1"])
                return _c_equations(structure, x, blocks(x, *a))

            return rhs

        spec = sp_networks.network_spec(structure)
        pointed = sp_networks.pointed_blocks_fn(structure)
        ws = workspace if workspace is not None else {}

        def rhs(x, c, p):
            a = _subst_args(structure, c, p["m0"], p["m1"])
            if isinstance(x, (Series, BiSeries)):
                params = {"a0": a[0], "a1": a[1], "a2": a[2]}
                net = solve_series(spec, x.order, params)
                b = pointed(x, net, a)
            else:
                b = _sp_numeric_blocks(spec, pointed, x, a, ws)
            return _c_equations(structure, x, b)

        return rhs


def _sp_numeric_blocks(spec, pointed, x, a, ws):
    """Numeric B_i through the network solve, with implicit derivatives.

    Outer jets are composed with the network solution's local jets in
    the (x, a0, a1, a2) basis; plain values skip derivative work.
    """
    jets_in = isinstance(x, NumericValue) and x.g is not None
    second = jets_in and x.h is not None
    xv = x.v if isinstance(x, NumericValue) else to_mp(x)
    av = [v.v if isinstance(v, NumericValue) else to_mp(v) for v in a]
    params = {"a0": av[0], "a1": av[1], "a2": av[2]}
    init = ws.get("net")
    if not jets_in:
        try:
            net = solve_numeric(spec, xv, params, init=init, warmup=0,
                                max_iter=60) if init is not None else None
        except Exception:
            net = None
        if net is None:
            net = solve_numeric(spec, xv, params)
        ws["net"] = net
        return pointed(xv, net, av)
    try:
        jets = solve_numeric_jets(spec, xv, params, init=init,
                                  seeds=("x", "a0", "a1", "a2"), second=second)
    except Exception:
        jets = solve_numeric_jets(spec, xv, params, init=None,
                                  seeds=("x", "a0", "a1", "a2"), second=second)
    ws["net"] = [j.v for j in jets]
    xl = NumericValue.seed(xv, 0, 4, second)
    al = [NumericValue.seed(av[i], 1 + i, 4, second) for i in range(3)]
    b_loc = pointed(xl, jets, al)
    outer = [x if isinstance(x, NumericValue) else NumericValue.lift(x)]
    for v in a:
        outer.append(v if isinstance(v, NumericValue) else NumericValue.lift(v))
    return tuple(compose_jet(b, outer) for b in b_loc)


def _sp_combined_spec(structure: str) -> SystemSpec:
    """C-system and network system merged for one-pass series solving."""
    net = sp_networks.network_spec(structure)
    pointed = sp_networks.pointed_blocks_fn(structure)

    def rhs(x, c, p):
        a = _subst_args(structure, c[:3], p["m0"], p["m1"])
        netpart = net.rhs(x, c[3:], {"a0": a[0], "a1": a[1], "a2": a[2]})
        b = pointed(x, c[3:], a)
        return _c_equations(structure, x, b) + netpart

    return SystemSpec(3 + sp_networks.N_UNKNOWNS, rhs,
                      name=f"sp-{structure}-combined",
                      unknowns=("C0", "C1", "C2") + net.unknowns)


_KERNELS = {
    ("forest", "mis"): lambda: tree_kernel("mis"),
    ("forest", "matching"): lambda: tree_kernel("matching"),
    ("cactus", "mis"): lambda: cactus_kernel("mis"),
    ("cactus", "matching"): lambda: cactus_kernel("matching"),
}


def build_model(family: str, structure: str) -> FamilyStructureModel:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if structure not in STRUCTURES:
        raise ValueError(f"unknown structure {structure!r}")
    if family == "sp":
        net = sp_networks.network_spec(structure)
        kernel = BlockKernel("sp", structure, None, lambda *a: None,
                             network=net)
        return FamilyStructureModel(family, structure, kernel)
    return FamilyStructureModel(family, structure, _KERNELS[(family, structure)]())


def build_cactus_matching_variant_model() -> FamilyStructureModel:
    """Cactus matching with the odd-parity single-edge block term.

    Fails the block census; exists so the constants that follow from
    that reading can be computed for comparison (see singularity module
    diagnostics and the decisions discussion in the test suite).
    """
    return FamilyStructureModel("cactus", "matching",
                                cactus_matching_variant_kernel())


# ---------------------------------------------------------------------------
# derived series

@dataclass
class CountingTable:
    """n!-scaled censuses from the generating-function side."""

    family: str
    structure: str
    order: int
    totals: list            # totals[n] = number of (graph, structure) pairs
    joint: list             # joint[n][size] = count; size in vertices (mis)
    #                         or edges (matching)

    def marginal_check(self) -> bool:
        return all(sum(d.values()) == self.totals[n] if d else self.totals[n] == 0
                   for n, d in enumerate(self.joint))


def _as_int(q, what):
    num, den = q.numerator, q.denominator
    if den != 1:
        raise ValueError(f"{what} is not an integer: {q}")
    return int(num)


def _factorials(n):
    out = [1] * (n + 1)
    for i in range(1, n + 1):
        out[i] = out[i - 1] * i
    return out


def counting_series(model: FamilyStructureModel, order: int,
                    joint: bool = True) -> CountingTable:
    """Exact counts of (graph, maximal structure) pairs through n = order.

    Solves the connected system, integrates dC/dx = m0*C0 + m1*C1 and
    exponentiates.  With `joint`, the marker rides along and the joint
    table lists counts by structure size.
    """
    sub_order = max(order - 1, 0)
    m, other = model.marker_params
    params = {m: MARKER if joint else 1, other: 1}
    sol = solve_series(model.series_system, sub_order, params)
    c0, c1 = sol[0], sol[1]
    if model.structure == "mis":
        mk = (BiSeries.marker(sub_order) if joint
              else Series.constant(1, sub_order))
        dcdx = mk * c0 + c1
    else:
        mk = (BiSeries.marker(sub_order) if joint
              else Series.constant(1, sub_order))
        dcdx = c0 + mk * c1
    g = ops.exp(integrate(dcdx))
    fact = _factorials(order)
    totals = []
    joint_tab = []
    for n in range(order + 1):
        if joint:
            row = g.rows[n]
            tot = 0
            d = {}
            for k, coeff in enumerate(row):
                if coeff == 0:
                    continue
                cnt = _as_int(coeff * fact[n], f"[x^{n}u^{k}]G * n!")
                size = k if model.structure == "mis" else k // 2
                if model.structure == "matching" and k % 2:
                    raise ValueError(f"odd marker degree {k} at x^{n}")
                d[size] = d.get(size, 0) + cnt
                tot += cnt
            totals.append(tot)
            joint_tab.append(d)
        else:
            totals.append(_as_int(g.coeffs[n] * fact[n], f"[x^{n}]G * n!"))
            joint_tab.append({})
    return CountingTable(model.family, model.structure, order, totals,
                         joint_tab)


def pointed_series(model: FamilyStructureModel, order: int):
    """Connected-level pointed series C0, C1, C2 (marker fixed to 1)."""
    m, other = model.marker_params
    sol = solve_series(model.series_system, order, {m: 1, other: 1})
    return list(sol[:3])


def block_series(family: str, structure: str, order: int):
    """Kernel-level pointed block series B0, B1, B2 at unit type weights."""
    x = Series.x(order)
    one = Series.constant(1, order)
    if family == "sp":
        spec = sp_networks.network_spec(structure)
        net = solve_series(spec, order, {"a0": 1, "a1": 1, "a2": 1})
        return list(sp_networks.pointed_blocks_fn(structure)(
            x, net, (one, one, one)))
    model_kernel = _KERNELS[(family, structure)]()
    return list(model_kernel.blocks(x, one, one, one))
