"""A finite local net on a brick-wall qubit chain, its axioms, and the LPC proof chain.

Cells are (layer, site) pairs.  The algebra of a cell is the single-site
algebra at ``site`` in the Heisenberg picture after ``layer`` circuit layers,
U_l^dag M_2(site) U_l, and the algebra of a region is generated by its cells.
The circuit moves information by at most one site per layer, which is the
speed-1 cone used for complements here and in the geometry module.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    MatrixAlgebra,
    algebra_closure,
    commutant,
    dagger,
    embed,
    is_factor,
    center,
    join,
)
from .geometry import HIT, complement_mask, dependence_codes
from .protocols import BrickWallCircuit

MAX_NET_QUBITS = 6
MAX_NET_DEPTH = 6
COMMUTE_TOL = 1e-12

Cell = tuple[int, int]


@dataclass(frozen=True)
class DiscreteRegion:
    """A set of (layer, site) cells on a depth x n_sites grid."""

    depth: int
    n_sites: int
    cells: frozenset = frozenset()

    def __post_init__(self):
        cells = frozenset((int(l), int(s)) for l, s in self.cells)
        for l, s in cells:
            if not (0 <= l < self.depth and 0 <= s < self.n_sites):
                raise ValueError(f"cell {(l, s)} outside the {self.depth}x{self.n_sites} grid")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> DiscreteRegion:
        return cls(mask.shape[0], mask.shape[1], frozenset(zip(*map(list, np.nonzero(mask)))))

    @classmethod
    def whole(cls, depth: int, n_sites: int) -> DiscreteRegion:
        return cls(depth, n_sites, frozenset(itertools.product(range(depth), range(n_sites))))

    @classmethod
    def cylinder(cls, depth: int, n_sites: int, site0: int, a: int, layer0: int, tau: int) -> DiscreteRegion:
        """``a`` consecutive sites from ``site0`` over ``tau`` layers from ``layer0``."""
        if a < 1 or tau < 1:
            raise ValueError("cylinder needs at least one site and one layer")
        cells = itertools.product(range(layer0, layer0 + tau), range(site0, site0 + a))
        return cls(depth, n_sites, frozenset(cells))

    @classmethod
    def time_slice(cls, depth: int, n_sites: int, layer: int, tau: int = 1) -> DiscreteRegion:
        return cls.cylinder(depth, n_sites, 0, n_sites, layer, tau)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.depth, self.n_sites)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.shape, dtype=bool)
        for l, s in self.cells:
            m[l, s] = True
        return m

    def sorted_cells(self) -> list[Cell]:
        return sorted(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __bool__(self) -> bool:
        return bool(self.cells)

    def __iter__(self):
        return iter(self.sorted_cells())

    def _check(self, other: DiscreteRegion) -> None:
        if self.shape != other.shape:
            raise ValueError("regions live on different grids")

    def __or__(self, other: DiscreteRegion) -> DiscreteRegion:
        self._check(other)
        return DiscreteRegion(self.depth, self.n_sites, self.cells | other.cells)

    def __and__(self, other: DiscreteRegion) -> DiscreteRegion:
        self._check(other)
        return DiscreteRegion(self.depth, self.n_sites, self.cells & other.cells)

    def __sub__(self, other: DiscreteRegion) -> DiscreteRegion:
        self._check(other)
        return DiscreteRegion(self.depth, self.n_sites, self.cells - other.cells)

    def __le__(self, other: DiscreteRegion) -> bool:
        self._check(other)
        return self.cells <= other.cells

    def complement(self) -> DiscreteRegion:
        return DiscreteRegion.from_mask(complement_mask(self.mask()))

    def double_complement(self) -> DiscreteRegion:
        return DiscreteRegion.from_mask(complement_mask(complement_mask(self.mask())))

    def domain(self) -> DiscreteRegion:
        return DiscreteRegion.from_mask(dependence_codes(self.mask()) == HIT)

    def to_json(self) -> dict:
        return {"depth": self.depth, "n_sites": self.n_sites, "cells": [list(c) for c in self.sorted_cells()]}


def cones_disjoint(c1: Cell, c2: Cell) -> bool:
    """Backward cones down to layer 0 share no site: |s1 - s2| > l1 + l2."""
    return abs(c1[1] - c2[1]) > c1[0] + c2[0]


def spacelike(c1: Cell, c2: Cell) -> bool:
    return abs(c1[1] - c2[1]) > abs(c1[0] - c2[0])


class LocalNet:
    """Region -> algebra assignment with a thread-safe memo keyed by the cell set."""

    def __init__(self, circuit: BrickWallCircuit, depth: int | None = None):
        n = circuit.n_qubits
        depth = circuit.depth if depth is None else depth
        if n > MAX_NET_QUBITS:
            raise ValueError(f"nets are capped at {MAX_NET_QUBITS} qubits (d = {2**MAX_NET_QUBITS})")
        if not 1 <= depth <= MAX_NET_DEPTH:
            raise ValueError(f"net depth must lie in [1, {MAX_NET_DEPTH}]")
        if depth > circuit.depth + 1:
            raise ValueError("net depth exceeds the circuit's layers")
        self.circuit = circuit
        self.n = n
        self.depth = depth
        self.d = 2**n
        self._unitaries = [circuit.unitary(l) for l in range(depth)]
        self._gens: dict[Cell, np.ndarray] = {}
        self._algebras: dict[frozenset, MatrixAlgebra] = {}
        self._lock = threading.Lock()

    @property
    def params(self) -> dict:
        return {"n_qubits": self.n, "depth": self.depth, "circuit_depth": self.circuit.depth,
                "gate_seed": self.circuit.seed}

    def region(self, cells) -> DiscreteRegion:
        return DiscreteRegion(self.depth, self.n, frozenset(cells))

    def whole(self) -> DiscreteRegion:
        return DiscreteRegion.whole(self.depth, self.n)

    def cell_generators(self, cell: Cell) -> np.ndarray:
        """U_l^dag sigma U_l for sigma in X, Y, Z at the cell's site, shape (3, d, d)."""
        with self._lock:
            if cell in self._gens:
                return self._gens[cell]
        layer, site = cell
        if not (0 <= layer < self.depth and 0 <= site < self.n):
            raise ValueError(f"cell {cell} outside the grid")
        u = self._unitaries[layer]
        gens = np.array([dagger(u) @ embed(p, site, self.n) @ u for p in (PAULI_X, PAULI_Y, PAULI_Z)])
        with self._lock:
            self._gens[cell] = gens
        return gens

    def generators(self, region: DiscreteRegion) -> np.ndarray:
        if not region:
            return np.empty((0, self.d, self.d), dtype=complex)
        return np.concatenate([self.cell_generators(c) for c in region])

    def algebra(self, region: DiscreteRegion) -> MatrixAlgebra:
        key = region.cells
        with self._lock:
            if key in self._algebras:
                return self._algebras[key]
        alg = algebra_closure(self.generators(region), self.d)
        with self._lock:
            self._algebras.setdefault(key, alg)
        return alg

    def cache_size(self) -> int:
        return len(self._algebras)


def build_net(circuit: BrickWallCircuit, depth: int | None = None) -> LocalNet:
    return LocalNet(circuit, depth)


# ---------------------------------------------------------------------------
# axiom checks


@dataclass
class AxiomReport:
    axiom: str
    passed: bool
    checked: int = 0
    not_applicable: int = 0
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError("a failed axiom report needs a witness")

    def to_json(self) -> dict:
        out = {"axiom": self.axiom, "pass": self.passed, "checked": self.checked,
               "not_applicable": self.not_applicable, "details": self.details}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _random_region(net: LocalNet, rng: np.random.Generator, p: float) -> DiscreteRegion:
    mask = rng.random((net.depth, net.n)) < p
    return DiscreteRegion.from_mask(mask)


def check_isotony(net: LocalNet, pairs: int = 200, seed: int = 0) -> AxiomReport:
    """A(O1) <= A(O2) for random nested pairs O1 <= O2."""
    rng = np.random.default_rng(seed)
    for i in range(pairs):
        o2 = _random_region(net, rng, 0.3)
        keep = [c for c in o2 if rng.random() < 0.5]
        o1 = net.region(keep)
        a1, a2 = net.algebra(o1), net.algebra(o2)
        if not a1 <= a2:
            return AxiomReport("isotony", False, i + 1, witness={
                "small": o1.to_json()["cells"], "large": o2.to_json()["cells"],
                "dims": [a1.dim, a2.dim]})
    return AxiomReport("isotony", True, pairs)


def _max_commutator(g1: np.ndarray, g2: np.ndarray) -> float:
    worst = 0.0
    for x in g1:
        worst = max(worst, float(np.max(np.abs(x @ g2 - g2 @ x))))
    return worst


def check_microcausality(
    net: LocalNet,
    pairs: list[tuple[Cell, Cell]] | None = None,
    criterion: str = "cone",
) -> AxiomReport:
    """Generators of causally disjoint cells commute exactly.

    ``criterion="cone"`` applies the check to pairs whose backward cones down
    to layer 0 are disjoint; ``"spacelike"`` to every spacelike pair, which is
    the stronger statement the proof replay relies on.  Other pairs are
    counted as not applicable.  ``pairs=None`` means every cell pair.
    """
    rule = {"cone": cones_disjoint, "spacelike": spacelike}.get(criterion)
    if rule is None:
        raise ValueError(f"unknown criterion {criterion!r}")
    if pairs is None:
        pairs = list(itertools.combinations(net.whole().sorted_cells(), 2))
    checked = skipped = 0
    worst = 0.0
    for c1, c2 in pairs:
        if not rule(c1, c2):
            skipped += 1
            continue
        checked += 1
        err = _max_commutator(net.cell_generators(c1), net.cell_generators(c2))
        worst = max(worst, err)
        if err > COMMUTE_TOL:
            return AxiomReport(f"microcausality[{criterion}]", False, checked, skipped,
                               witness={"cells": [list(c1), list(c2)], "commutator_norm": err})
    return AxiomReport(f"microcausality[{criterion}]", True, checked, skipped, details={"max_commutator": worst})


def classify_pair(c1: Cell, c2: Cell) -> str:
    return "applicable" if cones_disjoint(c1, c2) else "not applicable"


def check_slice_generation(net: LocalNet, layer: int, control: bool = True) -> AxiomReport:
    """The algebra of a full one-layer slice is all of M_d.

    With ``control`` the same slice minus its last site is also closed; it must
    fall short of M_d, which shows the check can fail.
    """
    if not 0 <= layer < net.depth:
        raise ValueError("layer outside the grid")
    full_dim = net.d**2
    sl = DiscreteRegion.time_slice(net.depth, net.n, layer)
    dim = net.algebra(sl).dim
    details = {"layer": layer, "dim": dim, "expected": full_dim}
    if control:
        partial = sl - net.region([(layer, net.n - 1)])
        details["control_dim"] = net.algebra(partial).dim
        details["control_short"] = details["control_dim"] < full_dim
    if dim != full_dim:
        return AxiomReport("slice_generation", False, 1, witness={"layer": layer, "dim": dim}, details=details)
    return AxiomReport("slice_generation", True, 1, details=details)


def check_essential_duality(net: LocalNet, region: DiscreteRegion) -> AxiomReport:
    """A(O')' = A(O''), both sides computed independently."""
    comp = region.complement()
    lhs = commutant(net.algebra(comp))
    rhs = net.algebra(region.double_complement())
    dims = {"commutant_of_complement": lhs.dim, "double_complement": rhs.dim, "complement_cells": len(comp)}
    if lhs.equals(rhs):
        return AxiomReport("essential_duality", True, 1, details=dims)
    return AxiomReport("essential_duality", False, 1, witness=dims, details=dims)


def factor_witness(net: LocalNet, region: DiscreteRegion) -> tuple[bool, bool]:
    """(is_factor(A), join(A, A') == M_d); the two agree for every algebra."""
    a = net.algebra(region)
    return is_factor(a), join(a, commutant(a)).is_full


# ---------------------------------------------------------------------------
# proof replay


@dataclass
class ProofStep:
    name: str
    passed: bool
    dims: dict
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "pass": self.passed, "dims": self.dims}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class ProofReport:
    steps: list[ProofStep]
    net_params: dict
    seed: int
    regions: dict
    caps_neglected: list[Cell]

    def step(self, name: str) -> ProofStep:
        for s in self.steps:
            if s.name == name:
                return s
        raise KeyError(name)

    @property
    def premises_hold(self) -> bool:
        return all(self.step(n).passed for n in ("premise1", "premise2", "premise3", "duality"))

    @property
    def conclusion_holds(self) -> bool:
        return self.step("conclusion").passed

    @property
    def implication_holds(self) -> bool:
        """premises 1-3 and duality imply A(C) = A(C'')."""
        return (not self.premises_hold) or self.conclusion_holds

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.steps)

    def to_json(self) -> dict:
        return {
            "steps": [s.to_json() for s in self.steps],
            "net_params": self.net_params,
            "seed": self.seed,
            "regions": self.regions,
            "caps_neglected": {"count": len(self.caps_neglected), "cells": [list(c) for c in self.caps_neglected]},
            "implication_holds": self.implication_holds,
        }


def _fits(region: DiscreteRegion) -> bool:
    """The double complement is unaffected by the finite number of layers.

    The grid is re-embedded with extra layers above and below; the chain's
    sites are the whole space and need no padding.
    """
    if {s for _, s in region.cells} == set(range(region.n_sites)):
        return True  # spans the chain: C' is empty and C'' the whole grid
    pad = region.depth + region.n_sites
    big = np.zeros((region.depth + 2 * pad, region.n_sites), dtype=bool)
    big[pad:pad + region.depth] = region.mask()
    dc = complement_mask(complement_mask(big))
    inner = dc[pad:pad + region.depth]
    return not dc[:pad].any() and not dc[pad + region.depth:].any() and \
        np.array_equal(inner, region.double_complement().mask())


def replay_appendix_proof(
    net: LocalNet,
    a: int,
    tau: int,
    site0: int | None = None,
    layer0: int | None = None,
    seed: int = 0,
) -> ProofReport:
    """Check the LPC proof chain on the discrete cylinder of ``a`` sites by ``tau`` layers.

    Steps, in order: premise1 A(C u C_r) = A(C); premise2 A(C u C_r) v A(C')
    = M_d; premise3 A(C) is a factor; duality A(C')' = A(C''); conclusion
    A(C) <= A(C')' and A(C'') <= A(C), hence A(C) = A(C'').  The cells of the
    time slice through C that lie in neither C u C_r nor C' are the caps the
    argument neglects; they are listed but never added to any algebra.
    """
    site0 = (net.n - a) // 2 if site0 is None else site0
    layer0 = (net.depth - tau) // 2 if layer0 is None else layer0
    cyl = DiscreteRegion.cylinder(net.depth, net.n, site0, a, layer0, tau)
    if not _fits(cyl):
        raise ValueError("the causal completion of this cylinder does not fit in the grid")
    comp = cyl.complement()
    diamond = cyl.double_complement()
    dom = cyl.domain()
    caps_t = dom - cyl
    caps_r = diamond - dom
    extended = cyl | caps_r
    slab = DiscreteRegion.time_slice(net.depth, net.n, layer0, tau)
    caps = slab - extended - comp

    a_c = net.algebra(cyl)
    a_ext = net.algebra(extended)
    a_comp = net.algebra(comp)
    a_dia = net.algebra(diamond)
    full_dim = net.d**2
    steps = []

    steps.append(ProofStep("premise1", a_ext.equals(a_c),
                           {"A(C)": a_c.dim, "A(C u C_r)": a_ext.dim}))

    j = join(a_ext, a_comp, seed=seed)
    steps.append(ProofStep("premise2", j.is_full,
                           {"A(C u C_r)": a_ext.dim, "A(C')": a_comp.dim, "join": j.dim, "full": full_dim}))

    z = center(a_c, seed=seed)
    steps.append(ProofStep("premise3", z.dim == 1, {"A(C)": a_c.dim, "center": z.dim}))

    comm_comp = commutant(a_comp, seed=seed)
    steps.append(ProofStep("duality", comm_comp.equals(a_dia),
                           {"A(C')'": comm_comp.dim, "A(C'')": a_dia.dim}))

    mc_dir = a_c <= comm_comp
    reductio = a_dia <= a_c
    lpc = mc_dir and reductio and a_c <= a_dia
    steps.append(ProofStep("conclusion", lpc, {
        "A(C)": a_c.dim, "A(C'')": a_dia.dim, "A(C) <= A(C')'": mc_dir, "A(C'') <= A(C)": reductio}))

    for s in steps:
        if not s.passed:
            s.witness = dict(s.dims)

    regions = {name: len(r) for name, r in
               [("C", cyl), ("C'", comp), ("C''", diamond), ("C_t", caps_t), ("C_r", caps_r), ("slab", slab)]}
    params = dict(net.params, a=a, tau=tau, site0=site0, layer0=layer0)
    return ProofReport(steps, params, seed, regions, caps.sorted_cells())
