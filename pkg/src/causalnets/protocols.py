"""Causal experiments on qubit chains with an exact one-site-per-layer lightcone.

* ``sorkin_*``: the three-region impossible-measurement protocol on two qubits.
* ``fermi_*``: two "atoms" on a brick-wall chain; the far atom's reduced state
  must not notice the near atom's excitation before the lightcone arrives.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    PAULI_I,
    PAULI_X,
    PAULI_Z,
    DensityState,
    dagger,
    haar_unitary,
    spectral_decompose,
)

MAX_QUBITS = 12


@dataclass(frozen=True)
class BrickWallCircuit:
    """Alternating layers of nearest-neighbour two-qubit gates.

    Layer ``l`` (0-based) acts on pairs (i, i+1) with i = l mod 2, 2 + l mod 2, ...
    Gates are Haar-random unless supplied.
    """

    n_qubits: int
    depth: int
    seed: int = 0
    gates: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not 2 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must lie in [2, {MAX_QUBITS}]")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        if self.gates is None:
            rng = np.random.default_rng(self.seed)
            gates = tuple(
                tuple(haar_unitary(4, rng) for _ in self.pairs(layer)) for layer in range(self.depth)
            )
            object.__setattr__(self, "gates", gates)
        for layer, gs in enumerate(self.gates):
            if len(gs) != len(self.pairs(layer)):
                raise ValueError(f"layer {layer} needs {len(self.pairs(layer))} gates")
            for g in gs:
                if np.max(np.abs(g @ dagger(g) - np.eye(4))) > 1e-12:
                    raise ValueError("gate is not unitary")

    def pairs(self, layer: int) -> list[tuple[int, int]]:
        return [(i, i + 1) for i in range(layer % 2, self.n_qubits - 1, 2)]

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def apply_layer(self, psi: np.ndarray, layer: int) -> np.ndarray:
        """Apply one layer to a state vector (or to the columns of a matrix)."""
        n = self.n_qubits
        extra = psi.shape[1:]
        t = psi.reshape((2,) * n + extra)
        for (i, j), g in zip(self.pairs(layer), self.gates[layer]):
            t = np.tensordot(g.reshape(2, 2, 2, 2), t, axes=([2, 3], [i, j]))
            t = np.moveaxis(t, [0, 1], [i, j])
        return t.reshape(psi.shape)

    def evolve(self, psi: np.ndarray, layers: int) -> np.ndarray:
        for layer in range(layers):
            psi = self.apply_layer(psi, layer)
        return psi

    def unitary(self, layers: int) -> np.ndarray:
        """Dense product of the first ``layers`` layers."""
        return self.evolve(np.eye(self.dim, dtype=complex), layers)

    def heisenberg(self, op: np.ndarray, layers: int) -> np.ndarray:
        u = self.unitary(layers)
        return dagger(u) @ op @ u


def operator_support(op: np.ndarray, n_qubits: int, tol: float = 1e-12) -> list[int]:
    """Sites on which ``op`` acts non-trivially (partial-trace test per site)."""
    support = []
    t = op.reshape((2,) * (2 * n_qubits))
    for s in range(n_qubits):
        # op acts trivially on s iff op = Tr_s(op)/2 (x) Id_s
        ts = np.moveaxis(t, [s, n_qubits + s], [-2, -1])
        red = np.trace(ts, axis1=-2, axis2=-1) / 2
        if np.max(np.abs(ts - red[..., None, None] * np.eye(2))) > tol:
            support.append(s)
    return support


# ---------------------------------------------------------------------------
# Sorkin protocol


def _on(op: np.ndarray, qubit: int) -> np.ndarray:
    return np.kron(op, PAULI_I) if qubit == 0 else np.kron(PAULI_I, op)


@dataclass(frozen=True)
class SorkinSetup:
    """Kick on qubit ``alpha`` (O1), projective measurement on both (O2), readout on ``beta`` (O3)."""

    kick: np.ndarray
    o2_projectors: tuple
    o3_observable: np.ndarray
    alpha: int = 0

    def __post_init__(self):
        if self.alpha not in (0, 1):
            raise ValueError("alpha must be qubit 0 or 1")
        total = sum(self.o2_projectors)
        if np.max(np.abs(total - np.eye(4))) > 1e-12:
            raise ValueError("O2 projectors must sum to the identity")

    @property
    def beta(self) -> int:
        return 1 - self.alpha

    def swapped(self) -> SorkinSetup:
        """The same experiment with the roles of the two qubits exchanged."""
        swap = np.eye(4)[[0, 2, 1, 3]]
        return SorkinSetup(self.kick, tuple(swap @ p @ swap for p in self.o2_projectors), self.o3_observable, self.beta)


def bell_projectors() -> tuple:
    phi_plus = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    p = np.outer(phi_plus, phi_plus.conj())
    return (p, np.eye(4) - p)


def product_projectors(a: np.ndarray = PAULI_Z, b: np.ndarray = PAULI_Z) -> tuple:
    """Joint Lueders projectors of two local measurements (A on qubit 0, B on qubit 1)."""
    pa = spectral_decompose(a).projectors
    pb = spectral_decompose(b).projectors
    return tuple(np.kron(x, y) for x in pa for y in pb)


def canonical_sorkin_setup() -> SorkinSetup:
    return SorkinSetup(PAULI_X, bell_projectors(), PAULI_Z)


def sorkin_run(setup: SorkinSetup, rho0: DensityState, with_kick: bool, with_o2: bool) -> np.ndarray:
    """Outcome distribution of the O3 observable, ordered by ascending eigenvalue."""
    rho = rho0.rho
    if with_kick:
        u = _on(setup.kick, setup.alpha)
        rho = u @ rho @ dagger(u)
    if with_o2:
        rho = sum(p @ rho @ p for p in setup.o2_projectors)
    projs = spectral_decompose(setup.o3_observable).projectors
    return np.array([np.trace(rho @ _on(e, setup.beta)).real for e in projs])


def sorkin_signaling_gap(setup: SorkinSetup, rho0: DensityState, with_o2: bool = True) -> float:
    """Total-variation distance between the O3 statistics with and without the kick."""
    p_kick = sorkin_run(setup, rho0, True, with_o2)
    p_none = sorkin_run(setup, rho0, False, with_o2)
    return float(0.5 * np.abs(p_kick - p_none).sum())


# ---------------------------------------------------------------------------
# Fermi two-atom problem


@dataclass(frozen=True)
class FermiSetup:
    n: int
    s_a: int
    s_b: int
    w_obs: int = 0

    def __post_init__(self):
        if not (0 <= self.s_a < self.n and 0 <= self.s_b < self.n):
            raise ValueError("atom sites must lie on the chain")
        if self.R == 0:
            raise ValueError("atoms must sit on different sites")
        if self.w_obs < 0:
            raise ValueError("observation half-width must be non-negative")
        if self.s_b in self.window:
            raise ValueError("observation window overlaps the excited atom")

    @property
    def R(self) -> int:
        return abs(self.s_a - self.s_b)

    @property
    def window(self) -> list[int]:
        return [s for s in range(self.s_a - self.w_obs, self.s_a + self.w_obs + 1) if 0 <= s < self.n]


def reduced_state(psi: np.ndarray, keep: list[int], n: int) -> np.ndarray:
    t = psi.reshape((2,) * n)
    rest = [s for s in range(n) if s not in keep]
    t = np.transpose(t, keep + rest).reshape(2 ** len(keep), -1)
    return t @ t.conj().T


def trace_distance(r1: np.ndarray, r2: np.ndarray) -> float:
    return float(0.5 * np.abs(np.linalg.eigvalsh(r1 - r2)).sum())


def fermi_deviation_curve(setup: FermiSetup, circuit: BrickWallCircuit, t_max: int | None = None) -> np.ndarray:
    """Trace distance at the observation window after t = 0..t_max layers.

    The two initial states are |0...0> and the same with atom b flipped to |1>.
    """
    if circuit.n_qubits != setup.n:
        raise ValueError("circuit and setup disagree on the chain length")
    t_max = circuit.depth if t_max is None else t_max
    if t_max > circuit.depth:
        raise ValueError("t exceeds circuit depth")
    ground = np.zeros(circuit.dim, dtype=complex)
    ground[0] = 1
    excited = np.zeros(circuit.dim, dtype=complex)
    excited[1 << (setup.n - 1 - setup.s_b)] = 1
    out = []
    for t in range(t_max + 1):
        if t:
            ground = circuit.apply_layer(ground, t - 1)
            excited = circuit.apply_layer(excited, t - 1)
        out.append(trace_distance(reduced_state(ground, setup.window, setup.n),
                                  reduced_state(excited, setup.window, setup.n)))
    return np.array(out)


def fermi_two_atom(setup: FermiSetup, circuit: BrickWallCircuit, t: int) -> float:
    return float(fermi_deviation_curve(setup, circuit, t)[t])
