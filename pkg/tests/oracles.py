"""Slow, independent reference implementations used to cross-check the library.

None of these share code with ``causalnets``: they loop over cells, multiply
words explicitly, or exponentiate the full phase-space generator.
"""
from __future__ import annotations

import itertools

import numpy as np
import scipy.linalg

# ---------------------------------------------------------------------------
# geometry


def brute_complement(mask: np.ndarray) -> np.ndarray:
    """Cells whose column offset exceeds their row offset to every marked cell."""
    rows, cols = np.nonzero(mask)
    out = np.zeros_like(mask, dtype=bool)
    for r in range(mask.shape[0]):
        for c in range(mask.shape[1]):
            out[r, c] = bool(np.all(np.abs(cols - c) > np.abs(rows - r)))
    return out


def brute_dependence(mask: np.ndarray) -> np.ndarray:
    """Per-cell ray trace: both backward or both forward rays hit the target.

    A ray counts as a miss once it passes the target's last row, and as a
    non-hit if it leaves the window earlier; intended for targets away from
    the window sides.
    """
    n_rows, n_cols = mask.shape
    occupied = np.nonzero(mask.any(axis=1))[0]
    lo, hi = occupied[0], occupied[-1]

    def hits(r, c, dt, dx):
        while 0 <= r < n_rows and 0 <= c < n_cols:
            if mask[r, c]:
                return True
            if (dt < 0 and r < lo) or (dt > 0 and r > hi):
                return False
            r, c = r + dt, c + dx
        return False

    out = np.zeros_like(mask, dtype=bool)
    for r in range(n_rows):
        for c in range(n_cols):
            back = hits(r, c, -1, -1) and hits(r, c, -1, 1)
            fwd = hits(r, c, 1, -1) and hits(r, c, 1, 1)
            out[r, c] = back or fwd
    return out


def diamond_cells(n_half: int, radius_half: int) -> int:
    """Cells of a centered grid (2 n_half per side) with |t| + |x| < r, centers at odd half-units."""
    centers = np.arange(-2 * n_half + 1, 2 * n_half, 2)
    tt, xx = np.meshgrid(centers, centers, indexing="ij")
    return int(np.count_nonzero(np.abs(tt) + np.abs(xx) < radius_half))


# ---------------------------------------------------------------------------
# algebra


def word_closure(gens: list[np.ndarray], tol: float = 1e-9) -> np.ndarray:
    """Orthonormal rows spanning all words in gens and their adjoints (SVD rank)."""
    d = gens[0].shape[0] if gens else 1
    letters = list(gens) + [g.conj().T for g in gens]
    words = [np.eye(d, dtype=complex)]
    basis = _orth(words, d, tol)
    while True:
        cands = [l @ w for l in letters for w in basis.reshape(-1, d, d)]
        new = _orth(list(basis.reshape(-1, d, d)) + cands, d, tol)
        if new.shape[0] == basis.shape[0]:
            return new
        basis = new


def _orth(mats, d, tol) -> np.ndarray:
    m = np.array([x.reshape(d * d) for x in mats])
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    return vh[s > tol * max(1.0, s[0])]


def kron_commutant_dim(gens: list[np.ndarray]) -> int:
    """dim of {X : XG = GX for all G} from the Kronecker-stacked system."""
    d = gens[0].shape[0]
    eye = np.eye(d)
    rows = [np.kron(g, eye) - np.kron(eye, g.T) for g in gens]
    return int(d * d - np.linalg.matrix_rank(np.concatenate(rows), tol=1e-9))


def span_dim(mats: list[np.ndarray]) -> int:
    d = mats[0].shape[0]
    return int(np.linalg.matrix_rank(np.array([m.reshape(d * d) for m in mats]), tol=1e-9))


# ---------------------------------------------------------------------------
# lattice field


def phase_space_flow(n: int, a: float, m: float, t: float) -> np.ndarray:
    """expm(t M) for d/dt (phi, pi) = (pi, -K phi) with the periodic lattice Laplacian."""
    shift = np.roll(np.eye(n), 1, axis=1)
    k = m**2 * np.eye(n) + (2 * np.eye(n) - shift - shift.T) / a**2
    gen = np.block([[np.zeros((n, n)), np.eye(n)], [-k, np.zeros((n, n))]])
    return scipy.linalg.expm(t * gen)


def delta_expm(n: int, a: float, m: float, t: float) -> np.ndarray:
    """Delta(t, j) = d phi_j(t) / d pi_0(0), the c-number commutator, for j = 0..n-1."""
    return phase_space_flow(n, a, m, t)[:n, n]


# ---------------------------------------------------------------------------
# qubits


def apply_gate_dense(psi: np.ndarray, gate: np.ndarray, i: int, n: int) -> np.ndarray:
    """Embed a 2-qubit gate on (i, i+1) as a full matrix and multiply."""
    full = np.kron(np.kron(np.eye(2**i), gate), np.eye(2 ** (n - i - 2)))
    return full @ psi


def circuit_states(circuit, psi: np.ndarray, layers: int) -> list[np.ndarray]:
    out = [psi]
    n = circuit.n_qubits
    for layer in range(layers):
        for (i, _), g in zip(circuit.pairs(layer), circuit.gates[layer]):
            psi = apply_gate_dense(psi, g, i, n)
        out.append(psi)
    return out


def reduced_single_site(psi: np.ndarray, site: int, n: int) -> np.ndarray:
    """Single-site state rebuilt from Pauli expectation values, (Id + sum <s> s) / 2."""
    paulis = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1.0, -1.0])]
    rho = np.eye(2, dtype=complex) / 2
    for p in paulis:
        full = np.kron(np.kron(np.eye(2**site), p), np.eye(2 ** (n - site - 1)))
        rho += (psi.conj() @ full @ psi).real * p / 2
    return rho


def sorkin_oracle(kick: bool, bell: bool) -> float:
    """P(beta = 0) for rho0 = |00>, optional X on qubit 0, optional Bell measurement."""
    psi = np.zeros(4)
    psi[0b10 if kick else 0b00] = 1.0
    rho = np.outer(psi, psi)
    if bell:
        phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
        p = np.outer(phi, phi)
        q = np.eye(4) - p
        rho = p @ rho @ p + q @ rho @ q
    # beta = qubit 1 is the second tensor factor: basis states |00>, |10> have beta = 0
    return float(rho[0, 0] + rho[2, 2])


def all_cells(depth: int, n: int):
    return list(itertools.product(range(depth), range(n)))
