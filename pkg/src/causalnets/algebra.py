"""Finite-dimensional operator algebras.

Algebras are unital, *-closed subspaces of M_d stored through a basis that is
orthonormal for the Hilbert-Schmidt pairing <A, B> = Tr(A^dagger B).  Besides
the algebra calculus (closure, commutant, join, center) this module carries the
state-side tools: density matrices, spectral projectors, the Lueders map and
the no-signaling comparison.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

DEFAULT_MAX_DIM = 64
SPAN_TOL = 1e-10
EIG_CLUSTER_TOL = 1e-8
STATE_TOL = 1e-12

# Gram eigenvalues below this count as null directions of the commutator map.
_NULL_TOL = 1e-9
_PART_TOL = 1e-6
_CHUNK = 256

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class AlgebraError(ValueError):
    """Raised for malformed operators or algebras, and for failed self-checks."""


def as_matrix(m, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise AlgebraError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > max_dim:
        raise AlgebraError(f"matrix dimension {a.shape[0]} exceeds limit {max_dim}")
    if not np.all(np.isfinite(a)):
        raise AlgebraError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product Tr(a^dagger b)."""
    return complex(np.vdot(a, b))


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(m - dagger(m)), initial=0.0) <= tol)


def is_projector(m: np.ndarray, tol: float = 1e-10) -> bool:
    return is_hermitian(m, tol) and bool(np.max(np.abs(m @ m - m), initial=0.0) <= tol)


def kron_all(ops: Sequence[np.ndarray]) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def embed(op: np.ndarray, site: int, n_qubits: int) -> np.ndarray:
    """Place a single-qubit operator on ``site`` of an ``n_qubits`` register (site 0 leftmost)."""
    ops = [PAULI_I] * n_qubits
    ops[site] = np.asarray(op, dtype=complex)
    return kron_all(ops)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (z + dagger(z)) / 2


# ---------------------------------------------------------------------------
# span utilities (rows are vectorized matrices)


def _project_out(rows: np.ndarray, q: np.ndarray) -> np.ndarray:
    if q.shape[0] == 0:
        return rows
    for _ in range(2):
        rows = rows - (rows @ q.conj().T) @ q
    return rows


def _new_directions(rows: np.ndarray, q: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal rows spanning the part of ``rows`` not already in span(q)."""
    norms = np.linalg.norm(rows, axis=1)
    keep = norms > 1e-12
    if not np.any(keep):
        return np.empty((0, rows.shape[1]), dtype=complex)
    rows = rows[keep] / norms[keep, None]
    res = _project_out(rows, q)
    qr, rr, _ = scipy.linalg.qr(res.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(rr))
    rank = int(np.count_nonzero(diag > tol))
    if rank == 0:
        return np.empty((0, rows.shape[1]), dtype=complex)
    new = qr[:, :rank].T
    new = _project_out(new, q)
    new, _ = np.linalg.qr(new.T)
    return new.T


def null_space(m: np.ndarray, rcond: float = 1e-10) -> np.ndarray:
    """Orthonormal columns spanning the kernel of ``m`` (economy SVD)."""
    _, s, vh = np.linalg.svd(m, full_matrices=False)
    smax = s[0] if len(s) else 0.0
    rank = int(np.count_nonzero(s > rcond * max(smax, 1e-300)))
    return vh[rank:].conj().T


def orthonormal_span(mats: Iterable[np.ndarray], d: int, tol: float = SPAN_TOL) -> np.ndarray:
    rows = np.array([np.asarray(m, dtype=complex).reshape(d * d) for m in mats])
    if rows.size == 0:
        return np.empty((0, d * d), dtype=complex)
    return _new_directions(rows, np.empty((0, d * d), dtype=complex), tol)


def _hermitian_parts(mats: np.ndarray) -> np.ndarray:
    """Orthonormal Hermitian matrices whose real span contains every input and its adjoint.

    The parts are orthonormalized together; normalizing each one separately
    would blow round-off sized parts up into spurious directions.
    """
    herm = (mats + dagger(mats)) / 2
    anti = (mats - dagger(mats)) / 2j
    both = np.concatenate([herm, anti]).reshape(2 * len(mats), -1)
    gram = (both.conj() @ both.T).real
    ev, evec = np.linalg.eigh(gram)
    keep = ev > _PART_TOL**2 * (float(ev[-1]) if len(ev) else 1.0)
    out = (evec[:, keep] / np.sqrt(ev[keep])).T @ both
    return out.reshape(-1, *mats.shape[1:])


# ---------------------------------------------------------------------------


class MatrixAlgebra:
    """A unital *-subalgebra of M_d.

    ``d`` is the matrix size and ``dim`` the linear dimension of the algebra.
    The full algebra M_d is kept implicitly (its basis of matrix units is only
    built when asked for), which keeps d = 64 workable.
    """

    def __init__(self, basis: np.ndarray | None, d: int, *, full: bool = False):
        self.d = int(d)
        self._full = full
        if full:
            self._rows = None
        else:
            rows = np.asarray(basis, dtype=complex).reshape(-1, self.d * self.d)
            rows.setflags(write=False)
            self._rows = rows

    @classmethod
    def full(cls, d: int) -> MatrixAlgebra:
        return cls(None, d, full=True)

    @classmethod
    def scalars(cls, d: int) -> MatrixAlgebra:
        return cls(np.eye(d, dtype=complex)[None] / np.sqrt(d), d)

    @classmethod
    def from_span(cls, mats: Sequence[np.ndarray], check: bool = True) -> MatrixAlgebra:
        """Wrap the linear span of ``mats``; with ``check`` the algebra axioms are verified."""
        mats = [as_matrix(m) for m in mats]
        d = mats[0].shape[0]
        rows = orthonormal_span(mats, d)
        alg = cls.full(d) if rows.shape[0] == d * d else cls(rows, d)
        if check:
            alg.validate()
        return alg

    @property
    def is_full(self) -> bool:
        return self._full

    @property
    def dim(self) -> int:
        return self.d * self.d if self._full else self._rows.shape[0]

    @property
    def rows(self) -> np.ndarray:
        if self._full:
            return np.eye(self.d * self.d, dtype=complex)
        return self._rows

    @property
    def basis(self) -> np.ndarray:
        return self.rows.reshape(-1, self.d, self.d)

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        return f"MatrixAlgebra(d={self.d}, dim={self.dim})"

    def hermitian_basis(self) -> np.ndarray:
        if self._full:
            raise AlgebraError("hermitian_basis of the full algebra is not materialized")
        return _hermitian_parts(self.basis)

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        """A random Hermitian element (generic with probability one)."""
        if self._full:
            return random_hermitian(self.d, rng)
        hb = self.hermitian_basis()
        c = rng.standard_normal(len(hb))
        h = np.tensordot(c, hb, axes=1)
        return h / np.linalg.norm(h)

    def residual(self, m: np.ndarray) -> float:
        """Frobenius distance from ``m`` to the algebra."""
        if self._full:
            return 0.0
        v = np.asarray(m, dtype=complex).reshape(self.d * self.d)
        r = v - (self._rows.conj() @ v) @ self._rows
        return float(np.linalg.norm(r))

    def contains(self, m: np.ndarray, tol: float = SPAN_TOL) -> bool:
        m = np.asarray(m, dtype=complex)
        scale = max(1.0, float(np.linalg.norm(m)))
        return self.residual(m) <= tol * scale

    def issubalgebra(self, other: MatrixAlgebra, tol: float = SPAN_TOL) -> bool:
        """True when every element of ``self`` lies in ``other``."""
        _same_d(self, other)
        if other.is_full:
            return True
        if self.dim > other.dim:
            return False
        rows = self.rows
        res = rows - (rows @ other.rows.conj().T) @ other.rows
        return bool(np.max(np.linalg.norm(res, axis=1)) <= tol)

    def __le__(self, other: MatrixAlgebra) -> bool:
        return self.issubalgebra(other)

    def equals(self, other: MatrixAlgebra, tol: float = SPAN_TOL) -> bool:
        return self.d == other.d and self.dim == other.dim and self.issubalgebra(other, tol)

    def validate(self, tol: float = 1e-9) -> None:
        """Check unit, adjoint closure, product closure and orthonormality."""
        if self._full:
            return
        if not self.contains(np.eye(self.d), tol):
            raise AlgebraError("algebra does not contain the identity")
        gram = self._rows.conj() @ self._rows.T
        if np.max(np.abs(gram - np.eye(self.dim))) > tol:
            raise AlgebraError("basis is not orthonormal")
        b = self.basis
        for m in dagger(b):
            if not self.contains(m, tol):
                raise AlgebraError("span is not closed under adjoint")
        for i in range(self.dim):
            prods = b[i] @ b
            res = prods.reshape(self.dim, -1)
            res = res - (res @ self._rows.conj().T) @ self._rows
            if np.max(np.linalg.norm(res, axis=1)) > tol:
                raise AlgebraError("span is not closed under products")

    def to_json(self) -> dict:
        return {"dim": self.d, "basis": [matrix_to_json(m) for m in self.basis]}

    @classmethod
    def from_json(cls, obj: dict) -> MatrixAlgebra:
        mats = [matrix_from_json(m) for m in obj["basis"]]
        return cls.from_span(mats, check=True)


def _same_d(a: MatrixAlgebra, b: MatrixAlgebra) -> None:
    if a.d != b.d:
        raise AlgebraError(f"dimension mismatch: {a.d} vs {b.d}")


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"dim": m.shape[0], "entries": [[float(z.real), float(z.imag)] for z in m.reshape(-1)]}


def matrix_from_json(obj: dict) -> np.ndarray:
    d = int(obj["dim"])
    arr = np.array(obj["entries"], dtype=float)
    if arr.shape != (d * d, 2):
        raise AlgebraError("entry list does not match dim")
    return as_matrix((arr[:, 0] + 1j * arr[:, 1]).reshape(d, d))


# ---------------------------------------------------------------------------
# closure and commutants


def _check_generators(generators, d, max_dim) -> tuple[np.ndarray, int]:
    mats = [as_matrix(g, max_dim) for g in generators]
    if not mats:
        if d is None:
            raise AlgebraError("empty generator list needs an explicit dimension")
        return np.empty((0, d, d), dtype=complex), d
    dims = {m.shape[0] for m in mats}
    if len(dims) != 1 or (d is not None and dims != {d}):
        raise AlgebraError(f"generators have mismatched dimensions {sorted(dims)}")
    return np.array(mats), mats[0].shape[0]


def algebra_closure(
    generators: Sequence[np.ndarray],
    d: int | None = None,
    *,
    tol: float = SPAN_TOL,
    max_dim: int = DEFAULT_MAX_DIM,
    seed: int = 0,
    full_shortcut: bool | None = None,
) -> MatrixAlgebra:
    """Smallest unital *-algebra containing ``generators``.

    The span starts at the identity and is grown by left multiplication until
    nothing new appears.  Two random Hermitian elements of the generator span
    generate the same algebra for almost every draw; each generation uses a
    fresh pair, and a final sweep of the whole basis with another pair confirms
    invariance.  Any original generator missing from the result is added as a
    multiplier and growth resumes.

    For d >= 8 a trivial commutant of the generators is detected first and the
    full algebra returned directly (finite-dimensional bicommutant theorem),
    which skips growing a d^2-element basis.
    """
    mats, d = _check_generators(generators, d, max_dim)
    dd = d * d
    if len(mats) == 0:
        return MatrixAlgebra.scalars(d)
    herm = _hermitian_parts(mats)
    if len(herm) == 0:
        return MatrixAlgebra.scalars(d)
    if full_shortcut is None:
        full_shortcut = d >= 8
    if full_shortcut and _hermitian_commutant_rows(herm, d, seed).shape[0] == 1:
        return MatrixAlgebra.full(d)

    rng = np.random.default_rng(seed)

    def multipliers() -> np.ndarray:
        if len(herm) <= 3:
            return herm
        ms = [np.tensordot(rng.standard_normal(len(herm)), herm, axes=1) for _ in range(2)]
        return np.array([m / np.linalg.norm(m) for m in ms])

    def grow(ms: np.ndarray, frontier: np.ndarray) -> np.ndarray:
        nonlocal q
        fr = frontier.reshape(-1, d, d)
        found = []
        step = max(1, _CHUNK // len(ms))
        for start in range(0, len(fr), step):
            cands = np.einsum("mij,fjk->mfik", ms, fr[start:start + step]).reshape(-1, dd)
            new = _new_directions(cands, q, tol)
            if len(new):
                q = np.concatenate([q, new])
                found.append(new)
            if q.shape[0] >= dd:
                break
        return np.concatenate(found) if found else np.empty((0, dd), dtype=complex)

    # Fresh random multipliers every generation keep the new directions well
    # conditioned; reusing one pair builds Krylov-like sequences whose tiny
    # residuals amplify rounding errors in the basis.
    q = (np.eye(d, dtype=complex) / np.sqrt(d)).reshape(1, dd)
    frontier = grow(multipliers(), q)
    while True:
        while len(frontier) and q.shape[0] < dd:
            frontier = grow(multipliers(), frontier)
        if q.shape[0] >= dd:
            return MatrixAlgebra.full(d)
        # the basis was built against different draws: sweep it once more
        frontier = grow(multipliers(), q.copy())
        if len(frontier):
            continue
        res = herm.reshape(len(herm), dd)
        res = res - (res @ q.conj().T) @ q
        missing = np.linalg.norm(res, axis=1) > tol
        if not np.any(missing):
            return MatrixAlgebra(q, d)
        frontier = grow(herm[missing], q.copy())


def _cluster(w: np.ndarray, tol: float) -> list[np.ndarray]:
    """Group sorted eigenvalues whose consecutive gaps are below ``tol``."""
    scale = max(1.0, float(np.max(np.abs(w), initial=0.0)))
    cuts = np.nonzero(np.diff(w) > tol * scale)[0] + 1
    return np.split(np.arange(len(w)), cuts)


def _hermitian_commutant_rows(herm: np.ndarray, d: int, seed: int = 0) -> np.ndarray:
    """Orthonormal rows spanning {X : [X, K] = 0 for all K in herm}.

    A random Hermitian H in the span of ``herm`` is diagonalized first; every
    solution commutes with H and is therefore block diagonal in H's
    eigenbasis, which shrinks the unknowns from d^2 to sum(mult^2).  The
    remaining constraints are solved through the Gram matrix of the commutator
    map restricted to that block space.
    """
    rng = np.random.default_rng(seed)
    h = np.tensordot(rng.standard_normal(len(herm)), herm, axes=1)
    w, v = np.linalg.eigh(h)
    clusters = _cluster(w, EIG_CLUSTER_TOL)
    pa = np.concatenate([np.repeat(c, len(c)) for c in clusters])
    pb = np.concatenate([np.tile(c, len(c)) for c in clusters])
    n = len(pa)
    gram = np.zeros((n, n), dtype=complex)
    same_a = pa[:, None] == pa[None, :]
    same_b = pb[:, None] == pb[None, :]
    for k in herm:
        kt = v.conj().T @ k @ v
        k2 = kt @ kt
        gram += np.where(same_a, k2[pb[None, :], pb[:, None]], 0)
        gram += np.where(same_b, k2[pa[:, None], pa[None, :]], 0)
        gram -= 2 * kt[pa[:, None], pa[None, :]] * kt[pb[None, :], pb[:, None]]
    ev, evec = np.linalg.eigh(gram)
    null = evec[:, ev < _NULL_TOL]
    ys = np.zeros((null.shape[1], d, d), dtype=complex)
    ys[:, pa, pb] = null.T
    xs = v @ ys @ v.conj().T
    for k in herm:
        if len(xs) and np.max(np.abs(xs @ k - k @ xs)) > 1e-8:
            raise AlgebraError("commutant solve produced a non-commuting element")
    return xs.reshape(-1, d * d)


def _dense_commutant_rows(herm: np.ndarray, d: int) -> np.ndarray:
    """Null space of the stacked maps X -> XK - KX over all of M_d (row-major vec)."""
    eye = np.eye(d)
    stacked = np.concatenate([np.kron(eye, k.T) - np.kron(k, eye) for k in herm])
    null = null_space(stacked)
    return null.T


def commutant(a: MatrixAlgebra, method: str = "reduced", seed: int = 0) -> MatrixAlgebra:
    """All operators commuting with every element of ``a``.

    ``method="dense"`` solves the full d^2-dimensional linear system and is
    meant as a check for small d.
    """
    d = a.d
    if a.is_full:
        return MatrixAlgebra.scalars(d)
    if a.dim == 1:
        return MatrixAlgebra.full(d)
    herm = a.hermitian_basis()
    if method == "dense":
        rows = _dense_commutant_rows(herm, d)
    elif method == "reduced":
        rows = _hermitian_commutant_rows(herm, d, seed)
    else:
        raise ValueError(f"unknown method {method!r}")
    if rows.shape[0] == d * d:
        return MatrixAlgebra.full(d)
    return MatrixAlgebra(rows, d)


def bicommutant(a: MatrixAlgebra, tol: float = SPAN_TOL) -> MatrixAlgebra:
    """Commutant applied twice; raises if it differs from ``a``."""
    bc = commutant(commutant(a))
    if not bc.equals(a, tol):
        raise AlgebraError(f"bicommutant has dim {bc.dim}, algebra has dim {a.dim}")
    return bc


def join(a: MatrixAlgebra, b: MatrixAlgebra, seed: int = 0) -> MatrixAlgebra:
    """Smallest algebra containing both ``a`` and ``b``."""
    _same_d(a, b)
    if a.is_full or b.is_full:
        return MatrixAlgebra.full(a.d)
    return algebra_closure(np.concatenate([a.basis, b.basis]), a.d, seed=seed)


def intersection(a: MatrixAlgebra, b: MatrixAlgebra, tol: float = SPAN_TOL) -> MatrixAlgebra:
    """Linear intersection of two algebras (principal angles equal to zero)."""
    _same_d(a, b)
    if a.is_full:
        return b
    if b.is_full:
        return a
    overlap = a.rows.conj() @ b.rows.T
    u, s, _ = np.linalg.svd(overlap)
    shared = u[:, s > 1 - tol].T @ a.rows
    return MatrixAlgebra(shared, a.d)


def center(a: MatrixAlgebra, seed: int = 0) -> MatrixAlgebra:
    """a intersected with its commutant.

    Computed as the elements of ``a`` annihilated by commutators with ``a``,
    i.e. a linear solve in the coordinates of ``a``.  Two random Hermitian
    elements of ``a`` generate it for almost every draw, so the solve starts
    with those; the result is then checked against the whole basis and any
    violated element joins the constraints until the check is clean.
    """
    if a.is_full:
        return MatrixAlgebra.scalars(a.d)
    if a.dim == 1:
        return a
    b = a.basis
    herm = a.hermitian_basis()
    rng = np.random.default_rng(seed)
    constraints = [np.tensordot(rng.standard_normal(len(herm)), herm, axes=1) for _ in range(2)]
    while True:
        # columns: coefficient vectors in a's basis
        system = np.concatenate([(b @ k - k @ b).reshape(a.dim, -1).T for k in constraints])
        null = null_space(system)
        rows = null.T @ a.rows
        zs = rows.reshape(-1, a.d, a.d)
        bad = None
        for start in range(0, len(herm), _CHUNK):
            ks = herm[start:start + _CHUNK]
            for z in zs:
                err = np.max(np.abs(z @ ks - ks @ z), axis=(1, 2))
                if err.max() > 1e-8:
                    bad = ks[int(np.argmax(err))]
                    break
            if bad is not None:
                break
        if bad is None:
            return MatrixAlgebra(orthonormal_span(zs, a.d), a.d)
        constraints.append(bad)


def is_factor(a: MatrixAlgebra) -> bool:
    return center(a).dim == 1


def full_algebra(d: int) -> MatrixAlgebra:
    return MatrixAlgebra.full(d)


def tensor_factor(m: int, n: int, which: int = 0) -> MatrixAlgebra:
    """M_m (x) Id_n for ``which=0``, Id_m (x) M_n for ``which=1``."""
    d = m * n
    if which == 0:
        mats = [np.kron(e, np.eye(n)) for e in _matrix_units(m)]
    else:
        mats = [np.kron(np.eye(m), e) for e in _matrix_units(n)]
    return MatrixAlgebra(orthonormal_span(mats, d), d)


def diagonal_algebra(d: int) -> MatrixAlgebra:
    mats = [np.diag(np.eye(d)[i]) for i in range(d)]
    return MatrixAlgebra(np.array(mats, dtype=complex), d)


def _matrix_units(m: int) -> list[np.ndarray]:
    units = []
    for i in range(m):
        for j in range(m):
            e = np.zeros((m, m), dtype=complex)
            e[i, j] = 1
            units.append(e)
    return units


# ---------------------------------------------------------------------------
# states and measurements


@dataclass(frozen=True)
class DensityState:
    rho: np.ndarray

    def __post_init__(self):
        rho = as_matrix(self.rho)
        if not is_hermitian(rho, 1e-10):
            raise AlgebraError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1) > STATE_TOL or abs(np.trace(rho).imag) > STATE_TOL:
            raise AlgebraError(f"density matrix has trace {np.trace(rho)}")
        if np.linalg.eigvalsh((rho + dagger(rho)) / 2).min() < -1e-10:
            raise AlgebraError("density matrix is not positive semidefinite")
        rho = rho.copy()
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @classmethod
    def pure(cls, psi) -> DensityState:
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, d: int) -> DensityState:
        return cls(np.eye(d, dtype=complex) / d)

    @classmethod
    def random(cls, d: int, rng: np.random.Generator, rank: int | None = None) -> DensityState:
        z = rng.standard_normal((d, rank or d)) + 1j * rng.standard_normal((d, rank or d))
        rho = z @ dagger(z)
        return cls(rho / np.trace(rho).real)

    def expect(self, op: np.ndarray) -> complex:
        """omega(op) = Tr(rho op)."""
        return complex(np.trace(self.rho @ op))

    def to_json(self) -> dict:
        return matrix_to_json(self.rho)

    @classmethod
    def from_json(cls, obj: dict) -> DensityState:
        return cls(matrix_from_json(obj))


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    projectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return np.tensordot(self.eigenvalues, self.projectors, axes=1)


def spectral_decompose(a: np.ndarray, tol: float = EIG_CLUSTER_TOL) -> SpectralDecomposition:
    """Distinct eigenvalues and orthogonal eigenprojectors of a Hermitian matrix.

    Eigenvalues closer than ``tol`` (relative to the spectral radius, floor 1)
    share a projector.
    """
    a = as_matrix(a)
    if not is_hermitian(a):
        raise AlgebraError("spectral decomposition needs a Hermitian operator")
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    vals, projs = [], []
    for idx in _cluster(w, tol):
        vals.append(float(np.mean(w[idx])))
        vecs = v[:, idx]
        projs.append(vecs @ dagger(vecs))
    return SpectralDecomposition(np.array(vals), np.array(projs))


def luders_map(a: np.ndarray, rho: DensityState) -> DensityState:
    """Non-selective measurement update rho -> sum_i E_i rho E_i."""
    projs = spectral_decompose(a).projectors
    out = np.einsum("iab,bc,icd->ad", projs, rho.rho, projs)
    return DensityState((out + dagger(out)) / 2)


def luders_dual(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Heisenberg-picture Lueders map T^A(B) = sum_i E_i B E_i."""
    projs = spectral_decompose(a).projectors
    return np.einsum("iab,bc,icd->ad", projs, np.asarray(b, dtype=complex), projs)


@dataclass(frozen=True)
class NoSignalingResult:
    lhs: complex
    rhs: complex
    gap: float
    commuting: bool


def no_signaling_check(a: np.ndarray, b: np.ndarray, rho: DensityState) -> NoSignalingResult:
    """Compare omega(T^A(B)) with omega(B).

    The two agree whenever [A, B] = 0; commutation is reported rather than
    assumed so the same call doubles as a signaling detector.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    lhs = rho.expect(luders_dual(a, b))
    rhs = rho.expect(b)
    comm = np.max(np.abs(commutator(a, b))) <= 1e-12 * max(1.0, np.abs(a).max() * np.abs(b).max())
    return NoSignalingResult(lhs, rhs, float(abs(lhs - rhs)), bool(comm))


def partial_trace(rho: np.ndarray, m: int, n: int, keep: int) -> np.ndarray:
    """Reduce a state on C^m (x) C^n to the first (keep=0) or second (keep=1) factor."""
    r = np.asarray(rho).reshape(m, n, m, n)
    return np.einsum("ajbj->ab", r) if keep == 0 else np.einsum("iaib->ab", r)


def product_state(omega1: DensityState, omega2: DensityState) -> DensityState:
    return DensityState(np.kron(omega1.rho, omega2.rho))


@dataclass(frozen=True)
class IndependenceReport:
    max_factorization_error: float
    max_marginal_error: float
    tol: float

    @property
    def factorizes(self) -> bool:
        return self.max_factorization_error <= self.tol

    @property
    def marginals_match(self) -> bool:
        return self.max_marginal_error <= self.tol

    @property
    def passed(self) -> bool:
        return self.factorizes and self.marginals_match


def statistical_independence_check(
    joint: DensityState,
    omega1: DensityState,
    omega2: DensityState,
    *,
    observables: Sequence[tuple[np.ndarray, np.ndarray]] | None = None,
    samples: int = 20,
    seed: int = 0,
    tol: float = 1e-10,
) -> IndependenceReport:
    """Test omega(A B) = omega1(A) omega2(B) for A in M_m (x) Id, B in Id (x) M_n.

    ``observables`` fixes explicit (A, B) local pairs; otherwise random
    Hermitian ones are drawn.  Marginals of ``joint`` are compared with
    ``omega1`` and ``omega2`` by partial trace.
    """
    m, n = omega1.dim, omega2.dim
    if joint.dim != m * n:
        raise AlgebraError(f"joint state of dim {joint.dim} is not on M_{m} (x) M_{n}")
    rng = np.random.default_rng(seed)
    if observables is None:
        observables = [(random_hermitian(m, rng), random_hermitian(n, rng)) for _ in range(samples)]
    err = 0.0
    for a, b in observables:
        ab = joint.expect(np.kron(a, b))
        err = max(err, abs(ab - omega1.expect(a) * omega2.expect(b)))
    marg = max(
        np.abs(partial_trace(joint.rho, m, n, 0) - omega1.rho).max(),
        np.abs(partial_trace(joint.rho, m, n, 1) - omega2.rho).max(),
    )
    return IndependenceReport(float(err), float(marg), tol)


# ---------------------------------------------------------------------------
# projector lattice


def _factor_multiplicity(a: MatrixAlgebra) -> int:
    """For a factor a ~ M_p (x) Id_q return q."""
    if not is_factor(a):
        raise AlgebraError("relative dimension needs a factor")
    p = int(round(np.sqrt(a.dim)))
    if p * p != a.dim or a.d % p:
        raise AlgebraError(f"factor of dim {a.dim} is not M_p (x) Id_q inside M_{a.d}")
    return a.d // p


def relative_dimension(p: np.ndarray, a: MatrixAlgebra) -> Fraction:
    """Rank of ``p`` normalized so that minimal projectors of ``a`` have dimension 1."""
    p = as_matrix(p)
    if not is_projector(p):
        raise AlgebraError("input is not an orthogonal projector")
    if not a.contains(p):
        raise AlgebraError("projector does not belong to the algebra")
    q = _factor_multiplicity(a)
    rank = int(round(np.trace(p).real))
    return Fraction(rank, q)


def projector_equivalent(p1: np.ndarray, p2: np.ndarray, a: MatrixAlgebra) -> bool:
    """Murray-von Neumann equivalence inside a type I factor: equal relative dimension."""
    return relative_dimension(p1, a) == relative_dimension(p2, a)
