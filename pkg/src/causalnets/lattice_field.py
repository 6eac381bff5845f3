"""Free Klein-Gordon field on a periodic 1D lattice.

Modes k_j = 2 pi j / (N a) obey omega_j^2 = m^2 + (4 / a^2) sin^2(pi j / N).
The field is canonically normalized per site, [phi_m, pi_n] = i delta_mn, so
the commutator function has unit time derivative at equal times.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LatticeSpec:
    N: int
    a: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        if self.N < 8:
            raise ValueError("lattice needs at least 8 sites")
        if not self.a > 0:
            raise ValueError("lattice spacing must be positive")
        if self.m < 0:
            raise ValueError("mass must be non-negative")

    @property
    def length(self) -> float:
        return self.N * self.a

    @property
    def causal_horizon(self) -> float:
        """Latest time at which cone checks are free of wraparound."""
        return self.length / 4


def dispersion(spec: LatticeSpec) -> np.ndarray:
    j = np.arange(spec.N)
    return np.sqrt(spec.m**2 + (4 / spec.a**2) * np.sin(np.pi * j / spec.N) ** 2)


@dataclass(frozen=True)
class SpectrumReport:
    min_omega: float
    zero_mode_flag: bool
    vacuum_unique: bool


def spectrum_condition_check(spec: LatticeSpec) -> SpectrumReport:
    """Lattice analog of the spectrum condition.

    All mode energies are non-negative by construction; a zero mode (m = 0)
    means the Gaussian ground state is not normalizable in that mode, so no
    unique translation-invariant vacuum is reported.
    """
    omega = dispersion(spec)
    zero = bool(omega[0] == 0)
    return SpectrumReport(float(omega.min()), zero, not zero and bool(np.all(omega > 0)))


def _sinc_t(omega: np.ndarray, t: float) -> np.ndarray:
    """sin(omega t) / omega with the omega -> 0 limit t."""
    safe = np.where(omega > 0, omega, 1.0)
    return np.where(omega > 0, np.sin(omega * t) / safe, t)


def pauli_jordan(spec: LatticeSpec, t: float, n) -> np.ndarray | float:
    """Commutator function Delta(t, n) = (1/N) sum_j sin(w_j t)/w_j cos(2 pi j n / N)."""
    omega = dispersion(spec)
    n_arr = np.atleast_1d(np.asarray(n))
    phase = np.cos(2 * np.pi * np.outer(n_arr, np.arange(spec.N)) / spec.N)
    out = phase @ _sinc_t(omega, t) / spec.N
    return float(out[0]) if np.ndim(n) == 0 else out


def pauli_jordan_dt0(spec: LatticeSpec, n) -> np.ndarray | float:
    """Analytic time derivative of Delta at t = 0 (mode sum of cosines)."""
    n_arr = np.atleast_1d(np.asarray(n))
    phase = np.cos(2 * np.pi * np.outer(n_arr, np.arange(spec.N)) / spec.N)
    out = phase.sum(axis=1) / spec.N
    return float(out[0]) if np.ndim(n) == 0 else out


@dataclass(frozen=True)
class CommutatorTable:
    spec: LatticeSpec
    times: np.ndarray
    sites: np.ndarray
    values: np.ndarray  # shape (len(times), len(sites))

    def to_tsv(self) -> str:
        lines = ["t\tn\tdelta"]
        for i, t in enumerate(self.times):
            for k, n in enumerate(self.sites):
                lines.append(f"{t:.6g}\t{int(n)}\t{self.values[i, k]:.12e}")
        return "\n".join(lines) + "\n"


def commutator_table(spec: LatticeSpec, times, sites) -> CommutatorTable:
    times = np.asarray(times, dtype=float)
    sites = np.asarray(sites, dtype=int)
    values = np.array([pauli_jordan(spec, t, sites) for t in times])
    return CommutatorTable(spec, times, sites, values)


@dataclass(frozen=True)
class LightconeReport:
    t: float
    margin: float
    outside_max: float
    inside_max: float

    @property
    def suppression(self) -> float:
        return self.inside_max / self.outside_max if self.outside_max > 0 else np.inf


def lightcone_suppression(spec: LatticeSpec, t: float, margin: float) -> LightconeReport:
    """Compare max |Delta| beyond |x| > t + margin with max |Delta| inside |x| <= t.

    Distances are physical (x = n a) and measured the short way round the ring.
    """
    if t >= spec.causal_horizon:
        raise ValueError(f"t={t} reaches the wraparound horizon {spec.causal_horizon}")
    n = np.arange(-(spec.N // 2), spec.N // 2)
    x = np.abs(n) * spec.a
    delta = np.abs(pauli_jordan(spec, t, n))
    return LightconeReport(t, margin, float(delta[x > t + margin].max()), float(delta[x <= t].max()))


# ---------------------------------------------------------------------------
# Cauchy evolution


@dataclass(frozen=True)
class CauchyData:
    phi: np.ndarray
    pi: np.ndarray

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float)
        pi = np.asarray(self.pi, dtype=float)
        if phi.shape != pi.shape or phi.ndim != 1:
            raise ValueError("phi and pi must be 1D arrays of equal length")
        if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(pi))):
            raise ValueError("Cauchy data must be finite")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "pi", pi)

    def to_json(self) -> str:
        return json.dumps({"phi": self.phi.tolist(), "pi": self.pi.tolist()})

    @classmethod
    def from_json(cls, text: str) -> CauchyData:
        obj = json.loads(text)
        return cls(np.array(obj["phi"]), np.array(obj["pi"]))


def _modes(spec: LatticeSpec, data: CauchyData) -> tuple[np.ndarray, np.ndarray]:
    if data.phi.shape != (spec.N,):
        raise ValueError(f"data has {data.phi.shape[0]} sites, lattice has {spec.N}")
    return np.fft.fft(data.phi), np.fft.fft(data.pi)


def evolve_modes(spec: LatticeSpec, phi_k: np.ndarray, pi_k: np.ndarray, t: float):
    omega = dispersion(spec)
    c = np.cos(omega * t)
    return c * phi_k + _sinc_t(omega, t) * pi_k, -omega * np.sin(omega * t) * phi_k + c * pi_k


def cauchy_evolve(spec: LatticeSpec, data: CauchyData, t: float) -> CauchyData:
    """Exact mode-space evolution of the initial data by time ``t``."""
    phi_k, pi_k = _modes(spec, data)
    phi_k, pi_k = evolve_modes(spec, phi_k, pi_k, t)
    return CauchyData(np.fft.ifft(phi_k).real, np.fft.ifft(pi_k).real)


def energy(spec: LatticeSpec, data: CauchyData) -> float:
    phi_k, pi_k = _modes(spec, data)
    omega = dispersion(spec)
    return float(np.sum(np.abs(pi_k) ** 2 + omega**2 * np.abs(phi_k) ** 2) / (2 * spec.N))


@dataclass(frozen=True)
class DependenceCheck:
    t: float
    margin: int
    interval: tuple[int, int]
    region_checked: np.ndarray
    max_deviation_inside: float
    max_deviation_interval: float


def shrunken_cone(spec: LatticeSpec, interval: tuple[int, int], t: float, margin: int) -> np.ndarray:
    """Sites n with [n - t/a - margin, n + t/a + margin] inside the interval."""
    i0, i1 = interval
    reach = t / spec.a + margin
    n = np.arange(spec.N)
    return n[(n - reach >= i0) & (n + reach <= i1)]


def domain_of_dependence_check(
    spec: LatticeSpec,
    data1: CauchyData,
    data2: CauchyData,
    interval: tuple[int, int],
    t: float,
    margin: int = 8,
) -> DependenceCheck:
    """Evolve two data sets that agree on ``interval`` and compare them inside its cone.

    ``interval`` is an inclusive site range [i0, i1].  The deviation over the
    whole interval is reported alongside, which is where a perturbation that
    has entered the interval shows up.
    """
    i0, i1 = interval
    if not 0 <= i0 <= i1 < spec.N:
        raise ValueError("interval must satisfy 0 <= i0 <= i1 < N")
    if i1 - i0 + 1 < 4:
        raise ValueError("interval must contain at least 4 sites")
    sl = slice(i0, i1 + 1)
    if not (np.array_equal(data1.phi[sl], data2.phi[sl]) and np.array_equal(data1.pi[sl], data2.pi[sl])):
        raise ValueError("the two data sets differ inside the interval")
    e1 = cauchy_evolve(spec, data1, t)
    e2 = cauchy_evolve(spec, data2, t)
    diff = np.abs(e1.phi - e2.phi)
    region = shrunken_cone(spec, interval, t, margin)
    inside = float(diff[region].max()) if len(region) else 0.0
    return DependenceCheck(t, margin, (i0, i1), region, inside, float(diff[sl].max()))
