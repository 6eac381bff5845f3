"""Verification suites behind the ``verify`` command.

Each suite returns check records and the columnar plot data it owns.  A record
is a plain dict: ``id`` (a key of the explain registry), ``kind`` ("check" or
"control"), ``passed``, plus measured values.  Controls demonstrate a property
failing on purpose; for them ``passed`` reports whether the demonstration
behaved as intended and they never decide the exit code.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from . import algebra as alg
from . import geometry as geo
from . import lattice_field as lf
from . import protocols as pr
from . import net_verifier as nv

SUITES = ("geometry", "algebra", "lattice", "protocols", "net")
SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    suite: str = "all"
    seed: int = 0
    out: str = "verify_out"
    window: tuple[float, float] = (8.0, 8.0)
    h: float = 0.05
    lattice_n: int = 512
    mass: float = 1.0
    spacing: float = 1.0
    qubits: int | None = None
    depth: int | None = None

    def __post_init__(self):
        if self.suite not in SUITES + ("all",):
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES + ('all',))}")
        if self.h <= 0 or min(self.window) <= 0:
            raise ConfigError("window extents and h must be positive")
        if self.lattice_n < 32 or self.lattice_n % 4:
            raise ConfigError("lattice-n must be a multiple of 4 and at least 32")
        if self.mass < 0 or self.spacing <= 0:
            raise ConfigError("mass must be non-negative and spacing positive")
        if self.qubits is not None and not 2 <= self.qubits <= nv.MAX_NET_QUBITS:
            raise ConfigError(f"qubits must lie in [2, {nv.MAX_NET_QUBITS}]")
        if self.depth is not None and not 1 <= self.depth <= nv.MAX_NET_DEPTH:
            raise ConfigError(f"depth must lie in [1, {nv.MAX_NET_DEPTH}]")

    @property
    def suites(self) -> tuple[str, ...]:
        return SUITES if self.suite == "all" else (self.suite,)

    def to_json(self) -> dict:
        out = dataclasses.asdict(self)
        out["window"] = list(self.window)
        return out


KEYS = tuple(f.name for f in dataclasses.fields(RunConfig))


def parse_window(text: str) -> tuple[float, float]:
    try:
        t, x = (float(v) for v in text.lower().split("x"))
    except ValueError:
        raise ConfigError(f"window must look like 8x8, got {text!r}") from None
    return (t, x)


_CASTS = {
    "suite": str, "seed": int, "out": str, "window": parse_window, "h": float,
    "lattice_n": int, "mass": float, "spacing": float, "qubits": int, "depth": int,
}


def coerce(key: str, value) -> object:
    key = key.replace("-", "_")
    if key not in _CASTS:
        raise ConfigError(f"unknown config key {key!r}")
    if isinstance(value, str):
        try:
            return _CASTS[key](value.strip())
        except ConfigError:
            raise
        except ValueError:
            raise ConfigError(f"bad value {value!r} for {key}") from None
    return value


def read_config_file(path: str) -> dict:
    """Plain key=value lines; '#' starts a comment."""
    out = {}
    try:
        lines = open(path, encoding="utf-8").read().splitlines()
    except OSError as e:
        raise ConfigError(f"cannot read config file: {e}") from None
    for no, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{no}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        out[key] = coerce(key, value)
    return out


def _record(cid: str, passed: bool, kind: str = "check", **values) -> dict:
    return {"id": cid, "kind": kind, "passed": bool(passed), **values}


def _f(x: float) -> float:
    """Round for the report so that summaries are stable to print."""
    return float(f"{float(x):.6e}")


@dataclass
class SuiteResult:
    name: str
    checks: list[dict]
    tables: dict[str, str] = field(default_factory=dict)
    plot_data: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# geometry


def _random_region(window: geo.Window, rng: np.random.Generator) -> geo.Region:
    region = geo.Region.empty(window)
    span = min(window.t_max, window.x_max)
    for _ in range(rng.integers(1, 4)):
        center = tuple(rng.uniform(-span, span, 2))
        if rng.random() < 0.5:
            part = geo.diamond(window, center, rng.uniform(0.2, span / 2))
        else:
            part = geo.cylinder(window, rng.uniform(0.2, span / 2), rng.uniform(0.2, span / 2), center)
        region = region | part
    scatter = rng.random(window.shape) < 1e-4
    return geo.Region(window, region.mask | scatter, "random")


def galois_check(window: geo.Window, n_regions: int, seed: int) -> tuple[bool, int]:
    rng = np.random.default_rng(seed)
    for i in range(n_regions):
        o = _random_region(window, rng)
        c1 = geo.complement_mask(o.mask)
        c2 = geo.complement_mask(c1)
        c3 = geo.complement_mask(c2)
        if not (np.all(c2[o.mask]) and np.array_equal(c3, c1)):
            return False, i
    return True, n_regions


def run_geometry(cfg: RunConfig) -> SuiteResult:
    t_max, x_max = cfg.window
    try:
        window = geo.Window(t_max, x_max, cfg.h)
        dec = geo.diamond_decomposition(3.0, 2.0, window)
    except ValueError as e:
        raise ConfigError(f"geometry: {e}") from None
    checks = []
    counts = dec.counts()
    checks.append(_record("geom.diamond_tiling", dec.tiles(), counts=counts))

    exact = geo.diamond(window, (0.0, 0.0), 5.0)
    mismatch = int(np.count_nonzero(exact.mask ^ dec.diamond.mask))
    rel = abs(len(dec.diamond) - len(exact)) / len(exact)
    checks.append(_record("geom.double_complement", rel <= 0.02, cells=len(dec.diamond),
                          exact_cells=len(exact), mismatched_cells=mismatch, relative_count_error=_f(rel)))
    checks.append(_record("geom.lens_strict", dec.domain < dec.diamond,
                          lens_cells=len(dec.domain), diamond_cells=len(dec.diamond)))

    ok, n = galois_check(window, 100, cfg.seed)
    checks.append(_record("geom.galois", ok, regions=n))

    slab = geo.time_slice(0.0, 1.0, window)
    dom = geo.domain_of_dependence(slab)
    comp = geo.causal_complement(slab)
    checks.append(_record("geom.slab_dependence", dom == geo.Region.whole(window) and not comp,
                          slab_cells=len(slab), domain_cells=len(dom), complement_cells=len(comp)))

    labels = np.full(window.shape, "", dtype=object)
    labels[geo.causal_complement(dec.cylinder).mask] = "complement"
    labels[dec.caps_r.mask] = "caps_r"
    labels[dec.caps_t.mask] = "caps_t"
    labels[dec.cylinder.mask] = "cylinder"
    rows, cols = np.nonzero(labels != "")
    tc, xc = window.t_centers(), window.x_centers()
    lines = ["row\tcol\tt\tx\tpart"]
    lines += [f"{r}\t{c}\t{tc[r]:.6g}\t{xc[c]:.6g}\t{labels[r, c]}" for r, c in zip(rows, cols)]
    return SuiteResult("geometry", checks, {"diamond_cells.tsv": "\n".join(lines) + "\n"},
                       {"diamond": (window, dec)})


# ---------------------------------------------------------------------------
# algebra


def random_block_algebra(rng: np.random.Generator, max_d: int = 16) -> alg.MatrixAlgebra:
    """Algebra generated by random Hermitian blocks M_k (x) Id_m, randomly rotated."""
    while True:
        blocks = [(int(rng.integers(1, 4)), int(rng.integers(1, 4))) for _ in range(rng.integers(1, 4))]
        d = sum(k * m for k, m in blocks)
        if 2 <= d <= max_d:
            break
    u = alg.haar_unitary(d, rng)
    gens, off = [], 0
    for k, m in blocks:
        for _ in range(2):
            big = np.zeros((d, d), dtype=complex)
            big[off:off + k * m, off:off + k * m] = np.kron(alg.random_hermitian(k, rng), np.eye(m))
            gens.append(u @ big @ alg.dagger(u))
        off += k * m
    return alg.algebra_closure(gens, d)


def random_commuting_triple(rng: np.random.Generator, max_d: int = 16):
    """(A, B, rho) with A in M_m (x) Id, B in Id (x) M_n, all rotated by one unitary."""
    while True:
        m, n = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        if m * n <= max_d:
            break
    u = alg.haar_unitary(m * n, rng)
    a = u @ np.kron(alg.random_hermitian(m, rng), np.eye(n)) @ alg.dagger(u)
    b = u @ np.kron(np.eye(m), alg.random_hermitian(n, rng)) @ alg.dagger(u)
    return a, b, alg.DensityState.random(m * n, rng)


def factor_library() -> list[tuple[str, alg.MatrixAlgebra, bool]]:
    return [
        ("M2 (x) Id2", alg.tensor_factor(2, 2, 0), True),
        ("Id2 (x) M2", alg.tensor_factor(2, 2, 1), True),
        ("M3 (x) Id2", alg.tensor_factor(3, 2, 0), True),
        ("M4", alg.full_algebra(4), True),
        ("diag(4)", alg.diagonal_algebra(4), False),
        ("diag(3)", alg.diagonal_algebra(3), False),
        ("M2 + C", alg.algebra_closure([np.diag([1, 1, 0]).astype(complex),
                                        np.pad(alg.PAULI_X, ((0, 1), (0, 1)))], 3), False),
    ]


def run_algebra(cfg: RunConfig) -> SuiteResult:
    rng = np.random.default_rng(cfg.seed)
    checks = []
    a = alg.tensor_factor(2, 2, 0)
    expect = alg.tensor_factor(2, 2, 1)
    red, dense = alg.commutant(a), alg.commutant(a, method="dense")
    checks.append(_record("alg.commutant_tensor", red.equals(expect) and dense.equals(expect),
                          dim=red.dim, dense_dim=dense.dim))

    worst = 0.0
    ok = True
    for _ in range(50):
        A = random_block_algebra(rng)
        bc = alg.commutant(alg.commutant(A))
        ok &= bc.equals(A)
        rows = bc.rows if not bc.is_full else np.eye(A.d**2)
        if not A.is_full and not bc.is_full:
            worst = max(worst, float(np.max(np.linalg.norm(rows - (rows @ A.rows.conj().T) @ A.rows, axis=1))))
    checks.append(_record("alg.bicommutant", ok, algebras=50, max_residual=_f(worst)))

    lib = [(name, alg.is_factor(A), want) for name, A, want in factor_library()]
    checks.append(_record("alg.factor_library", all(got == want for _, got, want in lib),
                          library={name: got for name, got, _ in lib}))

    gap = 0.0
    for _ in range(1000):
        a_, b_, rho = random_commuting_triple(rng)
        gap = max(gap, alg.no_signaling_check(a_, b_, rho).gap)
    checks.append(_record("alg.no_signaling", gap <= 1e-12, triples=1000, max_gap=_f(gap)))

    ctrl = alg.no_signaling_check(alg.PAULI_X, alg.PAULI_Z, alg.DensityState.pure([1, 0]))
    checks.append(_record("alg.no_signaling_control", ctrl.gap >= 0.1, kind="control",
                          gap=_f(ctrl.gap), commuting=ctrl.commuting))

    o1 = alg.DensityState.random(2, rng)
    o2 = alg.DensityState.random(3, rng)
    ind = alg.statistical_independence_check(alg.product_state(o1, o2), o1, o2, seed=cfg.seed)
    checks.append(_record("alg.independence", ind.passed, max_error=_f(ind.max_factorization_error)))

    bell = alg.DensityState.pure(np.array([1, 0, 0, 1]) / np.sqrt(2))
    mixed = alg.DensityState.maximally_mixed(2)
    zz = [(alg.PAULI_Z, alg.PAULI_Z)]
    ctrl = alg.statistical_independence_check(bell, mixed, mixed, observables=zz)
    checks.append(_record("alg.independence_control", not ctrl.factorizes and ctrl.marginals_match,
                          kind="control", factorization_error=_f(ctrl.max_factorization_error)))
    return SuiteResult("algebra", checks)


# ---------------------------------------------------------------------------
# lattice field


def monotone_suppression(n_top: int, spacing: float, m: float, t: float = 50.0, margin: float = 5.0):
    """Suppression ratios at fixed physical length L = n_top * spacing for N = n_top/4, n_top/2, n_top."""
    length = n_top * spacing
    out = []
    for n in (n_top // 4, n_top // 2, n_top):
        spec = lf.LatticeSpec(n, length / n, m)
        out.append((n, spec.a, lf.lightcone_suppression(spec, t, margin)))
    return out


def run_lattice(cfg: RunConfig) -> SuiteResult:
    try:
        spec = lf.LatticeSpec(cfg.lattice_n, cfg.spacing, cfg.mass)
        t = 50.0
        rep = lf.lightcone_suppression(spec, t, 5 * spec.a)
        mono = monotone_suppression(cfg.lattice_n, cfg.spacing, cfg.mass, t, 5 * spec.a)
    except ValueError as e:
        raise ConfigError(f"lattice: {e}") from None
    checks = []
    sr = lf.spectrum_condition_check(spec)
    checks.append(_record("sc.spectrum", sr.min_omega >= 0 and (sr.vacuum_unique or cfg.mass == 0),
                          min_omega=_f(sr.min_omega), vacuum_unique=sr.vacuum_unique))
    zero = lf.spectrum_condition_check(lf.LatticeSpec(cfg.lattice_n, cfg.spacing, 0.0))
    checks.append(_record("sc.massless_control", zero.zero_mode_flag and not zero.vacuum_unique, kind="control",
                          zero_mode=zero.zero_mode_flag))

    checks.append(_record("mc.pauli_jordan", rep.suppression >= 1e3, t=t, margin=rep.margin,
                          outside_max=_f(rep.outside_max), inside_max=_f(rep.inside_max),
                          suppression=_f(rep.suppression)))
    ratios = [r.suppression for _, _, r in mono]
    checks.append(_record("mc.monotone_n", all(np.diff(ratios) > 0),
                          lattices=[{"N": n, "a": _f(a), "suppression": _f(r.suppression)} for n, a, r in mono]))

    sites = np.arange(-(spec.N // 2), spec.N // 2)
    eq = float(np.max(np.abs(lf.pauli_jordan(spec, 0.0, sites))))
    dt = lf.pauli_jordan_dt0(spec, sites)
    dt_err = float(np.max(np.abs(dt - (sites == 0))))
    checks.append(_record("mc.equal_time", eq <= 1e-12 and dt_err <= 1e-6,
                          max_delta=_f(eq), max_dt_error=_f(dt_err)))

    n = spec.N
    interval = (n // 4, 3 * n // 4 - 1)
    d1 = lf.CauchyData(np.zeros(n), np.zeros(n))
    phi = np.zeros(n)
    phi[interval[0] - 1] = 1.0
    d2 = lf.CauchyData(phi, np.zeros(n))
    t_dep = min(spec.causal_horizon / 2, (interval[1] - interval[0]) * spec.a / 4)
    chk = lf.domain_of_dependence_check(spec, d1, d2, interval, t_dep, margin=8)
    checks.append(_record("pc.dependence", chk.max_deviation_inside <= 1e-6, t=_f(t_dep), margin=8,
                          sites_checked=len(chk.region_checked), max_deviation=_f(chk.max_deviation_inside)))
    checks.append(_record("pc.nonvacuity", chk.max_deviation_interval >= 0.1, kind="control",
                          max_deviation_interval=_f(chk.max_deviation_interval)))

    times = [0.0, 10.0, 25.0, 50.0]
    shown = np.arange(-100, 101)
    table = lf.commutator_table(spec, times, shown)
    return SuiteResult("lattice", checks, {"pauli_jordan.tsv": table.to_tsv()},
                       {"pauli_jordan": (table, mono)})


# ---------------------------------------------------------------------------
# protocols

FERMI_N, FERMI_SB, FERMI_SA, FERMI_DEPTH, FERMI_SEEDS = 10, 1, 7, 12, 100


def lightcone_check(n: int, depth: int, seeds: range) -> tuple[bool, int]:
    """Heisenberg support after t layers stays within distance t; returns (ok, worst excess)."""
    worst = -1
    for seed in seeds:
        c = pr.BrickWallCircuit(n, depth, seed)
        for t in range(depth + 1):
            u = c.unitary(t)
            for s in range(n):
                op = alg.dagger(u) @ alg.embed(alg.PAULI_Z, s, n) @ u
                sup = pr.operator_support(op, n)
                worst = max(worst, max(abs(x - s) for x in sup) - t)
    return worst <= 0, worst


def run_protocols(cfg: RunConfig) -> SuiteResult:
    checks = []
    rho0 = alg.DensityState.pure([1, 0, 0, 0])
    canon = pr.canonical_sorkin_setup()
    gap = pr.sorkin_signaling_gap(canon, rho0)
    checks.append(_record("proto.sorkin_canonical", abs(gap - 0.5) <= 1e-12, kind="control",
                          gap=_f(gap), swapped_gap=_f(pr.sorkin_signaling_gap(canon.swapped(), rho0)),
                          geometry="kick on qubit alpha=0, Bell measurement on both, Z readout on beta=1"))
    prod = pr.SorkinSetup(alg.PAULI_X, pr.product_projectors(), alg.PAULI_Z)
    g_prod = pr.sorkin_signaling_gap(prod, rho0)
    checks.append(_record("proto.sorkin_product", g_prod <= 1e-12, gap=_f(g_prod)))
    g_none = pr.sorkin_signaling_gap(canon, rho0, with_o2=False)
    checks.append(_record("proto.sorkin_no_o2", g_none <= 1e-12, gap=_f(g_none)))

    ok, excess = lightcone_check(6, 5, range(cfg.seed, cfg.seed + 3))
    checks.append(_record("proto.circuit_lightcone", ok, n_qubits=6, depth=5, seeds=3, worst_excess=excess))

    setup = pr.FermiSetup(FERMI_N, FERMI_SA, FERMI_SB, 0)
    curves = []
    for seed in range(cfg.seed, cfg.seed + FERMI_SEEDS):
        curves.append(pr.fermi_deviation_curve(setup, pr.BrickWallCircuit(FERMI_N, FERMI_DEPTH, seed)))
    curves = np.array(curves)
    early = curves[:, :setup.R - setup.w_obs]
    late = curves[:, setup.R + 1:]
    checks.append(_record("proto.fermi_causal", float(early.max()) <= 1e-12, n=FERMI_N, R=setup.R,
                          seeds=FERMI_SEEDS, max_early_deviation=_f(early.max())))
    checks.append(_record("proto.fermi_arrival", float(late[0].max()) > 1e-3, seed=cfg.seed,
                          max_late_deviation=_f(late[0].max()),
                          seeds_arrived=int(np.count_nonzero(late.max(axis=1) > 1e-3))))

    lines = ["t\tseed\tdeviation"]
    for k, curve in enumerate(curves[:5]):
        lines += [f"{t}\t{cfg.seed + k}\t{v:.12e}" for t, v in enumerate(curve)]
    return SuiteResult("protocols", checks, {"fermi_deviation.tsv": "\n".join(lines) + "\n"},
                       {"fermi": (setup, curves)})


# ---------------------------------------------------------------------------
# net

# (n_qubits, net depth, cylinder sites, cylinder layers)
NET_CASES = ((5, 3, 1, 1), (6, 6, 2, 2))
IMPLICATION_SWEEP = ((4, 4), (5, 4))


def implication_sweep(seed: int) -> tuple[bool, int, list[dict]]:
    """Replay the proof on every cylinder that fits small grids."""
    tested, failures = 0, []
    for n, depth in IMPLICATION_SWEEP:
        net = nv.build_net(pr.BrickWallCircuit(n, depth, seed))
        for a in range(1, n):
            for tau in range(1, depth):
                for s0 in range(n - a + 1):
                    for l0 in range(depth - tau + 1):
                        try:
                            rep = nv.replay_appendix_proof(net, a, tau, s0, l0, seed=seed)
                        except ValueError:
                            continue
                        tested += 1
                        if not rep.implication_holds:
                            failures.append(rep.net_params)
    return not failures, tested, failures


def run_net(cfg: RunConfig) -> SuiteResult:
    checks = []
    small = nv.build_net(pr.BrickWallCircuit(4, 4, cfg.seed))
    iso = nv.check_isotony(small, 200, cfg.seed)
    checks.append(_record("net.isotony", iso.passed, **iso.to_json()))
    mc_net = nv.build_net(pr.BrickWallCircuit(5, 4, cfg.seed))
    mc = nv.check_microcausality(mc_net)
    checks.append(_record("net.microcausality", mc.passed, **mc.to_json()))
    for layer in range(small.depth):
        sg = nv.check_slice_generation(small, layer)
        checks.append(_record("net.slice_generation", sg.passed, **sg.to_json()))
        checks.append(_record("net.slice_control", sg.details["control_short"], kind="control",
                              layer=layer, control_dim=sg.details["control_dim"]))

    if cfg.qubits is None and cfg.depth is None:
        cases = NET_CASES
    else:
        n = cfg.qubits or 5
        depth = cfg.depth or 3
        cases = ((n, depth, 1, 1),)
    proofs = []
    for n, depth, a, tau in cases:
        try:
            net = nv.build_net(pr.BrickWallCircuit(n, depth, cfg.seed))
            rep = nv.replay_appendix_proof(net, a, tau, seed=cfg.seed)
        except ValueError as e:
            raise ConfigError(f"net: {e}") from None
        case = f"n={n},depth={depth},C={a}x{tau}"
        single = net.region([(rep.net_params["layer0"], rep.net_params["site0"])])
        du = nv.check_essential_duality(net, single)
        checks.append(_record("net.duality", du.passed, case=case, region="single cell", **du.details))
        for step in rep.steps:
            cid = "net.duality" if step.name == "duality" else f"net.{step.name}"
            extra = {"caps_neglected": [list(c) for c in rep.caps_neglected]} if step.name == "premise2" else {}
            checks.append(_record(cid, step.passed, case=case, region="cylinder", dims=step.dims, **extra))
        proofs.append(rep.to_json())

    ok, tested, failures = implication_sweep(cfg.seed)
    checks.append(_record("net.implication", ok and all(p["implication_holds"] for p in proofs),
                          configurations=tested + len(proofs), failures=failures))
    return SuiteResult("net", checks, plot_data={"proofs": proofs})


RUNNERS = {
    "geometry": run_geometry,
    "algebra": run_algebra,
    "lattice": run_lattice,
    "protocols": run_protocols,
    "net": run_net,
}
