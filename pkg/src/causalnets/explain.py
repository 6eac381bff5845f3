"""Closed registry of check descriptions printed by ``verify explain <id>``."""
from __future__ import annotations

EXPLAIN: dict[str, str] = {
    # geometry
    "geom.diamond_tiling": (
        "Causal completion of a cylinder. For C = {|x| < a, |t| < tau} the double complement C'' is the "
        "diamond |t| + |x| < a + tau. It splits into C, the time caps C_t = D(C) \\ C and the space caps "
        "C_r = C'' \\ D(C); the check asserts these three pieces are disjoint and tile C'' cell for cell."
    ),
    "geom.double_complement": (
        "C'' against the exact diamond |t| + |x| < a + tau. Cells on the boundary line may fall either way, "
        "so the cell counts may differ by at most 2%."
    ),
    "geom.lens_strict": (
        "Domain of dependence versus causal completion: D(C), the lens of points all of whose backward or "
        "forward rays meet C, is a proper subset of C''. The difference is C_r, the part of the diamond "
        "reached only sideways."
    ),
    "geom.galois": (
        "Galois properties of the causal complement on random regions: O <= O'' (extensivity) and "
        "O''' = O' (the complement of a completed region is unchanged), exact at cell level."
    ),
    "geom.slab_dependence": (
        "Time slice determinism in geometric form: the domain of dependence of a slab spanning the whole "
        "window is the whole window, and its causal complement is empty."
    ),
    # algebra
    "alg.commutant_tensor": (
        "Commutant of a tensor factor: (M_2 (x) Id_2)' = Id_2 (x) M_2, a 4-dimensional algebra, computed by "
        "two independent solvers (reduced block solve and dense Kronecker null space)."
    ),
    "alg.bicommutant": (
        "Von Neumann's bicommutant theorem in finite dimensions: for the *-algebra A generated by random "
        "block-structured Hermitian matrices, A'' = A as linear spans (tolerance 1e-10)."
    ),
    "alg.factor_library": (
        "Factor detection through the center Z(A) = A intersect A'. Tensor factors M_m (x) Id_n and full "
        "algebras have Z = C Id; diagonal algebras and direct sums do not."
    ),
    "alg.no_signaling": (
        "No-signaling under nonselective measurement. With Lueders map T^A(B) = sum_i E_i B E_i over the "
        "spectral projectors E_i of A, omega(T^A(B)) = omega(B) whenever [A, B] = 0; checked on random "
        "commuting triples (A, B, rho)."
    ),
    "alg.no_signaling_control": (
        "Negative control for no-signaling: A = X, B = Z, rho = |0><0| do not commute and the Lueders "
        "update changes <Z> from 1 to 0, so the gap is 1."
    ),
    "alg.independence": (
        "Statistical independence of commuting subsystems: a product state omega1 (x) omega2 gives "
        "omega(A B) = omega1(A) omega2(B) for local A and B, and reproduces both marginals."
    ),
    "alg.independence_control": (
        "Negative control for statistical independence: the Bell state (|00> + |11>)/sqrt(2) has maximally "
        "mixed marginals, yet <Z (x) Z> = 1 differs from the product of marginal expectations, 0."
    ),
    # lattice field
    "sc.spectrum": (
        "Lattice spectrum condition: mode energies omega_j = sqrt(m^2 + (4/a^2) sin^2(pi j/N)) are "
        "non-negative, and for m > 0 the Gaussian vacuum is unique."
    ),
    "sc.massless_control": (
        "Control for the spectrum check: at m = 0 the zero mode has omega_0 = 0, so no normalizable "
        "translation-invariant vacuum exists and the uniqueness flag drops."
    ),
    "mc.pauli_jordan": (
        "Microcausality of the free field: the commutator function Delta(t, n) = (1/N) sum_j sin(omega_j t)"
        "/omega_j cos(2 pi j n/N) must be small outside the light cone. The max |Delta| beyond |x| > t + "
        "margin is required to sit at least 10^3 below the max inside |x| <= t."
    ),
    "mc.monotone_n": (
        "Refining the lattice at fixed physical size L = N a tightens microcausality: the inside/outside "
        "suppression ratio of |Delta| increases monotonically over N = N0/4, N0/2, N0."
    ),
    "mc.equal_time": (
        "Canonical equal-time relations: Delta(0, n) = 0 for every n (within 1e-12) and "
        "d/dt Delta(0, n) = delta_n0 (within 1e-6)."
    ),
    "pc.dependence": (
        "Local determinism of the field: two sets of Cauchy data that agree on an interval I evolve to "
        "fields that agree, within 1e-6, on the shrunken cone over I (sites whose reach t/a + margin stays "
        "inside I)."
    ),
    "pc.nonvacuity": (
        "Control for the determinism check: the same two data sets do differ, at order 0.1 or more, "
        "somewhere in I once the outside perturbation has had time to enter."
    ),
    # protocols
    "proto.sorkin_canonical": (
        "Impossible-measurement scenario on two qubits: kick X on qubit alpha, nonselective Bell measurement "
        "{|Phi+><Phi+|, 1 - |Phi+><Phi+|} across both qubits, then Z on qubit beta. The O3 statistics move "
        "from (1/2, 1/2) to (0, 1), a total-variation gap of 1/2: the nonlocal intermediate measurement "
        "lets the kick signal."
    ),
    "proto.sorkin_product": (
        "The same scenario with the intermediate measurement replaced by two local Z measurements "
        "(product Lueders projectors): the gap is 0."
    ),
    "proto.sorkin_no_o2": (
        "The same scenario with no intermediate measurement: the kick on alpha cannot change statistics "
        "on beta, gap 0 (the no-signaling theorem as a control)."
    ),
    "proto.circuit_lightcone": (
        "Exact lightcone of the brick-wall circuit: after t layers the Heisenberg image of a single-site "
        "operator at s is supported on sites within distance t of s."
    ),
    "proto.fermi_causal": (
        "Two-atom causality: flipping atom b leaves the reduced state at atom a's window unchanged "
        "(trace distance <= 1e-12) for every layer t < R - w_obs, for every gate seed."
    ),
    "proto.fermi_arrival": (
        "Nonvacuity of the two-atom check: with generic entangling gates the trace distance at atom a "
        "exceeds 1e-3 at some layer t > R."
    ),
    # net
    "net.isotony": (
        "Isotony of the circuit net: O1 <= O2 implies A(O1) <= A(O2), checked as exact span inclusion on "
        "random nested region pairs."
    ),
    "net.microcausality": (
        "Microcausality of the circuit net: generators of two cells whose backward cones are disjoint, "
        "|s1 - s2| > l1 + l2, commute to machine precision. Other pairs are reported as not applicable."
    ),
    "net.slice_generation": (
        "Time slice axiom for the circuit net: the algebra of one full layer is M_{2^n}, of dimension 4^n."
    ),
    "net.slice_control": (
        "Control for slice generation: the same layer with one site removed generates only 4^(n-1) "
        "dimensions."
    ),
    "net.duality": (
        "Essential duality for a region O: A(O')' = A(O''), with the left side from a commutant solve and "
        "the right side from the closure over the discrete double complement."
    ),
    "net.premise1": (
        "Discrete premise 1: A(C u C_r) = A(C) for the cylinder C and its space caps C_r. In the circuit "
        "net this follows from the cone structure instead of analytic continuation, and is checked by span "
        "equality."
    ),
    "net.premise2": (
        "Premise 2: the algebras of C u C_r and of the causal complement C' together generate M_{2^n}. "
        "Cells of the time slice through C in neither region (the caps) are listed and left out, as the "
        "argument neglects them."
    ),
    "net.premise3": (
        "Premise 3: A(C) is a factor, i.e. its center A(C) intersect A(C)' is C Id."
    ),
    "net.conclusion": (
        "Local primitive causality A(C) = A(C''), shown as a double inclusion: A(C) <= A(C')' "
        "(microcausality) and A(C'') <= A(C) (via duality and the factor property)."
    ),
    "net.implication": (
        "Soundness of the proof chain: on every tested cylinder, whenever premises 1-3 and duality hold, the "
        "conclusion A(C) = A(C'') holds too."
    ),
}


def explain(check_id: str) -> str:
    try:
        return EXPLAIN[check_id]
    except KeyError:
        raise KeyError(f"unknown check id {check_id!r}") from None
