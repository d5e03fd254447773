"""Generalized ladder algebras, number-conserving sector bases, the
input/output hopping Hamiltonian and exact quarter-period evolution.

The register has 2m sites (m input followed by m output).  One excitation
per input site is launched, evolves under the excitation-conserving hopping
Hamiltonian built from an m x m unitary, and at t = pi/2 lands (up to a
cap-induced error) on the product superposition over the output sites whose
measurement law is the permanent distribution.  The error of the capped
model relative to the exact boson reference is what
:func:`error_norm_vs_reference` quantifies.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import sparse

from .combinatorics import SpinSpec
from .exceptions import DimensionError, SizeLimitError
from .linalg import (
    DENSE_EVOLUTION_LIMIT,
    matrix_exponential_apply,
    matrix_exponential_apply_sparse,
    require_unitary,
)
from .sampling import Distribution, enumerate_configs, exact_distribution, post_select, \
    total_variation_distance

# Hard ceiling on sector dimension for any evolution; dense eigendecomposition
# is used below DENSE_EVOLUTION_LIMIT, the sparse propagator above it.
SECTOR_DIMENSION_LIMIT = 200_000


@dataclass(frozen=True)
class LadderAlgebra:
    """Single-site ladder algebra defined by its raising matrix elements.

    kind 'boson':     <k+1|A†|k> = sqrt(k+1), truncated at the stated cap
                      (exact within a fixed-excitation sector when the cap
                      equals the total excitation number).
    kind 'spin':      <k+1|A†|k> = sqrt((k+1)(2S-k)) / sqrt(2S), zero from
                      k = 2S on.  The 1/sqrt(2S) rescaling makes the
                      collision-free block match hardcore hopping exactly,
                      so the quarter-period transfer time is S-independent.
    kind 'truncated': boson elements below the cap, zero at the cap; this is
                      the occupancy-projected boson model.
    """

    kind: str
    local_cap: int

    def __post_init__(self):
        if self.kind not in ("boson", "spin", "truncated"):
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        if self.local_cap < 1:
            raise ValueError("local occupancy cap must be at least 1")

    def raising_element(self, occ: int) -> float:
        """Matrix element <occ+1|A†|occ>; zero at or above the cap."""
        if occ < 0 or occ >= self.local_cap:
            return 0.0
        if self.kind == "spin":
            s2 = self.local_cap
            return math.sqrt((occ + 1) * (s2 - occ) / s2)
        return math.sqrt(occ + 1)

    def normalization(self, occ: int) -> float:
        """f(occ): the norm of (A†)^occ |0>, the product of raising elements."""
        value = 1.0
        for q in range(occ):
            value *= self.raising_element(q)
        return value

    def commutator_value(self, occ: int) -> float:
        """F(occ) = element(occ)^2 - element(occ-1)^2, the diagonal entry of
        [A, A†] at level occ (defined for levels where the ladder acts)."""
        below = self.raising_element(occ - 1) if occ >= 1 else 0.0
        return self.raising_element(occ) ** 2 - below ** 2


def boson_algebra(cap: int) -> LadderAlgebra:
    return LadderAlgebra("boson", cap)


def spin_algebra(spin: SpinSpec | int) -> LadderAlgebra:
    spin = spin if isinstance(spin, SpinSpec) else SpinSpec(spin)
    return LadderAlgebra("spin", spin.cap)


def truncated_boson_algebra(spin: SpinSpec | int) -> LadderAlgebra:
    spin = spin if isinstance(spin, SpinSpec) else SpinSpec(spin)
    return LadderAlgebra("truncated", spin.cap)


def algebra_for(kind: str, spin: SpinSpec) -> LadderAlgebra:
    if kind == "spin":
        return spin_algebra(spin)
    if kind == "truncated":
        return truncated_boson_algebra(spin)
    raise ValueError(f"capped algebra kind must be 'spin' or 'truncated', got {kind!r}")


def ladder_matrices(alg: LadderAlgebra) -> tuple[np.ndarray, np.ndarray]:
    """Dense (cap+1)-dimensional raising and lowering matrices; the lowering
    matrix is the adjoint of the raising one."""
    dim = alg.local_cap + 1
    raise_m = np.zeros((dim, dim), dtype=np.complex128)
    for occ in range(alg.local_cap):
        raise_m[occ + 1, occ] = alg.raising_element(occ)
    return raise_m, raise_m.conj().T


class SectorBasis:
    """Ordered basis of the fixed-total-excitation sector of 2m sites.

    States are occupation tuples over (input sites 0..m-1, output sites
    m..2m-1), each entry at most ``local_cap``, listed lexicographically.
    """

    def __init__(self, mode_count: int, excitations: int, local_cap: int):
        if mode_count < 1:
            raise DimensionError("at least one input/output mode pair is required")
        self.mode_count = mode_count
        self.site_count = 2 * mode_count
        self.excitations = excitations
        self.local_cap = local_cap
        self.states = tuple(enumerate_configs(self.site_count, excitations, local_cap))
        if not self.states:
            raise ValueError(
                f"empty sector: {excitations} excitations do not fit on "
                f"{self.site_count} sites with cap {local_cap}"
            )
        self.index = {state: i for i, state in enumerate(self.states)}
        self._state_array = None
        self._max_occ = None

    @property
    def dimension(self) -> int:
        return len(self.states)

    def index_of(self, config: Sequence[int]) -> int:
        return self.index[tuple(config)]

    def state_array(self) -> np.ndarray:
        if self._state_array is None:
            self._state_array = np.array(self.states, dtype=np.int16)
        return self._state_array

    def max_occupancy(self) -> np.ndarray:
        if self._max_occ is None:
            self._max_occ = self.state_array().max(axis=1)
        return self._max_occ


@lru_cache(maxsize=128)
def sector_basis(mode_count: int, excitations: int, local_cap: int) -> SectorBasis:
    return SectorBasis(mode_count, excitations, local_cap)


@lru_cache(maxsize=128)
def _hop_table(mode_count: int, excitations: int, algebra: LadderAlgebra):
    """Structure of all single-excitation input->output hops in the sector.

    Returns index arrays (source state, destination state, input site,
    output site) and the algebra weight of each hop.  The table depends only
    on the basis and algebra, not on the coupling matrix, so sweeps over
    many unitaries reuse it.
    """
    basis = sector_basis(mode_count, excitations, algebra.local_cap)
    m = mode_count
    cap = algebra.local_cap
    src, dst, site_in, site_out, weight = [], [], [], [], []
    for u, state in enumerate(basis.states):
        for i in range(m):
            occ_in = state[i]
            if occ_in == 0:
                continue
            lower = algebra.raising_element(occ_in - 1)
            for j in range(m):
                occ_out = state[m + j]
                if occ_out >= cap:
                    continue
                raised = algebra.raising_element(occ_out)
                moved = list(state)
                moved[i] -= 1
                moved[m + j] += 1
                v = basis.index[tuple(moved)]
                src.append(u)
                dst.append(v)
                site_in.append(i)
                site_out.append(j)
                weight.append(lower * raised)
    return (
        basis,
        np.asarray(src, dtype=np.intp),
        np.asarray(dst, dtype=np.intp),
        np.asarray(site_in, dtype=np.intp),
        np.asarray(site_out, dtype=np.intp),
        np.asarray(weight, dtype=np.float64),
    )


def build_hopping_hamiltonian(r, algebra: LadderAlgebra, basis: SectorBasis) -> sparse.csr_matrix:
    """Excitation-conserving hopping Hamiltonian on the 2m-site register.

    Couples input site i to output site j with amplitude conj(r[i, j]) times
    the algebra's ladder weights, plus the hermitian conjugate.  Row i of the
    coupling matrix governs transfer out of input site i, the same
    orientation as :func:`spinsampler.matrix_functions.build_submatrix`, so
    the quarter-period image of the all-input product state measures
    according to the permanent distribution of ``r`` itself (not its
    transpose).  Hermitian and block diagonal in the total excitation number
    by construction.
    """
    r = require_unitary(r)
    m = r.shape[0]
    if basis.site_count != 2 * m:
        raise DimensionError(
            f"basis has {basis.site_count} sites but the coupling matrix implies {2 * m}"
        )
    if basis.local_cap != algebra.local_cap:
        raise DimensionError("basis occupancy cap does not match the algebra cap")
    _, src, dst, site_in, site_out, weight = _hop_table(m, basis.excitations, algebra)
    data = np.conj(r)[site_in, site_out] * weight
    dim = basis.dimension
    forward = sparse.coo_matrix((data, (dst, src)), shape=(dim, dim))
    h = (forward + forward.conj().T).tocsr()
    return h


def initial_state(basis: SectorBasis, n: int) -> np.ndarray:
    """Unit basis vector with one excitation on each of the first n input
    sites and nothing elsewhere."""
    m = basis.mode_count
    if n > m:
        raise ValueError(f"cannot place {n} single excitations on {m} input sites")
    if n != basis.excitations:
        raise ValueError("excitation count does not match the sector")
    config = (1,) * n + (0,) * (m - n) + (0,) * m
    vec = np.zeros(basis.dimension, dtype=np.complex128)
    vec[basis.index[config]] = 1.0
    return vec


def target_state(r, basis: SectorBasis, n: int, algebra: LadderAlgebra) -> np.ndarray:
    """Normalized product superposition over the output sites:

        (-i)^n  prod_i  sum_j conj(r[i, j]) A†(out j)   applied to vacuum,

    with the algebra's raising elements, so occupancies above the cap are
    truncated away before normalization.  This is the exact quarter-period
    image of the all-input product state under the uncapped hopping model.
    """
    r = require_unitary(r)
    m = r.shape[0]
    if n > m:
        raise ValueError(f"cannot build a {n}-excitation target on {m} modes")
    cap = algebra.local_cap
    amplitudes: dict[tuple[int, ...], complex] = {(0,) * m: 1.0 + 0.0j}
    for i in range(n):
        nxt: dict[tuple[int, ...], complex] = {}
        row_amps = np.conj(r[i, :])
        for config, amp in amplitudes.items():
            for j in range(m):
                occ = config[j]
                if occ >= cap:
                    continue
                element = algebra.raising_element(occ)
                raised = config[:j] + (occ + 1,) + config[j + 1:]
                nxt[raised] = nxt.get(raised, 0.0) + amp * row_amps[j] * element
        amplitudes = nxt
    vec = np.zeros(basis.dimension, dtype=np.complex128)
    empty_inputs = (0,) * m
    for config, amp in amplitudes.items():
        vec[basis.index[empty_inputs + config]] = amp
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise ValueError("target state vanishes: the cap removed every component")
    return vec * ((-1j) ** n / norm)


def evolve_sector(h, psi0: np.ndarray, t: float) -> np.ndarray:
    """Apply exp(-i*H*t); dense operators go through the eigendecomposition
    path, sparse ones through the deterministic scaled-Taylor propagator."""
    if sparse.issparse(h):
        dim = h.shape[0]
        if dim > SECTOR_DIMENSION_LIMIT:
            raise SizeLimitError(
                f"sector dimension {dim} exceeds the evolution limit {SECTOR_DIMENSION_LIMIT}"
            )
        if dim <= DENSE_EVOLUTION_LIMIT // 8:
            return matrix_exponential_apply(h.toarray(), psi0, t)
        return matrix_exponential_apply_sparse(h, psi0, t)
    return matrix_exponential_apply(h, psi0, t)


def project_capped(state: np.ndarray, basis_full: SectorBasis, cap: int) -> tuple[np.ndarray, float]:
    """Project onto the subspace with every occupancy <= cap.

    Returns the coordinates on the capped sector basis together with the
    (un-normalized) norm of the projection.
    """
    capped = sector_basis(basis_full.mode_count, basis_full.excitations,
                          min(cap, basis_full.excitations))
    idx = np.fromiter((basis_full.index[s] for s in capped.states), dtype=np.intp,
                      count=capped.dimension)
    vec = np.asarray(state, dtype=np.complex128)[idx]
    return vec, float(np.linalg.norm(vec))


def bunched_weight(state: np.ndarray, basis: SectorBasis, cap: int) -> float:
    """Probability weight on configurations where some site exceeds the cap;
    equals 1 - |Q state|^2 for a unit-norm state."""
    mask = basis.max_occupancy() > cap
    return float(np.sum(np.abs(np.asarray(state)[mask]) ** 2))


def measured_output_law(state: np.ndarray, basis: SectorBasis) -> Distribution:
    """Distribution of output-site configurations carrying all excitations.

    Components where any excitation is still on an input site are the
    post-selection reject; their weight is recorded as discarded mass and
    the remaining law is renormalized.
    """
    m = basis.mode_count
    n = basis.excitations
    weights: dict[tuple[int, ...], float] = {}
    amps = np.abs(np.asarray(state)) ** 2
    arr = basis.state_array()
    out_total = arr[:, m:].sum(axis=1)
    full_transfer = np.nonzero(out_total == n)[0]
    for idx in full_transfer:
        out_config = tuple(int(x) for x in arr[idx, m:])
        weights[out_config] = weights.get(out_config, 0.0) + float(amps[idx])
    configs = sorted(weights)
    probs = np.array([weights[c] for c in configs])
    mass = float(math.fsum(probs.tolist()))
    if mass <= 0.0:
        raise ValueError("no excitation reached the output sites")
    return Distribution(tuple(configs), probs / mass, 1.0, max(0.0, 1.0 - mass))


@dataclass(frozen=True)
class EvolutionReport:
    """Summary of one capped-model evolution against the exact reference."""

    m: int
    n: int
    twice_spin: int
    seed: int | None
    algebra: str
    time: float
    overlap: float
    error_norm: float
    tvd: float
    discarded_mass: float

    def to_dict(self) -> dict:
        return asdict(self)


def error_norm_vs_reference(r, m: int, n: int, spin: SpinSpec, t: float,
                            algebra_kind: str = "truncated",
                            seed: int | None = None) -> EvolutionReport:
    """Evolve the exact boson reference and the capped model side by side.

    The reference evolves with local cap n (exact, since the sector holds n
    excitations in total); the capped model evolves with cap 2S under the
    chosen algebra.  The report carries the norm of the difference between
    the cap-projected reference and the capped state, the overlap with the
    product-superposition target, and the total variation distance between
    the capped state's post-selected output law and the capped
    permanent distribution.
    """
    r = require_unitary(r)
    if r.shape[0] != m:
        raise DimensionError(f"coupling matrix is {r.shape[0]}x{r.shape[0]}, expected {m}")
    spin = spin if isinstance(spin, SpinSpec) else SpinSpec(spin)

    basis_ref = sector_basis(m, n, n)
    h_ref = build_hopping_hamiltonian(r, boson_algebra(n), basis_ref)
    phi_t = evolve_sector(h_ref, initial_state(basis_ref, n), t)

    basis_cap = sector_basis(m, n, spin.cap)
    algebra = algebra_for(algebra_kind, spin)
    h_cap = build_hopping_hamiltonian(r, algebra, basis_cap)
    psi_t = evolve_sector(h_cap, initial_state(basis_cap, n), t)

    q_phi, _ = project_capped(phi_t, basis_ref, spin.cap)
    error_norm = float(np.linalg.norm(q_phi - psi_t))

    target = target_state(r, basis_cap, n, algebra)
    overlap = float(np.abs(np.vdot(target, psi_t)) ** 2)

    law = measured_output_law(psi_t, basis_cap)
    input_config = (1,) * n + (0,) * (m - n)
    reference_law = post_select(exact_distribution(r, input_config, cap=spin.cap))
    tvd = float(total_variation_distance(law, reference_law))

    return EvolutionReport(
        m=m, n=n, twice_spin=spin.twice_spin, seed=seed, algebra=algebra_kind,
        time=float(t), overlap=overlap, error_norm=error_norm, tvd=tvd,
        discarded_mass=float(law.discarded_mass),
    )
