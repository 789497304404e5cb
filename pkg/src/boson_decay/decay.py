"""Zero-temperature decay of Fock and coherent states, plus a dense Fock-space oracle.

The closed-form laws (binomial populations, exponential survival, coherent
label contraction) are validated elsewhere against :class:`FockSpaceOracle`,
which evolves the full joint state in a truncated product Fock basis and
partial-traces the bath from first principles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Union

import numpy as np

from .bath import DiscreteBath
from .errors import CrossBlockRequiredError, ResourceLimitError, TruncationError
from .propagator import PropagatorCoefficients, SystemMode

_MAX_ORACLE_BATH_MODES = 4
_MAX_ORACLE_DIMENSION = 200_000
_TRACE_DEFECT_TOL = 1e-6


# --------------------------------------------------------------------------
# initial states


@dataclass(frozen=True)
class FockState:
    """Number eigenstate with ``n`` excitations."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"excitation number must be nonnegative (got {self.n})")


@dataclass(frozen=True)
class CoherentState:
    """Displaced vacuum with complex label ``alpha``."""

    alpha: complex


@dataclass(frozen=True)
class CoherentSuperposition:
    """Finite weighted superposition of coherent states: sum_k C_k |alpha_k>."""

    terms: tuple[tuple[complex, complex], ...]

    def __post_init__(self) -> None:
        terms = tuple((complex(c), complex(a)) for c, a in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise ValueError("a superposition needs at least one term")
        if not self.norm() > 0:
            raise ValueError("superposition must have positive norm")

    def norm(self) -> float:
        """Vector norm computed with coherent-state overlaps."""
        total = 0.0j
        for ck, ak in self.terms:
            for cl, al in self.terms:
                total += np.conj(ck) * cl * coherent_overlap(ak, al)
        return math.sqrt(max(total.real, 0.0))


OpenSystemState = Union[FockState, CoherentState, CoherentSuperposition]


def coherent_overlap(a: complex, b: complex) -> complex:
    """<a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b)."""
    return complex(np.exp(-0.5 * abs(a) ** 2 - 0.5 * abs(b) ** 2 + np.conj(a) * b))


def coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    """Number-basis amplitudes of |alpha> up to ``n_max`` (recurrence, stable)."""
    amps = np.empty(n_max + 1, dtype=complex)
    amps[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for m in range(1, n_max + 1):
        amps[m] = amps[m - 1] * alpha / math.sqrt(m)
    return amps


def default_fock_cutoff(alpha_scale: float) -> int:
    """Truncation that bounds the dropped Poisson tail well below 1e-6."""
    a = abs(alpha_scale)
    return int(math.ceil(a * a + 6.0 * a + 10.0))


# --------------------------------------------------------------------------
# closed-form decay laws


@dataclass(frozen=True)
class PopulationDistribution:
    """Probabilities of finding m = 0..n excitations in the system."""

    probs: np.ndarray
    t: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", np.asarray(self.probs, dtype=float))

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(self.probs.size), self.probs))

    @property
    def variance(self) -> float:
        m = np.arange(self.probs.size)
        return float(np.dot(m * m, self.probs) - self.mean**2)


def fock_populations(n: int, survival: float, t: float | None = None) -> PopulationDistribution:
    """Binomial population law for an initial n-excitation state.

    ``survival`` is the single-excitation survival probability; each of the n
    excitations is independently retained with that probability, giving
    P_m = C(n, m) p^m (1-p)^(n-m).
    """
    if n < 0:
        raise ValueError("excitation number must be nonnegative")
    if not 0.0 <= survival <= 1.0:
        raise ValueError(f"survival probability must lie in [0, 1] (got {survival})")
    m = np.arange(n + 1)
    coeffs = np.array([math.comb(n, int(k)) for k in m], dtype=float)
    probs = coeffs * survival**m * (1.0 - survival) ** (n - m)
    return PopulationDistribution(probs=probs, t=t)


def fock_survival(n: int, gamma: float, t: float) -> float:
    """Probability of retaining all ``n`` excitations: exp(-n gamma t)."""
    if n < 0:
        raise ValueError("excitation number must be nonnegative")
    if t < 0:
        raise ValueError("time must be nonnegative")
    return math.exp(-n * gamma * t)


def fock_decay_time(n: int, gamma: float) -> float:
    """Time constant of the full-retention probability; infinite for n = 0."""
    if n == 0:
        return math.inf
    return 1.0 / (n * gamma)


def coherent_decay(alpha: complex, survival_amplitude: complex) -> tuple[complex, float]:
    """Label and mean excitation number of a decayed coherent state.

    A coherent state stays coherent with contracted label alpha * survival;
    the mean number is the squared label magnitude, independent of the phase
    of alpha.
    """
    if abs(survival_amplitude) > 1.0 + 1e-9:
        raise ValueError("survival amplitude cannot exceed unit magnitude")
    label = complex(alpha) * complex(survival_amplitude)
    return label, abs(label) ** 2


def coherent_decay_time(gamma: float) -> float:
    """Mean-number time constant of a decaying coherent state."""
    return 1.0 / gamma


# --------------------------------------------------------------------------
# propagation of joint coherent labels (excited bath)


@dataclass(frozen=True)
class JointCoherentLabels:
    """Coherent labels of the system and every bath mode after evolution."""

    system_label: complex
    bath_labels: np.ndarray

    def total_norm_sq(self) -> float:
        return float(abs(self.system_label) ** 2 + np.sum(np.abs(self.bath_labels) ** 2))


def excited_bath_evolution(
    alpha: complex, lambdas, coeffs: PropagatorCoefficients
) -> JointCoherentLabels:
    """Map initial coherent labels (system alpha, bath lambdas) through the propagator.

    A product of coherent states stays a product of coherent states; the labels
    transform with the same linear map as the mode operators. With the bath
    block present the map is exact (and exactly norm-preserving for oracle
    coefficients). Without it, at most one bath label may be nonzero and the
    bath labels keep only their free phase, dropping bath-to-bath feeding.
    """
    lambdas = np.asarray(lambdas, dtype=complex)
    if lambdas.shape != (coeffs.n_modes,):
        raise ValueError("need exactly one bath label per mode")
    system_label = complex(alpha) * coeffs.survival + np.dot(lambdas, coeffs.emission)
    if coeffs.bath_block is not None:
        bath_labels = complex(alpha) * coeffs.emission + coeffs.bath_block @ lambdas
    else:
        if int(np.count_nonzero(lambdas)) > 1:
            raise CrossBlockRequiredError(
                "cross-block required: propagating two or more excited bath modes "
                "needs coefficients computed with the bath-to-bath block"
            )
        free_phase = np.exp(-1j * coeffs.bath_omegas * coeffs.t)
        bath_labels = complex(alpha) * coeffs.absorption + lambdas * free_phase
    return JointCoherentLabels(system_label=system_label, bath_labels=bath_labels)


# --------------------------------------------------------------------------
# reduced density matrices


@dataclass(frozen=True)
class DensityMatrixFock:
    """Reduced system density matrix in the number basis (dimension n_max + 1)."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("density matrix must be square")

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    @property
    def populations(self) -> np.ndarray:
        return np.diag(self.entries).real.copy()

    @property
    def mean_number(self) -> float:
        return float(np.dot(np.arange(self.dim), self.populations))

    @property
    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)

    def fidelity_with_coherent(self, label: complex) -> float:
        """<label| rho |label> with |label> truncated to this dimension."""
        amps = coherent_amplitudes(label, self.dim - 1)
        return float((np.conj(amps) @ self.entries @ amps).real)

    def max_offdiagonal(self) -> float:
        off = self.entries - np.diag(np.diag(self.entries))
        return float(np.max(np.abs(off))) if self.dim > 1 else 0.0


# --------------------------------------------------------------------------
# dense Fock-space oracle


def _sector_basis(n_bath: int, k: int) -> list[tuple[int, ...]]:
    """Occupation tuples (system, bath_1..bath_N) with total excitation k.

    The interaction conserves the total excitation number, so each sector
    evolves independently and no truncation error arises inside a sector.
    """
    states = []
    # Distribute k excitations over n_bath + 1 modes.
    for split in combinations_with_replacement(range(n_bath + 1), k):
        occ = [0] * (n_bath + 1)
        for mode in split:
            occ[mode] += 1
        states.append(tuple(occ))
    states.sort()
    return states


class FockSpaceOracle:
    """Dense evolution of the joint state in a truncated product Fock basis.

    Intended for small baths (N <= 4) as a first-principles check of the
    combinatorial decay laws. The basis is organized by total excitation
    number; one Hermitian eigendecomposition per occupied sector is cached and
    reused across all requested times. The partial trace over the bath is
    taken by grouping joint amplitudes by their bath occupation string.
    """

    def __init__(self, system: SystemMode, bath: DiscreteBath, n_max: int):
        if bath.n_modes > _MAX_ORACLE_BATH_MODES:
            raise ResourceLimitError(
                f"dense oracle supports at most {_MAX_ORACLE_BATH_MODES} bath modes "
                f"(got {bath.n_modes})"
            )
        if n_max < 0:
            raise ValueError("n_max must be nonnegative")
        dimension = (n_max + 1) ** (bath.n_modes + 1)
        if dimension > _MAX_ORACLE_DIMENSION:
            raise ResourceLimitError(
                f"truncated product basis of size {dimension} exceeds the "
                f"{_MAX_ORACLE_DIMENSION} limit"
            )
        self.system = system
        self.bath = bath
        self.n_max = n_max

        # Bath occupation strings index the columns of the partial-trace table.
        self._bath_strings: dict[tuple[int, ...], int] = {}
        self._sectors = []
        for k in range(n_max + 1):
            basis = _sector_basis(bath.n_modes, k)
            index = {occ: i for i, occ in enumerate(basis)}
            h = self._sector_hamiltonian(basis, index)
            eigenvalues, eigenvectors = np.linalg.eigh(h)
            system_occ = np.array([occ[0] for occ in basis])
            bath_cols = np.empty(len(basis), dtype=int)
            for i, occ in enumerate(basis):
                bath_cols[i] = self._bath_string_index(occ[1:])
            self._sectors.append(
                {
                    "basis": basis,
                    "index": index,
                    "eigenvalues": eigenvalues,
                    "eigenvectors": eigenvectors,
                    "system_occ": system_occ,
                    "bath_cols": bath_cols,
                }
            )

    def _bath_string_index(self, string: tuple[int, ...]) -> int:
        if string not in self._bath_strings:
            self._bath_strings[string] = len(self._bath_strings)
        return self._bath_strings[string]

    def _sector_hamiltonian(self, basis, index) -> np.ndarray:
        omegas = self.bath.omegas
        xis = self.bath.xis
        omega_b = self.system.omega_b
        dim = len(basis)
        h = np.zeros((dim, dim))
        for i, occ in enumerate(basis):
            m = occ[0]
            h[i, i] = m * omega_b + float(np.dot(occ[1:], omegas))
            if m == 0:
                continue
            # One quantum hops from the system into bath mode j.
            for j in range(self.bath.n_modes):
                target = list(occ)
                target[0] -= 1
                target[j + 1] += 1
                i2 = index[tuple(target)]
                amp = xis[j] * math.sqrt(m) * math.sqrt(occ[j + 1] + 1)
                h[i, i2] = amp
                h[i2, i] = amp
        return h

    def _initial_sector_vectors(self, initial: OpenSystemState) -> dict[int, np.ndarray]:
        """Joint amplitudes of ``initial`` (system) x vacuum (bath), by sector."""
        vacuum = (0,) * self.bath.n_modes
        if isinstance(initial, FockState):
            if initial.n > self.n_max:
                raise ValueError(
                    f"truncation n_max={self.n_max} cannot represent a "
                    f"{initial.n}-excitation state"
                )
            system_amps = {initial.n: 1.0 + 0.0j}
            exact_norm_sq = 1.0
        elif isinstance(initial, CoherentState):
            amps = coherent_amplitudes(initial.alpha, self.n_max)
            system_amps = {m: amps[m] for m in range(self.n_max + 1)}
            exact_norm_sq = 1.0
        elif isinstance(initial, CoherentSuperposition):
            amps = np.zeros(self.n_max + 1, dtype=complex)
            for weight, label in initial.terms:
                amps += weight * coherent_amplitudes(label, self.n_max)
            system_amps = {m: amps[m] for m in range(self.n_max + 1)}
            exact_norm_sq = initial.norm() ** 2
        else:
            raise TypeError(f"unsupported initial state {type(initial).__name__}")

        truncated_norm_sq = sum(abs(a) ** 2 for a in system_amps.values())
        defect = abs(truncated_norm_sq - exact_norm_sq) / exact_norm_sq
        if defect > _TRACE_DEFECT_TOL:
            raise TruncationError(
                f"truncated basis drops {defect:.3e} of the initial norm "
                f"(tolerance {_TRACE_DEFECT_TOL:.0e}); raise n_max"
            )

        vectors: dict[int, np.ndarray] = {}
        norm = math.sqrt(exact_norm_sq)
        for m, amp in system_amps.items():
            if amp == 0:
                continue
            sector = self._sectors[m]
            vec = np.zeros(len(sector["basis"]), dtype=complex)
            vec[sector["index"][(m,) + vacuum]] = amp / norm
            vectors[m] = vec
        return vectors

    def reduced_density(self, initial: OpenSystemState, t: float) -> DensityMatrixFock:
        """Evolve ``initial`` (bath in vacuum) to time ``t`` and trace out the bath."""
        if t < 0:
            raise ValueError("time must be nonnegative")
        vectors = self._initial_sector_vectors(initial)
        table = np.zeros((self.n_max + 1, len(self._bath_strings)), dtype=complex)
        for k, vec in vectors.items():
            sector = self._sectors[k]
            v = sector["eigenvectors"]
            phases = np.exp(-1j * sector["eigenvalues"] * t)
            evolved = v @ (phases * (v.T @ vec))
            np.add.at(table, (sector["system_occ"], sector["bath_cols"]), evolved)
        rho = table @ table.conj().T
        return DensityMatrixFock(entries=rho)


def full_fock_oracle(
    system: SystemMode,
    bath: DiscreteBath,
    initial: OpenSystemState,
    t: float,
    n_max: int | None = None,
) -> DensityMatrixFock:
    """One-shot dense-oracle reduced density matrix.

    ``n_max`` defaults to the exact excitation count for Fock inputs and to a
    Poisson-tail-safe cutoff for coherent inputs.
    """
    if n_max is None:
        if isinstance(initial, FockState):
            n_max = initial.n
        elif isinstance(initial, CoherentState):
            n_max = default_fock_cutoff(abs(initial.alpha))
        elif isinstance(initial, CoherentSuperposition):
            n_max = default_fock_cutoff(max(abs(a) for _, a in initial.terms))
        else:
            raise TypeError(f"unsupported initial state {type(initial).__name__}")
    return FockSpaceOracle(system, bath, n_max).reduced_density(initial, t)


def ground_state_invariance_check(system: SystemMode, bath: DiscreteBath, t: float) -> bool:
    """Verify that the joint vacuum is an exact fixed point of the evolution."""
    rho = FockSpaceOracle(system, bath, n_max=1).reduced_density(FockState(0), t)
    fidelity = rho.populations[0]
    return bool(abs(fidelity - 1.0) <= 1e-10 and rho.max_offdiagonal() <= 1e-10)
