"""Single-excitation propagator coefficients, analytically and from an exact oracle.

The annihilation operator of the system mode evolves into a linear combination
of the initial system and bath operators. The closed forms below hold in the
broadband (flat, wide-bath) regime; the oracle realizes the same coefficients
exactly at finite mode count via one Hermitian eigendecomposition, reused for
every requested time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bath import BathMode, DiscreteBath

PROVENANCE_ANALYTIC = "analytic"
PROVENANCE_ORACLE = "oracle"


@dataclass(frozen=True)
class SystemMode:
    """The damped oscillator: a single bosonic mode at frequency ``omega_b``."""

    omega_b: float

    def __post_init__(self) -> None:
        if not self.omega_b > 0:
            raise ValueError(f"omega_b must be positive (got {self.omega_b})")


@dataclass(frozen=True)
class PropagatorCoefficients:
    """Linear input-output amplitudes of the coupled mode network at one time.

    ``survival`` multiplies the initial system operator in the evolved system
    operator; ``absorption[j]`` multiplies the initial bath operator j there.
    ``emission[j]`` is the reverse amplitude (initial system operator appearing
    in evolved bath operator j), and ``bath_block[j, s]``, kept only on
    request, is the full bath-to-bath map including its free-phase diagonal.
    """

    t: float
    survival: complex
    absorption: np.ndarray
    emission: np.ndarray
    bath_omegas: np.ndarray
    provenance: str
    bath_block: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.provenance not in (PROVENANCE_ANALYTIC, PROVENANCE_ORACLE):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        n = self.bath_omegas.size
        if self.absorption.shape != (n,) or self.emission.shape != (n,):
            raise ValueError("coefficient arrays must have one entry per bath mode")
        if self.bath_block is not None and self.bath_block.shape != (n, n):
            raise ValueError("bath block must be square with one row per bath mode")
        if abs(self.survival) > 1.0 + 1e-9:
            raise ValueError("survival amplitude cannot exceed unit magnitude")

    @property
    def n_modes(self) -> int:
        return int(self.bath_omegas.size)


def analytic_survival(system: SystemMode, gamma: float, t: float) -> complex:
    """Broadband closed form for the system self-amplitude: damped free rotation."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    return complex(np.exp(-0.5 * gamma * t) * np.exp(-1j * system.omega_b * t))


def _transfer_kernel(system: SystemMode, gamma: float, omegas: np.ndarray, t: float) -> np.ndarray:
    """Common factor of the system-bath transfer amplitudes (coupling stripped)."""
    detuning = system.omega_b - omegas
    numerator = np.exp(-0.5 * gamma * t) * np.exp(-1j * detuning * t) - 1.0
    return np.exp(-1j * omegas * t) * numerator / (detuning - 0.5j * gamma)


def analytic_absorption(system: SystemMode, gamma: float, mode: BathMode, t: float) -> complex:
    """Closed-form amplitude for one bath excitation to appear in the system."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    kernel = _transfer_kernel(system, gamma, np.asarray([mode.omega], dtype=float), t)
    return complex(mode.xi * kernel[0])


def analytic_emission(system: SystemMode, gamma: float, mode: BathMode, t: float) -> complex:
    """Closed-form amplitude for the system excitation to appear in one bath mode.

    Identical to :func:`analytic_absorption` up to conjugation of the coupling;
    couplings are real here, so the two coincide exactly.
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    kernel = _transfer_kernel(system, gamma, np.asarray([mode.omega], dtype=float), t)
    return complex(np.conj(mode.xi) * kernel[0])


def analytic_propagator(
    system: SystemMode, gamma: float, bath: DiscreteBath, t: float
) -> PropagatorCoefficients:
    """Assemble broadband closed-form coefficients for every mode of ``bath``."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    kernel = _transfer_kernel(system, gamma, bath.omegas, t)
    absorption = bath.xis * kernel
    emission = np.conj(bath.xis) * kernel
    return PropagatorCoefficients(
        t=float(t),
        survival=analytic_survival(system, gamma, t),
        absorption=absorption,
        emission=emission,
        bath_omegas=bath.omegas,
        provenance=PROVENANCE_ANALYTIC,
    )


def single_particle_hamiltonian(system: SystemMode, bath: DiscreteBath) -> np.ndarray:
    """Arrowhead matrix of mode frequencies and couplings.

    Row/column 0 is the system mode; rows 1..N are the bath modes. The
    excitation-conserving interaction leaves all bath-bath couplings zero.
    """
    n = bath.n_modes
    h = np.zeros((n + 1, n + 1))
    h[0, 0] = system.omega_b
    idx = np.arange(1, n + 1)
    h[idx, idx] = bath.omegas
    h[0, 1:] = bath.xis
    h[1:, 0] = bath.xis
    return h


class ExactPropagator:
    """Exact finite-bath propagator from one symmetric eigendecomposition.

    The decomposition is computed once per (system, bath) pair; evaluating the
    coefficients at a time point then costs one matrix-vector contraction, and
    the optional bath-to-bath block one matrix product.
    """

    def __init__(self, system: SystemMode, bath: DiscreteBath):
        self.system = system
        self.bath = bath
        h = single_particle_hamiltonian(system, bath)
        self._eigenvalues, self._eigenvectors = np.linalg.eigh(h)

    def unitary(self, t: float) -> np.ndarray:
        """Full (N+1) x (N+1) single-excitation evolution matrix."""
        if t < 0:
            raise ValueError("time must be nonnegative")
        phases = np.exp(-1j * self._eigenvalues * t)
        v = self._eigenvectors
        return (v * phases) @ v.T

    def coefficients(self, t: float, include_bath_block: bool = False) -> PropagatorCoefficients:
        if t < 0:
            raise ValueError("time must be nonnegative")
        phases = np.exp(-1j * self._eigenvalues * t)
        v = self._eigenvectors
        row0 = (v[0] * phases) @ v.T
        bath_block = None
        if include_bath_block:
            bath_block = (v[1:] * phases) @ v[1:].T
        # The arrowhead matrix is real symmetric, so the evolution matrix is
        # complex symmetric and row 0 equals column 0: absorption == emission.
        return PropagatorCoefficients(
            t=float(t),
            survival=complex(row0[0]),
            absorption=row0[1:].copy(),
            emission=row0[1:].copy(),
            bath_omegas=self.bath.omegas,
            provenance=PROVENANCE_ORACLE,
            bath_block=bath_block,
        )


def exact_propagator(
    system: SystemMode, bath: DiscreteBath, t: float, include_bath_block: bool = False
) -> PropagatorCoefficients:
    """One-shot oracle evaluation; build :class:`ExactPropagator` for many times."""
    return ExactPropagator(system, bath).coefficients(t, include_bath_block=include_bath_block)


def dissipation_sum(coeffs: PropagatorCoefficients) -> float:
    """Total probability transferred into the bath, summed over modes."""
    return float(np.sum(np.abs(coeffs.absorption) ** 2))


def unitarity_defect(coeffs: PropagatorCoefficients) -> float:
    """Deviation of ``|survival|^2 + dissipation_sum`` from one.

    Vanishes to roundoff for oracle coefficients; for analytic coefficients
    summed over a discrete bath it measures the broadband-approximation error.
    """
    return float(abs(abs(coeffs.survival) ** 2 + dissipation_sum(coeffs) - 1.0))
