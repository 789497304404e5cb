"""Finite-temperature decay: enhancement factor, conditional state, effective
Hamiltonian laws, and a seeded Monte Carlo sampler checked against exact
Gaussian moments.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bath import DiscreteBath, ThermalSpec
from .decay import (
    CoherentSuperposition,
    DensityMatrixFock,
    coherent_amplitudes,
    default_fock_cutoff,
)
from .errors import AsymptoticRegimeError, CrossBlockRequiredError, InfiniteOccupationError
from .propagator import PROVENANCE_ORACLE, PropagatorCoefficients, SystemMode

SHORT_TIME_WINDOW = 0.1
_MC_BLOCK = 512

METHOD_DISCRETE = "discrete_sum"
METHOD_CLOSED = "closed_form"


@dataclass(frozen=True)
class ThermalFactor:
    """Temperature enhancement of the conditional state normalization (>= 1)."""

    value: float
    t: float
    method: str

    def __post_init__(self) -> None:
        if self.method not in (METHOD_DISCRETE, METHOD_CLOSED):
            raise ValueError(f"unknown method {self.method!r}")
        if self.value < 1.0 - 1e-12:
            raise ValueError(f"thermal factor must be at least 1 (got {self.value})")


def thermal_factor_discrete(
    system: SystemMode,
    bath: DiscreteBath,
    thermal: ThermalSpec,
    coeffs: PropagatorCoefficients,
) -> ThermalFactor:
    """Mode-resolved enhancement: 1 + sum_j n_j |emission_j|^2."""
    if coeffs.n_modes != bath.n_modes:
        raise ValueError("coefficients and bath disagree on the mode count")
    occupations = thermal.occupations(bath)
    value = 1.0 + float(np.sum(occupations * np.abs(coeffs.emission) ** 2))
    return ThermalFactor(value=value, t=coeffs.t, method=METHOD_DISCRETE)


def thermal_factor_closed(n_th: float, gamma: float, t: float) -> ThermalFactor:
    """Slow-varying-bath closed form: 1 + n_th (1 - exp(-gamma t))."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    if n_th < 0:
        raise ValueError("n_th must be nonnegative")
    value = 1.0 + n_th * -math.expm1(-gamma * t)
    return ThermalFactor(value=value, t=float(t), method=METHOD_CLOSED)


def conditional_wavefunction(
    alpha: complex, survival_amplitude: complex, phi: ThermalFactor
) -> tuple[float, complex]:
    """Sub-normalized conditional coherent state at finite temperature.

    Returns ``(weight, label)`` with weight = phi^(-1/2) and
    label = alpha ((survival - 1) phi^(-1/2) + 1). At phi = 1 this reduces to
    the zero-temperature contraction alpha * survival.
    """
    inv_sqrt = 1.0 / math.sqrt(phi.value)
    label = complex(alpha) * ((complex(survival_amplitude) - 1.0) * inv_sqrt + 1.0)
    return inv_sqrt, label


def conditional_mean_number(
    alpha: complex, survival_amplitude: complex, phi: ThermalFactor
) -> float:
    """Mean excitation number of the sub-normalized conditional state.

    Equals |alpha|^2 |(survival - 1) phi^(-1) + phi^(-1/2)|^2, i.e. the squared
    label of :func:`conditional_wavefunction` times its squared weight.
    """
    inv = 1.0 / phi.value
    inner = (complex(survival_amplitude) - 1.0) * inv + math.sqrt(inv)
    return float(abs(alpha) ** 2 * abs(inner) ** 2)


def high_temperature_mean_number(
    alpha: complex, beta: float, omega_b: float, gamma: float, t: float
) -> float:
    """High-temperature asymptote |alpha|^2 beta omega_b / (1 - exp(-gamma t)).

    Only meaningful where the enhancement factor is large; evaluation is
    rejected below phi = 10 because the formula diverges as t -> 0.
    """
    if beta <= 0:
        raise InfiniteOccupationError("the high-temperature asymptote needs finite beta > 0")
    n_th = 1.0 / math.expm1(beta * omega_b)
    phi = thermal_factor_closed(n_th, gamma, t)
    if phi.value < 10.0:
        raise AsymptoticRegimeError(
            f"outside asymptotic regime: enhancement factor {phi.value:.3g} < 10"
        )
    return float(abs(alpha) ** 2 * beta * omega_b / -math.expm1(-gamma * t))


class FockEvolution(NamedTuple):
    amplitude: complex
    mean_number: float
    decay_time: float


class CoherentEvolution(NamedTuple):
    weight: float
    label: complex
    mean_number: float
    decay_time: float


@dataclass(frozen=True)
class EffectiveHamiltonian:
    """Non-Hermitian short-time generator of the finite-temperature decay.

    Acts diagonally in the number basis: a state with m excitations picks up
    the phase exp(-i m omega_b t) and the damping exp(-(m + n_th) gamma t / 2).
    """

    omega_b: float
    gamma: float
    n_th: float

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive (got {self.gamma})")
        if self.n_th < 0:
            raise ValueError(f"n_th must be nonnegative (got {self.n_th})")

    def evolve_fock(self, n: int, t: float) -> FockEvolution:
        """Closed-form number-state evolution and its decay time 1/((n_th + n) gamma)."""
        if n < 0:
            raise ValueError("excitation number must be nonnegative")
        if t < 0:
            raise ValueError("time must be nonnegative")
        rate = (self.n_th + n) * self.gamma
        amplitude = np.exp(-1j * n * self.omega_b * t) * math.exp(-0.5 * rate * t)
        mean_number = n * math.exp(-rate * t)
        decay_time = math.inf if rate == 0 else 1.0 / rate
        return FockEvolution(complex(amplitude), float(mean_number), decay_time)

    def evolve_coherent(self, alpha: complex, t: float) -> CoherentEvolution:
        """Closed-form coherent-state evolution and its decay time 1/((n_th + 1) gamma)."""
        if t < 0:
            raise ValueError("time must be nonnegative")
        weight = math.exp(-0.5 * self.n_th * self.gamma * t)
        label = complex(alpha) * np.exp(-1j * (self.omega_b - 0.5j * self.gamma) * t)
        mean_number = abs(alpha) ** 2 * math.exp(-(self.n_th + 1.0) * self.gamma * t)
        decay_time = 1.0 / ((self.n_th + 1.0) * self.gamma)
        return CoherentEvolution(weight, complex(label), float(mean_number), decay_time)

    def evolve_superposition(
        self, state: CoherentSuperposition, t: float, n_max: int | None = None
    ) -> tuple[DensityMatrixFock, float]:
        """Evolve a coherent superposition in a truncated number basis.

        The generator is applied exactly to the number-basis amplitudes of the
        normalized input. Because it is non-Hermitian the norm leaks; the
        returned matrix is renormalized to unit trace and the pre-normalization
        trace (the leaked norm) is returned alongside.
        """
        if t < 0:
            raise ValueError("time must be nonnegative")
        if self.gamma * t > SHORT_TIME_WINDOW:
            warnings.warn(
                "effective-Hamiltonian evolution requested beyond its short-time "
                f"window (gamma*t = {self.gamma * t:.3g} > {SHORT_TIME_WINDOW})",
                stacklevel=2,
            )
        if n_max is None:
            n_max = default_fock_cutoff(max(abs(a) for _, a in state.terms))
        amps = np.zeros(n_max + 1, dtype=complex)
        for weight, label in state.terms:
            amps += weight * coherent_amplitudes(label, n_max)
        amps /= state.norm()
        truncated = float(np.sum(np.abs(amps) ** 2))
        if abs(truncated - 1.0) > 1e-6:
            raise ValueError(
                f"truncated basis keeps only {truncated:.8f} of the initial norm; raise n_max"
            )
        m = np.arange(n_max + 1)
        factors = np.exp(-1j * m * self.omega_b * t) * np.exp(
            -0.5 * (m + self.n_th) * self.gamma * t
        )
        evolved = amps * factors
        pre_trace = float(np.sum(np.abs(evolved) ** 2))
        rho = np.outer(evolved, np.conj(evolved)) / pre_trace
        return DensityMatrixFock(entries=rho), pre_trace


# --------------------------------------------------------------------------
# thermal sampling and moments


@dataclass(frozen=True)
class ThermalSampleSet:
    """I.i.d. coherent-label vectors drawn from the thermal phase-space weight."""

    samples: np.ndarray
    seed: int
    beta: float

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=complex)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 2:
            raise ValueError("samples must be a (count, n_modes) array")

    @property
    def count(self) -> int:
        return int(self.samples.shape[0])


def sample_thermal_bath(
    bath: DiscreteBath, thermal: ThermalSpec, count: int, seed: int
) -> ThermalSampleSet:
    """Draw ``count`` thermal label vectors, one complex Gaussian per mode.

    Mode j has independent real and imaginary parts of variance n_j / 2, so
    E|lambda_j|^2 = n_j. Each sample uses its own spawned substream of the
    seeded generator, which makes the set reproducible regardless of how a
    caller partitions the work.
    """
    if count < 1:
        raise ValueError(f"count must be at least 1 (got {count})")
    if thermal.beta == 0:
        raise InfiniteOccupationError(
            "infinite variance: beta = 0 gives divergent thermal occupations"
        )
    occupations = thermal.occupations(bath)
    scale = np.sqrt(occupations / 2.0)
    children = np.random.SeedSequence(seed).spawn(count)
    samples = np.empty((count, bath.n_modes), dtype=complex)
    for i, child in enumerate(children):
        rng = np.random.Generator(np.random.PCG64(child))
        parts = rng.standard_normal((2, bath.n_modes))
        samples[i] = scale * (parts[0] + 1j * parts[1])
    return ThermalSampleSet(samples=samples, seed=seed, beta=thermal.beta)


@dataclass(frozen=True)
class GaussianMoments:
    """First and second moments of the system mode: <b> and <b^dag b>."""

    mean_amplitude: complex
    occupation: float

    def __post_init__(self) -> None:
        if self.occupation < abs(self.mean_amplitude) ** 2 - 1e-9:
            raise ValueError("occupation cannot fall below the squared mean amplitude")


class MomentErrors(NamedTuple):
    mean_amplitude: float
    occupation: float


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("BOSON_DECAY_THREADS", "0"))
    if threads <= 0:
        threads = min(4, os.cpu_count() or 1)
    return threads


def monte_carlo_moments(
    alpha: complex,
    system: SystemMode,
    bath: DiscreteBath,
    thermal: ThermalSpec,
    coeffs: PropagatorCoefficients,
    samples: ThermalSampleSet,
    threads: int | None = None,
) -> tuple[GaussianMoments, MomentErrors]:
    """Monte Carlo estimate of the system moments over thermal bath samples.

    Each sample is a joint coherent state, so its evolved system branch is the
    coherent label alpha * survival + sum_j lambda_j emission_j and contributes
    |label|^2 to the occupation with no within-branch correction. Work is
    split into fixed-size blocks and reduced in index order, so the result is
    byte-identical for any thread count.
    """
    if coeffs.bath_block is None:
        raise CrossBlockRequiredError(
            "cross-block required: thermal Monte Carlo propagation expects "
            "coefficients computed with the bath-to-bath block"
        )
    if samples.samples.shape[1] != coeffs.n_modes:
        raise ValueError("sample set and coefficients disagree on the mode count")
    if abs(samples.beta - thermal.beta) > 1e-12 * max(1.0, abs(thermal.beta)):
        raise ValueError("sample set was drawn at a different temperature")

    labels = samples.samples
    count = samples.count
    base = complex(alpha) * coeffs.survival
    blocks = [(start, min(start + _MC_BLOCK, count)) for start in range(0, count, _MC_BLOCK)]

    def branch_labels(block: tuple[int, int]) -> np.ndarray:
        start, stop = block
        return base + labels[start:stop] @ coeffs.emission

    n_workers = _resolve_threads(threads)
    if n_workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            pieces = list(pool.map(branch_labels, blocks))
    else:
        pieces = [branch_labels(block) for block in blocks]
    branch = np.concatenate(pieces)

    mean_amplitude = complex(np.mean(branch))
    occ_samples = np.abs(branch) ** 2
    occupation = float(np.mean(occ_samples))

    if count > 1:
        spread_sq = float(np.mean(np.abs(branch - mean_amplitude) ** 2)) * count / (count - 1)
        err_mean = math.sqrt(spread_sq / count)
        err_occ = float(np.std(occ_samples, ddof=1)) / math.sqrt(count)
    else:
        err_mean = math.inf
        err_occ = math.inf
    # mean(|x|^2) >= |mean(x)|^2 holds for any sample, so the moment invariant
    # is automatic here.
    moments = GaussianMoments(mean_amplitude=mean_amplitude, occupation=occupation)
    return moments, MomentErrors(mean_amplitude=err_mean, occupation=err_occ)


def exact_thermal_moments(
    alpha: complex,
    bath: DiscreteBath,
    thermal: ThermalSpec,
    coeffs: PropagatorCoefficients,
) -> GaussianMoments:
    """Exact thermal-average moments from the linear operator evolution.

    <b(t)> = alpha * survival and
    <b^dag b>(t) = |alpha * survival|^2 + sum_j n_j |absorption_j|^2; thermal
    modes contribute only through their mean occupations. Requires oracle
    coefficients so the result is exact at the given finite bath.
    """
    if coeffs.provenance != PROVENANCE_ORACLE:
        raise ValueError("exact thermal moments require oracle coefficients")
    if coeffs.n_modes != bath.n_modes:
        raise ValueError("coefficients and bath disagree on the mode count")
    mean_amplitude = complex(alpha) * coeffs.survival
    occupations = thermal.occupations(bath)
    occupation = abs(mean_amplitude) ** 2 + float(
        np.sum(occupations * np.abs(coeffs.absorption) ** 2)
    )
    return GaussianMoments(mean_amplitude=mean_amplitude, occupation=occupation)
