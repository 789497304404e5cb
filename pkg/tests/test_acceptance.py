"""Acceptance suite: every exit criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run pytest with -s to see them all).
Time grids follow the 20-point convention used throughout the checks; the
broadband regimes were chosen once and are pinned here, not tuned per run.
"""

import math

import numpy as np
import pytest

from boson_decay import (
    EffectiveHamiltonian,
    ExactPropagator,
    FockSpaceOracle,
    FockState,
    CoherentState,
    SpectralDensitySpec,
    SystemMode,
    ThermalSpec,
    analytic_survival,
    coherent_decay,
    conditional_wavefunction,
    discretize_bath,
    dissipation_sum,
    exact_thermal_moments,
    fock_decay_time,
    fock_populations,
    fock_survival,
    monte_carlo_moments,
    parse_config,
    run_scenario,
    sample_thermal_bath,
    thermal_factor_closed,
    thermal_factor_discrete,
)
from boson_decay.runner import report_to_csv

GAMMA = 1.0
MC_SEED = 20240811


def _report(criterion: str, passed: bool, detail: str) -> None:
    print(f"{'PASS' if passed else 'FAIL'} {criterion}: {detail}")
    assert passed, f"{criterion}: {detail}"


class TestAcceptance:
    def test_01_oracle_unitarity(self, wwa_propagator):
        """Coefficient matrices are unitary to 1e-10 for N in {1, 10, 100, 2000}."""
        worst = 0.0
        times = np.linspace(0.0, 5.0, 20)
        for n_modes in (1, 10, 100):
            spec = SpectralDensitySpec(gamma=GAMMA, band_center=100.0, half_bandwidth=20.0)
            propagator = ExactPropagator(SystemMode(100.0), discretize_bath(spec, n_modes))
            for t in times:
                m = propagator.unitary(t)
                worst = max(worst, float(np.max(np.abs(m.conj().T @ m - np.eye(len(m))))))
        for t in times:
            m = wwa_propagator.unitary(t)
            worst = max(worst, float(np.max(np.abs(m.conj().T @ m - np.eye(len(m))))))
        _report(
            "criterion 1 (unitarity)",
            worst <= 1e-10,
            f"max defect {worst:.3e} over N in {{1,10,100,2000}}, 20 times each (tol 1e-10)",
        )

    def test_02_dissipation_relation(self, wwa_coefficients, wwa_grid):
        """Broadband regime: |u|^2 and the transfer sum track the exponential law."""
        dev_survival = max(
            abs(abs(c.survival) ** 2 - math.exp(-GAMMA * t))
            for c, t in zip(wwa_coefficients, wwa_grid)
        )
        dev_transfer = max(
            abs(dissipation_sum(c) - -math.expm1(-GAMMA * t))
            for c, t in zip(wwa_coefficients, wwa_grid)
        )
        _report(
            "criterion 2 (dissipation relation)",
            dev_survival <= 2e-2 and dev_transfer <= 2e-2,
            f"max |u|^2 deviation {dev_survival:.3e}, max transfer deviation "
            f"{dev_transfer:.3e} (tol 2e-2; omega_b=100, half-band=20, N=2000)",
        )

    def test_03_binomial_population_law(self, small_system):
        """Dense-oracle populations equal the binomial law with oracle survival."""
        spec = SpectralDensitySpec(gamma=GAMMA, band_center=10.0, half_bandwidth=2.0)
        bath = discretize_bath(spec, 3)
        propagator = ExactPropagator(small_system, bath)
        worst = 0.0
        for n in (1, 2, 3):
            oracle = FockSpaceOracle(small_system, bath, n_max=n)
            for t in np.linspace(0.0, 4.0, 20):
                p = min(abs(propagator.coefficients(t).survival) ** 2, 1.0)
                law = fock_populations(n, p)
                rho = oracle.reduced_density(FockState(n), t)
                worst = max(worst, float(np.max(np.abs(rho.populations - law.probs))))
        _report(
            "criterion 3 (binomial law)",
            worst <= 1e-8,
            f"max elementwise deviation {worst:.3e} over n in {{1,2,3}}, 20 times (tol 1e-8)",
        )

    def test_04_survival_rate_fit(self, wwa_propagator):
        """Fitted decay rate of the retention probability is n*gamma within 3%."""
        times = np.linspace(0.0, 2.0, 21)
        log_p = np.array(
            [math.log(abs(wwa_propagator.coefficients(t).survival) ** 2) for t in times]
        )
        worst_rel = 0.0
        for n in (1, 2, 3):
            rate = -np.polyfit(times, n * log_p, 1)[0]
            worst_rel = max(worst_rel, abs(rate - n * GAMMA) / (n * GAMMA))
        _report(
            "criterion 4 (retention rate)",
            worst_rel <= 3e-2,
            f"worst fitted-rate relative error {worst_rel:.3e} for n in {{1,2,3}} (tol 3e-2)",
        )

    def test_05_coherent_decay(self, small_system, small_bath, wwa_propagator):
        """Coherent states stay coherent; mean number decays at gamma."""
        propagator = ExactPropagator(small_system, small_bath)
        oracle = FockSpaceOracle(small_system, small_bath, n_max=17)
        worst_mean = 0.0
        worst_purity = 1.0
        for t in np.linspace(0.0, 3.0, 10):
            survived = abs(propagator.coefficients(t).survival) ** 2
            rho = oracle.reduced_density(CoherentState(1.0), t)
            worst_mean = max(worst_mean, abs(rho.mean_number - survived))
            worst_purity = min(worst_purity, rho.purity)
        times = np.linspace(0.0, 2.0, 21)
        log_mean = [
            math.log(abs(wwa_propagator.coefficients(t).survival) ** 2) for t in times
        ]
        rate = -np.polyfit(times, log_mean, 1)[0]
        rate_ok = abs(rate - GAMMA) / GAMMA <= 3e-2
        _report(
            "criterion 5 (coherent decay)",
            worst_mean <= 1e-6 and worst_purity >= 1.0 - 1e-6 and rate_ok,
            f"max mean-number deviation {worst_mean:.3e} (tol 1e-6), min purity "
            f"{worst_purity:.8f} (tol 1-1e-6), fitted rate error {abs(rate - GAMMA):.3e}",
        )

    def test_06_thermal_factor_consistency(self):
        """Discrete and closed-form enhancement factors agree to 2% in regime."""
        omega_b = 800.0
        spec = SpectralDensitySpec(gamma=GAMMA, band_center=omega_b, half_bandwidth=80.0)
        bath = discretize_bath(spec, 4000)
        system = SystemMode(omega_b)
        propagator = ExactPropagator(system, bath)
        worst = 0.0
        for beta_omega in (0.1, 1.0, 10.0):
            thermal = ThermalSpec.for_system(beta_omega / omega_b, omega_b)
            for t in np.linspace(0.0, 5.0, 21):
                coeffs = propagator.coefficients(t)
                phi_d = thermal_factor_discrete(system, bath, thermal, coeffs)
                phi_c = thermal_factor_closed(thermal.n_th, GAMMA, t)
                worst = max(worst, abs(phi_d.value - phi_c.value) / phi_c.value)
        _report(
            "criterion 6 (thermal factor)",
            worst <= 2e-2,
            f"max relative deviation {worst:.3e} over beta*omega_b in {{0.1,1,10}} (tol 2e-2)",
        )

    def test_07_thermal_monte_carlo(self, thermal_system, thermal_bath, thermal_propagator):
        """MC moments match the exact moments and the equilibration law to 3 sigma."""
        times = np.linspace(0.5, 5.0, 10)
        worst_z_oracle = 0.0
        worst_z_equilibration = 0.0
        for n_th in (0.1, 1.0):
            beta = math.log1p(1.0 / n_th) / thermal_system.omega_b
            thermal = ThermalSpec.for_system(beta, thermal_system.omega_b)
            samples = sample_thermal_bath(thermal_bath, thermal, 10_000, seed=MC_SEED)
            for t in times:
                coeffs = thermal_propagator.coefficients(t, include_bath_block=True)
                mc, errors = monte_carlo_moments(
                    1.0, thermal_system, thermal_bath, thermal, coeffs, samples
                )
                exact = exact_thermal_moments(1.0, thermal_bath, thermal, coeffs)
                worst_z_oracle = max(
                    worst_z_oracle, abs(mc.occupation - exact.occupation) / errors.occupation
                )
                mc0, errors0 = monte_carlo_moments(
                    0.0, thermal_system, thermal_bath, thermal, coeffs, samples
                )
                target = thermal.n_th * -math.expm1(-GAMMA * t)
                worst_z_equilibration = max(
                    worst_z_equilibration, abs(mc0.occupation - target) / errors0.occupation
                )
        _report(
            "criterion 7 (thermal Monte Carlo)",
            worst_z_oracle <= 3.0 and worst_z_equilibration <= 3.0,
            f"worst |mc-exact| = {worst_z_oracle:.2f} sigma, worst equilibration "
            f"deviation = {worst_z_equilibration:.2f} sigma (tol 3, M=1e4)",
        )

    def test_08_zero_temperature_reductions(self):
        """All finite-T laws collapse onto the vacuum laws at n_th = 0, to 1e-12."""
        h = EffectiveHamiltonian(omega_b=7.0, gamma=GAMMA, n_th=0.0)
        system = SystemMode(7.0)
        worst = 0.0
        for n in (1, 2, 5):
            worst = max(worst, abs(h.evolve_fock(n, 0.0).decay_time - fock_decay_time(n, GAMMA)))
            for t in (0.3, 1.7):
                worst = max(
                    worst,
                    abs(h.evolve_fock(n, t).mean_number - n * fock_survival(n, GAMMA, t)),
                )
        for t in (0.3, 1.7):
            evo = h.evolve_coherent(1.2, t)
            label, mean = coherent_decay(1.2, analytic_survival(system, GAMMA, t))
            worst = max(worst, abs(evo.mean_number - mean), abs(evo.label - label))
            worst = max(worst, abs(evo.decay_time - 1.0 / GAMMA))
            phi = thermal_factor_closed(0.0, GAMMA, t)
            weight, cond_label = conditional_wavefunction(1.2, analytic_survival(system, GAMMA, t), phi)
            worst = max(worst, abs(weight - 1.0), abs(cond_label - label))
        _report(
            "criterion 8 (zero-temperature reductions)",
            worst <= 1e-12,
            f"max reduction mismatch {worst:.3e} (tol 1e-12)",
        )

    def test_09_effective_hamiltonian_values(self):
        """Pinned closed-form evaluations of the finite-T decay laws."""
        h1 = EffectiveHamiltonian(omega_b=5.0, gamma=GAMMA, n_th=1.0)
        fock = h1.evolve_fock(1, 0.1)
        coherent = h1.evolve_coherent(2.0, 0.5)
        checks = [
            abs(fock.mean_number - math.exp(-0.2)),
            abs(coherent.mean_number - 4.0 * math.exp(-1.0)),
            abs(h1.evolve_fock(1, 0.0).decay_time - 0.5),
            abs(EffectiveHamiltonian(5.0, 1.0, 3.0).evolve_fock(2, 0.0).decay_time - 0.2),
            abs(coherent.decay_time - 0.5),
        ]
        worst = max(checks)
        _report(
            "criterion 9 (effective-Hamiltonian values)",
            worst <= 1e-12,
            f"max deviation from pinned evaluations {worst:.3e} (tol 1e-12)",
        )

    def test_10_divergence_report(self):
        """The report records the first-order gap between the two finite-T laws.

        Golden expectations generated by this package's oracle path (frozen
        slope formula check plus linear growth), not asserted from any
        external value.
        """
        config = parse_config(
            """
            scenario = oracle-compare
            gamma = 1.0
            omega_b = 10
            fock_n = 2
            n_modes = 3
            half_bandwidth = 2
            beta = 0.069314718055994531
            t_max = 0.1
            n_steps = 11
            """
        )
        report = run_scenario(config)
        cols = report.columns
        i_t = cols.index("t")
        i_div = cols.index("divergence")
        n_th = 1.0 / math.expm1(config.beta * config.omega_b)
        n = config.fock_n
        slope_formula = GAMMA * (n - n_th - n * n_th - n**2)
        ts = np.array([row[i_t] for row in report.rows])
        divergence = np.array([row[i_div] for row in report.rows])
        start_ok = abs(divergence[0]) <= 1e-12
        early_slope = np.polyfit(ts[:3], divergence[:3], 1)[0]
        linear_ok = abs(early_slope - slope_formula) / abs(slope_formula) <= 0.05
        growing = bool(np.all(np.diff(np.abs(divergence)) > 0))
        # Golden fixture: the recorded gap at gamma*t = 0.1, as this package
        # computes it (n = 2, n_th = 1).
        golden_ok = divergence[-1] == pytest.approx(-0.42320097667252377, abs=1e-12)
        _report(
            "criterion 10 (divergence report)",
            bool(start_ok and linear_ok and growing and golden_ok),
            f"gap grows monotonically, small-time slope {early_slope:.4f} vs first-order "
            f"{slope_formula:.4f} (rel tol 0.05), end value {divergence[-1]:.6f} matches fixture",
        )

    def test_11_determinism_across_thread_caps(self, monkeypatch):
        """Same seed, different thread caps: byte-identical CSV."""
        text = """
            scenario = thermal
            gamma = 1.0
            omega_b = 200
            n_modes = 60
            half_bandwidth = 20
            beta = 0.003
            t_max = 2
            n_steps = 5
            samples = 500
            seed = 3
        """
        outputs = []
        for cap in ("1", "4"):
            monkeypatch.setenv("BOSON_DECAY_THREADS", cap)
            outputs.append(report_to_csv(run_scenario(parse_config(text))))
        _report(
            "criterion 11 (determinism)",
            outputs[0] == outputs[1],
            f"thermal CSV identical across thread caps 1 and 4 "
            f"({len(outputs[0])} bytes)",
        )
