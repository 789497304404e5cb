"""Configuration parsing, defaults, overrides, and the hard-error contract."""

import pytest

from boson_decay import ConfigError, parse_config

MINIMAL_FOCK = """
scenario = fock-decay
gamma = 1.0
omega_b = 100
fock_n = 2
t_max = 5
n_steps = 100
"""

THERMAL_BASE = """
scenario = thermal
gamma = 1.0
omega_b = 800
n_modes = 100
half_bandwidth = 80
t_max = 5
n_steps = 10
samples = 50
seed = 7
"""


class TestParsing:
    def test_minimal_fock_decay_config(self):
        config = parse_config(MINIMAL_FOCK)
        assert config.scenario == "fock-decay"
        assert config.gamma == 1.0
        assert config.fock_n == 2
        assert config.n_steps == 100

    def test_defaults_are_recorded(self):
        config = parse_config(MINIMAL_FOCK)
        assert "alpha_re" in config.defaults_applied
        assert "output" in config.defaults_applied
        assert config.output == "-"
        assert config.format == "csv"

    def test_comments_and_blank_lines_ignored(self):
        config = parse_config(MINIMAL_FOCK + "\n# a comment\n\nalpha_re = 2.0 # inline\n")
        assert config.alpha_re == 2.0

    def test_unknown_key_is_named(self):
        with pytest.raises(ConfigError, match="unknown key 'gama'"):
            parse_config(MINIMAL_FOCK + "gama = 2\n")

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config(MINIMAL_FOCK + "gamma = 2\n")

    def test_missing_equals_rejected(self):
        with pytest.raises(ConfigError, match="key = value"):
            parse_config("scenario fock-decay\n")

    def test_empty_value_rejected(self):
        with pytest.raises(ConfigError, match="no value"):
            parse_config("scenario =\n")

    def test_type_errors_are_reported(self):
        with pytest.raises(ConfigError, match="expects int"):
            parse_config(MINIMAL_FOCK.replace("n_steps = 100", "n_steps = 2.5"))
        with pytest.raises(ConfigError, match="expects float"):
            parse_config(MINIMAL_FOCK.replace("gamma = 1.0", "gamma = fast"))

    def test_integer_like_floats_accepted_for_int_keys(self):
        config = parse_config(MINIMAL_FOCK.replace("n_steps = 100", "n_steps = 100.0"))
        assert config.n_steps == 100


class TestValidation:
    def test_missing_required_key(self):
        with pytest.raises(ConfigError, match="missing required key 't_max'"):
            parse_config(MINIMAL_FOCK.replace("t_max = 5\n", ""))

    def test_thermal_requires_beta(self):
        with pytest.raises(ConfigError, match="thermal requires beta"):
            parse_config(THERMAL_BASE)

    def test_thermal_requires_samples(self):
        text = THERMAL_BASE.replace("samples = 50\n", "") + "beta = 0.001\n"
        with pytest.raises(ConfigError, match="thermal requires samples"):
            parse_config(text)

    def test_sampling_requires_seed(self):
        text = THERMAL_BASE.replace("seed = 7\n", "") + "beta = 0.001\n"
        with pytest.raises(ConfigError, match="requires seed"):
            parse_config(text)

    def test_n_steps_range_error_names_bound(self):
        with pytest.raises(ConfigError, match="at least 2"):
            parse_config(MINIMAL_FOCK.replace("n_steps = 100", "n_steps = 1"))

    def test_unknown_scenario(self):
        with pytest.raises(ConfigError, match="unknown scenario"):
            parse_config(MINIMAL_FOCK.replace("fock-decay", "quench"))

    def test_nonpositive_gamma(self):
        with pytest.raises(ConfigError, match="gamma must be positive"):
            parse_config(MINIMAL_FOCK.replace("gamma = 1.0", "gamma = 0"))

    def test_bath_scenarios_require_bath_keys(self):
        text = "scenario = wwa-validate\ngamma = 1\nomega_b = 100\nt_max = 5\nn_steps = 10\n"
        with pytest.raises(ConfigError, match="wwa-validate requires n_modes"):
            parse_config(text)

    def test_band_center_defaults_to_system_frequency(self):
        config = parse_config(THERMAL_BASE + "beta = 0.001\n")
        assert config.band_center == config.omega_b
        assert "band_center" in config.defaults_applied

    def test_oracle_compare_mode_limit(self):
        text = (
            "scenario = oracle-compare\ngamma = 1\nomega_b = 10\nfock_n = 2\n"
            "t_max = 2\nn_steps = 5\nn_modes = 6\nhalf_bandwidth = 2\n"
        )
        with pytest.raises(ConfigError, match="at most 4"):
            parse_config(text)

    def test_excited_mode_bounds(self):
        text = (
            "scenario = excited-bath\ngamma = 1\nomega_b = 10\nt_max = 2\nn_steps = 5\n"
            "n_modes = 4\nhalf_bandwidth = 2\nexcited_mode = 4\n"
        )
        with pytest.raises(ConfigError, match="excited_mode"):
            parse_config(text)

    def test_format_validation(self):
        with pytest.raises(ConfigError, match="format"):
            parse_config(MINIMAL_FOCK + "format = yaml\n")


class TestOverrides:
    def test_flags_override_document(self):
        config = parse_config(MINIMAL_FOCK, overrides={"gamma": 2.5, "fock_n": 3})
        assert config.gamma == 2.5
        assert config.fock_n == 3

    def test_none_overrides_ignored(self):
        config = parse_config(MINIMAL_FOCK, overrides={"gamma": None})
        assert config.gamma == 1.0

    def test_overrides_validated_like_document_values(self):
        with pytest.raises(ConfigError, match="gamma must be positive"):
            parse_config(MINIMAL_FOCK, overrides={"gamma": -1.0})

    def test_alpha_property(self):
        config = parse_config(MINIMAL_FOCK, overrides={"alpha_re": 0.5, "alpha_im": -0.25})
        assert config.alpha == 0.5 - 0.25j

    def test_effective_dict_round_trips_all_keys(self):
        config = parse_config(MINIMAL_FOCK)
        effective = config.as_dict()
        assert effective["scenario"] == "fock-decay"
        assert set(effective) >= {"gamma", "omega_b", "t_max", "n_steps", "output", "format"}
