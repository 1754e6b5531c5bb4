"""
Tests for the unified configuration (defaults, files, environment) and the
per-invocation scenario configuration.
"""

import math

import pytest

from friendrun.cli.scenario import (
    ScenarioConfig,
    format_angle,
    load_scenario_file,
    parse_angle,
    resolve_scenario,
    scenario_text,
)
from friendrun.config import FriendRunUnifiedConfig, UnifiedConfigManager, get_config_manager
from friendrun.config.loader import ConfigLoader
from friendrun.dynamics import CollapseAt, UnitaryOnly, distinguishing_power, exact_bet_report
from friendrun.errors import NumericalInvariantError, ScenarioConfigError
from friendrun.utils import ExceptionHandler


# ═══════════════════════════════════════════════════════════════
# Unified configuration
# ═══════════════════════════════════════════════════════════════

class TestUnifiedConfig:
    """Defaults, dotted access and validation."""

    def test_defaults_validate(self):
        config = FriendRunUnifiedConfig.create_default()
        assert config.validate()
        assert config.bet.master_seed == 42
        assert config.sweep.steps == 4

    def test_dotted_get_and_set(self):
        config = FriendRunUnifiedConfig.create_default()
        assert config.get("scenario.query") == "definite"
        assert config.get("scenario.nothing", "fallback") == "fallback"
        assert config.set("bet.workers", 4)
        assert config.bet.workers == 4
        assert not config.set("bet.nothing", 1)

    def test_invalid_values_fail_validation(self):
        config = FriendRunUnifiedConfig.create_default()
        config.set("bet.n_trajectories", 0)
        assert not config.validate()

    def test_round_trip_through_dict(self):
        config = FriendRunUnifiedConfig.create_default()
        assert FriendRunUnifiedConfig.from_dict(config.to_dict()).to_dict() == config.to_dict()


class TestConfigSources:
    """Environment variables and config files."""

    def test_singleton(self):
        assert get_config_manager() is get_config_manager()

    def test_environment_values_are_converted(self, monkeypatch):
        monkeypatch.setenv("FRIENDRUN_SEED", "7")
        monkeypatch.setenv("FRIENDRUN_DEBUG", "true")
        monkeypatch.setenv("FRIENDRUN_THETA", "pi/3")
        config = get_config_manager().config
        assert config.bet.master_seed == 7
        assert config.system.debug is True
        assert config.scenario.theta == "pi/3"

    def test_summary_shows_resolved_values(self, monkeypatch):
        monkeypatch.setenv("FRIENDRUN_SEED", "7")
        monkeypatch.setenv("FRIENDRUN_MODEL", "collapse")
        summary = get_config_manager().get_summary()
        assert "Master Seed: 7" in summary
        assert "Model: collapse" in summary
        assert "Range: [pi/6, pi/2] in 4 steps" in summary

    def test_yaml_file(self, tmp_path):
        (tmp_path / "friendrun.yaml").write_text(
            "friendrun:\n  bet:\n    n_trajectories: 500\n  sweep:\n    steps: 6\n", encoding="utf-8"
        )
        manager = get_config_manager()
        assert manager.get_bet_config().n_trajectories == 500
        assert manager.get_sweep_config().steps == 6
        assert manager.get_bet_config().master_seed == 42

    def test_toml_file(self, tmp_path):
        (tmp_path / "friendrun.toml").write_text('[scenario]\nquery = "which"\n', encoding="utf-8")
        assert get_config_manager().get_scenario_defaults().query == "which"

    def test_environment_beats_file(self, tmp_path, monkeypatch):
        (tmp_path / "friendrun.yaml").write_text("bet:\n  master_seed: 5\n", encoding="utf-8")
        monkeypatch.setenv("FRIENDRUN_SEED", "9")
        assert get_config_manager().get_bet_config().master_seed == 9

    def test_invalid_file_falls_back_to_defaults(self, tmp_path):
        (tmp_path / "friendrun.yaml").write_text("bet:\n  workers: 0\n", encoding="utf-8")
        assert get_config_manager().get_bet_config().workers == 1

    def test_unknown_section_key_falls_back_to_defaults(self, tmp_path):
        (tmp_path / "friendrun.yaml").write_text("bet:\n  seeds: 3\n", encoding="utf-8")
        assert get_config_manager().config.to_dict() == FriendRunUnifiedConfig.create_default().to_dict()

    def test_reload_with_other_directory(self, tmp_path):
        other = tmp_path / "other"
        other.mkdir()
        (other / "friendrun.yaml").write_text("report:\n  json_indent: 4\n", encoding="utf-8")
        manager = get_config_manager()
        assert manager.get_report_config().json_indent == 2
        manager.reload(ConfigLoader(search_dir=str(other)))
        assert manager.get_report_config().json_indent == 4

    def test_save_to_file(self, tmp_path):
        manager = get_config_manager()
        manager.set("bet.master_seed", 11)
        path = tmp_path / "saved.yaml"
        assert manager.save_to_file(str(path))
        UnifiedConfigManager._instance = None
        reloaded = UnifiedConfigManager(ConfigLoader(search_dir=str(tmp_path), config_files=("saved.yaml",)))
        assert reloaded.get("bet.master_seed") == 11


# ═══════════════════════════════════════════════════════════════
# Scenario configuration
# ═══════════════════════════════════════════════════════════════

class TestAngles:
    """Angle literals."""

    @pytest.mark.parametrize("text,expected", [
        ("pi/2", math.pi / 2),
        ("pi/3", math.pi / 3),
        ("PI/4", math.pi / 4),
        ("π/6", math.pi / 6),
        ("2*pi/3", 2 * math.pi / 3),
        ("2pi/3", 2 * math.pi / 3),
        ("-pi", -math.pi),
        ("0.25", 0.25),
        (1, 1.0),
    ])
    def test_parse(self, text, expected):
        assert parse_angle(text) == pytest.approx(expected)

    @pytest.mark.parametrize("text", ["pie", "pi/0", "", "half", True])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            parse_angle(text)

    def test_format_uses_named_angles(self):
        assert format_angle(math.pi / 3) == "pi/3"
        assert format_angle(1.25) == "1.25"


class TestScenarioConfig:
    """Validation of one invocation's settings."""

    def test_defaults(self):
        config = ScenarioConfig()
        assert config.theta == pytest.approx(math.pi / 2)
        assert isinstance(config.dynamics_model(config.build_script()), UnitaryOnly)

    def test_collapse_needs_step(self):
        with pytest.raises(ValueError):
            ScenarioConfig(model="collapse")

    def test_step_needs_collapse(self):
        with pytest.raises(ValueError):
            ScenarioConfig(collapse_step="bob_observes")

    def test_unknown_field(self):
        with pytest.raises(ValueError):
            ScenarioConfig(thetta=1.0)

    def test_collapse_model_defaults_to_observation(self):
        config = ScenarioConfig(scenario="necker")
        model = config.collapse_model(config.build_script())
        assert model == CollapseAt(step_label="observe", subsystem="ancilla")

    def test_explicit_collapse_model(self):
        config = ScenarioConfig(model="collapse", collapse_step="cat_poisoned", collapse_subsystem="cat")
        assert config.dynamics_model(config.build_script()).describe() == "collapse(cat@cat_poisoned)"

    @pytest.mark.parametrize("step,subsystem", [
        ("atom_decay", "atom"),
        ("poison_release", "poison"),
        ("cat_poisoned", "cat"),
        ("bob_observes", "bob"),
        ("paper_query", "paper"),
    ])
    def test_collapse_subsystem_follows_step(self, step, subsystem):
        config = ScenarioConfig(model="collapse", collapse_step=step)
        assert config.collapse_model(config.build_script()) == CollapseAt(step_label=step, subsystem=subsystem)

    def test_collapse_at_message_needs_subsystem(self):
        config = ScenarioConfig(model="collapse", collapse_step="alice_message")
        with pytest.raises(ScenarioConfigError) as excinfo:
            config.collapse_model(config.build_script())
        assert excinfo.value.field == "collapse_subsystem"

    def test_collapse_at_unknown_step(self):
        config = ScenarioConfig(model="collapse", collapse_step="nowhere")
        with pytest.raises(ScenarioConfigError) as excinfo:
            config.collapse_model(config.build_script())
        assert excinfo.value.field == "collapse_step"

    def test_collapse_before_observation_is_not_a_no_op(self):
        config = ScenarioConfig(model="collapse", collapse_step="poison_release")
        script = config.build_script()
        unitary = exact_bet_report(script, UnitaryOnly())
        collapse = exact_bet_report(script, config.collapse_model(script))
        assert collapse.mean_return_fidelity == pytest.approx(0.5, abs=1e-12)
        assert distinguishing_power(unitary, collapse).tv_distance == pytest.approx(0.5, abs=1e-12)


class TestScenarioFiles:
    """The flat key = value format."""

    def test_parse_file(self, tmp_path):
        path = tmp_path / "scenario.txt"
        path.write_text("# bet at a third\ntheta = pi/3  # decay\nmodel: collapse\n\ncollapse_step = bob_observes\n")
        assert load_scenario_file(path) == {"theta": "pi/3", "model": "collapse", "collapse_step": "bob_observes"}

    @pytest.mark.parametrize("body,field", [
        ("theta pi/3\n", "line 1"),
        ("colour = red\n", "colour"),
        ("theta = 1\ntheta = 2\n", "theta"),
    ])
    def test_malformed_files(self, tmp_path, body, field):
        path = tmp_path / "scenario.txt"
        path.write_text(body)
        with pytest.raises(ScenarioConfigError) as excinfo:
            load_scenario_file(path)
        assert excinfo.value.field == field

    def test_text_round_trip(self, tmp_path):
        config = ScenarioConfig(theta=math.pi / 3, model="collapse", collapse_step="bob_observes", master_seed=5)
        path = tmp_path / "scenario.txt"
        path.write_text(scenario_text(config))
        resolved = resolve_scenario(FriendRunUnifiedConfig.create_default(), path)
        assert resolved == config

    def test_precedence(self, tmp_path):
        unified = FriendRunUnifiedConfig.create_default()
        unified.set("bet.master_seed", 1)
        path = tmp_path / "scenario.txt"
        path.write_text("master_seed = 2\nquery = which\n")
        resolved = resolve_scenario(unified, path, {"master_seed": 3, "query": None})
        assert resolved.master_seed == 3
        assert resolved.query == "which"

    def test_unitary_flag_drops_inherited_step(self, tmp_path):
        path = tmp_path / "scenario.txt"
        path.write_text("model = collapse\ncollapse_step = bob_observes\n")
        resolved = resolve_scenario(FriendRunUnifiedConfig.create_default(), path, {"model": "unitary"})
        assert resolved.model == "unitary"
        assert resolved.collapse_step is None

    def test_invalid_value_names_field(self):
        with pytest.raises(ScenarioConfigError) as excinfo:
            resolve_scenario(FriendRunUnifiedConfig.create_default(), None, {"workers": 0})
        assert excinfo.value.field == "workers"


class TestExceptionHandler:
    """Exit codes of library errors."""

    def test_exit_codes(self):
        assert ExceptionHandler.exit_code_for(ScenarioConfigError("theta", "bad")) == 2
        assert ExceptionHandler.exit_code_for(NumericalInvariantError("drift", 2.0)) == 3
        assert ExceptionHandler.exit_code_for(RuntimeError("boom")) == 1

    def test_description_names_field(self):
        text = ExceptionHandler.describe(ScenarioConfigError("theta", "angle must lie in (0, pi)"))
        assert text == "invalid configuration field 'theta': angle must lie in (0, pi)"
