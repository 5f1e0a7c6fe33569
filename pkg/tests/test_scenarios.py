"""Tests for scenarios, presets, configuration files and scenario execution."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from vee_chd import scenarios
from vee_chd.errors import NonPhysicalState, ScenarioError, UnpopulatedTransition
from vee_chd.models import Quadrature, Transition
from vee_chd.scenarios import (
    PRESETS,
    Observable,
    OutputTable,
    Scenario,
    apply_overrides,
    format_curves,
    get_preset,
    load_scenario_file,
    parse_curves,
    parse_phi,
    read_settings,
    resolve_workers,
    run_scenario,
    run_scenario_async,
    scenario_from_settings,
)


def _small(name, **overrides):
    """A preset on a reduced grid or sweep."""
    return apply_overrides(get_preset(name), overrides)


class TestPresets:
    def test_all_figures_present(self):
        assert list(PRESETS) == [
            "fig2a", "fig2b", "fig4", "fig5", "fig6", "fig7", "fig8a", "fig8b", "fig9"
        ]

    @pytest.mark.parametrize(
        "name,omega_s", [("fig2a", 0.5), ("fig2b", 3.5), ("fig4", 0.5), ("fig5", 3.5),
                         ("fig6", 0.5), ("fig7", 3.5)]
    )
    def test_caption_values(self, name, omega_s):
        params = get_preset(name).params
        assert params.gamma_w == 0.1
        assert params.omega_w == 0.1
        assert params.omega_s == omega_s
        assert params.delta_s == params.delta_w == 0.0

    def test_variance_scan_curves(self):
        scenario = get_preset("fig8a")
        assert scenario.transition is Transition.STRONG
        assert [curve.label for curve in scenario.curves] == ["i", "ii", "iii"]
        assert scenario.curves[0].overrides == {"gamma_w": 0.01, "omega_w": 0.05}
        assert scenario.curves[2].overrides == {"gamma_w": 0.1, "omega_w": 0.1}
        assert get_preset("fig9").quadrature.phi == pytest.approx(math.pi / 2)

    def test_unknown_preset(self):
        with pytest.raises(ScenarioError, match="fig3"):
            get_preset("fig3")


class TestConfiguration:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("pi/2", math.pi / 2),
            ("-3*pi/4", -0.75 * math.pi),
            ("pi", math.pi),
            ("2*pi", 2 * math.pi),
            ("0.5", 0.5),
            (1.25, 1.25),
        ],
    )
    def test_parse_phi(self, text, expected):
        assert parse_phi(text) == pytest.approx(expected)

    @pytest.mark.parametrize("text", ["pi/0", "half", "pi*2"])
    def test_parse_phi_rejects(self, text):
        with pytest.raises(ScenarioError):
            parse_phi(text)

    def test_curves_round_trip(self):
        curves = parse_curves("i: omega_s=0.1; gamma_w=0.01 | ii: phi=pi/2")
        assert [curve.label for curve in curves] == ["i", "ii"]
        assert curves[1].overrides["phi"] == pytest.approx(math.pi / 2)
        assert parse_curves(format_curves(curves))[0] == curves[0]

    @pytest.mark.parametrize(
        "text", ["omega_s=0.1", "i: omega_s", "i: omega_s=abc", "i: gamma_s=2", "a-b: omega_s=1"]
    )
    def test_bad_curves(self, text):
        with pytest.raises(ScenarioError):
            parse_curves(text)

    def test_scenario_file(self, tmp_path):
        path = tmp_path / "weak_aic.conf"
        path.write_text(
            "# two-sided AIC of the weak transition\n"
            "observable = aic\n"
            "transition = weak\n"
            "gamma_w = 0.1\n"
            "omega_s = 0.5   # saturating\n"
            "omega_w = 0.1\n"
            "\n"
            "phi = pi/2\n"
            "tau_max = 50\n"
            "n_tau = 101\n"
        )
        scenario = load_scenario_file(path)
        assert scenario.name == "weak_aic"
        assert scenario.observable is Observable.AIC
        assert scenario.quadrature.phi == pytest.approx(math.pi / 2)
        assert scenario.delay_grid().tau_max == 50.0
        assert scenario.params.omega_s == 0.5

    def test_duplicate_key(self, tmp_path):
        path = tmp_path / "dup.conf"
        path.write_text("name = a\nname = b\n")
        with pytest.raises(ScenarioError, match="duplicate"):
            read_settings(path)

    def test_line_without_value(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("observable\n")
        with pytest.raises(ScenarioError, match="key=value"):
            read_settings(path)

    def test_gamma_s_is_fixed(self):
        with pytest.raises(ScenarioError, match="gamma_s"):
            scenario_from_settings({"name": "x", "gamma_s": "2", "observable": "g2"})

    def test_unknown_key(self):
        with pytest.raises(ScenarioError, match="omega_x"):
            scenario_from_settings(
                {"name": "x", "observable": "g2", "gamma_w": 0.1, "omega_s": 1,
                 "omega_w": 1, "omega_x": 3}
            )

    def test_incomplete_sweep(self):
        with pytest.raises(ScenarioError, match="sweep"):
            scenario_from_settings(
                {"name": "x", "observable": "variance_scan", "gamma_w": 0.1, "omega_s": 1,
                 "omega_w": 1, "phi": "pi/2", "sweep_param": "omega_w"}
            )

    def test_empty_sweep_range(self):
        with pytest.raises(ScenarioError, match="positive length"):
            apply_overrides(get_preset("fig9"), {"sweep_min": 0.3, "sweep_max": 0.3})

    def test_scan_needs_sweep(self):
        with pytest.raises(ValidationError):
            Scenario(
                name="x",
                params=get_preset("fig9").params,
                observable=Observable.NOISE_SCAN,
                quadrature=get_preset("fig9").quadrature,
            )

    def test_aic_needs_phase(self):
        with pytest.raises(ScenarioError, match="phi"):
            apply_overrides(get_preset("fig2a"), {"observable": "aic"})

    def test_overrides_are_parsed(self):
        scenario = apply_overrides(get_preset("fig2b"), {"omega_w": "0.2", "n_tau": "50"})
        assert scenario.params.omega_w == 0.2
        assert scenario.n_tau == 50
        assert scenario.description == get_preset("fig2b").description

    def test_workers(self, monkeypatch):
        assert resolve_workers(3) == 3
        monkeypatch.setenv("VEE_CHD_WORKERS", "2")
        assert resolve_workers() == 2
        monkeypatch.setenv("VEE_CHD_WORKERS", "many")
        with pytest.raises(ScenarioError):
            resolve_workers()
        with pytest.raises(ScenarioError):
            resolve_workers(0)


class TestOutputTable:
    def test_render(self):
        table = OutputTable(
            headers=("tau", "g2"),
            rows=[[0.0, 0.0], [0.5, 1.0 / 3.0]],
            provenance=(("scenario", "demo"),),
        )
        lines = table.render().splitlines()
        assert lines == [
            "# scenario: demo",
            "tau,g2",
            "0.00000000000e+00,0.00000000000e+00",
            "5.00000000000e-01,3.33333333333e-01",
        ]

    def test_row_labels(self):
        table = OutputTable(
            headers=("x",), rows=[[1.0], [2.0]], row_labels=("i", "ii"), label_header="check"
        )
        assert table.render().splitlines() == [
            "check,x", "i,1.00000000000e+00", "ii,2.00000000000e+00"
        ]

    @pytest.mark.parametrize(
        "headers,rows",
        [
            (("a", "a"), [[1.0, 2.0]]),
            (("a", "b"), [[1.0]]),
            (("a",), [[math.nan]]),
            (("a",), [1.0]),
        ],
    )
    def test_invalid(self, headers, rows):
        with pytest.raises(ValidationError):
            OutputTable(headers=headers, rows=rows)


class TestRunScenario:
    def test_intensity_correlations(self):
        table = run_scenario(_small("fig2b", n_tau=201), workers=2)
        assert table.headers == ("tau", "g2_ss", "g2_ww")
        assert table.rows.shape == (201, 3)
        assert abs(table.column("g2_ss")[0]) < 1e-12
        assert abs(table.column("g2_ww")[0]) < 1e-12
        assert table.row_labels is None

    def test_noise_scan(self):
        table = run_scenario(_small("fig9", sweep_steps=7), workers=2)
        assert table.headers == ("omega_w", "H2", "H3", "HN", "V")
        assert table.row_labels == ("i",) * 7 + ("ii",) * 7 + ("iii",) * 7
        np.testing.assert_allclose(
            table.column("HN"), table.column("H2") + table.column("H3"), atol=1e-10
        )
        np.testing.assert_allclose(table.column("omega_w")[:7], np.linspace(0.005, 0.3, 7))
        assert table.render().splitlines()[table.render().count("#")] == "curve,omega_w,H2,H3,HN,V"

    def test_variance_scan_finds_squeezing(self):
        table = run_scenario(_small("fig8b", sweep_steps=60), workers=2)
        curve_i = np.array(table.row_labels) == "i"
        assert table.column("V")[curve_i].min() < 0

    def test_two_sided_aic_with_flags(self):
        scenario = _small(
            "fig5", observable="aic", tau_max=50.0, n_tau=101, violation_flags=True
        )
        table = run_scenario(scenario, workers=1)
        assert table.headers == ("tau", "h", "bound1_violated", "bound2_violated")
        tau = table.column("tau")
        assert tau.size == 201
        np.testing.assert_allclose(tau, -tau[::-1])
        assert abs(table.column("h")[100]) < 1e-10
        assert set(np.unique(table.column("bound1_violated"))) <= {0.0, 1.0}
        assert table.column("bound1_violated")[100] == 1.0
        assert table.column("bound2_violated").sum() > 0

    def test_decomposition_columns(self):
        table = run_scenario(_small("fig4", n_tau=101), workers=1)
        assert table.headers == ("tau", "h_pos", "h_neg", "h2", "h3", "one_plus_h2")
        np.testing.assert_allclose(
            table.column("one_plus_h2") + table.column("h3"), table.column("h_pos"), atol=1e-8
        )

    def test_spectrum_columns(self):
        table = run_scenario(_small("fig7", n_omega=101), workers=1)
        assert table.headers == ("omega", "S_pos", "S_neg", "S2", "S3")
        np.testing.assert_allclose(
            table.column("S2") + table.column("S3"), table.column("S_pos"), atol=1e-8
        )

    def test_deterministic_output(self):
        scenario = _small("fig8a", sweep_steps=5)
        first = run_scenario(scenario, workers=1).render()
        second = run_scenario(scenario, workers=4).render()
        assert first == second

    def test_provenance(self):
        table = run_scenario(_small("fig2a", n_tau=11), workers=1, timestamp=True)
        keys = [key for key, _ in table.provenance]
        assert keys[:5] == ["scenario", "version", "observable", "transition", "params"]
        assert "generated" in keys
        assert dict(table.provenance)["scenario"] == "fig2a"
        assert '"omega_s":0.5' in dict(table.provenance)["params"]

    def test_errors_carry_scenario_name(self):
        scenario = scenario_from_settings(
            {"name": "dark", "observable": "g2", "transition": "weak",
             "gamma_w": 0.1, "omega_s": 1.0, "omega_w": 0.0}
        )
        with pytest.raises(UnpopulatedTransition) as excinfo:
            run_scenario(scenario, workers=1)
        assert excinfo.value.scenario == "dark"

    def test_rejected_result_record_is_a_computation_error(self, monkeypatch):
        def rejected_variance(params, transition, quadrature):
            return Quadrature(phi=math.nan).phi

        monkeypatch.setattr(scenarios, "variance", rejected_variance)
        with pytest.raises(NonPhysicalState) as excinfo:
            run_scenario(_small("fig8b", sweep_steps=2), workers=1)
        assert excinfo.value.scenario == "fig8b"
        assert isinstance(excinfo.value.__cause__, ValidationError)

    @pytest.mark.asyncio
    async def test_async_execution(self):
        table = await run_scenario_async(_small("fig6", n_omega=21), workers=2)
        assert table.rows.shape == (21, 5)
        assert np.all(np.isfinite(table.rows))
