import pytest

import coexsim


def test_spectrum():
    assert coexsim.wpan_center(10) == 2450
    assert coexsim.wlan_span(1) == (2401, 2423)
    hit = coexsim.overlaps(1, 3)
    assert hit and hit.mhz == pytest.approx(3.0)
    assert not coexsim.overlaps(1, 5)


def test_radio_helpers():
    assert coexsim.path_loss_db(1.0) == pytest.approx(40.2, abs=0.05)
    assert coexsim.airtime_us(105, 0, 250_000) == 3360


def test_isolated_link():
    cfg = coexsim.SimulationConfig()
    cfg.wlan_transmitters = 0
    cfg.wpan_interval_s = 0.5
    result = coexsim.run_simulation(cfg)
    assert result["delivered"] == 200
    assert result["throughput_bps"] == pytest.approx(1680.0)
    assert result["frames_with_errors"] == 0


def test_default_run_sees_interference():
    result = coexsim.run_simulation(coexsim.SimulationConfig())
    assert result["frames_with_errors"] > 0
    assert result["wlan_frames"] == 500


def test_scenario_layout():
    nodes = coexsim.build_scenario("circular")
    assert len(nodes) == 22
    assert sum(n["transmitter"] for n in nodes if n["role"] == "wlan") == 5


def test_sweep_and_outputs(tmp_path):
    cfg = coexsim.parse_config(["--topology", "grid", "--duration", "5", "--mobility", "static"])
    assert cfg.topologies == ["grid"]
    rows = coexsim.run_sweep(cfg)
    assert len(rows) == 10
    csv = coexsim.to_csv(rows)
    assert csv.splitlines()[0] == coexsim.CSV_HEADER
    assert csv == coexsim.to_csv(coexsim.run_sweep(cfg))
    coexsim.write_csv(rows, str(tmp_path / "sweep.csv"))
    files = coexsim.emit_plot_data(rows, str(tmp_path))
    assert len(files) == 4


def test_config_errors():
    with pytest.raises(ValueError):
        coexsim.parse_config(["--interval-step", "0"])
    cfg = coexsim.SimulationConfig()
    with pytest.raises(ValueError):
        cfg.topology = "star"
