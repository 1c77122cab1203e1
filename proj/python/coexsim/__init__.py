"""Discrete-event simulation of 802.15.4 / 802.11b coexistence."""

from ._coexsim import (
    CSV_HEADER,
    Overlap,
    SimulationConfig,
    airtime_us,
    build_scenario,
    emit_plot_data,
    overlaps,
    parse_config,
    path_loss_db,
    run_simulation,
    run_sweep,
    to_csv,
    wlan_span,
    wpan_center,
    write_csv,
)

__all__ = [
    "CSV_HEADER",
    "Overlap",
    "SimulationConfig",
    "airtime_us",
    "build_scenario",
    "emit_plot_data",
    "overlaps",
    "parse_config",
    "path_loss_db",
    "run_simulation",
    "run_sweep",
    "to_csv",
    "wlan_span",
    "wpan_center",
    "write_csv",
]
