"""Coverage and area spectral efficiency of D2D-underlaid uplink cellular networks."""

from ._d2dcov import (
    AnalyticModel,
    NetworkConfig,
    __version__,
    cell_radius,
    cu_mean_tx_power,
    experiment_ids,
    load_config,
    mode_probability,
    render_experiment,
    run_acceptance,
    run_campaign,
)


def make_config(**overrides):
    """NetworkConfig with the given keys overridden, e.g. make_config(lambda_u=100)."""
    cfg = NetworkConfig()
    for key, value in overrides.items():
        cfg.set(key, repr(value) if isinstance(value, float) else str(value))
    cfg.validate()
    return cfg


__all__ = [
    "AnalyticModel",
    "NetworkConfig",
    "__version__",
    "cell_radius",
    "cu_mean_tx_power",
    "experiment_ids",
    "load_config",
    "make_config",
    "mode_probability",
    "render_experiment",
    "run_acceptance",
    "run_campaign",
]
