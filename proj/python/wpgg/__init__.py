"""Public-goods games on wireless neighbor graphs."""

from ._wpgg import (
    ConfigError,
    cooperator_cost,
    fermi_probability,
    lemma1_q,
    meeting_monte_carlo,
    meeting_probabilities,
    neighbor_fractions,
    normalized_synergy,
    payoffs,
    run_config,
    sweep,
)

__all__ = [
    "ConfigError",
    "cooperator_cost",
    "fermi_probability",
    "lemma1_q",
    "meeting_monte_carlo",
    "meeting_probabilities",
    "neighbor_fractions",
    "normalized_synergy",
    "payoffs",
    "run_config",
    "sweep",
]
