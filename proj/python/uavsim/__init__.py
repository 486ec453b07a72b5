"""UAV-relay uplink simulator with a from-scratch PPO trainer."""

from ._core import (
    Action,
    ActionSpec,
    ConfigError,
    CryptoDirection,
    Environment,
    ExperimentConfig,
    PersistenceError,
    PpoAgent,
    StepOutcome,
    Transition,
    bpsk_ber,
    brute_force_gae,
    complexity,
    compute_gae,
    encryption_latency,
    key_lengths,
    run_agent,
    run_heuristic,
    save_checkpoint,
    security_level,
    train,
    uav_slot_energy,
)

__all__ = [
    "Action",
    "ActionSpec",
    "ConfigError",
    "CryptoDirection",
    "Environment",
    "ExperimentConfig",
    "PersistenceError",
    "PpoAgent",
    "StepOutcome",
    "Transition",
    "bpsk_ber",
    "brute_force_gae",
    "complexity",
    "compute_gae",
    "encryption_latency",
    "key_lengths",
    "run_agent",
    "run_heuristic",
    "save_checkpoint",
    "security_level",
    "train",
    "uav_slot_energy",
]
