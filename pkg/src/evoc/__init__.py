"""Agent-based simulation of cumulative cultural evolution with action chaining."""
from .actions import (
    BodyPart,
    ChainedAction,
    Direction,
    HiddenActivations,
    InvalidChainError,
    Step,
    enumerate_steps,
    fitness_chain,
    fitness_step,
    hidden_activations,
    is_valid_chain,
    optimal_steps,
)
from .agent import Agent, InventionParams, TrendState, evaluate_and_adopt, imitate, invent, update_trends
from .world import (
    ConfigError,
    MetricsRecord,
    World,
    WorldConfig,
    init_world,
    metrics_snapshot,
    neighbors,
    run,
    step_world,
)

__version__ = "0.1.0"
