"""Agents and their cognitive operators: invention, imitation and trend learning."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .actions import (
    ARMS,
    PARTNER,
    BodyPart,
    ChainedAction,
    Direction,
    Step,
    fitness_chain,
    hidden_activations,
)

TREND_DELTA = 0.1
INITIAL_TREND = 0.5
# highest tested cap whose chains stay below max_chain_len over 500 iterations; see README
DEFAULT_P_EXT_MAX = 0.85


class ConfigError(ValueError):
    """Raised for configuration values outside their allowed range."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


@dataclass(frozen=True)
class InventionParams:
    rate_of_change: float = 1 / 6
    chaining_enabled: bool = True
    learning_enabled: bool = True
    max_chain_len: int = 100
    p_ext_max: float = DEFAULT_P_EXT_MAX

    def __post_init__(self) -> None:
        if not 0.0 <= self.rate_of_change <= 1.0:
            raise ConfigError("rate_of_change", f"must lie in [0, 1], got {self.rate_of_change}")
        if self.max_chain_len < 1:
            raise ConfigError("max_chain_len", f"must be >= 1, got {self.max_chain_len}")
        if not 0.0 <= self.p_ext_max < 1.0:
            raise ConfigError("p_ext_max", f"must lie in [0, 1), got {self.p_ext_max}")


@dataclass(frozen=True)
class TrendState:
    """Learned biases on invention.

    ``p_im[i]`` is the probability that a mutation of moving part ``i`` keeps
    it moving (increased movement) instead of stopping it; ``p_sym`` is the
    probability that a limb starting to move goes opposite to its moving
    partner; ``p_ext`` is the per-trial probability of adding one more step
    to a chain.
    """

    p_im: tuple[float, ...] = (INITIAL_TREND,) * len(BodyPart)
    p_sym: float = INITIAL_TREND
    p_ext: float = INITIAL_TREND

    @classmethod
    def initial(cls, p_ext_max: float = DEFAULT_P_EXT_MAX) -> "TrendState":
        return cls(p_ext=min(INITIAL_TREND, p_ext_max))


@dataclass
class Agent:
    id: int
    position: tuple[int, int]
    current: ChainedAction = field(default_factory=lambda: ChainedAction.single(Step.stationary()))
    trends: TrendState = field(default_factory=TrendState)

    @property
    def fitness(self) -> float:
        return fitness_chain(self.current)


def _clamp(value: float, lo: float, hi: float) -> float:
    return min(hi, max(lo, value))


def _nudge(p: float, old: int, new: int, hi: float = 1.0) -> float:
    if new > old:
        return _clamp(p + TREND_DELTA, 0.0, hi)
    if new < old:
        return _clamp(p - TREND_DELTA, 0.0, hi)
    return p


def update_trends(
    trends: TrendState, old: ChainedAction, new: ChainedAction, p_ext_max: float = DEFAULT_P_EXT_MAX
) -> TrendState:
    if not fitness_chain(new) > fitness_chain(old):
        raise ValueError("trends are only updated after adopting a strictly fitter action")
    a_old, a_new = hidden_activations(old), hidden_activations(new)
    return TrendState(
        p_im=tuple(_nudge(p, a_old.movement, a_new.movement) for p in trends.p_im),
        p_sym=_nudge(trends.p_sym, a_old.symmetry, a_new.symmetry),
        p_ext=_nudge(trends.p_ext, a_old.opposite, a_new.opposite, hi=p_ext_max),
    )


def mutate_step(step: Step, trends: TrendState, rate_of_change: float, rng: random.Random) -> tuple[Step, int]:
    """Mutate each part independently with probability ``rate_of_change``.

    Returns the new step and the number of parts that changed.
    """
    old = step.positions
    new = list(old)
    changed = []
    for part in BodyPart:
        if rng.random() < rate_of_change:
            changed.append(part)
    for part in changed:
        if old[part].moving:
            if rng.random() < trends.p_im[part]:
                new[part] = old[part].opposite()
            else:
                new[part] = Direction.STATIONARY
        else:
            partner = PARTNER.get(part)
            # partner state is read from the unmutated step
            if partner is not None and old[partner].moving:
                opposed = old[partner].opposite()
                new[part] = opposed if rng.random() < trends.p_sym else opposed.opposite()
            else:
                new[part] = Direction.UP if rng.random() < 0.5 else Direction.DOWN
    return Step(tuple(new)), len(changed)


def invent(agent: Agent, params: InventionParams, rng: random.Random) -> ChainedAction:
    base, _ = mutate_step(agent.current.base, agent.trends, params.rate_of_change, rng)
    if not params.chaining_enabled or params.max_chain_len < 2:
        return ChainedAction.single(base)
    moving_arms = [arm for arm in ARMS if base[arm].moving]
    if not moving_arms:
        return ChainedAction.single(base)
    arm = moving_arms[0] if len(moving_arms) == 1 else rng.choice(moving_arms)
    length = 1
    while length < params.max_chain_len and rng.random() < agent.trends.p_ext:
        length += 1
    return ChainedAction.extend(base, arm, length)


def imitate(
    agent: Agent, neighbor_actions: Sequence[ChainedAction], rng: random.Random
) -> Optional[ChainedAction]:
    """Scan neighbours in random order; return the first strictly fitter action, if any."""
    own = fitness_chain(agent.current)
    order = list(range(len(neighbor_actions)))
    rng.shuffle(order)
    for i in order:
        action = neighbor_actions[i]
        if fitness_chain(action) > own:
            return action
    return None


def evaluate_and_adopt(
    agent: Agent, candidate: ChainedAction, learning_enabled: bool, p_ext_max: float = DEFAULT_P_EXT_MAX
) -> bool:
    if fitness_chain(candidate) <= fitness_chain(agent.current):
        return False
    if learning_enabled:
        agent.trends = update_trends(agent.trends, agent.current, candidate, p_ext_max)
    agent.current = candidate
    return True

