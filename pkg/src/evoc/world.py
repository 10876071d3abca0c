"""The artificial world: a rectangular lattice of stationary agents.

Each iteration is synchronous with respect to observation: every agent that
imitates looks at the actions its neighbours implemented at the end of the
previous iteration. Each agent owns a random stream derived from the run seed
and its id, so adding or reordering other draws never perturbs a trajectory.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence

from .actions import ChainedAction, fitness_chain, is_optimal_step
from .agent import Agent, ConfigError, InventionParams, TrendState, evaluate_and_adopt, imitate, invent


@dataclass(frozen=True)
class WorldConfig:
    width: int = 10
    height: int = 10
    toroidal: bool = True
    invention_probability: float = 0.5
    invention_params: InventionParams = field(default_factory=InventionParams)
    iterations: int = 100
    seed: int = 1

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ConfigError("width", f"must be >= 1, got {self.width}")
        if self.height < 1:
            raise ConfigError("height", f"must be >= 1, got {self.height}")
        if not 0.0 <= self.invention_probability <= 1.0:
            raise ConfigError(
                "invention_probability", f"must lie in [0, 1], got {self.invention_probability}"
            )
        if self.iterations < 0:
            raise ConfigError("iterations", f"must be >= 0, got {self.iterations}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed", f"must be an unsigned 64-bit integer, got {self.seed}")

    @property
    def n_agents(self) -> int:
        return self.width * self.height


def agent_seed(run_seed: int, agent_id: int) -> int:
    """Seed of one agent's private stream: first 8 bytes of sha256("<seed>:agent:<id>")."""
    digest = hashlib.sha256(f"{run_seed}:agent:{agent_id}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class MetricsRecord:
    iteration: int
    mean_fitness: float
    diversity: float
    mean_chain_length: float
    fraction_optimal_base: float


@dataclass
class World:
    config: WorldConfig
    agents: List[Agent]
    rngs: List[random.Random] = field(repr=False)
    neighbor_ids: List[List[int]] = field(repr=False)
    iteration: int = 0

    def agent_at(self, position: tuple[int, int]) -> Agent:
        x, y = position
        return self.agents[y * self.config.width + x]

    def actions(self) -> list[ChainedAction]:
        return [a.current for a in self.agents]


def init_world(config: WorldConfig) -> World:
    agents = []
    rngs = []
    trends = TrendState.initial(config.invention_params.p_ext_max)
    for y in range(config.height):
        for x in range(config.width):
            agent_id = y * config.width + x
            agents.append(Agent(id=agent_id, position=(x, y), trends=trends))
            rngs.append(random.Random(agent_seed(config.seed, agent_id)))
    return World(config=config, agents=agents, rngs=rngs, neighbor_ids=_neighbor_ids(config))


def neighbors(world: World | WorldConfig, position: tuple[int, int]) -> list[tuple[int, int]]:
    """Von Neumann neighbourhood: west, east, north, south."""
    config = world.config if isinstance(world, World) else world
    w, h = config.width, config.height
    x, y = position
    if not (0 <= x < w and 0 <= y < h):
        raise ValueError(f"position {position} lies outside the {w}x{h} grid")
    candidates = [(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)]
    if config.toroidal:
        return [(cx % w, cy % h) for cx, cy in candidates]
    return [(cx, cy) for cx, cy in candidates if 0 <= cx < w and 0 <= cy < h]


def _neighbor_ids(config: WorldConfig) -> list[list[int]]:
    return [
        [ny * config.width + nx for nx, ny in neighbors(config, (i % config.width, i // config.width))]
        for i in range(config.n_agents)
    ]


def step_world(world: World, order: Sequence[int] | None = None) -> World:
    """Advance one iteration in place and return the world.

    ``order`` overrides the agent processing order; it exists so tests can
    check that observations do not depend on it.
    """
    config = world.config
    params = config.invention_params
    snapshot = world.actions()
    table = world.neighbor_ids
    for i in order if order is not None else range(len(world.agents)):
        agent = world.agents[i]
        rng = world.rngs[i]
        if rng.random() < config.invention_probability:
            candidate = invent(agent, params, rng)
        else:
            candidate = imitate(agent, [snapshot[j] for j in table[i]], rng)
        if candidate is not None:
            evaluate_and_adopt(agent, candidate, params.learning_enabled, params.p_ext_max)
    world.iteration += 1
    return world


def metrics_snapshot(world: World) -> MetricsRecord:
    actions = world.actions()
    n = len(actions)
    return MetricsRecord(
        iteration=world.iteration,
        mean_fitness=sum(fitness_chain(a) for a in actions) / n,
        diversity=len(set(actions)),
        mean_chain_length=sum(len(a) for a in actions) / n,
        fraction_optimal_base=sum(is_optimal_step(a.base) for a in actions) / n,
    )


def iter_run(config: WorldConfig) -> Iterable[World]:
    """Yield the world at iteration 0 and after every subsequent step."""
    world = init_world(config)
    yield world
    for _ in range(config.iterations):
        yield step_world(world)


def run(config: WorldConfig) -> list[MetricsRecord]:
    return [metrics_snapshot(w) for w in iter_run(config)]
