"""Action representation, fitness evaluation and enumeration of the step space.

An action is a chain of one or more steps. Each step fixes a direction for
each of six body parts, so there are 3**6 = 729 distinct steps. Chains longer
than one step must keep swinging the same arm back and forth.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property
from typing import Iterator, NamedTuple, Optional, Sequence


class Direction(IntEnum):
    DOWN = -1
    STATIONARY = 0
    UP = 1

    @property
    def moving(self) -> bool:
        return self is not Direction.STATIONARY

    def opposite(self) -> "Direction":
        if self is Direction.STATIONARY:
            raise ValueError("a stationary part has no opposite direction")
        return Direction(-self.value)


class BodyPart(IntEnum):
    LEFT_ARM = 0
    RIGHT_ARM = 1
    LEFT_LEG = 2
    RIGHT_LEG = 3
    HEAD = 4
    HIPS = 5


ARMS = (BodyPart.LEFT_ARM, BodyPart.RIGHT_ARM)
LEGS = (BodyPart.LEFT_LEG, BodyPart.RIGHT_LEG)

# paired limb -> its partner; head and hips have none
PARTNER = {
    BodyPart.LEFT_ARM: BodyPart.RIGHT_ARM,
    BodyPart.RIGHT_ARM: BodyPart.LEFT_ARM,
    BodyPart.LEFT_LEG: BodyPart.RIGHT_LEG,
    BodyPart.RIGHT_LEG: BodyPart.LEFT_LEG,
}

MAX_STEP_FITNESS = 10.0


class InvalidChainError(ValueError):
    """Raised when a chain violates the arm-alternation rule."""


@dataclass(frozen=True)
class Step:
    """Directions of all six body parts during one timestep."""

    positions: tuple[Direction, ...]

    def __post_init__(self) -> None:
        if len(self.positions) != len(BodyPart):
            raise ValueError(f"a step needs {len(BodyPart)} positions, got {len(self.positions)}")
        object.__setattr__(self, "positions", tuple(Direction(p) for p in self.positions))

    @classmethod
    def stationary(cls) -> "Step":
        return cls((Direction.STATIONARY,) * len(BodyPart))

    @classmethod
    def from_parts(cls, **parts: Direction) -> "Step":
        """Build a step naming only the moving parts, e.g. ``from_parts(LEFT_ARM=Direction.UP)``."""
        positions = [Direction.STATIONARY] * len(BodyPart)
        for name, direction in parts.items():
            positions[BodyPart[name]] = direction
        return cls(tuple(positions))

    def __getitem__(self, part: BodyPart) -> Direction:
        return self.positions[part]

    def replace(self, part: BodyPart, direction: Direction) -> "Step":
        positions = list(self.positions)
        positions[part] = direction
        return Step(tuple(positions))

    def __str__(self) -> str:
        glyph = {Direction.DOWN: "v", Direction.STATIONARY: ".", Direction.UP: "^"}
        return "".join(glyph[p] for p in self.positions)


@dataclass(frozen=True)
class ChainedAction:
    steps: tuple[Step, ...]
    chain_arm: Optional[BodyPart] = None
    # fitness and validity are looked up on every comparison, so cache them
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    @classmethod
    def single(cls, step: Step) -> "ChainedAction":
        return cls((step,), None)

    @classmethod
    def extend(cls, base: Step, chain_arm: BodyPart, length: int) -> "ChainedAction":
        """Chain of ``length`` steps: ``base`` then the chain arm flipped at every step."""
        if length == 1:
            return cls.single(base)
        steps = [base]
        for _ in range(length - 1):
            prev = steps[-1]
            steps.append(prev.replace(chain_arm, prev[chain_arm].opposite()))
        return cls(tuple(steps), chain_arm)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def base(self) -> Step:
        return self.steps[0]

    @cached_property
    def _hash(self) -> int:
        return hash((self.steps, self.chain_arm))

    def __hash__(self) -> int:
        return self._hash


class HiddenActivations(NamedTuple):
    movement: int
    symmetry: int
    opposite: int
    head_moving: int


def is_valid_chain(chain: ChainedAction, max_chain_len: Optional[int] = None) -> bool:
    n = len(chain.steps)
    if n == 0:
        return False
    if max_chain_len is not None and n > max_chain_len:
        return False
    if n == 1:
        return chain.chain_arm is None
    arm = chain.chain_arm
    if arm not in ARMS:
        return False
    prev = chain.steps[0][arm]
    if not prev.moving:
        return False
    for step in chain.steps[1:]:
        cur = step[arm]
        if not cur.moving or cur is prev:
            return False
        prev = cur
    return True


def _check(chain: ChainedAction) -> None:
    valid = chain._cache.get("valid")
    if valid is None:
        valid = chain._cache["valid"] = is_valid_chain(chain)
    if not valid:
        raise InvalidChainError(f"invalid chain of length {len(chain.steps)} on arm {chain.chain_arm!r}")


def _opposed(step: Step, pair: tuple[BodyPart, BodyPart]) -> int:
    a, b = step[pair[0]], step[pair[1]]
    return int(a.moving and b.moving and a is not b)


def movement(step: Step) -> int:
    return sum(p.moving for p in step.positions)


def symmetry(step: Step) -> int:
    """Number of limb pairs (arms, legs) moving in opposite directions."""
    return _opposed(step, ARMS) + _opposed(step, LEGS)


def fitness_step(step: Step) -> float:
    head_moving = int(step[BodyPart.HEAD].moving)
    return movement(step) + 1.5 * symmetry(step) + 2.0 * (1 - head_moving)


def fitness_chain(chain: ChainedAction) -> float:
    cached = chain._cache.get("fitness")
    if cached is None:
        _check(chain)
        cached = chain._cache["fitness"] = fitness_step(chain.steps[0]) + (len(chain.steps) - 1)
    return cached


def hidden_activations(chain: ChainedAction) -> HiddenActivations:
    _check(chain)
    base = chain.steps[0]
    return HiddenActivations(
        movement=movement(base),
        symmetry=symmetry(base),
        opposite=len(chain.steps) - 1,
        head_moving=int(base[BodyPart.HEAD].moving),
    )


def iter_steps() -> Iterator[Step]:
    # base-3 counting: LEFT_ARM is the most significant digit, DOWN < STATIONARY < UP
    for combo in itertools.product(Direction, repeat=len(BodyPart)):
        yield Step(combo)


_ALL_STEPS = tuple(iter_steps())
_OPTIMA = tuple(s for s in _ALL_STEPS if fitness_step(s) == MAX_STEP_FITNESS)
_OPTIMA_SET = frozenset(_OPTIMA)


def enumerate_steps() -> Sequence[Step]:
    return _ALL_STEPS


def optimal_steps() -> Sequence[Step]:
    """Every step attaining the maximum single-step fitness, in enumeration order."""
    best = max(fitness_step(s) for s in _ALL_STEPS)
    return tuple(s for s in _ALL_STEPS if fitness_step(s) == best)


def is_optimal_step(step: Step) -> bool:
    return step in _OPTIMA_SET
