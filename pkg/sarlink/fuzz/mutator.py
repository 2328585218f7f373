"""Bit-level frame mutation."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np

from ..codec.beacon import BeaconProtocol
from ..codec.protocols import (
    NAT_IDENTITY, NAT_POSITION, STD_IDENTITY, STD_POSITION, refresh_parity,
)
from ..frame.bitframe import (
    BCH1_PARITY, BCH2_PARITY, LONG_LENGTH, PROTOCOL_CODE, FieldWindow, Frame, field_access,
)

logger = logging.getLogger(__name__)


class FuzzPlanError(ValueError):
    """A mutation plan, replay schedule or spoof template is invalid."""


class MutationTarget(str, Enum):
    FIELD = "field"
    RANDOM_BITS = "random_bits"
    PROTOCOL_CODE = "protocol_code"
    POSITION = "position"
    IDENTITY = "identity"
    BCH_PARITY = "bch_parity"


class MutationStrategy(str, Enum):
    FLIP = "flip"
    RANDOM = "random"
    BOUNDARY = "boundary"
    SENTINEL = "sentinel"


@dataclass
class MutationPlan:
    """What to mutate, how, and how many mutants to produce."""

    seed: int
    target: MutationTarget
    strategy: MutationStrategy
    count: int = 1
    recompute_bch: bool = False
    window: Optional[FieldWindow] = None

    def validate(self) -> None:
        try:
            target = MutationTarget(self.target)
            MutationStrategy(self.strategy)
        except ValueError as e:
            raise FuzzPlanError(str(e)) from e
        if not isinstance(self.count, (int, np.integer)) or self.count < 1:
            raise FuzzPlanError(f"count must be a positive integer, got {self.count!r}")
        if target is MutationTarget.FIELD and not isinstance(self.window, FieldWindow):
            raise FuzzPlanError("a field target needs a FieldWindow")
        if target is MutationTarget.BCH_PARITY and self.recompute_bch:
            raise FuzzPlanError("recomputing parity would undo a bch_parity mutation")


def _target_windows(frame: Frame, plan: MutationPlan) -> List[FieldWindow]:
    target = MutationTarget(plan.target)
    if target is MutationTarget.FIELD:
        if not plan.window.fits(len(frame)):
            raise FuzzPlanError(f"window {plan.window.name} does not fit a {len(frame)}-bit frame")
        return [plan.window]
    if target is MutationTarget.RANDOM_BITS:
        return [FieldWindow("frame", 1, len(frame))]
    if target is MutationTarget.PROTOCOL_CODE:
        return [PROTOCOL_CODE]

    national = BeaconProtocol.from_code(field_access(frame, PROTOCOL_CODE)).is_national
    if target is MutationTarget.POSITION:
        return [NAT_POSITION if national else STD_POSITION]
    if target is MutationTarget.IDENTITY:
        return [NAT_IDENTITY if national else STD_IDENTITY]
    return [BCH1_PARITY, BCH2_PARITY] if len(frame) == LONG_LENGTH else [BCH1_PARITY]


def _boundary_values(width: int) -> List[int]:
    top = (1 << width) - 1
    high = 1 << (width - 1)
    return sorted({0, 1, top, max(0, top - 1), high, high - 1})


def _apply(bits: np.ndarray, window: FieldWindow, strategy: MutationStrategy,
           rng: np.random.Generator) -> None:
    start, stop = window.first_bit - 1, window.last_bit
    if strategy is MutationStrategy.FLIP:
        bits[start + int(rng.integers(window.width))] ^= 1
    elif strategy is MutationStrategy.RANDOM:
        bits[start:stop] = rng.integers(0, 2, window.width, dtype=np.uint8)
    elif strategy is MutationStrategy.BOUNDARY:
        values = _boundary_values(window.width)
        value = values[int(rng.integers(len(values)))]
        bits[start:stop] = [(value >> shift) & 1 for shift in range(window.width - 1, -1, -1)]
    else:
        bits[start:stop] = 1


def mutate(frame: Frame, plan: MutationPlan) -> List[Frame]:
    """Produce ``plan.count`` mutants of a frame, deterministic per seed."""
    plan.validate()
    windows = _target_windows(frame, plan)
    strategy = MutationStrategy(plan.strategy)
    rng = np.random.default_rng(plan.seed)

    mutants = []
    for _ in range(plan.count):
        mutant = frame.copy()
        window = windows[int(rng.integers(len(windows)))]
        _apply(mutant.bits, window, strategy, rng)
        if plan.recompute_bch:
            refresh_parity(mutant)
        mutants.append(mutant)

    logger.debug(f"{plan.count} mutant(s): target={MutationTarget(plan.target).value}, "
                 f"strategy={strategy.value}, recompute_bch={plan.recompute_bch}")
    return mutants
