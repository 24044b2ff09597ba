"""Execução pseudoaleatória reprodutível a partir de uma semente."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field

from mbxc.config import MAX_STEPS
from mbxc.syntax.ast import Process, Program
from mbxc.syntax.congruence import shape
from mbxc.syntax.printer import print_process

from .explorer import DONE_KEY, initial_state
from .reduction import transitions

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TraceStep:
    rule: str
    redex: str
    state: Process
    printed: int | None = None


@dataclass
class Trace:
    """Traço maximal (ou truncado) de ``run``."""

    initial: Process
    seed: int
    steps: list[TraceStep] = field(default_factory=list)
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def final(self) -> Process:
        return self.steps[-1].state if self.steps else self.initial

    @property
    def outputs(self) -> list[int]:
        return [s.printed for s in self.steps if s.printed is not None]

    @property
    def ends_in_done(self) -> bool:
        return not self.truncated and shape(self.final) == DONE_KEY

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "length": len(self.steps),
            "truncated": self.truncated,
            "ends_in_done": self.ends_in_done,
            "outputs": self.outputs,
            "steps": [
                {"rule": s.rule, "redex": s.redex, "state": print_process(s.state)}
                for s in self.steps
            ],
            "final": print_process(self.final),
        }


def run(program: Program, seed: int = 0, max_steps: int = MAX_STEPS) -> Trace:
    """Escolhe uniformemente entre as transições ordenadas, passo a passo."""
    rng = random.Random(seed)
    state, origins = initial_state(program)
    trace = Trace(initial=state, seed=seed)
    while True:
        moves = transitions(state, program, origins)
        if not moves:
            break
        if len(trace.steps) >= max_steps:
            trace.truncated = True
            break
        move = rng.choice(moves)
        trace.steps.append(TraceStep(move.rule, move.redex, move.target, move.printed))
        state, origins = move.target, dict(move.origins)
    logger.info(
        "✅ run seed=%d: %d passos, truncado=%s", seed, len(trace.steps), trace.truncated
    )
    return trace
