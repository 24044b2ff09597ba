"""
Semântica operacional: passos de redução, exploração do espaço de estados
e os monitores de conformidade, deadlock e terminação justa.
"""

from .explorer import (
    Classification,
    MailboxBounds,
    StateEdge,
    StateGraph,
    explore,
    guards_on,
    mailbox_bounds,
    messages_in,
)
from .reduction import (
    R_DEF,
    R_FREE,
    R_IF,
    R_PRINT,
    R_READ,
    Transition,
    find_unguarded_fail,
    step,
    transitions,
)
from .trace import Trace, TraceStep, run

__all__ = [
    "Classification",
    "MailboxBounds",
    "StateEdge",
    "StateGraph",
    "Trace",
    "TraceStep",
    "Transition",
    "R_READ",
    "R_FREE",
    "R_DEF",
    "R_IF",
    "R_PRINT",
    "explore",
    "run",
    "step",
    "transitions",
    "find_unguarded_fail",
    "mailbox_bounds",
    "messages_in",
    "guards_on",
]
