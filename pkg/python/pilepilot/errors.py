"""Exception hierarchy shared by every pilepilot module."""

import typing as tp

if tp.TYPE_CHECKING:
    from .trainer.loop import Agents, TrainLog


class PilePilotError(Exception):
    """Base class of every error raised deliberately by pilepilot."""


class DomainEmpty(PilePilotError, ValueError):
    """An operation was asked for a quantity that is undefined on an empty set (no docked EVs)."""


class DomainError(PilePilotError, ValueError):
    """An argument fell outside the domain of the operation."""


class BoundaryViolation(PilePilotError):
    """A pile was asked to apply a power outside its boundaries for the slot."""

    def __init__(self, pile_id: int, power_kw: float, p_min_kw: float, p_max_kw: float):
        self.pile_id = pile_id
        self.power_kw = power_kw
        self.p_min_kw = p_min_kw
        self.p_max_kw = p_max_kw
        super().__init__(
            "Pile {}: power {:.6g} kW outside [{:.6g}, {:.6g}] kW.".format(
                pile_id, power_kw, p_min_kw, p_max_kw
            )
        )


class ShapeError(PilePilotError, ValueError):
    """Array or network shapes don't line up."""


class NumericalFault(PilePilotError, ArithmeticError):
    """A non-finite value showed up in a gradient, loss or parameter vector."""


class Underfull(PilePilotError):
    """A replay buffer holds fewer entries than the requested batch."""


class ParseError(PilePilotError, ValueError):
    """A trace CSV couldn't be parsed. `line` is 1-based and counts the header."""

    def __init__(self, message: str, path: tp.Optional[str] = None, line: tp.Optional[int] = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = path if line is None else "{}:{}".format(path, line)
            where += ": "
        super().__init__(where + message)


class AlignmentError(PilePilotError, ValueError):
    """Load and price traces don't cover the same hourly timestamps."""


class TraceGapError(AlignmentError):
    """An hour inside a trace has no readings."""


class ConfigError(PilePilotError, ValueError):
    """Invalid configuration file, flag value or flag combination."""


class CheckpointError(PilePilotError, ValueError):
    """A checkpoint couldn't be read or doesn't match the requested configuration."""


class TrainingAborted(PilePilotError):
    """Training hit a numerical fault. Holds the agents and log from the last good episode."""

    def __init__(self, cause: Exception, last_good: "Agents", log: "TrainLog", episode: int):
        self.cause = cause
        self.last_good = last_good
        self.log = log
        self.episode = episode
        super().__init__("Training aborted at episode {}: {}".format(episode, cause))
