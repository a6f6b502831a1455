"""Exception hierarchy shared by the library and the command line tool."""
from __future__ import annotations


class AttackModelError(Exception):
    """Base class for every error raised by this package.

    ``line`` and ``source`` are filled in when the error can be traced back
    to a position in an instance file.
    """

    def __init__(self, message: str, *, line: int | None = None, source: str | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.source = source

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"{self.source or '<input>'}:{self.line}: {self.message}"

    def to_dict(self) -> dict:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "line": self.line,
            "source": self.source,
        }


class NondeterministicTransition(AttackModelError):
    pass


class LanguageBoundExceeded(AttackModelError):
    pass


class AlphabetNestingViolation(AttackModelError):
    pass


class UnknownEvent(AttackModelError):
    pass


class ControllabilityViolation(AttackModelError):
    def __init__(self, state, event, **kw):
        super().__init__(
            f"uncontrollable event {event!r} is not defined at supervisor state {state!r}", **kw
        )
        self.state = state
        self.event = event


class ObservabilityViolation(AttackModelError):
    def __init__(self, state, event, **kw):
        super().__init__(
            f"unobservable event {event!r} must be a self-loop at supervisor state {state!r}", **kw
        )
        self.state = state
        self.event = event


class UnknownState(AttackModelError):
    pass


class StringNotInClosedLoop(AttackModelError):
    pass


class DamageOverlapsClosedLoop(AttackModelError):
    def __init__(self, witness, **kw):
        super().__init__(
            "damage language intersects the closed-loop behavior; witness: "
            + (" ".join(witness) or "<empty string>"),
            **kw,
        )
        self.witness = tuple(witness)


class DamageAutomatonIncomplete(AttackModelError):
    pass


class NotAttackable(AttackModelError):
    pass


class ObservationNotFeasible(AttackModelError):
    pass


class ObservationDesync(AttackModelError):
    pass


class InstanceParseError(AttackModelError):
    pass
