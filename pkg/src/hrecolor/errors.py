"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class HRecolorError(Exception):
    """Base class for all errors raised by hrecolor."""


class PreconditionViolation(HRecolorError, ValueError):
    """An instance failed one of the structural checks.

    ``check`` names the failing check (``"G connected"``, ``"H has MNP"``, ...)
    so that callers such as the CLI can report it verbatim.
    """

    def __init__(self, check: str, detail: str = ""):
        self.check = check
        self.detail = detail
        msg = check if not detail else f"{check}: {detail}"
        super().__init__(msg)


class UnknownVertex(HRecolorError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class EmptyIntersection(HRecolorError):
    pass


class EndpointMismatch(HRecolorError, ValueError):
    pass


class NotClosed(HRecolorError, ValueError):
    pass


class EmptyWalk(HRecolorError, ValueError):
    pass


class BasepointMismatch(HRecolorError, ValueError):
    pass


class Disconnected(HRecolorError, ValueError):
    pass


class InvalidSequence(HRecolorError, ValueError):
    pass


class NotRealizable(HRecolorError):
    """A candidate walk cannot be realized; ``reason`` is one of
    ``"parity"``, ``"topology"``, ``"tight"`` or ``"endpoints"``."""

    REASONS = ("parity", "topology", "tight", "endpoints")

    def __init__(self, reason: str, detail: str = ""):
        assert reason in self.REASONS, reason
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


class InternalValidationFailure(HRecolorError, AssertionError):
    """The engine produced an output that failed its own re-validation."""


class StateBudgetExceeded(HRecolorError):
    pass


class IncompleteScan(HRecolorError):
    pass
