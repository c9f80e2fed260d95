"""Exception hierarchy shared by all synchrolab modules."""


class SynchrolabError(Exception):
    """Base class for all library errors."""


class InvalidInputError(SynchrolabError, ValueError):
    """An argument is out of range, malformed, or inconsistent."""


class CapacityError(SynchrolabError):
    """A guarded size limit (product space, subset space, ...) was exceeded."""


class NotSynchronizableError(SynchrolabError):
    """No reset word exists; carries one stuck pair as a witness."""

    def __init__(self, pair: tuple[int, int], message: str | None = None):
        self.pair = pair
        if message is None:
            message = f"states {pair[0]} and {pair[1]} cannot be merged by any word"
        super().__init__(message)
