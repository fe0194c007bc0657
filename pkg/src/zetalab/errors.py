"""Exception types shared across the package."""


class GuardError(ValueError):
    """A resource or range guard was violated.

    `guard` names the specific limit so callers (and the CLI) can report
    exactly which cap was hit.
    """

    def __init__(self, guard: str, message: str):
        super().__init__(message)
        self.guard = guard
