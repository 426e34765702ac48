"""Shared error base so the CLI can map failures to exit codes."""


class StagedError(Exception):
    """Base for every error this toolchain raises on purpose."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line

    def __str__(self) -> str:
        if self.line:
            return f"line {self.line}: {self.message}"
        return self.message
