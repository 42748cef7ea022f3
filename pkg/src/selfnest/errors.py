"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed tree or DAG text. ``offset`` is the 0-based byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class GuardError(RuntimeError):
    """An exhaustive routine refused an instance larger than its guard."""


class GenerationError(RuntimeError):
    """Random generation gave up after too many rejections."""
