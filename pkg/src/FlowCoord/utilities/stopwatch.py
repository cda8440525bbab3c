# pylint: disable=missing-module-docstring, missing-class-docstring

import time
from types import TracebackType
from typing import Optional


class Stopwatch:
    """Wall-clock timer for one `with` block.

    with Stopwatch() as watch:
        solve()
    watch.elapsed  # seconds
    """

    def __init__(self) -> None:
        self.started: float = 0.0
        self.elapsed: float = 0.0

    def __enter__(self) -> "Stopwatch":
        self.started = time.perf_counter()
        return self

    def __exit__(
        self,
        exc_type: Optional[type[BaseException]],
        exc: Optional[BaseException],
        traceback: Optional[TracebackType],
    ) -> None:
        self.elapsed = time.perf_counter() - self.started
