"""Wall-clock timing of simulation stages."""
from __future__ import annotations

import sys
import time
from types import TracebackType

if sys.version_info >= (3, 11):  # pragma: >=3.11 cover
    from typing import Self
else:  # pragma: <3.11 cover
    from typing_extensions import Self


class Timer:
    """Wall-clock timer for logging how long a stage took.

    Example:
        ```python
        from nanomis.timer import Timer

        with Timer() as timer:
            field = newton_solve(mesh, 2.5)

        logger.info(f'Solved in {timer.elapsed_s:.2f} s')
        ```

    Raises:
        RuntimeError: If the elapsed time is accessed before the block is
            exited.
    """

    def __init__(self) -> None:
        self._start = 0.0
        self._end: float | None = None

    def __enter__(self) -> Self:
        self._start = time.perf_counter()
        self._end = None
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc_value: BaseException | None,
        exc_traceback: TracebackType | None,
    ) -> None:
        self._end = time.perf_counter()

    @property
    def elapsed_s(self) -> float:
        """Elapsed time in seconds."""
        if self._end is None:
            raise RuntimeError('Timer is still running.')
        return self._end - self._start
