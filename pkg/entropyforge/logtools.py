"""Logging helpers for entropyforge commands.

Command milestones get a banner and every other record is one greppable
line of sorted key=value pairs, so two Monte Carlo runs can be diffed line
by line. Each CLI command runs inside a CommandLog that counts the work it
does (walk samples, exact laws, output rows) and closes with one summary
line carrying the wall time and the per-second rates.

Architecture Note:
    The active CommandLog lives in a context variable. Code below the CLI
    calls count() without knowing whether a command is running; outside
    one the call does nothing.

See Also:
    cli.main: Opens one CommandLog per command
"""

from __future__ import annotations

import logging
import time
from collections import Counter
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from typing import Any

from .const import PACKAGE

_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _fmt_kv(**kvs: Any) -> str:
    """Format key=value pairs sorted by key, floats to six digits."""
    parts: list[str] = []
    for k in sorted(kvs.keys()):
        v = kvs[k]
        if isinstance(v, float):
            v = f"{v:.6g}"
        parts.append(f"{k}={v}")
    return ", ".join(parts)


def info_banner(logger: logging.Logger, title: str, **kvs: Any) -> None:
    """Log a framed three-line result summary at INFO level."""
    line = _fmt_kv(**kvs) if kvs else ""
    width = max(1, len(title) + (len(line) + 2 if line else 0))
    logger.info("╔%s╗", "═" * width)
    if line:
        logger.info("║  %s  %s", title, line)
    else:
        logger.info("║  %s", title)
    logger.info("╚%s╝", "═" * width)


def kv(logger: logging.Logger, level: int, msg: str, **kvs: Any) -> None:
    """Log ``msg | k=v, ...`` at ``level``.

    Nothing is formatted when the logger is not enabled for the level.
    """
    if not logger.isEnabledFor(level):
        return
    if kvs:
        logger.log(level, "%s | %s", msg, _fmt_kv(**kvs))
    else:
        logger.log(level, "%s", msg)


def configure_logging(verbosity: int = 0) -> None:
    """Attach a stderr handler to the package logger.

    Args:
        verbosity: -1 for warnings only, 0 for INFO, 1 or more for DEBUG.
    """
    level = logging.INFO
    if verbosity < 0:
        level = logging.WARNING
    elif verbosity > 0:
        level = logging.DEBUG
    logger = logging.getLogger(PACKAGE)
    logger.setLevel(level)
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(_FORMAT))
        logger.addHandler(handler)


@dataclass
class CommandLog:
    """Wall time and work counters of one command.

    Attributes:
        command: Command name as typed on the command line
        counts: Units of work done so far, by kind
    """

    command: str
    counts: Counter[str] = field(default_factory=Counter)
    _start: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._start = time.monotonic()

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self._start

    def add(self, kind: str, amount: int = 1) -> None:
        self.counts[kind] += amount

    def summary(self) -> dict[str, Any]:
        """Counters, the elapsed seconds and a rate for every counter."""
        seconds = self.elapsed
        out: dict[str, Any] = {"command": self.command, "seconds": seconds}
        for kind, amount in self.counts.items():
            out[kind] = amount
            if seconds > 0:
                out[f"{kind}_per_s"] = amount / seconds
        return out

    def finish(self, logger: logging.Logger, status: int) -> None:
        kv(logger, logging.INFO, "Command finished", status=status, **self.summary())


_ACTIVE: ContextVar[CommandLog | None] = ContextVar("command_log", default=None)


@contextmanager
def command_log(command: str) -> Iterator[CommandLog]:
    """Make a fresh CommandLog the target of count() for the block."""
    log = CommandLog(command)
    token = _ACTIVE.set(log)
    try:
        yield log
    finally:
        _ACTIVE.reset(token)


def count(kind: str, amount: int = 1) -> None:
    """Add work to the running command, if any."""
    log = _ACTIVE.get()
    if log is not None:
        log.add(kind, amount)
