from __future__ import annotations

from typing import Any

from rich.console import Console
from rich.logging import RichHandler


def stderr_handler(**options: Any) -> RichHandler:
    """RichHandler bound to stderr, so stdout only ever carries documents."""
    return RichHandler(console=Console(stderr=True), **options)


CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {"format": "%(message)s"},
    },
    "handlers": {
        "to_console": {
            "()": "homeoact._logging.stderr_handler",
            "level": "INFO",
            "formatter": "simple",
            # RichHandler.__init__()
            "show_level": True,
            "rich_tracebacks": True,
            "markup": True,
            "log_time_format": "[%X]",
        },
    },
    "loggers": {
        "": {
            "level": "WARNING",
            "handlers": [
                "to_console",
            ],
            "propagate": False,
        },
        "homeoact": {
            "level": "INFO",
            "handlers": [
                "to_console",
            ],
            "propagate": False,
        },
    },
}


def configure(level: str = "INFO") -> None:
    """Apply CONFIG with the requested level for homeoact's own loggers."""
    import copy
    import logging.config

    config = copy.deepcopy(CONFIG)
    config["handlers"]["to_console"]["level"] = level
    config["loggers"]["homeoact"]["level"] = level
    logging.config.dictConfig(config)
