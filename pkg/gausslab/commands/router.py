from dataclasses import dataclass, field
from typing import Callable

from ..models import Report


class CommandError(Exception):
    """Raised by a command handler; main prints `detail` and exits with `exit_code`."""

    def __init__(self, detail: str, exit_code: int = 2):
        super().__init__(detail)
        self.detail = detail
        self.exit_code = exit_code


@dataclass
class Argument:
    flags: tuple[str, ...]
    options: dict


def arg(*flags: str, **options) -> Argument:
    return Argument(flags, options)


@dataclass
class Command:
    name: str
    handler: Callable[..., Report]
    help: str
    aliases: tuple[str, ...] = ()
    arguments: tuple[Argument, ...] = ()
    needs_poly: bool = False


@dataclass
class CommandRouter:
    """Groups command handlers the way an API router groups endpoints."""

    tags: list[str] = field(default_factory=list)
    commands: list[Command] = field(default_factory=list)

    def command(self, name: str, *, help: str, aliases: tuple[str, ...] = (),
                arguments: tuple[Argument, ...] = (), needs_poly: bool = False):
        def decorator(handler):
            self.commands.append(Command(name, handler, help, tuple(aliases), tuple(arguments), needs_poly))
            return handler
        return decorator
