from typing import Callable

from laguerre.commands import apply, kernel, mellin, solve, verify
from laguerre.models.schemas import Command, RunConfig

HANDLERS: dict[Command, Callable[[RunConfig], int]] = {
    Command.APPLY: apply.run,
    Command.KERNEL: kernel.run,
    Command.MELLIN: mellin.run,
    Command.SOLVE: solve.run,
    Command.VERIFY: verify.run,
}
