"""Exception hierarchy shared by the library and the command line front-end.

Each class carries the process exit code the CLI maps it to.
"""


class DistconformError(Exception):
    exit_code = 2


class UsageError(DistconformError, ValueError):
    """Bad arguments: unknown port, symbol outside the machine's alphabets, ..."""

    exit_code = 2


class ModelError(UsageError):
    """A machine or automaton violates its structural invariants."""


class PreconditionError(DistconformError):
    """An operation was called on inputs outside its decidable fragment."""

    exit_code = 3


class IncompleteMachineError(PreconditionError):
    pass


class ResourceBudgetError(DistconformError):
    """Enumeration would exceed the configured budget."""

    exit_code = 4


class ParseError(UsageError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))
