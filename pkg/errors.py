"""Exception hierarchy shared by every module; the CLI maps it onto exit codes."""


class QocError(Exception):
    """Base class for all workbench errors."""

    exit_code = 1


class StructuralError(QocError, ValueError):
    """Operands belong to different groups or have incompatible shapes."""

    exit_code = 2


class DomainError(QocError, ValueError):
    """A precondition on the arguments does not hold."""

    exit_code = 2


class RegimeError(DomainError):
    """A closed form was requested outside the parameter regime it covers."""


class CapacityError(QocError):
    """A configured enumeration or linear-algebra guard was exceeded."""

    exit_code = 3

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what} needs {size:,} items, capacity is {limit:,}")
        self.what = what
        self.size = size
        self.limit = limit


class ConsistencyError(QocError, ArithmeticError):
    """An exact or numerical self-check failed."""

    exit_code = 1
