from __future__ import annotations


class LmaxPtasError(Exception):
    """Root of every error raised by lmax-ptas."""


class InstanceError(LmaxPtasError, ValueError):
    pass


class DuplicateId(InstanceError):
    pass


class NonPositiveProcessing(InstanceError):
    pass


class NegativeTime(InstanceError):
    pass


class BadWindow(InstanceError):
    pass


class NotAPermutation(LmaxPtasError, ValueError):
    pass


class EmptySubset(LmaxPtasError, ValueError):
    pass


class BadEpsilon(LmaxPtasError, ValueError):
    pass


class EpsilonNotUnitFraction(BadEpsilon):
    pass


class BadParams(LmaxPtasError, ValueError):
    pass


class GuessBudgetExceeded(LmaxPtasError):
    def __init__(self, count: int, budget: int) -> None:
        super().__init__(f"guess enumeration needs {count} candidates, budget is {budget}")
        self.count = count
        self.budget = budget


class InstanceTooLarge(LmaxPtasError):
    def __init__(self, n: int, cap: int) -> None:
        super().__init__(f"instance has {n} jobs, oracle cap is {cap}")
        self.n = n
        self.cap = cap


class SchemaError(LmaxPtasError, ValueError):
    def __init__(self, message: str, *, path: str | None = None, line: int | None = None) -> None:
        where = []
        if line is not None:
            where.append(f"line {line}")
        if path:
            where.append(f"at {path}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.path = path
        self.line = line
