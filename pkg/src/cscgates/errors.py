"""Exception types raised across the package."""


class CodeToolError(Exception):
    """Base class for all errors raised by cscgates."""


class DimensionMismatch(CodeToolError, ValueError):
    pass


class RankDeficient(CodeToolError, ValueError):
    """Stabilizer rows are linearly dependent over F2."""

    def __init__(self, message: str, rows=None):
        super().__init__(message)
        self.rows = rows


class TooLarge(CodeToolError, ValueError):
    """A dense or exhaustive computation would exceed its size limit."""

    def __init__(self, message: str, dimension: str | None = None):
        super().__init__(message)
        self.dimension = dimension


class NotZType(CodeToolError, ValueError):
    pass


class NotHermitian(CodeToolError, ValueError):
    pass


class IndexOutOfRange(CodeToolError, IndexError):
    pass


class OverlappingSupports(CodeToolError, ValueError):
    pass


class LightConeTooLarge(TooLarge):
    pass


class NonUnitaryGate(CodeToolError, ValueError):
    pass


class NotPreserving(CodeToolError, ValueError):
    """The circuit does not map the source codespace into the target codespace."""


class BudgetExceeded(CodeToolError, ValueError):
    pass


class PreconditionFailed(CodeToolError, ValueError):
    pass


class ParseError(CodeToolError, ValueError):
    pass


class CounterexampleFound(CodeToolError):
    """A circuit contradicts the no-go bound. Carries the offending circuit."""

    def __init__(self, message: str, circuit=None, verdict=None):
        super().__init__(message)
        self.circuit = circuit
        self.verdict = verdict
