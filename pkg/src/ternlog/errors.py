"""Exception hierarchy shared by all ternlog modules."""

from __future__ import annotations


class TernlogError(Exception):
    """Base class for every error raised by this package."""


class WellFormednessError(TernlogError, ValueError):
    """A term or formula does not fit its signature."""


class CaptureError(TernlogError):
    """Substitution would capture a variable of the substituted term."""

    def __init__(self, index: int, term, binder: int):
        self.index = index
        self.term = term
        self.binder = binder
        super().__init__(
            f"term is not free for v{index}: its variable v{binder} would be captured"
        )


class ParseError(TernlogError, ValueError):
    """Concrete-syntax error carrying a source position."""

    def __init__(self, message: str, pos: int = 0, expected: tuple[str, ...] = (), text: str = ""):
        self.pos = pos
        self.expected = tuple(expected)
        self.text = text
        self.message = message
        detail = message
        if expected:
            detail += f" (expected {', '.join(expected)})"
        super().__init__(f"{detail} at position {pos}")

    def caret(self) -> str:
        """Render the offending line with a caret under the error position."""
        if not self.text:
            return str(self)
        start = self.text.rfind("\n", 0, self.pos) + 1
        end = self.text.find("\n", self.pos)
        if end < 0:
            end = len(self.text)
        return f"{self.text[start:end]}\n{' ' * (self.pos - start)}^\n{self}"


class UnknownSymbol(ParseError):
    pass


class ArityMismatch(ParseError):
    pass


class SignatureMismatch(TernlogError):
    """A structure does not interpret a symbol the formula uses."""


class BoundExceeded(TernlogError):
    """The structure-enumeration budget ran out before the search finished."""

    def __init__(self, size: int, budget: int):
        self.size = size
        self.budget = budget
        super().__init__(f"enumeration budget of {budget} structures exhausted at domain size {size}")


class BudgetExceeded(TernlogError):
    """An exhaustive regularity check would visit too many argument tuples."""


class UnknownOperator(TernlogError):
    pass


class PolarityMismatch(TernlogError):
    pass


class BadPath(TernlogError):
    pass


class KernelError(TernlogError):
    """Base class for proof-checking failures."""


class SideConditionViolated(KernelError):
    def __init__(self, rule: str, condition: str, symbol: str = ""):
        self.rule = rule
        self.condition = condition
        self.symbol = symbol
        msg = f"{rule}: side condition violated: {condition}"
        if symbol:
            msg += f" [{symbol}]"
        super().__init__(msg)


class SchemaMismatch(KernelError):
    def __init__(self, rule: str, detail: str):
        self.rule = rule
        self.detail = detail
        super().__init__(f"{rule}: {detail}")


class IsdefMismatch(KernelError):
    def __init__(self, rule: str, supplied: str, computed: str):
        self.rule = rule
        self.supplied = supplied
        self.computed = computed
        super().__init__(f"{rule}: supplied guard {supplied} is not the computed {computed}")


class StepFailed(KernelError):
    def __init__(self, index: int, cause: Exception):
        self.index = index
        self.cause = cause
        super().__init__(f"step {index}: {cause}")
