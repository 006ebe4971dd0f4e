"""Exception hierarchy shared by every module."""


class IologError(Exception):
    """Base class for all engine errors."""


class FormulaSyntaxError(IologError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class LabelError(IologError, ValueError):
    """Labeling an already labeled formula."""


class UndeclaredAtomError(IologError, KeyError):
    def __init__(self, atom: str):
        super().__init__(atom)
        self.atom = atom

    def __str__(self) -> str:
        return f"atom '{self.atom}' is not declared in the valuation"


class DimacsFormatError(IologError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


class TheoryFormatError(IologError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


class UnknownLogicError(IologError, ValueError):
    pass


class CapExceededError(IologError):
    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: {size} premise pairs exceeds the cap of {cap}")
        self.size = size
        self.cap = cap


class NestedModalityError(IologError, ValueError):
    pass


class ExternalSolverError(IologError, RuntimeError):
    pass


class CertificateFormatError(IologError, ValueError):
    pass
