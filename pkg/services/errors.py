__all__ = (
    "DhoError",
    "InvalidInputError",
    "OutOfTableError",
    "TruncationTooSmallError",
    "NumericalFailureError",
    "InconsistentSystemError",
    "UnderdeterminedSystemError",
    "NonlinearTermError",
    "VerificationFailureError",
)


class DhoError(Exception):
    """Базовая ошибка вычислительного ядра. exit_code уходит в CLI как код возврата."""

    exit_code = 3


class InvalidInputError(DhoError, ValueError):
    exit_code = 1


class OutOfTableError(DhoError, LookupError):
    """Запрошенный коэффициент отсутствует в таблицах (не ошибка ввода)."""

    exit_code = 2

    def __init__(self, message: str, *, family: str = "", n: int | None = None, order: int | None = None):
        super().__init__(message)
        self.family = family
        self.n = n
        self.order = order


class TruncationTooSmallError(InvalidInputError):
    def __init__(self, message: str, *, j0: int, boundary_ratio: float):
        super().__init__(message)
        self.j0 = j0
        self.boundary_ratio = boundary_ratio


class NumericalFailureError(DhoError, ArithmeticError):
    exit_code = 3


class InconsistentSystemError(DhoError):
    """Система уравнений порядка несовместна: ошибка реализации или опечатка в таблицах."""

    exit_code = 4

    def __init__(self, message: str, *, witness: object = None):
        super().__init__(message)
        self.witness = witness


class UnderdeterminedSystemError(InconsistentSystemError):
    pass


class NonlinearTermError(InconsistentSystemError):
    pass


class VerificationFailureError(DhoError):
    exit_code = 4

    def __init__(self, message: str, *, failures: list | None = None):
        super().__init__(message)
        self.failures = failures or []
