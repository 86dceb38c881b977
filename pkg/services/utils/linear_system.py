from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from services.errors import InconsistentSystemError, UnderdeterminedSystemError
from services.utils.formal_series import Coefficient, LinearForm

__all__ = ("LinearSystem",)


def _normalised(row: list[int]) -> list[int]:
    divisor = 0
    for value in row:
        divisor = gcd(divisor, value)
    if divisor > 1:
        return [value // divisor for value in row]
    return row


@dataclass
class LinearSystem:
    """Уравнения вида form = 0; неизвестные упорядочены лексикографически."""

    equations: list[LinearForm]
    unknowns: tuple[Coefficient, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.unknowns:
            names = {name for form in self.equations for name in form.unknowns()}
            self.unknowns = tuple(sorted(names))

    @classmethod
    def from_forms(cls, forms: Sequence[LinearForm], unknowns: Sequence[Coefficient] = ()) -> "LinearSystem":
        return cls([form for form in forms if not form.is_zero()], tuple(sorted(unknowns)))

    def _integer_rows(self) -> list[list[int]]:
        rows = []
        for form in self.equations:
            stray = set(form.unknowns()) - set(self.unknowns)
            if stray:
                raise InconsistentSystemError(
                    f"Уравнение содержит неизвестные вне системы: {sorted(map(str, stray))}",
                    witness=form,
                )
            values = [form.weight(name) for name in self.unknowns] + [-form.constant]
            scale = 1
            for value in values:
                scale = lcm(scale, value.denominator)
            rows.append(_normalised([int(value * scale) for value in values]))
        return rows

    def solve(self) -> dict[Coefficient, Fraction]:
        """Гаусс-Жордан без дробей; ведущий элемент ищется по порядку неизвестных."""
        rows = self._integer_rows()
        width = len(self.unknowns)
        pivots: list[tuple[int, int]] = []
        rank = 0
        for column, name in enumerate(self.unknowns):
            pivot_row = next((r for r in range(rank, len(rows)) if rows[r][column] != 0), None)
            if pivot_row is None:
                raise UnderdeterminedSystemError(f"Неизвестная {name} не закреплена системой", witness=name)
            rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
            pivot = rows[rank]
            for r in range(len(rows)):
                if r == rank or rows[r][column] == 0:
                    continue
                factor = rows[r][column]
                rows[r] = _normalised(
                    [pivot[column] * value - factor * pivot_value for value, pivot_value in zip(rows[r], pivot)]
                )
            pivots.append((rank, column))
            rank += 1
        for r in range(rank, len(rows)):
            if rows[r][width] != 0:
                raise InconsistentSystemError(
                    f"Несовместное уравнение: 0 = {rows[r][width]}",
                    witness=rows[r],
                )
        return {self.unknowns[column]: Fraction(rows[r][width], rows[r][column]) for r, column in pivots}
