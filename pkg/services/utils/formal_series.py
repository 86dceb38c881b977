"""
Точные формальные ряды с линейными неизвестными.

LinearForm: константа плюс рациональная линейная комбинация неизвестных.
FormalSeries: разреженный полином по (x, u = sqrt(omega)) с коэффициентами
LinearForm; градуировка u_pow - x_pow аддитивна при умножении, порядок
omega^m соответствует градуировке 2m.
XiSeries: то же по (xi, u) с градуировкой по степени u.
"""

from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from services.errors import NonlinearTermError

__all__ = ("Coefficient", "LinearForm", "FormalSeries", "XiSeries", "Monomial")

Monomial = tuple[int, int]


class Coefficient(NamedTuple):
    """Имя неизвестной: family in {"alpha", "beta", "lambda", "h"}."""

    family: str
    k: int
    l: int

    def __str__(self) -> str:
        if self.family == "lambda":
            return f"lambda[{self.l}]"
        if self.family == "h":
            return f"h[{self.k}]"
        return f"{self.family}[{self.k},{self.l}]"

    @classmethod
    def alpha(cls, k: int, l: int) -> "Coefficient":
        return cls("alpha", k, l)

    @classmethod
    def beta(cls, k: int, l: int) -> "Coefficient":
        return cls("beta", k, l)

    @classmethod
    def eigenvalue(cls, l: int) -> "Coefficient":
        return cls("lambda", 0, l)

    @classmethod
    def hermite(cls, k: int) -> "Coefficient":
        return cls("h", k, 0)


_ZERO = Fraction(0)


class LinearForm:
    __slots__ = ("constant", "weights")

    def __init__(self, constant: Fraction | int = _ZERO, weights: Iterable[tuple[Coefficient, Fraction]] = ()):
        self.constant = Fraction(constant)
        self.weights: tuple[tuple[Coefficient, Fraction], ...] = tuple(
            sorted((name, Fraction(w)) for name, w in weights if w != 0)
        )

    @classmethod
    def _raw(cls, constant: Fraction, weights: tuple) -> "LinearForm":
        form = cls.__new__(cls)
        form.constant = constant
        form.weights = weights
        return form

    @classmethod
    def unknown(cls, name: Coefficient) -> "LinearForm":
        return cls._raw(_ZERO, ((name, Fraction(1)),))

    def is_zero(self) -> bool:
        return not self.weights and self.constant == 0

    def is_constant(self) -> bool:
        return not self.weights

    def unknowns(self) -> tuple[Coefficient, ...]:
        return tuple(name for name, _ in self.weights)

    def weight(self, name: Coefficient) -> Fraction:
        for key, value in self.weights:
            if key == name:
                return value
        return _ZERO

    def __add__(self, other: "LinearForm") -> "LinearForm":
        if not other.weights:
            return LinearForm._raw(self.constant + other.constant, self.weights)
        if not self.weights:
            return LinearForm._raw(self.constant + other.constant, other.weights)
        merged = dict(self.weights)
        for name, value in other.weights:
            merged[name] = merged.get(name, _ZERO) + value
        return LinearForm(self.constant + other.constant, merged.items())

    def __neg__(self) -> "LinearForm":
        return LinearForm._raw(-self.constant, tuple((name, -w) for name, w in self.weights))

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def scale(self, factor: Fraction | int) -> "LinearForm":
        if factor == 0:
            return LinearForm._raw(_ZERO, ())
        return LinearForm._raw(self.constant * factor, tuple((name, w * factor) for name, w in self.weights))

    def __mul__(self, other: "LinearForm") -> "LinearForm":
        if not self.weights:
            return other.scale(self.constant)
        if not other.weights:
            return self.scale(other.constant)
        raise NonlinearTermError(
            f"Произведение двух неизвестных: {self.unknowns()} x {other.unknowns()}",
            witness=(self.unknowns(), other.unknowns()),
        )

    def substitute(self, bindings: Mapping[Coefficient, Fraction]) -> "LinearForm":
        constant = self.constant
        remaining = []
        for name, w in self.weights:
            if name in bindings:
                constant += w * bindings[name]
            else:
                remaining.append((name, w))
        return LinearForm._raw(constant, tuple(remaining))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return not self.weights and self.constant == other
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.constant == other.constant and self.weights == other.weights

    def __hash__(self) -> int:
        return hash((self.constant, self.weights))

    def __repr__(self) -> str:
        parts = [str(self.constant)] if self.constant or not self.weights else []
        parts += [f"{w}*{name}" for name, w in self.weights]
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "constant": str(self.constant),
            "weights": {str(name): str(w) for name, w in self.weights},
        }


_ONE = LinearForm._raw(Fraction(1), ())


class FormalSeries:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, LinearForm] | None = None):
        self.terms: dict[Monomial, LinearForm] = {
            monomial: form for monomial, form in (terms or {}).items() if not form.is_zero()
        }

    @staticmethod
    def grade(monomial: Monomial) -> int:
        x_pow, u_pow = monomial
        return u_pow - x_pow

    @classmethod
    def constant(cls, value: Fraction | int = 1) -> "FormalSeries":
        return cls({(0, 0): LinearForm(value)})

    @classmethod
    def monomial(cls, monomial: Monomial, form: LinearForm | Fraction | int = 1) -> "FormalSeries":
        if not isinstance(form, LinearForm):
            form = LinearForm(form)
        return cls({monomial: form})

    def add_term(self, monomial: Monomial, form: LinearForm) -> None:
        current = self.terms.get(monomial)
        total = form if current is None else current + form
        if total.is_zero():
            self.terms.pop(monomial, None)
        else:
            self.terms[monomial] = total

    def coefficient(self, monomial: Monomial) -> LinearForm:
        return self.terms.get(monomial, LinearForm())

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "FormalSeries") -> "FormalSeries":
        result = type(self)(self.terms)
        for monomial, form in other.terms.items():
            result.add_term(monomial, form)
        return result

    def __neg__(self) -> "FormalSeries":
        return type(self)({monomial: -form for monomial, form in self.terms.items()})

    def __sub__(self, other: "FormalSeries") -> "FormalSeries":
        return self + (-other)

    def scale(self, factor: Fraction | int) -> "FormalSeries":
        return type(self)({monomial: form.scale(factor) for monomial, form in self.terms.items()})

    def shift(self, monomial: Monomial) -> "FormalSeries":
        dx, du = monomial
        return type(self)({(x + dx, u + du): form for (x, u), form in self.terms.items()})

    def truncated(self, max_grade: int) -> "FormalSeries":
        return type(self)({m: form for m, form in self.terms.items() if self.grade(m) <= max_grade})

    def components(self) -> dict[int, dict[Monomial, LinearForm]]:
        graded: dict[int, dict[Monomial, LinearForm]] = {}
        for monomial, form in self.terms.items():
            graded.setdefault(self.grade(monomial), {})[monomial] = form
        return graded

    def component(self, grade: int) -> dict[Monomial, LinearForm]:
        return {m: form for m, form in self.terms.items() if self.grade(m) == grade}

    def multiply(self, other: "FormalSeries", max_grade: int) -> "FormalSeries":
        result = type(self)()
        grade = self.grade
        right = [(m, grade(m), form) for m, form in other.terms.items()]
        for left_monomial, left_form in self.terms.items():
            left_grade = grade(left_monomial)
            for right_monomial, right_grade, right_form in right:
                if left_grade + right_grade > max_grade:
                    continue
                product = left_form * right_form
                if not product.is_zero():
                    result.add_term(
                        (left_monomial[0] + right_monomial[0], left_monomial[1] + right_monomial[1]),
                        product,
                    )
        return result

    def exp(self, max_grade: int) -> "FormalSeries":
        """exp(D) до градуировки max_grade: g F_g = sum_{i=1..g} i D_i F_{g-i}."""
        graded = self.components()
        if any(g <= 0 for g in graded):
            raise ValueError("Показатель экспоненты должен иметь положительную градуировку")
        levels: list[dict[Monomial, LinearForm]] = [{(0, 0): _ONE}]
        for g in range(1, max_grade + 1):
            accumulator: dict[Monomial, LinearForm] = {}
            for i, d_terms in graded.items():
                if i > g or not levels[g - i]:
                    continue
                for (dx, du), d_form in d_terms.items():
                    weighted = d_form.scale(i)
                    for (fx, fu), f_form in levels[g - i].items():
                        key = (dx + fx, du + fu)
                        product = weighted * f_form
                        current = accumulator.get(key)
                        accumulator[key] = product if current is None else current + product
            factor = Fraction(1, g)
            levels.append({m: form.scale(factor) for m, form in accumulator.items() if not form.is_zero()})
        merged: dict[Monomial, LinearForm] = {}
        for level in levels:
            merged.update(level)
        return type(self)(merged)

    def derivative(self) -> "FormalSeries":
        """Производная по первой переменной."""
        return type(self)(
            {(x - 1, u): form.scale(x) for (x, u), form in self.terms.items() if x > 0}
        )

    def substitute(self, bindings: Mapping[Coefficient, Fraction]) -> "FormalSeries":
        return type(self)({m: form.substitute(bindings) for m, form in self.terms.items()})

    def unknowns(self) -> list[Coefficient]:
        names = {name for form in self.terms.values() for name in form.unknowns()}
        return sorted(names)

    def items(self) -> list[tuple[Monomial, LinearForm]]:
        return sorted(self.terms.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        return f"{type(self).__name__}({len(self.terms)} terms)"


class XiSeries(FormalSeries):
    """Ряд по (xi, u); порядок omega^m соответствует u^(2m)."""

    __slots__ = ()

    @staticmethod
    def grade(monomial: Monomial) -> int:
        return monomial[1]
