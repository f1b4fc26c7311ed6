"""
Convex polyhedra represented by linear constraints only, over exact
rationals. Variables are positive integers, written ``x<k>``.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from rtlcheck.errors import UsageError

Rational = Fraction | int


def _as_fraction(q: Rational | str) -> Fraction:
    if isinstance(q, bool) or isinstance(q, float):
        raise UsageError(f"coefficients are exact rationals, got {q!r}")
    return Fraction(q)


@dataclass(frozen=True)
class Constraint:
    """
    The inequality ``sum(coeffs[v] * x_v) <= bound``.

    ``coeffs`` holds no zero coefficient and is sorted by variable, so equal
    constraints compare and hash equal.
    """

    coeffs: tuple[tuple[int, Fraction], ...]
    bound: Fraction

    @classmethod
    def of(cls, coeffs: Mapping[int, Rational | str], bound: Rational | str) -> "Constraint":
        """
        Examples
        --------
        >>> print(Constraint.of({1: 1, 2: -1}, 2))
        x1 - x2 <= 2
        """
        items = []
        for v, q in sorted(coeffs.items()):
            if v < 1:
                raise UsageError(f"variables are positive, got x{v}")
            q = _as_fraction(q)
            if q != 0:
                items.append((v, q))
        return cls(tuple(items), _as_fraction(bound))

    @property
    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.coeffs)

    def coeff(self, v: int) -> Fraction:
        return self.as_dict.get(v, Fraction(0))

    @property
    def variables(self) -> set[int]:
        return {v for v, _ in self.coeffs}

    def scale(self, factor: Rational) -> "Constraint":
        factor = _as_fraction(factor)
        return Constraint.of({v: q * factor for v, q in self.coeffs}, self.bound * factor)

    def __add__(self, other: "Constraint") -> "Constraint":
        coeffs = self.as_dict
        for v, q in other.coeffs:
            coeffs[v] = coeffs.get(v, Fraction(0)) + q
        return Constraint.of(coeffs, self.bound + other.bound)

    def satisfied_by(self, point: Mapping[int, Rational]) -> bool:
        """The point gives a value to every variable of the constraint."""
        return sum(q * point[v] for v, q in self.coeffs) <= self.bound

    def __str__(self) -> str:
        terms = []
        for v, q in self.coeffs:
            sign = "-" if q < 0 else "+"
            mag = abs(q)
            text = f"x{v}" if mag == 1 else f"{mag}*x{v}"
            terms.append((sign, text))
        if not terms:
            lhs = "0"
        else:
            first_sign, first = terms[0]
            lhs = ("-" if first_sign == "-" else "") + first
            lhs += "".join(f" {sign} {text}" for sign, text in terms[1:])
        return f"{lhs} <= {self.bound}"


@dataclass(frozen=True)
class Polyhedron:
    """Conjunction of constraints, referred to by their position."""

    constraints: tuple[Constraint, ...]

    @classmethod
    def of(cls, constraints: Iterable[Constraint]) -> "Polyhedron":
        return cls(tuple(constraints))

    def __len__(self) -> int:
        return len(self.constraints)

    def __getitem__(self, i: int) -> Constraint:
        return self.constraints[i]

    def __iter__(self):
        return iter(self.constraints)

    @property
    def variables(self) -> set[int]:
        result: set[int] = set()
        for c in self.constraints:
            result |= c.variables
        return result

    def contains(self, point: Mapping[int, Rational]) -> bool:
        return all(c.satisfied_by(point) for c in self.constraints)

    def __str__(self) -> str:
        return "\n".join(f"{i}: {c}" for i, c in enumerate(self.constraints))


@dataclass(frozen=True)
class FarkasCert:
    """
    Nonnegative multipliers of the constraints of a polyhedron, by index.
    Zero multipliers are not stored.
    """

    lambdas: tuple[tuple[int, Fraction], ...]

    @classmethod
    def of(cls, lambdas: Mapping[int, Rational | str]) -> "FarkasCert":
        """
        Raises
        ------
        UsageError
            on a negative multiplier or index
        """
        items = []
        for i, q in sorted(lambdas.items()):
            q = _as_fraction(q)
            if i < 0:
                raise UsageError(f"constraint indices are nonnegative, got {i}")
            if q < 0:
                raise UsageError(f"Farkas multipliers are nonnegative, got {q} for {i}")
            if q != 0:
                items.append((i, q))
        return cls(tuple(items))

    @classmethod
    def unit(cls, i: int) -> "FarkasCert":
        return cls.of({i: 1})

    @property
    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.lambdas)

    def __str__(self) -> str:
        return "(" + ", ".join(f"{i}: {q}" for i, q in self.lambdas) + ")"
