"""
Divisible aggregation algebra.

Every collection strategy is parameterized over an ``Aggregation``: an
associative, commutative ``combine`` with an identity, an even split
``split_even`` (v ⊘ n) and a fractional extraction ``scale`` (v ⊗ k).
Sum-like kinds divide arithmetically; idempotent kinds (min, max) divide
by identity.
"""

import math
from abc import ABC, abstractmethod
from enum import Enum
from typing import Dict, Iterable, Union


class AggregationKind(str, Enum):
    """Built-in aggregation tags."""

    SUM = "sum"
    MIN = "min"
    MAX = "max"


class AggregationDomainError(ValueError):
    """Raised when a value or operand is outside an aggregation's domain."""
    pass


class Aggregation(ABC):
    """Base class for divisible aggregations."""

    kind: AggregationKind
    identity: float

    def validate(self, value: float) -> float:
        """Return ``value`` as float, rejecting NaN."""
        value = float(value)
        if math.isnan(value):
            raise AggregationDomainError(f"{self.kind.value}: NaN is not a valid value")
        return value

    @abstractmethod
    def combine(self, a: float, b: float) -> float:
        """Return a ⊕ b."""

    @abstractmethod
    def split_even(self, value: float, n: int) -> float:
        """Return v ⊘ n: combining the result with itself n times gives v."""

    @abstractmethod
    def scale(self, value: float, k: float) -> float:
        """Return v ⊗ k, the fraction k of v."""

    def fold(self, values: Iterable[float]) -> float:
        """Combine any number of values, starting from the identity."""
        result = self.identity
        for value in values:
            result = self.combine(result, value)
        return result

    def __repr__(self) -> str:
        return f"<{type(self).__name__} identity={self.identity}>"


def _check_parts(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise AggregationDomainError(f"split count must be a positive integer, got {n!r}")


def _check_fraction(k: float) -> None:
    if not (0.0 <= k <= 1.0):
        raise AggregationDomainError(f"extraction fraction must lie in [0, 1], got {k!r}")


class SumAggregation(Aggregation):
    """Arithmetic sum; divisible by division."""

    kind = AggregationKind.SUM
    identity = 0.0

    def validate(self, value: float) -> float:
        value = super().validate(value)
        if math.isinf(value):
            raise AggregationDomainError(f"sum: non-finite value {value!r}")
        return value

    def combine(self, a: float, b: float) -> float:
        return self.validate(a) + self.validate(b)

    def split_even(self, value: float, n: int) -> float:
        _check_parts(n)
        return self.validate(value) / n

    def scale(self, value: float, k: float) -> float:
        _check_fraction(k)
        return self.validate(value) * k


class _IdempotentAggregation(Aggregation):
    """Idempotent kinds: splitting and extraction leave the value unchanged."""

    def split_even(self, value: float, n: int) -> float:
        _check_parts(n)
        return self.validate(value)

    def scale(self, value: float, k: float) -> float:
        _check_fraction(k)
        return self.validate(value)


class MinAggregation(_IdempotentAggregation):
    kind = AggregationKind.MIN
    identity = math.inf

    def combine(self, a: float, b: float) -> float:
        return min(self.validate(a), self.validate(b))


class MaxAggregation(_IdempotentAggregation):
    kind = AggregationKind.MAX
    identity = -math.inf

    def combine(self, a: float, b: float) -> float:
        return max(self.validate(a), self.validate(b))


_REGISTRY: Dict[str, Aggregation] = {
    AggregationKind.SUM.value: SumAggregation(),
    AggregationKind.MIN.value: MinAggregation(),
    AggregationKind.MAX.value: MaxAggregation(),
}

KindLike = Union[Aggregation, AggregationKind, str]


def register_aggregation(aggregation: Aggregation, name: str) -> None:
    """Make an additional aggregation resolvable by ``get_aggregation(name)``."""
    if name in _REGISTRY:
        raise ValueError(f"aggregation {name!r} is already registered")
    _REGISTRY[name] = aggregation


def get_aggregation(kind: KindLike) -> Aggregation:
    """
    Resolve an aggregation from an instance, enum tag or plain name.

    Examples:
        >>> get_aggregation("sum").combine(3, 4)
        7.0
        >>> get_aggregation(AggregationKind.MIN).identity
        inf
    """
    if isinstance(kind, Aggregation):
        return kind
    name = kind.value if isinstance(kind, AggregationKind) else str(kind)
    try:
        return _REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown aggregation kind {name!r}") from None


def identity(kind: KindLike) -> float:
    return get_aggregation(kind).identity


def combine(kind: KindLike, a: float, b: float) -> float:
    return get_aggregation(kind).combine(a, b)


def split_even(kind: KindLike, value: float, n: int) -> float:
    return get_aggregation(kind).split_even(value, n)


def scale(kind: KindLike, value: float, k: float) -> float:
    return get_aggregation(kind).scale(value, k)
