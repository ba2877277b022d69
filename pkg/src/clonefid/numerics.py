"""Numeric backends: exact rationals and log-domain floats.

Every closed-form coefficient in :mod:`clonefid.cloner` can be evaluated
either exactly (``fractions.Fraction``) or in the log domain (``float``
magnitudes combined with log-sum-exp and compensated summation).  The exact
backend anchors correctness; the log backend reaches figure-scale sizes.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import DomainError

__all__ = [
    "BACKENDS",
    "EXACT_MAX_M",
    "ExactScalar",
    "LogScalar",
    "LogFactorialCache",
    "binomial",
    "compensated_sum",
    "log_binomial",
    "log_factorial",
    "resolve_backend",
]

ExactScalar = Fraction

BACKENDS = ("exact", "log", "auto")

#: largest M for which ``backend="auto"`` picks exact arithmetic
EXACT_MAX_M = 200

_EXACT_FACTORIAL_TABLE = tuple(math.factorial(k) for k in range(21))


def resolve_backend(backend: str, M: int) -> str:
    """Map ``"auto"`` to a concrete backend for an output size ``M``."""
    if backend == "auto":
        return "exact" if M <= EXACT_MAX_M else "log"
    if backend not in ("exact", "log"):
        raise DomainError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    return backend


@dataclass(frozen=True, order=False)
class LogScalar:
    """Nonnegative real stored as ``(is_zero, log|x|)``.

    Only zero and positive values occur in this package (probabilities,
    weights, factorials), so the sign is a zero flag.
    """

    log: float = -math.inf

    @classmethod
    def zero(cls) -> "LogScalar":
        return cls(-math.inf)

    @classmethod
    def one(cls) -> "LogScalar":
        return cls(0.0)

    @classmethod
    def from_value(cls, x: float) -> "LogScalar":
        if x < 0:
            raise DomainError("LogScalar carries nonnegative values only")
        return cls(math.log(x)) if x > 0 else cls.zero()

    @property
    def is_zero(self) -> bool:
        return self.log == -math.inf

    def __float__(self) -> float:
        return 0.0 if self.is_zero else math.exp(self.log)

    def __mul__(self, other: "LogScalar") -> "LogScalar":
        if self.is_zero or other.is_zero:
            return LogScalar.zero()
        return LogScalar(self.log + other.log)

    def __truediv__(self, other: "LogScalar") -> "LogScalar":
        if other.is_zero:
            raise ZeroDivisionError("division by LogScalar zero")
        if self.is_zero:
            return LogScalar.zero()
        return LogScalar(self.log - other.log)

    def __add__(self, other: "LogScalar") -> "LogScalar":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        hi, lo = (self.log, other.log) if self.log >= other.log else (other.log, self.log)
        return LogScalar(hi + math.log1p(math.exp(lo - hi)))


class LogFactorialCache:
    """Prefix sums of ``ln k`` giving ``ln(a!)`` by table lookup.

    The table grows lazily (under a lock) up to ``cap`` entries; past the cap
    ``math.lgamma`` is used.  Prefix sums are accumulated with Neumaier
    compensation so each entry is accurate to a few ulps.
    """

    def __init__(self, cap: int = 10**6):
        self.cap = int(cap)
        self._table = [0.0, 0.0]  # ln 0!, ln 1!
        # running Neumaier state: true prefix sum ~= _s + _c
        self._s = 0.0
        self._c = 0.0
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._table)

    def _grow(self, upto: int) -> None:
        with self._lock:
            table = self._table
            if upto < len(table):
                return
            target = min(self.cap, max(upto, 2 * len(table)))
            s, c = self._s, self._c
            log = math.log
            for k in range(len(table), target + 1):
                x = log(k)
                t = s + x
                if abs(s) >= abs(x):
                    c += (s - t) + x
                else:
                    c += (x - t) + s
                s = t
                table.append(s + c)
            self._s, self._c = s, c

    def __call__(self, a: int) -> float:
        if a < 0:
            raise DomainError(f"factorial of negative integer {a}")
        if a <= 20:
            return math.log(_EXACT_FACTORIAL_TABLE[a]) if a > 1 else 0.0
        if a > self.cap:
            return math.lgamma(a + 1)
        if a >= len(self._table):
            self._grow(a)
        return self._table[a]


_default_cache = LogFactorialCache()


def log_factorial(a: int) -> LogScalar:
    """``a!`` as a :class:`LogScalar`; ``log_factorial(a).log == ln(a!)``."""
    return LogScalar(_default_cache(int(a)))


def binomial(a: int, b: int) -> Fraction:
    """Exact binomial coefficient ``C(a, b)``, zero when ``b`` is outside ``[0, a]``."""
    if a < 0:
        raise DomainError(f"binomial with negative top index {a}")
    if b < 0 or b > a:
        return Fraction(0)
    return Fraction(math.comb(a, b))


def log_binomial(a: int, b: int) -> LogScalar:
    """``C(a, b)`` in the log domain; zero when ``b`` is outside ``[0, a]``."""
    if a < 0:
        raise DomainError(f"binomial with negative top index {a}")
    if b < 0 or b > a:
        return LogScalar.zero()
    if b == 0 or b == a:
        return LogScalar.one()
    f = _default_cache
    return LogScalar(f(a) - f(b) - f(a - b))


def compensated_sum(terms: Iterable[Union[LogScalar, float]]) -> float:
    """Sum floats (or :class:`LogScalar` values) with error-free accumulation.

    Backed by :func:`math.fsum`, which returns the correctly rounded sum and
    so satisfies any Kahan/Neumaier error contract.
    """
    return math.fsum(float(t) for t in terms)
