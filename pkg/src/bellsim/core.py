"""Shared value types and the exact ±1 correlation estimator."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

PLUS = 1
MINUS = -1

# Angles are plain floats in radians; these helpers enforce the invariants
# without ever rewriting the value behind the caller's back.
Angle = float


def check_angle(theta: float, name: str = "angle") -> float:
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError(f"{name} must be finite, got {theta!r}")
    return theta


def normalize_angle(theta: float) -> float:
    """Map an angle onto [0, 2*pi). Never applied implicitly."""
    theta = check_angle(theta) % (2.0 * math.pi)
    # x % 2pi rounds up to exactly 2pi for tiny negative x
    return 0.0 if theta >= 2.0 * math.pi else theta


def check_spin(value: int, name: str = "spin") -> int:
    if value not in (PLUS, MINUS):
        raise ValueError(f"{name} must be +1 or -1, got {value!r}")
    return int(value)


def as_spin_array(values, name: str = "column") -> np.ndarray:
    """Return ``values`` as an int64 array after checking every entry is ±1."""
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)) or np.any(arr != np.round(arr)):
            raise ValueError(f"{name} contains non-integer entries")
    elif arr.dtype.kind not in "iub":
        raise ValueError(f"{name} must hold integers, got dtype {arr.dtype}")
    arr = arr.astype(np.int64, copy=False)
    bad = (arr != PLUS) & (arr != MINUS)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise ValueError(f"{name}[{i}] = {arr[i]} is not +1 or -1")
    return arr


class LengthMismatchError(ValueError):
    """Raised when outcome lists that must be aligned differ in length."""


class InternalConsistencyError(RuntimeError):
    """An arithmetic identity that must hold for any ±1 data did not.

    This never describes the data; it means the auditing code is broken.
    """


@dataclass(frozen=True)
class HiddenVariables:
    lambda1: float
    lambda2: float

    def __post_init__(self):
        for name in ("lambda1", "lambda2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    hv: HiddenVariables
    a: int
    b: int
    b_prime: int


@dataclass(frozen=True)
class ChainRecord:
    trial: int
    s0: int
    s1: int
    s2: int

    def __post_init__(self):
        for name in ("s0", "s1", "s2"):
            check_spin(getattr(self, name), name)


@dataclass(frozen=True)
class DataColumns:
    """Aligned, named lists of ±1 outcomes."""

    names: tuple[str, ...]
    columns: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.names) != len(self.columns):
            raise ValueError("one name is required per column")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate column names in {self.names}")
        if not self.columns:
            raise ValueError("at least one column is required")
        cols = tuple(as_spin_array(c, n) for n, c in zip(self.names, self.columns))
        lengths = {len(c) for c in cols}
        if len(lengths) != 1:
            raise LengthMismatchError(f"column lengths differ: {sorted(lengths)}")
        if 0 in lengths:
            raise ValueError("columns must be nonempty")
        object.__setattr__(self, "columns", cols)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Sequence[int]]) -> "DataColumns":
        return cls(tuple(data), tuple(data.values()))

    @property
    def length(self) -> int:
        return len(self.columns[0])

    def __len__(self) -> int:
        return len(self.columns)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[self.names.index(name)]


class CorrelationSource(str, enum.Enum):
    EMPIRICAL = "empirical"
    ANALYTIC_NONSTATIONARY = "analytic-nonstationary"
    STATIONARY_ASSUMED = "stationary-assumed"


@dataclass(frozen=True)
class CorrelationSet:
    pairs: dict[tuple[str, str], float]
    source: CorrelationSource
    tolerance: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "source", CorrelationSource(self.source))
        for key, value in self.pairs.items():
            if not -1.0 - self.tolerance <= value <= 1.0 + self.tolerance:
                raise ValueError(f"correlation {key} = {value} outside [-1, 1]")

    def __getitem__(self, key: tuple[str, str]) -> float:
        try:
            return self.pairs[key]
        except KeyError:
            return self.pairs[(key[1], key[0])]


class InequalityForm(str, enum.Enum):
    BELL3 = "bell3"
    CHSH4 = "chsh4"
    CH = "ch"


# Audit tolerances: integer list audits are exact, real-valued ones are not.
EXACT_TOLERANCE = 0.0
REAL_TOLERANCE = 1e-9


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of checking ``lhs <= bound``; ``margin`` is ``bound - lhs``."""

    form: InequalityForm
    lhs: float
    bound: float
    margin: float
    satisfied: bool
    tolerance: float = field(default=REAL_TOLERANCE)

    def __post_init__(self):
        object.__setattr__(self, "form", InequalityForm(self.form))

    @classmethod
    def upper_bound(cls, form, lhs: float, bound: float,
                    tolerance: float = REAL_TOLERANCE) -> "InequalityReport":
        margin = bound - lhs
        return cls(form, float(lhs), float(bound), float(margin),
                   bool(margin >= -tolerance), tolerance)

    @property
    def violated(self) -> bool:
        return not self.satisfied

    def as_dict(self) -> dict:
        return {
            "form": self.form.value,
            "lhs": self.lhs,
            "bound": self.bound,
            "margin": self.margin,
            "satisfied": self.satisfied,
        }


def format_real(x: float) -> str:
    """17 significant digits: enough for any double to round-trip."""
    return format(float(x), ".17g")


def format_spin(s: int) -> str:
    return "+1" if s > 0 else "-1"


def parse_spin(text: str) -> int:
    value = {"+1": PLUS, "1": PLUS, "-1": MINUS}.get(text.strip())
    if value is None:
        raise ValueError(f"expected +1 or -1, got {text!r}")
    return value


def correlation_sum(x, y) -> int:
    """Integer sum of elementwise products of two aligned ±1 lists."""
    x = as_spin_array(x, "x")
    y = as_spin_array(y, "y")
    if len(x) != len(y):
        raise LengthMismatchError(f"lengths differ: {len(x)} != {len(y)}")
    if len(x) == 0:
        raise ValueError("correlation of empty lists is undefined")
    return int(np.dot(x, y))


def correlation_estimate(x, y) -> float:
    """Finite-sample correlation (1/N) * sum(x_i * y_i) of two ±1 lists.

    The products are summed as integers and divided once, so the result
    is the exact ratio rounded to the nearest double.
    """
    total = correlation_sum(x, y)
    return total / len(x)
