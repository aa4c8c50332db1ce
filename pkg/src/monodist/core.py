"""Hypercube geometry, Boolean-function representations, and the two-phase
query oracle that enforces nonadaptivity structurally.

Conventions, fixed across the whole package:

* A point of {0,1}^n is a plain unsigned integer index.  Dimension i
  (1-based, 1 <= i <= n) is bit i-1 of the index, little-endian.
* Function values are 0, 1, or erased.  Erased is the first-class third
  value `BOT` (stored as 2 in truth tables, written as '?' on disk).
* Truth-table backing is capped at n <= 24 (2^24 values in memory);
  closed-form rule backing at n <= 63 (a point fits one machine word).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

BOT = 2  # erased function value
TABLE_N_CAP = 24
RULE_N_CAP = 63

_CHAR_FOR_VALUE = {0: "0", 1: "1", BOT: "?"}
_VALUE_FOR_CHAR = {"0": 0, "1": 1, "?": BOT}


class ProtocolViolationError(RuntimeError):
    """A nonadaptive oracle was asked to answer a second batch."""


class ResourceCapError(RuntimeError):
    """An exact computation was requested beyond its configured size cap."""


class ErasedValueError(ValueError):
    """An operation that requires a total function hit an erased value."""


class TableFormatError(ValueError):
    """Malformed truth-table file; carries 1-based line and 0-based offset."""

    def __init__(self, message: str, line: int, offset: int = 0):
        super().__init__(f"line {line}, offset {offset}: {message}")
        self.line = line
        self.offset = offset


def flip(x: int, i: int, n: int) -> int:
    """Complement coordinate i of x.  Involutive: flip(flip(x,i)) == x."""
    _check_dim(i, n)
    return x ^ (1 << (i - 1))


def set_bit(x: int, i: int, b: int, n: int) -> int:
    """Force coordinate i of x to bit b.  Idempotent."""
    _check_dim(i, n)
    if b not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {b}")
    if b:
        return x | (1 << (i - 1))
    return x & ~(1 << (i - 1))


def weight(x: int) -> int:
    """Hamming weight |x| (population count)."""
    return int(x).bit_count()


def restrict_weight(x: int, dims: Iterable[int]) -> int:
    """Weight of x restricted to the given dimension set."""
    return (x & dims_to_mask(dims)).bit_count()


def dims_to_mask(dims: Iterable[int]) -> int:
    """Bitmask with bit i-1 set for each dimension i in dims."""
    mask = 0
    for i in dims:
        mask |= 1 << (i - 1)
    return mask


def mask_to_dims(mask: int) -> tuple[int, ...]:
    """Sorted tuple of 1-based dimensions in a bitmask."""
    dims = []
    i = 1
    while mask:
        if mask & 1:
            dims.append(i)
        mask >>= 1
        i += 1
    return tuple(dims)


def _check_dim(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise ValueError(f"dimension {i} out of range [1, {n}]")


@dataclass(frozen=True)
class Func:
    """A Boolean function on {0,1}^n with possibly erased values.

    Backed either by a dense int8 truth table (values 0/1/BOT) or by a pure
    vectorized rule mapping int64 point arrays to value arrays.  Funcs are
    immutable after construction and safe to evaluate concurrently.
    """

    n: int
    table: Optional[np.ndarray] = None
    rule: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = ""
    params: tuple = ()
    rule_total: bool = True
    _total_cache: list = field(default_factory=list, repr=False, compare=False)

    @staticmethod
    def from_table(values, n: Optional[int] = None, name: str = "", params: tuple = ()) -> "Func":
        arr = np.array(values, dtype=np.int8, copy=True)
        if n is None:
            n = int(arr.size).bit_length() - 1
        if n < 1 or n > TABLE_N_CAP:
            raise ResourceCapError(f"truth-table backing requires 1 <= n <= {TABLE_N_CAP}, got {n}")
        if arr.size != 1 << n:
            raise ValueError(f"table length {arr.size} != 2^{n}")
        if not np.isin(arr, (0, 1, BOT)).all():
            raise ValueError("table values must be 0, 1, or BOT")
        arr.flags.writeable = False
        return Func(n=n, table=arr, name=name, params=params)

    @staticmethod
    def from_rule(n: int, rule: Callable[[np.ndarray], np.ndarray], name: str = "",
                  params: tuple = (), total: bool = True) -> "Func":
        if n < 1 or n > RULE_N_CAP:
            raise ResourceCapError(f"rule backing requires 1 <= n <= {RULE_N_CAP}, got {n}")
        return Func(n=n, rule=rule, name=name, params=params, rule_total=total)

    def value(self, x: int) -> int:
        """Evaluate at a single point; deterministic per the backing."""
        if self.table is not None:
            return int(self.table[x])
        return int(self.rule(np.asarray([x], dtype=np.int64))[0])

    def values(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized evaluation at an int64 array of points."""
        xs = np.asarray(xs, dtype=np.int64)
        if self.table is not None:
            return self.table[xs]
        return np.asarray(self.rule(xs), dtype=np.int8)

    @property
    def is_total(self) -> bool:
        """True iff the function has no erased values."""
        if self.table is None:
            return self.rule_total
        if not self._total_cache:
            self._total_cache.append(not bool((self.table == BOT).any()))
        return self._total_cache[0]

    def require_total(self, what: str = "operation") -> None:
        if not self.is_total:
            raise ErasedValueError(f"{what} requires a total function, but {self.label} has erased values")

    def materialize(self) -> "Func":
        """Return an equivalent truth-table-backed Func (n <= 24 only)."""
        if self.table is not None:
            return self
        if self.n > TABLE_N_CAP:
            raise ResourceCapError(f"cannot materialize n={self.n} > {TABLE_N_CAP}")
        xs = np.arange(1 << self.n, dtype=np.int64)
        return Func.from_table(self.values(xs), self.n, name=self.name, params=self.params)

    @property
    def label(self) -> str:
        if self.params:
            inner = ",".join(str(p) for p in self.params)
            return f"{self.name or 'func'}({inner})"
        return self.name or "func"


class QueryOracle:
    """Query-counting, two-phase (batch-then-answer) access to a Func.

    All queries of a nonadaptive run are submitted in one batch; answering
    freezes the oracle, and a second batch raises ProtocolViolationError as
    structural evidence of adaptivity.  The query log never depends on the
    answers, so query_count is a function of the caller's seed alone.
    """

    def __init__(self, func: Func):
        self.func = func
        self._queries: Optional[np.ndarray] = None
        self._answers: Optional[np.ndarray] = None

    @property
    def phase(self) -> str:
        return "collecting" if self._queries is None else "answered"

    def batch_query(self, points) -> np.ndarray:
        if self._queries is not None:
            raise ProtocolViolationError(
                "batch_query called twice on one oracle: queries after answers are adaptive")
        pts = np.asarray(points, dtype=np.int64)
        if pts.ndim != 1:
            pts = pts.ravel()
        if pts.size and (pts.min() < 0 or pts.max() >= (1 << self.func.n)):
            raise ValueError("query point out of range for this function's dimension")
        self._queries = pts
        self._answers = self.func.values(pts) if pts.size else np.empty(0, dtype=np.int8)
        return self._answers

    @property
    def query_count(self) -> int:
        return 0 if self._queries is None else int(self._queries.size)

    @property
    def query_log(self) -> np.ndarray:
        return np.empty(0, dtype=np.int64) if self._queries is None else self._queries

    @property
    def answer_log(self) -> np.ndarray:
        if self._answers is None:
            raise ProtocolViolationError("answers are not readable while phase is 'collecting'")
        return self._answers


def save_table(func: Func, path: str) -> None:
    """Write the shared truth-table format: `n=<int>` then 2^n chars of 0/1/?."""
    f = func.materialize()
    chars = np.array(["0", "1", "?"], dtype="U1")[f.table]
    with open(path, "w") as fh:
        fh.write(f"n={f.n}\n")
        fh.write("".join(chars))
        fh.write("\n")


def load_table(path: str, name: str = "") -> Func:
    """Parse the truth-table format, reporting line/offset on malformed input."""
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("n="):
            raise TableFormatError("expected header 'n=<int>'", line=1)
        try:
            n = int(header[2:].strip())
        except ValueError:
            raise TableFormatError(f"bad dimension {header[2:].strip()!r}", line=1, offset=2) from None
        if n < 1 or n > TABLE_N_CAP:
            raise TableFormatError(f"dimension {n} outside [1, {TABLE_N_CAP}]", line=1, offset=2)
        body = fh.readline().rstrip("\n")
        if len(body) != 1 << n:
            raise TableFormatError(f"expected 2^{n} = {1 << n} values, got {len(body)}",
                                   line=2, offset=len(body))
        values = np.empty(1 << n, dtype=np.int8)
        for off, ch in enumerate(body):
            v = _VALUE_FOR_CHAR.get(ch)
            if v is None:
                raise TableFormatError(f"invalid value character {ch!r}", line=2, offset=off)
            values[off] = v
    return Func.from_table(values, n, name=name or path)
