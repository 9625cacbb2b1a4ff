"""Discrete joint distributions over named categorical variables.

The state space is the full cartesian product of the variable levels, stored
as a dense row-major probability table (last variable varies fastest).  All
values are immutable after construction and every operation is a pure
function, so instances can be shared freely between threads.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import InitVar, dataclass, field
from typing import IO, Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import DomainError, EmptyDataError, ParseError, SchemaError

#: Largest permitted state count; schemas beyond this are rejected up front.
DEFAULT_STATE_CAP = 2**24

#: Tolerance for the probability-sum check on construction.
SUM_TOL = 1e-9


@dataclass(frozen=True)
class Schema:
    """Ordered list of (name, cardinality) pairs defining a state space.

    Names must be unique and every cardinality must be at least 2; a
    cardinality-1 variable is a constant and is rejected as degenerate.
    The total state count is bounded by ``max_states`` (2**24 by default).
    """

    variables: tuple[tuple[str, int], ...]
    max_states: InitVar[int] = DEFAULT_STATE_CAP

    def __post_init__(self, max_states: int):
        object.__setattr__(self, "variables", tuple((str(n), int(c)) for n, c in self.variables))
        names = [n for n, _ in self.variables]
        if not names:
            raise SchemaError("schema needs at least one variable")
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise SchemaError(f"duplicate variable names: {dup}")
        for n, c in self.variables:
            if c < 2:
                raise SchemaError(f"variable {n!r} has cardinality {c}; need >= 2")
        size = 1
        for _, c in self.variables:
            size *= c
            if size > max_states:
                raise SchemaError(f"state space exceeds cap of {max_states} states")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.variables)

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return tuple(c for _, c in self.variables)

    def __len__(self) -> int:
        return len(self.variables)

    @property
    def n_states(self) -> int:
        size = 1
        for _, c in self.variables:
            size *= c
        return size

    def index_of(self, state: Sequence[int]) -> int:
        """Row-major index of a state tuple (last variable fastest)."""
        if len(state) != len(self.variables):
            raise DomainError(f"state has {len(state)} entries, schema has {len(self.variables)}")
        idx = 0
        for x, (name, c) in zip(state, self.variables):
            if not 0 <= x < c:
                raise DomainError(f"level {x} out of range for variable {name!r} (cardinality {c})")
            idx = idx * c + x
        return idx

    def state_of(self, index: int) -> tuple[int, ...]:
        """Inverse of :meth:`index_of`."""
        if not 0 <= index < self.n_states:
            raise DomainError(f"state index {index} out of range")
        out = []
        for c in reversed(self.cardinalities):
            out.append(index % c)
            index //= c
        return tuple(reversed(out))

    def states(self) -> Iterator[tuple[int, ...]]:
        """All state tuples in index order."""
        return itertools.product(*(range(c) for c in self.cardinalities))

    def restrict(self, subset: Sequence[int]) -> "Schema":
        """Sub-schema over the given variable indices, kept in original order."""
        subset = _check_subset(self, subset, allow_empty=False)
        return Schema(tuple(self.variables[i] for i in subset))


def _check_subset(schema: Schema, subset: Iterable[int], allow_empty: bool) -> tuple[int, ...]:
    idxs = tuple(sorted(set(int(i) for i in subset)))
    if not idxs and not allow_empty:
        raise DomainError("variable subset must be non-empty")
    for i in idxs:
        if not 0 <= i < len(schema):
            raise DomainError(f"variable index {i} out of range for {len(schema)} variables")
    return idxs


class JointDistribution:
    """Normalized dense probability table over a schema's state space.

    The constructor validates non-negativity and that the entries sum to one
    within 1e-9, then renormalizes exactly so downstream log computations see
    a consistent total.  The table is frozen after construction.
    """

    __slots__ = ("schema", "_probs")

    def __init__(self, schema: Schema, probs: Sequence[float] | np.ndarray):
        arr = np.asarray(probs, dtype=float).reshape(-1)
        if arr.shape != (schema.n_states,):
            raise DomainError(
                f"probability table has {arr.size} entries, schema has {schema.n_states} states"
            )
        if np.any(arr < 0):
            bad = int(np.argmin(arr))
            raise DomainError(f"negative probability {arr[bad]} at state {schema.state_of(bad)}")
        total = float(arr.sum())
        if abs(total - 1.0) > SUM_TOL:
            raise DomainError(f"probabilities sum to {total!r}, expected 1 within {SUM_TOL}")
        arr = arr / total
        arr.flags.writeable = False
        self.schema = schema
        self._probs = arr

    @property
    def probs(self) -> np.ndarray:
        """Flat read-only probability array in row-major state order."""
        return self._probs

    def table(self) -> np.ndarray:
        """Read-only view shaped by the schema's cardinalities."""
        return self._probs.reshape(self.schema.cardinalities)

    def prob(self, state: Sequence[int]) -> float:
        return float(self._probs[self.schema.index_of(state)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, JointDistribution)
            and self.schema == other.schema
            and np.array_equal(self._probs, other._probs)
        )

    def __hash__(self):
        return hash((self.schema, self._probs.tobytes()))

    def allclose(self, other: "JointDistribution", atol: float = 1e-12) -> bool:
        return self.schema == other.schema and bool(
            np.allclose(self._probs, other._probs, rtol=0.0, atol=atol)
        )

    def __repr__(self) -> str:
        return f"JointDistribution({list(self.schema.names)}, {self.schema.n_states} states)"


@dataclass(frozen=True)
class DatasetTable:
    """Raw categorical samples plus per-state counts under a schema.

    ``levels[i]`` records the token spelled for each level of variable i, so
    the integer encoding is reproducible.  Counts sum to the number of rows.
    """

    schema: Schema
    rows: tuple[tuple[int, ...], ...]
    counts: dict[int, int] = field(compare=False)
    levels: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self):
        for r, row in enumerate(self.rows):
            for x, (name, c) in zip(row, self.schema.variables):
                if not 0 <= x < c:
                    raise DomainError(f"row {r}: level {x} out of range for variable {name!r}")
        if sum(self.counts.values()) != len(self.rows):
            raise DomainError("counts do not sum to the number of rows")

    @property
    def n_rows(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class ConditionalTable:
    """P(targets-state | givens-state) for every given-state with positive mass.

    Given-states of zero marginal probability are simply absent; they are
    undefined, not zero.
    """

    targets: tuple[int, ...]
    givens: tuple[int, ...]
    table: dict[tuple[tuple[int, ...], tuple[int, ...]], float] = field(compare=False)

    def prob(self, target_state: tuple[int, ...], given_state: tuple[int, ...]) -> float:
        """Conditional probability; raises on an undefined conditioning state."""
        key = (tuple(given_state), tuple(target_state))
        if key not in self.table:
            if not any(g == tuple(given_state) for g, _ in self.table):
                raise DomainError(f"conditional undefined for given-state {tuple(given_state)}")
            return 0.0
        return self.table[key]

    def is_defined(self, given_state: tuple[int, ...]) -> bool:
        return any(g == tuple(given_state) for g, _ in self.table)

    def defined_givens(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted({g for g, _ in self.table}))


# ---------------------------------------------------------------------------
# construction from data
# ---------------------------------------------------------------------------


def load_dataset(
    source: str | IO[str],
    schema: Schema | None = None,
    delimiter: str = ",",
) -> DatasetTable:
    """Read delimited text with a header row of variable names.

    Without an explicit schema, cardinalities are inferred from the observed
    tokens and each column's token-to-level map follows sorted token order,
    so repeated runs see the same encoding.  With an explicit schema, tokens
    must be integer literals within the declared cardinalities.
    """
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return load_dataset(fh, schema=schema, delimiter=delimiter)

    reader = csv.reader(source, delimiter=delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("missing header row") from None
    header = [h.strip() for h in header]
    if any(not h for h in header):
        raise ParseError("empty variable name in header", line=1)

    raw_rows: list[list[str]] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue  # skip blank lines
        if len(row) != len(header):
            raise ParseError(
                f"expected {len(header)} fields, found {len(row)}", line=lineno
            )
        raw_rows.append([tok.strip() for tok in row])

    if schema is not None:
        if list(schema.names) != header:
            raise DomainError(
                f"header {header} does not match schema variables {list(schema.names)}"
            )
        rows = []
        for lineno, row in enumerate(raw_rows, start=2):
            coded = []
            for tok, (name, c) in zip(row, schema.variables):
                try:
                    x = int(tok)
                except ValueError:
                    raise DomainError(
                        f"token {tok!r} for variable {name!r} is not an integer level (line {lineno})"
                    ) from None
                if not 0 <= x < c:
                    raise DomainError(
                        f"unseen token {tok!r} for variable {name!r} (line {lineno}): "
                        f"levels are 0..{c - 1}"
                    )
                coded.append(x)
            rows.append(tuple(coded))
        levels = tuple(tuple(str(x) for x in range(c)) for c in schema.cardinalities)
    else:
        if not raw_rows:
            raise EmptyDataError("cannot infer a schema from an empty dataset")
        columns = list(zip(*raw_rows))
        levels = tuple(tuple(sorted(set(col))) for col in columns)
        for name, lv in zip(header, levels):
            if len(lv) < 2:
                raise SchemaError(
                    f"variable {name!r} takes a single value {lv[0]!r} in the data; "
                    "constant variables are rejected"
                )
        schema = Schema(tuple((n, len(lv)) for n, lv in zip(header, levels)))
        maps = [{tok: i for i, tok in enumerate(lv)} for lv in levels]
        rows = [tuple(m[tok] for m, tok in zip(maps, row)) for row in raw_rows]

    counts: dict[int, int] = {}
    for row in rows:
        idx = schema.index_of(row)
        counts[idx] = counts.get(idx, 0) + 1
    return DatasetTable(schema=schema, rows=tuple(rows), counts=counts, levels=levels)


def write_samples(data: DatasetTable, stream: IO[str], delimiter: str = ",") -> None:
    """Write a DatasetTable back to delimited text (inverse of load_dataset)."""
    writer = csv.writer(stream, delimiter=delimiter, lineterminator="\n")
    writer.writerow(data.schema.names)
    for row in data.rows:
        writer.writerow([data.levels[i][x] if data.levels else str(x) for i, x in enumerate(row)])


def estimate_joint(data: DatasetTable) -> JointDistribution:
    """Plugin (empirical frequency) estimate of the joint distribution."""
    if data.n_rows == 0:
        raise EmptyDataError("cannot estimate a distribution from zero rows")
    probs = np.zeros(data.schema.n_states)
    for idx, c in data.counts.items():
        probs[idx] = c
    return JointDistribution(data.schema, probs / data.n_rows)


# ---------------------------------------------------------------------------
# algebra on distributions
# ---------------------------------------------------------------------------


def marginal(dist: JointDistribution, subset: Iterable[int]) -> JointDistribution:
    """Marginal over a non-empty variable subset, schema kept in original order."""
    idxs = _check_subset(dist.schema, subset, allow_empty=False)
    if idxs == tuple(range(len(dist.schema))):
        return dist
    drop = tuple(i for i in range(len(dist.schema)) if i not in idxs)
    table = dist.table().sum(axis=drop)
    return JointDistribution(dist.schema.restrict(idxs), table.reshape(-1))


def conditional(
    dist: JointDistribution, targets: Iterable[int], givens: Iterable[int]
) -> ConditionalTable:
    """Conditional P(targets | givens) for every given-state with positive mass."""
    t_idx = _check_subset(dist.schema, targets, allow_empty=False)
    g_idx = _check_subset(dist.schema, givens, allow_empty=False)
    if set(t_idx) & set(g_idx):
        raise DomainError(f"targets {t_idx} and givens {g_idx} overlap")

    joint = marginal(dist, t_idx + g_idx)
    # positions of targets/givens inside the joint marginal's ordering
    order = sorted(t_idx + g_idx)
    t_pos = [order.index(i) for i in t_idx]
    g_pos = [order.index(i) for i in g_idx]

    g_marg = marginal(dist, g_idx)
    table: dict[tuple[tuple[int, ...], tuple[int, ...]], float] = {}
    for g_state in g_marg.schema.states():
        pg = g_marg.prob(g_state)
        if pg <= 0.0:
            continue
        for t_state in itertools.product(
            *(range(dist.schema.cardinalities[i]) for i in t_idx)
        ):
            full = [0] * len(order)
            for pos, x in zip(t_pos, t_state):
                full[pos] = x
            for pos, x in zip(g_pos, g_state):
                full[pos] = x
            table[(tuple(g_state), tuple(t_state))] = joint.prob(full) / pg
    return ConditionalTable(targets=t_idx, givens=g_idx, table=table)


def product(factors: Sequence[JointDistribution]) -> JointDistribution:
    """Product distribution of factors over pairwise-disjoint schemas."""
    if not factors:
        raise DomainError("product needs at least one factor")
    seen: set[str] = set()
    for f in factors:
        for name in f.schema.names:
            if name in seen:
                raise DomainError(f"variable name {name!r} appears in more than one factor")
            seen.add(name)
    variables = tuple(v for f in factors for v in f.schema.variables)
    schema = Schema(variables)
    table = factors[0].table()
    for f in factors[1:]:
        table = np.multiply.outer(table, f.table())
    return JointDistribution(schema, table.reshape(-1))


def uniform(schema: Schema) -> JointDistribution:
    """Uniform distribution: every state gets 1/N."""
    n = schema.n_states
    return JointDistribution(schema, np.full(n, 1.0 / n))


class NormalizeResult(NamedTuple):
    dist: JointDistribution
    z: float


def normalize(schema: Schema, weights: Sequence[float] | np.ndarray) -> NormalizeResult:
    """Scale a non-negative weight table to a distribution; returns (dist, Z)."""
    arr = np.asarray(weights, dtype=float).reshape(-1)
    if arr.shape != (schema.n_states,):
        raise DomainError(
            f"weight table has {arr.size} entries, schema has {schema.n_states} states"
        )
    if np.any(arr < 0):
        bad = int(np.argmin(arr))
        raise DomainError(f"negative weight {arr[bad]} at state {schema.state_of(bad)}")
    z = float(arr.sum())
    if z <= 0.0:
        raise DomainError("all weights are zero; nothing to normalize")
    return NormalizeResult(JointDistribution(schema, arr / z), z)


def same_schema(a: JointDistribution, b: JointDistribution) -> None:
    """Raise unless two distributions share an identical schema."""
    if a.schema != b.schema:
        raise DomainError(
            f"schema mismatch: {list(a.schema.variables)} vs {list(b.schema.variables)}"
        )
