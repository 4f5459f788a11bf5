"""Collusion / eavesdropping patterns and their incidence matrices.

A pattern is a family of server subsets over servers ``1..N``.  Only the
inclusion-maximal sets are kept, since every subset of a colluding
(eavesdropping) set is itself colluding (eavesdropping).  Server indices are
1-based in every public value; the conversion to 0-based row indices happens
only when an incidence matrix is built.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyPattern,
    FullSetPresent,
    PatternError,
    PatternMismatch,
    ServerIndexError,
)

COLLUSION = "collusion"
EAVESDROPPING = "eavesdropping"
JOINT = "joint"
KINDS = (COLLUSION, EAVESDROPPING, JOINT)

ServerSet = tuple[int, ...]


def _as_server_set(members: Iterable[int], n_servers: int) -> ServerSet:
    s = tuple(sorted(set(int(m) for m in members)))
    if not s:
        raise PatternError("server sets must be non-empty")
    if s[0] < 1 or s[-1] > n_servers:
        raise ServerIndexError(f"server set {list(s)} outside [1..{n_servers}]")
    return s


def canonical_order(sets: Iterable[ServerSet]) -> list[ServerSet]:
    """Lexicographic order on the sorted member tuples."""
    return sorted(set(sets))


@dataclass(frozen=True)
class Pattern:
    n_servers: int
    sets: tuple[ServerSet, ...]
    kind: str = COLLUSION

    def __post_init__(self):
        if self.n_servers < 1:
            raise PatternError("n_servers must be positive")
        if self.kind not in KINDS:
            raise PatternError(f"unknown pattern kind {self.kind!r}")
        sets = tuple(_as_server_set(s, self.n_servers) for s in self.sets)
        object.__setattr__(self, "sets", sets)

    @classmethod
    def from_sets(cls, n_servers: int, sets: Iterable[Iterable[int]], kind: str = COLLUSION) -> "Pattern":
        """Build a normalized (maximal, canonically ordered) pattern."""
        return reduce_maximal(sets, n_servers, kind)

    @classmethod
    def singletons(cls, n_servers: int, kind: str = COLLUSION) -> "Pattern":
        return cls(n_servers, tuple((n,) for n in range(1, n_servers + 1)), kind)

    @classmethod
    def symmetric(cls, n_servers: int, size: int, kind: str = COLLUSION) -> "Pattern":
        """All ``size``-subsets of the servers (the T-colluding / E-eavesdropping model)."""
        if not 1 <= size <= n_servers:
            raise PatternError(f"set size {size} outside [1..{n_servers}]")
        return cls(n_servers, tuple(combinations(range(1, n_servers + 1), size)), kind)

    @classmethod
    def empty(cls, n_servers: int, kind: str = EAVESDROPPING) -> "Pattern":
        return cls(n_servers, (), kind)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __contains__(self, item) -> bool:
        return tuple(sorted(item)) in self.sets

    @property
    def covered(self) -> frozenset[int]:
        return frozenset(n for s in self.sets for n in s)

    @property
    def uncovered(self) -> tuple[int, ...]:
        cov = self.covered
        return tuple(n for n in range(1, self.n_servers + 1) if n not in cov)

    @property
    def has_full_set(self) -> bool:
        return any(len(s) == self.n_servers for s in self.sets)

    def is_maximal(self) -> bool:
        return len(_non_maximal(self.sets)) == 0 and len(set(self.sets)) == len(self.sets)

    def to_lists(self) -> list[list[int]]:
        return [list(s) for s in self.sets]


def _non_maximal(sets: Sequence[ServerSet]) -> list[ServerSet]:
    frozen = [frozenset(s) for s in sets]
    out = []
    for i, a in enumerate(frozen):
        if any(a < b for j, b in enumerate(frozen) if j != i):
            out.append(sets[i])
    return out


def reduce_maximal(sets: Iterable[Iterable[int]], n_servers: int, kind: str = COLLUSION) -> Pattern:
    """Keep exactly the inclusion-maximal sets, deduplicated and canonically ordered."""
    normalized = {_as_server_set(s, n_servers) for s in sets}
    if not normalized and kind == COLLUSION:
        raise EmptyPattern("a collusion pattern must contain at least the singleton sets")
    keep = [s for s in normalized if not any(set(s) < set(t) for t in normalized)]
    return Pattern(n_servers, tuple(canonical_order(keep)), kind)


def join_patterns(pc: Pattern, pe: Pattern) -> Pattern:
    """Maximal-set representation of the union of two patterns."""
    if pc.n_servers != pe.n_servers:
        raise PatternMismatch(f"patterns over {pc.n_servers} and {pe.n_servers} servers")
    return reduce_maximal(pc.sets + pe.sets, pc.n_servers, JOINT)


def complete_coverage(p: Pattern) -> Pattern:
    """Add the singleton ``{n}`` for every server no set covers, then renormalize."""
    extra = tuple((n,) for n in p.uncovered)
    return reduce_maximal(p.sets + extra, p.n_servers, p.kind)


@dataclass(frozen=True)
class Diagnostics:
    uncovered: tuple[int, ...] = ()
    non_maximal: tuple[ServerSet, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.uncovered and not self.non_maximal


def validate(p: Pattern) -> Diagnostics:
    """Reject fatal defects, report fixable ones.

    Raises :class:`FullSetPresent` if ``[1..N]`` is one of the sets, and
    :class:`EmptyPattern` for a collusion pattern with no sets.  Uncovered
    servers and non-maximal sets are returned as diagnostics.
    """
    if p.has_full_set:
        raise FullSetPresent(
            f"{p.kind} pattern contains the set of all {p.n_servers} servers: "
            "user privacy and database privacy cannot both hold, capacity is zero"
        )
    if p.kind == COLLUSION and not p.sets:
        raise EmptyPattern("collusion pattern has no sets")
    dupes = tuple(s for i, s in enumerate(p.sets) if s in p.sets[:i])
    return Diagnostics(
        uncovered=p.uncovered,
        non_maximal=tuple(_non_maximal(p.sets)) + dupes,
    )


@dataclass(frozen=True)
class IncidenceMatrix:
    """Server-by-set 0/1 matrix; column ``m`` is the indicator of ``sets[m]``."""

    entries: np.ndarray
    sets: tuple[ServerSet, ...] = field(default=())

    @property
    def n_rows(self) -> int:
        return self.entries.shape[0]

    @property
    def n_cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def __eq__(self, other) -> bool:
        if isinstance(other, IncidenceMatrix):
            other = other.entries
        return np.array_equal(self.entries, np.asarray(other))

    __hash__ = None


def incidence_matrix(p: Pattern) -> IncidenceMatrix:
    b = np.zeros((p.n_servers, len(p.sets)), dtype=np.int64)
    for m, s in enumerate(p.sets):
        for n in s:
            b[n - 1, m] = 1
    return IncidenceMatrix(b, p.sets)


def pattern_from_incidence(b, kind: str = JOINT) -> Pattern:
    entries = b.entries if isinstance(b, IncidenceMatrix) else np.asarray(b)
    n_servers = entries.shape[0]
    sets = tuple(tuple(int(i) + 1 for i in np.flatnonzero(col)) for col in entries.T)
    return Pattern(n_servers, sets, kind)


# --- JSON pattern files ---------------------------------------------------


def load_patterns(source) -> tuple[Pattern, Pattern]:
    """Parse ``{"n": N, "collusion": [...], "eavesdropping": [...]}``.

    ``source`` may be a path, a JSON string, or an already-decoded dict.
    Sets are normalized to maximal form; nothing else is changed.
    """
    if isinstance(source, dict):
        data = source
    elif isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        data = json.loads(Path(source).read_text())
    else:
        data = json.loads(source)
    try:
        n = int(data["n"])
        coll = data["collusion"]
    except KeyError as exc:
        raise PatternError(f"pattern file missing key {exc}") from None
    pc = reduce_maximal(coll, n, COLLUSION)
    pe = reduce_maximal(data.get("eavesdropping") or [], n, EAVESDROPPING)
    return pc, pe


def dump_patterns(pc: Pattern, pe: Pattern) -> dict:
    if pc.n_servers != pe.n_servers:
        raise PatternMismatch("patterns disagree on the number of servers")
    return {"n": pc.n_servers, "collusion": pc.to_lists(), "eavesdropping": pe.to_lists()}
