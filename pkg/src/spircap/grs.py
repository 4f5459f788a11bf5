"""Generalized Reed-Solomon generator matrices and an exhaustive MDS check."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import NotEnoughPoints
from .field import FieldElement, FieldMatrix, PrimeField, rank


@dataclass(frozen=True, eq=False)
class GrsGenerator:
    """k x n generator with entry ``(i, j) = multipliers[j] * eval_points[j]**i``."""

    n: int
    k: int
    field: PrimeField
    eval_points: tuple[FieldElement, ...]
    multipliers: tuple[FieldElement, ...]
    matrix: FieldMatrix

    def columns(self, idx: Sequence[int]) -> FieldMatrix:
        return self.matrix.columns(idx)


def build_grs(n: int, k: int, field: PrimeField, eval_points=None, multipliers=None) -> GrsGenerator:
    """Build an ``(n, k)`` GRS generator over ``field``.

    Defaults to the evaluation points ``0..n-1`` with unit multipliers, i.e.
    a plain Reed-Solomon (Vandermonde) generator.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if n > field.q:
        raise NotEnoughPoints(f"{n} distinct evaluation points do not exist in {field}")
    points = tuple(field(v) for v in (range(n) if eval_points is None else eval_points))
    mults = tuple(field(v) for v in ([1] * n if multipliers is None else multipliers))
    if len(points) != n or len(mults) != n:
        raise ValueError("need exactly n evaluation points and n multipliers")
    if len({p.value for p in points}) != n:
        raise ValueError("evaluation points must be pairwise distinct")
    if any(m.value == 0 for m in mults):
        raise ValueError("column multipliers must be nonzero")
    q = field.q
    rows = [[(m.value * pow(p.value, i, q)) % q for p, m in zip(points, mults)] for i in range(k)]
    return GrsGenerator(n, k, field, points, mults, field.matrix(rows))


def check_mds(g) -> bool:
    """True iff every set of k columns is linearly independent.

    Accepts a :class:`GrsGenerator` or any k x n :class:`FieldMatrix`;
    enumerates all C(n, k) column subsets.
    """
    m = g.matrix if isinstance(g, GrsGenerator) else g
    k, n = m.shape
    if k > n:
        return False
    return all(rank(m.columns(cols)) == k for cols in combinations(range(n), k))
