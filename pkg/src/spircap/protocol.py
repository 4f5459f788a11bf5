"""The GRS-coded SPIR scheme: planning, queries, answers and decoding.

Given a rational feasible point ``y`` of the packing LP with ``F = sum(y) > 1``,
the user issues ``l_bar`` query vectors.  ``k = l_bar / F`` uniform vectors
``U`` are spread over the query columns by an ``(l_bar, k)`` GRS generator
``G`` and the last ``L = l_bar - k`` columns additionally carry the unit
vectors selecting the desired message.  Server ``n`` receives
``l_bar * y_n / F`` consecutive query columns and answers each with the inner
product against the stacked messages plus a coordinate of ``S @ G``, where
``S`` holds ``k`` symbols of randomness shared by the servers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import FNotGreaterThanOne, InfeasibleY, SchemeError, SingularMatrix, ThetaOutOfRange
from .field import FieldElement, FieldMatrix, PrimeField, choose_field, hstack, invert, vstack
from .grs import GrsGenerator, build_grs, check_mds
from .lp import packing_feasible
from .patterns import Pattern, incidence_matrix, reduce_maximal
from .rational import format_rational, parse_rational


def _rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


@dataclass(frozen=True, eq=False)
class SchemeParams:
    n_servers: int
    n_messages: int
    y: tuple[Fraction, ...]
    f: Fraction
    l_bar: int
    msg_len: int
    code_dim: int
    field: PrimeField
    per_server_counts: tuple[int, ...]
    grs: GrsGenerator
    joint: Pattern | None = None

    @property
    def k(self) -> int:
        return self.code_dim

    @property
    def rho(self) -> Fraction:
        """Shared randomness relative to the message size, ``k / L``."""
        return Fraction(self.code_dim, self.msg_len)

    @property
    def generator(self) -> FieldMatrix:
        return self.grs.matrix

    @cached_property
    def assignment(self) -> tuple[tuple[int, ...], ...]:
        """0-based query indices held by each server, contiguous in server order."""
        out, start = [], 0
        for c in self.per_server_counts:
            out.append(tuple(range(start, start + c)))
            start += c
        return tuple(out)

    def server_indices(self, n: int) -> tuple[int, ...]:
        """Query indices of 1-based server ``n``."""
        if not 1 <= n <= self.n_servers:
            raise SchemeError(f"server {n} outside [1..{self.n_servers}]")
        return self.assignment[n - 1]

    def indices_for(self, servers) -> tuple[int, ...]:
        return tuple(i for n in sorted(servers) for i in self.server_indices(n))

    @cached_property
    def stack(self) -> FieldMatrix:
        """The l_bar x l_bar matrix ``[G ; 0 I_L]`` mapping ``[X, W_theta]`` to answers."""
        f = self.field
        bottom = hstack([f.zeros(self.msg_len, self.code_dim), f.identity(self.msg_len)])
        return vstack([self.generator, bottom])

    @cached_property
    def stack_inverse(self) -> FieldMatrix:
        return invert(self.stack)

    def with_counts(self, counts: Sequence[int]) -> "SchemeParams":
        """Copy with a different query assignment (used to build tampered instances)."""
        counts = tuple(int(c) for c in counts)
        if len(counts) != self.n_servers or sum(counts) != self.l_bar or min(counts) < 0:
            raise SchemeError(f"counts {counts} must be {self.n_servers} non-negative ints summing to {self.l_bar}")
        return replace(self, per_server_counts=counts)

    def summary(self) -> dict:
        return {
            "n_servers": self.n_servers,
            "n_messages": self.n_messages,
            "l_bar": self.l_bar,
            "msg_len": self.msg_len,
            "code_dim": self.code_dim,
            "q": self.field.q,
            "per_server_counts": list(self.per_server_counts),
            "f": format_rational(self.f),
            "y": [format_rational(v) for v in self.y],
            "rho": format_rational(self.rho),
        }


def minimal_blocklength(y: Sequence[Fraction], f: Fraction) -> int:
    """Least positive integer making ``l_bar / f`` and every ``l_bar * y_n / f`` integral."""
    dens = [(1 / f).denominator] + [(Fraction(v) / f).denominator for v in y]
    return math.lcm(*dens)


def plan_scheme(y, f, n_messages: int, joint: Pattern, field: PrimeField | None = None) -> SchemeParams:
    """Fix every integer parameter of the scheme for the packing point ``y``.

    ``field`` defaults to the smallest prime field with ``l_bar`` elements; a
    larger prime may be passed explicitly.
    """
    y = tuple(parse_rational(v) for v in y)
    f = parse_rational(f)
    if n_messages < 2:
        raise SchemeError("the model needs at least K = 2 messages")
    if len(y) != joint.n_servers:
        raise InfeasibleY(f"y has {len(y)} entries for {joint.n_servers} servers")
    if sum(y, Fraction(0)) != f:
        raise InfeasibleY(f"f = {f} is not the sum of y")
    if not packing_feasible(incidence_matrix(joint), y):
        raise InfeasibleY("y violates B'y <= 1 or y >= 0 for the joint pattern")
    if f <= 1:
        raise FNotGreaterThanOne(f"F = {f} gives no positive message length")
    l_bar = minimal_blocklength(y, f)
    k = l_bar / f
    counts = tuple(int(l_bar * v / f) for v in y)
    k = int(k)
    msg_len = l_bar - k
    if field is None:
        field = choose_field(l_bar)
    grs = build_grs(l_bar, k, field)
    if not check_mds(grs):  # pragma: no cover - Vandermonde on distinct points
        raise SchemeError("generator is not MDS")
    params = SchemeParams(
        n_servers=joint.n_servers,
        n_messages=n_messages,
        y=y,
        f=f,
        l_bar=l_bar,
        msg_len=msg_len,
        code_dim=k,
        field=field,
        per_server_counts=counts,
        grs=grs,
        joint=joint,
    )
    for d in joint.sets:
        if sum(counts[n - 1] for n in d) > k:  # pragma: no cover - implied by feasibility
            raise SchemeError(f"set {list(d)} would see more than {k} queries")
    return params


@dataclass(frozen=True, eq=False)
class MessageStore:
    """K x L message symbols; row ``i`` is message ``i + 1``."""

    w: FieldMatrix

    @classmethod
    def random(cls, params: SchemeParams, rng) -> "MessageStore":
        return cls(params.field.random_matrix(params.n_messages, params.msg_len, _rng(rng)))

    @classmethod
    def from_rows(cls, params: SchemeParams, rows) -> "MessageStore":
        w = params.field.matrix(rows)
        if w.shape != (params.n_messages, params.msg_len):
            raise SchemeError(f"messages must be {params.n_messages} x {params.msg_len}, got {w.shape}")
        return cls(w)

    def stacked(self) -> FieldMatrix:
        """Column vector of length K*L, message 1 first."""
        return FieldMatrix(self.w.field, self.w.data.reshape(-1, 1).copy())

    def message(self, theta: int) -> list[int]:
        return [int(v) for v in self.w.data[theta - 1]]


@dataclass(frozen=True, eq=False)
class ServerQuery:
    """What one server receives: its query indices and the matching columns."""

    server: int
    indices: tuple[int, ...]
    vectors: FieldMatrix


@dataclass(frozen=True, eq=False)
class QuerySet:
    theta: int
    vectors: FieldMatrix  # KL x l_bar, column j is query j+1
    assignment: tuple[tuple[int, ...], ...]
    u: FieldMatrix  # KL x k, the user's private randomness

    def block(self, n: int) -> ServerQuery:
        idx = self.assignment[n - 1]
        return ServerQuery(n, idx, self.vectors.columns(idx))


@dataclass(frozen=True, eq=False)
class CommonRandomness:
    s: FieldMatrix  # 1 x k
    s_bar: FieldMatrix  # 1 x l_bar

    @property
    def k(self) -> int:
        return self.s.cols


def selection_offset(params: SchemeParams, theta: int) -> FieldMatrix:
    """KL x l_bar matrix: zeros, then unit vectors picking message ``theta`` in the last L columns."""
    kl = params.n_messages * params.msg_len
    data = np.zeros((kl, params.l_bar), dtype=params.field.dtype)
    base = params.l_bar - params.msg_len
    for j in range(params.msg_len):
        data[(theta - 1) * params.msg_len + j, base + j] = 1
    return FieldMatrix(params.field, data)


def queries_from_randomness(params: SchemeParams, u: FieldMatrix, theta: int) -> QuerySet:
    if not 1 <= theta <= params.n_messages:
        raise ThetaOutOfRange(f"theta={theta} outside [1..{params.n_messages}]")
    kl = params.n_messages * params.msg_len
    if u.shape != (kl, params.code_dim):
        raise SchemeError(f"U must be {kl} x {params.code_dim}")
    q = u @ params.generator + selection_offset(params, theta)
    return QuerySet(theta, q, params.assignment, u)


def generate_queries(params: SchemeParams, theta: int, rng) -> QuerySet:
    if not 1 <= theta <= params.n_messages:
        raise ThetaOutOfRange(f"theta={theta} outside [1..{params.n_messages}]")
    kl = params.n_messages * params.msg_len
    u = params.field.random_matrix(kl, params.code_dim, _rng(rng))
    return queries_from_randomness(params, u, theta)


def common_randomness_from(params: SchemeParams, s) -> CommonRandomness:
    s = params.field.vector(s) if not isinstance(s, FieldMatrix) else s
    if s.shape != (1, params.code_dim):
        raise SchemeError(f"S must have {params.code_dim} symbols")
    return CommonRandomness(s, s @ params.generator)


def sample_common_randomness(params: SchemeParams, rng) -> CommonRandomness:
    s = params.field.random_matrix(1, params.code_dim, _rng(rng))
    return common_randomness_from(params, s)


def answer_block(block: ServerQuery, w: MessageStore, cr: CommonRandomness) -> list[FieldElement]:
    """Inner product of each received query with the stacked messages, masked by ``S @ G``."""
    inner = block.vectors.T @ w.stacked()
    f = w.w.field
    return [FieldElement(int(inner.data[i, 0]) + int(cr.s_bar.data[0, j]), f) for i, j in enumerate(block.indices)]


def answer_server(params: SchemeParams, n: int, queries: QuerySet, w: MessageStore, cr: CommonRandomness):
    """Answers of server ``n``; it only ever touches its own query block."""
    params.server_indices(n)
    return answer_block(queries.block(n), w, cr)


def all_answers(params: SchemeParams, queries: QuerySet, w: MessageStore, cr: CommonRandomness) -> list[FieldElement]:
    """Answers ordered by query index (servers own contiguous blocks in order)."""
    out = [None] * params.l_bar
    for n in range(1, params.n_servers + 1):
        for idx, a in zip(queries.assignment[n - 1], answer_server(params, n, queries, w, cr)):
            out[idx] = a
    return out


def decode(params: SchemeParams, answers) -> tuple[list[int], list[int]]:
    """Recover ``(W_theta, X)`` from the full answer row via ``[G ; 0 I]^-1``."""
    if isinstance(answers, FieldMatrix):
        row = answers
    else:
        row = params.field.vector([int(a) for a in answers])
    if row.shape != (1, params.l_bar):
        raise SchemeError(f"need all {params.l_bar} answers")
    try:
        inv = params.stack_inverse
    except SingularMatrix as exc:  # pragma: no cover - MDS certified at planning
        raise AssertionError("stacked decoding matrix is singular") from exc
    out = (row @ inv).flat()
    k = params.code_dim
    return out[k:], out[:k]


@dataclass(frozen=True, eq=False)
class Transcript:
    params: SchemeParams
    theta: int
    seed: int | None
    messages: MessageStore
    queries: QuerySet
    randomness: CommonRandomness
    answers: tuple[int, ...]
    decoded: tuple[int, ...]
    side_values: tuple[int, ...] = field(default=())

    @property
    def correct(self) -> bool:
        return list(self.decoded) == self.messages.message(self.theta)

    def to_dict(self) -> dict:
        p = self.params
        return {
            "q": p.field.q,
            "n_servers": p.n_servers,
            "n_messages": p.n_messages,
            "joint_pattern": p.joint.to_lists() if p.joint is not None else None,
            "y": [format_rational(v) for v in p.y],
            "f": format_rational(p.f),
            "l_bar": p.l_bar,
            "msg_len": p.msg_len,
            "code_dim": p.code_dim,
            "per_server_counts": list(p.per_server_counts),
            "seed": self.seed,
            "theta": self.theta,
            "generator": p.generator.tolist(),
            "messages": self.messages.w.tolist(),
            "u": self.queries.u.tolist(),
            "queries": self.queries.vectors.T.tolist(),
            "s": self.randomness.s.flat(),
            "s_bar": self.randomness.s_bar.flat(),
            "answers": list(self.answers),
            "decoded": list(self.decoded),
            "side_values": list(self.side_values),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Transcript":
        """Rebuild a transcript, re-deriving the parameters and re-checking every stored vector."""
        field_ = PrimeField(d["q"])
        joint = reduce_maximal(d["joint_pattern"], d["n_servers"], "joint")
        params = plan_scheme(d["y"], d["f"], d["n_messages"], joint, field_)
        params = params.with_counts(d["per_server_counts"]) if tuple(d["per_server_counts"]) != params.per_server_counts else params
        if params.generator.tolist() != d["generator"]:
            raise SchemeError("stored generator does not match the planned one")
        w = MessageStore.from_rows(params, d["messages"])
        queries = queries_from_randomness(params, field_.matrix(d["u"]), d["theta"])
        if queries.vectors.T.tolist() != d["queries"]:
            raise SchemeError("stored queries inconsistent with stored U")
        cr = common_randomness_from(params, d["s"])
        if cr.s_bar.flat() != d["s_bar"]:
            raise SchemeError("stored s_bar inconsistent with stored S")
        return cls(
            params,
            d["theta"],
            d["seed"],
            w,
            queries,
            cr,
            tuple(d["answers"]),
            tuple(d["decoded"]),
            tuple(d.get("side_values", ())),
        )


def run_session(params: SchemeParams, w: MessageStore, theta: int, rng=None) -> Transcript:
    """One retrieval: queries, shared randomness, answers, decoding.

    ``rng`` may be an int seed or a numpy Generator; the query randomness is
    drawn before the common randomness.
    """
    seed = rng if isinstance(rng, (int, np.integer)) else None
    gen = _rng(rng)
    queries = generate_queries(params, theta, gen)
    cr = sample_common_randomness(params, gen)
    answers = all_answers(params, queries, w, cr)
    message, side = decode(params, answers)
    return Transcript(
        params=params,
        theta=theta,
        seed=None if seed is None else int(seed),
        messages=w,
        queries=queries,
        randomness=cr,
        answers=tuple(int(a) for a in answers),
        decoded=tuple(message),
        side_values=tuple(side),
    )


def measure_rate(params: SchemeParams) -> Fraction:
    """Message symbols per downloaded symbol, ``L / l_bar``."""
    return Fraction(params.msg_len, sum(params.per_server_counts))
