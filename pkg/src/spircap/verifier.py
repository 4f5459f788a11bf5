"""Certificates for correctness, user privacy and database privacy of a planned scheme.

Two independent routes are provided.  The rank route works at any size: a
set of servers seeing ``t <= k`` query columns whose generator columns have
rank ``t`` observes jointly uniform vectors (and, for answers, jointly
uniform masks).  The exhaustive route enumerates every value of the user's
randomness ``U``, the shared randomness ``S`` and the messages ``W`` with
exact rational weights, and compares the resulting distributions entry by
entry.  It only runs on tiny instances.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable

import numpy as np

from .errors import BudgetExceeded, SchemeError
from .field import FieldMatrix, rank
from .patterns import Pattern
from .protocol import (
    MessageStore,
    SchemeParams,
    all_answers,
    common_randomness_from,
    decode,
    queries_from_randomness,
    run_session,
)

USER_PRIVACY = "user_privacy"
DB_PRIVACY_USER = "db_privacy_user"
DB_PRIVACY_EVE = "db_privacy_eve"
CORRECTNESS = "correctness"

RANK = "rank"
EXHAUSTIVE = "exhaustive"
SWEEP = "sweep"
STRUCTURAL = "structural"

DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class PrivacyCertificate:
    constraint: str
    method: str
    verdict: bool
    witness: dict = field(default_factory=dict)
    informational: bool = False

    @property
    def passed(self) -> bool:
        return self.verdict

    def to_dict(self) -> dict:
        return {
            "constraint": self.constraint,
            "method": self.method,
            "verdict": "pass" if self.verdict else "fail",
            "informational": self.informational,
            "witness": self.witness,
        }


class DistributionTable(dict):
    """Observable tuple -> exact probability."""

    @property
    def total(self) -> Fraction:
        return sum(self.values(), Fraction(0))

    def merge(self, other: "DistributionTable") -> "DistributionTable":
        out = DistributionTable(self)
        for key, p in other.items():
            out[key] = out.get(key, Fraction(0)) + p
        return out

    def to_dict(self) -> dict:
        return {repr(k): f"{p.numerator}/{p.denominator}" for k, p in sorted(self.items())}


# --- rank route -----------------------------------------------------------


def _rank_checks(params: SchemeParams, sets: Iterable[tuple[int, ...]]) -> tuple[bool, list[dict]]:
    witness, ok = [], True
    for s in sets:
        idx = params.indices_for(s)
        t = len(idx)
        r = rank(params.generator.columns(idx)) if t else 0
        passed = t <= params.code_dim and r == t
        ok &= passed
        witness.append({"set": list(s), "columns": [i + 1 for i in idx], "count": t, "rank": r, "pass": passed})
    return ok, witness


def verify_user_privacy_rank(params: SchemeParams, pc: Pattern, informational: bool = False) -> PrivacyCertificate:
    """Each colluding set sees at most k query columns, and those columns of G are independent."""
    ok, witness = _rank_checks(params, pc.sets)
    return PrivacyCertificate(USER_PRIVACY, RANK, ok, {"k": params.code_dim, "sets": witness}, informational)


def verify_eve_privacy_rank(params: SchemeParams, pe: Pattern) -> PrivacyCertificate:
    """Each eavesdropped answer block is masked by independent coordinates of ``S @ G``."""
    ok, witness = _rank_checks(params, pe.sets)
    return PrivacyCertificate(DB_PRIVACY_EVE, RANK, ok, {"k": params.code_dim, "sets": witness})


def verify_db_privacy_user(params: SchemeParams) -> PrivacyCertificate:
    """Check that everything the user decodes besides ``W_theta`` is masked one-to-one by ``S``.

    The shared randomness enters the answers as ``S @ G``; pushing that
    through the decoder gives ``S @ (G @ stack^-1)``.  Its message block must
    vanish and its side block must be an invertible k x k map, so the side
    values ``X`` are uniform and independent of the messages.
    """
    k = params.code_dim
    if k < 1:
        return PrivacyCertificate(DB_PRIVACY_USER, STRUCTURAL, False, {"reason": "no shared randomness (k = 0)"})
    image = params.generator @ params.stack_inverse
    side = image.columns(range(k))
    msg = image.columns(range(k, params.l_bar))
    side_rank = rank(side)
    mask_map = {}
    for i in range(k):
        nz = [j for j in range(k) if side.data[j, i]]
        if len(nz) == 1 and int(side.data[nz[0], i]) == 1:
            mask_map[f"X{i + 1}"] = f"S{nz[0] + 1}"
    verdict = msg.is_zero() and side_rank == k
    return PrivacyCertificate(
        DB_PRIVACY_USER,
        STRUCTURAL,
        verdict,
        {"mask_map": mask_map, "mask_rank": side_rank, "k": k, "message_block_zero": msg.is_zero()},
    )


def verify_correctness_sweep(params: SchemeParams, trials: int = 1000, seed: int = 0) -> PrivacyCertificate:
    """Random messages and indices; every session must decode its message exactly."""
    rng = np.random.default_rng(seed)
    failures = []
    for t in range(trials):
        w = MessageStore.random(params, rng)
        theta = int(rng.integers(1, params.n_messages + 1))
        tr = run_session(params, w, theta, rng)
        if not tr.correct:
            failures.append({"trial": t, "theta": theta})
    return PrivacyCertificate(
        CORRECTNESS, SWEEP, not failures, {"trials": trials, "seed": seed, "failures": failures[:10]}
    )


# --- exhaustive route -----------------------------------------------------


@dataclass(frozen=True)
class Eve:
    """An eavesdropper tapping the queries and answers of ``servers``."""

    servers: tuple[int, ...]

    def __init__(self, servers):
        object.__setattr__(self, "servers", tuple(sorted(servers)))


USER = "user"


def enumeration_size(params: SchemeParams) -> int:
    q, k = params.field.q, params.code_dim
    kl = params.n_messages * params.msg_len
    return q ** (k * kl) * q**k * q**kl


def _check_budget(params: SchemeParams, budget: int) -> int:
    size = enumeration_size(params)
    if size > budget:
        shown = str(size) if size < 10**12 else f"~10^{len(str(size)) - 1}"
        raise BudgetExceeded(f"{shown} randomness/message states exceed the budget of {budget}")
    return size


def _states(params: SchemeParams, shard: int | None = None):
    """All (U, S, W) triples; ``shard`` fixes the first symbol of S."""
    q, k = params.field.q, params.code_dim
    kl = params.n_messages * params.msg_len
    f = params.field
    s_values = product(range(q), repeat=k)
    if shard is not None:
        s_values = (s for s in s_values if s[0] == shard)
    for s in s_values:
        cr = common_randomness_from(params, list(s))
        for u in product(range(q), repeat=kl * k):
            um = FieldMatrix(f, np.array(u, dtype=f.dtype).reshape(kl, k))
            for w in product(range(q), repeat=kl):
                store = MessageStore(FieldMatrix(f, np.array(w, dtype=f.dtype).reshape(params.n_messages, params.msg_len)))
                yield um, cr, store, s, w


def _table(params: SchemeParams, theta: int, view) -> DistributionTable:
    """Exact distribution of ``view(queries, answers, s, w)`` under uniform (U, S, W)."""
    weight = Fraction(1, enumeration_size(params))
    total = DistributionTable()
    for shard in range(params.field.q):
        part = defaultdict(Fraction)
        for um, cr, store, s, w in _states(params, shard):
            qs = queries_from_randomness(params, um, theta)
            ans = tuple(int(a) for a in all_answers(params, qs, store, cr))
            part[view(qs, ans, s, w)] += weight
        total = total.merge(DistributionTable(part))
    return total


def _query_cols(qs, idx):
    return tuple(tuple(int(v) for v in qs.vectors.data[:, i]) for i in idx)


def _independent(joint: DistributionTable) -> bool:
    """Joint table over (a, b) pairs factorizes exactly into its marginals."""
    pa, pb = defaultdict(Fraction), defaultdict(Fraction)
    for (a, b), p in joint.items():
        pa[a] += p
        pb[b] += p
    return all(joint.get((a, b), Fraction(0)) == pa[a] * pb[b] for a in pa for b in pb)


@dataclass(frozen=True)
class ExhaustiveResult:
    constraint: str
    observer: object
    tables: tuple[DistributionTable, ...]
    verdict: bool
    states: int

    def certificate(self) -> PrivacyCertificate:
        witness = {
            "observer": _observer_label(self.observer),
            "states_per_table": self.states,
            "table_sizes": [len(t) for t in self.tables],
            "table_totals": [f"{t.total}" for t in self.tables],
        }
        return PrivacyCertificate(self.constraint, EXHAUSTIVE, self.verdict, witness)


def _observer_label(observer) -> str:
    if observer == USER:
        return "user"
    if isinstance(observer, Eve):
        return f"eve{list(observer.servers)}"
    return f"servers{sorted(observer)}"


def exhaustive_privacy(params: SchemeParams, observer, compare=None, budget: int = DEFAULT_BUDGET) -> ExhaustiveResult:
    """Exact privacy check by full enumeration of (U, S, W).

    ``observer`` selects the check:

    * an iterable of servers (colluding set): its view ``(Q_T, A_T, W, S)``
      must have identical distributions for the two indices in ``compare``
      (default ``(1, 2)``);
    * ``"user"``: the full ``(Q, A)`` must be independent of the messages
      other than ``theta = compare`` (default 1);
    * ``Eve(servers)``: ``(Q_E, A_E)`` must be independent of all of ``W``
      for ``theta = compare`` (default 1).
    """
    states = _check_budget(params, budget)
    if observer == USER:
        theta = 1 if compare is None else int(compare)
        L = params.msg_len

        def view(qs, ans, s, w):
            undesired = tuple(v for i, v in enumerate(w) if i // L != theta - 1)
            return (_query_cols(qs, range(params.l_bar)), ans), undesired

        table = _table(params, theta, view)
        return ExhaustiveResult(DB_PRIVACY_USER, USER, (table,), _independent(table), states)

    if isinstance(observer, Eve):
        theta = 1 if compare is None else int(compare)
        idx = params.indices_for(observer.servers)

        def view(qs, ans, s, w):
            return (_query_cols(qs, idx), tuple(ans[i] for i in idx)), w

        table = _table(params, theta, view)
        return ExhaustiveResult(DB_PRIVACY_EVE, observer, (table,), _independent(table), states)

    servers = tuple(sorted(observer))
    idx = params.indices_for(servers)
    t1, t2 = (1, 2) if compare is None else compare

    def view(qs, ans, s, w):
        return _query_cols(qs, idx), tuple(ans[i] for i in idx), w, s

    a = _table(params, t1, view)
    b = _table(params, t2, view)
    return ExhaustiveResult(USER_PRIVACY, servers, (a, b), a == b, states)


def exhaustive_correctness(params: SchemeParams, budget: int = DEFAULT_BUDGET) -> PrivacyCertificate:
    """Decode under every (U, S, W) and every index."""
    states = _check_budget(params, budget)
    failures = 0
    for theta in range(1, params.n_messages + 1):
        for um, cr, store, s, w in _states(params):
            qs = queries_from_randomness(params, um, theta)
            msg, _ = decode(params, all_answers(params, qs, store, cr))
            failures += msg != store.message(theta)
    return PrivacyCertificate(
        CORRECTNESS, EXHAUSTIVE, failures == 0, {"states": states * params.n_messages, "failures": failures}
    )


# --- bundles and tampering ------------------------------------------------


@dataclass(frozen=True)
class CertificateBundle:
    certificates: tuple[PrivacyCertificate, ...]
    skipped: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(c.verdict for c in self.certificates if not c.informational)

    def failures(self) -> list[PrivacyCertificate]:
        return [c for c in self.certificates if not c.verdict and not c.informational]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "certificates": [c.to_dict() for c in self.certificates],
            "skipped": list(self.skipped),
        }


def verify_all(
    params: SchemeParams,
    pc: Pattern,
    pe: Pattern,
    trials: int = 1000,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> CertificateBundle:
    """Rank, structural and sweep certificates, plus exhaustive ones when affordable."""
    certs = [
        verify_user_privacy_rank(params, pc),
        verify_db_privacy_user(params),
        verify_eve_privacy_rank(params, pe),
        verify_correctness_sweep(params, trials, seed),
        verify_user_privacy_rank(params, pe, informational=True),
    ]
    skipped = []
    try:
        _check_budget(params, budget)
    except BudgetExceeded as exc:
        skipped.append(f"exhaustive checks: {exc}")
    else:
        for t in pc.sets:
            for theta in range(2, params.n_messages + 1):
                certs.append(exhaustive_privacy(params, t, (1, theta), budget).certificate())
        for theta in range(1, params.n_messages + 1):
            certs.append(exhaustive_privacy(params, USER, theta, budget).certificate())
        for e in pe.sets:
            certs.append(exhaustive_privacy(params, Eve(e), 1, budget).certificate())
        certs.append(exhaustive_correctness(params, budget))
    return CertificateBundle(tuple(certs), tuple(skipped))


def overload_set(params: SchemeParams, servers) -> SchemeParams:
    """Move one query from a server outside ``servers`` to the first server inside it."""
    inside = sorted(servers)
    donor = next((n for n in range(1, params.n_servers + 1) if n not in inside and params.per_server_counts[n - 1] > 0), None)
    if donor is None:
        raise SchemeError(f"no server outside {inside} has a query to give")
    counts = list(params.per_server_counts)
    counts[donor - 1] -= 1
    counts[inside[0] - 1] += 1
    return params.with_counts(counts)
