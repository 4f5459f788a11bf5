import json
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from spircap.capacity import spir_capacity
from spircap.errors import FNotGreaterThanOne, InfeasibleY, ThetaOutOfRange
from spircap.field import PrimeField
from spircap.lp import solve_lp1
from spircap.patterns import Pattern, incidence_matrix
from spircap.protocol import (
    MessageStore,
    Transcript,
    all_answers,
    answer_server,
    common_randomness_from,
    decode,
    generate_queries,
    measure_rate,
    minimal_blocklength,
    plan_scheme,
    queries_from_randomness,
    run_session,
    sample_common_randomness,
)
from spircap.selftest import random_pattern

F = Fraction


def test_plan_example(example_params):
    p = example_params
    assert (p.l_bar, p.msg_len, p.code_dim, p.field.q) == (8, 5, 3, 11)
    assert p.per_server_counts == (1, 1, 1, 2, 3)
    assert p.rho == F(3, 5)
    assert [list(i) for i in p.assignment] == [[0], [1], [2], [3, 4], [5, 6, 7]]


def test_plan_two_server_singletons():
    p = plan_scheme([1, 1], 2, 2, Pattern.singletons(2, "joint"))
    # lcm of the denominators of 1/2, 1/2, 1/2
    assert (p.l_bar, p.msg_len, p.code_dim, p.per_server_counts) == (2, 1, 1, (1, 1))
    assert minimal_blocklength([F(1), F(1)], F(2)) == 2


def test_plan_rejects_f_one_and_infeasible_y():
    with pytest.raises(FNotGreaterThanOne):
        plan_scheme([F(1, 2), F(1, 2)], 1, 2, Pattern.singletons(2, "joint"))
    with pytest.raises(InfeasibleY):
        plan_scheme([1, 1, 1], 3, 2, Pattern.from_sets(3, [[1, 2], [3]], "joint"))
    with pytest.raises(InfeasibleY):
        plan_scheme([1, 1], 3, 2, Pattern.singletons(2, "joint"))


def test_micro_zero_randomness_exposes_offset():
    p = plan_scheme([1, 1], 2, 2, Pattern.singletons(2, "joint"), PrimeField(3))
    qs = queries_from_randomness(p, p.field.zeros(2, 1), 1)
    assert qs.vectors.T.tolist() == [[0, 0], [1, 0]]


def test_example_blocks(example_params):
    qs = generate_queries(example_params, 1, 0)
    assert [[i + 1 for i in qs.block(n).indices] for n in range(1, 6)] == [[1], [2], [3], [4, 5], [6, 7, 8]]


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_theta_changes_only_offset_columns(example_params, seed):
    p = example_params
    q1 = generate_queries(p, 1, seed).vectors.data
    q2 = generate_queries(p, 2, seed).vectors.data
    diff = (q1 - q2) % p.field.q
    expected = np.zeros_like(diff)
    for j in range(p.msg_len):
        expected[j, 3 + j] = 1  # e_j for theta=1
        expected[p.msg_len + j, 3 + j] = p.field.q - 1  # minus e_j for theta=2
    assert np.array_equal(diff, expected)
    assert np.array_equal(q1[:, :3], q2[:, :3])


def test_theta_out_of_range(example_params):
    with pytest.raises(ThetaOutOfRange):
        generate_queries(example_params, 4, 0)
    with pytest.raises(ThetaOutOfRange):
        generate_queries(example_params, 0, 0)


def test_common_randomness_rho(example_params, micro_params):
    cr = sample_common_randomness(example_params, 5)
    assert cr.k == 3 and example_params.rho == F(3, 5)
    assert cr.s_bar == cr.s @ example_params.generator
    assert micro_params.rho == 1


def test_micro_server_answer_by_hand():
    p = plan_scheme([1, 1], 2, 2, Pattern.singletons(2, "joint"), PrimeField(3))
    g12 = int(p.generator.data[0, 1])
    for w1, w2, s in product(range(3), repeat=3):
        qs = queries_from_randomness(p, p.field.zeros(2, 1), 1)
        w = MessageStore.from_rows(p, [[w1], [w2]])
        cr = common_randomness_from(p, [s])
        assert [int(a) for a in answer_server(p, 2, qs, w, cr)] == [(w1 + s * g12) % 3]


def _answers_by_identity(p, qs, w, cr):
    """[X, W_theta] @ [G ; 0 I] with X_l = W.U_l + S_l, using plain ints."""
    q = p.field.q
    wv = w.w.flat()
    u = qs.u.tolist()
    s = cr.s.flat()
    x = [(sum(wv[i] * u[i][l] for i in range(len(wv))) + s[l]) % q for l in range(p.code_dim)]
    row = x + w.message(qs.theta)
    stack = p.stack.tolist()
    return [sum(row[i] * stack[i][j] for i in range(p.l_bar)) % q for j in range(p.l_bar)]


@pytest.mark.parametrize("seed", range(5))
def test_answers_match_matrix_identity(example_params, seed):
    p = example_params
    rng = np.random.default_rng(seed)
    w = MessageStore.random(p, rng)
    for theta in (1, 2, 3):
        qs = generate_queries(p, theta, rng)
        cr = sample_common_randomness(p, rng)
        assert [int(a) for a in all_answers(p, qs, w, cr)] == _answers_by_identity(p, qs, w, cr)


def test_micro_decode_exhaustive(micro_params):
    p = micro_params
    q = p.field.q
    for w1, w2 in product(range(q), repeat=2):
        w = MessageStore.from_rows(p, [[w1], [w2]])
        for u1, u2, s in product(range(q), repeat=3):
            qs = queries_from_randomness(p, p.field.matrix([[u1], [u2]]), 1)
            msg, side = decode(p, all_answers(p, qs, w, common_randomness_from(p, [s])))
            assert msg == [w1]
            assert side == [(w1 * u1 + w2 * u2 + s) % q]


def test_decode_zero_answers(example_params):
    msg, side = decode(example_params, [0] * 8)
    assert msg == [0] * 5 and side == [0] * 3


@pytest.mark.parametrize("theta", [1, 2, 3])
def test_example_sessions_decode(example_params, theta):
    rng = np.random.default_rng(theta)
    for _ in range(50):
        w = MessageStore.random(example_params, rng)
        tr = run_session(example_params, w, theta, rng)
        assert list(tr.decoded) == w.message(theta)


def test_micro_sessions(micro_params):
    for seed in range(3):
        for theta in (1, 2):
            w = MessageStore.random(micro_params, seed + 10)
            assert run_session(micro_params, w, theta, seed).correct


def test_rate(example_params, micro_params):
    assert measure_rate(example_params) == F(5, 8)
    assert measure_rate(micro_params) == F(1, 2)


def test_rate_and_rho_identities_on_random_patterns():
    rng = np.random.default_rng(99)
    for _ in range(30):
        p = random_pattern(rng, int(rng.integers(2, 6)))
        lp = solve_lp1(incidence_matrix(p))
        params = plan_scheme(lp.vector, lp.value, 2, p)
        assert measure_rate(params) == 1 - 1 / lp.value
        assert params.rho == 1 / (lp.value - 1)
        assert sum(params.per_server_counts) == params.l_bar
        for d in p.sets:
            assert sum(params.per_server_counts[n - 1] for n in d) <= params.code_dim
        cap = spir_capacity(Pattern(p.n_servers, p.sets), None)
        assert measure_rate(params) == cap.capacity


def test_transcript_deterministic_and_roundtrip(example_params):
    w = MessageStore.random(example_params, 3)
    a = json.dumps(run_session(example_params, w, 2, 17).to_dict())
    b = json.dumps(run_session(example_params, w, 2, 17).to_dict())
    assert a == b
    d = json.loads(a)
    assert json.dumps(Transcript.from_dict(d).to_dict()) == a
    assert d["q"] == 11 and d["theta"] == 2 and d["seed"] == 17
    assert len(d["answers"]) == 8 and len(d["decoded"]) == 5
