"""Exit criteria, one test per criterion, each printing a PASS/FAIL line.

The lines appear inline with ``-s`` and in the terminal summary otherwise.
"""

import json
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import product

import numpy as np

from spircap.capacity import spir_capacity
from spircap.cli import main
from spircap.lp import complementary_slackness, solve_lp1, solve_lp2
from spircap.patterns import EAVESDROPPING, Pattern, incidence_matrix, validate
from spircap.protocol import MessageStore, measure_rate, plan_scheme, run_session
from spircap.selftest import random_pattern
from spircap.verifier import (
    USER,
    Eve,
    exhaustive_privacy,
    overload_set,
    verify_all,
    verify_db_privacy_user,
    verify_eve_privacy_rank,
    verify_user_privacy_rank,
)

from .conftest import EXAMPLE_PC, EXAMPLE_PE

F = Fraction
RESULTS: list[str] = []


@contextmanager
def criterion(label: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        line = f"FAIL  {label}  ({time.perf_counter() - start:.2f}s)"
        RESULTS.append(line)
        print(line)
        raise
    line = f"PASS  {label}  ({time.perf_counter() - start:.2f}s)"
    RESULTS.append(line)
    print(line)


def test_ac1_worked_example():
    with criterion("AC1 worked example: P_J, F*=8/3, y*, C=5/8, rho=3/5, scheme (8,5,3,(1,1,1,2,3))"):
        t0 = time.perf_counter()
        pc = Pattern.from_sets(5, EXAMPLE_PC)
        pe = Pattern.from_sets(5, EXAMPLE_PE, EAVESDROPPING)
        rep = spir_capacity(pc, pe, F(3, 5))
        assert rep.joint_pattern.to_lists() == [[1, 2, 3], [1, 4], [2, 4], [3, 4], [5]]
        assert rep.f_star == F(8, 3)
        assert rep.y_star == (F(1, 3), F(1, 3), F(1, 3), F(2, 3), F(1))
        assert rep.capacity == F(5, 8)
        assert rep.rho_threshold == F(3, 5)
        params = plan_scheme(rep.y_star, rep.f_star, 3, rep.joint_pattern)
        assert (params.l_bar, params.msg_len, params.code_dim) == (8, 5, 3)
        assert params.per_server_counts == (1, 1, 1, 2, 3)
        assert time.perf_counter() - t0 < 1.0


def test_ac2_lp_duality():
    with criterion("AC2 LP duality on >=100 random validated patterns, N<=6, exact + slackness"):
        t0 = time.perf_counter()
        rng = np.random.default_rng(20240)
        checked = 0
        while checked < 120:
            p = random_pattern(rng, int(rng.integers(2, 7)))
            validate(p)
            b = incidence_matrix(p)
            s1, s2 = solve_lp1(b), solve_lp2(b)
            assert s1.value == s2.value
            assert complementary_slackness(b, s1.vector, s2.vector)
            checked += 1
        assert checked >= 100
        assert time.perf_counter() - t0 < 10.0


def test_ac3_closed_forms():
    with criterion("AC3 T-ESPIR sweep 2<=N<=6, 1<=T,E<N and singleton case, exact"):
        for n in range(2, 7):
            for t, e in product(range(1, n), repeat=2):
                d = max(t, e)
                rep = spir_capacity(Pattern.symmetric(n, t), Pattern.symmetric(n, e, EAVESDROPPING))
                assert rep.f_star == F(n, d)
                assert rep.capacity == 1 - F(d, n)
            single = spir_capacity(Pattern.singletons(n), Pattern.empty(n), F(1, n - 1))
            assert single.capacity == 1 - F(1, n)


def test_ac4_protocol_correctness():
    with criterion("AC4 1000 sessions per theta on GF(11) decode exactly; rate 5/8 = 1-1/F*"):
        pc = Pattern.from_sets(5, EXAMPLE_PC)
        pe = Pattern.from_sets(5, EXAMPLE_PE, EAVESDROPPING)
        rep = spir_capacity(pc, pe)
        params = plan_scheme(rep.y_star, rep.f_star, 3, rep.joint_pattern)
        assert params.field.q == 11
        for theta in (1, 2, 3):
            for seed in range(1000):
                w = MessageStore.random(params, 10_000 * theta + seed)
                tr = run_session(params, w, theta, seed)
                assert list(tr.decoded) == w.message(theta)
        assert measure_rate(params) == F(5, 8) == 1 - 1 / rep.f_star


def test_ac5_exhaustive_privacy():
    with criterion("AC5 exhaustive micro-scale privacy (user, db-vs-user, eavesdropper), exact tables"):
        t0 = time.perf_counter()
        joint = Pattern.singletons(2, "joint")
        params = plan_scheme([1, 1], 2, 2, joint)
        assert (params.n_servers, params.n_messages, params.l_bar, params.code_dim) == (2, 2, 2, 1)
        for s in [(1,), (2,)]:
            res = exhaustive_privacy(params, s, (1, 2))
            assert all(t.total == 1 for t in res.tables)
            assert res.tables[0] == res.tables[1]
        for theta in (1, 2):
            res = exhaustive_privacy(params, USER, theta)
            assert res.tables[0].total == 1 and res.verdict
        for s in [(1,), (2,)]:
            res = exhaustive_privacy(params, Eve(s), 1)
            assert res.tables[0].total == 1 and res.verdict
        assert time.perf_counter() - t0 < 30.0


def test_ac6_rank_certificates_and_tampering():
    with criterion("AC6 rank certificates pass; overloading any joint set flips a certificate"):
        pc = Pattern.from_sets(5, EXAMPLE_PC)
        pe = Pattern.from_sets(5, EXAMPLE_PE, EAVESDROPPING)
        rep = spir_capacity(pc, pe)
        params = plan_scheme(rep.y_star, rep.f_star, 3, rep.joint_pattern)
        assert verify_user_privacy_rank(params, pc).verdict
        assert verify_eve_privacy_rank(params, pe).verdict
        assert verify_db_privacy_user(params).verdict
        for d in rep.joint_pattern.sets:
            bad = overload_set(params, d)
            assert sum(bad.per_server_counts[n - 1] for n in d) > params.code_dim
            assert not verify_all(bad, pc, pe, trials=5).passed


def test_ac7_threshold_enforcement(tmp_path, capsys):
    with criterion("AC7 rho < 1/(F*-1) refused with exit 3; rho = threshold accepted with k/L = rho"):
        path = tmp_path / "example.json"
        path.write_text(json.dumps({"n": 5, "collusion": EXAMPLE_PC, "eavesdropping": EXAMPLE_PE}))
        below = F(3, 5) - F(1, 10**6)
        assert main(["scheme", "--pattern", str(path), "--rho", f"{below.numerator}/{below.denominator}", "--k", "3"]) == 3
        capsys.readouterr()
        assert main(["scheme", "--pattern", str(path), "--rho", "3/5", "--k", "3", "--format", "json"]) == 0
        d = json.loads(capsys.readouterr().out)
        assert F(d["code_dim"], d["msg_len"]) == F(3, 5)
        assert d["rho"] == "3/5"
