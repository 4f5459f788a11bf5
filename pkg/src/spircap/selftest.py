"""Randomized self-checks: LP duality on random patterns and the T-ESPIR closed form."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .capacity import spir_capacity, t_espir_closed_form, t_espir_patterns
from .lp import verify_duality
from .patterns import JOINT, Pattern, complete_coverage, incidence_matrix, reduce_maximal


def random_pattern(rng: np.random.Generator, n_servers: int, max_sets: int = 6, kind: str = JOINT) -> Pattern:
    """Random maximal pattern covering every server, without the full set."""
    sets = []
    for _ in range(int(rng.integers(1, max_sets + 1))):
        size = int(rng.integers(1, n_servers))  # proper subset
        sets.append(tuple(int(v) + 1 for v in rng.choice(n_servers, size=size, replace=False)))
    return complete_coverage(reduce_maximal(sets, n_servers, kind))


@dataclass
class SelftestResult:
    duality_cases: int = 0
    duality_failures: list = field(default_factory=list)
    closed_form_cases: int = 0
    closed_form_failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.duality_failures and not self.closed_form_failures

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "duality_cases": self.duality_cases,
            "duality_failures": self.duality_failures,
            "closed_form_cases": self.closed_form_cases,
            "closed_form_failures": self.closed_form_failures,
        }


def run_selftest(patterns: int = 100, seed: int = 0, max_n: int = 6) -> SelftestResult:
    rng = np.random.default_rng(seed)
    res = SelftestResult()
    for _ in range(patterns):
        p = random_pattern(rng, int(rng.integers(2, max_n + 1)))
        try:
            verify_duality(incidence_matrix(p))
        except Exception as exc:  # noqa: BLE001 - any failure is reported
            res.duality_failures.append({"pattern": p.to_lists(), "n": p.n_servers, "error": str(exc)})
        res.duality_cases += 1

    for n in range(2, max_n + 1):
        for t in range(1, n):
            for e in range(1, n):
                d = max(t, e)
                pc, pe = t_espir_patterns(n, t, e)
                rep = spir_capacity(pc, pe)
                rho = rep.rho_threshold
                ok = (
                    rep.f_star == Fraction(n, d)
                    and rep.capacity == 1 - Fraction(d, n)
                    and spir_capacity(pc, pe, rho).capacity == t_espir_closed_form(n, t, e, rho)
                )
                res.closed_form_cases += 1
                if not ok:
                    res.closed_form_failures.append({"n": n, "t": t, "e": e, "f_star": str(rep.f_star)})
        single = spir_capacity(Pattern.singletons(n))
        res.closed_form_cases += 1
        if single.capacity != 1 - Fraction(1, n):
            res.closed_form_failures.append({"n": n, "singletons": True, "f_star": str(single.f_star)})
    return res
