"""Plan a scheme from the LP optimum and run retrieval sessions over GF(11)."""

import numpy as np

from spircap import Pattern, spir_capacity
from spircap.patterns import EAVESDROPPING
from spircap.protocol import MessageStore, measure_rate, plan_scheme, run_session

pc = Pattern.from_sets(5, [[1, 2], [1, 4], [2, 4], [3, 4], [5]])
pe = Pattern.from_sets(5, [[1, 2, 3], [2, 4], [5]], EAVESDROPPING)
rep = spir_capacity(pc, pe)

params = plan_scheme(rep.y_star, rep.f_star, n_messages=3, joint=rep.joint_pattern)
print(params.summary())
print("generator over GF(%d):" % params.field.q)
for row in params.generator.tolist():
    print("   ", row)

rng = np.random.default_rng(7)
store = MessageStore.random(params, rng)
for theta in (1, 2, 3):
    tr = run_session(params, store, theta, rng)
    print(f"theta={theta}: wanted {store.message(theta)}, decoded {list(tr.decoded)}")

ok = sum(run_session(params, MessageStore.random(params, s), 1 + s % 3, s).correct for s in range(500))
print(f"{ok}/500 random sessions decoded; rate {measure_rate(params)}")
