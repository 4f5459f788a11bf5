"""Privacy certificates, exhaustive checks, and what tampering looks like."""

from spircap import Pattern, spir_capacity
from spircap.patterns import EAVESDROPPING
from spircap.protocol import plan_scheme
from spircap.verifier import USER, Eve, exhaustive_privacy, overload_set, verify_all

pc = Pattern.from_sets(5, [[1, 2], [1, 4], [2, 4], [3, 4], [5]])
pe = Pattern.from_sets(5, [[1, 2, 3], [2, 4], [5]], EAVESDROPPING)
rep = spir_capacity(pc, pe)
params = plan_scheme(rep.y_star, rep.f_star, 3, rep.joint_pattern)

bundle = verify_all(params, pc, pe, trials=200)
for cert in bundle.certificates:
    note = " (informational: eavesdropping sets vs. the user)" if cert.informational else ""
    print(f"  {cert.constraint:<16} {cert.method:<11} {'ok' if cert.verdict else 'FAIL'}{note}")
print("skipped:", bundle.skipped)

# Give server 5 one more query than the code dimension allows.
bad = overload_set(params, (5,))
print("\ntampered counts", bad.per_server_counts)
print("failures:", [c.constraint for c in verify_all(bad, pc, pe, trials=5).failures()])

# Two servers, two one-symbol messages: small enough to enumerate.
micro = plan_scheme([1, 1], 2, 2, Pattern.singletons(2, "joint"))
print("\nexhaustive on the two-server instance over GF(%d)" % micro.field.q)
print("  server 1, theta 1 vs 2:", exhaustive_privacy(micro, (1,), (1, 2)).verdict)
print("  user learns nothing else:", exhaustive_privacy(micro, USER, 1).verdict)
print("  eavesdropper on server 2:", exhaustive_privacy(micro, Eve((2,))).verdict)
print("  eavesdropper on both:", exhaustive_privacy(micro, Eve((1, 2))).verdict)
