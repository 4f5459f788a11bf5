"""Capacity of a few collusion/eavesdropping configurations.

Walks through a five-server system with mixed colluding and eavesdropping
sets, then shows how the symmetric case reduces to 1 - max(T, E)/N.
"""

from fractions import Fraction

from spircap import Pattern, spir_capacity
from spircap.patterns import EAVESDROPPING, incidence_matrix

pc = Pattern.from_sets(5, [[1, 2], [1, 4], [2, 4], [3, 4], [5]])
pe = Pattern.from_sets(5, [[1, 2, 3], [2, 4], [5]], EAVESDROPPING)

report = spir_capacity(pc, pe, rho=Fraction(3, 5))
print("joint pattern:", report.joint_pattern.to_lists())
print("incidence matrix:")
for row in incidence_matrix(report.joint_pattern).tolist():
    print("   ", row)
for line in report.summary_lines():
    print(line)

# Below the randomness threshold nothing can be retrieved.
starved = spir_capacity(pc, pe, rho=Fraction(1, 2))
print("\nwith rho = 1/2:", starved.capacity)

print("\nsymmetric T/E thresholds on 6 servers")
for t, e in [(1, 1), (2, 1), (1, 3), (4, 2)]:
    rep = spir_capacity(Pattern.symmetric(6, t), Pattern.symmetric(6, e, EAVESDROPPING))
    print(f"  T={t} E={e}: F* = {rep.f_star}, C = {rep.capacity}")
