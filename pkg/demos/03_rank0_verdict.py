"""The rank-zero congruence criterion on a worked instance.

Curve 11a1, p = 3, F = the cubic field inside Q(zeta_7): all hypotheses are
decidable and verified, the twisted L-values are nonvanishing, and the theta
element restricted to F is a unit of Z_3[Gal(F/Q)] -- consistent with the
refined rank-zero prediction given trivial Sha.
"""

from rbsdlab import elliptic, theta

curve = elliptic.curve("11a1")
F = theta.FieldSpec(7, (6,))

report = theta.hypotheses_report(curve, F, 3)
for key in ("a", "b", "c", "d", "e", "H5"):
    entry = report[key]
    print(f"  ({key}) {entry['verdict']:15s} {entry['evidence']}")

verdict = theta.rank0_verdict(curve, F, 3, sha_trivial=True)
print()
print("Theta_F      :", verdict["theta"].carrier)
print("3-integral   :", verdict["integral"])
print("unit in Z3[G]:", verdict["unit"])
print("verdict      :", verdict["verdict"])
