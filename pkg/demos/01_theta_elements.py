"""Theta elements of 11a1 and 37a1, from scratch.

Builds the plus modular-symbol space at the conductor, cuts out the
eigen-functional, normalizes it against L(E,1)/Omega+ (or a twisted anchor
when the rank is positive), and assembles a few regularized theta elements.
"""

from rbsdlab import elliptic, modsym, theta

for label in ("11a1", "37a1"):
    curve = elliptic.curve(label)
    print(f"== {label}:  y^2 {'+ xy' if curve.ainvs[0] else ''} ... {curve.ainvs}")
    print("   conductor:", elliptic.conductor(curve), " torsion:", elliptic.torsion_order(curve))

    f = modsym.attach_symbols(curve)
    print("   normalization scaling:", f.scaling, "  [0]^+ =", f.eval_symbol(0, 1))

    for c in (1, 5, 7):
        if c % elliptic.conductor(curve) == 0:
            continue
        th = theta.theta_element(f, c)
        print(f"   Theta at level {c}:", th.carrier)

    # restriction to the cubic field inside Q(zeta_7)
    if elliptic.conductor(curve) != 7:
        F = theta.FieldSpec(7, (6,))
        thF = theta.restrict_to_field(theta.theta_element(f, 7), F)
        print("   restricted to the cubic field in Q(zeta_7):", thF.carrier)
    print()
