"""Logarithmic resolvents and the integrality prediction at p = 5.

Everything p-adic happens inside one unramified ring Z_{5^6}/5^15: the
formal-group logarithm of a random semi-local point, the character-twisted
Galois sums, and the exact algebraic L-value parts carried over from theta
through a pinned cyclotomic embedding.
"""

from rbsdlab import elliptic, padic, theta

curve = elliptic.curve("11a1")
F = theta.FieldSpec(7, (6,))
p, prec = 5, 15

struct = padic.semilocal_structure(F, p, prec, extra_orders=(21,))
print("working ring: Z_{%d^%d} at precision %d^%d" % (p, struct.ring.degree, p, prec))
print("places over %d: %d (residue degree %d)" % (p, struct.n_places, struct.f))

x = padic.random_semilocal_point(struct, seed=42)
print("point valuations:", [xi.valuation() for xi in x])

logseries = padic.formal_group_log(curve, 40)
print("log coefficients c_1..c_6:", [str(c) for c in logseries.coefficients[:6]])

res = padic.first_prediction_sum(curve, F, p, x, prec)
print()
print("assembled group-ring element (mod 5^%d):" % res["surviving_precision"])
print(" ", res["element"])
print("integral:", res["integral"])
print("mod-|G| congruences:", res["congruences_mod_G"])
