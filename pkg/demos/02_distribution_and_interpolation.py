"""The two halves of the interpolation story.

Exact half: the norm-compatibility (distribution relation) between theta
elements at levels pc and c, checked coefficient-by-coefficient.

Numerical half: character components of theta against twisted central
L-values times Gauss sums over twice the real period.
"""

from rbsdlab import elliptic, modsym, theta
from rbsdlab.characters import enumerate_chars

f = modsym.attach_symbols(elliptic.curve("11a1"))

print("distribution relations for 11a1:")
for c, p in ((1, 3), (1, 7), (5, 3), (7, 2), (13, 3)):
    res = theta.distribution_check(f, c, p)
    print(f"  pi(Theta_{p*c}) = -sigma_p (p - sigma_p^-1 a_p + sigma_p^-2) Theta_{c}:",
          "exact" if res["passed"] else "FAILED")

print()
print("interpolation at level 7 (cubic characters):")
for chi in enumerate_chars(7, even_only=True):
    res, lhs, rhs = theta.interpolation_residual(f, chi, 7, digits=16)
    print(f"  chi = {chi}:  |(Theta)_chi - (c/c_chi) L_c tau_c / 2 Omega+| = {float(res):.2e}")
