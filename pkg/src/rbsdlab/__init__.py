"""Exact-arithmetic toolkit for group-ring congruences attached to rational
elliptic curves over real abelian fields.

Subpackage map:

* ``arith``      -- exact cyclotomic field arithmetic (power basis mod Phi_n)
* ``elliptic``   -- curves over Q: minimal models, Tate data, a_l, torsion, periods
* ``modsym``     -- plus modular symbols for Gamma_0(N) and their evaluation
* ``characters`` -- Dirichlet characters and (modified) Gauss sums
* ``grouprings`` -- finite abelian group rings, augmentation and Fitting ideals
* ``theta``      -- regularized theta elements and verification criteria
* ``lvalues``    -- numerical twisted L-values and equivariance checks
* ``padic``      -- unramified p-adic arithmetic, formal logs, log-resolvents
* ``cli``        -- job runner producing machine-readable reports
"""

__version__ = "0.1.0"
