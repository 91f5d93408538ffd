"""Exact plus modular symbols for Gamma_0(N).

The space is Manin's presentation: the free Q-module on P^1(Z/N) modulo the
two-term (x + xS), three-term (x + xTS + x(TS)^2) and star ((c:d) ~ (-c:d))
relations.  Hecke operators act through Merel's matrices of determinant l;
the eigen-functional of a rational elliptic curve is cut out of the dual by
matching eigenvalues against point counts, and paths {oo, a/c} are expanded
into Manin symbols by the continued-fraction trick.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from math import ceil, gcd

import mpmath as mp

from ._linalg import mat_vec, nullspace, primitive_integer_vector, rref, transpose
from .elliptic import CurveQ, ap_count, conductor, real_period
from .numth import primes_up_to, prime_divisors, xgcd

MAX_LEVEL = 1000  # resource guard; exact dense elimination beyond this is refused


class LevelTooLarge(ValueError):
    pass


class NoEigenline(ValueError):
    pass


class AmbiguousEigenline(ValueError):
    pass


class NotCoprime(ValueError):
    pass


class AllTwistsVanish(ArithmeticError):
    pass


class ReconstructionFailed(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# P^1(Z/N)


@lru_cache(maxsize=None)
def _p1_data(N: int):
    """Canonical representatives of P^1(Z/N) and the lookup map."""
    if N == 1:
        return [(0, 0)], {(0, 0): 0}
    units = [u for u in range(1, N) if gcd(u, N) == 1]
    canon: dict[tuple[int, int], tuple[int, int]] = {}
    reps: list[tuple[int, int]] = []
    index: dict[tuple[int, int], int] = {}
    for c in range(N):
        for d in range(N):
            if gcd(gcd(c, d), N) != 1:
                continue
            key = (c, d)
            if key in canon:
                continue
            orbit = {((u * c) % N, (u * d) % N) for u in units}
            rep = min(orbit)
            for pt in orbit:
                canon[pt] = rep
            idx = len(reps)
            reps.append(rep)
            for pt in orbit:
                index[pt] = idx
    return reps, index


def p1_index(N: int, c: int, d: int) -> int | None:
    """Index of (c:d) in P^1(Z/N), or None if it is not a projective point."""
    if N == 1:
        return 0
    c %= N
    d %= N
    if gcd(gcd(c, d), N) != 1:
        return None
    return _p1_data(N)[1][(c, d)]


# ---------------------------------------------------------------------------
# cusps


def _cusp_of_symbol(N: int, c: int, d: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """For the Manin symbol (c:d), a lift g in SL_2(Z) and the pair of cusps
    (g(oo), g(0)) as coprime pairs (num, den), den >= 0."""
    c %= N
    d %= N
    if c == 0 and N > 1:
        c2, d2 = 0, 1
    else:
        c2, d2 = c, d
        k = 0
        while gcd(c2, d2) != 1:
            d2 = d + k * N
            k += 1
            if k > N + 2:
                raise AssertionError("no coprime lift found")
    if c2 == 0:
        a, b = 1, 0
    else:
        g, a, mb = xgcd(d2, c2)
        assert g == 1
        b = -mb
    # now a d2 - b c2 = 1
    assert a * d2 - b * c2 == 1
    return _normalize_cusp(a, c2), _normalize_cusp(b, d2)


def _normalize_cusp(p: int, q: int) -> tuple[int, int]:
    if q == 0:
        return (1, 0)
    if q < 0:
        p, q = -p, -q
    g = gcd(abs(p), q)
    if g:
        p, q = p // g, q // g
    return (p, q)


def _cusps_equivalent(N: int, c1: tuple[int, int], c2: tuple[int, int]) -> bool:
    """Gamma_0(N)-equivalence of cusps p1/q1 ~ p2/q2 (coprime pairs)."""
    p1, q1 = c1
    p2, q2 = c2
    s1 = pow(p1, -1, q1) if q1 > 1 else (1 if q1 == 0 else 0)
    s2 = pow(p2, -1, q2) if q2 > 1 else (1 if q2 == 0 else 0)
    g = gcd(q1 * q2, N)
    return (s1 * q2 - s2 * q1) % g == 0


# ---------------------------------------------------------------------------
# the space


@dataclass(frozen=True)
class ManinSymbolSpace:
    level: int
    generators: tuple[tuple[int, int], ...]  # P^1 representatives
    gen_img: tuple[tuple[Fraction, ...], ...]  # generator -> coordinates in V
    dim: int  # dim of the plus quotient V
    boundary: tuple[tuple[Fraction, ...], ...]  # V-basis -> cusp-class space
    cuspidal_basis: tuple[tuple[Fraction, ...], ...]  # basis of ker(boundary)
    cuspidal_dim: int

    def project_generator(self, idx: int | None) -> tuple[Fraction, ...]:
        if idx is None:
            return (Fraction(0),) * self.dim
        return self.gen_img[idx]

    def hecke_matrix(self, ell: int) -> list[list[Fraction]]:
        return _hecke_matrix(self, ell)

    def __repr__(self):
        return (
            f"ManinSymbolSpace(N={self.level}, dim={self.dim}, "
            f"cuspidal_dim={self.cuspidal_dim})"
        )


@lru_cache(maxsize=None)
def build_space(N: int) -> ManinSymbolSpace:
    """Plus-quotient Manin symbol space for Gamma_0(N)."""
    if N < 1:
        raise ValueError("level must be positive")
    if N > MAX_LEVEL:
        raise LevelTooLarge(f"level {N} exceeds the MAX_LEVEL guard {MAX_LEVEL}")
    reps, index = _p1_data(N)
    n = len(reps)

    def idx(c, d):
        return index[(c % N, d % N)] if N > 1 else 0

    rows = []
    for i, (c, d) in enumerate(reps):
        r = [Fraction(0)] * n
        r[i] += 1
        r[idx(d, -c)] += 1  # x + xS
        rows.append(r)
        r = [Fraction(0)] * n
        r[i] += 1
        r[idx(c + d, -c)] += 1  # x TS
        r[idx(d, -c - d)] += 1  # x (TS)^2
        rows.append(r)
        r = [Fraction(0)] * n
        r[i] += 1
        r[idx(-c, d)] -= 1  # star
        if any(r):
            rows.append(r)
    red, pivots = rref(rows)
    free = [c for c in range(n) if c not in pivots]
    dim = len(free)
    pos_of_free = {c: k for k, c in enumerate(free)}
    gen_img = []
    pivot_row = {c: i for i, c in enumerate(pivots)}
    for j in range(n):
        v = [Fraction(0)] * dim
        if j in pos_of_free:
            v[pos_of_free[j]] = Fraction(1)
        else:
            row = red[pivot_row[j]]
            for fc in free:
                v[pos_of_free[fc]] = -row[fc]
        gen_img.append(tuple(v))

    # cusp classes (Gamma_0(N)-equivalence, plus the star identification
    # [p/q] ~ [-p/q] since V is the plus quotient)
    cusp_pairs = [_cusp_of_symbol(N, c, d) for c, d in reps]
    all_cusps = sorted({c for pair in cusp_pairs for c in pair})
    classes: list[tuple[int, int]] = []
    class_of: dict[tuple[int, int], int] = {}
    for cu in all_cusps:
        neg = _normalize_cusp(-cu[0], cu[1])
        found = None
        for k, rep in enumerate(classes):
            if _cusps_equivalent(N, cu, rep) or _cusps_equivalent(N, neg, rep):
                found = k
                break
        if found is None:
            classes.append(cu)
            found = len(classes) - 1
        class_of[cu] = found
    ncl = len(classes)
    bnd_gen = []
    for (cinf, czer) in cusp_pairs:
        v = [Fraction(0)] * ncl
        v[class_of[cinf]] += 1
        v[class_of[czer]] -= 1
        bnd_gen.append(v)
    # boundary on the V-basis
    boundary = []
    for fc in free:
        boundary.append(tuple(bnd_gen[fc]))
    # relation-consistency: boundary must kill every relation image; since we
    # composed with the quotient this is automatic on the basis
    cusp_basis = nullspace(transpose([list(b) for b in boundary])) if dim else []
    # nullspace of boundary^T? boundary : V -> cusp space; kernel of the map
    # = nullspace of the (ncl x dim) matrix with columns the boundary images
    bmat = [[boundary[j][i] for j in range(dim)] for i in range(ncl)]
    cusp_basis = nullspace(bmat) if dim else []
    return ManinSymbolSpace(
        level=N,
        generators=tuple(reps),
        gen_img=tuple(gen_img),
        dim=dim,
        boundary=tuple(boundary),
        cuspidal_basis=tuple(tuple(v) for v in cusp_basis),
        cuspidal_dim=len(cusp_basis),
    )


# ---------------------------------------------------------------------------
# Hecke action


@lru_cache(maxsize=None)
def merel_matrices(ell: int) -> tuple[tuple[int, int, int, int], ...]:
    """Matrices (a, b, c, d) with ad - bc = ell, a > b >= 0, d > c >= 0."""
    out = []
    for a in range(1, ell + 1):
        for d in range(1, ell + 2 - a):
            m = a * d - ell
            if m < 0:
                continue
            if m == 0:
                for b in range(min(1, a)):
                    pass
                for c in range(d):
                    out.append((a, 0, c, d))
                for b in range(1, a):
                    out.append((a, b, 0, d))
                continue
            for b in range(1, a):
                if m % b == 0 and m // b < d:
                    out.append((a, b, m // b, d))
    return tuple(out)


class PrimeDividesLevel(ValueError):
    pass


def _hecke_matrix(space: ManinSymbolSpace, ell: int) -> list[list[Fraction]]:
    """Matrix of T_ell on the plus quotient V (columns indexed by basis)."""
    from .numth import is_prime

    N = space.level
    if not is_prime(ell):
        raise ValueError(f"T_{ell}: only prime indices are supported")
    if N % ell == 0:
        raise PrimeDividesLevel(f"{ell} divides the level {N}")
    reps = space.generators
    # basis j corresponds to the generator whose image is the j-th unit vector
    basis_gens = []
    seen = set()
    for i, img in enumerate(space.gen_img):
        nz = [k for k, x in enumerate(img) if x != 0]
        if len(nz) == 1 and img[nz[0]] == 1 and nz[0] not in seen:
            basis_gens.append((nz[0], i))
            seen.add(nz[0])
    basis_gens.sort()
    assert len(basis_gens) == space.dim
    cols = []
    for _, gi in basis_gens:
        u, v = reps[gi]
        acc = [Fraction(0)] * space.dim
        for a, b, c, d in merel_matrices(ell):
            cc, dd = (u * a + v * c) % N, (u * b + v * d) % N
            j = p1_index(N, cc, dd)
            if j is None:
                continue
            img = space.gen_img[j]
            for k in range(space.dim):
                if img[k]:
                    acc[k] += img[k]
        cols.append(acc)
    # cols[j] = image of basis vector j; matrix entries m[i][j]
    return [[cols[j][i] for j in range(space.dim)] for i in range(space.dim)]


def hecke_operator(space: ManinSymbolSpace, ell: int) -> list[list[Fraction]]:
    """Matrix of T_ell on the plus quotient (ell prime, ell not dividing N)."""
    return _hecke_matrix(space, ell)


def sturm_bound(N: int) -> int:
    mu = N
    for p in prime_divisors(N):
        mu = mu // p * (p + 1)
    return ceil(mu / 6)


# ---------------------------------------------------------------------------
# the eigen-functional


@dataclass(frozen=True)
class ModularSymbolFunctional:
    space: ManinSymbolSpace
    curve: CurveQ
    dual_vector: tuple[Fraction, ...]  # functional on V (integral, primitive)
    scaling: Fraction
    normalized: bool

    @property
    def level(self) -> int:
        return self.space.level

    def raw_path_value(self, a: int, c: int) -> Fraction:
        """Value of the un-normalized functional on the path {oo, a/c}."""
        return _path_value(self.space, self.dual_vector, a, c)

    def eval_symbol(self, a: int, c: int) -> Fraction:
        """[a/c]^+ (requires gcd(a, c) = 1 or c = 1)."""
        if c < 1:
            raise ValueError("denominator must be positive")
        if c > 1 and gcd(a, c) != 1:
            raise NotCoprime(f"gcd({a}, {c}) > 1")
        return self.scaling * self.raw_path_value(a, c)


def eval_plus_symbol(f: ModularSymbolFunctional, a: int, c: int) -> Fraction:
    return f.eval_symbol(a, c)


def _path_value(space: ManinSymbolSpace, w, a: int, c: int) -> Fraction:
    """Functional w applied to the modular symbol {oo, a/c} via convergents."""
    N = space.level
    if c == 0:
        return Fraction(0)
    if c < 0:
        a, c = -a, -c
    g = gcd(abs(a), c)
    if g > 1:
        a, c = a // g, c // g
    # continued fraction convergents of a/c
    p_prev, q_prev = 1, 0  # p_{-1}/q_{-1} = oo
    p_cur, q_cur = None, None
    x, y = a, c
    quotients = []
    while y:
        q, r = divmod(x, y)
        quotients.append(q)
        x, y = y, r
    total = Fraction(0)
    sign = 1  # (-1)^(k-1) for k = 0 is -1? track det correction explicitly
    p_km1, q_km1 = 1, 0
    p_km2, q_km2 = 0, 1
    for k, q in enumerate(quotients):
        p_k = q * p_km1 + p_km2
        q_k = q * q_km1 + q_km2
        # {p_{k-1}/q_{k-1}, p_k/q_k} = g {0, oo} with g = [[p_k, e p_{k-1}],
        # [q_k, e q_{k-1}]], e = (-1)^(k-1) so that det g = 1
        e = 1 if (k % 2 == 1) else -1
        j = p1_index(N, q_k, e * q_km1)
        if j is not None:
            img = space.gen_img[j]
            for t in range(space.dim):
                if img[t] and w[t]:
                    total += w[t] * img[t]
        p_km2, q_km2 = p_km1, q_km1
        p_km1, q_km1 = p_k, q_k
    assert (p_km1, q_km1) == (a, c) or c == 1
    return total


def eigen_functional(space: ManinSymbolSpace, curve: CurveQ) -> ModularSymbolFunctional:
    """The rational line in the dual of V on which every good T_l acts by
    a_l(curve), with integral primitive coordinates (un-normalized)."""
    N = space.level
    if conductor(curve) != N:
        raise NoEigenline(f"curve conductor {conductor(curve)} != level {N}")
    bound = max(sturm_bound(N), 2)
    constraints: list[list[Fraction]] = []
    current: list[list[Fraction]] | None = None
    used = []
    for ell in primes_up_to(bound):
        if N % ell == 0:
            continue
        ap = ap_count(curve, ell)
        T = space.hecke_matrix(ell)
        Tt = transpose(T)
        for i in range(space.dim):
            row = list(Tt[i])
            row[i] -= ap
            constraints.append(row)
        used.append(ell)
        current = nullspace(constraints)
        if len(current) == 1:
            break
    if current is None or len(current) == 0:
        raise NoEigenline(f"no rational eigenline at level {N} for {curve}")
    if len(current) > 1:
        raise AmbiguousEigenline(
            f"eigenline not unique after primes {used}; raise the Sturm bound"
        )
    # verify against all remaining good primes up to the bound
    w = current[0]
    for ell in primes_up_to(bound):
        if N % ell == 0 or ell in used:
            continue
        T = space.hecke_matrix(ell)
        tw = mat_vec(transpose(T), w)
        ap = ap_count(curve, ell)
        if tw != [ap * x for x in w]:
            raise NoEigenline(f"eigenline fails T_{ell} consistency")
    wi = primitive_integer_vector(w)
    return ModularSymbolFunctional(
        space=space,
        curve=curve,
        dual_vector=tuple(Fraction(x) for x in wi),
        scaling=Fraction(1),
        normalized=False,
    )


# ---------------------------------------------------------------------------
# normalization against L-values


def _rational_reconstruct(x, max_den: int = 10**6, tol: float = 1e-8) -> Fraction:
    if isinstance(x, mp.mpc) or hasattr(x, "imag") and not isinstance(x, (int, float, Fraction)):
        if abs(mp.im(x)) > tol:
            raise ReconstructionFailed(f"{x} has a non-negligible imaginary part")
        x = mp.re(x)
    fr = Fraction(float(x)).limit_denominator(max_den)
    if abs(float(fr) - float(x)) > tol:
        raise ReconstructionFailed(f"{float(x)} is not close to a small rational")
    return fr


def normalize_functional(
    f: ModularSymbolFunctional, curve: CurveQ, digits: int = 20
) -> ModularSymbolFunctional:
    """Fix the scaling so that the interpolation anchor holds with Manin
    constant 1: [0]^+ = L(E,1)/Omega^+ when L(E,1) != 0, otherwise use the
    smallest even primitive character with a nonvanishing twisted L-value.
    """
    from . import lvalues  # deferred import; lvalues is numerics-only
    from .characters import enumerate_chars, gauss_sum

    if f.normalized:
        return f
    N = f.level
    per = real_period(curve, digits + 5)
    data = lvalues.an_coeffs(curve, lvalues.truncation_bound(N, 1, digits))
    with mp.workdps(digits + 10):
        L1 = lvalues.lseries_value(data)
        omega = per.omega_plus
        if abs(L1.value) > 10 * L1.error_bound and L1.error_bound < mp.mpf(10) ** (-digits + 2):
            raw = f.raw_path_value(0, 1)
            if raw == 0:
                raise ReconstructionFailed("raw functional kills {oo, 0} but L(E,1) != 0")
            scaling = _rational_reconstruct(L1.value / omega / mp.mpf(raw.numerator) * mp.mpf(raw.denominator))
            return replace(f, scaling=scaling, normalized=True)
        # rank > 0: search the smallest even primitive anchor character
        for c0 in range(3, 200):
            from .numth import is_squarefree

            if gcd(c0, N) != 1 or not is_squarefree(c0):
                continue
            for chi in enumerate_chars(c0, even_only=True):
                if chi.conductor != c0:
                    continue
                data_t = lvalues.an_coeffs(curve, lvalues.truncation_bound(N, c0, digits))
                Lchi = lvalues.twisted_lvalue(data_t, chi.conjugate())
                if abs(Lchi.value) <= 10 * Lchi.error_bound:
                    continue
                tau = gauss_sum(chi, c0)
                target = Lchi.value * tau.to_complex(mp) / (2 * omega)
                raw = Fraction(0)
                rawc = mp.mpc(0)
                for a in range(1, c0):
                    if gcd(a, c0) != 1:
                        continue
                    val = f.raw_path_value(a, c0)
                    if val:
                        rawc += chi(a).to_complex(mp) * mp.mpf(val.numerator) / mp.mpf(val.denominator)
                rawc = rawc / 2
                if abs(rawc) < mp.mpf(10) ** (-digits):
                    continue
                ratio = target / rawc
                if abs(ratio.imag) > 1e-8:
                    raise ReconstructionFailed("anchor ratio is not real")
                scaling = _rational_reconstruct(ratio.real)
                return replace(f, scaling=scaling, normalized=True)
        raise AllTwistsVanish("no nonvanishing even twist up to the search bound")


def attach_symbols(curve: CurveQ, digits: int = 20) -> ModularSymbolFunctional:
    """Convenience: build the space at the conductor, cut the eigenline and
    normalize it."""
    N = conductor(curve)
    space = build_space(N)
    return normalize_functional(eigen_functional(space, curve), curve, digits)


# ---------------------------------------------------------------------------
# optional on-disk cache (portable text; see README for the format)

CACHE_FORMAT_VERSION = 1


def save_space(space: ManinSymbolSpace, path: str) -> None:
    """Portable JSON dump of a built space (fractions as "num/den")."""
    import json

    def fr(x: Fraction) -> str:
        return f"{x.numerator}/{x.denominator}"

    doc = {
        "format_version": CACHE_FORMAT_VERSION,
        "level": space.level,
        "generators": [list(g) for g in space.generators],
        "gen_img": [[fr(x) for x in row] for row in space.gen_img],
        "dim": space.dim,
        "boundary": [[fr(x) for x in row] for row in space.boundary],
        "cuspidal_basis": [[fr(x) for x in row] for row in space.cuspidal_basis],
        "cuspidal_dim": space.cuspidal_dim,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_space(path: str) -> ManinSymbolSpace:
    import json

    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format_version") != CACHE_FORMAT_VERSION:
        raise ValueError(f"unsupported cache format {doc.get('format_version')}")

    def fr(s: str) -> Fraction:
        n, d = s.split("/")
        return Fraction(int(n), int(d))

    return ManinSymbolSpace(
        level=doc["level"],
        generators=tuple(tuple(g) for g in doc["generators"]),
        gen_img=tuple(tuple(fr(x) for x in row) for row in doc["gen_img"]),
        dim=doc["dim"],
        boundary=tuple(tuple(fr(x) for x in row) for row in doc["boundary"]),
        cuspidal_basis=tuple(tuple(fr(x) for x in row) for row in doc["cuspidal_basis"]),
        cuspidal_dim=doc["cuspidal_dim"],
    )
