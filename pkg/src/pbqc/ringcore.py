"""Cohomology rings, bundle Chern data, projectivization, and residue identities.

A ring element is a sparse vector ``dict[int, scalar]`` over the ring basis.
Polynomials in the equivariant parameter are ``dict[int, vec]`` keyed by the
power of lambda.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import rat, scalar_is_zero


class RingError(ValueError):
    pass


class TruncationError(ValueError):
    """A residue/series extraction needed more terms than were supplied."""


Vec = dict  # basis index -> scalar


def vec_add(a: Vec, b: Vec) -> Vec:
    out = dict(a)
    for i, c in b.items():
        s = out.get(i, 0) + c
        if scalar_is_zero(s):
            out.pop(i, None)
        else:
            out[i] = s
    return out


def vec_scale(a: Vec, c) -> Vec:
    if scalar_is_zero(c):
        return {}
    return {i: v * c for i, v in a.items()}


def vec_is_zero(a: Vec) -> bool:
    return all(scalar_is_zero(c) for c in a.values())


class CohRing:
    """Evenly graded commutative ring with Poincare pairing and curve data.

    ``struct[i][j]`` is the basis expansion of the cup product phi_i phi_j.
    ``curve_pairing[a][b]`` pairs the a-th degree-2 basis element (indexed by
    ``h2_basis``) with the b-th effective-curve generator.
    """

    def __init__(self, basis_labels, degrees, struct, pairing, h2_basis,
                 mori_rank, curve_pairing, name=""):
        self.basis_labels = tuple(basis_labels)
        self.degrees = tuple(degrees)
        self.struct = struct
        self.pairing = pairing
        self.h2_basis = tuple(h2_basis)
        self.mori_rank = mori_rank
        self.curve_pairing = curve_pairing
        self.name = name or "ring"
        self.dim = len(self.basis_labels)
        self.top_degree = max(degrees) if degrees else 0
        if self.degrees[0] != 0:
            raise RingError("basis element 0 must be the unit")

    # -- element constructors -------------------------------------------------
    def zero_vec(self) -> Vec:
        return {}

    def one_vec(self) -> Vec:
        return {0: Fraction(1)}

    def basis_vec(self, i: int) -> Vec:
        return {i: Fraction(1)}

    def index_of(self, label: str) -> int:
        return self.basis_labels.index(label)

    # -- arithmetic -----------------------------------------------------------
    def cup(self, a: Vec, b: Vec) -> Vec:
        out: Vec = {}
        for i, ca in a.items():
            row = self.struct[i]
            for j, cb in b.items():
                prod = row[j]
                if not prod:
                    continue
                c = ca * cb
                for k, ck in prod.items():
                    s = out.get(k, 0) + c * ck
                    if scalar_is_zero(s):
                        out.pop(k, None)
                    else:
                        out[k] = s
        return out

    def cup_power(self, a: Vec, n: int) -> Vec:
        out = self.one_vec()
        for _ in range(n):
            out = self.cup(out, a)
        return out

    def integrate(self, a: Vec):
        """Pairing against the fundamental class: sum of a_i * \\int phi_i."""
        total = Fraction(0)
        for i, c in a.items():
            w = self.pairing[i][0]
            if w != 0:
                total = total + c * w
        return total

    def poincare_pair(self, a: Vec, b: Vec):
        return self.integrate(self.cup(a, b))

    def vec_degree(self, a: Vec) -> int | None:
        """Degree if homogeneous, else raises."""
        degs = {self.degrees[i] for i, c in a.items() if not scalar_is_zero(c)}
        if not degs:
            return None
        if len(degs) > 1:
            raise RingError(f"inhomogeneous element: degrees {sorted(degs)}")
        return degs.pop()

    # -- structural checks ----------------------------------------------------
    def check(self) -> None:
        """Exhaustive sanity checks: unit, commutativity, associativity,
        grading, pairing symmetry/grading/nondegeneracy."""
        n = self.dim
        for i in range(n):
            if self.struct[0][i] != self.basis_vec(i):
                raise RingError("unit fails")
            for j in range(n):
                if self.struct[i][j] != self.struct[j][i]:
                    raise RingError("commutativity fails")
                d = self.degrees[i] + self.degrees[j]
                for k, c in self.struct[i][j].items():
                    if not scalar_is_zero(c) and self.degrees[k] != d:
                        raise RingError("struct constants not graded")
                if self.pairing[i][j] != self.pairing[j][i]:
                    raise RingError("pairing not symmetric")
                if self.pairing[i][j] != 0 and d != self.top_degree:
                    raise RingError("pairing not graded")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs = self.cup(self.struct[i][j], self.basis_vec(k))
                    rhs = self.cup(self.basis_vec(i), self.struct[j][k])
                    if lhs != rhs:
                        raise RingError(f"associativity fails at ({i},{j},{k})")
        if _matrix_rank([[Fraction(x) for x in row] for row in self.pairing]) != n:
            raise RingError("pairing degenerate")

    def __repr__(self):
        return f"CohRing({self.name}, dim={self.dim})"


def _matrix_rank(rows) -> int:
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = Fraction(1) / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                c = rows[r][col]
                rows[r] = [x - c * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def make_point() -> CohRing:
    return CohRing(("1",), (0,), [[{0: Fraction(1)}]], [[Fraction(1)]],
                   (), 0, [], name="pt")


def make_projective_space(n: int) -> CohRing:
    """H^*(P^n) = Q[h]/(h^{n+1}), one Mori generator, h . line = 1."""
    if n < 1:
        raise RingError("use make_point() for n = 0")
    struct = [[({i + j: Fraction(1)} if i + j <= n else {}) for j in range(n + 1)]
              for i in range(n + 1)]
    pairing = [[Fraction(1) if i + j == n else Fraction(0) for j in range(n + 1)]
               for i in range(n + 1)]
    labels = tuple("1" if i == 0 else ("h" if i == 1 else f"h^{i}") for i in range(n + 1))
    return CohRing(labels, tuple(2 * i for i in range(n + 1)), struct, pairing,
                   (1,), 1, [[1]], name=f"P{n}")


def product_ring(a: CohRing, b: CohRing) -> CohRing:
    """Tensor product ring (even cohomology Kunneth)."""
    na, nb = a.dim, b.dim
    idx = lambda i, j: i * nb + j
    labels, degrees = [], []
    for i in range(na):
        for j in range(nb):
            la, lb = a.basis_labels[i], b.basis_labels[j]
            labels.append(la if lb == "1" else (lb if la == "1" else f"{la}*{lb}"))
            degrees.append(a.degrees[i] + b.degrees[j])
    struct = [[None] * (na * nb) for _ in range(na * nb)]
    pairing = [[Fraction(0)] * (na * nb) for _ in range(na * nb)]
    for i1 in range(na):
        for j1 in range(nb):
            for i2 in range(na):
                for j2 in range(nb):
                    prod = {}
                    for k1, c1 in a.struct[i1][i2].items():
                        for k2, c2 in b.struct[j1][j2].items():
                            prod[idx(k1, k2)] = c1 * c2
                    struct[idx(i1, j1)][idx(i2, j2)] = prod
                    pairing[idx(i1, j1)][idx(i2, j2)] = \
                        a.pairing[i1][i2] * b.pairing[j1][j2]
    h2 = tuple(idx(i, 0) for i in a.h2_basis) + tuple(idx(0, j) for j in b.h2_basis)
    cp = []
    for i in a.h2_basis:
        cp.append([a.curve_pairing[a.h2_basis.index(i)][m] for m in range(a.mori_rank)]
                  + [0] * b.mori_rank)
    for j in b.h2_basis:
        cp.append([0] * a.mori_rank
                  + [b.curve_pairing[b.h2_basis.index(j)][m] for m in range(b.mori_rank)])
    return CohRing(labels, degrees, struct, pairing, h2,
                   a.mori_rank + b.mori_rank, cp, name=f"{a.name}x{b.name}")


@dataclass
class BundleData:
    """Rank and total Chern class of a vector bundle on a base ring.

    ``chern[i]`` is c_{i+1}(V) as a base-ring vector; classes beyond the
    base dimension must vanish and are stored as empty vectors.
    """
    base: CohRing
    rank: int
    chern: tuple

    def __post_init__(self):
        if self.rank < 1:
            raise RingError("bundle rank must be >= 1")
        self.chern = tuple(dict(c) for c in self.chern)
        if len(self.chern) != self.rank:
            raise RingError("need exactly rank Chern classes")
        for i, c in enumerate(self.chern):
            for b, x in c.items():
                if not scalar_is_zero(x) and self.base.degrees[b] != 2 * (i + 1):
                    raise RingError(f"c_{i+1} has wrong degree")

    def c(self, i: int) -> Vec:
        """c_i(V); c_0 = 1, zero outside 0..rank."""
        if i == 0:
            return self.base.one_vec()
        if 1 <= i <= self.rank:
            return dict(self.chern[i - 1])
        return {}

    def c1_pair_curves(self) -> tuple:
        """c_1(V) . (Mori generator) for each base curve generator."""
        out = []
        for m in range(self.base.mori_rank):
            total = Fraction(0)
            for pos, b in enumerate(self.base.h2_basis):
                coeff = self.c(1).get(b, 0)
                if not scalar_is_zero(coeff):
                    total += coeff * self.base.curve_pairing[pos][m]
            out.append(total)
        return tuple(out)

    def chern_character(self, l: int) -> Vec:
        """ch_l(V) from Chern classes via Newton's identities (no root splitting)."""
        if l == 0:
            return {0: Fraction(self.rank)}
        if 2 * l > self.base.top_degree:
            return {}
        ring = self.base
        power_sums = {0: {0: Fraction(self.rank)}}
        for k in range(1, l + 1):
            acc = vec_scale(self.c(k), Fraction((-1) ** (k - 1) * k))
            for i in range(1, k):
                term = ring.cup(self.c(i), power_sums[k - i])
                acc = vec_add(acc, vec_scale(term, Fraction((-1) ** (i - 1))))
            power_sums[k] = acc
        fact = 1
        for i in range(1, l + 1):
            fact *= i
        return vec_scale(power_sums[l], Fraction(1, fact))


def trivial_bundle(base: CohRing, rank: int) -> BundleData:
    return BundleData(base, rank, tuple({} for _ in range(rank)))


def split_bundle(base: CohRing, first_chern_classes) -> BundleData:
    """Direct sum of line bundles given by their first Chern classes."""
    total = base.one_vec()
    for xi in first_chern_classes:
        total = base.cup(total, vec_add(base.one_vec(), dict(xi)))
    rank = len(first_chern_classes)
    chern = []
    for i in range(1, rank + 1):
        ci = {b: c for b, c in total.items() if base.degrees[b] == 2 * i}
        chern.append(ci)
    return BundleData(base, rank, tuple(chern))


def line_on_pn(base: CohRing, d: int) -> Vec:
    """c_1(O(d)) = d*h on a projective space ring."""
    return {base.h2_basis[0]: Fraction(d)} if d else {}


def cotangent_twisted_bundle(n: int, base: CohRing | None = None) -> BundleData:
    """The twisted cotangent bundle of P^n whose dual is globally generated.

    Its total Chern class is 1/(1+h) mod h^{n+1}, i.e. c_j = (-1)^j h^j.
    """
    if n < 2:
        raise RingError("twisted cotangent bundle needs n >= 2")
    base = base or make_projective_space(n)
    chern = tuple({j: Fraction((-1) ** j)} for j in range(1, n + 1))
    return BundleData(base, n, chern)


def equivariant_euler(bundle: BundleData) -> dict:
    """e_x(V) = sum_i x^i c_{r-i}(V) as a polynomial in x (dict power -> vec)."""
    return {i: bundle.c(bundle.rank - i) for i in range(bundle.rank + 1)
            if bundle.c(bundle.rank - i)}


def euler_inverse_expansion(bundle: BundleData, min_power: int | None = None) -> dict:
    """Expansion of e_x(V)^{-1} at x = infinity, as dict power -> base vec.

    Exact and finite: e_x^{-1} = x^{-r} (1 + n)^{-1} with n nilpotent, so the
    geometric series terminates.  Powers below ``min_power`` are dropped when
    a bound is given.
    """
    ring, r = bundle.base, bundle.rank
    # n = sum_{i>=1} c_i(V) x^{-i}
    nil = {-i: bundle.c(i) for i in range(1, r + 1) if bundle.c(i)}
    out = {0: ring.one_vec()}
    power = dict(nil)
    sign = -1
    while power:
        for p, v in power.items():
            out[p] = vec_add(out.get(p, {}), vec_scale(v, Fraction(sign)))
        nxt = {}
        for p1, v1 in power.items():
            for p2, v2 in nil.items():
                prod = ring.cup(v1, v2)
                if prod:
                    nxt[p1 + p2] = vec_add(nxt.get(p1 + p2, {}), prod)
        power = {p: v for p, v in nxt.items() if not vec_is_zero(v)}
        sign = -sign
    return {p - r: v for p, v in out.items()
            if not vec_is_zero(v) and (min_power is None or p - r >= min_power)}


def residue_pushforward(f: dict, bundle: BundleData, f_trunc_order: int | None = None) -> Vec:
    """pi_*(kappa(f)) as the lambda^{-1} coefficient of f(lambda)/e_lambda(V).

    ``f`` is a polynomial/series in lambda over the base (dict power -> vec);
    ``f_trunc_order`` marks the first unknown lambda power of a truncated
    series input.  Raises TruncationError if the residue needs unknown terms.
    """
    inv = euler_inverse_expansion(bundle)
    ring = bundle.base
    needed = max((-p - 1) for p in inv.keys())  # largest f-power that can contribute
    if f_trunc_order is not None and f_trunc_order <= needed:
        raise TruncationError(
            f"residue needs f up to lambda^{needed}, truncated at {f_trunc_order}")
    out: Vec = {}
    for p, v in f.items():
        w = inv.get(-p - 1)
        if w:
            out = vec_add(out, ring.cup(v, w))
    return out


def kirwan(f: dict, pv: "ProjBundleRing") -> Vec:
    """Substitute lambda -> p and reduce modulo the p^r relation."""
    out: Vec = {}
    for power, v in f.items():
        if power < 0:
            raise RingError("kirwan needs a polynomial in lambda")
        out = vec_add(out, pv.cup(pv.embed_base(v), pv.p_power(power)))
    return out


def equivariant_pairing(a: dict, b: dict, bundle: BundleData, min_power: int) -> dict:
    """(a, b)_V = int_B a b e_lambda(V)^{-1}, expanded at lambda = infinity.

    Returns dict lambda power -> Fraction, keeping powers >= min_power.
    """
    ring = bundle.base
    prod: dict = {}
    for p1, v1 in a.items():
        for p2, v2 in b.items():
            c = ring.cup(v1, v2)
            if c:
                prod[p1 + p2] = vec_add(prod.get(p1 + p2, {}), c)
    inv = euler_inverse_expansion(bundle)
    out: dict = {}
    for p, v in prod.items():
        for q, w in inv.items():
            if p + q < min_power:
                continue
            val = ring.integrate(ring.cup(v, w))
            if not scalar_is_zero(val):
                s = out.get(p + q, Fraction(0)) + val
                if scalar_is_zero(s):
                    out.pop(p + q, None)
                else:
                    out[p + q] = s
    return out


class ProjBundleRing(CohRing):
    """H^*(P(V)) = H^*(B)[p]/(p^r + c_1 p^{r-1} + ... + c_r).

    Basis phi_i p^k ordered with k major, i minor; flat index k*dim(B) + i.
    Curve generators are the base generators; the fiber line class is kept
    separate (it pairs with the dedicated q exponent in series).
    """

    def __init__(self, base: CohRing, bundle: BundleData):
        if bundle.rank < 2:
            raise RingError("projectivization needs rank >= 2")
        self.base = base
        self.bundle = bundle
        r, nb = bundle.rank, base.dim
        self._p_pow_cache: dict[int, Vec] = {}
        self._segre_cache: dict[int, Vec] = {}
        labels, degrees = [], []
        for k in range(r):
            for i in range(nb):
                li = base.basis_labels[i]
                if k == 0:
                    labels.append(li)
                else:
                    pk = "p" if k == 1 else f"p^{k}"
                    labels.append(pk if li == "1" else f"{li}*{pk}")
                degrees.append(base.degrees[i] + 2 * k)
        dim = r * nb
        self.basis_labels = tuple(labels)
        self.degrees = tuple(degrees)
        self.dim = dim
        # build multiplication table via repeated multiply-by-p
        struct = [[None] * dim for _ in range(dim)]
        for k1 in range(r):
            for i1 in range(nb):
                for k2 in range(r):
                    for i2 in range(nb):
                        bprod = base.struct[i1][i2]
                        acc: Vec = {}
                        pk = self.p_power(k1 + k2)
                        for m, cm in bprod.items():
                            for idx2, c2 in pk.items():
                                kk, ii = divmod(idx2, nb)
                                term = base.struct[ii][m] if ii else {m: Fraction(1)}
                                for mm, c3 in term.items():
                                    j = kk * nb + mm
                                    s = acc.get(j, 0) + cm * c2 * c3
                                    if scalar_is_zero(s):
                                        acc.pop(j, None)
                                    else:
                                        acc[j] = s
                        struct[k1 * nb + i1][k2 * nb + i2] = acc
        self.struct = struct
        pairing = [[Fraction(0)] * dim for _ in range(dim)]
        for k1 in range(r):
            for i1 in range(nb):
                for k2 in range(r):
                    for i2 in range(nb):
                        seg = self.segre(k1 + k2)
                        v = base.cup(base.cup(base.basis_vec(i1), base.basis_vec(i2)), seg)
                        pairing[k1 * nb + i1][k2 * nb + i2] = base.integrate(v)
        self.pairing = pairing
        self.h2_basis = tuple(i for i in base.h2_basis) + (nb,)  # base H^2 then p
        self.mori_rank = base.mori_rank
        cp = []
        for pos, _ in enumerate(base.h2_basis):
            cp.append([base.curve_pairing[pos][m] for m in range(base.mori_rank)])
        cp.append([0] * base.mori_rank)  # p pairs trivially with base classes' curves
        self.curve_pairing = cp
        self.fiber_pairing = tuple(0 for _ in base.h2_basis) + (1,)  # vs fiber line
        self.top_degree = max(degrees)
        self.name = f"P({bundle.rank})/{base.name}"
        self.p_index = nb  # index of phi_0 * p

    # -- geometry helpers ------------------------------------------------------
    def idx(self, i_base: int, k: int) -> int:
        return k * self.base.dim + i_base

    def embed_base(self, v: Vec) -> Vec:
        return dict(v)

    def p_power(self, m: int) -> Vec:
        """p^m reduced to the phi_i p^k basis (k < r)."""
        if m in self._p_pow_cache:
            return dict(self._p_pow_cache[m])
        r, nb = self.bundle.rank, self.base.dim
        if m < r:
            out = {m * nb: Fraction(1)}
        else:
            prev = self.p_power(m - 1)
            out = {}
            for j, c in prev.items():
                k, i = divmod(j, nb)
                if k < r - 1:
                    key = (k + 1) * nb + i
                    s = out.get(key, 0) + c
                    if scalar_is_zero(s):
                        out.pop(key, None)
                    else:
                        out[key] = s
                else:
                    # p * p^{r-1} = -(c_1 p^{r-1} + ... + c_r)
                    for jj in range(1, r + 1):
                        cj = self.bundle.c(jj)
                        if not cj:
                            continue
                        prod = self.base.cup(cj, self.base.basis_vec(i))
                        for ii, cc in prod.items():
                            key = (r - jj) * nb + ii
                            s = out.get(key, 0) - c * cc
                            if scalar_is_zero(s):
                                out.pop(key, None)
                            else:
                                out[key] = s
            out = {k: v for k, v in out.items() if not scalar_is_zero(v)}
        self._p_pow_cache[m] = dict(out)
        return out

    def segre(self, m: int) -> Vec:
        """pi_*(p^m) in the base ring, via the residue formula."""
        if m not in self._segre_cache:
            self._segre_cache[m] = residue_pushforward({m: self.base.one_vec()},
                                                       self.bundle)
        return dict(self._segre_cache[m])

    def pushforward(self, v: Vec) -> Vec:
        """Fiber integration pi_* on the projectivization."""
        nb = self.base.dim
        out: Vec = {}
        for j, c in v.items():
            k, i = divmod(j, nb)
            seg = self.segre(k)
            if seg:
                out = vec_add(out, vec_scale(self.base.cup(self.base.basis_vec(i), seg), c))
        return out

    def relation_residual(self) -> Vec:
        """p^r + c_1 p^{r-1} + ... + c_r, reduced; must be identically zero."""
        acc = self.p_power(self.bundle.rank)
        for j in range(1, self.bundle.rank + 1):
            term = self.cup(self.embed_base(self.bundle.c(j)),
                            self.p_power(self.bundle.rank - j))
            acc = vec_add(acc, term)
        return acc


def projectivize(base: CohRing, bundle: BundleData) -> ProjBundleRing:
    if bundle.base is not base:
        raise RingError("bundle lives on a different base")
    return ProjBundleRing(base, bundle)
