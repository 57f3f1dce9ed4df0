"""Discriminant groups D = L*/L with their Q/Z quadratic and bilinear forms.

Elements are tuples of residues in Smith-normal-form coordinates (one entry
per elementary divisor > 1).  Q/Z values are exact Fractions reduced to
[0, 1); nothing about the forms ever touches floating point, so isotropy and
orthogonality tests are exact.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import exact
from .errors import (
    EnumerationCapExceeded,
    MismatchedSignature,
    NotInDual,
    NotIsotropic,
    NotSubgroup,
)
from .lattice import Lattice, OverlatticeEmbedding, Sublattice, embedding_matrix

#: cap on full enumeration of a discriminant group (Gauss sums, orthogonal
#: subgroups); raise it explicitly for larger desk experiments.
ENUM_CAP = 10_000

DiscElement = tuple  # tuple of int residues, one per elementary divisor


def two_pi_e(x) -> complex:
    """e(x) = exp(2*pi*i*x) for a rational or float argument."""
    if isinstance(x, Fraction):
        x = exact.mod1(x)
    return cmath.exp(2j * math.pi * float(x))


@dataclass(frozen=True)
class DiscriminantGroup:
    """The finite quadratic module L*/L of an even lattice."""

    lattice: Lattice
    elementary_divisors: tuple[int, ...]
    generators: tuple[tuple[Fraction, ...], ...]  # dual vectors in L-coords
    order: int
    _u_transform: tuple[tuple[int, ...], ...] = field(repr=False, default=())
    _full_divisors: tuple[int, ...] = field(repr=False, default=())

    def zero(self) -> DiscElement:
        return (0,) * len(self.elementary_divisors)

    def add(self, x: DiscElement, y: DiscElement) -> DiscElement:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.elementary_divisors))

    def neg(self, x: DiscElement) -> DiscElement:
        return tuple((-a) % d for a, d in zip(x, self.elementary_divisors))

    def scale(self, k: int, x: DiscElement) -> DiscElement:
        return tuple((k * a) % d for a, d in zip(x, self.elementary_divisors))

    def elements(self, cap: int | None = ENUM_CAP):
        """All elements, in lexicographic coordinate order."""
        if cap is not None and self.order > cap:
            raise EnumerationCapExceeded(
                f"|D| = {self.order} exceeds enumeration cap {cap}")
        return list(itertools.product(*(range(d) for d in self.elementary_divisors)))

    def dual_vector(self, x: DiscElement) -> list[Fraction]:
        """A dual-lattice representative of x, in lattice coordinates."""
        n = self.lattice.rank
        v = [Fraction(0)] * n
        for c, g in zip(x, self.generators):
            for i in range(n):
                v[i] += c * g[i]
        return v

    def from_dual(self, vec) -> DiscElement:
        """Coordinates of the class of a dual vector; NotInDual if outside L*."""
        vec = [Fraction(v) for v in vec]
        g = self.lattice.gram_rows()
        gv = exact.mat_vec(g, vec)
        if not exact.is_integral(gv):
            raise NotInDual(f"vector {vec} does not pair integrally with the lattice")
        u = [list(row) for row in self._u_transform]
        c = exact.mat_vec(exact.frac_matrix(u), gv)
        coords = []
        for ci, d in zip(c, self._full_divisors):
            if d > 1:
                coords.append(int(ci) % d)
        return tuple(coords)

    def q(self, x: DiscElement) -> Fraction:
        """Quadratic form value in [0, 1): half the norm of a lift, mod 1."""
        v = self.dual_vector(x)
        return exact.mod1(self.lattice.norm(v) / 2)

    def b(self, x: DiscElement, y: DiscElement) -> Fraction:
        """Bilinear form value in [0, 1): the pairing of lifts, mod 1."""
        return exact.mod1(self.lattice.pairing(self.dual_vector(x), self.dual_vector(y)))

    def element_order(self, x: DiscElement) -> int:
        out = 1
        for c, d in zip(x, self.elementary_divisors):
            out = out * (d // math.gcd(c, d)) // math.gcd(out, d // math.gcd(c, d))
        return out

    def __repr__(self):
        divs = "x".join(f"Z/{d}" for d in self.elementary_divisors) or "0"
        return f"DiscriminantGroup({divs} of {self.lattice!r})"


_DISC_CACHE: dict[Lattice, DiscriminantGroup] = {}


def discriminant_group(lat: Lattice) -> DiscriminantGroup:
    """Compute L*/L via the Smith normal form of the Gram matrix.

    With U G V = D diagonal, the class of a dual vector nu corresponds to
    U (G nu) reduced mod the diagonal; the generator of the i-th cyclic
    factor lifts to G^{-1} U^{-1} e_i.
    """
    if lat in _DISC_CACHE:
        return _DISC_CACHE[lat]
    n = lat.rank
    if n == 0:
        group = DiscriminantGroup(lattice=lat, elementary_divisors=(), generators=(),
                                  order=1, _u_transform=(), _full_divisors=())
        _DISC_CACHE[lat] = group
        return group
    d, u, v = exact.snf(lat.gram_rows())
    divisors = [abs(d[i][i]) for i in range(n)]
    g_inv = exact.mat_inv(lat.gram_rows())
    u_inv = exact.mat_inv(exact.frac_matrix(u))
    gens = []
    kept = []
    for i in range(n):
        if divisors[i] > 1:
            col = [u_inv[r][i] for r in range(n)]
            gens.append(tuple(exact.mat_vec(g_inv, col)))
            kept.append(divisors[i])
    order = 1
    for di in divisors:
        order *= di
    group = DiscriminantGroup(
        lattice=lat,
        elementary_divisors=tuple(kept),
        generators=tuple(gens),
        order=order,
        _u_transform=tuple(tuple(int(x) for x in row) for row in u),
        _full_divisors=tuple(divisors),
    )
    _DISC_CACHE[lat] = group
    return group


def disc_eval(group: DiscriminantGroup, x: DiscElement, y: DiscElement):
    """(q(x), b(x, y)) as exact rationals in [0, 1)."""
    return group.q(x), group.b(x, y)


@dataclass(frozen=True)
class IsotropicSubgroup:
    parent: DiscriminantGroup
    generators: tuple[DiscElement, ...]
    elements: tuple[DiscElement, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


def check_isotropic(group: DiscriminantGroup, generators) -> IsotropicSubgroup:
    """Close the generators under addition and verify q vanishes throughout."""
    gens = []
    for g in generators:
        g = tuple(int(c) for c in g)
        if len(g) != len(group.elementary_divisors):
            raise NotSubgroup(f"element {g} has wrong coordinate arity")
        gens.append(tuple(c % d for c, d in zip(g, group.elementary_divisors)))
    elements = {group.zero()}
    frontier = [group.zero()]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = group.add(x, g)
            if y not in elements:
                elements.add(y)
                frontier.append(y)
                if len(elements) > group.order:
                    raise NotSubgroup("closure exceeded the group order")
    for h in elements:
        if group.q(h) != 0:
            raise NotIsotropic(f"element {h} has q = {group.q(h)}")
    return IsotropicSubgroup(parent=group, generators=tuple(gens),
                             elements=tuple(sorted(elements)))


def orthogonal_subgroup(sub: IsotropicSubgroup, cap: int | None = ENUM_CAP) -> list[DiscElement]:
    """All x in the parent with b(x, h) = 0 for every h in the subgroup."""
    group = sub.parent
    return [x for x in group.elements(cap)
            if all(group.b(x, g) == 0 for g in sub.generators)]


def disc_projection(sub: Sublattice, vec) -> DiscElement:
    """Class in D_M of the orthogonal projection of a dual vector of L.

    The input is a rational vector in ambient coordinates that must lie in
    the ambient dual lattice; the output is its image under the projection
    L* -> M* -> D_M.
    """
    amb = sub.ambient
    vec = [Fraction(v) for v in vec]
    gv = exact.mat_vec(amb.gram_rows(), vec)
    if not exact.is_integral(gv):
        raise NotInDual("vector is not in the ambient dual lattice")
    coords = sub.coords_of(vec)  # projection in sublattice coordinates
    return discriminant_group(sub.lattice).from_dual(coords)


def gauss_sum_check(group: DiscriminantGroup, sig_plus: int, sig_minus: int,
                    tol: float = 1e-10) -> bool:
    """Milgram check: sum of e(q) over D equals sqrt(|D|) e((b+ - b-)/8)."""
    total = sum(two_pi_e(group.q(x)) for x in group.elements())
    expected = math.sqrt(group.order) * two_pi_e(Fraction(sig_plus - sig_minus, 8))
    if abs(total - expected) > tol:
        raise MismatchedSignature(
            f"Gauss sum {total} != sqrt(|D|) e((b+-b-)/8) = {expected}")
    return True


def overlattice_from_isotropic(small: Lattice, sub: IsotropicSubgroup) -> OverlatticeEmbedding:
    """Even overlattice corresponding to an isotropic subgroup of D_small.

    The overlattice is generated by the lattice and dual-vector lifts of the
    subgroup generators; |D_big| = |D_small| / |H|^2.
    """
    group = sub.parent
    if group.lattice != small:
        raise NotSubgroup("subgroup does not live on the discriminant group of this lattice")
    lifts = [group.dual_vector(g) for g in sub.generators]
    emb = embedding_matrix(small, lifts)
    if emb.index != sub.order:
        raise NotIsotropic("overlattice index does not match the subgroup order")
    return OverlatticeEmbedding(small=emb.small, big=emb.big, glue=emb.glue,
                                index=emb.index, glue_group=sub)


@dataclass(frozen=True)
class GlueMap:
    """Index maps between D_small and D_big for an overlattice embedding.

    ``down`` sends each element of the orthogonal complement of the glue
    group to its class in D_big; ``up`` lists the fiber over each element of
    D_big.  Both are exact (pure index bookkeeping).
    """

    embedding: OverlatticeEmbedding
    small_disc: DiscriminantGroup
    big_disc: DiscriminantGroup
    subgroup: IsotropicSubgroup
    down: dict
    up: dict

    @property
    def glue_order(self) -> int:
        return self.subgroup.order


def glue_map(emb: OverlatticeEmbedding, subgroup: IsotropicSubgroup | None = None) -> GlueMap:
    """Build the coset maps H-perp -> D_big for an overlattice embedding."""
    small_disc = discriminant_group(emb.small)
    big_disc = discriminant_group(emb.big)
    sub = subgroup if subgroup is not None else emb.glue_group
    if sub is None:
        # glue group = image of the big lattice in D_small, generated by the
        # classes of the big basis vectors (the columns of glue)
        gens = [small_disc.from_dual(col) for col in exact.transpose(emb.glue_rows())]
        sub = check_isotropic(small_disc, gens)
    glue_inv = exact.mat_inv(emb.glue_rows())
    down = {}
    up = {}
    for delta in orthogonal_subgroup(sub):
        nu_small = small_disc.dual_vector(delta)
        nu_big = exact.mat_vec(glue_inv, nu_small)
        gamma = big_disc.from_dual(nu_big)
        down[delta] = gamma
        up.setdefault(gamma, []).append(delta)
    if len(down) != big_disc.order * sub.order:
        raise NotIsotropic("orthogonal subgroup size does not match |D_big| * |H|")
    return GlueMap(embedding=emb, small_disc=small_disc, big_disc=big_disc,
                   subgroup=sub, down=down, up={k: tuple(v) for k, v in up.items()})


def disc_product_iso(sum_disc: DiscriminantGroup,
                     left: DiscriminantGroup, right: DiscriminantGroup):
    """combine/split functions between D_{L1 (+) L2} and D_{L1} x D_{L2}.

    The sum group must come from the block-diagonal Gram matrix of the two
    factors, in that order; the iso goes through dual-vector coordinates.
    """
    n1 = left.lattice.rank

    def combine(x, y) -> DiscElement:
        nu = list(left.dual_vector(x)) + list(right.dual_vector(y))
        return sum_disc.from_dual(nu)

    def split(z: DiscElement):
        nu = sum_disc.dual_vector(z)
        return left.from_dual(nu[:n1]), right.from_dual(nu[n1:])

    return combine, split
