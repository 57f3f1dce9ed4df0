"""Even lattices presented by integer Gram matrices.

Conventions: a lattice of rank n is Z^n with a fixed basis; vectors are
coordinate columns with respect to that basis and the pairing of x and y is
x^T G y for the Gram matrix G.  Sublattices store their generators as vectors
in ambient coordinates.  All integer arithmetic is arbitrary precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact
from .errors import (
    Degenerate,
    DegenerateSublattice,
    IncompatibleSublattices,
    NotEven,
    NotPrimitive,
    NotSymmetric,
)


@dataclass(frozen=True)
class Lattice:
    """An even non-degenerate lattice given by its Gram matrix."""

    gram: tuple[tuple[int, ...], ...]
    rank: int
    sig_plus: int
    sig_minus: int
    name: str | None = field(default=None, compare=False)

    def gram_np(self) -> np.ndarray:
        return np.array(self.gram, dtype=float).reshape(self.rank, self.rank)

    def gram_rows(self) -> list[list[int]]:
        return [list(row) for row in self.gram]

    def pairing(self, x, y):
        """Exact pairing x^T G y for rational coordinate vectors."""
        gx = exact.mat_vec(self.gram_rows(), [Fraction(v) for v in y])
        return sum(Fraction(a) * b for a, b in zip(x, gx))

    def norm(self, x):
        return self.pairing(x, x)

    @property
    def signature(self) -> tuple[int, int]:
        return (self.sig_plus, self.sig_minus)

    def __repr__(self):
        label = self.name or f"rank{self.rank}"
        return f"Lattice({label}, sig=({self.sig_plus},{self.sig_minus}))"


def construct_lattice(gram, name: str | None = None) -> Lattice:
    """Validate a square integer Gram matrix and build a Lattice.

    Raises NotSymmetric / NotEven / Degenerate.  Signature is read off the
    eigenvalues of the real symmetric matrix; non-degeneracy is checked
    exactly via the integer determinant.
    """
    rows = [list(map(int, row)) for row in gram]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise NotSymmetric("gram matrix must be square")
    for i in range(n):
        for j in range(n):
            if rows[i][j] != rows[j][i]:
                raise NotSymmetric(f"gram[{i}][{j}] != gram[{j}][{i}]")
    for i in range(n):
        if rows[i][i] % 2 != 0:
            raise NotEven(f"diagonal entry gram[{i}][{i}] = {rows[i][i]} is odd")
    if n == 0:
        return Lattice(gram=(), rank=0, sig_plus=0, sig_minus=0, name=name)
    if exact.mat_det(rows) == 0:
        raise Degenerate("gram matrix is singular")
    eigs = np.linalg.eigvalsh(np.array(rows, dtype=float))
    plus = int(np.sum(eigs > 0))
    minus = int(np.sum(eigs < 0))
    if plus + minus != n:
        raise Degenerate("numerically zero eigenvalue on a non-singular matrix")
    return Lattice(gram=tuple(tuple(row) for row in rows), rank=n,
                   sig_plus=plus, sig_minus=minus, name=name)


def dual_data(lat: Lattice) -> tuple[list[list[Fraction]], int]:
    """Inverse Gram matrix (exact) and the discriminant |det G|."""
    if lat.rank == 0:
        return [], 1
    inv = exact.mat_inv(lat.gram_rows())
    disc = abs(int(exact.mat_det(lat.gram_rows())))
    return inv, disc


def direct_sum(l1: Lattice, l2: Lattice, name: str | None = None) -> Lattice:
    """Block-diagonal orthogonal direct sum."""
    n1, n2 = l1.rank, l2.rank
    rows = []
    for i in range(n1):
        rows.append(list(l1.gram[i]) + [0] * n2)
    for i in range(n2):
        rows.append([0] * n1 + list(l2.gram[i]))
    return construct_lattice(rows, name=name)


def rescale(lat: Lattice, s: int, name: str | None = None) -> Lattice:
    """Multiply the Gram matrix by a nonzero integer s."""
    if s == 0:
        raise Degenerate("rescaling by 0")
    rows = [[s * x for x in row] for row in lat.gram]
    return construct_lattice(rows, name=name)


@dataclass(frozen=True)
class Sublattice:
    """A primitive non-degenerate sublattice of an ambient lattice.

    ``basis`` lists generator vectors (ambient integer coordinates); the
    induced Gram matrix makes the sublattice a Lattice in its own right.
    """

    ambient: Lattice
    basis: tuple[tuple[int, ...], ...]
    lattice: Lattice
    was_primitive: bool = True
    original_basis: tuple[tuple[int, ...], ...] | None = field(default=None, compare=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> list[list[int]]:
        """Ambient-by-rank matrix whose columns are the generators."""
        return exact.transpose([list(v) for v in self.basis])

    def coords_of(self, vec):
        """Sublattice coordinates of an ambient vector lying in the span.

        Solves B x = vec in the least-squares-free exact sense using the
        induced Gram matrix: x = (B^T G B)^{-1} B^T G vec.
        """
        b = self.basis_matrix()
        g = self.ambient.gram_rows()
        btg = exact.mat_mul(exact.transpose(b), g)
        rhs = exact.mat_vec(btg, [Fraction(v) for v in vec])
        return exact.solve(self.lattice.gram_rows(), rhs)

    def embed(self, coords):
        """Ambient coordinates of a vector given in sublattice coordinates."""
        b = self.basis_matrix()
        return exact.mat_vec(exact.frac_matrix(b), [Fraction(c) for c in coords])

    def project_ambient(self, vec):
        """Orthogonal projection of an ambient vector onto the real span."""
        return self.embed(self.coords_of(vec))


def sublattice(ambient: Lattice, generators, *, saturate: bool = False) -> Sublattice:
    """Build a sublattice from integer generator vectors.

    By default the generators must already span a primitive (saturated)
    sublattice, otherwise NotPrimitive is raised.  With ``saturate=True`` the
    stored basis is the saturation and the original generators are kept with
    ``was_primitive=False``.
    """
    gens = [tuple(map(int, g)) for g in generators]
    if not gens:
        raise DegenerateSublattice("empty generator list")
    if any(len(g) != ambient.rank for g in gens):
        raise IncompatibleSublattices("generator length does not match ambient rank")
    basis, primitive = exact.saturate_columns(gens)
    if len(basis) != len(gens):
        raise DegenerateSublattice("generators are linearly dependent")
    if not primitive and not saturate:
        raise NotPrimitive("generators span a non-saturated sublattice")
    use_basis = basis if saturate else gens
    b = exact.transpose([list(v) for v in use_basis])
    induced = exact.mat_mul(exact.mat_mul(exact.transpose(b), ambient.gram_rows()), b)
    induced_int = [[int(x) for x in row] for row in induced]
    try:
        sub_lat = construct_lattice(induced_int)
    except Degenerate as exc:
        raise DegenerateSublattice(str(exc)) from exc
    return Sublattice(ambient=ambient,
                      basis=tuple(tuple(int(x) for x in v) for v in use_basis),
                      lattice=sub_lat,
                      was_primitive=primitive,
                      original_basis=None if primitive else tuple(gens))


def orthogonal_complement(ambient: Lattice, sub: Sublattice) -> Sublattice:
    """The primitive sublattice of all ambient vectors orthogonal to sub.

    Basis: saturated integer kernel of (G B)^T where B holds sub's
    generators as columns.
    """
    if not sub.was_primitive:
        raise NotPrimitive("complement requires a primitive sublattice")
    gb = exact.mat_mul(ambient.gram_rows(), sub.basis_matrix())
    kernel = exact.integer_kernel(exact.transpose(gb))
    if len(kernel) != ambient.rank - sub.rank:
        raise DegenerateSublattice("unexpected kernel rank; sublattice degenerate?")
    return sublattice(ambient, kernel)


@dataclass(frozen=True)
class OverlatticeEmbedding:
    """An even overlattice big of small, with index |big/small|.

    ``glue`` expresses a basis of the big lattice in small-lattice
    coordinates (one column per big basis vector), so glue^{-1} is integral.
    ``glue_group`` is the isotropic subgroup of the small discriminant group
    corresponding to the overlattice; it is filled in by
    overlattice_from_isotropic and by split embeddings.
    """

    small: Lattice
    big: Lattice
    glue: tuple[tuple[Fraction, ...], ...]
    index: int
    glue_group: object | None = field(default=None, compare=False)

    def glue_rows(self) -> list[list[Fraction]]:
        return [list(row) for row in self.glue]

    def small_coords(self, big_coords):
        """Small-lattice coordinates of a vector given in big coordinates."""
        return exact.mat_vec(self.glue_rows(), [Fraction(x) for x in big_coords])

    def big_coords(self, small_coords):
        inv = exact.mat_inv(self.glue_rows())
        return exact.mat_vec(inv, [Fraction(x) for x in small_coords])


def trivial_embedding(lat: Lattice) -> OverlatticeEmbedding:
    glue = tuple(tuple(Fraction(int(i == j)) for j in range(lat.rank)) for i in range(lat.rank))
    return OverlatticeEmbedding(small=lat, big=lat, glue=glue, index=1)


def embedding_matrix(small: Lattice, lifts) -> OverlatticeEmbedding:
    """Overlattice generated by small and the given rational lift vectors.

    ``lifts`` are vectors in small coordinates; the result records a basis of
    the generated module and validates that the overlattice is even.
    """
    n = small.rank
    cols = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    cols += [[Fraction(x) for x in v] for v in lifts]
    basis = exact.column_module_basis(cols)  # list of column vectors
    glue = exact.transpose(basis)
    gram = exact.mat_mul(exact.mat_mul(exact.transpose(glue), small.gram_rows()), glue)
    for i in range(n):
        for j in range(n):
            if gram[i][j].denominator != 1:
                raise NotEven("overlattice pairing is not integral")
        if (gram[i][i] / 2).denominator != 1:
            raise NotEven("overlattice has an odd vector")
    big = construct_lattice([[int(x) for x in row] for row in gram])
    det = abs(exact.mat_det(glue))
    if det.numerator != 1:
        raise Degenerate("glue determinant is not 1/index")
    return OverlatticeEmbedding(small=small, big=big,
                                glue=tuple(tuple(row) for row in glue),
                                index=det.denominator)
