"""Orthogonal splittings of L_R and polynomials adapted to them.

A Grassmannian point is a splitting L_R = v+ (+) v- into a positive and a
negative definite subspace.  Projections and the positive definite majorant
are kept as exact rational matrices whenever the spanning data is rational;
the orthonormalized adapted basis (used only to evaluate polynomials) is
floating point.  Polynomials live in the adapted coordinates of a specific
point: the first block of variables spans v+, the second v-.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .errors import (
    IncompatibleSublattices,
    NonHomogeneousPolynomial,
    NotPositiveDefiniteSpan,
    WrongDimension,
)
from .lattice import Lattice, Sublattice


@dataclass(frozen=True)
class VectorPair:
    """Two vectors of L_R organized as a column pair (alpha; beta)."""

    alpha: tuple
    beta: tuple

    @classmethod
    def zero(cls, rank: int):
        return cls(tuple(Fraction(0) for _ in range(rank)),
                   tuple(Fraction(0) for _ in range(rank)))


def as_pair(pair, rank: int) -> VectorPair:
    if pair is None:
        return VectorPair.zero(rank)
    if isinstance(pair, VectorPair):
        alpha, beta = pair.alpha, pair.beta
    else:
        alpha, beta = pair
    if len(alpha) != rank or len(beta) != rank:
        raise WrongDimension("vector pair does not match the lattice rank")
    return VectorPair(tuple(alpha), tuple(beta))


def _is_rational_vec(v) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in v)


class GrassmannPoint:
    """A splitting v = v+ (+) v- of L_R, with projections and majorant."""

    def __init__(self, lattice: Lattice, span_plus, span_minus,
                 proj_plus, proj_minus, adapted: np.ndarray, rational_flag: bool):
        self.lattice = lattice
        self.span_plus = span_plus      # list of rational vectors (may be empty)
        self.span_minus = span_minus
        self.proj_plus = proj_plus      # exact n x n Fraction matrices
        self.proj_minus = proj_minus
        self.adapted = adapted          # n x n float, +block then -block columns
        self.rational_flag = rational_flag
        n = lattice.rank
        maj = [[proj_col_quad(self, i, j) for j in range(n)] for i in range(n)]
        self.majorant = maj             # exact majorant Gram matrix
        self.majorant_np = np.array([[float(x) for x in row] for row in maj]
                                    ) if n else np.zeros((0, 0))

    @property
    def dim_plus(self) -> int:
        return len(self.span_plus)

    @property
    def dim_minus(self) -> int:
        return len(self.span_minus)

    def project(self, vec):
        """(vec_{v+}, vec_{v-}); exact for rational input on a rational point."""
        if self.rational_flag and _is_rational_vec(vec):
            v = [Fraction(x) for x in vec]
            return exact.mat_vec(self.proj_plus, v), exact.mat_vec(self.proj_minus, v)
        v = np.array([float(x) for x in vec])
        pp = np.array([[float(x) for x in row] for row in self.proj_plus])
        pm = np.array([[float(x) for x in row] for row in self.proj_minus])
        return pp @ v, pm @ v

    def plus_norm(self, vec):
        """Norm of the v+ projection (exact when possible)."""
        plus, _ = self.project(vec)
        return self.lattice.norm(plus) if self.rational_flag and _is_rational_vec(vec) \
            else float(np.dot(plus, self.lattice.gram_np() @ plus))

    def minus_norm(self, vec):
        _, minus = self.project(vec)
        return self.lattice.norm(minus) if self.rational_flag and _is_rational_vec(vec) \
            else float(np.dot(minus, self.lattice.gram_np() @ minus))

    def majorant_value(self, vec):
        """Positive definite majorant: plus norm minus minus norm."""
        if self.rational_flag and _is_rational_vec(vec):
            v = [Fraction(x) for x in vec]
            mv = exact.mat_vec(self.majorant, v)
            return sum(a * b for a, b in zip(v, mv))
        v = np.array([float(x) for x in vec])
        return float(v @ self.majorant_np @ v)

    def adapted_coords(self, vec) -> np.ndarray:
        """Coordinates w.r.t. the orthonormalized adapted basis (floats)."""
        v = np.array([float(x) for x in vec])
        g = self.lattice.gram_np()
        t = self.adapted.T @ (g @ v)
        t[self.dim_plus:] *= -1.0
        return t

    def __repr__(self):
        return (f"GrassmannPoint(dim+={self.dim_plus}, dim-={self.dim_minus},"
                f" rational={self.rational_flag})")


def proj_col_quad(point: GrassmannPoint, i: int, j: int) -> Fraction:
    """Entry (i,j) of P+^T G P+ - P-^T G P- (the majorant Gram matrix)."""
    g = exact.frac_matrix(point.lattice.gram_rows())
    n = point.lattice.rank
    col_i_p = [point.proj_plus[r][i] for r in range(n)]
    col_j_p = [point.proj_plus[r][j] for r in range(n)]
    col_i_m = [point.proj_minus[r][i] for r in range(n)]
    col_j_m = [point.proj_minus[r][j] for r in range(n)]
    plus = exact.vec_dot(col_i_p, exact.mat_vec(g, col_j_p))
    minus = exact.vec_dot(col_i_m, exact.mat_vec(g, col_j_m))
    return plus - minus


def _gram_schmidt_block(lattice: Lattice, vectors, sign: int) -> np.ndarray:
    """Orthonormalize under sign * (.,.)_G, assumed positive definite there."""
    g = lattice.gram_np()
    out = []
    for v in vectors:
        w = np.array([float(x) for x in v])
        for b in out:
            w = w - sign * float(b @ g @ w) * b
        nrm = sign * float(w @ g @ w)
        if nrm <= 0:
            raise NotPositiveDefiniteSpan("Gram-Schmidt hit a non-definite direction")
        out.append(w / math.sqrt(nrm))
    return np.array(out).T if out else np.zeros((lattice.rank, 0))


def _definite_check_exact(gram_frac, sign: int) -> bool:
    """Sylvester criterion for sign * gram being positive definite."""
    n = len(gram_frac)
    for k in range(1, n + 1):
        minor = [[sign * gram_frac[i][j] for j in range(k)] for i in range(k)]
        if exact.mat_det(minor) <= 0:
            return False
    return True


def make_grassmann_point(lattice: Lattice, span_plus) -> GrassmannPoint:
    """Build the splitting with v+ spanned by the given vectors.

    The vectors must span a positive definite subspace of dimension exactly
    sig_plus; v- is computed as the orthogonal complement.  Rational input
    keeps projections and the majorant exact.
    """
    n = lattice.rank
    span_plus = [list(v) for v in span_plus]
    if len(span_plus) != lattice.sig_plus:
        raise WrongDimension(
            f"need {lattice.sig_plus} spanning vectors for v+, got {len(span_plus)}")
    if any(len(v) != n for v in span_plus):
        raise WrongDimension("spanning vector length does not match the rank")
    # floats are exact binary rationals, so the projection arithmetic below is
    # exact either way; the flag records whether the caller's data was exact
    rational = all(_is_rational_vec(v) for v in span_plus)
    span_plus = [[Fraction(x) for x in v] for v in span_plus]
    b_plus = exact.transpose(span_plus)  # n x k
    g = exact.frac_matrix(lattice.gram_rows())
    if span_plus:
        gram_plus = exact.mat_mul(exact.mat_mul(exact.transpose(b_plus), g), b_plus)
        if exact.mat_det(gram_plus) == 0:
            raise NotPositiveDefiniteSpan("spanning vectors are dependent")
        if not _definite_check_exact(gram_plus, +1):
            raise NotPositiveDefiniteSpan("span is not positive definite")
        # P+ = B (B^T G B)^{-1} B^T G
        inner_inv = exact.mat_inv(gram_plus)
        proj_plus = exact.mat_mul(
            exact.mat_mul(b_plus, inner_inv),
            exact.mat_mul(exact.transpose(b_plus), g))
    else:
        proj_plus = [[Fraction(0)] * n for _ in range(n)]
    ident = exact.identity(n)
    proj_minus = [[ident[i][j] - proj_plus[i][j] for j in range(n)] for i in range(n)]
    # v- = kernel of B+^T G (all vectors orthogonal to v+)
    if span_plus:
        span_minus = exact.rational_kernel(exact.mat_mul(exact.transpose(b_plus), g))
    else:
        span_minus = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    if len(span_minus) != lattice.sig_minus:
        raise NotPositiveDefiniteSpan("orthogonal complement has wrong dimension")
    if span_minus:
        b_minus = exact.transpose(span_minus)
        gram_minus = exact.mat_mul(exact.mat_mul(exact.transpose(b_minus), g), b_minus)
        if not _definite_check_exact(gram_minus, -1):
            raise NotPositiveDefiniteSpan("complement is not negative definite")
    plus_cols = _gram_schmidt_block(lattice, span_plus, +1)
    minus_cols = _gram_schmidt_block(lattice, span_minus, -1)
    adapted = np.hstack([plus_cols, minus_cols]) if n else np.zeros((0, 0))
    return GrassmannPoint(lattice, [tuple(map(Fraction, v)) for v in span_plus],
                          [tuple(v) for v in span_minus],
                          proj_plus, proj_minus, adapted, rational)


def grassmann_point_from_blocks(lattice: Lattice, span_plus, span_minus,
                                adapted: np.ndarray) -> GrassmannPoint:
    """Internal constructor with an explicitly prescribed adapted basis.

    Used where coordinate consistency with another point matters (block
    swaps, direct sums); the caller guarantees the blocks are orthonormal.
    """
    n = lattice.rank
    g = exact.frac_matrix(lattice.gram_rows())
    span_plus = [list(map(Fraction, v)) for v in span_plus]
    span_minus = [list(map(Fraction, v)) for v in span_minus]
    if span_plus:
        b_plus = exact.transpose(span_plus)
        gram_plus = exact.mat_mul(exact.mat_mul(exact.transpose(b_plus), g), b_plus)
        inner_inv = exact.mat_inv(gram_plus)
        proj_plus = exact.mat_mul(exact.mat_mul(b_plus, inner_inv),
                                  exact.mat_mul(exact.transpose(b_plus), g))
    else:
        proj_plus = [[Fraction(0)] * n for _ in range(n)]
    ident = exact.identity(n)
    proj_minus = [[ident[i][j] - proj_plus[i][j] for j in range(n)] for i in range(n)]
    return GrassmannPoint(lattice, [tuple(v) for v in span_plus],
                          [tuple(v) for v in span_minus],
                          proj_plus, proj_minus, adapted, True)


def swap_blocks_point(point: GrassmannPoint, neg_lattice: Lattice) -> GrassmannPoint:
    """The same splitting viewed on the rescaled lattice with -G.

    v- becomes the positive block; the adapted basis is reused with its
    blocks reordered so polynomial coordinates stay literally comparable.
    """
    adapted = np.hstack([point.adapted[:, point.dim_plus:],
                         point.adapted[:, :point.dim_plus]]) \
        if point.lattice.rank else point.adapted
    return grassmann_point_from_blocks(neg_lattice, point.span_minus,
                                       point.span_plus, adapted)


def direct_sum_grassmann(m_sub: Sublattice, mperp_sub: Sublattice,
                         u: GrassmannPoint, u_perp: GrassmannPoint) -> GrassmannPoint:
    """Splitting of L from splittings of a sublattice and its complement.

    v+ = u+ (+) u_perp+ and v- = u- (+) u_perp-, in ambient coordinates.  The
    adapted basis concatenates the lifted adapted bases blockwise (u's plus
    variables first, then u_perp's, same for minus), which fixes the variable
    order for product polynomials.
    """
    if m_sub.ambient != mperp_sub.ambient:
        raise IncompatibleSublattices("sublattices have different ambients")
    if u.lattice != m_sub.lattice or u_perp.lattice != mperp_sub.lattice:
        raise IncompatibleSublattices("Grassmannian points do not match the sublattices")
    amb = m_sub.ambient
    bm = exact.frac_matrix(m_sub.basis_matrix())
    bp = exact.frac_matrix(mperp_sub.basis_matrix())

    def lift(basis, vecs):
        return [tuple(exact.mat_vec(basis, list(map(Fraction, v)))) for v in vecs]

    span_plus = lift(bm, u.span_plus) + lift(bp, u_perp.span_plus)
    span_minus = lift(bm, u.span_minus) + lift(bp, u_perp.span_minus)
    bm_np = np.array([[float(x) for x in row] for row in bm]) if m_sub.rank else \
        np.zeros((amb.rank, 0))
    bp_np = np.array([[float(x) for x in row] for row in bp]) if mperp_sub.rank else \
        np.zeros((amb.rank, 0))
    cols = []
    for j in range(u.dim_plus):
        cols.append(bm_np @ u.adapted[:, j])
    for j in range(u_perp.dim_plus):
        cols.append(bp_np @ u_perp.adapted[:, j])
    for j in range(u.dim_minus):
        cols.append(bm_np @ u.adapted[:, u.dim_plus + j])
    for j in range(u_perp.dim_minus):
        cols.append(bp_np @ u_perp.adapted[:, u_perp.dim_plus + j])
    adapted = np.array(cols).T if cols else np.zeros((amb.rank, 0))
    return grassmann_point_from_blocks(amb, span_plus, span_minus, adapted)


# ---------------------------------------------------------------------------
# polynomials in adapted coordinates

class Polynomial:
    """Complex polynomial in the adapted coordinates of a splitting.

    Monomial keys are exponent tuples over all nvars_plus + nvars_minus
    variables (plus block first).
    """

    def __init__(self, nvars_plus: int, nvars_minus: int, monomials):
        self.nvars_plus = nvars_plus
        self.nvars_minus = nvars_minus
        self.monomials = {tuple(k): complex(v) for k, v in monomials.items()
                          if complex(v) != 0}
        nv = nvars_plus + nvars_minus
        for k in self.monomials:
            if len(k) != nv or any(e < 0 for e in k):
                raise NonHomogeneousPolynomial(f"bad exponent tuple {k}")

    @property
    def nvars(self) -> int:
        return self.nvars_plus + self.nvars_minus

    def is_zero(self) -> bool:
        return not self.monomials

    def evaluate(self, coords) -> complex:
        total = 0j
        for expo, coeff in self.monomials.items():
            term = coeff
            for e, t in zip(expo, coords):
                if e:
                    term *= t ** e
            total += term
        return total

    def laplacian(self) -> "Polynomial":
        out = {}
        for expo, coeff in self.monomials.items():
            for i, e in enumerate(expo):
                if e >= 2:
                    new = list(expo)
                    new[i] = e - 2
                    key = tuple(new)
                    out[key] = out.get(key, 0j) + coeff * e * (e - 1)
        return Polynomial(self.nvars_plus, self.nvars_minus, out)

    def scale(self, factor: complex) -> "Polynomial":
        return Polynomial(self.nvars_plus, self.nvars_minus,
                          {k: factor * v for k, v in self.monomials.items()})

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.monomials)
        for k, v in other.monomials.items():
            out[k] = out.get(k, 0j) + v
        return Polynomial(self.nvars_plus, self.nvars_minus, out)

    def multiply(self, other: "Polynomial") -> "Polynomial":
        out = {}
        for k1, v1 in self.monomials.items():
            for k2, v2 in other.monomials.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                out[key] = out.get(key, 0j) + v1 * v2
        return Polynomial(self.nvars_plus, self.nvars_minus, out)

    def conjugate(self) -> "Polynomial":
        return Polynomial(self.nvars_plus, self.nvars_minus,
                          {k: v.conjugate() for k, v in self.monomials.items()})

    def total_degree(self) -> int:
        return max((sum(k) for k in self.monomials), default=0)

    def __repr__(self):
        return f"Polynomial({len(self.monomials)} monomials over {self.nvars} vars)"


class HomogeneousPolynomial(Polynomial):
    """Polynomial with fixed bidegree (m+, m-) across the two blocks."""

    def __init__(self, degrees, nvars_plus, nvars_minus, monomials):
        super().__init__(nvars_plus, nvars_minus, monomials)
        self.degrees = (int(degrees[0]), int(degrees[1]))
        for expo in self.monomials:
            dp = sum(expo[:nvars_plus])
            dm = sum(expo[nvars_plus:])
            if (dp, dm) != self.degrees:
                raise NonHomogeneousPolynomial(
                    f"monomial {expo} has bidegree ({dp},{dm}), expected {self.degrees}")

    def conjugate(self) -> "HomogeneousPolynomial":
        return HomogeneousPolynomial(self.degrees, self.nvars_plus, self.nvars_minus,
                                     {k: v.conjugate() for k, v in self.monomials.items()})

    def scale(self, factor: complex) -> "HomogeneousPolynomial":
        return HomogeneousPolynomial(self.degrees, self.nvars_plus, self.nvars_minus,
                                     {k: factor * v for k, v in self.monomials.items()})


def constant_poly(nvars_plus: int, nvars_minus: int, value=1.0) -> HomogeneousPolynomial:
    key = (0,) * (nvars_plus + nvars_minus)
    return HomogeneousPolynomial((0, 0), nvars_plus, nvars_minus, {key: value})


def coordinate_poly(nvars_plus: int, nvars_minus: int, index: int) -> HomogeneousPolynomial:
    """The linear polynomial t_index in adapted coordinates."""
    key = [0] * (nvars_plus + nvars_minus)
    key[index] = 1
    degrees = (1, 0) if index < nvars_plus else (0, 1)
    return HomogeneousPolynomial(degrees, nvars_plus, nvars_minus, {tuple(key): 1.0})


def poly_for_point(point: GrassmannPoint, poly: Polynomial) -> Polynomial:
    if poly.nvars_plus != point.dim_plus or poly.nvars_minus != point.dim_minus:
        raise NonHomogeneousPolynomial(
            "polynomial variable blocks do not match the splitting")
    return poly


def exp_laplacian(poly: Polynomial, point: GrassmannPoint | None, c) -> Polynomial:
    """exp(c * Laplacian) applied to a polynomial; the series terminates."""
    if point is not None:
        poly_for_point(point, poly)
    out = Polynomial(poly.nvars_plus, poly.nvars_minus, dict(poly.monomials))
    term = poly
    j = 0
    factor = 1.0
    while True:
        term = term.laplacian()
        j += 1
        factor *= float(c) / j
        if term.is_zero():
            break
        out = out + term.scale(factor)
    return out


def laplacian_series(poly: Polynomial) -> list[Polynomial]:
    """[p, Lap p / (1! ), Lap^2 p / 2!, ...] until zero; for 1/y expansions."""
    out = [poly]
    term = poly
    fact = 1.0
    j = 0
    while True:
        term = term.laplacian()
        j += 1
        fact *= j
        if term.is_zero():
            break
        out.append(term.scale(1.0 / fact))
    return out


def block_swapped_poly(poly: Polynomial) -> Polynomial:
    """Reindex monomials when the plus and minus blocks trade places."""
    out = {}
    np_, nm = poly.nvars_plus, poly.nvars_minus
    for expo, coeff in poly.monomials.items():
        out[expo[np_:] + expo[:np_]] = coeff
    if isinstance(poly, HomogeneousPolynomial):
        return HomogeneousPolynomial((poly.degrees[1], poly.degrees[0]), nm, np_, out)
    return Polynomial(nm, np_, out)


def lift_product(p_u: Polynomial, p_uperp: Polynomial) -> Polynomial:
    """Product polynomial on the direct-sum splitting.

    Variable order matches direct_sum_grassmann: plus block is (u plus vars,
    u_perp plus vars), minus block is (u minus vars, u_perp minus vars).
    """
    ap, am = p_u.nvars_plus, p_u.nvars_minus
    bp, bm = p_uperp.nvars_plus, p_uperp.nvars_minus
    out = {}
    for k1, v1 in p_u.monomials.items():
        for k2, v2 in p_uperp.monomials.items():
            key = k1[:ap] + k2[:bp] + k1[ap:] + k2[bp:]
            out[key] = out.get(key, 0j) + v1 * v2
    if isinstance(p_u, HomogeneousPolynomial) and isinstance(p_uperp, HomogeneousPolynomial):
        degrees = (p_u.degrees[0] + p_uperp.degrees[0],
                   p_u.degrees[1] + p_uperp.degrees[1])
        return HomogeneousPolynomial(degrees, ap + bp, am + bm, out)
    return Polynomial(ap + bp, am + bm, out)


def split_product_check(p_v: Polynomial, p_u: Polynomial, p_uperp: Polynomial,
                        v: GrassmannPoint, u: GrassmannPoint, u_perp: GrassmannPoint,
                        m_sub: Sublattice, mperp_sub: Sublattice,
                        trials: int = 20, tol: float = 1e-9, seed: int = 7):
    """Check p_v(x) = p_u(x_M) p_uperp(x_Mperp) on random vectors.

    Returns (ok, worst_deviation).  Also verifies the bidegree bookkeeping
    when all three polynomials are homogeneous.
    """
    import random

    if isinstance(p_v, HomogeneousPolynomial) and isinstance(p_u, HomogeneousPolynomial) \
            and isinstance(p_uperp, HomogeneousPolynomial):
        if (p_u.degrees[0] + p_uperp.degrees[0] != p_v.degrees[0]
                or p_u.degrees[1] + p_uperp.degrees[1] != p_v.degrees[1]):
            return False, float("inf")
    rng = random.Random(seed)
    amb = m_sub.ambient
    worst = 0.0
    for _ in range(trials):
        x = [Fraction(rng.randint(-8, 8), rng.randint(1, 5)) for _ in range(amb.rank)]
        lhs = p_v.evaluate(v.adapted_coords(x))
        xm = m_sub.coords_of(m_sub.project_ambient(x))
        xp = mperp_sub.coords_of(mperp_sub.project_ambient(x))
        rhs = p_u.evaluate(u.adapted_coords(xm)) * p_uperp.evaluate(u_perp.adapted_coords(xp))
        worst = max(worst, abs(lhs - rhs))
    return worst <= tol, worst
