"""Truncated Siegel theta functions and the mixed two-lattice theta.

Sums run over dual-lattice cosets, truncated by the positive definite
majorant: a vector enters iff majorant(lambda + beta) <= 2 * bound, so both
q-exponents of an included term are at most the bound.  Enumeration is
Fincke-Pohst on the majorant Gram matrix with an exact membership filter;
the omitted mass is bounded by a one-dimensional integral against shell
volumes (the ``tail_estimate``).  Term data keeps exact exponents whenever
the splitting and the shift vectors are rational, so identities between two
constructions can be checked coefficientwise, not just numerically.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate

from . import exact
from .discforms import (
    DiscriminantGroup,
    disc_product_iso,
    discriminant_group,
    glue_map,
)
from .errors import (
    BoundTooLarge,
    NonHomogeneousPolynomial,
    TailTooLarge,
    TauNotInUpperHalfPlane,
    VectorNotInComplement,
)
from .grassmann import (
    GrassmannPoint,
    HomogeneousPolynomial,
    as_pair,
    block_swapped_poly,
    direct_sum_grassmann,
    laplacian_series,
    lift_product,
    swap_blocks_point,
)
from .lattice import (
    Lattice,
    OverlatticeEmbedding,
    Sublattice,
    direct_sum,
    orthogonal_complement,
    rescale,
)
from .weil import (
    Axis,
    MetaplecticElement,
    RepVector,
    down_arrow,
    identity_vector,
    pair as rep_pair,
    rho_apply,
    up_arrow,
)

TWO_PI = 2.0 * math.pi

#: default cap on enumerated vectors (overridden by $THETA_MAX_VECTORS)
DEFAULT_MAX_VECTORS = 200_000


def _max_vectors(explicit=None) -> int:
    if explicit is not None:
        return int(explicit)
    return int(os.environ.get("THETA_MAX_VECTORS", DEFAULT_MAX_VECTORS))


# ---------------------------------------------------------------------------
# lattice point enumeration

def _fincke_pohst(q: np.ndarray, center: np.ndarray, radius: float,
                  max_count: int) -> list[tuple[int, ...]]:
    """Integer m with (m + center)^T q (m + center) <= radius.

    Recursive ellipsoid walk on the Cholesky factor; ``radius`` should carry
    any safety margin already.  Raises BoundTooLarge past ``max_count``.
    """
    n = q.shape[0]
    if n == 0:
        return [()]
    if radius < 0:
        return []
    r_upper = np.linalg.cholesky(q).T  # q = R^T R with R upper triangular
    out: list[tuple[int, ...]] = []
    coords = [0] * n

    def walk(i: int, rem: float, partial: np.ndarray):
        # partial[j] = sum_{l > i} R[j, l] * x_l for j <= i
        rii = r_upper[i, i]
        shift = center[i] + partial[i] / rii
        half = math.sqrt(max(rem, 0.0)) / rii
        lo = math.ceil(-shift - half - 1e-12)
        hi = math.floor(-shift + half + 1e-12)
        for m in range(lo, hi + 1):
            x = m + shift
            used = (rii * x) ** 2
            if used > rem + 1e-12:
                continue
            if i == 0:
                coords[0] = m
                out.append(tuple(coords))
                if len(out) > max_count:
                    raise BoundTooLarge(
                        f"enumeration exceeded {max_count} vectors; "
                        "raise THETA_MAX_VECTORS or lower the bound")
            else:
                coords[i] = m
                new_partial = partial + (m + center[i]) * r_upper[:, i]
                walk(i - 1, rem - used, new_partial)

    walk(n - 1, radius, np.zeros(n))
    return out


def enumerate_vectors(lat: Lattice, coset, point: GrassmannPoint, beta,
                      bound, max_vectors=None) -> list[tuple]:
    """All lattice translates lambda in coset + Z^n with maj(lambda+beta) <= 2*bound.

    Membership is decided exactly (rational arithmetic) when the data allows,
    with the float Fincke-Pohst pass only proposing candidates.
    """
    n = lat.rank
    coset = list(coset)
    if n == 0:
        return [()]
    beta = list(beta) if beta is not None else [Fraction(0)] * n
    center = np.array([float(c) + float(b) for c, b in zip(coset, beta)])
    radius = 2.0 * float(bound) * (1 + 1e-12) + 1e-9
    cap = _max_vectors(max_vectors)
    candidates = _fincke_pohst(point.majorant_np, center, radius, cap)
    exactable = all(isinstance(x, (int, Fraction)) for x in coset + beta) \
        and point.rational_flag
    out = []
    two_b = Fraction(bound) * 2 if exactable else 2.0 * float(bound)
    for m in candidates:
        lam = tuple(Fraction(c) + mi for c, mi in zip(coset, m)) if exactable \
            else tuple(float(c) + mi for c, mi in zip(coset, m))
        w = [x + b for x, b in zip(lam, beta)]
        maj = point.majorant_value(w)
        if exactable:
            if maj <= two_b:
                out.append(lam)
        elif float(maj) <= float(two_b) + 1e-9:
            out.append(lam)
    out.sort()
    return out


# ---------------------------------------------------------------------------
# terms and evaluation

@dataclass(frozen=True)
class TermRecord:
    """One summand: exact exponents, 1/y polynomial coefficients, phase.

    ``poly_coeffs[j]`` multiplies y^{-j}; it already contains the
    (-1/(8 pi))^j / j! factor from the Gaussian smoothing operator.
    ``a - b`` is half the majorant (>= 0), ``a + b`` is half the norm.
    """

    key: tuple
    vector: tuple
    a: object
    b: object
    poly_coeffs: tuple
    phase: object

    def evaluate(self, tau: complex) -> complex:
        x, y = tau.real, tau.imag
        poly = 0j
        for j, c in enumerate(self.poly_coeffs):
            poly += c * y ** (-j)
        osc = cmath.exp(2j * math.pi * (x * float(self.a + self.b) - float(self.phase)))
        decay = math.exp(-TWO_PI * y * float(self.a - self.b))
        return poly * osc * decay


@dataclass
class ThetaValue:
    """Evaluated theta vector plus its truncation certificate."""

    value: RepVector
    tau: complex
    bound: float
    tail_estimate: float
    prefactor_exponent: Fraction
    terms: tuple[TermRecord, ...] = field(default=(), repr=False)

    @property
    def axes(self):
        return self.value.axes


def _evaluate_terms(terms, axes, tau: complex, prefactor_exponent: Fraction) -> RepVector:
    y = tau.imag
    pref = y ** float(prefactor_exponent)
    out: dict = {}
    for t in terms:
        out[t.key] = out.get(t.key, 0j) + t.evaluate(tau)
    return RepVector(axes, {k: pref * v for k, v in out.items()})


def _poly_factors(series, point: GrassmannPoint, w) -> tuple:
    coords = point.adapted_coords([float(x) for x in w])
    vals = []
    for j, poly in enumerate(series):
        vals.append(poly.evaluate(coords) * (-1.0 / (8.0 * math.pi)) ** j)
    return tuple(vals)


def _tail_bound(q: np.ndarray, translates: int, series, y: float,
                bound: float, prefactor_exponent: Fraction) -> float:
    """Upper bound on the omitted sum, by a shell-volume integral.

    Point counts in a majorant ball of radius s are bounded by
    V_n (s + rho)^n / covol with rho half the sum of cell edge lengths; each
    omitted term at r = maj/2 > bound is at most pb(sqrt(2r)) e^{-2 pi y r}
    with pb bounding the smoothing-expanded polynomial monomial-wise.
    """
    n = q.shape[0]
    if n == 0:
        return 0.0
    det = float(np.linalg.det(q))
    covol = math.sqrt(max(det, 1e-300))
    rho = 0.5 * sum(math.sqrt(q[i, i]) for i in range(n))
    vol_n = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
    # monomial-wise polynomial bound: sum of |c| / (8 pi y)^j * s^deg
    pieces = []
    for j, poly in enumerate(series):
        scale = (1.0 / (8.0 * math.pi * y)) ** j
        for expo, coeff in poly.monomials.items():
            pieces.append((abs(coeff) * scale, sum(expo)))
    if not pieces:
        return 0.0

    def integrand(r):
        s = math.sqrt(2.0 * r)
        pb = sum(c * s ** d for c, d in pieces)
        dn = vol_n * n * (s + rho) ** (n - 1) / (max(s, 1e-12) * covol)
        return pb * dn * math.exp(-TWO_PI * y * r)

    total, _err = integrate.quad(integrand, float(bound), np.inf, limit=200)
    return float(y ** float(prefactor_exponent) * translates * total)


# ---------------------------------------------------------------------------
# the Siegel theta function

def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if tau.imag <= 0:
        raise TauNotInUpperHalfPlane(f"tau = {tau}")
    return tau


def _check_poly(poly, point: GrassmannPoint) -> HomogeneousPolynomial:
    if not isinstance(poly, HomogeneousPolynomial):
        raise NonHomogeneousPolynomial("theta functions need a bihomogeneous polynomial")
    if poly.nvars_plus != point.dim_plus or poly.nvars_minus != point.dim_minus:
        raise NonHomogeneousPolynomial(
            f"polynomial blocks ({poly.nvars_plus},{poly.nvars_minus}) do not match "
            f"the splitting ({point.dim_plus},{point.dim_minus})")
    return poly


class ThetaEvaluator:
    """Precomputed term list of a theta sum, reusable across many tau.

    Term data is tau-independent; one enumeration serves every evaluation
    point (the quadrature loops rely on this).
    """

    def __init__(self, terms, axes, prefactor_exponent, bound, majorant_np,
                 translates, series):
        self.terms = tuple(terms)
        self.axes = axes
        self.prefactor_exponent = prefactor_exponent
        self.bound = float(bound)
        self._majorant = majorant_np
        self._translates = translates
        self._series = series

    def at(self, tau: complex) -> ThetaValue:
        tau = _check_tau(tau)
        value = _evaluate_terms(self.terms, self.axes, tau, self.prefactor_exponent)
        return ThetaValue(value=value, tau=tau, bound=self.bound,
                          tail_estimate=self.tail(tau.imag),
                          prefactor_exponent=self.prefactor_exponent,
                          terms=self.terms)

    def tail(self, y: float) -> float:
        return _tail_bound(self._majorant, self._translates, self._series, y,
                           self.bound, self.prefactor_exponent)


def siegel_theta_evaluator(lat: Lattice, point: GrassmannPoint,
                           poly: HomogeneousPolynomial, pair_vectors=None,
                           bound: float = 10.0, max_vectors=None) -> ThetaEvaluator:
    """Enumerate the truncated theta sum once; evaluate at any tau later."""
    poly = _check_poly(poly, point)
    vp = as_pair(pair_vectors, lat.rank)
    group = discriminant_group(lat)
    series = laplacian_series(poly)
    terms = []
    for gamma in group.elements():
        gvec = group.dual_vector(gamma)
        for lam in enumerate_vectors(lat, gvec, point, vp.beta, bound, max_vectors):
            w = [x + b for x, b in zip(lam, vp.beta)]
            a_exp = point.plus_norm(w) / 2
            b_exp = point.minus_norm(w) / 2
            half_beta = [x + Fraction(b) / 2 if isinstance(b, (int, Fraction))
                         else x + b / 2 for x, b in zip(lam, vp.beta)]
            phase = lat.pairing(half_beta, vp.alpha) \
                if all(isinstance(x, (int, Fraction)) for x in list(vp.alpha) + half_beta) \
                else float(np.dot([float(x) for x in half_beta],
                                  lat.gram_np() @ np.array([float(x) for x in vp.alpha])))
            terms.append(TermRecord(key=(gamma,), vector=tuple(lam), a=a_exp, b=b_exp,
                                    poly_coeffs=_poly_factors(series, point, w),
                                    phase=phase))
    terms.sort(key=lambda t: (t.key, [float(x) for x in t.vector]))
    prefactor = Fraction(lat.sig_minus, 2) + poly.degrees[1]
    axes = (Axis(group, dual=False),)
    return ThetaEvaluator(terms, axes, prefactor, bound, point.majorant_np,
                          group.order, series)


def siegel_theta(lat: Lattice, tau: complex, point: GrassmannPoint,
                 poly: HomogeneousPolynomial, pair_vectors=None,
                 bound: float = 10.0, max_vectors=None) -> ThetaValue:
    """Generalized Siegel theta vector of a lattice at tau.

    Components are indexed by the discriminant group.  The summand for a
    dual vector lambda carries exponents a, b (half the plus/minus projected
    norms of lambda + beta), the smoothed polynomial value, and the phase
    -(lambda + beta/2, alpha); the whole sum is multiplied by
    y^(sig_minus/2 + minus-degree).
    """
    tau = _check_tau(tau)
    return siegel_theta_evaluator(lat, point, poly, pair_vectors, bound,
                                  max_vectors).at(tau)


# ---------------------------------------------------------------------------
# split data for a primitive sublattice

@dataclass
class SplitData:
    """Everything attached to the splitting L > M (+) Mperp.

    The inner direct sum has block Gram matrix; ``emb`` realizes L as its
    overlattice (glue = C^{-1} for C = [basis_M | basis_Mperp]); combine and
    split translate between D_sum and D_M x D_Mperp.
    """

    ambient: Lattice
    m_sub: Sublattice
    mperp_sub: Sublattice
    inner: Lattice
    emb: OverlatticeEmbedding
    gm: object
    d_m: DiscriminantGroup
    d_perp: DiscriminantGroup
    d_inner: DiscriminantGroup
    d_l: DiscriminantGroup
    combine: object
    split: object


_SPLIT_CACHE: dict = {}


def split_data(lat: Lattice, m_sub: Sublattice,
               mperp_sub: Sublattice | None = None) -> SplitData:
    cache_key = (lat, m_sub.basis)
    if cache_key in _SPLIT_CACHE:
        return _SPLIT_CACHE[cache_key]
    if mperp_sub is None:
        mperp_sub = orthogonal_complement(lat, m_sub)
    inner = direct_sum(m_sub.lattice, mperp_sub.lattice)
    c_cols = [list(v) for v in m_sub.basis] + [list(v) for v in mperp_sub.basis]
    c_mat = exact.transpose(c_cols)  # n x n, lattice coords of inner basis
    glue = exact.mat_inv(exact.frac_matrix(c_mat))
    index = abs(exact.mat_det(exact.frac_matrix(c_mat)))
    emb = OverlatticeEmbedding(small=inner, big=lat,
                               glue=tuple(tuple(row) for row in glue),
                               index=int(index))
    gm = glue_map(emb)
    d_m = discriminant_group(m_sub.lattice)
    d_perp = discriminant_group(mperp_sub.lattice)
    combine, split = disc_product_iso(gm.small_disc, d_m, d_perp)
    sd = SplitData(ambient=lat, m_sub=m_sub, mperp_sub=mperp_sub, inner=inner,
                   emb=emb, gm=gm, d_m=d_m, d_perp=d_perp,
                   d_inner=gm.small_disc, d_l=gm.big_disc,
                   combine=combine, split=split)
    _SPLIT_CACHE[cache_key] = sd
    return sd


def _complement_coords(sd: SplitData, vec, label: str):
    """Mperp coordinates of an ambient vector required to lie in Mperp_R."""
    if vec is None:
        return [Fraction(0)] * sd.mperp_sub.rank
    vec = list(vec)
    if len(vec) != sd.ambient.rank:
        raise VectorNotInComplement(f"{label} has wrong dimension")
    exact_input = all(isinstance(x, (int, Fraction)) for x in vec)
    proj_m = sd.m_sub.coords_of(vec)
    if exact_input:
        if any(x != 0 for x in proj_m):
            raise VectorNotInComplement(f"{label} has a component along the sublattice")
    elif max(abs(float(x)) for x in proj_m) > 1e-9:
        raise VectorNotInComplement(f"{label} has a component along the sublattice")
    return sd.mperp_sub.coords_of(vec)


# ---------------------------------------------------------------------------
# the mixed theta function of a lattice and a primitive sublattice

def mixed_theta_direct(lat: Lattice, m_sub: Sublattice, tau: complex,
                       u_perp: GrassmannPoint, p_uperp: HomogeneousPolynomial,
                       pair_vectors=None, bound: float = 10.0,
                       max_vectors=None) -> ThetaValue:
    """Mixed theta vector over D_L x D_M(-1), summed class by class.

    Classes of L*/M are parametrized by an element of the glue-orthogonal
    subgroup (fixing both the D_L index and the D_M index) together with a
    translate of the complement lattice, which is what gets enumerated.
    """
    tau = _check_tau(tau)
    sd = split_data(lat, m_sub)
    poly = _check_poly(p_uperp, u_perp)
    if u_perp.lattice != sd.mperp_sub.lattice:
        raise VectorNotInComplement("u_perp is not a splitting of the complement")
    vp = as_pair(pair_vectors, lat.rank)
    xi = _complement_coords(sd, vp.alpha, "xi")
    eta = _complement_coords(sd, vp.beta, "eta")
    series = laplacian_series(poly)
    perp_lat = sd.mperp_sub.lattice
    c_rank = sd.m_sub.rank
    terms = []
    for delta in sorted(sd.gm.down):
        gamma_l = sd.gm.down[delta]
        nu = sd.d_inner.dual_vector(delta)
        delta_m = sd.d_m.from_dual(nu[:c_rank])
        key = (gamma_l, delta_m)
        for w in enumerate_vectors(perp_lat, nu[c_rank:], u_perp, eta, bound, max_vectors):
            ww = [x + e for x, e in zip(w, eta)]
            a_exp = u_perp.plus_norm(ww) / 2
            b_exp = u_perp.minus_norm(ww) / 2
            half_eta = [x + Fraction(e) / 2 for x, e in zip(w, eta)]
            phase = perp_lat.pairing(half_eta, xi)
            terms.append(TermRecord(key=key, vector=tuple(w), a=a_exp, b=b_exp,
                                    poly_coeffs=_poly_factors(series, u_perp, ww),
                                    phase=phase))
    terms.sort(key=lambda t: (t.key, [float(x) for x in t.vector]))
    prefactor = Fraction(perp_lat.sig_minus, 2) + poly.degrees[1]
    axes = (Axis(sd.d_l, dual=False), Axis(sd.d_m, dual=True))
    value = _evaluate_terms(terms, axes, tau, prefactor)
    tail = _tail_bound(u_perp.majorant_np, len(sd.gm.down), series, tau.imag,
                       bound, prefactor)
    return ThetaValue(value=value, tau=tau, bound=float(bound), tail_estimate=tail,
                      prefactor_exponent=prefactor, terms=tuple(terms))


def mixed_theta_composed(lat: Lattice, m_sub: Sublattice, tau: complex,
                         u_perp: GrassmannPoint, p_uperp: HomogeneousPolynomial,
                         pair_vectors=None, bound: float = 10.0,
                         max_vectors=None) -> ThetaValue:
    """Mixed theta via the inner direct sum: tensor with the identity vector,
    merge the two non-dual axes into the sum group, then push down the glue.

    Independent of mixed_theta_direct term for term; the two must agree.
    """
    tau = _check_tau(tau)
    sd = split_data(lat, m_sub)
    vp = as_pair(pair_vectors, lat.rank)
    xi = _complement_coords(sd, vp.alpha, "xi")
    eta = _complement_coords(sd, vp.beta, "eta")
    theta_perp = siegel_theta(sd.mperp_sub.lattice, tau, u_perp, p_uperp,
                              (xi, eta), bound, max_vectors)
    tensor = theta_perp.value.tensor(identity_vector(sd.d_m))
    # axes now: (D_perp, F), (D_M, F), (D_M, T); merge the first two into D_inner
    merged: dict = {}
    for key, val in tensor.coeffs.items():
        k_perp, k_m, k_mdual = key
        merged_key = (sd.combine(k_m, k_perp), k_mdual)
        merged[merged_key] = merged.get(merged_key, 0j) + val
    merged_vec = RepVector((Axis(sd.d_inner, dual=False), Axis(sd.d_m, dual=True)),
                           merged)
    pushed = down_arrow(sd.gm, merged_vec, axis=0)
    return ThetaValue(value=pushed, tau=tau, bound=float(bound),
                      tail_estimate=theta_perp.tail_estimate,
                      prefactor_exponent=theta_perp.prefactor_exponent)


# ---------------------------------------------------------------------------
# symmetry and modularity diagnostics

def conjugate_vector(vec: RepVector) -> RepVector:
    return RepVector(vec.axes, {k: v.conjugate() for k, v in vec.coeffs.items()})


def theta_negation_residual(lat: Lattice, tau: complex, point: GrassmannPoint,
                            poly: HomogeneousPolynomial, pair_vectors=None,
                            bound: float = 10.0) -> float:
    """Residual of the rescaling symmetry between L and L(-1).

    The theta vector of the inverted lattice at the block-swapped splitting
    must equal y^((b+-b-)/2 + m+ - m-) times the conjugated theta vector of L
    with the conjugated polynomial, component by component under the
    canonical index identification.
    """
    neg = rescale(lat, -1)
    point_neg = swap_blocks_point(point, neg)
    poly_neg = block_swapped_poly(poly)
    lhs = siegel_theta(neg, tau, point_neg, poly_neg, pair_vectors, bound)
    rhs = siegel_theta(lat, tau, point, poly.conjugate(), pair_vectors, bound)
    power = Fraction(lat.sig_plus - lat.sig_minus, 2) + poly.degrees[0] - poly.degrees[1]
    scaled = conjugate_vector(rhs.value).scale(tau.imag ** float(power))
    d_neg = discriminant_group(neg)
    d_pos = discriminant_group(lat)
    worst = 0.0
    for x in d_neg.elements():
        matching = d_pos.from_dual(d_neg.dual_vector(x))
        worst = max(worst, abs(lhs.value.get((x,)) - scaled.get((matching,))))
    return worst


def modularity_defect(theta_fn, g: MetaplecticElement, tau: complex,
                      weight_exponent: int, alpha=None, beta=None,
                      bound: float = 10.0, tolerance: float | None = None) -> float:
    """Sup-norm defect of the transformation law at a metaplectic element.

    ``theta_fn(tau, alpha, beta, bound) -> ThetaValue``; the two shift
    vectors transform column-wise under the matrix.  Raises TailTooLarge when
    the truncation certificates exceed a tenth of the requested tolerance.
    """
    tau = _check_tau(tau)
    base = theta_fn(tau, alpha, beta, bound)
    rank = None
    if alpha is not None or beta is not None:
        rank = len(alpha if alpha is not None else beta)
    if rank is None:
        new_alpha, new_beta = None, None
    else:
        a_vec = list(alpha) if alpha is not None else [Fraction(0)] * rank
        b_vec = list(beta) if beta is not None else [Fraction(0)] * rank
        new_alpha, new_beta = g.act_pair(a_vec, b_vec)
    lhs = theta_fn(g.act(tau), new_alpha, new_beta, bound)
    factor = g.phi(tau) ** weight_exponent
    rhs = rho_apply(g, base.value).scale(factor)
    tails = lhs.tail_estimate + abs(factor) * base.tail_estimate
    if tolerance is not None and tails > tolerance / 10.0:
        raise TailTooLarge(f"tail certificates {tails} exceed {tolerance}/10")
    return (lhs.value - rhs).norm_inf()


def siegel_theta_family(lat: Lattice, point: GrassmannPoint,
                        poly: HomogeneousPolynomial, max_vectors=None):
    """Closure (tau, alpha, beta, bound) -> ThetaValue for modularity checks."""

    def fn(tau, alpha=None, beta=None, bound=10.0):
        pair_vec = None if alpha is None and beta is None else \
            (alpha if alpha is not None else [Fraction(0)] * lat.rank,
             beta if beta is not None else [Fraction(0)] * lat.rank)
        return siegel_theta(lat, tau, point, poly, pair_vec, bound, max_vectors)

    return fn


def mixed_theta_family(lat: Lattice, m_sub: Sublattice, u_perp: GrassmannPoint,
                       poly: HomogeneousPolynomial, construction=mixed_theta_direct,
                       max_vectors=None):
    def fn(tau, alpha=None, beta=None, bound=10.0):
        pair_vec = None if alpha is None and beta is None else \
            (alpha if alpha is not None else [Fraction(0)] * lat.rank,
             beta if beta is not None else [Fraction(0)] * lat.rank)
        return construction(lat, m_sub, tau, u_perp, poly, pair_vec, bound, max_vectors)

    return fn


def theta_value_difference(t1: ThetaValue, t2: ThetaValue) -> float:
    return (t1.value - t2.value).norm_inf()


# ---------------------------------------------------------------------------
# seesaw identities

def _split_setup(lat, m_sub, u, u_perp, p_u, p_uperp, pair_vectors):
    sd = split_data(lat, m_sub)
    v = direct_sum_grassmann(sd.m_sub, sd.mperp_sub, u, u_perp)
    p_v = lift_product(p_u, p_uperp)
    vp = as_pair(pair_vectors, lat.rank)
    alpha_m = sd.m_sub.coords_of(vp.alpha)
    beta_m = sd.m_sub.coords_of(vp.beta)
    alpha_p = sd.mperp_sub.coords_of(vp.alpha)
    beta_p = sd.mperp_sub.coords_of(vp.beta)
    return sd, v, p_v, vp, (alpha_m, beta_m), (alpha_p, beta_p)


def inner_tensor_to_big(sd: SplitData, theta_m: ThetaValue, theta_p: ThetaValue) -> RepVector:
    """Merge Theta_M (x) Theta_Mperp over D_M x D_perp into D_inner, push down."""
    tensor = theta_m.value.tensor(theta_p.value)
    merged: dict = {}
    for key, val in tensor.coeffs.items():
        k_m, k_p = key
        mk = (sd.combine(k_m, k_p),)
        merged[mk] = merged.get(mk, 0j) + val
    merged_vec = RepVector((Axis(sd.d_inner, dual=False),), merged)
    return down_arrow(sd.gm, merged_vec)


def seesaw_split_residual(lat: Lattice, m_sub: Sublattice, u: GrassmannPoint,
                          u_perp: GrassmannPoint, p_u, p_uperp, tau: complex,
                          pair_vectors=None, bound: float = 10.0) -> float:
    """Residual of: Theta_L at the combined splitting equals the glue
    push-down of Theta_M tensor Theta_Mperp (projected shift vectors)."""
    sd, v, p_v, vp, pm, pp = _split_setup(lat, m_sub, u, u_perp, p_u, p_uperp,
                                          pair_vectors)
    lhs = siegel_theta(lat, tau, v, p_v, (vp.alpha, vp.beta), bound)
    theta_m = siegel_theta(sd.m_sub.lattice, tau, u, p_u, pm, bound)
    theta_p = siegel_theta(sd.mperp_sub.lattice, tau, u_perp, p_uperp, pp, bound)
    rhs = inner_tensor_to_big(sd, theta_m, theta_p)
    return (lhs.value - rhs).norm_inf()


def seesaw_pairing_residual(lat: Lattice, m_sub: Sublattice, u: GrassmannPoint,
                            u_perp: GrassmannPoint, p_u, p_uperp, tau: complex,
                            pair_vectors=None, bound: float = 10.0) -> float:
    """Residual of: Theta_L equals the D_M-contraction of Theta_M against the
    mixed theta (with the complement projections of the shift vectors)."""
    sd, v, p_v, vp, pm, _pp = _split_setup(lat, m_sub, u, u_perp, p_u, p_uperp,
                                           pair_vectors)
    lhs = siegel_theta(lat, tau, v, p_v, (vp.alpha, vp.beta), bound)
    theta_m = siegel_theta(sd.m_sub.lattice, tau, u, p_u, pm, bound)
    alpha_perp = sd.mperp_sub.project_ambient(vp.alpha)
    beta_perp = sd.mperp_sub.project_ambient(vp.beta)
    mixed = mixed_theta_direct(lat, m_sub, tau, u_perp, p_uperp,
                               (alpha_perp, beta_perp), bound)
    rhs = rep_pair(theta_m.value, mixed.value, groups=[sd.d_m])
    return (lhs.value - rhs).norm_inf()


def pairing_expression_residuals(lat: Lattice, m_sub: Sublattice, u: GrassmannPoint,
                                 u_perp: GrassmannPoint, p_u, p_uperp, tau: complex,
                                 test_vector: RepVector, pair_vectors=None,
                                 bound: float = 10.0) -> tuple[float, float]:
    """Both re-expressions of the scalar <Theta_L, U>, against direct evaluation.

    The first goes through the inner-sum tensor and the raised test vector;
    the second through the mixed theta.  Returns the two deviations.
    """
    sd, v, p_v, vp, pm, _pp = _split_setup(lat, m_sub, u, u_perp, p_u, p_uperp,
                                           pair_vectors)
    lhs = siegel_theta(lat, tau, v, p_v, (vp.alpha, vp.beta), bound)
    direct = rep_pair(lhs.value, test_vector, groups=[sd.d_l])
    theta_m = siegel_theta(sd.m_sub.lattice, tau, u, p_u, pm, bound)
    alpha_perp = sd.mperp_sub.project_ambient(vp.alpha)
    beta_perp = sd.mperp_sub.project_ambient(vp.beta)
    theta_p = siegel_theta(sd.mperp_sub.lattice, tau, u_perp, p_uperp,
                           (sd.mperp_sub.coords_of(alpha_perp),
                            sd.mperp_sub.coords_of(beta_perp)), bound)
    # first form: tensor over the inner sum against the raised vector
    tensor = theta_m.value.tensor(theta_p.value)
    merged: dict = {}
    for key, val in tensor.coeffs.items():
        merged[(sd.combine(key[0], key[1]),)] = \
            merged.get((sd.combine(key[0], key[1]),), 0j) + val
    merged_vec = RepVector((Axis(sd.d_inner, dual=False),), merged)
    raised = up_arrow(sd.gm, test_vector)
    first = rep_pair(merged_vec, raised, groups=[sd.d_inner])
    # second form: contract the mixed theta against U over D_L, then pair with Theta_M
    mixed = mixed_theta_direct(lat, m_sub, tau, u_perp, p_uperp,
                               (alpha_perp, beta_perp), bound)
    inner_pair = rep_pair(mixed.value, test_vector, groups=[sd.d_l])
    second = rep_pair(theta_m.value, inner_pair, groups=[sd.d_m])
    return abs(first - direct), abs(second - direct)


def term_multiset(theta: ThetaValue) -> dict:
    """Exact (key, a, b, phase) -> summed constant polynomial coefficient.

    Only meaningful for terms with no 1/y dependence (harmonic or constant
    polynomials); used for coefficientwise identity checks.
    """
    out: dict = {}
    for t in theta.terms:
        if len(t.poly_coeffs) != 1:
            raise NonHomogeneousPolynomial("term multiset needs y-independent factors")
        k = (t.key, t.a, t.b, t.phase)
        out[k] = out.get(k, 0j) + t.poly_coeffs[0]
    return {k: v for k, v in out.items() if abs(v) > 1e-15}
