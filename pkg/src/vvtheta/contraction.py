"""Theta contraction of dual-representation forms, and lift diagnostics.

A q-expansion form is a finite coset-indexed expansion with exact rational
exponents; pairing it against the mixed theta of (L, M) pointwise gives the
contraction, and when the complement is positive definite the same object is
assembled symbolically as an exact product of q-series.  The regularized
lift itself is out of scope; what is computed is its integrand and a naive
quadrature over a truncated fundamental domain, which is enough to check the
restriction identity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from . import exact
from .discforms import DiscriminantGroup, discriminant_group
from .errors import (
    ComplementNotDefinite,
    GlueDegenerate,
    InconsistentDegrees,
    IndexMismatch,
    PolynomialNotHarmonic,
    SplitCheckFailed,
)
from .grassmann import (
    HomogeneousPolynomial,
    direct_sum_grassmann,
    lift_product,
    make_grassmann_point,
    split_product_check,
)
from .lattice import Lattice, Sublattice
from .theta import (
    enumerate_vectors,
    mixed_theta_direct,
    siegel_theta,
    siegel_theta_evaluator,
    split_data,
)
from .weil import Axis, RepVector, pair as rep_pair


@dataclass
class QExpansionForm:
    """Finite q-expansion valued in the dual group algebra of a lattice.

    ``terms`` maps (coset coordinates, exact exponent) to a coefficient; the
    exponent of a term on coset gamma must be congruent to -q(gamma) mod 1
    (the dual-side convention, so pairings against theta vectors have
    integral q-powers).  Negative exponents (principal parts) are allowed.
    """

    lattice: Lattice
    weight: Fraction
    terms: dict

    def __post_init__(self):
        self.weight = Fraction(self.weight)
        group = discriminant_group(self.lattice)
        canon = {}
        for (coset, expo), coeff in self.terms.items():
            coset = tuple(int(c) for c in coset)
            expo = Fraction(expo)
            if len(coset) != len(group.elementary_divisors):
                raise IndexMismatch(f"coset {coset} has wrong arity")
            if exact.mod1(expo + group.q(coset)) != 0:
                raise IndexMismatch(
                    f"exponent {expo} on coset {coset} violates the dual "
                    f"congruence (needs -q = {exact.mod1(-group.q(coset))} mod 1)")
            if complex(coeff) != 0:
                canon[(coset, expo)] = complex(coeff)
        self.terms = canon

    @property
    def group(self) -> DiscriminantGroup:
        return discriminant_group(self.lattice)

    @property
    def exponent_denominator(self) -> int:
        den = 1
        for (_c, e) in self.terms:
            den = den * e.denominator // math.gcd(den, e.denominator)
        return den

    def min_exponent(self) -> Fraction:
        return min((e for (_c, e) in self.terms), default=Fraction(0))

    def evaluate(self, tau: complex) -> RepVector:
        out: dict = {}
        for (coset, expo), coeff in self.terms.items():
            val = coeff * cmath.exp(2j * math.pi * tau * float(expo))
            key = (coset,)
            out[key] = out.get(key, 0j) + val
        return RepVector((Axis(self.group, dual=True),), out)

    def component(self, coset) -> dict:
        coset = tuple(coset)
        return {e: c for (g, e), c in self.terms.items() if g == coset}

    def __add__(self, other: "QExpansionForm") -> "QExpansionForm":
        if other.lattice != self.lattice or other.weight != self.weight:
            raise IndexMismatch("adding incompatible q-expansions")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0j) + v
        return QExpansionForm(self.lattice, self.weight, out)


@dataclass
class ContractionResult:
    """Symbolically contracted form over the sublattice, with its weight."""

    form: QExpansionForm
    weight: Fraction


def _form_value(form, tau: complex) -> RepVector:
    if isinstance(form, QExpansionForm):
        return form.evaluate(tau)
    if isinstance(form, RepVector):
        return form
    return form(tau)


def contract_pointwise(form, lat: Lattice, m_sub: Sublattice,
                       u_perp, p_uperp: HomogeneousPolynomial, tau: complex,
                       bound: float = 10.0, pair_vectors=None) -> RepVector:
    """<mixed theta (tau), F(tau)> over D_L: a vector over the dual of D_M.

    ``form`` may be a QExpansionForm, a constant RepVector over the dual
    axis, or a callable tau -> RepVector.
    """
    sd = split_data(lat, m_sub)
    mixed = mixed_theta_direct(lat, m_sub, tau, u_perp, p_uperp, pair_vectors, bound)
    return rep_pair(mixed.value, _form_value(form, tau), groups=[sd.d_l])


# ---------------------------------------------------------------------------
# symbolic contraction (positive definite complement)

def theta_series_coset(perp_lat: Lattice, u_perp, poly: HomogeneousPolynomial,
                       coset_vec, bound) -> dict:
    """Exact-exponent q-series of one coset of a positive definite lattice."""
    series: dict = {}
    for lam in enumerate_vectors(perp_lat, coset_vec, u_perp, None, bound):
        expo = perp_lat.norm(lam) / 2
        coeff = poly.evaluate(u_perp.adapted_coords(lam))
        if coeff != 0:
            series[expo] = series.get(expo, 0j) + coeff
    return {e: c for e, c in series.items() if abs(c) > 0}


def _subgroup_decomposition(group: DiscriminantGroup, subgroup_elements):
    """(perp list, index map) for a non-degenerate subgroup of a finite
    quadratic module: every element splits uniquely as h + x with h in the
    subgroup and x orthogonal to it."""
    sub = sorted(set(subgroup_elements))
    perp = [x for x in group.elements()
            if all(group.b(x, h) == 0 for h in sub)]
    if len(sub) * len(perp) != group.order:
        raise GlueDegenerate("subgroup is degenerate: |H| * |H perp| != |D|")
    overlap = set(sub) & set(perp) - {group.zero()}
    if overlap:
        raise GlueDegenerate(f"subgroup meets its orthogonal complement in {overlap}")
    decompose = {}
    for h in sub:
        for x in perp:
            decompose[group.add(h, x)] = (h, x)
    if len(decompose) != group.order:
        raise GlueDegenerate("subgroup plus complement does not cover the group")
    return sub, perp, decompose


def contract_symbolic(form: QExpansionForm, lat: Lattice, m_sub: Sublattice,
                      p_uperp: HomogeneousPolynomial,
                      bound: float = 10.0) -> ContractionResult:
    """Exact q-expansion of the contraction, via glue-coset bookkeeping.

    Requires a positive definite complement (its Grassmannian is a point), a
    harmonic polynomial there, and non-degenerate glue projections.  Each
    output component on alpha + gamma_M collects the products of the input
    component on the class of (alpha, beta) with the complement theta series
    on beta + gamma_perp, over glue elements gamma.
    """
    sd = split_data(lat, m_sub)
    perp_lat = sd.mperp_sub.lattice
    if perp_lat.sig_minus != 0:
        raise ComplementNotDefinite(
            f"complement has signature {perp_lat.signature}; needs positive definite")
    if not p_uperp.laplacian().is_zero():
        raise PolynomialNotHarmonic("symbolic contraction needs a harmonic polynomial")
    if form.lattice != lat:
        raise IndexMismatch("form is indexed by a different lattice")
    u_perp = make_grassmann_point(perp_lat, exact.identity(perp_lat.rank))
    p_uperp = _check_perp_poly(p_uperp, perp_lat)
    # glue subgroup and its two projections
    h_elements = [x for x in sd.gm.subgroup.elements]
    h_m, h_perp_of = [], {}
    for h in h_elements:
        hm, hp = sd.split(h)
        h_m.append(hm)
        h_perp_of[hm] = hp
    if len(set(h_m)) != len(h_elements):
        raise GlueDegenerate("glue projection to the sublattice group is not injective")
    _hm, hm_perp, _dec_m = _subgroup_decomposition(sd.d_m, h_m)
    _hp, hp_perp, _dec_p = _subgroup_decomposition(sd.d_perp, h_perp_of.values())
    # theta series of every needed complement coset
    min_f = min(Fraction(0), form.min_exponent())
    theta_bound = Fraction(bound) - min_f
    theta_cache = {}
    for beta in hp_perp:
        for h in h_elements:
            coset = sd.d_perp.add(beta, h_perp_of[sd.split(h)[0]])
            if coset not in theta_cache:
                theta_cache[coset] = theta_series_coset(
                    perp_lat, u_perp, p_uperp,
                    sd.d_perp.dual_vector(coset), theta_bound)
    out: dict = {}
    cap = Fraction(bound)
    for alpha in hm_perp:
        for beta in hp_perp:
            gamma_l = sd.gm.down[sd.combine(alpha, beta)]
            f_component = form.component(gamma_l)
            if not f_component:
                continue
            for h in h_elements:
                hm, hp = sd.split(h)
                delta_m = sd.d_m.add(alpha, hm)
                theta_part = theta_cache[sd.d_perp.add(beta, hp)]
                for e_f, c_f in f_component.items():
                    for e_t, c_t in theta_part.items():
                        e_total = e_f + e_t
                        if e_total > cap:
                            continue
                        key = (delta_m, e_total)
                        out[key] = out.get(key, 0j) + c_f * c_t
    d_plus, d_minus = p_uperp.degrees
    mixed_weight = Fraction(lat.sig_plus - m_sub.lattice.sig_plus
                            - lat.sig_minus + m_sub.lattice.sig_minus, 2) \
        + d_plus - d_minus
    weight = form.weight + mixed_weight
    result = QExpansionForm(m_sub.lattice, weight, out)
    return ContractionResult(form=result, weight=weight)


def _check_perp_poly(poly: HomogeneousPolynomial, perp_lat: Lattice):
    if poly.nvars_plus != perp_lat.sig_plus or poly.nvars_minus != perp_lat.sig_minus:
        raise PolynomialNotHarmonic(
            "polynomial variables do not match the definite complement")
    return poly


# ---------------------------------------------------------------------------
# lift integrand, restriction identity, naive truncated lift

def lift_integrand(form, lat: Lattice, point, poly: HomogeneousPolynomial,
                   tau: complex, bound: float = 10.0) -> complex:
    """Scalar <Theta_L(tau; v, p), F(tau)>: the lift integrand at s = 0."""
    theta = siegel_theta(lat, tau, point, poly, None, bound)
    group = discriminant_group(lat)
    return rep_pair(theta.value, _form_value(form, tau), groups=[group])


def restriction_residual(form, lat: Lattice, m_sub: Sublattice,
                         u, u_perp, p_u, p_uperp, tau_samples,
                         bound: float = 10.0) -> float:
    """Pointwise form of the lift restriction: the ambient integrand equals
    the sublattice integrand of the contraction, at every sample."""
    sd = split_data(lat, m_sub)
    v = direct_sum_grassmann(sd.m_sub, sd.mperp_sub, u, u_perp)
    p_v = lift_product(p_u, p_uperp)
    ok, dev = split_product_check(p_v, p_u, p_uperp, v, u, u_perp,
                                  sd.m_sub, sd.mperp_sub)
    if not ok:
        raise SplitCheckFailed(f"product polynomial check failed (dev {dev})")
    worst = 0.0
    for tau in tau_samples:
        lhs = lift_integrand(form, lat, v, p_v, tau, bound)
        contracted = contract_pointwise(form, lat, m_sub, u_perp, p_uperp, tau, bound)
        theta_m = siegel_theta(sd.m_sub.lattice, tau, u, p_u, None, bound)
        rhs = rep_pair(theta_m.value, contracted, groups=[sd.d_m])
        worst = max(worst, abs(lhs - rhs))
    return worst


FUNDAMENTAL_Y0 = math.sqrt(3.0) / 2.0


def naive_truncated_lift(form, lat: Lattice, point, poly: HomogeneousPolynomial,
                         y_max: float, grid_n: int, bound: float = 10.0):
    """Midpoint quadrature of the integrand over the truncated fundamental
    domain {|x| <= 1/2, |tau| >= 1, y <= y_max}; diagnostic only.

    Returns (value, error_estimate) where the estimate is the difference
    against the half-resolution grid.  The theta terms are enumerated once
    and reused across the whole grid.
    """
    evaluator = siegel_theta_evaluator(lat, point, poly, None, bound)
    group = discriminant_group(lat)

    def quadrature(n: int) -> complex:
        dx = 1.0 / n
        dy = (y_max - FUNDAMENTAL_Y0) / n
        total = 0j
        for i in range(n):
            x = -0.5 + (i + 0.5) * dx
            for j in range(n):
                y = FUNDAMENTAL_Y0 + (j + 0.5) * dy
                if x * x + y * y < 1.0:
                    continue
                tau = complex(x, y)
                theta = evaluator.at(tau)
                val = rep_pair(theta.value, _form_value(form, tau), groups=[group])
                total += val * dx * dy / (y * y)
        return total

    value = quadrature(grid_n)
    coarse = quadrature(max(grid_n // 2, 1))
    return value, abs(value - coarse)


# ---------------------------------------------------------------------------
# weight bookkeeping

def expected_weights(f_weight, sig_big, sig_sub, degrees_big, degrees_sub) -> dict:
    """Weights of the mixed theta and the contraction from signature and
    degree data; checks the additivity that makes the contraction modular.

    sig_big = (b+, b-), sig_sub = (c+, c-), degrees_big = (m+, m-) for the
    ambient polynomial, degrees_sub = (n+, n-) for its sublattice factor.
    """
    b_plus, b_minus = sig_big
    c_plus, c_minus = sig_sub
    m_plus, m_minus = degrees_big
    n_plus, n_minus = degrees_sub
    if not (0 <= c_plus <= b_plus and 0 <= c_minus <= b_minus):
        raise InconsistentDegrees("sublattice signature exceeds the ambient one")
    if not (0 <= n_plus <= m_plus and 0 <= n_minus <= m_minus):
        raise InconsistentDegrees("sublattice degrees exceed the ambient ones")
    f_weight = Fraction(f_weight)
    ambient_form = Fraction(b_minus - b_plus, 2) + m_minus - m_plus
    mixed = Fraction(b_plus - c_plus - b_minus + c_minus, 2) \
        + (m_plus - n_plus) - (m_minus - n_minus)
    contraction = Fraction(c_minus - c_plus, 2) + n_minus - n_plus
    paired = f_weight + mixed
    consistent = (f_weight == ambient_form)
    if consistent and paired != contraction:
        raise InconsistentDegrees("weight additivity failed; degree data inconsistent")
    return {
        "ambient_form": ambient_form,
        "mixed_theta": mixed,
        "contraction": contraction,
        "paired": paired,
        "consistent": consistent,
    }
