"""Weil representations of the metaplectic double cover of SL2(Z).

The representation acts on C[D] for a discriminant group D; basis vectors are
indexed by group elements.  General elements act through a generator word
(Euclidean reduction on the bottom row), with the square-root branch tracked
numerically by its value at tau = i.  Tensor factors carry a ``dual`` flag;
a dual axis is acted on by the conjugate matrices, which is the same as using
the rescaled lattice with inverted pairings.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .discforms import DiscriminantGroup, GlueMap, two_pi_e
from .errors import IndexMismatch, VvthetaError


@dataclass(frozen=True)
class MetaplecticElement:
    """(A, phi) with A in SL2(Z) and phi(tau) = branch * principal sqrt(c tau + d)."""

    a: int
    b: int
    c: int
    d: int
    branch: int = 1  # +1 or -1

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise VvthetaError(f"matrix {self.matrix()} is not in SL2(Z)")
        if self.branch not in (1, -1):
            raise VvthetaError("branch must be +1 or -1")

    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    def phi(self, tau: complex) -> complex:
        return self.branch * cmath.sqrt(self.c * tau + self.d)

    def act(self, tau: complex) -> complex:
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def act_pair(self, alpha, beta):
        """Column action on a vector pair: (a alpha + b beta, c alpha + d beta)."""
        new_alpha = [self.a * x + self.b * y for x, y in zip(alpha, beta)]
        new_beta = [self.c * x + self.d * y for x, y in zip(alpha, beta)]
        return new_alpha, new_beta

    def __mul__(self, other: "MetaplecticElement") -> "MetaplecticElement":
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        # product rule: phi(tau) = phi_self(other tau) * phi_other(tau), at tau=i
        tau = 1j
        phi_val = self.phi(other.act(tau)) * other.phi(tau)
        principal = cmath.sqrt(c * tau + d)
        ratio = phi_val / principal
        if abs(ratio - 1) < 1e-9:
            branch = 1
        elif abs(ratio + 1) < 1e-9:
            branch = -1
        else:
            raise VvthetaError(f"branch tracking lost: ratio {ratio}")
        return MetaplecticElement(a, b, c, d, branch)

    def inverse(self) -> "MetaplecticElement":
        inv = MetaplecticElement(self.d, -self.b, -self.c, self.a, 1)
        if abs((self * inv).phi(1j) - 1) < 1e-9:
            return inv
        return MetaplecticElement(self.d, -self.b, -self.c, self.a, -1)


MP_IDENTITY = MetaplecticElement(1, 0, 0, 1, 1)
MP_T = MetaplecticElement(1, 1, 0, 1, 1)
MP_S = MetaplecticElement(0, -1, 1, 0, 1)
MP_Z = MetaplecticElement(-1, 0, 0, -1, 1)  # phi = i = principal sqrt(-1)


def mp_power(g: MetaplecticElement, k: int) -> MetaplecticElement:
    out = MP_IDENTITY
    base = g if k >= 0 else g.inverse()
    for _ in range(abs(k)):
        out = out * base
    return out


@dataclass(frozen=True)
class GeneratorWord:
    """A word in T^n, S, Z^k whose ordered product is a metaplectic element."""

    tokens: tuple[tuple[str, int], ...]

    def evaluate(self) -> MetaplecticElement:
        out = MP_IDENTITY
        for kind, n in self.tokens:
            if kind == "T":
                out = out * MetaplecticElement(1, n, 0, 1, 1)
            elif kind == "S":
                out = out * MP_S
            elif kind == "Z":
                out = out * mp_power(MP_Z, n % 4)
            else:
                raise VvthetaError(f"unknown token {kind}")
        return out

    def __len__(self):
        return len(self.tokens)


def word_decompose(g: MetaplecticElement) -> GeneratorWord:
    """Express g as a word in T^n, S and a trailing Z power.

    Euclidean reduction on the bottom row: repeatedly peel T^q S from the
    left, which at most halves |c|; the leftover upper-triangular part is a
    T power times a sign, and the branch is fixed by a final Z power.
    """
    tokens = []
    a, b, c, d = g.a, g.b, g.c, g.d
    while c != 0:
        # choose q with |a - qc| <= |c| / 2 so the recursion terminates
        q = round(Fraction(a, c))
        tokens.append(("T", q))
        tokens.append(("S", 1))
        # remaining element: S^{-1} T^{-q} (a b; c d) = (c, d; -(a-qc), -(b-qd))
        a, b, c, d = c, d, -(a - q * c), -(b - q * d)
    # now the matrix is (a, b; 0, d) with a = d = +-1; Z carries matrix -I
    if a == 1:
        if b != 0:
            tokens.append(("T", b))
    else:
        tokens.append(("Z", 1))
        if b != 0:
            tokens.append(("T", -b))
    word = GeneratorWord(tuple(tokens))
    got = word.evaluate()
    if got.matrix() != g.matrix():
        raise VvthetaError("word decomposition failed to reproduce the matrix")
    if got.branch != g.branch:
        word = GeneratorWord(tuple(tokens) + (("Z", 2),))
        got = word.evaluate()
    if (got.matrix(), got.branch) != (g.matrix(), g.branch):
        raise VvthetaError("word decomposition failed to reproduce the branch")
    return word


# ---------------------------------------------------------------------------
# generator matrices

def _sig_pair(group: DiscriminantGroup, dual: bool) -> tuple[int, int]:
    sp, sm = group.lattice.sig_plus, group.lattice.sig_minus
    return (sm, sp) if dual else (sp, sm)


def _q_sign(dual: bool) -> int:
    return -1 if dual else 1


def rho_generator(group: DiscriminantGroup, gen: str, dual: bool = False) -> np.ndarray:
    """Matrix of the representation on C[D] for a generator T, S or Z.

    With a ``dual`` axis the forms are negated and the signature swapped,
    which realizes the dual representation as conjugate matrices.
    """
    elements = group.elements()
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    sp, sm = _sig_pair(group, dual)
    sgn = _q_sign(dual)
    if gen == "T":
        return np.diag([two_pi_e(sgn * group.q(e)) for e in elements]).astype(complex)
    if gen == "S":
        factor = two_pi_e(Fraction(sm - sp, 8)) / math.sqrt(n)
        mat = np.empty((n, n), dtype=complex)
        for j, gamma in enumerate(elements):
            for i, delta in enumerate(elements):
                mat[i, j] = two_pi_e(-sgn * group.b(gamma, delta))
        return factor * mat
    if gen == "Z":
        mat = np.zeros((n, n), dtype=complex)
        phase = two_pi_e(Fraction(sm - sp, 4))
        for j, gamma in enumerate(elements):
            mat[index[group.neg(gamma)], j] = phase
        return mat
    raise VvthetaError(f"unknown generator {gen}")


def _token_matrix(group: DiscriminantGroup, dual: bool, kind: str, n: int) -> np.ndarray:
    elements = group.elements()
    sgn = _q_sign(dual)
    if kind == "T":
        return np.diag([two_pi_e(sgn * n * group.q(e)) for e in elements]).astype(complex)
    if kind == "S":
        return rho_generator(group, "S", dual)
    if kind == "Z":
        z = rho_generator(group, "Z", dual)
        return np.linalg.matrix_power(z, n % 4)
    raise VvthetaError(f"unknown token {kind}")


def rho_matrix(group: DiscriminantGroup, g: MetaplecticElement, dual: bool = False) -> np.ndarray:
    """Full matrix of the representation at g, via its generator word."""
    word = word_decompose(g)
    n = group.order
    out = np.eye(n, dtype=complex)
    for kind, power in word.tokens:
        out = out @ _token_matrix(group, dual, kind, power)
    return out


# ---------------------------------------------------------------------------
# representation vectors

@dataclass(frozen=True)
class Axis:
    group: DiscriminantGroup
    dual: bool = False

    def __repr__(self):
        star = "*" if self.dual else ""
        return f"Axis(|D|={self.group.order}{star})"


class RepVector:
    """Finitely supported vector in a tensor product of group algebras C[D].

    Keys of ``coeffs`` are tuples of group-element coordinate tuples, one per
    axis.  Treated as immutable after construction.
    """

    def __init__(self, axes, coeffs=None, validate: bool = True):
        self.axes = tuple(axes)
        self.coeffs = dict(coeffs or {})
        if validate:
            for key in self.coeffs:
                if len(key) != len(self.axes):
                    raise IndexMismatch(f"key {key} has arity {len(key)}, "
                                        f"expected {len(self.axes)}")
                for elt, ax in zip(key, self.axes):
                    divs = ax.group.elementary_divisors
                    if not isinstance(elt, tuple) or len(elt) != len(divs) \
                            or any(not (0 <= c < d) for c, d in zip(elt, divs)):
                        raise IndexMismatch(
                            f"component {elt} is not a reduced element of the axis group")

    @classmethod
    def basis_vector(cls, axes, key):
        return cls(axes, {tuple(key): 1.0 + 0j})

    @classmethod
    def zero(cls, axes):
        return cls(axes, {})

    def copy(self):
        return RepVector(self.axes, dict(self.coeffs))

    def get(self, key) -> complex:
        return self.coeffs.get(tuple(key), 0j)

    def __add__(self, other):
        if self.axes != other.axes:
            raise IndexMismatch("adding vectors over different index spaces")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0j) + v
        return RepVector(self.axes, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, factor: complex):
        return RepVector(self.axes, {k: factor * v for k, v in self.coeffs.items()})

    def tensor(self, other):
        out = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                out[k1 + k2] = out.get(k1 + k2, 0j) + v1 * v2
        return RepVector(self.axes + other.axes, out)

    def norm_inf(self) -> float:
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    def prune(self, tol: float = 0.0):
        return RepVector(self.axes, {k: v for k, v in self.coeffs.items() if abs(v) > tol})

    def support(self):
        return sorted(self.coeffs)

    def __repr__(self):
        return f"RepVector(axes={list(self.axes)}, nnz={len(self.coeffs)})"


def full_basis(axes) -> list[tuple]:
    """All index keys of the tensor product, in lexicographic order."""
    import itertools

    pools = [ax.group.elements() for ax in axes]
    return [tuple(k) for k in itertools.product(*pools)]


def apply_axis_matrix(vec: RepVector, axis_index: int, mat: np.ndarray,
                      elements, index) -> RepVector:
    out = {}
    for key, val in vec.coeffs.items():
        col = index[key[axis_index]]
        column = mat[:, col]
        for row in np.nonzero(np.abs(column) > 1e-16)[0]:
            new_key = key[:axis_index] + (elements[row],) + key[axis_index + 1:]
            out[new_key] = out.get(new_key, 0j) + column[row] * val
    return RepVector(vec.axes, out)


def rho_apply(g: MetaplecticElement, vec: RepVector) -> RepVector:
    """Apply the tensor-product representation at g to a vector.

    Each axis transforms under the Weil representation of its group (the
    conjugate representation on dual axes).
    """
    word = word_decompose(g)
    out = vec
    for kind, power in reversed(word.tokens):
        for i, ax in enumerate(out.axes):
            elements = ax.group.elements()
            index = {e: j for j, e in enumerate(elements)}
            mat = _token_matrix(ax.group, ax.dual, kind, power)
            out = apply_axis_matrix(out, i, mat, elements, index)
    return out


# ---------------------------------------------------------------------------
# glue intertwiners and the pairing

def _locate_axis(vec: RepVector, group: DiscriminantGroup, axis: int | None) -> int:
    if axis is not None:
        return axis
    hits = [i for i, ax in enumerate(vec.axes) if ax.group == group]
    if len(hits) != 1:
        raise IndexMismatch(
            f"expected exactly one axis over |D|={group.order}, found {len(hits)}")
    return hits[0]


def up_arrow(gm: GlueMap, vec: RepVector, axis: int | None = None) -> RepVector:
    """C[D_big] -> C[D_small]: spread each basis vector over its glue fiber."""
    i = _locate_axis(vec, gm.big_disc, axis)
    new_axes = vec.axes[:i] + (Axis(gm.small_disc, vec.axes[i].dual),) + vec.axes[i + 1:]
    out = {}
    for key, val in vec.coeffs.items():
        for delta in gm.up[key[i]]:
            new_key = key[:i] + (delta,) + key[i + 1:]
            out[new_key] = out.get(new_key, 0j) + val
    return RepVector(new_axes, out)


def down_arrow(gm: GlueMap, vec: RepVector, axis: int | None = None) -> RepVector:
    """C[D_small] -> C[D_big]: collapse glue cosets, kill non-orthogonal indices."""
    i = _locate_axis(vec, gm.small_disc, axis)
    new_axes = vec.axes[:i] + (Axis(gm.big_disc, vec.axes[i].dual),) + vec.axes[i + 1:]
    out = {}
    for key, val in vec.coeffs.items():
        gamma = gm.down.get(key[i])
        if gamma is None:
            continue
        new_key = key[:i] + (gamma,) + key[i + 1:]
        out[new_key] = out.get(new_key, 0j) + val
    return RepVector(new_axes, out)


def pair(u: RepVector, v: RepVector, groups=None):
    """Bilinear pairing contracting matching axes of u against v.

    For each group to contract, u must carry exactly one axis over it and v
    exactly one axis of the opposite duality; matching indices multiply and
    sum.  Defaults to contracting every group that admits such a match.
    Returns a scalar when no axes remain, otherwise a RepVector over the
    leftover axes (u's first, then v's).
    """
    if groups is None:
        groups = []
        seen = []
        for ax in u.axes:
            if ax.group in seen:
                continue
            u_hits = [a for a in u.axes if a.group == ax.group]
            if len(u_hits) != 1:
                continue
            v_hits = [a for a in v.axes
                      if a.group == ax.group and a.dual != u_hits[0].dual]
            if len(v_hits) == 1:
                groups.append(ax.group)
                seen.append(ax.group)
        if not groups:
            raise IndexMismatch("no contractible axes between the two vectors")
    u_idx, v_idx = [], []
    for group in groups:
        iu = [i for i, ax in enumerate(u.axes) if ax.group == group]
        if len(iu) != 1:
            raise IndexMismatch("ambiguous axis match for pairing")
        du = u.axes[iu[0]].dual
        iv = [i for i, ax in enumerate(v.axes)
              if ax.group == group and ax.dual != du]
        if len(iv) != 1:
            raise IndexMismatch("no unique complementary axis for pairing")
        u_idx.append(iu[0])
        v_idx.append(iv[0])
    u_rest = [i for i in range(len(u.axes)) if i not in u_idx]
    v_rest = [i for i in range(len(v.axes)) if i not in v_idx]
    out_axes = tuple(u.axes[i] for i in u_rest) + tuple(v.axes[i] for i in v_rest)
    out = {}
    for ku, cu in u.coeffs.items():
        match = tuple(ku[i] for i in u_idx)
        for kv, cv in v.coeffs.items():
            if tuple(kv[i] for i in v_idx) != match:
                continue
            key = tuple(ku[i] for i in u_rest) + tuple(kv[i] for i in v_rest)
            out[key] = out.get(key, 0j) + cu * cv
    if not out_axes:
        return out.get((), 0j)
    return RepVector(out_axes, out)


def identity_vector(group: DiscriminantGroup) -> RepVector:
    """Sum of e_d (x) e*_d over D: the identity of End(C[D]) under duality."""
    axes = (Axis(group, dual=False), Axis(group, dual=True))
    return RepVector(axes, {(d, d): 1.0 + 0j for d in group.elements()})


def reindex_axis(vec: RepVector, axis_index: int, new_group: DiscriminantGroup,
                 new_dual: bool) -> RepVector:
    """Reindex one axis through the canonical element identification.

    Elements are matched by their dual-vector lifts (the underlying quotient
    sets agree); this is how a vector over the group of a rescaled lattice is
    viewed as a dual-axis vector over the original group.
    """
    old = vec.axes[axis_index].group
    mapping = {x: new_group.from_dual(old.dual_vector(x)) for x in old.elements()}
    new_axes = vec.axes[:axis_index] + (Axis(new_group, new_dual),) \
        + vec.axes[axis_index + 1:]
    out = {}
    for key, val in vec.coeffs.items():
        new_key = key[:axis_index] + (mapping[key[axis_index]],) + key[axis_index + 1:]
        out[new_key] = out.get(new_key, 0j) + val
    return RepVector(new_axes, out)
