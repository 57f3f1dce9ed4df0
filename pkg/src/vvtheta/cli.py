"""Command-line front end: JSON I/O, subcommands, scenario runner.

Rationals serialize as "p/q" strings and complex numbers as [re, im]; all
emitted JSON is canonical (sorted keys, fixed separators) so identical
inputs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction

import numpy as np

from .contraction import (
    QExpansionForm,
    ContractionResult,
    contract_pointwise,
    contract_symbolic,
    expected_weights,
    naive_truncated_lift,
    restriction_residual,
)
from .discforms import check_isotropic, discriminant_group, gauss_sum_check, two_pi_e
from .errors import ParseError, UnknownCheck, VvthetaError
from .grassmann import (
    HomogeneousPolynomial,
    constant_poly,
    direct_sum_grassmann,
    lift_product,
    make_grassmann_point,
)
from .lattice import construct_lattice, orthogonal_complement, sublattice
from .theta import (
    ThetaValue,
    mixed_theta_composed,
    mixed_theta_direct,
    mixed_theta_family,
    modularity_defect,
    pairing_expression_residuals,
    seesaw_pairing_residual,
    seesaw_split_residual,
    siegel_theta,
    siegel_theta_family,
    split_data,
    theta_negation_residual,
    theta_value_difference,
)
from .weil import (
    MP_S,
    MP_T,
    Axis,
    MetaplecticElement,
    RepVector,
    down_arrow,
    mp_power,
    rho_apply,
    rho_generator,
    rho_matrix,
    up_arrow,
)

# ---------------------------------------------------------------------------
# JSON primitives


def frac_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def parse_frac(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, float):
        return Fraction(s)
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {s!r}") from exc


def complex_pair(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _encode_key(key) -> str:
    return ";".join(",".join(str(c) for c in elt) for elt in key)


def _decode_key(s: str) -> tuple:
    if s == "":
        return ((),)
    parts = s.split(";")
    return tuple(tuple(int(c) for c in p.split(",")) if p else () for p in parts)


def theta_to_json(theta: ThetaValue) -> dict:
    coeffs = {_encode_key(k): complex_pair(v) for k, v in theta.value.coeffs.items()}
    return {
        "type": "theta",
        "tau": complex_pair(theta.tau),
        "bound": theta.bound,
        "tail": theta.tail_estimate,
        "prefactor_exponent": frac_str(theta.prefactor_exponent),
        "coefficients": coeffs,
    }


def qexpansion_to_json(form: QExpansionForm) -> dict:
    terms = []
    for (coset, expo), coeff in sorted(form.terms.items()):
        terms.append({"coset": list(coset), "exp": frac_str(expo),
                      "coef": complex_pair(coeff)})
    return {
        "type": "qexpansion",
        "gram": [list(r) for r in form.lattice.gram],
        "weight": frac_str(form.weight),
        "terms": terms,
    }


def emit_expansion(obj, path) -> None:
    """Write a ThetaValue / ContractionResult / QExpansionForm canonically."""
    if isinstance(obj, ThetaValue):
        payload = theta_to_json(obj)
    elif isinstance(obj, ContractionResult):
        payload = qexpansion_to_json(obj.form)
    elif isinstance(obj, QExpansionForm):
        payload = qexpansion_to_json(obj)
    else:
        payload = obj
    with open(path, "w") as fh:
        fh.write(canonical_dumps(payload))


def load_expansion(path):
    with open(path) as fh:
        data = json.load(fh)
    if data.get("type") == "qexpansion":
        return qexpansion_from_json(data)
    return data


def qexpansion_from_json(data) -> QExpansionForm:
    lat = construct_lattice(data["gram"])
    terms = {}
    for t in data["terms"]:
        key = (tuple(int(c) for c in t["coset"]), parse_frac(t["exp"]))
        terms[key] = complex(t["coef"][0], t["coef"][1])
    return QExpansionForm(lat, parse_frac(data["weight"]), terms)


# ---------------------------------------------------------------------------
# object loading

def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def lattice_from_json(data, name=None):
    return construct_lattice(data["gram"], name=data.get("name", name))


def poly_from_json(data, nvars_plus: int, nvars_minus: int) -> HomogeneousPolynomial:
    monomials = {}
    for key, coeff in data["monomials"].items():
        expo = tuple(int(c) for c in key.split(",")) if key else ()
        monomials[expo] = complex(coeff[0], coeff[1])
    return HomogeneousPolynomial(tuple(data["degrees"]), nvars_plus, nvars_minus,
                                 monomials)


def span_from_json(rows) -> list:
    return [[parse_frac(x) for x in row] for row in rows]


def parse_tau(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError(f"tau must be 'x,y', got {text!r}")
    return complex(float(parts[0]), float(parts[1]))


def parse_element(text: str) -> MetaplecticElement:
    parts = [int(p) for p in text.split(",")]
    if len(parts) == 4:
        parts.append(1)
    if len(parts) != 5:
        raise ParseError("element must be 'a,b,c,d[,branch]'")
    return MetaplecticElement(*parts[:4], branch=parts[4])


def parse_vector(text: str) -> list:
    return [parse_frac(x) for x in text.split(",")]


# ---------------------------------------------------------------------------
# scenario runner

class Scenario:
    """Resolved objects of a scenario JSON file."""

    def __init__(self, data: dict):
        self.name = data.get("name", "scenario")
        self.data = data
        self.lattices = {}
        for lname, spec in data.get("lattices", {}).items():
            self.lattices[lname] = construct_lattice(spec["gram"], name=lname)
        self.bound = float(data.get("bound", 10.0))
        self.tolerance = float(data.get("tolerance", 1e-8))
        self.tau_samples = [complex(x, y) for x, y in
                            data.get("tau_samples", [[0.2, 1.1], [-0.37, 0.9]])]
        self.checks = data.get("checks", [])
        sub = data.get("sublattice")
        self.m_sub = None
        self.ambient = None
        if sub:
            if sub["ambient"] not in self.lattices:
                raise ParseError(f"unknown lattice name {sub['ambient']!r}")
            self.ambient = self.lattices[sub["ambient"]]
            self.m_sub = sublattice(self.ambient, sub["basis"])
        self._setup_split()
        alpha = data.get("alpha")
        beta = data.get("beta")
        self.alpha = [parse_frac(x) for x in alpha] if alpha else None
        self.beta = [parse_frac(x) for x in beta] if beta else None
        self.form = None
        if "form" in data:
            fdata = data["form"]
            if isinstance(fdata.get("lattice"), str):
                if fdata["lattice"] not in self.lattices:
                    raise ParseError(f"unknown lattice name {fdata['lattice']!r}")
                lat = self.lattices[fdata["lattice"]]
            else:
                lat = self.ambient
            terms = {}
            for t in fdata["terms"]:
                terms[(tuple(t["coset"]), parse_frac(t["exp"]))] = \
                    complex(t["coef"][0], t["coef"][1])
            self.form = QExpansionForm(lat, parse_frac(fdata["weight"]), terms)

    def _setup_split(self):
        self.u = self.u_perp = self.p_u = self.p_uperp = self.sd = None
        if self.m_sub is None:
            return
        self.sd = split_data(self.ambient, self.m_sub)
        mlat = self.m_sub.lattice
        plat = self.sd.mperp_sub.lattice
        gspec = self.data.get("grassmann", {})
        u_span = span_from_json(gspec.get("u_span_plus", [])) or \
            [[Fraction(int(i == j)) for j in range(mlat.rank)]
             for i in range(mlat.sig_plus)]
        up_span = span_from_json(gspec.get("u_perp_span_plus", [])) or \
            [[Fraction(int(i == j)) for j in range(plat.rank)]
             for i in range(plat.sig_plus)]
        self.u = make_grassmann_point(mlat, u_span)
        self.u_perp = make_grassmann_point(plat, up_span)
        polys = self.data.get("polys", {})
        self.p_u = poly_from_json(polys["p_u"], mlat.sig_plus, mlat.sig_minus) \
            if "p_u" in polys else constant_poly(mlat.sig_plus, mlat.sig_minus)
        self.p_uperp = poly_from_json(polys["p_uperp"], plat.sig_plus, plat.sig_minus) \
            if "p_uperp" in polys else constant_poly(plat.sig_plus, plat.sig_minus)


def _check_weil_relations(sc: Scenario) -> float:
    worst = 0.0
    for lat in sc.lattices.values():
        group = discriminant_group(lat)
        n = group.order
        t = rho_generator(group, "T")
        s = rho_generator(group, "S")
        z = rho_generator(group, "Z")
        eye = np.eye(n)
        worst = max(worst, float(np.abs(s @ s - z).max()))
        worst = max(worst, float(np.abs(np.linalg.matrix_power(s @ t, 3) - z).max()))
        worst = max(worst, float(np.abs(np.linalg.matrix_power(z, 4) - eye).max()))
        worst = max(worst, float(np.abs(s.conj().T @ s - eye).max()))
    return worst


def _check_gauss_sum(sc: Scenario) -> float:
    worst = 0.0
    for lat in sc.lattices.values():
        group = discriminant_group(lat)
        total = sum(two_pi_e(group.q(x)) for x in group.elements())
        expected = math.sqrt(group.order) * two_pi_e(Fraction(lat.sig_plus - lat.sig_minus, 8))
        worst = max(worst, abs(total - expected))
    return worst


def _check_arrows(sc: Scenario) -> float:
    gm = sc.sd.gm
    worst = 0.0
    rng = random.Random(5)
    words = [MP_T, MP_S]
    for _ in range(5):
        g = MP_T
        for _step in range(4):
            g = g * rng.choice([MP_T, MP_S, mp_power(MP_T, -1)])
        words.append(g)
    small_axis = (Axis(gm.small_disc),)
    for key in gm.small_disc.elements():
        vec = RepVector.basis_vector(small_axis, (key,))
        dn = down_arrow(gm, vec)
        upv = up_arrow(gm, dn)
        dn_up = down_arrow(gm, upv)
        worst = max(worst, (dn_up - dn.scale(gm.glue_order)).norm_inf())
        for g in words:
            lhs = rho_apply(g, down_arrow(gm, vec))
            rhs = down_arrow(gm, rho_apply(g, vec))
            worst = max(worst, (lhs - rhs).norm_inf())
    return worst


def _v_and_poly(sc: Scenario):
    v = direct_sum_grassmann(sc.sd.m_sub, sc.sd.mperp_sub, sc.u, sc.u_perp)
    return v, lift_product(sc.p_u, sc.p_uperp)


def _check_theta_modularity(sc: Scenario, g) -> float:
    v, p_v = _v_and_poly(sc)
    fam = siegel_theta_family(sc.ambient, v, p_v)
    k = sc.ambient.sig_plus - sc.ambient.sig_minus \
        + 2 * p_v.degrees[0] - 2 * p_v.degrees[1]
    worst = 0.0
    for tau in sc.tau_samples:
        worst = max(worst, modularity_defect(fam, g, tau, k, sc.alpha, sc.beta,
                                             sc.bound))
    return worst


def _check_mixed_modularity(sc: Scenario, g) -> float:
    fam = mixed_theta_family(sc.ambient, sc.m_sub, sc.u_perp, sc.p_uperp)
    plat = sc.sd.mperp_sub.lattice
    k = plat.sig_plus - plat.sig_minus \
        + 2 * sc.p_uperp.degrees[0] - 2 * sc.p_uperp.degrees[1]
    worst = 0.0
    for tau in sc.tau_samples:
        worst = max(worst, modularity_defect(fam, g, tau, k, None, None, sc.bound))
    return worst


def _check_mixed_cross(sc: Scenario) -> float:
    worst = 0.0
    for tau in sc.tau_samples:
        d1 = mixed_theta_direct(sc.ambient, sc.m_sub, tau, sc.u_perp, sc.p_uperp,
                                None, sc.bound)
        d2 = mixed_theta_composed(sc.ambient, sc.m_sub, tau, sc.u_perp, sc.p_uperp,
                                  None, sc.bound)
        worst = max(worst, theta_value_difference(d1, d2))
    return worst


def _check_seesaw_split(sc: Scenario) -> float:
    return max(seesaw_split_residual(sc.ambient, sc.m_sub, sc.u, sc.u_perp,
                                     sc.p_u, sc.p_uperp, tau,
                                     (sc.alpha, sc.beta) if sc.alpha else None,
                                     sc.bound)
               for tau in sc.tau_samples)


def _check_seesaw_pairing(sc: Scenario) -> float:
    return max(seesaw_pairing_residual(sc.ambient, sc.m_sub, sc.u, sc.u_perp,
                                       sc.p_u, sc.p_uperp, tau,
                                       (sc.alpha, sc.beta) if sc.alpha else None,
                                       sc.bound)
               for tau in sc.tau_samples)


def _check_pairing_expressions(sc: Scenario) -> float:
    rng = random.Random(23)
    dl = sc.sd.d_l
    test = RepVector((Axis(dl, dual=True),),
                     {(e,): complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                      for e in dl.elements()})
    worst = 0.0
    for tau in sc.tau_samples:
        r1, r2 = pairing_expression_residuals(
            sc.ambient, sc.m_sub, sc.u, sc.u_perp, sc.p_u, sc.p_uperp, tau, test,
            (sc.alpha, sc.beta) if sc.alpha else None, sc.bound)
        worst = max(worst, r1, r2)
    return worst


def _check_negation(sc: Scenario) -> float:
    v, p_v = _v_and_poly(sc)
    return max(theta_negation_residual(sc.ambient, tau, v, p_v,
                                       (sc.alpha, sc.beta) if sc.alpha else None,
                                       sc.bound)
               for tau in sc.tau_samples)


def _check_contraction(sc: Scenario) -> float:
    if sc.form is None:
        raise ParseError("contraction check needs a 'form' entry")
    result = contract_symbolic(sc.form, sc.ambient, sc.m_sub, sc.p_uperp, sc.bound)
    worst = 0.0
    for tau in sc.tau_samples:
        pw = contract_pointwise(sc.form, sc.ambient, sc.m_sub, sc.u_perp,
                                sc.p_uperp, tau, sc.bound)
        worst = max(worst, (result.form.evaluate(tau) - pw).norm_inf())
    return worst


def _check_restriction(sc: Scenario) -> float:
    if sc.form is None:
        raise ParseError("restriction check needs a 'form' entry")
    return restriction_residual(sc.form, sc.ambient, sc.m_sub, sc.u, sc.u_perp,
                                sc.p_u, sc.p_uperp, sc.tau_samples, sc.bound)


def _check_weights(sc: Scenario) -> float:
    plat = sc.sd.mperp_sub.lattice
    mlat = sc.m_sub.lattice
    degrees_big = (sc.p_u.degrees[0] + sc.p_uperp.degrees[0],
                   sc.p_u.degrees[1] + sc.p_uperp.degrees[1])
    info = expected_weights(
        Fraction(sc.ambient.sig_minus - sc.ambient.sig_plus, 2)
        + degrees_big[1] - degrees_big[0],
        sc.ambient.signature, mlat.signature, degrees_big, sc.p_u.degrees)
    del plat
    return 0.0 if info["consistent"] and info["paired"] == info["contraction"] else 1.0


CHECKS = {
    "weil_relations": _check_weil_relations,
    "gauss_sum": _check_gauss_sum,
    "arrow_suite": _check_arrows,
    "theta_modularity_T": lambda sc: _check_theta_modularity(sc, MP_T),
    "theta_modularity_S": lambda sc: _check_theta_modularity(sc, MP_S),
    "mixed_modularity_T": lambda sc: _check_mixed_modularity(sc, MP_T),
    "mixed_modularity_S": lambda sc: _check_mixed_modularity(sc, MP_S),
    "mixed_cross": _check_mixed_cross,
    "seesaw_split": _check_seesaw_split,
    "seesaw_pairing": _check_seesaw_pairing,
    "pairing_expressions": _check_pairing_expressions,
    "negation_symmetry": _check_negation,
    "contraction_consistency": _check_contraction,
    "restriction_integrand": _check_restriction,
    "weight_bookkeeping": _check_weights,
}


def run_scenario(path) -> dict:
    """Execute all checks of a scenario file; report residuals and verdicts."""
    data = load_json(path)
    sc = Scenario(data)
    results = {}
    for check in sorted(set(sc.checks)):
        fn = CHECKS.get(check)
        if fn is None:
            raise UnknownCheck(f"unknown check {check!r} (choose from "
                               f"{sorted(CHECKS)})")
        residual = float(fn(sc))
        results[check] = {
            "residual": residual,
            "tolerance": sc.tolerance,
            "pass": residual <= sc.tolerance,
        }
    return {
        "scenario": sc.name,
        "results": results,
        "pass": all(r["pass"] for r in results.values()),
    }


# ---------------------------------------------------------------------------
# subcommands

def _cmd_disc_info(args) -> int:
    lat = lattice_from_json(load_json(args.lattice))
    group = discriminant_group(lat)
    if args.json:
        payload = {
            "elementary_divisors": list(group.elementary_divisors),
            "q_table": {",".join(str(c) for c in x): frac_str(group.q(x))
                        for x in group.elements()},
        }
        sys.stdout.write(canonical_dumps(payload))
        return 0
    print(f"lattice rank {lat.rank}, signature {lat.signature}")
    print(f"elementary divisors: {list(group.elementary_divisors)}")
    print(f"|D| = {group.order}")
    gauss_sum_check(group, lat.sig_plus, lat.sig_minus)
    print("gauss sum check: ok")
    elements = group.elements()
    for x in elements:
        print(f"  q{x} = {frac_str(group.q(x))}")
    isotropic = [x for x in elements if group.q(x) == 0 and x != group.zero()]
    shown = 0
    for x in isotropic:
        if shown >= args.max_subgroups:
            break
        sub = check_isotropic(group, [x])
        print(f"  isotropic <{x}> of order {sub.order}")
        shown += 1
    return 0


def _cmd_weil_matrix(args) -> int:
    lat = lattice_from_json(load_json(args.lattice))
    group = discriminant_group(lat)
    g = parse_element(args.element)
    mat = rho_matrix(group, g, dual=args.dual)
    # rows/columns follow the lexicographic element order of the group
    payload = [[complex_pair(mat[i, j]) for j in range(mat.shape[1])]
               for i in range(mat.shape[0])]
    sys.stdout.write(canonical_dumps(payload))
    return 0


def _grassmann_for(args, lat):
    spec = load_json(args.grassmann) if args.grassmann else {"span_plus": []}
    span = span_from_json(spec["span_plus"])
    if not span and lat.sig_plus:
        span = [[Fraction(int(i == j)) for j in range(lat.rank)]
                for i in range(lat.sig_plus)]
    return make_grassmann_point(lat, span)


def _poly_for(args, point):
    if args.poly:
        return poly_from_json(load_json(args.poly), point.dim_plus, point.dim_minus)
    return constant_poly(point.dim_plus, point.dim_minus)


def _cmd_theta(args) -> int:
    lat = lattice_from_json(load_json(args.lattice))
    point = _grassmann_for(args, lat)
    poly = _poly_for(args, point)
    pair_vec = None
    if args.alpha or args.beta:
        alpha = parse_vector(args.alpha) if args.alpha else [Fraction(0)] * lat.rank
        beta = parse_vector(args.beta) if args.beta else [Fraction(0)] * lat.rank
        pair_vec = (alpha, beta)
    theta = siegel_theta(lat, parse_tau(args.tau), point, poly, pair_vec, args.bound)
    payload = theta_to_json(theta)
    if args.out:
        emit_expansion(theta, args.out)
    else:
        sys.stdout.write(canonical_dumps(payload))
    return 0


def _cmd_theta_lm(args) -> int:
    lat = lattice_from_json(load_json(args.lattice))
    sub_spec = load_json(args.sublattice)
    m_sub = sublattice(lat, sub_spec["basis"])
    mperp = orthogonal_complement(lat, m_sub)
    point = _grassmann_for(args, mperp.lattice)
    poly = _poly_for(args, point)
    pair_vec = None
    if args.xi or args.eta:
        xi = parse_vector(args.xi) if args.xi else [Fraction(0)] * lat.rank
        eta = parse_vector(args.eta) if args.eta else [Fraction(0)] * lat.rank
        pair_vec = (xi, eta)
    fn = mixed_theta_composed if args.composed else mixed_theta_direct
    theta = fn(lat, m_sub, parse_tau(args.tau), point, poly, pair_vec, args.bound)
    if args.out:
        emit_expansion(theta, args.out)
    else:
        sys.stdout.write(canonical_dumps(theta_to_json(theta)))
    return 0


def _cmd_contract(args) -> int:
    lat = lattice_from_json(load_json(args.lattice))
    sub_spec = load_json(args.sublattice)
    m_sub = sublattice(lat, sub_spec["basis"])
    mperp = orthogonal_complement(lat, m_sub)
    form = qexpansion_from_json(load_json(args.form))
    poly = constant_poly(mperp.lattice.sig_plus, mperp.lattice.sig_minus) \
        if not args.poly else poly_from_json(load_json(args.poly),
                                             mperp.lattice.sig_plus,
                                             mperp.lattice.sig_minus)
    result = contract_symbolic(form, lat, m_sub, poly, args.bound)
    if args.out:
        emit_expansion(result, args.out)
    else:
        sys.stdout.write(canonical_dumps(qexpansion_to_json(result.form)))
    return 0


def _scenario_subset(args, wanted) -> int:
    data = load_json(args.scenario)
    data["checks"] = [c for c in wanted if c in CHECKS]
    if args.bound is not None:
        data["bound"] = args.bound
    if args.tolerance is not None:
        data["tolerance"] = args.tolerance
    if args.tau_samples:
        data["tau_samples"] = [[float(p) for p in s.split(",")]
                               for s in args.tau_samples]
    tmp_results = {}
    sc = Scenario(data)
    for check in data["checks"]:
        residual = float(CHECKS[check](sc))
        tmp_results[check] = {"residual": residual, "tolerance": sc.tolerance,
                              "pass": residual <= sc.tolerance}
    report = {"scenario": sc.name, "results": tmp_results,
              "pass": all(r["pass"] for r in tmp_results.values())}
    sys.stdout.write(canonical_dumps(report))
    return 0 if report["pass"] else 1


def _cmd_verify_seesaw(args) -> int:
    return _scenario_subset(args, ["seesaw_split", "seesaw_pairing",
                                   "pairing_expressions", "mixed_cross"])


def _cmd_verify_restriction(args) -> int:
    return _scenario_subset(args, ["restriction_integrand",
                                   "contraction_consistency"])


def _cmd_naive_lift(args) -> int:
    lat = lattice_from_json(load_json(args.lattice))
    point = _grassmann_for(args, lat)
    poly = _poly_for(args, point)
    form = qexpansion_from_json(load_json(args.form))
    value, err = naive_truncated_lift(form, lat, point, poly, args.ymax,
                                      args.grid, args.bound)
    sys.stdout.write(canonical_dumps({"value": complex_pair(value),
                                      "error_estimate": err}))
    return 0


def _cmd_run_scenario(args) -> int:
    report = run_scenario(args.scenario)
    sys.stdout.write(canonical_dumps(report))
    return 0 if report["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vvtheta",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("disc-info", help="discriminant form of a lattice")
    p.add_argument("--lattice", required=True)
    p.add_argument("--max-subgroups", type=int, default=16)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_disc_info)

    p = sub.add_parser("weil-matrix", help="representation matrix of an element")
    p.add_argument("--lattice", required=True)
    p.add_argument("--element", required=True, help="'a,b,c,d[,branch]'")
    p.add_argument("--dual", action="store_true")
    p.set_defaults(fn=_cmd_weil_matrix)

    p = sub.add_parser("theta", help="Siegel theta vector at tau")
    p.add_argument("--lattice", required=True)
    p.add_argument("--grassmann")
    p.add_argument("--poly")
    p.add_argument("--tau", required=True, help="'x,y'")
    p.add_argument("--bound", type=float, default=10.0)
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_theta)

    p = sub.add_parser("theta-lm", help="mixed theta vector at tau")
    p.add_argument("--lattice", required=True)
    p.add_argument("--sublattice", required=True)
    p.add_argument("--grassmann")
    p.add_argument("--poly")
    p.add_argument("--tau", required=True)
    p.add_argument("--bound", type=float, default=10.0)
    p.add_argument("--xi")
    p.add_argument("--eta")
    p.add_argument("--composed", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_theta_lm)

    p = sub.add_parser("contract", help="symbolic theta contraction")
    p.add_argument("--lattice", required=True)
    p.add_argument("--sublattice", required=True)
    p.add_argument("--form", required=True)
    p.add_argument("--poly")
    p.add_argument("--bound", type=float, default=10.0)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_contract)

    for name, fn in [("verify-seesaw", _cmd_verify_seesaw),
                     ("verify-restriction", _cmd_verify_restriction)]:
        p = sub.add_parser(name, help=f"{name} checks from a scenario file")
        p.add_argument("--scenario", required=True)
        p.add_argument("--bound", type=float)
        p.add_argument("--tolerance", type=float)
        p.add_argument("--tau-samples", nargs="*")
        p.set_defaults(fn=fn)

    p = sub.add_parser("naive-lift", help="naive quadrature of the lift integrand")
    p.add_argument("--lattice", required=True)
    p.add_argument("--grassmann")
    p.add_argument("--poly")
    p.add_argument("--form", required=True)
    p.add_argument("--ymax", type=float, default=4.0)
    p.add_argument("--grid", type=int, default=16)
    p.add_argument("--bound", type=float, default=10.0)
    p.set_defaults(fn=_cmd_naive_lift)

    p = sub.add_parser("run-scenario", help="run every check in a scenario file")
    p.add_argument("scenario")
    p.set_defaults(fn=_cmd_run_scenario)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except VvthetaError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
