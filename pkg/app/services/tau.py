"""
Service τ : automorphisme de diagramme de H_c et lieu fixe Z_c^τ.
La quadrique est dérivée des relations, jamais recopiée.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction

from app.config import settings
from app.core.cherednik import HElement, get_algebra
from app.core.dihedral import (
    TAU_MONOMIAL_MAP,
    GroupElement,
    apply_monomial_map,
    longest_element,
    tau_conjugate,
    tau_fixed_subgroup,
    tau_matrix,
)
from app.core.multipoly import MultiPoly
from app.core.scalar import Cyclotomic, Rational, format_rational
from app.services.cuspidal import Relation, VarietyPoint, cm_polynomial, evaluate_point, relation_system
from app.services.verifier import CheckReport, require_d, verifier

logger = logging.getLogger(__name__)

FIXED_VARIABLES = ("q", "Q", "e")
PRINTED_FORM = "e^2 - q*Q - d^2*a^2"


def tau_act(h: HElement) -> HElement:
    """
    τ(f · w · F) = τ(f) · τwτ^{-1} · τ(F).

    x ↦ √ζ^{-1} y, y ↦ √ζ x, X ↦ √ζ Y, Y ↦ √ζ^{-1} X ; t et a sont fixés.
    """
    terms: dict = {}
    for (w, exps), coeff in h.terms.items():
        new_exps, shift = apply_monomial_map(TAU_MONOMIAL_MAP, exps)
        key = (tau_conjugate(w), new_exps)
        value = coeff.times_root(shift)
        terms[key] = terms[key] + value if key in terms else value
    return HElement(h.session, {k: c for k, c in terms.items() if not c.is_zero()})


def lie_poisson(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Crochet de Lie-Poisson de sl₂ sur C[q, Q, e] : {q,Q} = e, {e,q} = -2q, {e,Q} = 2Q."""
    q = MultiPoly.generator(FIXED_VARIABLES, 0)
    big_q = MultiPoly.generator(FIXED_VARIABLES, 1)
    e = MultiPoly.generator(FIXED_VARIABLES, 2)
    table = {(0, 1): e, (2, 0): q * -2, (2, 1): big_q * 2}
    result = MultiPoly.constant(FIXED_VARIABLES, 0)
    for (i, j), value in table.items():
        result = result + (f.derivative(i) * g.derivative(j) - f.derivative(j) * g.derivative(i)) * value
    return result


def restrict_to_fixed_plane(poly: MultiPoly) -> MultiPoly:
    """a_i = 0, puis projection sur les coordonnées (q, Q, e)."""
    nvars = len(poly.variables)
    reduced = poly.substitute({k: 0 for k in range(3, nvars)})
    out = MultiPoly.constant(FIXED_VARIABLES, 0)
    for exps, coeff in reduced.terms.items():
        out = out + MultiPoly(FIXED_VARIABLES, {exps[:3]: coeff})
    return out


@dataclass
class FixedLocusResult:
    """Analyse de Z_c^τ : système résiduel, quadrique dérivée, strates et échantillons."""

    d: int
    a_value: Fraction
    residual: list[Relation]
    derived_quadric: MultiPoly
    strata: list[str]
    samples: list[VarietyPoint]
    report: CheckReport
    discrepancy: bool = False

    def to_dict(self, max_terms: int | None = None) -> dict:
        """Convertit en dictionnaire."""
        return {
            "d": self.d,
            "a": format_rational(self.a_value),
            "residual": [r.to_dict() for r in self.residual],
            "derived_quadric": self.derived_quadric.render(),
            "printed_form": PRINTED_FORM,
            "discrepancy": self.discrepancy,
            "strata": list(self.strata),
            "samples": [p.to_dict() for p in self.samples],
            "report": self.report.to_dict(max_terms),
        }


class TauAnalyzer:
    """Action de τ et lieu fixe."""

    def verify_tau_action(self, d: int, samples: int = 4) -> CheckReport:
        """τ fixe q, Q, eu, change a_i en -a_i, est involutif et multiplicatif."""
        require_d(d, 2)
        algebra = get_algebra(d, 1)
        report = CheckReport("tau_action", d)
        for name, element in (("q", algebra.q()), ("Q", algebra.Q()), ("eu", algebra.euler())):
            report.compare(f"tau({name})", tau_act(element), element)
        for j in range(d + 1):
            a_j = algebra.central_a(j)
            report.compare(f"tau(a{j})", tau_act(a_j), a_j * -1)
        for name, generator in algebra.generators():
            report.compare(f"tau^2({name})", tau_act(tau_act(generator)), generator)

        rng = random.Random(settings.RANDOM_SEED + d)
        for k in range(samples):
            u = verifier.random_element(algebra, rng)
            v = verifier.random_element(algebra, rng)
            report.compare(f"tau(uv)#{k}", tau_act(u * v), tau_act(u) * tau_act(v))
            report.compare(f"tau^2#{k}", tau_act(tau_act(u)), u)

        fixed = tau_fixed_subgroup(d)
        w0 = longest_element(d)
        report.expect(
            "fixed subgroup = {1, w0}",
            {g.sort_key() for g in fixed} == {GroupElement.identity(d).sort_key(), w0.sort_key()},
            ", ".join(g.render() for g in fixed),
        )
        ((m00, m01), (m10, m11)) = tau_matrix(d)
        one = Cyclotomic.one(2 * d)
        shifted = ((m00 - one, m01), (m10, m11 - one))
        det = shifted[0][0] * shifted[1][1] - shifted[0][1] * shifted[1][0]
        report.expect("dim V^tau = 1", det.is_zero() and not shifted[0][1].is_zero())

        for relation in relation_system(d, cm_polynomial(d, 1)):
            image = relation.poly.scale_variables([1, 1, 1] + [-1] * (d + 1))
            sign = -1 if relation.name.count(",") == 0 else 1
            report.compare(f"tau({relation.name}) = {'-' if sign < 0 else '+'}itself", image, relation.poly * sign)
        return report.finish()

    def fixed_locus_analysis(self, d: int, a_value: Rational = 1) -> FixedLocusResult:
        """
        Substitue a_i = 0 dans les relations de Z_c et dérive le lieu fixe.

        La quadrique provient des relations (Z_{1,1}) et (Z_{d-1,d-1}) divisées par q^{d-2}
        et Q^{d-2} ; la strate q = Q = 0 provient de (Z_{1,d-1}).
        """
        require_d(d, 3)
        a_value = Fraction(a_value)
        if a_value == 0:
            raise ValueError("fixed locus analysis needs a nonzero parameter")
        report = CheckReport("tau_fixed_locus", d)
        system = relation_system(d, cm_polynomial(d, a_value))
        by_name = {relation.name: relation for relation in system}
        zero = MultiPoly.constant(FIXED_VARIABLES, 0)

        residual = []
        for relation in system:
            restricted = restrict_to_fixed_plane(relation.poly)
            if relation.name.count(",") == 0:
                report.compare(f"{relation.name}|a=0", restricted, zero)
            else:
                residual.append(Relation(relation.name, restricted))

        def quotient(name: str) -> MultiPoly:
            poly = restrict_to_fixed_plane(by_name[name].poly)
            poly = poly.divide_monomial(poly.monomial_gcd())
            leading = poly.coefficient((0, 0, 2))
            return poly * (1 / leading) if leading else poly

        q = MultiPoly.generator(FIXED_VARIABLES, 0)
        big_q = MultiPoly.generator(FIXED_VARIABLES, 1)
        e = MultiPoly.generator(FIXED_VARIABLES, 2)
        derived = quotient("Z_1,1")
        report.compare("Z_1,1 and Z_d-1,d-1 agree", derived, quotient(f"Z_{d - 1},{d - 1}"))
        report.compare("derived quadric", derived, e * e - q * big_q * 4 - d * d * a_value**2)

        printed = e * e - q * big_q - d * d * a_value**2
        discrepancy = derived != printed
        if discrepancy:
            message = f"derived quadric {derived.render()} differs from the printed form {PRINTED_FORM}"
            report.note(message)
            logger.warning(f"{message} (d={d})")

        candidates = [Fraction(0), d * a_value, -d * a_value]
        for value in candidates:
            point = VarietyPoint.on_fixed_plane(d, 0, 0, value, a_value)
            report.expect(
                f"(0,0,{format_rational(value)}) in Z_c^tau",
                not any(evaluate_point(point, system)),
            )
        off = d * abs(a_value) + 1
        control = VarietyPoint.on_fixed_plane(d, 0, 0, off, a_value)
        report.expect("q=Q=0 stratum is finite", any(evaluate_point(control, system)))
        edge = restrict_to_fixed_plane(by_name[f"Z_1,{d - 1}"].poly).substitute({0: 0, 1: 0})
        report.compare("q=Q=0 equation", edge, (e * e - d * d * a_value**2) * e ** (d - 2) * -1)

        rng = random.Random(settings.RANDOM_SEED + d)
        drawn: dict[tuple[Fraction, ...], VarietyPoint] = {}
        while len(drawn) < settings.QUADRIC_SAMPLES:
            q_value = Fraction(rng.choice([k for k in range(-9, 10) if k]))
            e_value = Fraction(rng.randint(-12, 12), rng.randint(1, 3))
            q_upper = (e_value**2 - d * d * a_value**2) / (4 * q_value)
            point = VarietyPoint.on_fixed_plane(d, q_value, q_upper, e_value, a_value)
            drawn.setdefault(point.coords, point)
        samples = list(drawn.values())
        for k, point in enumerate(samples):
            report.expect(f"sample #{k} on Z_c", not any(evaluate_point(point, system)))
        printed_point = VarietyPoint.on_fixed_plane(d, 1, off**2 - d * d * a_value**2, off, a_value)
        if discrepancy:
            report.expect("printed form is not contained in Z_c", any(evaluate_point(printed_point, system)))

        strata = [
            "origin (0,0,0)",
            f"(0,0,{format_rational(d * a_value)})",
            f"(0,0,{format_rational(-d * a_value)})",
            f"quadric {derived.render()} = 0",
        ]
        report.note(f"parameter statement of the Poisson isomorphism: da = {format_rational(d * a_value)}")
        logger.info(f"Fixed locus analysed (d={d}, {len(samples)} quadric samples)")
        return FixedLocusResult(d, a_value, residual, derived, strata, samples, report.finish(), discrepancy)

    def fixed_quadric_poisson_check(self, d: int, a_value: Rational = 1, mutate: bool = False) -> CheckReport:
        """Le crochet de la quadrique avec q, Q et e s'annule ; recoupé par le moteur pour eu² - 4qQ."""
        require_d(d, 2)
        a_value = Fraction(a_value)
        if a_value == 0:
            raise ValueError("fixed quadric check needs a nonzero parameter")
        report = CheckReport("tau_quadric_poisson", d)
        q = MultiPoly.generator(FIXED_VARIABLES, 0)
        big_q = MultiPoly.generator(FIXED_VARIABLES, 1)
        e = MultiPoly.generator(FIXED_VARIABLES, 2)
        quadric = e**3 - q if mutate else e * e - q * big_q * 4 - d * d * a_value**2
        zero = MultiPoly.constant(FIXED_VARIABLES, 0)
        for name, generator in (("q", q), ("Q", big_q), ("e", e)):
            report.compare(f"{{F,{name}}}", lie_poisson(quadric, generator), zero)

        algebra = get_algebra(d, 1)
        eu, q_elem, big_q_elem = algebra.euler(), algebra.q(), algebra.Q()
        casimir = eu * eu - q_elem * big_q_elem * 4
        for name, element in (("q", q_elem), ("Q", big_q_elem), ("eu", eu)):
            bracket = algebra.poisson(casimir, element)
            report.compare(f"{{eu^2-4qQ,{name}}} in H_c", bracket, HElement.zero(bracket.session))
        return report.finish()

    def verify_tau_suite(self, d: int, a_value: Rational = 1) -> list[CheckReport]:
        require_d(d, 3)
        locus = self.fixed_locus_analysis(d, a_value)
        return [
            self.verify_tau_action(d),
            locus.report,
            self.fixed_quadric_poisson_check(d, a_value),
        ]


# Instance singleton
tau_analyzer = TauAnalyzer()
