"""Fixed-point analysis of the boundary-law recursion.

Everything here runs in multiplicative coordinates: a boundary law is the
vector z of one-site weight ratios, the recursion sends a parent to the
product over its children of a Moebius-type factor, and a phase question
becomes a question about fixed points of that product map inside the disk
where the ratios are units congruent to 1 mod p.

Additive field coordinates are recovered through the logarithm only at the
edges of the module (witness-to-field reconstruction), because when p
divides q the logarithm arguments can leave their disk while the
multiplicative form stays perfectly well defined.

Verdicts name the mechanism that grounds them, and a verdict stronger than
the computation supports is never emitted: each certificate is checked, and
when a check fails the report says what was actually found instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cayley_tree import TreeShape, TreeVertex, direct_successors, sphere
from .errors import (
    DenominatorDegenerate,
    DivisionByZero,
    DomainViolation,
    NotInvertible,
    PrecisionExhausted,
)
from .padic_analytic import (
    ROOT_RESIDUAL_MARGIN,
    PadicPolynomial,
    exp_domain_min_valuation,
    exp_p,
    hensel_roots_in_disk,
    log_p,
)
from .padic_core import (
    DEFAULT_PRECISION,
    PadicNumber,
    Prime,
    Valuation,
    as_prime,
    rational_valuation,
)
from .potts_model import BoundaryField, CouplingField, PadicVector

VERDICT_UNIQUE = "unique_by_contraction"
VERDICT_MULTIPLE_TI = "multiple_translation_invariant"
VERDICT_NO_EXTRA_PERIODIC = "no_periodic_beyond_translation_invariant"
VERDICT_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ThetaValue:
    """An edge weight exp of an admissible coupling: a unit 1 + O(p)."""

    theta: PadicNumber

    def __post_init__(self):
        t = self.theta
        if not t.is_unit():
            raise DomainViolation("edge weight must be a unit")
        offset = t.distance_valuation(PadicNumber.one(t.prime, t.precision))
        if offset < exp_domain_min_valuation(t.prime):
            raise DomainViolation(
                f"edge weight must be congruent to 1 to order {exp_domain_min_valuation(t.prime)}"
            )

    @classmethod
    def from_coupling(cls, J, p, precision: int = DEFAULT_PRECISION) -> "ThetaValue":
        x = PadicNumber.from_fraction(Fraction(J), p, precision)
        return cls(exp_p(x))

    @property
    def prime(self) -> Prime:
        return self.theta.prime


class ZVector:
    """Components of a multiplicative boundary law.

    Construction does not force the components into the unit disk around 1,
    because intermediate recursion values can step outside it when p divides
    q; ``is_admissible`` / ``require_admissible`` make the membership check
    explicit where it matters.
    """

    __slots__ = ("components",)

    def __init__(self, components):
        components = tuple(components)
        if not components:
            raise ValueError("a boundary law needs at least one component")
        p = components[0].prime
        if any(c.prime != p for c in components):
            raise ValueError("mixed primes in one boundary law")
        self.components = components

    @classmethod
    def all_ones(cls, q: int, p, precision: int = DEFAULT_PRECISION) -> "ZVector":
        return cls(PadicNumber.one(p, precision) for _ in range(q - 1))

    @classmethod
    def from_first_component(
        cls, z: PadicNumber, q: int, precision: int | None = None
    ) -> "ZVector":
        rest = precision if precision is not None else z.precision
        ones = [PadicNumber.one(z.prime, rest) for _ in range(q - 2)]
        return cls([z, *ones])

    @classmethod
    def from_hprime(cls, hprime: PadicVector) -> "ZVector":
        return cls(exp_p(c) for c in hprime.components)

    @property
    def prime(self) -> Prime:
        return self.components[0].prime

    @property
    def dimension(self) -> int:
        return len(self.components)

    def offset_valuation(self) -> Valuation:
        """Valuation of the largest-norm component of z - 1."""
        one = PadicNumber.one(self.prime)
        return min(c.distance_valuation(one) for c in self.components)

    def is_admissible(self) -> bool:
        return all(c.is_unit() for c in self.components) and self.offset_valuation() >= 1

    def require_admissible(self) -> "ZVector":
        if not self.is_admissible():
            raise DomainViolation(
                f"boundary law leaves the unit disk around 1: offset {self.offset_valuation()}"
            )
        return self

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i: int) -> PadicNumber:
        return self.components[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZVector):
            return NotImplemented
        return len(self) == len(other) and all(
            a == b for a, b in zip(self.components, other.components)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"ZVector({', '.join(repr(c) for c in self.components)})"


def h_to_hprime(h: PadicVector) -> PadicVector:
    """Componentwise complement sum: output i is the sum of h_j over j != i.

    Total for every q; the two-state case has a one-component vector whose
    complement sum is empty, so the image is exactly zero.
    """
    if h.dimension == 1:
        return PadicVector([PadicNumber.zero(h.prime, h.components[0].precision)])
    out = []
    for i in range(h.dimension):
        acc = None
        for j, c in enumerate(h.components):
            if j != i:
                acc = c if acc is None else acc + c
        out.append(acc)
    return PadicVector(out)


def hprime_to_h(hprime: PadicVector, q: int) -> PadicVector:
    """Inverse of the complement-sum map; defined only for q >= 3.

    For q = 2 the complement sum is identically zero and carries no
    information, so inversion is refused rather than guessed.
    """
    if q == 2:
        raise NotInvertible("the two-state complement-sum map collapses to zero")
    if hprime.dimension != q - 1:
        raise ValueError(f"expected {q - 1} components, got {hprime.dimension}")
    # written so component k never subtracts a copy of itself (which would
    # cancel past every known digit): the self term carries the exact factor
    # (3 - q)/(q - 2), zero at q = 3
    self_factor = Fraction(3 - q, q - 2)
    out = []
    for k in range(q - 1):
        acc = hprime[k] * self_factor
        for i, c in enumerate(hprime.components):
            if i != k:
                acc = acc + c * Fraction(1, q - 2)
        out.append(acc)
    return PadicVector(out)


def _theta_number(theta) -> PadicNumber:
    return theta.theta if isinstance(theta, ThetaValue) else theta


def f_map_z(z: ZVector, theta, q: int) -> ZVector:
    """One child's multiplicative factor of the recursion.

    Component i maps to 1 + (theta - 1)(z_i - 1) / D with the shared
    denominator D = sum_j (z_j - 1) + (theta - 1) + q, an exact rewrite of
    the defining quotient that exposes the contraction structure: when q is
    a unit so is D, and the offset from 1 gains at least the valuation of
    theta - 1.
    """
    th = _theta_number(theta)
    p = th.prime
    if z.dimension != q - 1:
        raise ValueError(f"boundary law needs {q - 1} components for q={q}")
    one = PadicNumber.one(p, th.precision)
    th_offset = th - one
    offsets = [c - PadicNumber.one(p, c.precision) for c in z.components]
    denom = th_offset + PadicNumber.from_fraction(q, p, th.precision)
    for off in offsets:
        denom = denom + off
    try:
        inv = denom.inverse()
    except DivisionByZero as exc:
        raise DenominatorDegenerate("recursion denominator is exactly zero") from exc
    except PrecisionExhausted as exc:
        raise DenominatorDegenerate(
            "recursion denominator is indistinguishable from zero at working precision"
        ) from exc
    out = []
    for off in offsets:
        out.append(PadicNumber.one(p, th.precision) + th_offset * off * inv)
    return ZVector(out)


@dataclass(frozen=True)
class RecursionResult:
    """Backward recursion output: the root law and how fast levels flatten.

    ``per_level_offset[m]`` is the valuation of the largest-norm offset from
    the all-ones law over the vertices of level m (so the list is indexed
    root first and the final entry describes the boundary data itself).
    """

    root_z: ZVector
    per_level_offset: list


def recursion_backward(
    shape: TreeShape,
    boundary_z: dict,
    J: CouplingField,
    n: int,
    precision: int = DEFAULT_PRECISION,
) -> RecursionResult:
    """Propagate boundary laws from the n-th sphere down to the root.

    Each parent's law is the product over its children of the single-edge
    factor.  ``boundary_z`` maps every vertex of the n-th sphere to its
    ZVector.
    """
    if n < 1:
        raise ValueError("recursion needs at least one level")
    laws: dict[TreeVertex, ZVector] = {}
    offsets: list[Valuation] = [Valuation(None)] * (n + 1)
    level_vertices = sphere(shape, n)
    for x in level_vertices:
        law = boundary_z[x]
        laws[x] = law
    offsets[n] = min(laws[x].offset_valuation() for x in level_vertices)

    for m in range(n - 1, -1, -1):
        next_laws: dict[TreeVertex, ZVector] = {}
        for x in sphere(shape, m):
            product: ZVector | None = None
            for y in direct_successors(shape, x):
                factor = f_map_z(laws[y], J.theta_for_edge(x, y, precision), J.q)
                if product is None:
                    product = factor
                else:
                    product = ZVector(
                        a * b for a, b in zip(product.components, factor.components)
                    )
            assert product is not None
            next_laws[x] = product
        laws = next_laws
        offsets[m] = min(law.offset_valuation() for law in laws.values())
    root_law = laws[TreeVertex.root()]
    return RecursionResult(root_z=root_law, per_level_offset=offsets)


@dataclass(frozen=True)
class UniquenessCertificate:
    applies: bool
    reason: str


def uniqueness_certificate(p, q: int) -> UniquenessCertificate:
    """Whether the contraction argument guarantees a unique boundary law."""
    prime = as_prime(p)
    if q % prime.value != 0:
        return UniquenessCertificate(
            True,
            "q is a unit, so every recursion denominator is a unit and each level "
            "contracts the offset from the all-ones law by at least one digit; the "
            "only law compatible at every depth is the trivial one",
        )
    return UniquenessCertificate(
        False,
        "p divides q, so recursion denominators acquire positive valuation and the "
        "per-level contraction bound fails; uniqueness is not certified",
    )


@dataclass(frozen=True)
class PhaseReport:
    """Classification outcome with its witnesses and measured diagnostics."""

    verdict: str
    witnesses: list
    certificate: str
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "certificate": self.certificate,
            "witnesses": [_witness_json(w) for w in self.witnesses],
            "diagnostics": {k: _json_value(v) for k, v in sorted(self.diagnostics.items())},
        }


def _json_value(v):
    if isinstance(v, Valuation):
        return str(v)
    if isinstance(v, PadicNumber):
        return v.render()
    if isinstance(v, ZVector):
        return _witness_json(v)
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def _witness_json(z: ZVector) -> dict:
    one = PadicNumber.one(z.prime)
    comps = []
    for c in z.components:
        comps.append(
            {
                "offset_valuation": str(c.distance_valuation(one)),
                "digits": list(c.unit_digits[:8]),
            }
        )
    return {"components": comps}


def _witness_sort_key(z: ZVector):
    one = PadicNumber.one(z.prime)
    key = []
    for c in z.components:
        off = c.distance_valuation(one)
        key.append((off.exponent is None, off.exponent or 0, tuple(c.unit_digits[:8])))
    return key


def _residual_offset(a: ZVector, b: ZVector) -> Valuation:
    return min(x.distance_valuation(y) for x, y in zip(a.components, b.components))


def _mobius_step(z: PadicNumber, theta: PadicNumber, q: int) -> PadicNumber:
    """(theta*z + q - 1) / (z + theta + q - 2), the scalar one-child step."""
    p = theta.prime
    num = theta * z + PadicNumber.from_fraction(q - 1, p, theta.precision)
    den = z + theta + PadicNumber.from_fraction(q - 2, p, theta.precision)
    try:
        return num / den
    except (DivisionByZero, PrecisionExhausted) as exc:
        raise DenominatorDegenerate("scalar recursion step denominator degenerate") from exc


def solve_k1_bipartite(
    theta1,
    theta2,
    q: int,
    precision: int = DEFAULT_PRECISION,
) -> PhaseReport:
    """Period-two boundary laws on the line with alternating couplings.

    Composing the two alternating one-child steps gives a single scalar
    fixed-point equation whose root set is {1, 1-q} whenever the composite
    parameter differs from 1, i.e. whenever neither coupling vanishes.  A
    root is a Gibbs witness only if its offset from 1 has valuation >= 1,
    which for 1-q means exactly that p divides q.
    """
    t1 = _theta_number(theta1)
    t2 = _theta_number(theta2)
    p = t1.prime
    alpha_num = t1 * t2 + PadicNumber.from_fraction(q - 1, p, t1.precision)
    alpha_den = t1 + t2 + PadicNumber.from_fraction(q - 2, p, t1.precision)
    try:
        alpha = alpha_num / alpha_den
    except (DivisionByZero, PrecisionExhausted) as exc:
        raise DenominatorDegenerate("composite coupling parameter degenerate") from exc

    one_minus = (t1 - 1) * (t2 - 1)
    degenerate = one_minus.is_zero  # exactly when one coupling is exactly zero
    roots = [PadicNumber.one(p, precision)]
    if not degenerate:
        roots.append(PadicNumber.from_fraction(1 - q, p, precision))

    witnesses = []
    rejected = []
    pairs = {}
    for root in roots:
        offset = root.distance_valuation(PadicNumber.one(p, precision))
        vec = ZVector.from_first_component(root, q, precision)
        if offset >= 1:
            partner = ZVector(
                [_mobius_step(c, t2, q) for c in vec.components]
            )
            # one full period must return the root
            back = ZVector([_mobius_step(c, t1, q) for c in partner.components])
            residual = _residual_offset(back, vec)
            if residual < precision - ROOT_RESIDUAL_MARGIN:
                raise DomainViolation(
                    f"fixed-point residual only reaches valuation {residual}"
                )
            witnesses.append(vec)
            pairs[len(witnesses) - 1] = partner
        else:
            rejected.append(vec)

    witnesses.sort(key=_witness_sort_key)
    diag = {
        "alpha_offset_valuation": str(alpha.distance_valuation(PadicNumber.one(p))),
        "rejected_roots": [_witness_json(r) for r in rejected],
        "paired_laws": [_witness_json(pairs[i]) for i in sorted(pairs)],
    }
    cert = uniqueness_certificate(p, q)
    if len(witnesses) > 1:
        return PhaseReport(
            VERDICT_MULTIPLE_TI,
            witnesses,
            "two distinct period-two boundary laws verified as fixed points of the "
            "composed alternating step",
            diag,
        )
    if cert.applies:
        return PhaseReport(VERDICT_UNIQUE, witnesses, cert.reason, diag)
    return PhaseReport(
        VERDICT_INCONCLUSIVE,
        witnesses,
        "only the trivial law arises on this branch (a coupling vanishes or every "
        "nontrivial root leaves the disk) and no uniqueness certificate applies",
        diag,
    )


def translation_invariant_cubic(
    theta,
    q: int,
    precision: int = DEFAULT_PRECISION,
) -> PhaseReport:
    """Constant boundary laws on the order-2 tree via the reduced cubic.

    The fixed-point condition for a law constant across the tree, with all
    but the first component equal to 1, collapses to a monic cubic whose
    coefficients sum to zero, so 1 is always a root; the remaining disk
    roots are found by Hensel search.
    """
    th = _theta_number(theta)
    p = th.prime
    one = PadicNumber.one(p, th.precision)
    u = th - one  # offset of the edge weight from 1
    c3 = PadicNumber.one(p, th.precision)
    c2 = PadicNumber.from_fraction(2 * q - 3, p, th.precision) - u * u
    c1 = u * u + PadicNumber.from_fraction(q * q - 4 * q + 3, p, th.precision)
    c0 = PadicNumber.from_fraction(-((q - 1) ** 2), p, th.precision)
    cubic = PadicPolynomial((c0, c1, c2, c3))
    roots = hensel_roots_in_disk(cubic, PadicNumber.one(p, precision), 1)

    witnesses = [ZVector.from_first_component(r, q, precision) for r in roots]
    witnesses.sort(key=_witness_sort_key)
    try:
        at_one = str(cubic.evaluate(PadicNumber.one(p, precision)).norm_valuation())
    except PrecisionExhausted as exc:
        # total cancellation: the value is zero past every known digit
        at_one = f">={exc.bound}"
    diag = {
        "disk_root_count": len(roots),
        "value_at_one_valuation": at_one,
    }
    cert = uniqueness_certificate(p, q)
    if len(witnesses) >= 2:
        return PhaseReport(
            VERDICT_MULTIPLE_TI,
            witnesses,
            "the reduced cubic has more than one root in the unit disk around 1, each "
            "a verified constant boundary law",
            diag,
        )
    if cert.applies:
        return PhaseReport(VERDICT_UNIQUE, witnesses, cert.reason, diag)
    return PhaseReport(
        VERDICT_INCONCLUSIVE,
        witnesses,
        "only the trivial constant law was found yet no uniqueness certificate applies",
        diag,
    )


def period2_k2_analysis(
    theta,
    q: int,
    precision: int = DEFAULT_PRECISION,
) -> PhaseReport:
    """Two-level alternating laws on the order-2 tree.

    Eliminating one unknown from the alternating pair system leaves a
    quadratic a*z**2 + b*z + c in the first component.  The classical
    certificate for ruling out extra solutions demands that a and b lose a
    digit while c stays a unit; this routine measures all three valuations
    and searches the disk anyway, reporting whatever is actually there.  A
    quadratic root is only accepted after the full two-step cycle closes on
    it.
    """
    th = _theta_number(theta)
    p = th.prime
    if p.value < 3:
        raise DomainViolation("the alternating-pair analysis needs an odd prime")
    if q % p.value != 0:
        raise DomainViolation("the alternating-pair analysis targets q divisible by p")
    P = lambda n: PadicNumber.from_fraction(n, p, th.precision)  # noqa: E731

    a = (th * th + th + P(q - 2)) ** 2
    b = (
        th**4
        + P(4 * (q - 1)) * th**3
        + P(q * q + 6 * q - 12) * th * th
        + P(2 * (5 * q * q - 18 * q + 16)) * th
        + P(2 * q**3 - 13 * q * q + 26 * q - 17)
    )
    c = (th * P(q - 1) + (th + P(q - 2)) ** 2) ** 2

    va, vb, vc = (x.norm_valuation() for x in (a, b, c))
    quad = PadicPolynomial((c, b, a))
    roots = hensel_roots_in_disk(quad, PadicNumber.one(p, precision), 1)

    witnesses = []
    cycles = []
    for r in roots:
        vec = ZVector.from_first_component(r, q, precision)
        partner_first = _mobius_step(r, th, q) ** 2
        partner = ZVector.from_first_component(partner_first, q, precision)
        back_first = _mobius_step(partner_first, th, q) ** 2
        closure = back_first.distance_valuation(r)
        witnesses.append(vec)
        cycles.append(
            {
                "partner": _witness_json(partner),
                "cycle_closure_valuation": str(closure),
                "partner_distinct_valuation": str(partner_first.distance_valuation(r)),
            }
        )

    diag = {
        "leading_valuation": str(va),
        "middle_valuation": str(vb),
        "constant_valuation": str(vc),
        "disk_root_count": len(roots),
        "cycles": cycles,
    }
    certificate_holds = vc == 0 and va >= 1 and vb >= 1 and not roots
    if certificate_holds:
        return PhaseReport(
            VERDICT_NO_EXTRA_PERIODIC,
            [],
            "the quadratic's constant term is a unit while both other coefficients "
            "lose a digit, so no root stays in the unit disk around 1; alternating "
            "laws collapse to constant ones",
            diag,
        )
    return PhaseReport(
        VERDICT_INCONCLUSIVE,
        sorted(witnesses, key=_witness_sort_key),
        "the unit-constant-term certificate fails here (the constant term itself "
        "loses digits) and the disk search returns genuine two-cycles, so the "
        "collapse of alternating laws is not certified",
        diag,
    )


# p = 2 threshold table for the order-2 tree: (q mod condition, coupling
# valuation condition) -> multiple constant laws guaranteed.
def _two_adic_threshold(q: int, j_valuation) -> bool:
    if j_valuation is None:  # zero coupling
        return False
    s = q
    m = 0
    while s % 2 == 0:
        s //= 2
        m += 1
    if m == 2:
        return j_valuation == 2
    if m >= 3:
        return j_valuation >= 2
    return False


def classify_phase(
    p,
    q: int,
    k: int,
    J: CouplingField,
    precision: int = DEFAULT_PRECISION,
) -> PhaseReport:
    """Dispatch to the strongest applicable analysis for (p, q, k, J)."""
    prime = as_prime(p)
    if prime != J.prime or q != J.q:
        raise ValueError("classification parameters disagree with the coupling field")

    cert = uniqueness_certificate(prime, q)
    if cert.applies:
        return PhaseReport(VERDICT_UNIQUE, [], cert.reason, {"q_unit": True})

    if k == 1 and J.pattern in ("homogeneous", "bipartite"):
        root, child = TreeVertex.root(), TreeVertex.root().child(0)
        odd_child = child.child(0)
        theta1 = J.theta_for_edge(root, child, precision)
        theta2 = J.theta_for_edge(child, odd_child, precision)
        return solve_k1_bipartite(theta1, theta2, q, precision)

    if k == 2 and J.pattern == "homogeneous":
        j_val = rational_valuation(J.values["J"], prime)
        if prime.value == 2:
            if _two_adic_threshold(q, j_val):
                return PhaseReport(
                    VERDICT_MULTIPLE_TI,
                    [],
                    "the two-adic threshold table guarantees more than one constant "
                    "law at this coupling norm (no roots are searched at p = 2)",
                    {"coupling_valuation": str(Valuation(j_val))},
                )
            return PhaseReport(
                VERDICT_INCONCLUSIVE,
                [],
                "outside the two-adic threshold table nothing is certified",
                {"coupling_valuation": str(Valuation(j_val))},
            )
        theta = J.theta_for_edge(TreeVertex.root(), TreeVertex.root().child(0), precision)
        constant = translation_invariant_cubic(theta, q, precision)
        alternating = period2_k2_analysis(theta, q, precision)
        merged = dict(constant.diagnostics)
        merged["alternating_verdict"] = alternating.verdict
        merged["alternating_diagnostics"] = alternating.diagnostics
        return PhaseReport(
            constant.verdict,
            constant.witnesses + alternating.witnesses,
            constant.certificate + "; alternating-pair analysis: " + alternating.certificate,
            merged,
        )

    return PhaseReport(
        VERDICT_INCONCLUSIVE,
        [],
        "no implemented analysis covers this combination of branching, coupling "
        "pattern, and divisibility",
        {},
    )


def witness_boundary_field(
    witness: ZVector, q: int, precision: int | None = None
) -> BoundaryField:
    """The constant boundary field whose one-site weight ratios equal ``witness``.

    The field's complement-sum coordinates are minus the componentwise log of
    the witness: with that orientation the finite-volume measures built from
    the field marginalize consistently whenever the witness is a genuine
    fixed point.  At p = 2 the reconstruction additionally needs every
    component offset at valuation >= 2 so the exponentials downstream stay
    defined.

    ``precision`` deepens the logarithms past the witness's display precision
    (effective only for exact components); measure checks escalate their
    working modulus with volume, so reconstruct with headroom to spare.
    """
    p = witness.prime
    need = exp_domain_min_valuation(p)
    one = PadicNumber.one(p)
    for c in witness.components:
        if c.distance_valuation(one) < need:
            raise DomainViolation(
                f"witness offset below valuation {need}; its field has no admissible "
                "exponent at this prime"
            )
    hprime = PadicVector(-log_p(c, precision=precision) for c in witness.components)
    h = hprime_to_h(hprime, q)
    return BoundaryField.constant(h, q)
