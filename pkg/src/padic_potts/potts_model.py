"""The inhomogeneous p-adic Potts model on a rooted Cayley tree.

Couplings sit on edges, boundary fields on the outermost sphere, and every
finite-volume weight is the p-adic exponential of a sum that admissibility
keeps inside the exponential's convergence disk.  Since such exponentials are
units, all enumeration runs over unit residues modulo p**B for a working
exponent B a little above the requested precision; partition functions and
marginal sums are therefore exact integers mod p**B, and every reported
valuation is certain unless stated as a lower bound.

The compatibility checker is deliberately the dumb oracle: it enumerates
every configuration of the larger ball and compares marginal sums against the
smaller ball's measure, term by term.  Nothing here knows about the recursion
the solver module implements, which is what makes the cross-check meaningful.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .cayley_tree import TreeShape, TreeVertex, ball, edges, sphere, vertex_parity
from .errors import (
    DomainViolation,
    EnumerationTooLarge,
    PartitionFunctionDegenerate,
    PrecisionExhausted,
)
from .padic_analytic import exp_domain_min_valuation, exp_p
from .padic_core import (
    DEFAULT_PRECISION,
    PadicNumber,
    Prime,
    Valuation,
    as_prime,
    rational_valuation,
)

# Hard ceiling on weighted terms any enumeration may touch.
ENUMERATION_GUARD = 10**7

# Extra digits of working modulus above the requested precision.
MODULUS_HEADROOM = 3

# Discrepancies must vanish to this many digits below precision to count as zero.
COMPAT_MARGIN = 4

SpinLabel = int  # labels 1..q; the vector embedding only ever enters via spin_pairing


class PadicVector:
    """A tuple of same-prime PadicNumbers under the sup norm."""

    __slots__ = ("components",)

    def __init__(self, components):
        components = tuple(components)
        if not components:
            raise ValueError("vector needs at least one component")
        p = components[0].prime
        if any(c.prime != p for c in components):
            raise ValueError("mixed primes in one vector")
        object.__setattr__(self, "components", components)

    @classmethod
    def from_rationals(cls, values, p, precision: int = DEFAULT_PRECISION) -> "PadicVector":
        return cls(PadicNumber.from_fraction(Fraction(v), p, precision) for v in values)

    @classmethod
    def zero(cls, length: int, p, precision: int = DEFAULT_PRECISION) -> "PadicVector":
        return cls(PadicNumber.zero(p, precision) for _ in range(length))

    @property
    def prime(self) -> Prime:
        return self.components[0].prime

    @property
    def dimension(self) -> int:
        return len(self.components)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def sup_norm_valuation(self) -> Valuation:
        # sup of norms = min of valuations.
        return min(c.norm_valuation() for c in self.components)

    def in_exp_domain(self) -> bool:
        bound = exp_domain_min_valuation(self.prime)
        return all(c.is_zero or int(c.norm_valuation()) >= bound for c in self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i: int) -> PadicNumber:
        return self.components[i]

    def __add__(self, other: "PadicVector") -> "PadicVector":
        self._match(other)
        return PadicVector(a + b for a, b in zip(self.components, other.components))

    def __sub__(self, other: "PadicVector") -> "PadicVector":
        self._match(other)
        return PadicVector(a - b for a, b in zip(self.components, other.components))

    def __neg__(self) -> "PadicVector":
        return PadicVector(-c for c in self.components)

    def scale(self, factor) -> "PadicVector":
        return PadicVector(c * factor for c in self.components)

    def _match(self, other: "PadicVector") -> None:
        if not isinstance(other, PadicVector):
            raise TypeError(f"expected PadicVector, got {type(other).__name__}")
        if len(self) != len(other):
            raise ValueError(f"dimension mismatch {len(self)} vs {len(other)}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, PadicVector):
            return NotImplemented
        return len(self) == len(other) and all(
            a == b for a, b in zip(self.components, other.components)
        )

    __hash__ = None

    def __repr__(self) -> str:
        inner = ", ".join(repr(c) for c in self.components)
        return f"PadicVector({inner})"


def _check_coupling_admissible(value: Fraction, p: Prime) -> None:
    v = rational_valuation(value, p)
    need = exp_domain_min_valuation(p)
    if v is not None and v < need:
        raise DomainViolation(
            f"coupling {value} has valuation {v} < {need} required for exp at p={p}"
        )


@dataclass(eq=False)
class CouplingField:
    """Edge-to-coupling assignment with its admissibility certificate.

    Three patterns: a single value everywhere, a value per edge direction of
    the bipartition (chosen by the parent's parity), or an explicit per-edge
    table keyed by (parent address, child address) strings.  Every value must
    lie in the exponential's convergence disk; zero is accepted as the
    degenerate coupling (its exponential is exactly one).
    """

    pattern: str
    prime: Prime
    q: int
    values: dict
    _theta_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.prime = as_prime(self.prime)
        if self.q < 2:
            raise ValueError(f"need at least two spin states, got q={self.q}")
        if self.pattern not in ("homogeneous", "bipartite", "per_edge"):
            raise ValueError(f"unknown coupling pattern {self.pattern!r}")
        for value in self._all_values():
            _check_coupling_admissible(value, self.prime)

    def _all_values(self):
        if self.pattern == "homogeneous":
            return [self.values["J"]]
        if self.pattern == "bipartite":
            return [self.values["even_to_odd"], self.values["odd_to_even"]]
        return list(self.values.values())

    @classmethod
    def homogeneous(cls, J, p, q: int) -> "CouplingField":
        return cls("homogeneous", as_prime(p), q, {"J": Fraction(J)})

    @classmethod
    def bipartite(cls, J_even_to_odd, J_odd_to_even, p, q: int) -> "CouplingField":
        return cls(
            "bipartite",
            as_prime(p),
            q,
            {"even_to_odd": Fraction(J_even_to_odd), "odd_to_even": Fraction(J_odd_to_even)},
        )

    @classmethod
    def per_edge(cls, table, p, q: int) -> "CouplingField":
        values = {(str(x), str(y)): Fraction(J) for (x, y), J in table.items()}
        return cls("per_edge", as_prime(p), q, values)

    def coupling_for_edge(self, parent: TreeVertex, child: TreeVertex) -> Fraction:
        if self.pattern == "homogeneous":
            return self.values["J"]
        if self.pattern == "bipartite":
            key = "even_to_odd" if vertex_parity(parent) == "even" else "odd_to_even"
            return self.values[key]
        try:
            return self.values[(str(parent), str(child))]
        except KeyError:
            raise KeyError(f"no coupling listed for edge {parent} -> {child}") from None

    def theta_for_edge(
        self, parent: TreeVertex, child: TreeVertex, precision: int = DEFAULT_PRECISION
    ) -> PadicNumber:
        """exp of the edge coupling, cached per distinct coupling value."""
        J = self.coupling_for_edge(parent, child)
        key = (J, precision)
        if key not in self._theta_cache:
            self._theta_cache[key] = exp_p(PadicNumber.from_fraction(J, self.prime, precision))
        return self._theta_cache[key]


class BoundaryField:
    """Vertex-to-vector assignment h; unlisted vertices default to zero.

    Every explicitly assigned vector must lie componentwise in the
    exponential's convergence disk, which is what keeps all weights
    well-defined units.
    """

    __slots__ = ("q", "prime", "precision", "_table", "_default")

    def __init__(self, q: int, p, assignment=None, precision: int = DEFAULT_PRECISION):
        if q < 2:
            raise ValueError(f"need at least two spin states, got q={q}")
        self.q = q
        self.prime = as_prime(p)
        self.precision = precision
        self._default = PadicVector.zero(q - 1, self.prime, precision)
        self._table: dict[TreeVertex, PadicVector] = {}
        for vertex, vec in (assignment or {}).items():
            self.assign(vertex, vec)

    def assign(self, vertex: TreeVertex, vec: PadicVector) -> None:
        if isinstance(self._table, _ParityTable):
            raise ValueError("a parity-patterned field does not take per-vertex entries")
        if vec.dimension != self.q - 1:
            raise ValueError(f"field vector must have {self.q - 1} components, got {vec.dimension}")
        if vec.prime != self.prime:
            raise ValueError("field vector prime does not match")
        if not vec.in_exp_domain():
            raise DomainViolation(
                f"field at {vertex or 'root'} leaves the exponential domain at p={self.prime}"
            )
        self._table[vertex] = vec

    @classmethod
    def zero(cls, q: int, p, precision: int = DEFAULT_PRECISION) -> "BoundaryField":
        return cls(q, p, precision=precision)

    @classmethod
    def constant(cls, vec: PadicVector, q: int) -> "BoundaryField":
        out = cls(q, vec.prime, precision=max(c.precision for c in vec.components))
        out.assign(TreeVertex.root(), vec)
        out._default = vec
        return out

    @classmethod
    def by_parity(cls, even: PadicVector, odd: PadicVector, q: int) -> "BoundaryField":
        out = cls(q, even.prime, precision=max(c.precision for c in even.components))
        if odd.dimension != even.dimension:
            raise ValueError("parity vectors must share a dimension")
        for vec in (even, odd):
            if vec.dimension != q - 1:
                raise ValueError(f"field vector must have {q - 1} components")
            if not vec.in_exp_domain():
                raise DomainViolation("parity field vector leaves the exponential domain")
        out._table = _ParityTable(even, odd)
        return out

    def field_at(self, vertex: TreeVertex) -> PadicVector:
        got = self._table.get(vertex)
        return self._default if got is None else got

    def assigned_vertices(self):
        if isinstance(self._table, _ParityTable):
            return []
        return sorted(self._table, key=lambda v: (v.level, v.address))


class _ParityTable:
    """Mapping view that answers by vertex parity instead of by vertex."""

    __slots__ = ("even", "odd")

    def __init__(self, even: PadicVector, odd: PadicVector):
        self.even = even
        self.odd = odd

    def get(self, vertex: TreeVertex, default=None):
        return self.even if vertex_parity(vertex) == "even" else self.odd


@dataclass(frozen=True)
class Configuration:
    """A total spin assignment on some ball, spins labelled 1..q."""

    assignment: dict

    def spin_at(self, vertex: TreeVertex) -> SpinLabel:
        return self.assignment[vertex]

    @classmethod
    def from_spins(cls, mapping) -> "Configuration":
        return cls(dict(mapping))


def spin_pairing(h: PadicVector, s: SpinLabel) -> PadicNumber:
    """One-site boundary exponent for spin ``s``.

    The first q-1 spins read off their own component; the last spin gets the
    component sum.
    """
    q = h.dimension + 1
    if not 1 <= s <= q:
        raise ValueError(f"spin label {s} outside 1..{q}")
    if s < q:
        return h[s - 1]
    total = h[0]
    for c in h.components[1:]:
        total = total + c
    return total


def hamiltonian(
    shape: TreeShape,
    cfg: Configuration,
    J: CouplingField,
    n: int,
    precision: int = DEFAULT_PRECISION,
) -> PadicNumber:
    """Minus the coupling sum over agreeing edges of the n-ball, exactly."""
    total = Fraction(0)
    for x, y in edges(shape, n):
        if cfg.spin_at(x) == cfg.spin_at(y):
            total += J.coupling_for_edge(x, y)
    return PadicNumber.from_fraction(-total, J.prime, precision)


# ---------------------------------------------------------------------------
# Enumeration engine


def _guard(q: int, vertex_count: int) -> None:
    if q**vertex_count > ENUMERATION_GUARD:
        raise EnumerationTooLarge(
            f"{q}**{vertex_count} configurations exceed the guard of {ENUMERATION_GUARD} terms"
        )


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class _LevelWeights:
    """Unit residues mod p**B for every edge and boundary site of one ball.

    B is clamped to the least absolute precision carried by any of the
    exponentials involved, so every residue is certain.  The partition sum of
    a ball loses one factor of |q|_p per vertex, so callers that must resolve
    quantities past that loss ask for extra working digits up front;
    ``shift_hint`` provides the standard estimate.
    """

    def __init__(
        self,
        shape: TreeShape,
        h: BoundaryField,
        J: CouplingField,
        n: int,
        precision: int,
        extra_digits: int = 0,
    ):
        p = int(J.prime.value)
        self.prime = p
        self.q = J.q
        self.vertices = ball(shape, n)
        _guard(self.q, len(self.vertices))
        index = {v: i for i, v in enumerate(self.vertices)}

        work = precision + extra_digits
        thetas = [(index[x], index[y], J.theta_for_edge(x, y, work)) for x, y in edges(shape, n)]
        site_exps = []
        for x in sphere(shape, n):
            vec = h.field_at(x)
            site_exps.append(
                (index[x], [exp_p(spin_pairing(vec, s), precision=work) for s in range(1, self.q + 1)])
            )

        bound = work + MODULUS_HEADROOM
        for _, _, th in thetas:
            if th.known_abs is not None:
                bound = min(bound, th.known_abs)
        for _, table in site_exps:
            for w in table:
                if w.known_abs is not None:
                    bound = min(bound, w.known_abs)
        self.modulus_exponent = bound
        self.modulus = p**bound
        self.edge_residues = [(i, j, th.residue(bound)) for i, j, th in thetas]
        self.site_residues = [(i, [w.residue(bound) for w in table]) for i, table in site_exps]
        self.boundary_start = len(self.vertices) - len(sphere(shape, n))


    def weight(self, cfg: tuple) -> int:
        w = 1
        M = self.modulus
        for i, j, th in self.edge_residues:
            if cfg[i] == cfg[j]:
                w = w * th % M
        for i, table in self.site_residues:
            w = w * table[cfg[i] - 1] % M
        return w

    def partition_residue(self) -> int:
        spins = range(1, self.q + 1)
        total = 0
        for cfg in itertools.product(spins, repeat=len(self.vertices)):
            total = (total + self.weight(cfg)) % self.modulus
        return total

    def partition_valuation(self, residue: int) -> int:
        if residue == 0:
            raise PartitionFunctionDegenerate(
                f"partition sum vanishes mod {self.prime}**{self.modulus_exponent}; "
                "its valuation cannot be resolved at this precision"
            )
        return _vp(residue, self.prime)


def _shift_hint(shape: TreeShape, q: int, p: int, n: int) -> int:
    # Expected valuation of the n-ball partition sum: one v_p(q) per vertex.
    k = shape.branching
    count = 1 + sum((k + 1) * k ** (m - 1) for m in range(1, n + 1))
    return _vp(q, p) * count


def _weights_resolving_partition(
    shape: TreeShape,
    h: BoundaryField,
    J: CouplingField,
    n: int,
    precision: int,
) -> tuple[_LevelWeights, int, int]:
    """A weight system together with its partition residue and valuation.

    Starts from the standard estimate of the partition valuation and widens
    the working modulus once if the estimate fell short, so the returned
    residue always resolves the valuation with the full requested precision
    to spare.
    """
    p = int(J.prime.value)
    extra = 2 * _shift_hint(shape, J.q, p, n)
    for _ in range(2):
        system = _LevelWeights(shape, h, J, n, precision, extra_digits=extra)
        z_res = system.partition_residue()
        zeta = system.partition_valuation(z_res)
        if system.modulus_exponent - 2 * zeta >= precision:
            return system, z_res, zeta
        extra = 2 * zeta
    return system, z_res, zeta


def finite_measure(
    shape: TreeShape,
    cfg: Configuration,
    h: BoundaryField,
    J: CouplingField,
    n: int,
    precision: int = DEFAULT_PRECISION,
) -> PadicNumber:
    """The normalized weight of ``cfg`` in the n-ball ensemble.

    Full enumeration on every call; meant as an oracle, not a fast path.
    """
    system, z_res, zeta = _weights_resolving_partition(shape, h, J, n, precision)
    w_res = system.weight(tuple(cfg.spin_at(v) for v in system.vertices))
    return _residue_quotient(w_res, z_res, zeta, system)


def _residue_quotient(w_res: int, z_res: int, zeta: int, system: _LevelWeights) -> PadicNumber:
    # w / Z with both known mod p**B: quotient certain to B - 2*zeta digits.
    p = system.prime
    B = system.modulus_exponent
    known = B - 2 * zeta
    unit = z_res // p**zeta
    inv = pow(unit, -1, p ** (B - zeta))
    value = Fraction(w_res * inv % p ** (B - zeta), p**zeta)
    n_rel = max(1, known - rational_valuation_or_zero(value, p))
    return PadicNumber(value, Prime(p), n_rel, known_abs=known)


def rational_valuation_or_zero(x: Fraction, p: int) -> int:
    v = rational_valuation(x, Prime(p))
    return 0 if v is None else v


def finite_measure_table(
    shape: TreeShape,
    h: BoundaryField,
    J: CouplingField,
    n: int,
    precision: int = DEFAULT_PRECISION,
):
    """All configuration weights at once: list of (spins tuple, measure)."""
    system, z_res, zeta = _weights_resolving_partition(shape, h, J, n, precision)
    spins = range(1, system.q + 1)
    out = []
    for cfg in itertools.product(spins, repeat=len(system.vertices)):
        out.append((cfg, _residue_quotient(system.weight(cfg), z_res, zeta, system)))
    return out


@dataclass(frozen=True)
class CompatibilityReport:
    """Outcome of marginalizing the n-ball measure onto the (n-1)-ball.

    ``max_discrepancy_valuation`` is the valuation of the largest-norm
    discrepancy found (so larger is better); when ``resolved`` is False every
    discrepancy vanished to the working modulus and the figure is only a
    certified lower bound.
    """

    holds: bool
    max_discrepancy_valuation: Valuation
    threshold: int
    resolved: bool
    level: int
    terms_enumerated: int


def compatibility_check(
    shape: TreeShape,
    h: BoundaryField,
    J: CouplingField,
    n: int,
    precision: int = DEFAULT_PRECISION,
) -> CompatibilityReport:
    """Brute-force test that the n-ball measure marginalizes to the smaller one.

    For every configuration of the inner ball the checker sums the larger
    measure over all outer-sphere spins and compares with the smaller
    measure, clearing denominators: the compared quantity is
    marginal * Z_{n-1} - weight_{n-1} * Z_n, a p-adic integer known modulo
    the working modulus.
    """
    if n < 1:
        raise ValueError("compatibility needs n >= 1")
    p = int(J.prime.value)
    q = J.q
    threshold = precision - COMPAT_MARGIN
    extra = _shift_hint(shape, q, p, n) + _shift_hint(shape, q, p, n - 1)

    for _ in range(2):
        outer = _LevelWeights(shape, h, J, n, precision, extra_digits=extra)
        inner = _LevelWeights(shape, h, J, n - 1, precision, extra_digits=extra)
        B = min(outer.modulus_exponent, inner.modulus_exponent)
        M = p**B
        inner_count = len(inner.vertices)
        tail_count = len(outer.vertices) - inner_count
        _guard(q, len(outer.vertices))

        # edges wholly inside the smaller ball are constant across the tail
        # loop; hoisting them is plain subexpression reuse, not a shortcut
        # through the marginal sum itself.
        base_edges = [(i, j, t) for i, j, t in outer.edge_residues if j < inner_count]
        tail_edges = [(i, j, t) for i, j, t in outer.edge_residues if j >= inner_count]
        sites = outer.site_residues

        spins = range(1, q + 1)
        tails = list(itertools.product(spins, repeat=tail_count))
        z_outer = 0
        z_inner = 0
        marginals = []
        inner_weights = []
        for inner_cfg in itertools.product(spins, repeat=inner_count):
            base = 1
            for i, j, th in base_edges:
                if inner_cfg[i] == inner_cfg[j]:
                    base = base * th % M
            marg = 0
            for tail in tails:
                cfg = inner_cfg + tail
                w = base
                for i, j, th in tail_edges:
                    if cfg[i] == cfg[j]:
                        w = w * th % M
                for i, table in sites:
                    w = w * table[cfg[i] - 1] % M
                marg += w
            marg %= M
            w_in = inner.weight(inner_cfg) % M
            marginals.append(marg)
            inner_weights.append(w_in)
            z_outer = (z_outer + marg) % M
            z_inner = (z_inner + w_in) % M

        def _zeta(residue: int, which: str) -> int:
            if residue == 0:
                raise PartitionFunctionDegenerate(
                    f"{which} partition sum vanishes mod {p}**{B}; valuation unresolved"
                )
            return _vp(residue, p)

        shift = _zeta(z_outer, "outer") + _zeta(z_inner, "inner")
        if B - shift >= threshold:
            break
        extra = shift  # estimate fell short; widen once to the exact need
    else:
        raise PrecisionExhausted(
            f"working modulus {p}**{B} cannot certify discrepancies to valuation "
            f"{threshold} past the partition valuations",
            bound=B - shift,
        )

    worst: Valuation | None = None
    resolved_worst = True
    for marg, w_in in zip(marginals, inner_weights):
        diff = (marg * z_inner - w_in * z_outer) % M
        if diff == 0:
            val = Valuation(B - shift)
            exact = False
        else:
            val = Valuation(_vp(diff, p) - shift)
            exact = True
        if worst is None or val < worst:
            worst = val
            resolved_worst = exact
    assert worst is not None
    return CompatibilityReport(
        holds=worst >= threshold,
        max_discrepancy_valuation=worst,
        threshold=threshold,
        resolved=resolved_worst,
        level=n,
        terms_enumerated=q ** len(outer.vertices),
    )


@dataclass(frozen=True)
class NormProfileRow:
    level: int
    min_valuation: int
    max_valuation: int


def measure_norm_profile(
    shape: TreeShape,
    h: BoundaryField,
    J: CouplingField,
    n_max: int,
    precision: int = DEFAULT_PRECISION,
) -> list[NormProfileRow]:
    """Extremes of the measure's valuation per level, as a boundedness probe.

    Each weight is a unit, so a configuration's valuation is the weight's
    minus the partition function's; the profile records the min and max over
    all configurations level by level (they coincide exactly when every
    weight is a unit, which this model guarantees, but the scan does not
    assume it).
    """
    rows = []
    for n in range(n_max + 1):
        system = _LevelWeights(shape, h, J, n, precision)
        z_res = system.partition_residue()
        zeta = system.partition_valuation(z_res)
        spins = range(1, system.q + 1)
        vals = set()
        for cfg in itertools.product(spins, repeat=len(system.vertices)):
            w = system.weight(cfg)
            if w == 0:
                raise PrecisionExhausted(
                    "a configuration weight vanished to the working modulus",
                    bound=system.modulus_exponent,
                )
            vals.add(_vp(w, system.prime) - zeta)
        rows.append(NormProfileRow(level=n, min_valuation=min(vals), max_valuation=max(vals)))
    return rows


# ---------------------------------------------------------------------------
# JSON ingestion


def _fraction_from_text(text) -> Fraction:
    if isinstance(text, str):
        return Fraction(text)
    if isinstance(text, int):
        return Fraction(text)
    raise ValueError(f"rationals must be given as strings like '3/4', got {text!r}")


def coupling_from_json(doc: dict) -> CouplingField:
    """Build a CouplingField from its JSON form.

    {"pattern": "homogeneous", "p": 3, "q": 3, "values": {"J": "3/1"}}
    {"pattern": "bipartite", ..., "values": {"even_to_odd": "3", "odd_to_even": "6"}}
    {"pattern": "per_edge", ..., "values": [["", "0", "3"], ["0", "0.0", "6"]]}
    """
    try:
        pattern = doc["pattern"]
        p = as_prime(doc["p"])
        q = int(doc["q"])
        raw = doc["values"]
    except KeyError as missing:
        raise ValueError(f"coupling document lacks field {missing}") from None
    if pattern == "homogeneous":
        return CouplingField.homogeneous(_fraction_from_text(raw["J"]), p, q)
    if pattern == "bipartite":
        return CouplingField.bipartite(
            _fraction_from_text(raw["even_to_odd"]),
            _fraction_from_text(raw["odd_to_even"]),
            p,
            q,
        )
    if pattern == "per_edge":
        table = {}
        for parent, child, value in raw:
            table[(TreeVertex.from_string(parent), TreeVertex.from_string(child))] = (
                _fraction_from_text(value)
            )
        return CouplingField.per_edge(table, p, q)
    raise ValueError(f"unknown coupling pattern {pattern!r}")


def boundary_field_from_json(
    doc: dict, q: int, p, precision: int = DEFAULT_PRECISION
) -> BoundaryField:
    """Build a BoundaryField from {"address": ["num/den", ...], ...}.

    The root is the empty address "" and unlisted vertices stay at zero.
    """
    out = BoundaryField(q, p, precision=precision)
    for address, values in doc.items():
        if len(values) != q - 1:
            raise ValueError(
                f"field at {address!r} must list {q - 1} components, got {len(values)}"
            )
        vec = PadicVector.from_rationals(
            [_fraction_from_text(v) for v in values], out.prime, precision
        )
        out.assign(TreeVertex.from_string(address), vec)
    return out
