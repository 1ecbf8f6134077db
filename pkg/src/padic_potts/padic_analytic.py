"""p-adic exponential and logarithm, and root finding inside disks.

The two series are evaluated in modular integer arithmetic: a term with
valuation at or above the absolute target contributes nothing representable,
so the sum runs only until every remaining term provably clears the target.
Truncation bounds use v(n!) = (n - digitsum_p(n)) / (p - 1), estimated from
above by (n - 1) / (p - 1), and v(n) <= log_p(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainViolation, LiftStall, PrecisionExhausted
from .padic_core import (
    PadicNumber,
    Prime,
    Valuation,
    as_prime,
    rational_valuation,
    residue_of_rational,
)

# residual digits a root may miss at the working precision and still verify
ROOT_RESIDUAL_MARGIN = 4


def exp_domain_min_valuation(p: int | Prime) -> int:
    """Least valuation admitted by the exponential disk: 1, except 2 at p=2.

    This is the integer form of the bound |x|_p < p**(-1/(p-1)).
    """
    return 2 if as_prime(p).value == 2 else 1


@dataclass(frozen=True, slots=True)
class ConvergenceDisk:
    """Domain of one of the two series: ``kind`` is "exp" or "log".

    The exp disk is centered at 0, the log disk at 1, both with the radius
    forced by convergence of the respective series.
    """

    prime: Prime
    kind: str

    def __post_init__(self):
        if self.kind not in ("exp", "log"):
            raise ValueError(f"unknown disk kind {self.kind!r}")

    def contains(self, x: PadicNumber) -> bool:
        if self.kind == "exp":
            return x.valuation_at_least(exp_domain_min_valuation(self.prime))
        return x.distance_valuation(1) >= Valuation(1)


def exp_domain(p: int | Prime) -> ConvergenceDisk:
    return ConvergenceDisk(as_prime(p), "exp")


def log_domain(p: int | Prime) -> ConvergenceDisk:
    return ConvergenceDisk(as_prime(p), "log")


def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def exp_p(x: PadicNumber, precision: int | None = None) -> PadicNumber:
    """Sum of x**n / n! over n >= 0, defined on the exp disk.

    The result is a unit congruent to 1 + x modulo higher terms, carried to
    the precision of x unless a wider relative target is requested (useful
    when an exact argument must feed a deep modular computation).  Raises
    DomainViolation off the disk.
    """
    p = x.prime
    pv = p.value
    n_rel = x.precision if precision is None else precision
    if x.is_zero:
        return PadicNumber.one(p, n_rel)
    if not exp_domain(p).contains(x):
        raise DomainViolation(
            f"exp argument needs valuation >= {exp_domain_min_valuation(p)}, "
            f"got {x.norm_valuation()}"
        )
    vx = int(x.norm_valuation())
    k = vx + n_rel + 2
    if x.known_abs is not None:
        k = min(k, x.known_abs)
    modulus = pv**k
    ux = residue_of_rational(x.value / Fraction(pv) ** vx, p, k)

    total = 1  # n = 0 term
    term_v = 0
    term_u = 1
    n = 1
    while True:
        # every term from n on has valuation >= n*vx - (n-1)/(p-1)
        if Fraction(n) * vx - Fraction(n - 1, pv - 1) >= k:
            break
        term_v += vx - _vp_int(n, pv)
        unit_n = n // pv ** _vp_int(n, pv)
        term_u = term_u * ux * pow(unit_n, -1, modulus) % modulus
        if term_v < k:
            total = (total + term_u * pv**term_v) % modulus
        n += 1
    return PadicNumber.from_residue(total, p, k, n_rel)


def log_p(x: PadicNumber, precision: int | None = None) -> PadicNumber:
    """Sum of -(-1)**n (x-1)**n / n over n >= 1, for valuation(x-1) >= 1.

    Raises DomainViolation off the disk, and PrecisionExhausted when x is
    congruent to 1 at its full working precision so no digit of the result
    can be trusted.
    """
    p = x.prime
    pv = p.value
    n_rel = x.precision if precision is None else precision
    t = x.value - 1
    if t == 0:
        if x.known_abs is None:
            return PadicNumber.zero(p, n_rel)
        raise PrecisionExhausted(bound=x.known_abs)
    if not log_domain(p).contains(x):
        raise DomainViolation(
            f"log argument needs valuation(x - 1) >= 1, got "
            f"{x.distance_valuation(1)}"
        )
    vt = rational_valuation(t, p)
    if x.known_abs is not None and vt >= x.known_abs:
        raise PrecisionExhausted(bound=x.known_abs)
    k = vt + n_rel + 2
    if x.known_abs is not None:
        k = min(k, x.known_abs)
    # dividing a term by n = p^j * unit consumes j guard digits
    slack = 1
    while pv**slack <= k:
        slack += 1
    guard = pv ** (k + slack)
    t_res = residue_of_rational(t, p, k + slack)
    modulus = pv**k

    total = 0
    power = 1  # t**n residue mod guard
    n = 1
    while True:
        # v(t**n / n) >= n*vt - (digits_p(n) - 1), nondecreasing since vt >= 1
        digits = 1
        while pv**digits <= n:
            digits += 1
        if n * vt - (digits - 1) >= k:
            break
        power = power * t_res % guard
        j = _vp_int(n, pv)
        term = power // pv**j * pow(n // pv**j, -1, modulus) % modulus
        if n % 2 == 0:
            term = -term
        total = (total + term) % modulus
        n += 1
    return PadicNumber.from_residue(total, p, k, n_rel)


@dataclass(frozen=True)
class PadicPolynomial:
    """Polynomial with p-adic coefficients, ascending degree order.

    The leading coefficient must not be the exact zero; interior exact zeros
    are fine.
    """

    coefficients: tuple[PadicNumber, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("a polynomial needs at least one coefficient")
        primes = {c.prime for c in self.coefficients}
        if len(primes) != 1:
            raise ValueError("coefficients mix primes")
        if len(self.coefficients) > 1 and self.coefficients[-1].is_zero:
            raise ValueError("leading coefficient is zero; drop it first")

    @property
    def prime(self) -> Prime:
        return self.coefficients[0].prime

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def precision(self) -> int:
        return min(c.precision for c in self.coefficients)

    def known_abs(self) -> int | None:
        bounds = [c.known_abs for c in self.coefficients if c.known_abs is not None]
        return min(bounds) if bounds else None

    def evaluate(self, z: PadicNumber) -> PadicNumber:
        out = self.coefficients[-1]
        for c in reversed(self.coefficients[:-1]):
            out = out.mul(z).add(c)
        return out

    def evaluate_fraction(self, z: Fraction) -> Fraction:
        out = Fraction(0)
        for c in reversed(self.coefficients):
            out = out * z + c.value
        return out

    def derivative(self) -> "PadicPolynomial":
        if self.degree == 0:
            return PadicPolynomial((PadicNumber.zero(self.prime, self.precision),))
        coeffs = tuple(
            c.mul(PadicNumber.from_fraction(i, self.prime, c.precision))
            for i, c in enumerate(self.coefficients)
            if i >= 1
        )
        while len(coeffs) > 1 and coeffs[-1].is_zero:
            coeffs = coeffs[:-1]
        return PadicPolynomial(coeffs)


def _shifted_coefficients(
    coeffs: list[Fraction], a: Fraction, b: Fraction
) -> list[Fraction]:
    """Coefficients of f(a + b*w) given those of f(z)."""
    deg = len(coeffs) - 1
    out = [Fraction(0)] * (deg + 1)
    for i, ci in enumerate(coeffs):
        if ci == 0:
            continue
        ai = [ci * math.comb(i, j) * a ** (i - j) * b**j for j in range(i + 1)]
        for j, t in enumerate(ai):
            out[j] += t
    return out


def _poly_eval_fraction(coeffs: list[Fraction], z: Fraction) -> Fraction:
    out = Fraction(0)
    for c in reversed(coeffs):
        out = out * z + c
    return out


def hensel_roots_in_disk(
    f: PadicPolynomial, center: PadicNumber, min_valuation_offset: int
) -> list[PadicNumber]:
    """All roots z of f with valuation(z - center) >= min_valuation_offset.

    Walks residues digit by digit: a residue where the reduced derivative is
    a unit is lifted by the Newton step, a repeated residue is refined one
    digit deeper.  A branch that neither separates nor terminates within
    depth 2N raises LiftStall.  Returned roots are verified to push the
    residual valuation to at least N - ROOT_RESIDUAL_MARGIN and are
    deduplicated at that same threshold.
    """
    p = f.prime
    pv = p.value
    n_rel = f.precision
    k_f = f.known_abs()
    target = n_rel - ROOT_RESIDUAL_MARGIN
    depth_cap = 2 * n_rel
    base_coeffs = [c.value for c in f.coefficients]
    found: list[tuple[Fraction, int]] = []  # (value, digits known past offset)

    def descend(prefix: int, depth: int):
        a = center.value + Fraction(pv) ** min_valuation_offset * prefix
        b = Fraction(pv) ** (min_valuation_offset + depth)
        g = _shifted_coefficients(base_coeffs, a, b)
        content = min(v for c in g if (v := rational_valuation(c, p)) is not None)
        norm = [c / Fraction(pv) ** content for c in g]
        norm_mod_p = [residue_of_rational(c, p, 1) for c in norm]
        deriv_mod_p = [(j * c) % pv for j, c in enumerate(norm_mod_p)][1:] or [0]
        for r in range(pv):
            if _poly_eval_int(norm_mod_p, r, pv) != 0:
                continue
            if _poly_eval_int(deriv_mod_p, r, pv) != 0:
                w = _newton_lift(norm, r, p, n_rel + min_valuation_offset + depth + 8)
                res = _lift_digits(norm, w, p)
                known = None if res is None else min_valuation_offset + depth + res
                found.append((a + b * w, known))
            elif depth + 1 > depth_cap:
                raise LiftStall(
                    f"residue branch at digits {prefix + r * pv**depth} "
                    f"did not separate within depth {depth_cap}"
                )
            else:
                descend(prefix + r * pv**depth, depth + 1)

    descend(0, 0)

    roots: list[PadicNumber] = []
    seen: list[Fraction] = []
    for value, lift_known in sorted(
        found, key=lambda rv: _root_sort_key(rv[0], center.value, pv, min_valuation_offset)
    ):
        residual = rational_valuation(f.evaluate_fraction(value), p)
        if residual is not None and residual < target:
            continue
        if any(_agree(value, s, pv, target) for s in seen):
            continue
        seen.append(value)
        known = lift_known
        if k_f is not None:
            # fuzzy coefficients blur the root by their own uncertainty
            slope = rational_valuation(f.derivative().evaluate_fraction(value), p)
            coeff_known = k_f - (slope if slope is not None else 0)
            known = coeff_known if known is None else min(known, coeff_known)
        if value == 0 and known is not None:
            raise PrecisionExhausted(
                "root indistinguishable from zero at working precision", bound=known
            )
        roots.append(PadicNumber(value, p, n_rel, known_abs=known))
    return roots


def _poly_eval_int(coeffs_mod_p: list[int], r: int, pv: int) -> int:
    out = 0
    for c in reversed(coeffs_mod_p):
        out = (out * r + c) % pv
    return out


def _newton_lift(norm: list[Fraction], r: int, p: Prime, digits: int) -> int:
    """Lift a simple residue root of a content-free polynomial to Z/p**digits."""
    pv = p.value
    deriv = [j * c for j, c in enumerate(norm)][1:]
    w = r
    prec = 1
    while prec < digits:
        prec = min(2 * prec, digits)
        mod = pv**prec
        fw = residue_of_rational(_poly_eval_fraction(norm, Fraction(w)), p, prec)
        dw = residue_of_rational(_poly_eval_fraction(deriv, Fraction(w)), p, prec)
        w = (w - fw * pow(dw, -1, mod)) % mod
    return w


def _lift_digits(norm: list[Fraction], w: int, p: Prime) -> int | None:
    """Residual valuation of the lift; None when w is an exact root."""
    return rational_valuation(_poly_eval_fraction(norm, Fraction(w)), p)


def _agree(a: Fraction, b: Fraction, pv: int, digits: int) -> bool:
    v = rational_valuation(a - b, Prime(pv))
    return v is None or v >= digits


def _root_sort_key(value: Fraction, center: Fraction, pv: int, offset: int):
    diff = value - center
    v = rational_valuation(diff, Prime(pv))
    if v is None:
        return (1, 0, 0)
    unit = diff / Fraction(pv) ** v
    return (0, v, residue_of_rational(unit, Prime(pv), 12))
