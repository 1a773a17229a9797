"""Polynomially weighted lp norms on chains and the associated estimates.

The ``(n, p)`` norm of a chain weights each basis simplex by its word-metric
diameter raised to ``n`` and takes the lp norm of the coefficients:

    ‖c‖_{n,p} = (Σ |a_g|^p · diam(g)^n)^{1/p},      p finite,
    ‖c‖_{n,∞} = sup |a_g| · diam(g)^n.

with the convention 0^0 := 1, so that ``n = 0`` gives the plain lp norm; for
``n >= 1`` degenerate simplices carry weight zero (the norms are then
seminorms — the Fréchet family adds the boundary norm to separate points).

Coefficients stay exact rationals until a norm value is needed: integer
exponents are evaluated as exact rational power sums and rooted once at the
end; fractional exponents use ``math.fsum``, whose correctly rounded result
does not depend on summation order.  The infinity exponent is the distinct
value ``math.inf`` and always takes the structurally different sup branch.

Inequality verifiers return small report objects carrying both sides, the
constant, and the weight exponent actually used; assertions allow a relative
slack of 1e-9 to absorb floating-point rounding of quantities that are
strictly ordered in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .chains import Chain, GroupHomomorphism, boundary, push_forward

INF = math.inf
ZETA2 = math.pi**2 / 6
REL_SLACK = 1e-9


def leq_with_slack(lhs: float, rhs: float, slack: float = REL_SLACK) -> bool:
    if lhs <= rhs:
        return True
    return lhs - rhs <= slack * max(abs(lhs), abs(rhs))


@dataclass(frozen=True)
class NormParams:
    """A weight degree / integrability exponent pair ``(n, p)``."""

    n: int
    p: float

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("weight degree n must be >= 0")
        if not (self.p >= 1):
            raise ValueError("exponent p must be >= 1")

    @classmethod
    def parse(cls, text: str) -> "NormParams":
        """Parse ``"n:p"``; ``p`` may be ``inf``."""
        n_text, _, p_text = text.partition(":")
        p = INF if p_text.strip() in ("inf", "oo") else float(Fraction(p_text))
        return cls(int(n_text), p)

    def label(self) -> str:
        p = "inf" if self.p == INF else f"{self.p:g}"
        return f"{self.n}:{p}"


def _weight(diam: int, n: int) -> int:
    # 0^0 := 1 so that n = 0 is the plain lp norm.
    return 1 if n == 0 else diam**n


def _exponent_as_int(p) -> Optional[int]:
    if isinstance(p, int):
        return p
    if isinstance(p, Fraction) and p.denominator == 1:
        return p.numerator
    if isinstance(p, float) and p != INF and p.is_integer():
        return int(p)
    return None


def diameter_map(chain: Chain) -> dict:
    """Diameter of every support simplex, computed once for reuse."""
    diam = chain.model.diameter
    return {s: diam(s) for s in chain._numer}


def weighted_power_sum(chain: Chain, n: int, p: int,
                       diameters: Optional[dict] = None) -> Fraction:
    """Exact value of Σ |a_g|^p · diam(g)^n for an integer exponent p."""
    if p < 1:
        raise ValueError("integer exponent must be >= 1")
    diam = chain.model.diameter
    denom = chain._denom
    total = 0
    if diameters is None:
        for s, num in chain._numer.items():
            total += abs(num) ** p * _weight(diam(s), n)
    else:
        for s, num in chain._numer.items():
            total += abs(num) ** p * _weight(diameters[s], n)
    return Fraction(total, denom**p)


def weighted_norm(chain: Chain, n: int, p,
                  diameters: Optional[dict] = None) -> float:
    """The (n, p)-weighted norm of ``chain`` as a float.

    ``diameters`` may carry precomputed simplex diameters when several
    norms of the same chain are evaluated.
    """
    if not chain:
        return 0.0
    if p == INF:
        diam = chain.model.diameter
        inv_denom = 1.0 / chain._denom
        best = 0.0
        for s, num in chain._numer.items():
            d = diameters[s] if diameters is not None else diam(s)
            value = abs(num) * inv_denom * _weight(d, n)
            if value > best:
                best = value
        return best
    p_int = _exponent_as_int(p)
    if p_int is not None:
        total = weighted_power_sum(chain, n, p_int, diameters)
        return float(total) ** (1.0 / p_int)
    p = float(p)
    if p < 1:
        raise ValueError("exponent p must be >= 1")
    diam = chain.model.diameter
    inv_denom = 1.0 / chain._denom
    terms = (
        (abs(num) * inv_denom) ** p
        * _weight(diameters[s] if diameters is not None else diam(s), n)
        for s, num in chain._numer.items()
    )
    return math.fsum(terms) ** (1.0 / p)


def frechet_seminorm(chain: Chain, n: int, p) -> float:
    """‖c‖_{n,p} + ‖∂c‖_{n,p}; the boundary term is zero in degree 0."""
    value = weighted_norm(chain, n, p)
    if chain.degree >= 1:
        value += weighted_norm(boundary(chain), n, p)
    return value


# -- comparison of exponents ---------------------------------------------------


@dataclass(frozen=True)
class ContractivityReport:
    """Both sides of the p<q contraction and of the sup-norm comparison."""

    norm_p: float
    norm_q: float
    norm_sup: float
    norm_ceil: float
    ceil_exponent: int
    ok: bool

    def as_dict(self) -> dict:
        return {
            "lhs": self.norm_q,
            "rhs": self.norm_p,
            "constant": 1.0,
            "exponent_m": self.ceil_exponent,
            "ok": self.ok,
        }


def check_contractivity(chain: Chain, n: int, p, q) -> ContractivityReport:
    """Verify ‖c‖_{n,q} <= ‖c‖_{n,p} for finite q > p, together with the
    sup-norm comparison ‖c‖_{n,∞} <= ‖c‖_{⌈np⌉,p}.

    The first inequality does not extend to q = ∞ at fixed weight degree
    (the sup picks up the full weight diamⁿ while the p-norm only sees
    diam^{n/p} per term); with q = ∞ only the shifted comparison applies.
    """
    if not p < q:
        raise ValueError(f"need p < q, got p={p}, q={q}")
    diams = diameter_map(chain)
    norm_p = weighted_norm(chain, n, p, diams)
    m = math.ceil(n * Fraction(p))
    norm_sup = weighted_norm(chain, n, INF, diams)
    norm_ceil = weighted_norm(chain, m, p, diams)
    ok_sup = leq_with_slack(norm_sup, norm_ceil)
    if q == INF:
        norm_q = norm_sup
        ok = ok_sup
    else:
        norm_q = weighted_norm(chain, n, q, diams)
        ok = leq_with_slack(norm_q, norm_p) and ok_sup
    return ContractivityReport(norm_p, norm_q, norm_sup, norm_ceil, m, ok)


def comparison_exponent(k: int, n: int, p, q, growth_degree: int) -> int:
    """Weight shift making the (m, q) norm dominate the (n, p) norm on a
    model of polynomial growth degree ``growth_degree`` (exact ceiling)."""
    p = Fraction(p)
    if not 1 <= p:
        raise ValueError("need p >= 1")
    if q == INF:
        return math.ceil((k * growth_degree + n + 2) / p)
    q = Fraction(q)
    if not p < q:
        raise ValueError(f"need p < q, got p={p}, q={q}")
    inner = (k * growth_degree + 2) * (1 / p - 1 / q) + Fraction(n) / p
    return math.ceil(q * inner)


@dataclass(frozen=True)
class InequalityReport:
    lhs: float
    rhs: float
    constant: float
    exponent_m: Optional[int]
    ok: bool
    extras: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs else (0.0 if not self.lhs else INF)

    def as_dict(self) -> dict:
        out = {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "constant": self.constant,
            "exponent_m": self.exponent_m,
            "ok": self.ok,
        }
        out.update(self.extras)
        return out


def verify_comparison(chain: Chain, n: int, p, q, growth_degree: int,
                      growth_constant) -> InequalityReport:
    """Check ‖c‖_{n,p} <= (K^k ζ(2))^{1/q'} · ‖c‖_{m,q} on a polynomial-growth
    model, where 1/q' = 1/p − 1/q (q' = p when q = ∞) and m is the comparison
    exponent.  The bound is a theorem given a valid growth certificate, so a
    violation indicates an implementation bug."""
    k = chain.degree
    m = comparison_exponent(k, n, p, q, growth_degree)
    if q == INF:
        q_prime = float(p)
    else:
        q_prime = 1.0 / (1.0 / float(p) - 1.0 / float(q))
    constant = (float(growth_constant) ** k * ZETA2) ** (1.0 / q_prime)
    diams = diameter_map(chain)
    lhs = weighted_norm(chain, n, p, diams)
    rhs = constant * weighted_norm(chain, m, q, diams)
    return InequalityReport(lhs, rhs, constant, m, leq_with_slack(lhs, rhs))


# -- push-forward norm lemma ---------------------------------------------------


@dataclass(frozen=True)
class FiberedFamily:
    """A finite indexed family with a projection of controlled fiber sizes.

    ``fiber_bound[i]`` must dominate the size of the fiber through ``i``;
    this hypothesis is checked at construction.
    """

    index: tuple
    projection: dict
    values: dict
    fiber_bound: dict

    def __post_init__(self):
        sizes: dict = {}
        for i in self.index:
            sizes[self.projection[i]] = sizes.get(self.projection[i], 0) + 1
        for i in self.index:
            if sizes[self.projection[i]] > self.fiber_bound[i]:
                raise ValueError(
                    f"fiber through {i!r} has size {sizes[self.projection[i]]}, "
                    f"exceeding the declared bound {self.fiber_bound[i]}"
                )

    def pushforward(self, values: Optional[dict] = None) -> dict:
        values = self.values if values is None else values
        out: dict = {}
        for i in self.index:
            j = self.projection[i]
            out[j] = out.get(j, Fraction(0)) + values[i]
        return out


def _lp_of_values(values: Iterable[Fraction], p) -> float:
    values = list(values)
    if not values:
        return 0.0
    if p == INF:
        return float(max(abs(v) for v in values))
    p_int = _exponent_as_int(p)
    if p_int is not None:
        return float(sum(abs(v) ** p_int for v in values)) ** (1.0 / p_int)
    p = float(p)
    return math.fsum(float(abs(v)) ** p for v in values) ** (1.0 / p)


def fibered_pushforward_norm(family: FiberedFamily, p) -> float:
    """lp norm of the fiberwise coefficient sums (exact sums, rooted once)."""
    return _lp_of_values(family.pushforward().values(), p)


def pushforward_norm_bound(family: FiberedFamily, p) -> InequalityReport:
    """Check ‖π_* f‖_p <= (Σ β(i)^p |f(i)|^p)^{1/p}."""
    lhs = fibered_pushforward_norm(family, p)
    p_int = _exponent_as_int(p)
    if p_int is not None:
        total = sum(
            family.fiber_bound[i] ** p_int * abs(family.values[i]) ** p_int
            for i in family.index
        )
        rhs = float(total) ** (1.0 / p_int)
    else:
        pf = float(p)
        rhs = math.fsum(
            family.fiber_bound[i] ** pf * float(abs(family.values[i])) ** pf
            for i in family.index
        ) ** (1.0 / pf)
    return InequalityReport(lhs, rhs, 1.0, None, leq_with_slack(lhs, rhs))


def pushforward_holder_bound(family: FiberedFamily, weights: dict,
                             p, q) -> InequalityReport:
    """Check the generalized Hölder bound ‖π_*(f·w)‖_p <= ‖π_*f‖_q ‖π_*w‖_{q'}
    with 1/q + 1/q' = 1/p."""
    if not p < q:
        raise ValueError(f"need p < q, got p={p}, q={q}")
    q_prime = 1.0 / (1.0 / float(p) - 1.0 / float(q)) if q != INF else float(p)
    product = {i: family.values[i] * weights[i] for i in family.index}
    lhs = _lp_of_values(family.pushforward(product).values(), p)
    factor_q = fibered_pushforward_norm(family, q)
    factor_qp = _lp_of_values(family.pushforward(weights).values(), q_prime)
    rhs = factor_q * factor_qp
    return InequalityReport(
        lhs, rhs, 1.0, None, leq_with_slack(lhs, rhs),
        extras={"factor_q": factor_q, "factor_qprime": factor_qp},
    )


# -- functoriality estimates ---------------------------------------------------


@dataclass(frozen=True)
class PushforwardReport:
    lhs: float
    rhs: float
    constant: float
    exponent_m: int
    ok: bool
    exact: bool
    ratio_primary: float
    ratio_alternate: float

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "constant": self.constant,
            "exponent_m": self.exponent_m,
            "ok": self.ok,
            "exact": self.exact,
            "ratio_primary": self.ratio_primary,
            "ratio_alternate": self.ratio_alternate,
        }


def verify_pushforward_estimate(hom: GroupHomomorphism, chain: Chain,
                                n: int, p) -> PushforwardReport:
    """Check the norm estimate for the chain map induced by ``hom``.

    Regimes: ``p = 1`` gives ‖φ(c)‖_{n,1} <= ‖c‖_{n,1}, verified in exact
    rational arithmetic; ``1 < p < ∞`` uses the weight shift
    m = ⌈(kD+2)(p−1)⌉.  There the one-line constant
    (2^{m/(p-1)} K^k ζ(2))^{1/(p-1)} and the constant (…)^{p-1} produced by
    tracking the Hölder exponents disagree; the verifier asserts with the
    larger of the two and reports the ratio against each.  ``p = ∞`` uses
    m = kD+2 and the constant 2^m K^k ζ(2).
    """
    cert = hom.kernel_control
    if cert is None:
        raise ValueError("homomorphism carries no kernel-control certificate")
    if not hom.is_metric_compatible():
        raise ValueError("generator images must have word length <= 1")
    if chain.model != hom.source:
        raise ValueError("chain does not live over the homomorphism source")
    k = chain.degree
    kd2 = k * cert.degree + 2
    big_k = float(cert.constant) ** k
    image = push_forward(hom, chain)

    if p == 1:
        lhs_exact = weighted_power_sum(image, n, 1)
        rhs_exact = weighted_power_sum(chain, n, 1)
        lhs, rhs = float(lhs_exact), float(rhs_exact)
        ok = lhs_exact <= rhs_exact
        ratio = lhs / rhs if rhs else (0.0 if not lhs else INF)
        return PushforwardReport(lhs, rhs, 1.0, 0, ok, True, ratio, ratio)

    if p == INF:
        m = kd2
        constant = 2.0**m * big_k * ZETA2
        lhs = weighted_norm(image, n, INF)
        rhs = constant * weighted_norm(chain, m + n, INF)
        ok = leq_with_slack(lhs, rhs)
        ratio = lhs / rhs if rhs else (0.0 if not lhs else INF)
        return PushforwardReport(lhs, rhs, constant, m, ok, False, ratio, ratio)

    p_frac = Fraction(p)
    if not p_frac > 1:
        raise ValueError(f"exponent must be 1, in (1, inf), or inf; got {p}")
    m = math.ceil(kd2 * (p_frac - 1))
    pm1 = float(p_frac) - 1.0
    base = 2.0 ** (m / pm1) * big_k * ZETA2
    candidate_hoelder = base**pm1
    candidate_literal = base ** (1.0 / pm1)
    constant = max(candidate_hoelder, candidate_literal)
    pf = float(p_frac)
    source_norm = weighted_norm(chain, m + n, p)
    lhs = weighted_norm(image, n, p)
    rhs = constant ** (1.0 / pf) * source_norm
    ok = leq_with_slack(lhs, rhs)

    def ratio_for(c: float) -> float:
        bound = c ** (1.0 / pf) * source_norm
        if bound:
            return lhs / bound
        return 0.0 if not lhs else INF

    return PushforwardReport(
        lhs, rhs, constant, m, ok, False,
        ratio_for(candidate_hoelder), ratio_for(candidate_literal),
    )
