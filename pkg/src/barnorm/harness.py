"""Deterministic experiment suites behind the command-line interface.

Every suite is a pure function of its configuration: random chains are
generated from an explicit seed via ``random.Random``, rows are emitted in
trial order, and all reported numbers derive from exact arithmetic or
order-independent float summation — two runs with the same configuration
produce identical rows.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .chains import (
    Chain,
    GroupHomomorphism,
    KernelControl,
    boundary,
    identity_homomorphism,
    kernel_control_constant,
)
from .diffusion import AnnuliConfig, DiffusionOperator
from .groups import DEFAULT_ENUM_CAP, FreeAbelian, FreeGroup, Cyclic, growth_constant, parse_model
from .norms import (
    INF,
    check_contractivity,
    verify_comparison,
    verify_pushforward_estimate,
)
from .vanishing import VanishingConstruction


@dataclass(frozen=True)
class RandomChainSpec:
    """Shape of a randomly generated chain.

    Support simplices are sampled uniformly from vertex tuples over the ball
    of the given radius, except that the all-identity tuple is excluded: its
    diameter-zero weight makes the weight-shifted norm estimates vacuously
    false at weight degree 0, matching their derivations, which treat that
    basis element separately.  ``max_diameter`` optionally rejects simplices
    whose diameter exceeds the bound (keeps diffusion annuli enumerable).
    Coefficients are uniform nonzero fractions with numerator in
    ``[-numerator_max, numerator_max]`` and denominator in
    ``[1, denominator_max]``.
    """

    degree: int
    support: int
    radius: int
    numerator_max: int = 5
    denominator_max: int = 4
    max_diameter: Optional[int] = None

    def __post_init__(self):
        if self.degree < 0 or self.support < 0 or self.radius < 0:
            raise ValueError("degree, support and radius must be >= 0")
        if self.numerator_max < 1 or self.denominator_max < 1:
            raise ValueError("coefficient ranges must be >= 1")


def random_chain(model, spec: RandomChainSpec, rng: random.Random,
                 cap: int = DEFAULT_ENUM_CAP) -> Chain:
    """A chain matching ``spec``, a pure function of the rng state."""
    ball = model.ball(spec.radius, cap)
    identity = model.identity
    diam = model.diameter
    chosen: dict = {}
    attempts = 0
    limit = 1000 * (spec.support + 1)
    while len(chosen) < spec.support:
        attempts += 1
        if attempts > limit:
            raise ValueError(
                f"could not draw {spec.support} distinct simplices "
                f"(degree {spec.degree}, radius {spec.radius})"
            )
        simplex = tuple(ball[rng.randrange(len(ball))] for _ in range(spec.degree))
        if all(v == identity for v in simplex):
            continue
        if spec.max_diameter is not None and diam(simplex) > spec.max_diameter:
            continue
        if simplex in chosen:
            continue
        numerator = rng.randint(1, spec.numerator_max) * rng.choice((1, -1))
        denominator = rng.randint(1, spec.denominator_max)
        chosen[simplex] = Fraction(numerator, denominator)
    return Chain.from_terms(model, spec.degree, chosen.items())


# -- shipped example homomorphisms --------------------------------------------


def _hom_abelian2_to_z() -> GroupHomomorphism:
    hom = GroupHomomorphism(FreeAbelian(2), FreeAbelian(1), [(1,), (0,)])
    constant = kernel_control_constant(hom, 1, 10)
    return GroupHomomorphism(
        hom.source, hom.target, hom.images,
        KernelControl(1, constant, 10),
    )


def _hom_z_to_cyclic5() -> GroupHomomorphism:
    hom = GroupHomomorphism(FreeAbelian(1), Cyclic(5), [1])
    constant = kernel_control_constant(hom, 1, 10)
    return GroupHomomorphism(
        hom.source, hom.target, hom.images,
        KernelControl(1, constant, 10),
    )


EXAMPLE_HOMOMORPHISMS = {
    "abelian2-to-z": _hom_abelian2_to_z,
    "z-to-cyclic5": _hom_z_to_cyclic5,
    "free2-identity": lambda: identity_homomorphism(FreeGroup(2)),
}


def example_homomorphism(name: str) -> GroupHomomorphism:
    try:
        factory = EXAMPLE_HOMOMORPHISMS[name]
    except KeyError:
        known = ", ".join(sorted(EXAMPLE_HOMOMORPHISMS))
        raise ValueError(f"unknown homomorphism {name!r} (known: {known})") from None
    return factory()


# -- suites ------------------------------------------------------------------

GROWTH_SCHEMA = ("r", "sphere_size", "ball_size", "ratio")


def run_growth(model_desc: str, degree: int, r_max: int):
    model = parse_model(model_desc)
    constant = growth_constant(model, degree, r_max)
    rows = []
    for r in range(1, r_max + 1):
        ball = model.ball_size(r)
        rows.append({
            "r": r,
            "sphere_size": model.sphere_size(r),
            "ball_size": ball,
            "ratio": Fraction(ball, r**degree),
        })
    return rows, 0, {"constant": constant, "degree": degree}


CONTRACTIVITY_SCHEMA = (
    "trial", "k", "n", "p", "q", "norm_p", "norm_q",
    "ceil_m", "norm_sup", "norm_ceil", "ok",
)


def run_contractivity(model_desc: str, k: int, n: int, p, q,
                      trials: int, seed: int, radius: int = 3,
                      support: int = 8):
    model = parse_model(model_desc)
    spec = RandomChainSpec(degree=k, support=support, radius=radius)
    rng = random.Random(seed)
    rows = []
    violations = 0
    for trial in range(trials):
        chain = random_chain(model, spec, rng)
        report = check_contractivity(chain, n, p, q)
        violations += not report.ok
        rows.append({
            "trial": trial, "k": k, "n": n, "p": p, "q": q,
            "norm_p": report.norm_p, "norm_q": report.norm_q,
            "ceil_m": report.ceil_exponent,
            "norm_sup": report.norm_sup, "norm_ceil": report.norm_ceil,
            "ok": report.ok,
        })
    return rows, violations, {}


COMPARE_SCHEMA = (
    "trial", "k", "n", "p", "q", "m", "constant", "lhs", "rhs", "ratio", "ok",
)


def run_compare(model_desc: str, growth_degree: int, k: int, n: int, p, q,
                trials: int, seed: int, radius: int = 8, support: int = 10,
                constant_r_max: int = 10):
    model = parse_model(model_desc)
    constant = growth_constant(model, growth_degree, constant_r_max)
    spec = RandomChainSpec(degree=k, support=support, radius=radius)
    rng = random.Random(seed)
    rows = []
    violations = 0
    for trial in range(trials):
        chain = random_chain(model, spec, rng)
        report = verify_comparison(chain, n, p, q, growth_degree, constant)
        violations += not report.ok
        rows.append({
            "trial": trial, "k": k, "n": n, "p": p, "q": q,
            "m": report.exponent_m, "constant": report.constant,
            "lhs": report.lhs, "rhs": report.rhs, "ratio": report.ratio,
            "ok": report.ok,
        })
    return rows, violations, {"growth_constant": constant}


PUSHFORWARD_SCHEMA = (
    "trial", "hom", "k", "n", "p", "m", "constant", "lhs", "rhs",
    "exact", "ratio_primary", "ratio_alternate", "ok",
)


def run_pushforward(hom_name: str, k: int, n: int, p, trials: int, seed: int,
                    radius: int = 6, support: int = 8):
    hom = example_homomorphism(hom_name)
    spec = RandomChainSpec(degree=k, support=support, radius=radius)
    rng = random.Random(seed)
    rows = []
    violations = 0
    for trial in range(trials):
        chain = random_chain(hom.source, spec, rng)
        report = verify_pushforward_estimate(hom, chain, n, p)
        violations += not report.ok
        rows.append({
            "trial": trial, "hom": hom_name, "k": k, "n": n, "p": p,
            "m": report.exponent_m, "constant": report.constant,
            "lhs": report.lhs, "rhs": report.rhs, "exact": report.exact,
            "ratio_primary": report.ratio_primary,
            "ratio_alternate": report.ratio_alternate,
            "ok": report.ok,
        })
    return rows, violations, {"kernel_control": hom.kernel_control}


DIFFUSE_SCHEMA = (
    "trial", "degree", "N", "conforming", "n", "p", "q", "ratio_m",
    "support", "cone_support", "homotopy_exact", "bound_lhs", "bound_rhs",
    "bound_ok", "ratio_map", "ratio_cone", "ratio_boundary_cone", "ok",
)


def run_diffuse(model_desc: str, annuli_degree: int, degree: int, n: int, p, q,
                trials: int, seed: int, radius: int = 2, support: int = 3,
                ratio_m: Optional[int] = None, cap: int = DEFAULT_ENUM_CAP,
                max_diameter: Optional[int] = None,
                input_chain: Optional[Chain] = None):
    """Homotopy-identity and explicit-bound checks for the cone operator.

    When ``input_chain`` is given it is used as the single trial; otherwise
    ``trials`` random chains are drawn.  The homotopy identity is verified
    by comparing the fused chain map against the freshly composed boundary
    and cone operators, in exact arithmetic.
    """
    model = parse_model(model_desc)
    operator = DiffusionOperator(
        model, AnnuliConfig(degree=annuli_degree, element_cap=cap)
    )
    if ratio_m is None:
        ratio_m = annuli_degree * n
    if max_diameter is None:
        max_diameter = radius
    spec = RandomChainSpec(
        degree=degree, support=support, radius=radius,
        max_diameter=max_diameter,
    )
    rng = random.Random(seed)
    rows = []
    violations = 0
    last_cone = None
    for trial in range(trials if input_chain is None else 1):
        if input_chain is not None:
            chain = input_chain
        else:
            chain = random_chain(model, spec, rng, cap)
        mapped = operator.chain_map(chain)
        coned = operator.cone(chain)
        last_cone = coned
        d_chain = boundary(chain) if chain.degree >= 1 else Chain.zero(model, 0)
        rhs = boundary(coned)
        if d_chain:
            rhs = rhs + operator.cone(d_chain)
        homotopy_exact = (chain - mapped) == rhs
        report = operator.estimate_report(chain, n, p, q, ratio_m)
        ok = homotopy_exact and report.bound_ok
        violations += not ok
        rows.append({
            "trial": trial, "degree": chain.degree, "N": annuli_degree,
            "conforming": report.conforming, "n": n, "p": p, "q": q,
            "ratio_m": ratio_m, "support": len(chain),
            "cone_support": len(coned),
            "homotopy_exact": homotopy_exact,
            "bound_lhs": report.bound_lhs, "bound_rhs": report.bound_rhs,
            "bound_ok": report.bound_ok,
            "ratio_map": report.ratio_map, "ratio_cone": report.ratio_cone,
            "ratio_boundary_cone": report.ratio_boundary_cone,
            "ok": ok,
        })
    return rows, violations, {"last_cone": last_cone}


F2_LEVELS_SCHEMA = ("level", "words", "max_word_length", "markers_injective")
F2_DECAY_SCHEMA = (
    "level", "n", "p", "increment_norm", "tail_norm", "envelope",
    "decreasing_from", "telescoping_ok",
)


def run_f2(levels: int, norm_params: Iterable[tuple[int, float]]):
    construction = VanishingConstruction(max_level=max(levels + 1, 1))
    level_rows = []
    for d in range(levels + 1):
        data = construction.level(d)
        level_rows.append({
            "level": d,
            "words": len(data.words),
            "max_word_length": max(len(w) for w in data.words),
            "markers_injective": len(set(data.markers.values())) == len(data.words),
        })
    telescoping_ok = True
    try:
        for d in range(levels):
            construction.boundary_tail(d)
    except AssertionError:
        telescoping_ok = False
    decay_rows = []
    if levels >= 1:
        for row in construction.decay_table(levels, norm_params):
            record = row.as_dict()
            record["telescoping_ok"] = telescoping_ok
            decay_rows.append(record)
    violations = int(not telescoping_ok)
    violations += sum(0 if r["markers_injective"] else 1 for r in level_rows)
    return level_rows, decay_rows, violations


# -- the aggregate suite -------------------------------------------------------


def run_all(seed: int, cap: int = DEFAULT_ENUM_CAP) -> dict:
    """Every asserted suite at a small deterministic scale.

    Returns ``{name: (schema, rows, violations)}``; any nonzero violation
    count marks the aggregate run as failed.
    """
    out = {}

    rows, violations, _ = run_growth("abelian:2", 2, 10)
    out["growth"] = (GROWTH_SCHEMA, rows, violations)

    rows, violations, _ = run_contractivity(
        "free:2", k=1, n=1, p=2, q=4, trials=25, seed=seed, radius=3,
    )
    out["norms"] = (CONTRACTIVITY_SCHEMA, rows, violations)

    all_rows = []
    total = 0
    for model_desc, growth_degree, q in (
        ("abelian:1", 1, 4), ("abelian:1", 1, INF), ("abelian:2", 2, 4),
    ):
        rows, violations, _ = run_compare(
            model_desc, growth_degree, k=1, n=1, p=2, q=q,
            trials=10, seed=seed, radius=6, support=6,
        )
        all_rows.extend(rows)
        total += violations
    out["compare-pq"] = (COMPARE_SCHEMA, all_rows, total)

    all_rows = []
    total = 0
    for hom_name in ("abelian2-to-z", "z-to-cyclic5"):
        for p in (1, 2, INF):
            rows, violations, _ = run_pushforward(
                hom_name, k=1, n=1, p=p, trials=10, seed=seed, radius=6,
            )
            all_rows.extend(rows)
            total += violations
    out["pushforward"] = (PUSHFORWARD_SCHEMA, all_rows, total)

    all_rows = []
    total = 0
    for model_desc, degree in (("free:2", 1), ("free:2", 2), ("abelian:2", 2)):
        rows, violations, _ = run_diffuse(
            model_desc, annuli_degree=2, degree=degree, n=1, p=2, q=4,
            trials=8, seed=seed, radius=2, support=3, cap=cap,
        )
        all_rows.extend(rows)
        total += violations
    out["diffuse"] = (DIFFUSE_SCHEMA, all_rows, total)

    level_rows, decay_rows, violations = run_f2(4, [(0, 3), (0, 2)])
    out["f2-levels"] = (F2_LEVELS_SCHEMA, level_rows, violations)
    out["f2-decay"] = (F2_DECAY_SCHEMA, decay_rows, 0)

    return out
