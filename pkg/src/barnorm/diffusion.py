"""Diffusion annuli, the averaging cone operator, and the induced chain map.

For a fixed degree ``N`` the annulus of index ``r`` is the set of group
elements whose word length lies in ``(r**N - r**(N/10), r**N]``.  A basis
simplex is coned over the annulus indexed by its diameter, with the cone
coefficient averaged over the annulus:

    [e, g1, …, gk]  ↦  1/|Z| · Σ_{z in Z} [z, e, g1, …, gk],

where each cone ``[z, e, g1, …, gk]`` is re-based at the identity and stored
as ``(z⁻¹, z⁻¹g1, …, z⁻¹gk)``.  Subtracting the boundary round trips gives
the chain map ``id − ∂∘cone − cone∘∂``, chain homotopic to the identity by
construction; the homotopy identity holds in exact rational arithmetic and
exercising it validates boundary, cone, re-basing and signs all at once.

Annulus thresholds: the upper bound ``r**N`` is an exact integer and the
width ``r**(N/10)`` is a real number.  Membership of an integer length ``L``
is decided exactly by comparing tenth powers (``r**N - r**(N/10) < L`` iff
``(r**N - L)**10 < r**N``), which agrees with the real-valued threshold
everywhere, including the integer-width case ``N ≡ 0 (mod 10)``.  The
index-0 annulus is ``{e}`` so that degenerate simplices stay conable; they
carry weight zero in every norm with positive weight degree.

``N`` may be any integer >= 2 so that annuli stay enumerable at desk scale;
reports flag runs with ``N <= 10`` as outside the regime where the
asymptotic estimates are proved.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from itertools import repeat
from math import inf, lcm

from .chains import Chain, boundary
from .errors import EmptyAnnulus, EnumerationTooLarge
from .groups import DEFAULT_ENUM_CAP, GroupModel
from .norms import INF, diameter_map, leq_with_slack, weighted_norm


@dataclass(frozen=True)
class AnnuliConfig:
    """Degree and enumeration cap for a diffusion annuli map."""

    degree: int = 100
    element_cap: int = DEFAULT_ENUM_CAP

    def __post_init__(self):
        if self.degree < 2:
            raise ValueError(f"annuli degree must be >= 2, got {self.degree}")
        if self.element_cap < 1:
            raise ValueError("element cap must be positive")

    @property
    def conforming(self) -> bool:
        """Whether the degree sits in the proven regime (N > 10)."""
        return self.degree > 10


class DiffusionOperator:
    """Deterministic diffusion cone operator for one model and one config.

    Annuli are memoized per radius behind a lock (read-mostly, single-writer
    fill); all chain-level operations are pure.
    """

    def __init__(self, model: GroupModel, config: AnnuliConfig):
        self.model = model
        self.config = config
        self._annuli: dict[int, tuple] = {}
        self._annuli_inv: dict[int, tuple] = {}
        self._lock = threading.Lock()

    # -- annuli ------------------------------------------------------------

    def _max_shell_width(self, r: int) -> int:
        """Largest integer d with d**10 < r**N, i.e. the number of word
        lengths below r**N that still meet the annulus condition."""
        hi = r**self.config.degree
        d = int(round(hi**0.1))
        while d**10 >= hi:
            d -= 1
        while (d + 1) ** 10 < hi:
            d += 1
        return d

    def annulus_lengths(self, r: int) -> range:
        """Word lengths belonging to the annulus of index ``r >= 1``."""
        hi = r**self.config.degree
        return range(hi - self._max_shell_width(r), hi + 1)

    def annulus_size_bound(self, r: int):
        """Exact element count of the annulus, without enumeration."""
        if r == 0:
            return 1
        total = 0
        for length in self.annulus_lengths(r):
            size = self.model.sphere_size(length)
            if size == inf:
                return inf
            total += size
        return total

    def annulus(self, r: int) -> tuple:
        """The memoized annulus of index ``r`` (``{e}`` for ``r = 0``)."""
        cached = self._annuli.get(r)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._annuli.get(r)
            if cached is not None:
                return cached
            if r == 0:
                elements = (self.model.identity,)
            else:
                bound = self.annulus_size_bound(r)
                cap = self.config.element_cap
                if bound > cap:
                    raise EnumerationTooLarge(
                        f"annulus(r={r}, N={self.config.degree}) "
                        f"of {self.model.describe()}",
                        bound, cap,
                    )
                out = []
                for length in self.annulus_lengths(r):
                    out.extend(self.model.iter_sphere(length))
                elements = tuple(out)
            self._annuli[r] = elements
            inv = self.model.inverse
            self._annuli_inv[r] = tuple(inv(z) for z in elements)
            return elements

    def _annulus_inverses(self, r: int) -> tuple:
        self.annulus(r)
        return self._annuli_inv[r]

    def check_annuli_disjoint(self, radii) -> None:
        """Verify that the annuli for the given indices are pairwise disjoint
        (exact interval comparison; no enumeration)."""
        radii = sorted(set(radii) - {0})
        n = self.config.degree
        for r1, r2 in zip(radii, radii[1:]):
            gap = r2**n - r1**n
            # need r2**(n/10) <= gap, i.e. the r2 shell starts above r1**n
            if gap < 0 or gap**10 < r2**n:
                raise RuntimeError(
                    f"annuli for r={r1} and r={r2} overlap at N={n}"
                )

    # -- operators -----------------------------------------------------------

    def cone(self, chain: Chain) -> Chain:
        """Average each basis simplex over its annulus of cone points."""
        if chain.model != self.model:
            raise ValueError("chain does not live over the operator's model")
        model = self.model
        degree = chain.degree
        if chain.is_zero():
            return Chain.zero(model, degree + 1)
        diam = model.diameter
        by_radius: dict[int, list] = {}
        for s, num in chain._numer.items():
            by_radius.setdefault(diam(s), []).append((s, num))
        radii = sorted(by_radius)
        self.check_annuli_disjoint(radii)
        sizes = {}
        for r in radii:
            size = len(self.annulus(r))
            if size == 0:
                raise EmptyAnnulus(
                    f"annulus(r={r}, N={self.config.degree}) of "
                    f"{model.describe()} is empty"
                )
            sizes[r] = size
        common = 1
        for size in sizes.values():
            common = lcm(common, size)
        # Distinct cone points give distinct first vertices after re-basing
        # and equal cone points force equal sources, so cone output keys
        # never collide; the dict can be assembled without accumulation.
        out: dict[tuple, int] = {}
        translate = model.left_multiply_all
        expected = 0
        for r in radii:
            zinv = self._annulus_inverses(r)
            scale = common // sizes[r]
            expected += sizes[r] * len(by_radius[r])
            for s, num in by_radius[r]:
                value = num * scale
                translated = [translate(zinv, v) for v in s]
                out.update(zip(zip(zinv, *translated), repeat(value)))
        if len(out) != expected:
            raise AssertionError(
                "cone outputs collided; the accumulation control is broken"
            )
        return Chain._raw(model, degree + 1, chain._denom * common, out)

    def chain_map(self, chain: Chain) -> Chain:
        """id − ∂∘cone − cone∘∂, computed exactly.

        Expanding the boundary of a cone ``[e, z⁻¹, z⁻¹g1, …, z⁻¹gk]``, the
        re-based 0th face is the original simplex, so averaging over the
        annulus cancels the identity term symbolically:

            c − ∂(cone c) = Σ_g a_g/|Z| · Σ_z ( [e, t1, …, tk]
                            − Σ_{j=1..k} (−1)^{j+1} [e, z⁻¹, t1, …, t̂j, …, tk] )

        with ``tj = z⁻¹ gj``.  This pass skips the inverse/re-base work of a
        generic boundary; the equality with the operator composition is what
        the homotopy-identity tests exercise.
        """
        if chain.model != self.model:
            raise ValueError("chain does not live over the operator's model")
        degree = chain.degree
        if chain.is_zero():
            return chain
        if degree == 0:
            # ∂(cone c) is the boundary of a degree-1 chain, which vanishes,
            # and there is no cone∘∂ term.
            return chain
        model = self.model
        diam = model.diameter
        mul = model.multiply
        inv = model.inverse

        # First pass: per source, its faces with merged boundary signs.
        # A face of the same diameter as its source contributes the same
        # keys to −∂∘cone (the omitted-vertex terms) and to −cone∘∂ (its
        # own cone) with opposite signs, so the pair is dropped outright;
        # only the re-based face and faces of differing diameter survive.
        sources = []  # (simplex, num, radius, kept_faces, cone_jobs)
        radii_needed = set()
        for s, num in chain._numer.items():
            r_s = diam(s)
            radii_needed.add(r_s)
            merged: dict[tuple, list] = {}
            sign = -1
            for j in range(degree):
                face = s[:j] + s[j + 1 :]
                entry = merged.get(face)
                if entry is None:
                    merged[face] = [sign, j]
                else:
                    entry[0] += sign
                sign = -sign
            kept_faces = []  # (face, sigma, omit_index) with sigma != 0
            cone_jobs = []   # (face, numerator multiple, face radius)
            for face, (sigma, j) in merged.items():
                if not sigma:
                    continue
                r_f = diam(face)
                if r_f == r_s:
                    continue
                radii_needed.add(r_f)
                kept_faces.append((face, sigma, j))
                cone_jobs.append((face, -sigma * num, r_f))
            g1_inv = inv(s[0])
            rebased = tuple(mul(g1_inv, v) for v in s[1:])
            r_0 = diam(rebased)
            radii_needed.add(r_0)
            cone_jobs.append((rebased, -num, r_0))
            sources.append((s, num, r_s, kept_faces, cone_jobs))

        self.check_annuli_disjoint(radii_needed)
        sizes = {}
        for r in radii_needed:
            size = len(self.annulus(r))
            if size == 0:
                raise EmptyAnnulus(
                    f"annulus(r={r}, N={self.config.degree}) of "
                    f"{model.describe()} is empty"
                )
            sizes[r] = size
        common = 1
        for size in sizes.values():
            common = lcm(common, size)

        out: dict[tuple, int] = {}
        translate = model.left_multiply_all

        def accumulate(keys, value):
            for key in keys:
                if key in out:
                    out[key] += value
                else:
                    out[key] = value

        for s, num, r_s, kept_faces, cone_jobs in sources:
            zinv = self._annulus_inverses(r_s)
            value = num * (common // sizes[r_s])
            translated = [translate(zinv, v) for v in s]
            accumulate(zip(*translated), value)
            for _, sigma, j in kept_faces:
                kept = translated[:j] + translated[j + 1 :]
                accumulate(zip(zinv, *kept), sigma * value)
            for face, multiple, r_f in cone_jobs:
                zinv_f = self._annulus_inverses(r_f)
                face_value = multiple * (common // sizes[r_f])
                fts = [translate(zinv_f, v) for v in face]
                accumulate(zip(zinv_f, *fts), face_value)
        return Chain._raw(model, degree, chain._denom * common, out)

    # -- diagnostics -----------------------------------------------------------

    def check_accumulation(self, chain: Chain) -> "AccumulationReport":
        """Exhaustively check, over the coned support of ``chain``, that

        * cones sharing a face that retains the cone point and the identity
          vertex have equal cone point and equal source diameter, and
        * every coned simplex has diameter at most ``2 * r**N`` for the
          source diameter ``r``.

        Returns a report listing violations (expected: none).
        """
        if chain.model != self.model:
            raise ValueError("chain does not live over the operator's model")
        model = self.model
        mul = model.multiply
        inv = model.inverse
        diam = model.diameter
        n_deg = self.config.degree
        violations: list[str] = []
        buckets: dict[tuple, tuple] = {}
        faces_checked = 0
        diam_checked = 0
        for s in chain._numer:
            k = len(s)
            if k == 0:
                continue
            r = diam(s)
            phi_r = 2 * r**n_deg
            for z in self.annulus(r):
                zi = inv(z)
                coned = (zi,) + tuple(mul(zi, v) for v in s)
                diam_checked += 1
                if diam(coned) > phi_r:
                    violations.append(
                        f"coned simplex over {s!r} has diameter "
                        f"{diam(coned)} > {phi_r}"
                    )
                for j in range(1, k + 1):
                    face = coned[:j] + coned[j + 1 :]
                    faces_checked += 1
                    seen = buckets.get(face)
                    if seen is None:
                        buckets[face] = (z, r)
                    elif seen != (z, r):
                        violations.append(
                            f"face {face!r} reached from cone points "
                            f"{seen} and {(z, r)}"
                        )
        return AccumulationReport(
            faces_checked=faces_checked,
            simplices_checked=diam_checked,
            violations=violations,
        )

    def estimate_report(self, chain: Chain, n: int, p, q,
                        ratio_exponent: int) -> "DiffusionReport":
        """Assert the explicit bound ‖cone(c)‖_{n,p} <= 2^{n/p}·‖c‖_{N·n,p}
        (a theorem for every model and every degree) and report, without
        asserting, the smoothing ratios against the (ratio_exponent, q) and
        (ratio_exponent, p) norms of ``c`` and ``∂c``.  The asymptotic
        constants behind those ratios exist only for exponential growth at
        large ``N``, so they are observational here.
        """
        if not p < q:
            raise ValueError(f"need p < q, got p={p}, q={q}")
        model = chain.model
        n_deg = self.config.degree
        coned = self.cone(chain)
        d_coned = boundary(coned)
        if chain.degree >= 1:
            d_chain = boundary(chain)
        else:
            d_chain = Chain.zero(model, 0)
        mapped = chain - d_coned
        if d_chain:
            mapped = mapped - self.cone(d_chain)

        diams_c = diameter_map(chain)
        lhs = weighted_norm(coned, n, p)
        rhs = 2.0 ** (n / float(p)) * weighted_norm(chain, n_deg * n, p, diams_c)
        m = ratio_exponent

        def ratio(value: float, *parts: float) -> float:
            denom = sum(parts)
            if denom:
                return value / denom
            return 0.0 if not value else inf

        base_q = weighted_norm(chain, m, q, diams_c)
        base_p = weighted_norm(chain, m, p, diams_c)
        d_base_q = weighted_norm(d_chain, m, q)
        d_base_p = weighted_norm(d_chain, m, p)
        return DiffusionReport(
            n=n, p=float(p) if p != INF else INF, q=float(q) if q != INF else INF,
            annuli_degree=n_deg,
            conforming=self.config.conforming,
            bound_lhs=lhs, bound_rhs=rhs,
            bound_ok=leq_with_slack(lhs, rhs),
            ratio_map=ratio(weighted_norm(mapped, n, p), base_q, d_base_q),
            ratio_cone=ratio(lhs, base_p, d_base_p),
            ratio_boundary_cone=ratio(weighted_norm(d_coned, n, p), base_p, d_base_p),
        )


@dataclass(frozen=True)
class AccumulationReport:
    faces_checked: int
    simplices_checked: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class DiffusionReport:
    n: int
    p: float
    q: float
    annuli_degree: int
    conforming: bool
    bound_lhs: float
    bound_rhs: float
    bound_ok: bool
    ratio_map: float
    ratio_cone: float
    ratio_boundary_cone: float

    def as_dict(self) -> dict:
        return {
            "lhs": self.bound_lhs,
            "rhs": self.bound_rhs,
            "constant": 2.0 ** (self.n / self.p) if self.p != INF else 1.0,
            "exponent_m": self.annuli_degree * self.n,
            "ok": self.bound_ok,
            "conforming": self.conforming,
            "ratio_map": self.ratio_map,
            "ratio_cone": self.ratio_cone,
            "ratio_boundary_cone": self.ratio_boundary_cone,
        }
