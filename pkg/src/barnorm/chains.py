"""Sparse bar-complex chains, the boundary operator, and push-forwards.

A degree-``k`` simplex ``[e, g1, …, gk]`` is stored as the tuple
``(g1, …, gk)`` of canonical group elements; the first vertex is always the
identity.  Degenerate simplices (repeated vertices, identity vertices) are
legal basis elements and are carried as-is — dropping them would silently
change the boundary operator.

Chains are finitely supported formal sums with exact rational coefficients.
Internally a chain keeps integer numerators over a single positive common
denominator, which keeps the hot accumulation loops in machine-int land;
every coefficient visible through the API is an exact ``Fraction``.  Chains
are immutable values and safe to share across workers.

The boundary convention re-bases the 0th face at the identity:

    ∂[e, g1, …, gk] = [e, g1⁻¹g2, …, g1⁻¹gk]
                      + Σ_{j=1..k} (−1)^j · [e, g1, …, ĝj, …, gk]

so a degree-1 chain maps to zero (both faces re-base to the empty tuple and
cancel) and ∂∂ = 0 holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Iterator, Optional

from .groups import GroupModel


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


class Chain:
    """A finitely supported chain of one degree over one group model."""

    __slots__ = ("model", "degree", "_denom", "_numer")

    def __init__(self, model: GroupModel, degree: int, _denom: int = 1,
                 _numer: Optional[dict] = None):
        if degree < 0:
            raise ValueError(f"degree must be >= 0, got {degree}")
        self.model = model
        self.degree = degree
        numer = _numer if _numer is not None else {}
        if _denom <= 0:
            raise ValueError("internal denominator must be positive")
        # Canonical form: no zero numerators, content coprime to denominator.
        if numer:
            zeros = [s for s, n in numer.items() if not n]
            for s in zeros:
                del numer[s]
        if numer:
            content = _denom
            for n in numer.values():
                content = gcd(content, n)
                if content == 1:
                    break
            if content > 1:
                numer = {s: n // content for s, n in numer.items()}
                _denom //= content
        else:
            _denom = 1
        self._denom = _denom
        self._numer = numer

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, model: GroupModel, degree: int) -> "Chain":
        return cls(model, degree)

    @classmethod
    def single(cls, model: GroupModel, simplex: tuple, coeff=1) -> "Chain":
        return cls.from_terms(model, len(simplex), [(simplex, coeff)])

    @classmethod
    def from_terms(cls, model: GroupModel, degree: int,
                   terms: Iterable[tuple[tuple, object]]) -> "Chain":
        """Build a chain from ``(simplex, coefficient)`` pairs, validating
        degrees and element canonical forms; repeated simplices are summed."""
        coeffs: dict[tuple, Fraction] = {}
        for simplex, value in terms:
            simplex = tuple(simplex)
            if len(simplex) != degree:
                raise ValueError(
                    f"simplex {simplex!r} has degree {len(simplex)}, chain has {degree}"
                )
            for v in simplex:
                model.validate(v)
            coeffs[simplex] = coeffs.get(simplex, Fraction(0)) + _as_fraction(value)
        denom = 1
        for c in coeffs.values():
            denom = lcm(denom, c.denominator)
        numer = {}
        for s, c in coeffs.items():
            n = c.numerator * (denom // c.denominator)
            if n:
                numer[s] = n
        return cls(model, degree, denom, numer)

    @classmethod
    def _raw(cls, model: GroupModel, degree: int, denom: int, numer: dict) -> "Chain":
        """Internal fast path: trusted canonical simplices and int numerators.

        Takes ownership of ``numer``; zero entries are deleted in place.
        """
        return cls(model, degree, denom, numer)

    # -- inspection ----------------------------------------------------------

    def coefficient(self, simplex: tuple) -> Fraction:
        return Fraction(self._numer.get(tuple(simplex), 0), self._denom)

    def terms(self) -> Iterator[tuple[tuple, Fraction]]:
        d = self._denom
        for s, n in self._numer.items():
            yield s, Fraction(n, d)

    def support(self) -> tuple:
        return tuple(self._numer)

    def sorted_support(self) -> list:
        key = self.model.sort_key
        return sorted(self._numer, key=lambda s: tuple(key(v) for v in s))

    def is_zero(self) -> bool:
        return not self._numer

    def coefficient_sum(self) -> Fraction:
        return Fraction(sum(self._numer.values()), self._denom)

    def __len__(self) -> int:
        return len(self._numer)

    def __bool__(self) -> bool:
        return bool(self._numer)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Chain)
            and self.model == other.model
            and self.degree == other.degree
            and self._denom == other._denom
            and self._numer == other._numer
        )

    def __hash__(self):
        raise TypeError("chains are not hashable")

    def __repr__(self):
        if not self._numer:
            return f"<Chain deg={self.degree} 0>"
        parts = []
        for s in self.sorted_support()[:4]:
            word = ",".join(self.model.element_to_str(v) for v in s)
            parts.append(f"{self.coefficient(s)}*[e,{word}]")
        more = " + …" if len(self._numer) > 4 else ""
        return f"<Chain deg={self.degree} {' + '.join(parts)}{more}>"

    # -- linear structure ---------------------------------------------------

    def _check_compatible(self, other: "Chain") -> None:
        if self.model != other.model:
            raise ValueError("chains live over different models")
        if self.degree != other.degree:
            raise ValueError(
                f"degree mismatch: {self.degree} vs {other.degree}"
            )

    def _merge(self, other: "Chain", flip: int) -> "Chain":
        self._check_compatible(other)
        denom = lcm(self._denom, other._denom)
        fa = denom // self._denom
        fb = flip * (denom // other._denom)
        if len(self._numer) * 8 < len(other._numer):
            # base the merge on the big side: a C-level copy (or one
            # scaling comprehension) beats inserting it entry by entry
            if fb == 1:
                numer = dict(other._numer)
            else:
                numer = {s: n * fb for s, n in other._numer.items()}
            small, factor = self._numer, fa
        else:
            if fa == 1:
                numer = dict(self._numer)
            else:
                numer = {s: n * fa for s, n in self._numer.items()}
            small, factor = other._numer, fb
        if factor == 1:
            for s, n in small.items():
                if s in numer:
                    numer[s] += n
                else:
                    numer[s] = n
        else:
            for s, n in small.items():
                if s in numer:
                    numer[s] += n * factor
                else:
                    numer[s] = n * factor
        return Chain._raw(self.model, self.degree, denom, numer)

    def __add__(self, other: "Chain") -> "Chain":
        return self._merge(other, 1)

    def __sub__(self, other: "Chain") -> "Chain":
        return self._merge(other, -1)

    def __neg__(self) -> "Chain":
        return Chain._raw(
            self.model, self.degree, self._denom,
            {s: -n for s, n in self._numer.items()},
        )

    def scale(self, value) -> "Chain":
        q = _as_fraction(value)
        if not q:
            return Chain.zero(self.model, self.degree)
        numer = {s: n * q.numerator for s, n in self._numer.items()}
        return Chain._raw(self.model, self.degree, self._denom * q.denominator, numer)

    def __rmul__(self, value) -> "Chain":
        return self.scale(value)


def boundary(chain: Chain) -> Chain:
    """Alternating face sum with the 0th face re-based at the identity."""
    degree = chain.degree
    if degree == 0:
        raise ValueError("boundary is undefined in degree 0")
    model = chain.model
    if degree == 1:
        # both faces of [e, g] re-base to the empty tuple and cancel
        return Chain.zero(model, 0)
    mul = model.multiply
    inv = model.inverse
    out: dict[tuple, int] = {}
    items = chain._numer.items()
    if degree == 2:
        for (g1, g2), num in items:
            face = (mul(inv(g1), g2),)
            if face in out:
                out[face] += num
            else:
                out[face] = num
            face = (g2,)
            if face in out:
                out[face] -= num
            else:
                out[face] = -num
            face = (g1,)
            if face in out:
                out[face] += num
            else:
                out[face] = num
    elif degree == 3:
        for (g1, g2, g3), num in items:
            g1i = inv(g1)
            for face, value in (
                ((mul(g1i, g2), mul(g1i, g3)), num),
                ((g2, g3), -num),
                ((g1, g3), num),
                ((g1, g2), -num),
            ):
                if face in out:
                    out[face] += value
                else:
                    out[face] = value
    else:
        for simplex, num in items:
            g1_inv = inv(simplex[0])
            face = tuple(mul(g1_inv, v) for v in simplex[1:])
            if face in out:
                out[face] += num
            else:
                out[face] = num
            value = num
            for j in range(1, degree + 1):
                value = -value
                face = simplex[: j - 1] + simplex[j:]
                if face in out:
                    out[face] += value
                else:
                    out[face] = value
    return Chain._raw(model, degree - 1, chain._denom, out)


@dataclass(frozen=True)
class KernelControl:
    """Certificate that ball counts of a homomorphism kernel grow polynomially.

    ``constant`` and ``degree`` assert ``|B_r ∩ ker| <= constant * r**degree``;
    the certificate was checked empirically up to ``radius_checked``.
    """

    degree: int
    constant: Fraction
    radius_checked: int


class GroupHomomorphism:
    """A homomorphism determined by images of the source's positive generators.

    For free sources any images work; abelian, cyclic and product sources have
    their defining relations checked at construction.  An optional
    :class:`KernelControl` certificate is required by the norm-estimate
    verifiers in :mod:`barnorm.norms`.
    """

    def __init__(self, source: GroupModel, target: GroupModel,
                 images: Iterable, kernel_control: Optional[KernelControl] = None):
        self.source = source
        self.target = target
        self.images = tuple(images)
        self.kernel_control = kernel_control
        if len(self.images) != len(source.positive_generators):
            raise ValueError(
                f"need {len(source.positive_generators)} generator images, "
                f"got {len(self.images)}"
            )
        for img in self.images:
            target.validate(img)
        self._check_relations(source, list(range(len(self.images))))
        self._cache: dict = {}

    def _check_relations(self, model: GroupModel, indices: list[int]) -> None:
        kind = model.kind
        if kind == "free":
            return
        if kind == "cyclic":
            img = self.images[indices[0]]
            if self.target.power(img, model.modulus) != self.target.identity:
                raise ValueError(
                    f"image {img!r} violates the order-{model.modulus} relation"
                )
            return
        if kind == "abelian":
            self._check_commuting(indices)
            return
        if kind == "product":
            offset = 0
            for factor in model.factors:
                width = len(factor.positive_generators)
                self._check_relations(factor, indices[offset : offset + width])
                offset += width
            self._check_commuting(indices)
            return
        raise ValueError(f"unsupported source kind {kind!r}")

    def _check_commuting(self, indices: list[int]) -> None:
        mul = self.target.multiply
        for i, a in enumerate(indices):
            for b in indices[i + 1 :]:
                x, y = self.images[a], self.images[b]
                if mul(x, y) != mul(y, x):
                    raise ValueError(
                        f"images {x!r} and {y!r} do not commute; "
                        "homomorphism is not well defined"
                    )

    def apply(self, g):
        cached = self._cache.get(g)
        if cached is not None:
            return cached
        result = self.target.identity
        mul = self.target.multiply
        for idx, exp in self.source.generator_word(g):
            result = mul(result, self.target.power(self.images[idx], exp))
        if len(self._cache) < 1 << 16:
            self._cache[g] = result
        return result

    def is_metric_compatible(self) -> bool:
        """True when every generator image has word length at most 1, so the
        map does not increase word lengths."""
        return all(self.target.word_length(img) <= 1 for img in self.images)

    def __repr__(self):
        return (
            f"<Hom {self.source.describe()} -> {self.target.describe()}>"
        )


def identity_homomorphism(model: GroupModel) -> GroupHomomorphism:
    images = model.positive_generators
    cert = KernelControl(degree=0, constant=Fraction(1), radius_checked=0)
    return GroupHomomorphism(model, model, images, cert)


def push_forward(hom: GroupHomomorphism, chain: Chain) -> Chain:
    """Apply ``hom`` vertex-wise; coefficients of colliding images are summed."""
    if chain.model != hom.source:
        raise ValueError("chain does not live over the homomorphism source")
    apply = hom.apply
    out: dict[tuple, int] = {}
    for simplex, num in chain._numer.items():
        image = tuple(apply(v) for v in simplex)
        out[image] = out.get(image, 0) + num
    return Chain._raw(hom.target, chain.degree, chain._denom, out)


def kernel_ball_count(hom: GroupHomomorphism, radius: int,
                      cap: int = 10_000_000) -> int:
    """Number of source elements of word length <= radius mapping to e."""
    target_id = hom.target.identity
    return sum(1 for g in hom.source.ball(radius, cap) if hom.apply(g) == target_id)


def kernel_control_constant(hom: GroupHomomorphism, degree: int,
                            r_max: int) -> Fraction:
    """Empirical kernel-control constant on ``1 <= r <= r_max`` (exact max)."""
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    best = Fraction(0)
    for r in range(1, r_max + 1):
        ratio = Fraction(kernel_ball_count(hom, r), r**degree)
        if ratio > best:
            best = ratio
    return best


def with_kernel_control(hom: GroupHomomorphism, degree: int,
                        r_max: int) -> GroupHomomorphism:
    """Attach an empirically computed kernel-control certificate."""
    constant = kernel_control_constant(hom, degree, r_max)
    cert = KernelControl(degree=degree, constant=constant, radius_checked=r_max)
    return GroupHomomorphism(hom.source, hom.target, hom.images, cert)


# -- serialization -----------------------------------------------------------


def chain_to_records(chain: Chain) -> list[dict]:
    """JSON-ready list of ``{"simplex": [...], "coeff": "p/q"}`` records in
    canonical support order; round-trips bit-exactly."""
    to_str = chain.model.element_to_str
    records = []
    for s in chain.sorted_support():
        c = chain.coefficient(s)
        records.append(
            {"simplex": [to_str(v) for v in s], "coeff": str(c)}
        )
    return records


def chain_from_records(model: GroupModel, records: Iterable[dict],
                       degree: Optional[int] = None) -> Chain:
    records = list(records)
    if degree is None:
        degrees = {len(r["simplex"]) for r in records}
        if len(degrees) > 1:
            raise ValueError(f"mixed simplex degrees {sorted(degrees)}")
        if not degrees:
            raise ValueError("cannot infer the degree of an empty chain")
        degree = degrees.pop()
    terms = []
    for r in records:
        simplex = tuple(model.element_from_str(w) for w in r["simplex"])
        terms.append((simplex, Fraction(r["coeff"])))
    return Chain.from_terms(model, degree, terms)
