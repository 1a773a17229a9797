"""The explicit rank-2 free group 2-chain whose boundary is a generator edge.

Writing ``α, β`` for the free generators, the construction maintains per
level ``d`` a set of ``4**d`` distinct positive words (the *level words*),
together with an injective *marker* word of length ``2d`` per level word and
a sign in ``{+1, −1}``.  Level 0 is ``{α}`` with the empty marker and sign
``+1``.  A word ``x`` at level ``d`` spawns four children at level ``d+1``
via the suffix pair ``s = α^{d+1} β^{d+1}``, ``t = β^{d+1} α^{d+1}``:

    x·m(x)·s  (sign of x),      m(x)·s  (opposite sign),
    x·m(x)·t  (sign of x),      m(x)·t  (opposite sign).

All words consist of non-negative generator powers, so no cancellation can
occur; distinctness of all children within a level is asserted at build time
rather than assumed.  Markers are assigned canonically: the level's words in
shortlex order receive the base-2 expansions of their index (α for digit 0,
β for digit 1), left-padded to length ``2d`` — determinism makes every
derived norm value reproducible.

Each level word ``x`` at level ``d`` carries two 2-simplices

    s(x) = [e, x, x·m(x)·s_{d+1}],    t(x) = [e, x, x·m(x)·t_{d+1}],

whose boundary contributes ``2[e,x]`` plus the four child edges with the
signs arranged so that the level sums telescope: with

    b(D) = Σ_{d<=D} Σ_{x in level d} ε(x)/2^{d+1} · (s(x) + t(x))

one gets exactly ``∂b(D) = [e,α] − Σ_{y in level D+1} ε(y)/2^{D+1}·[e,y]``.
The tail norm at weight degree 0 decays iff p > 2, which the decay table
makes observable: level-D increments have ``2·4^D`` distinct simplices of
equal |coefficient| ``1/2^{D+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .chains import Chain, boundary
from .errors import CollisionDetected
from .groups import FreeGroup
from .norms import INF, diameter_map, leq_with_slack, weighted_norm

ALPHA = (1,)
BETA = (2,)

DEFAULT_MAX_LEVEL = 9  # level d holds 2 * 4**d fresh 2-simplices


def suffix_pair(d: int) -> tuple[tuple, tuple]:
    """The positive words ``α^d β^d`` and ``β^d α^d`` (both empty at d=0)."""
    if d < 0:
        raise ValueError("suffix index must be >= 0")
    return (1,) * d + (2,) * d, (2,) * d + (1,) * d


def _marker(index: int, width: int) -> tuple:
    # base-2 expansion of index, α for 0-digit, β for 1-digit, left-padded
    digits = []
    for _ in range(width):
        digits.append(2 if index & 1 else 1)
        index >>= 1
    return tuple(reversed(digits))


@dataclass(frozen=True)
class LevelData:
    """One construction level: words in shortlex order, markers, signs."""

    level: int
    words: tuple
    markers: dict
    signs: dict

    def __post_init__(self):
        if len(set(self.words)) != 4**self.level or \
                len(self.words) != 4**self.level:
            raise CollisionDetected(
                f"level {self.level} has {len(set(self.words))} distinct "
                f"words, expected {4 ** self.level}"
            )


class VanishingConstruction:
    """Builds levels lazily and exposes the partial sums and their decay."""

    def __init__(self, max_level: int = DEFAULT_MAX_LEVEL):
        self.model = FreeGroup(2)
        self.max_level = max_level
        self._levels: list[LevelData] = []
        self._chunks: dict[int, Chain] = {}

    def level(self, d: int) -> LevelData:
        if d > self.max_level:
            raise ValueError(
                f"level {d} exceeds the configured cap {self.max_level}"
            )
        while len(self._levels) <= d:
            self._build_next()
        return self._levels[d]

    def _build_next(self) -> None:
        d = len(self._levels)
        if d == 0:
            data = LevelData(0, (ALPHA,), {ALPHA: ()}, {ALPHA: 1})
            self._levels.append(data)
            return
        parent = self._levels[d - 1]
        s_d, t_d = suffix_pair(d)
        words = []
        signs: dict[tuple, int] = {}
        for x in parent.words:
            m_x = parent.markers[x]
            sign = parent.signs[x]
            ms = m_x + s_d
            mt = m_x + t_d
            for child, child_sign in (
                (x + ms, sign),
                (ms, -sign),
                (x + mt, sign),
                (mt, -sign),
            ):
                if child in signs:
                    raise CollisionDetected(
                        f"level {d}: child word {child!r} produced twice"
                    )
                signs[child] = child_sign
                words.append(child)
        ordered = tuple(sorted(words, key=lambda w: (len(w), w)))
        width = 2 * d
        markers = {w: _marker(i, width) for i, w in enumerate(ordered)}
        self._levels.append(LevelData(d, ordered, markers, signs))

    # -- simplices and partial sums -----------------------------------------

    def cone_simplices(self, x: tuple, d: int) -> tuple[tuple, tuple]:
        """The two 2-simplices attached to a level-``d`` word ``x``."""
        data = self.level(d)
        if x not in data.markers:
            raise ValueError(f"{x!r} is not a level-{d} word")
        m_x = data.markers[x]
        s_next, t_next = suffix_pair(d + 1)
        return (x, x + m_x + s_next), (x, x + m_x + t_next)

    def level_chunk(self, d: int) -> Chain:
        """Σ_{x in level d} ε(x)/2^{d+1} · (s(x) + t(x)) as an exact chain."""
        cached = self._chunks.get(d)
        if cached is not None:
            return cached
        data = self.level(d)
        coeff_denom = 2 ** (d + 1)
        terms = []
        for x in data.words:
            s_x, t_x = self.cone_simplices(x, d)
            value = Fraction(data.signs[x], coeff_denom)
            terms.append((s_x, value))
            terms.append((t_x, value))
        chunk = Chain.from_terms(self.model, 2, terms)
        if len(chunk) != 2 * len(data.words):
            raise CollisionDetected(
                f"level {d}: expected {2 * len(data.words)} distinct "
                f"2-simplices, got {len(chunk)}"
            )
        self._chunks[d] = chunk
        return chunk

    def partial_sum(self, top_level: int) -> Chain:
        """b(D): the weighted sum of all chunks through ``top_level``."""
        total = Chain.zero(self.model, 2)
        expected = 0
        for d in range(top_level + 1):
            total = total + self.level_chunk(d)
            expected += 2 * 4**d
        if len(total) != expected:
            raise CollisionDetected(
                f"partial sum through level {top_level} has support "
                f"{len(total)}, expected {expected}"
            )
        return total

    def edge_sum(self, d: int) -> Chain:
        """Σ_{y in level d} ε(y)/2^d · [e, y] (the telescoped tail shape)."""
        data = self.level(d)
        coeff_denom = 2**d
        terms = [
            ((y,), Fraction(data.signs[y], coeff_denom)) for y in data.words
        ]
        chain = Chain.from_terms(self.model, 1, terms)
        if len(chain) != len(data.words):
            raise CollisionDetected(f"level-{d} edges are not distinct")
        return chain

    def boundary_tail(self, top_level: int) -> Chain:
        """∂b(D) − [e,α], after asserting the exact telescoping identity

            ∂b(D) = [e,α] − Σ_{y in level D+1} ε(y)/2^{D+1} · [e,y].
        """
        bd = boundary(self.partial_sum(top_level))
        generator_edge = Chain.single(self.model, (ALPHA,))
        expected = generator_edge - self.edge_sum(top_level + 1)
        if bd != expected:
            raise AssertionError(
                f"telescoping identity failed at level {top_level}"
            )
        return bd - generator_edge

    # -- decay reporting ------------------------------------------------------

    def decay_table(self, max_level: int,
                    norm_params: Iterable[tuple[int, float]]) -> list["DecayRow"]:
        """Increment and tail norms for levels 1..max_level.

        Each row checks the realized increment norm against the counted
        support envelope ``(support · max|coeff|^p · max diam^n)^{1/p}``,
        which is an unconditional upper bound; for p > 2 the rows record
        from which level onward the observed increments strictly decrease
        (at weight degree 0 that is level 1).
        """
        norm_params = list(norm_params)
        rows: list[DecayRow] = []
        for n, p in norm_params:
            increments = []
            tails = []
            envelopes = []
            for d in range(1, max_level + 1):
                chunk = self.level_chunk(d)
                diams = diameter_map(chunk)
                inc = weighted_norm(chunk, n, p, diams)
                tail = weighted_norm(self.boundary_tail(d), n, p)
                max_coeff = float(max(abs(c) for _, c in chunk.terms()))
                max_weight = 1 if n == 0 else max(diams.values()) ** n
                if p == INF:
                    envelope = max_coeff * max_weight
                else:
                    envelope = (
                        len(chunk) * max_coeff ** float(p) * max_weight
                    ) ** (1 / float(p))
                if not leq_with_slack(inc, envelope):
                    raise AssertionError(
                        f"increment norm {inc} exceeds its support envelope "
                        f"{envelope} at level {d}, (n,p)=({n},{p})"
                    )
                increments.append(inc)
                tails.append(tail)
                envelopes.append(envelope)
            decreasing_from = _strictly_decreasing_from(increments)
            for i, d in enumerate(range(1, max_level + 1)):
                rows.append(DecayRow(
                    level=d, n=n, p=float(p) if p != INF else INF,
                    increment_norm=increments[i],
                    tail_norm=tails[i],
                    envelope=envelopes[i],
                    decreasing_from=decreasing_from,
                ))
        return rows


def _strictly_decreasing_from(values: list[float]) -> Optional[int]:
    """1-based level from which the sequence strictly decreases to the end
    (None when even the final step does not decrease)."""
    start = len(values) - 1
    while start > 0 and values[start - 1] > values[start]:
        start -= 1
    if start == len(values) - 1:
        return None
    return start + 1


@dataclass(frozen=True)
class DecayRow:
    level: int
    n: int
    p: float
    increment_norm: float
    tail_norm: float
    envelope: float
    decreasing_from: Optional[int]

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "n": self.n,
            "p": self.p,
            "increment_norm": self.increment_norm,
            "tail_norm": self.tail_norm,
            "envelope": self.envelope,
            "decreasing_from": self.decreasing_from,
        }
