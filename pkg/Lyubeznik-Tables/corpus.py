"""
Generated corpora of simplicial complexes for bulk verification.

Families:
  random             every nonempty subset drawn with probability q, then maximalized
  nonpure-shellable  facets added one at a time so each addition keeps a (nonpure) shelling
  forest             Stanley-Reisner complexes of facet ideals of simplicial forests; the
                     forest (the generator supports) is built by a good leaf order

Everything is driven by numpy's default_rng(seed), so a (spec, seed) pair always yields the
same list. Shellable elements carry their facet order as a certificate, forest elements the
facets of the forest, i.e. the generators of I.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from complexes import (
    SimplicialComplex,
    SquarefreeIdeal,
    all_masks,
    bits_of,
    canonical,
    complex_of_ideal,
    ideal_of_complex,
    maximal_elements,
    popcount,
    vertices_of,
)
from errors import ParseError, ResourceBoundError

logger = logging.getLogger(__name__)

FAMILIES = ("random", "nonpure-shellable", "forest")
MAX_CORPUS_VERTICES = 8
MAX_CORPUS_COUNT = 10_000
MAX_FOREST_CHECK_FACETS = 16


@dataclass(frozen=True)
class CorpusSpec:
    family: str
    n: int
    count: int = 1
    q: float = 0.3
    max_facets: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParseError(f"unknown corpus family '{self.family}' (expected one of {', '.join(FAMILIES)})")
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ParseError(f"corpus n must be a positive integer, got {self.n!r}")
        if self.n > MAX_CORPUS_VERTICES:
            raise ResourceBoundError(f"corpus n = {self.n} exceeds the bound of {MAX_CORPUS_VERTICES}")
        if isinstance(self.count, bool) or not isinstance(self.count, int) or self.count < 1:
            raise ParseError(f"corpus count must be a positive integer, got {self.count!r}")
        if self.count > MAX_CORPUS_COUNT:
            raise ResourceBoundError(f"corpus count {self.count} exceeds the bound of {MAX_CORPUS_COUNT}")
        if not 0.0 <= self.q <= 1.0:
            raise ParseError(f"q must lie in [0, 1], got {self.q}")
        if self.max_facets is not None and self.max_facets < 1:
            raise ParseError(f"max_facets must be positive, got {self.max_facets}")


@dataclass(frozen=True)
class CorpusItem:
    complex: SimplicialComplex
    certificate: tuple[int, ...] | None
    family: str
    index: int


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

def restriction_face(facet: int, previous: SimplicialComplex) -> int:
    """R(F) = {v ∈ F : F∖v lies in the earlier complex}."""
    r = 0
    for b in bits_of(facet):
        if previous.contains(facet & ~(1 << b)):
            r |= 1 << b
    return r


def check_shelling(complex_: SimplicialComplex, order: Sequence[int]) -> bool:
    """True iff `order` lists the facets of Δ and every facet's restriction face is new."""
    if sorted(order) != sorted(complex_.facets):
        return False
    for k in range(1, len(order)):
        previous = SimplicialComplex.from_faces(complex_.n, order[:k])
        if previous.contains(restriction_face(order[k], previous)):
            return False
    return True


def _has_leaf(collection: Sequence[int]) -> bool:
    if len(collection) == 1:
        return True
    for f in collection:
        others = [h for h in collection if h != f]
        for branch in others:
            if all(f & h & ~branch == 0 for h in others):
                return True
    return False


def check_forest(facets: Sequence[int]) -> bool:
    """
    Every nonempty subcollection of the facet collection has a leaf. The collection is the
    facet complex of a squarefree ideal (its generator supports), not a Stanley-Reisner complex.
    """
    facets = tuple(facets)
    if len(facets) > MAX_FOREST_CHECK_FACETS:
        raise ResourceBoundError(f"forest check over {len(facets)} facets is too large")
    for size in range(2, len(facets) + 1):
        for sub in itertools.combinations(facets, size):
            if not _has_leaf(sub):
                return False
    return True


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

def _random_complex(spec: CorpusSpec, rng: np.random.Generator) -> tuple[SimplicialComplex, None]:
    candidates = all_masks(spec.n)[1:]
    draws = rng.random(len(candidates))
    chosen = [f for f, x in zip(candidates, draws) if x < spec.q]
    if not chosen:
        return SimplicialComplex.empty(spec.n), None
    return SimplicialComplex(spec.n, maximal_elements(chosen)), None


def _shellable_complex(spec: CorpusSpec, rng: np.random.Generator) -> tuple[SimplicialComplex, tuple[int, ...]]:
    n = spec.n
    target = int(rng.integers(1, (spec.max_facets or 2 * n) + 1))
    nonempty = all_masks(n)[1:]
    order = [nonempty[int(rng.integers(len(nonempty)))]]
    while len(order) < target:
        previous = SimplicialComplex.from_faces(n, order)
        valid = [
            f for f in nonempty
            if not any(f & g == g for g in order) and not previous.contains(restriction_face(f, previous))
        ]
        if not valid:
            break
        order.append(valid[int(rng.integers(len(valid)))])
    return SimplicialComplex(n, tuple(order)), tuple(order)


def _is_chain(masks: Sequence[int]) -> bool:
    ms = sorted(set(masks), key=popcount)
    return all(a & b == a for a, b in zip(ms, ms[1:]))


def _forest_complex(spec: CorpusSpec, rng: np.random.Generator) -> tuple[SimplicialComplex, tuple[int, ...]]:
    n = spec.n
    target = int(rng.integers(1, (spec.max_facets or n) + 1))
    unused = list(range(n))
    first_size = 1 + int(rng.integers(min(3, n)))
    order = [sum(1 << b for b in unused[:first_size])]
    unused = unused[first_size:]
    while len(order) < target and unused:
        branch = order[int(rng.integers(len(order)))]
        attach = [a for a in canonical(_proper_subsets(branch)) if _is_chain([a & h for h in order])]
        a = attach[int(rng.integers(len(attach)))]
        take = 1 + int(rng.integers(min(2, len(unused))))
        new, unused = unused[:take], unused[take:]
        order.append(a | sum(1 << b for b in new))
    perm = [int(x) for x in rng.permutation(n)]
    relabeled = tuple(sum(1 << perm[b] for b in bits_of(f)) for f in order)
    forest = canonical(relabeled)
    return complex_of_ideal(SquarefreeIdeal(n, forest)), forest


def _proper_subsets(mask: int) -> list[int]:
    out = []
    sub = mask
    while sub:
        sub = (sub - 1) & mask
        out.append(sub)
    return out


_BUILDERS = {
    "random": _random_complex,
    "nonpure-shellable": _shellable_complex,
    "forest": _forest_complex,
}


def generate_corpus(spec: CorpusSpec, seed: int) -> list[CorpusItem]:
    """Deterministic list of spec.count complexes for the given seed."""
    rng = np.random.default_rng(seed)
    builder = _BUILDERS[spec.family]
    items = []
    for index in range(spec.count):
        complex_, certificate = builder(spec, rng)
        items.append(CorpusItem(complex_, certificate, spec.family, index))
        logger.debug(
            "%s #%d: facets %s", spec.family, index, [list(vertices_of(f)) for f in complex_.facets]
        )
    return items


def certificate_holds(item: CorpusItem) -> bool:
    """Re-check the construction guarantee of a generated element."""
    if item.family == "nonpure-shellable":
        return check_shelling(item.complex, item.certificate)
    if item.family == "forest":
        generators = ideal_of_complex(item.complex).generators
        return generators == canonical(item.certificate) and check_forest(item.certificate)
    return True
