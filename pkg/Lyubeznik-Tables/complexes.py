"""
Subset combinatorics for squarefree monomial ideals and simplicial complexes.

Every subset of the vertex set {1..n} is an int bitmask: vertex v lives in bit v-1.
Vertices are 1-based everywhere a user can see them (documents, reports) and
0-based bit positions internally. Subsets are always listed in canonical order:
by cardinality, then lexicographically on the sorted vertex tuple.

Main pieces:
  - SimplicialComplex / SquarefreeIdeal: immutable, canonical, antichain-checked.
  - parse_and_canonicalize: the JSON input document -> (ideal, complex).
  - sr_dual_pair, alexander_dual, primary_decomposition: the Stanley-Reisner dictionary.
  - link, pure_skeleton, hochster_huneke_components: the combinatorial oracles.
"""
import itertools
import json
import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Iterable

import networkx as nx

from errors import ComplexError, ParseError

logger = logging.getLogger(__name__)

MAX_VERTICES = 24

INPUT_KEYS = ("generators", "facets", "primary_components")


# ---------------------------------------------------------------------------
# Bitmask helpers
# ---------------------------------------------------------------------------

def mask_of(vertices: Iterable[int]) -> int:
    """1-based vertex list -> bitmask."""
    m = 0
    for v in vertices:
        m |= 1 << (v - 1)
    return m


def vertices_of(mask: int) -> tuple[int, ...]:
    """Bitmask -> sorted tuple of 1-based vertices."""
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def bits_of(mask: int) -> list[int]:
    """0-based bit positions set in mask, ascending."""
    out = []
    pos = 0
    while mask:
        if mask & 1:
            out.append(pos)
        mask >>= 1
        pos += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def subset_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """Sort key for the canonical (cardinality, lexicographic) order."""
    return popcount(mask), vertices_of(mask)


def canonical(masks: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(masks), key=subset_key))


@lru_cache(maxsize=None)
def all_masks(n: int) -> tuple[int, ...]:
    """All 2^n subsets of {1..n} in canonical order (every subset before its supersets)."""
    return canonical(range(1 << n))


def full_mask(n: int) -> int:
    return (1 << n) - 1


def submasks(mask: int) -> Iterable[int]:
    """Every subset of mask, mask itself included."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def minimal_elements(masks: Iterable[int]) -> tuple[int, ...]:
    """Inclusion-minimal members, canonical order."""
    kept: list[int] = []
    for m in sorted(set(masks), key=popcount):
        if not any(k & m == k for k in kept):
            kept.append(m)
    return canonical(kept)


def maximal_elements(masks: Iterable[int]) -> tuple[int, ...]:
    """Inclusion-maximal members, canonical order."""
    kept: list[int] = []
    for m in sorted(set(masks), key=popcount, reverse=True):
        if not any(m & k == m for k in kept):
            kept.append(m)
    return canonical(kept)


def is_antichain(masks: Iterable[int]) -> bool:
    ms = list(masks)
    for a, b in itertools.combinations(ms, 2):
        if a & b == a or a & b == b:
            return False
    return True


def minimal_transversals(edges: Iterable[int]) -> tuple[int, ...]:
    """
    Minimal sets meeting every edge (Berge's incremental algorithm).
    No edges -> [0] (the empty set hits everything). An empty edge -> [] (nothing hits it).
    """
    result = [0]
    for e in sorted(set(edges), key=popcount):
        grown = set()
        for t in result:
            if t & e:
                grown.add(t)
                continue
            rest = e
            while rest:
                low = rest & -rest
                grown.add(t | low)
                rest ^= low
        result = list(minimal_elements(grown))
        if not result:
            break
    return canonical(result)


def subsets_to_lists(masks: Iterable[int]) -> list[list[int]]:
    return [list(vertices_of(m)) for m in masks]


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

def _check_vertex_count(n: Any) -> int:
    if isinstance(n, bool) or not isinstance(n, int):
        raise ParseError(f"n must be an integer, got {n!r}")
    if n < 1:
        raise ParseError(f"n must be at least 1, got {n}")
    if n > MAX_VERTICES:
        raise ParseError(f"n = {n} exceeds the hard cap of {MAX_VERTICES} vertices")
    return n


@dataclass(frozen=True)
class SimplicialComplex:
    """
    A simplicial complex on {1..n} given by its facets.

    facets == ()  is the void complex (no faces at all).
    facets == (0,) is the empty complex {∅}, dimension -1.
    """

    n: int
    facets: tuple[int, ...]

    def __post_init__(self):
        _check_vertex_count(self.n)
        full = full_mask(self.n)
        for f in self.facets:
            if f & ~full:
                raise ComplexError(f"facet {vertices_of(f)} uses a vertex outside 1..{self.n}")
        if not is_antichain(self.facets):
            raise ComplexError("facets must form an antichain")
        object.__setattr__(self, "facets", canonical(self.facets))

    @classmethod
    def from_faces(cls, n: int, faces: Iterable[int]) -> "SimplicialComplex":
        """Complex generated by the given faces (non-maximal ones are dropped)."""
        return cls(n, maximal_elements(faces))

    @classmethod
    def void(cls, n: int) -> "SimplicialComplex":
        return cls(n, ())

    @classmethod
    def empty(cls, n: int) -> "SimplicialComplex":
        return cls(n, (0,))

    @classmethod
    def simplex(cls, n: int) -> "SimplicialComplex":
        return cls(n, (full_mask(n),))

    @property
    def is_void(self) -> bool:
        return not self.facets

    @property
    def dim(self) -> int | float:
        """Largest facet dimension; -inf for the void complex."""
        if self.is_void:
            return -math.inf
        return max(popcount(f) for f in self.facets) - 1

    @property
    def is_pure(self) -> bool:
        return len({popcount(f) for f in self.facets}) <= 1

    @cached_property
    def vertex_mask(self) -> int:
        m = 0
        for f in self.facets:
            m |= f
        return m

    def contains(self, face: int) -> bool:
        return any(face & f == face for f in self.facets)

    @cached_property
    def faces(self) -> tuple[int, ...]:
        """All faces in canonical order."""
        seen: set[int] = set()
        for f in self.facets:
            seen.update(submasks(f))
        return canonical(seen)

    def faces_of_dim(self, i: int) -> tuple[int, ...]:
        return tuple(f for f in self.faces if popcount(f) == i + 1)

    def relabel(self, perm: dict[int, int]) -> "SimplicialComplex":
        """Apply a vertex permutation given as a 1-based mapping."""
        return SimplicialComplex(self.n, tuple(mask_of(perm[v] for v in vertices_of(f)) for f in self.facets))

    def to_document(self) -> dict:
        return {"n": self.n, "facets": subsets_to_lists(self.facets)}


@dataclass(frozen=True)
class SquarefreeIdeal:
    """
    Squarefree monomial ideal of k[x1..xn], given by the supports of its minimal generators.
    No generators is the zero ideal; a generator ∅ would be the unit ideal and is rejected.
    """

    n: int
    generators: tuple[int, ...]

    def __post_init__(self):
        _check_vertex_count(self.n)
        full = full_mask(self.n)
        for g in self.generators:
            if g == 0:
                raise ParseError("the unit ideal (generator 1) is not allowed")
            if g & ~full:
                raise ParseError(f"generator {vertices_of(g)} uses a vertex outside 1..{self.n}")
        if not is_antichain(self.generators):
            raise ComplexError("generators must form an antichain")
        object.__setattr__(self, "generators", canonical(self.generators))

    @classmethod
    def from_generators(cls, n: int, generators: Iterable[int]) -> "SquarefreeIdeal":
        gens = list(generators)
        if any(g == 0 for g in gens):
            raise ParseError("the unit ideal (generator 1) is not allowed")
        return cls(n, minimal_elements(gens))

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @cached_property
    def primes(self) -> tuple[int, ...]:
        """Supports of the minimal primes, canonical order."""
        return minimal_transversals(self.generators)

    @property
    def height(self) -> int:
        return min(popcount(p) for p in self.primes)

    def contains_monomial(self, mask: int) -> bool:
        return any(g & mask == g for g in self.generators)

    def relabel(self, perm: dict[int, int]) -> "SquarefreeIdeal":
        return SquarefreeIdeal(self.n, tuple(mask_of(perm[v] for v in vertices_of(g)) for g in self.generators))

    def to_document(self) -> dict:
        return {"n": self.n, "generators": subsets_to_lists(self.generators)}

    def canonical_json(self) -> str:
        """Byte-stable text form; used as cache key material and in failure dumps."""
        return json.dumps(self.to_document(), separators=(",", ":"))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _subset_list(doc: dict, key: str, n: int) -> list[int]:
    raw = doc[key]
    if not isinstance(raw, list):
        raise ParseError(f"'{key}' must be a list of lists of vertex indices")
    masks = []
    for entry in raw:
        if not isinstance(entry, list):
            raise ParseError(f"'{key}' entries must be lists, got {entry!r}")
        for v in entry:
            if isinstance(v, bool) or not isinstance(v, int):
                raise ParseError(f"vertex index must be an integer, got {v!r}")
            if v < 1 or v > n:
                raise ParseError(f"vertex index {v} out of range 1..{n}")
        masks.append(mask_of(entry))
    return masks


def parse_and_canonicalize(document: str | dict) -> tuple[SquarefreeIdeal, SimplicialComplex]:
    """
    Read an input document ({"n": int, one of generators | facets | primary_components})
    and return the canonical ideal together with its Stanley-Reisner complex.
    Accepts either JSON text or an already-decoded dict.
    """
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e}") from e
    else:
        doc = document
    if not isinstance(doc, dict):
        raise ParseError("input document must be a JSON object")
    if "n" not in doc:
        raise ParseError("input document is missing 'n'")
    n = _check_vertex_count(doc["n"])
    given = [k for k in INPUT_KEYS if k in doc]
    if len(given) != 1:
        raise ParseError(f"exactly one of {', '.join(INPUT_KEYS)} must be given (got {given or 'none'})")
    unknown = set(doc) - {"n", "name", *INPUT_KEYS}
    if unknown:
        raise ParseError(f"unknown keys in input document: {sorted(unknown)}")
    key = given[0]
    masks = _subset_list(doc, key, n)

    if key == "generators":
        ideal = SquarefreeIdeal.from_generators(n, masks)
    elif key == "facets":
        if not masks:
            raise ParseError("the void complex (no facets) corresponds to the unit ideal")
        ideal = ideal_of_complex(SimplicialComplex.from_faces(n, masks))
    else:
        gens = minimal_transversals(masks)
        if gens == (0,):
            raise ParseError("an empty intersection of primes is the unit ideal")
        ideal = SquarefreeIdeal(n, gens)
    complex_ = complex_of_ideal(ideal)
    logger.debug("parsed %s input: %d generators, %d facets", key, len(ideal.generators), len(complex_.facets))
    return ideal, complex_


def load_document(path: str) -> tuple[SquarefreeIdeal, SimplicialComplex]:
    """Read and parse an input file."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except UnicodeDecodeError as e:
        raise ParseError(f"input file {path} is not valid UTF-8: {e}") from e
    except OSError as e:
        raise ParseError(f"cannot read input file {path}: {e}") from e
    return parse_and_canonicalize(text)


# ---------------------------------------------------------------------------
# Stanley-Reisner dictionary
# ---------------------------------------------------------------------------

def complex_of_ideal(ideal: SquarefreeIdeal) -> SimplicialComplex:
    """Δ(I): facets are the complements of the minimal prime supports."""
    full = full_mask(ideal.n)
    return SimplicialComplex(ideal.n, tuple(full ^ p for p in ideal.primes))


def ideal_of_complex(complex_: SimplicialComplex) -> SquarefreeIdeal:
    """I_Δ: generated by the minimal nonfaces, i.e. minimal sets meeting every facet complement."""
    if complex_.is_void:
        raise ComplexError("the void complex has the unit ideal, which is not a squarefree ideal here")
    full = full_mask(complex_.n)
    return SquarefreeIdeal(complex_.n, minimal_transversals(full ^ f for f in complex_.facets))


def sr_dual_pair(x: SquarefreeIdeal | SimplicialComplex) -> SimplicialComplex | SquarefreeIdeal:
    """Ideal -> its Stanley-Reisner complex, complex -> its Stanley-Reisner ideal."""
    if isinstance(x, SquarefreeIdeal):
        return complex_of_ideal(x)
    if isinstance(x, SimplicialComplex):
        return ideal_of_complex(x)
    raise TypeError(f"expected SquarefreeIdeal or SimplicialComplex, got {type(x).__name__}")


def primary_decomposition(ideal: SquarefreeIdeal) -> list[int]:
    """Supports of the minimal monomial primes of I, canonical order."""
    return list(ideal.primes)


def alexander_dual(ideal: SquarefreeIdeal) -> SquarefreeIdeal:
    """I^∨: the ideal whose generator supports are the minimal prime supports of I."""
    if ideal.is_zero:
        raise ComplexError("the Alexander dual of the zero ideal is not defined")
    return SquarefreeIdeal(ideal.n, ideal.primes)


# ---------------------------------------------------------------------------
# Links, skeleta, Hochster-Huneke graph
# ---------------------------------------------------------------------------

def link(complex_: SimplicialComplex, face: int) -> SimplicialComplex:
    """lk_Δ(F) = {G : G ∩ F = ∅, G ∪ F ∈ Δ}."""
    if not complex_.contains(face):
        raise ComplexError(f"{list(vertices_of(face))} is not a face of the complex")
    return SimplicialComplex.from_faces(complex_.n, (f & ~face for f in complex_.facets if f & face == face))


def pure_skeleton(complex_: SimplicialComplex, i: int) -> SimplicialComplex:
    """Subcomplex generated by the faces of dimension exactly i."""
    if complex_.is_void:
        raise ComplexError("the void complex has no skeleta")
    if i < -1 or i > complex_.dim:
        raise ComplexError(f"skeleton dimension {i} outside -1..{complex_.dim}")
    if i == -1:
        return SimplicialComplex.empty(complex_.n)
    faces = set()
    for f in complex_.facets:
        verts = bits_of(f)
        if len(verts) <= i:
            continue
        for combo in itertools.combinations(verts, i + 1):
            faces.add(sum(1 << b for b in combo))
    return SimplicialComplex.from_faces(complex_.n, faces)


def hh_graph(complex_: SimplicialComplex) -> nx.Graph:
    """
    Hochster-Huneke graph: nodes are the facets of maximal cardinality d,
    edges join two of them meeting in d-1 vertices.
    """
    if complex_.is_void:
        raise ComplexError("the void complex has no Hochster-Huneke graph")
    d = complex_.dim + 1
    top = [f for f in complex_.facets if popcount(f) == d]
    graph = nx.Graph()
    graph.add_nodes_from(top)
    for a, b in itertools.combinations(top, 2):
        if popcount(a & b) == d - 1:
            graph.add_edge(a, b)
    return graph


def hochster_huneke_components(complex_: SimplicialComplex) -> int:
    return nx.number_connected_components(hh_graph(complex_))
