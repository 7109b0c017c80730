"""
Reduced simplicial homology over a field and the combinatorial Cohen-Macaulay tests
built on it (Reisner's link criterion, Duval's pure-skeleton criterion).

These never touch the module engine in sqmod.py; they serve as independent oracles for it.
"""
import logging

from complexes import SimplicialComplex, bits_of, link, pure_skeleton
from errors import ComplexError
from linalg import ChainComplexVS, FieldSpec, Matrix, homology_dims

logger = logging.getLogger(__name__)


def boundary_matrix(faces_hi: tuple[int, ...], faces_lo: tuple[int, ...], fld: FieldSpec) -> Matrix:
    """
    ∂: C_i -> C_{i-1}. A vertex v removed from F carries the sign (-1)^(number of vertices of F above v).
    """
    index = {f: r for r, f in enumerate(faces_lo)}
    z, o = fld.zero, fld.one
    minus = fld.element(-1)
    rows = [[z] * len(faces_hi) for _ in faces_lo]
    for c, face in enumerate(faces_hi):
        verts = bits_of(face)
        for pos, b in enumerate(verts):
            above = len(verts) - 1 - pos
            rows[index[face & ~(1 << b)]][c] = o if above % 2 == 0 else minus
    return Matrix(len(faces_lo), len(faces_hi), tuple(tuple(r) for r in rows), fld)


def reduced_chain_complex(complex_: SimplicialComplex, fld: FieldSpec) -> ChainComplexVS:
    """Augmented chain complex; term t holds the faces of dimension t - 1."""
    if complex_.is_void:
        raise ComplexError("reduced homology of the void complex is not defined")
    top = complex_.dim
    by_dim = [complex_.faces_of_dim(i) for i in range(-1, top + 1)]
    diffs = tuple(boundary_matrix(by_dim[t], by_dim[t - 1], fld) for t in range(1, len(by_dim)))
    return ChainComplexVS(tuple(len(f) for f in by_dim), diffs, fld)


def reduced_simplicial_homology(complex_: SimplicialComplex, fld: FieldSpec) -> dict[int, int]:
    """dim H̃_i(Δ; k) for -1 <= i <= dim Δ."""
    dims = homology_dims(reduced_chain_complex(complex_, fld))
    return {t - 1: dim for t, dim in enumerate(dims)}


def is_cohen_macaulay_reisner(complex_: SimplicialComplex, fld: FieldSpec) -> bool:
    """Reisner: every link (∅ included) has zero reduced homology below its top dimension."""
    if complex_.is_void:
        raise ComplexError("the void complex is not a Stanley-Reisner complex")
    for face in complex_.faces:
        lk = link(complex_, face)
        hom = reduced_simplicial_homology(lk, fld)
        if any(hom[j] for j in range(-1, lk.dim)):
            logger.debug("Reisner test fails at face %s over %s", bits_of(face), fld.label)
            return False
    return True


def is_sequentially_cm_duval(complex_: SimplicialComplex, fld: FieldSpec) -> bool:
    """Duval: Δ is sequentially Cohen-Macaulay iff every pure i-skeleton is Cohen-Macaulay."""
    if complex_.is_void:
        raise ComplexError("the void complex is not a Stanley-Reisner complex")
    for i in range(0, complex_.dim + 1):
        if not is_cohen_macaulay_reisner(pure_skeleton(complex_, i), fld):
            logger.debug("pure %d-skeleton is not Cohen-Macaulay", i)
            return False
    return True
