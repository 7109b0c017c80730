"""
Squarefree modules over k[x1..xn]: quotient rings, minimal free resolutions, and
Ext against the canonical module with its full module structure.

A squarefree module is stored by its components M_F (F ⊆ {1..n}, a bitmask) and the
multiplication maps x_j: M_F -> M_{F∪j} for j ∉ F. Free modules appearing in resolutions
are sums of R(-F) with F squarefree; a scalar c in a differential from a generator of
degree F' to one of degree F ⊆ F' stands for c·x^(F'∖F).

Ext^j(M, ω) with ω = R(-1,...,-1) is computed fiberwise: at degree G the dual complex has
one basis vector per resolution generator of degree F ⊇ complement(G), and the transposed
scalar differentials. Multiplication by x_j is the basis inclusion G -> G∪j, pushed
through cohomology by lifting representatives and projecting.
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from complexes import SquarefreeIdeal, all_masks, bits_of, complex_of_ideal, full_mask, popcount
from errors import InvariantError
from linalg import (
    ChainComplexVS,
    EchelonBasis,
    FieldSpec,
    Matrix,
    cochain_as_chain,
    homology_with_projection,
    rank_kernel,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Squarefree modules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SquarefreeModule:
    """
    dims[F] is dim M_F. mult[(F, b)] is x_b: M_F -> M_{F | 1<<b} (b a 0-based bit not in F),
    stored only when both ends are nonzero.
    """

    n: int
    field: FieldSpec
    dims: tuple[int, ...]
    mult: dict

    def component(self, face: int) -> int:
        return self.dims[face]

    def map(self, face: int, b: int) -> Matrix:
        key = (face, b)
        if key in self.mult:
            return self.mult[key]
        return Matrix.zeros(self.dims[face | (1 << b)], self.dims[face], self.field)

    @property
    def is_zero(self) -> bool:
        return not any(self.dims)

    def support(self) -> list[int]:
        return [f for f in all_masks(self.n) if self.dims[f]]

    @property
    def dimension(self) -> int | float:
        """Krull dimension: the largest |F| with M_F != 0 (-inf for the zero module)."""
        sizes = [popcount(f) for f, d in enumerate(self.dims) if d]
        return max(sizes) if sizes else -math.inf

    def check_commutativity(self) -> None:
        """x_l x_j = x_j x_l on every square F -> F∪{j,l}."""
        for face in range(1 << self.n):
            if not self.dims[face]:
                continue
            free = [b for b in range(self.n) if not face >> b & 1]
            for i, j in enumerate(free):
                for l in free[i + 1:]:
                    via_j = self.map(face | (1 << j), l) @ self.map(face, j)
                    via_l = self.map(face | (1 << l), j) @ self.map(face, l)
                    if via_j.entries != via_l.entries:
                        raise InvariantError(
                            f"multiplication maps do not commute at degree {bits_of(face)} for bits {j}, {l}"
                        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "dims": list(self.dims),
            "mult": [[f, b, m.to_json()] for (f, b), m in sorted(self.mult.items())],
        }

    @classmethod
    def from_json(cls, data: dict, fld: FieldSpec) -> "SquarefreeModule":
        dims = tuple(data["dims"])
        mult = {}
        for f, b, entries in data["mult"]:
            mult[(f, b)] = Matrix.from_json(entries, dims[f | (1 << b)], dims[f], fld)
        return cls(data["n"], fld, dims, mult)


def zero_module(n: int, fld: FieldSpec) -> SquarefreeModule:
    return SquarefreeModule(n, fld, (0,) * (1 << n), {})


def quotient_module(ideal: SquarefreeIdeal, fld: FieldSpec) -> SquarefreeModule:
    """R/I: a copy of k on every face of Δ(I), identity maps between faces."""
    complex_ = complex_of_ideal(ideal)
    faces = set(complex_.faces)
    dims = tuple(1 if f in faces else 0 for f in range(1 << ideal.n))
    one = Matrix.identity(1, fld)
    mult = {}
    for f in faces:
        for b in range(ideal.n):
            if not f >> b & 1 and (f | (1 << b)) in faces:
                mult[(f, b)] = one
    return SquarefreeModule(ideal.n, fld, dims, mult)


# ---------------------------------------------------------------------------
# Free resolutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreeResolution:
    """
    steps[t] lists the generator degrees of P_t; differentials[t - 1] is the scalar
    matrix of d_t: P_t -> P_{t-1}, shape (len(steps[t-1]), len(steps[t])).
    """

    n: int
    field: FieldSpec
    steps: tuple[tuple[int, ...], ...]
    differentials: tuple[Matrix, ...]

    @property
    def length(self) -> int:
        return len(self.steps) - 1

    def betti(self, t: int) -> Counter:
        """β_{t,F} as a Counter over degree bitmasks."""
        if t < 0 or t >= len(self.steps):
            return Counter()
        return Counter(self.steps[t])

    def total_betti(self) -> list[int]:
        return [len(s) for s in self.steps]

    def fiber(self, degree: int):
        """The strand of the resolution in degree G: generators of degree ⊆ G."""
        idx = [[i for i, f in enumerate(step) if f & ~degree == 0] for step in self.steps]
        diffs = tuple(self.differentials[t - 1].submatrix(idx[t - 1], idx[t]) for t in range(1, len(self.steps)))
        return ChainComplexVS(tuple(len(x) for x in idx), diffs, self.field)

    def check(self) -> None:
        """d^2 = 0, monomial support (F ⊆ F'), minimality (no unit entries)."""
        for t in range(1, len(self.steps)):
            d = self.differentials[t - 1]
            for r, lower in enumerate(self.steps[t - 1]):
                for c, upper in enumerate(self.steps[t]):
                    if d.entries[r][c] and (lower & ~upper or lower == upper):
                        raise InvariantError(f"d_{t} entry ({r},{c}) is not a non-unit monomial")
        for t in range(1, len(self.steps) - 1):
            if not (self.differentials[t - 1] @ self.differentials[t]).is_zero():
                raise InvariantError(f"d_{t} ∘ d_{t + 1} != 0")
        if self.length > self.n:
            raise InvariantError(f"resolution length {self.length} exceeds n = {self.n}")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "steps": [list(s) for s in self.steps],
            "differentials": [d.to_json() for d in self.differentials],
        }

    @classmethod
    def from_json(cls, data: dict, fld: FieldSpec) -> "FreeResolution":
        steps = tuple(tuple(s) for s in data["steps"])
        diffs = tuple(
            Matrix.from_json(entries, len(steps[t]), len(steps[t + 1]), fld)
            for t, entries in enumerate(data["differentials"])
        )
        return cls(data["n"], fld, steps, diffs)


def _lift(coords: Sequence, positions: Sequence[int], size: int, fld: FieldSpec) -> tuple:
    out = [fld.zero] * size
    for pos, x in zip(positions, coords):
        out[pos] = x
    return tuple(out)


def _cover(module: SquarefreeModule) -> tuple[list[tuple[int, tuple]], dict[int, list[tuple]]]:
    """
    Minimal generators of M (degree, vector in M_F) and the kernel of the cover P_0 -> M,
    as full-length coordinate vectors over the generators, degree by degree.
    """
    fld = module.field
    order = all_masks(module.n)
    gens: list[tuple[int, tuple]] = []
    for face in order:
        d = module.dims[face]
        if not d:
            continue
        below = EchelonBasis(d, fld)
        for b in bits_of(face):
            src = face ^ (1 << b)
            if module.dims[src]:
                for col in module.map(src, b).columns():
                    below.add(col)
        if len(below) == d:
            continue
        for k in range(d):
            unit = tuple(fld.one if i == k else fld.zero for i in range(d))
            if below.add(unit):
                gens.append((face, unit))

    # images of each generator, carried up along ascending variable order
    images: list[dict[int, tuple]] = [{face: vec} for face, vec in gens]
    for degree in order:
        for gi, (face, _) in enumerate(gens):
            if face & ~degree or face == degree:
                continue
            b = (degree & ~face).bit_length() - 1
            prev = degree ^ (1 << b)
            images[gi][degree] = module.map(prev, b).apply(images[gi][prev])

    kernels: dict[int, list[tuple]] = {}
    for degree in order:
        cols = [gi for gi, (face, _) in enumerate(gens) if face & ~degree == 0]
        if not cols:
            kernels[degree] = []
            continue
        mat = Matrix.from_columns([images[gi][degree] for gi in cols], module.dims[degree], fld)
        _, ker = rank_kernel(mat)
        kernels[degree] = [_lift(v, cols, len(gens), fld) for v in ker]
    return gens, kernels


def minimal_free_resolution(module: SquarefreeModule, check: bool = True) -> FreeResolution:
    """
    Minimal multigraded free resolution, built degree by degree in (cardinality, lex) order:
    at each step the new generators in degree F span a complement of Σ_j x_j K_{F∖j} inside
    the current kernel K_F, and their coordinates are the columns of the next differential.
    """
    fld = module.field
    n = module.n
    order = all_masks(n)
    gens, kernels = _cover(module)
    if not gens:
        return FreeResolution(n, fld, (), ())
    steps = [tuple(face for face, _ in gens)]
    diffs: list[Matrix] = []
    while any(kernels[g] for g in order):
        if len(steps) > n:
            raise InvariantError(f"resolution did not terminate after {n} steps")
        prev_step = steps[-1]
        width = len(prev_step)
        new_gens: list[tuple[int, tuple]] = []
        for face in order:
            if not kernels[face]:
                continue
            below = EchelonBasis(width, fld)
            for b in bits_of(face):
                for v in kernels[face ^ (1 << b)]:
                    below.add(v)
            for v in kernels[face]:
                if below.add(v):
                    new_gens.append((face, v))
        diffs.append(Matrix.from_columns([v for _, v in new_gens], width, fld))
        steps.append(tuple(face for face, _ in new_gens))

        next_kernels: dict[int, list[tuple]] = {}
        for degree in order:
            cols = [gi for gi, (face, _) in enumerate(new_gens) if face & ~degree == 0]
            if not cols:
                next_kernels[degree] = []
                continue
            rows = [i for i, face in enumerate(prev_step) if face & ~degree == 0]
            mat = Matrix.from_columns([[new_gens[gi][1][r] for r in rows] for gi in cols], len(rows), fld)
            _, ker = rank_kernel(mat)
            next_kernels[degree] = [_lift(v, cols, len(new_gens), fld) for v in ker]
        kernels = next_kernels
        logger.debug("resolution step %d: %d generators", len(steps) - 1, len(new_gens))

    res = FreeResolution(n, fld, tuple(steps), tuple(diffs))
    if check:
        res.check()
    return res


# ---------------------------------------------------------------------------
# Ext against the canonical module
# ---------------------------------------------------------------------------

def ext_with_structure(
    module: SquarefreeModule,
    resolution: FreeResolution | None = None,
    check: bool = True,
) -> list[SquarefreeModule]:
    """E^j = Ext^j_R(M, ω_R) for j = 0..n, each as a squarefree module."""
    n = module.n
    fld = module.field
    res = resolution if resolution is not None else minimal_free_resolution(module, check=check)
    if not res.steps:
        return [zero_module(n, fld) for _ in range(n + 1)]
    last = res.length
    full = full_mask(n)

    index: dict[int, list[list[int]]] = {}
    coh: dict[int, list] = {}
    for degree in range(1 << n):
        need = full & ~degree
        idx = [[i for i, f in enumerate(step) if f & need == need] for step in res.steps]
        codiffs = [res.differentials[t].submatrix(idx[t], idx[t + 1]).transpose() for t in range(last)]
        chain = cochain_as_chain([len(x) for x in idx], codiffs, fld)
        data = homology_with_projection(chain, validate=check)
        index[degree] = idx
        coh[degree] = [data[last - t] for t in range(last + 1)]

    modules = []
    for j in range(n + 1):
        if j > last:
            modules.append(zero_module(n, fld))
            continue
        dims = tuple(coh[g][j].dim for g in range(1 << n))
        mult = {}
        for degree in range(1 << n):
            if not dims[degree]:
                continue
            src = coh[degree][j]
            for b in range(n):
                if degree >> b & 1:
                    continue
                target_deg = degree | (1 << b)
                if not dims[target_deg]:
                    continue
                target = coh[target_deg][j]
                position = {gen: pos for pos, gen in enumerate(index[target_deg][j])}
                slots = [position[gen] for gen in index[degree][j]]
                cols = [target.project(_lift(rep, slots, target.ambient, fld)) for rep in src.representatives]
                mult[(degree, b)] = Matrix.from_columns(cols, dims[target_deg], fld)
        ext = SquarefreeModule(n, fld, dims, mult)
        if check:
            ext.check_commutativity()
        modules.append(ext)
    return modules


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModuleProfile:
    """dim / depth / CM flag read off the nonvanishing Ext^j(M, ω)."""

    dim: int | float
    depth: int | float
    is_cm: bool
    nonvanishing_ext: frozenset

    @property
    def is_zero(self) -> bool:
        return self.dim == -math.inf

    def zero_or_cm_of_dim(self, i: int) -> bool:
        return self.is_zero or (self.is_cm and self.dim == i)

    def to_json(self) -> dict:
        def num(x):
            return x if isinstance(x, int) else ("-inf" if x < 0 else "inf")
        return {
            "dim": num(self.dim),
            "depth": num(self.depth),
            "is_cm": self.is_cm,
            "nonvanishing_ext": sorted(self.nonvanishing_ext),
        }


def profile_from_ext(module: SquarefreeModule, ext: Sequence[SquarefreeModule]) -> ModuleProfile:
    """Profile of M given its Ext modules (zero module: -inf, +inf, CM by convention)."""
    if module.is_zero:
        return ModuleProfile(-math.inf, math.inf, True, frozenset())
    n = module.n
    nonvanishing = frozenset(j for j, e in enumerate(ext) if not e.is_zero)
    dim = module.dimension
    if not nonvanishing or n - min(nonvanishing) != dim:
        raise InvariantError(
            f"dimension {dim} disagrees with the lowest nonvanishing Ext {sorted(nonvanishing)}"
        )
    depth = n - max(nonvanishing)
    return ModuleProfile(dim, depth, nonvanishing == {n - dim}, nonvanishing)


def module_profile(module: SquarefreeModule, check: bool = True) -> ModuleProfile:
    if module.is_zero:
        return profile_from_ext(module, [])
    return profile_from_ext(module, ext_with_structure(module, check=check))
