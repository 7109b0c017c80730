"""
Lyubeznik tables of Stanley-Reisner rings, the deficiency modules K^i(R/I), and the
classification predicates (CM, sequentially CM, canonically CM, unmixed, S2).

Everything flows through one LyubeznikEngine per (ideal, field):

    R/I  --resolve-->  E^j(R/I) = Ext^j(R/I, ω)        first level, K^i = E^{n-i}
    K^i  --resolve-->  E^j(K^i)                          second level, one per nonzero K^i
    λ_{p,i} = dim E^{n-p}(K^i)_∅

classify_and_verify then checks every known implication between the predicates and the
table on the given input and raises ImplicationFailure with a full state dump if one fails.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

from complexes import (
    SimplicialComplex,
    SquarefreeIdeal,
    all_masks,
    alexander_dual,
    complex_of_ideal,
    hochster_huneke_components,
    link,
    popcount,
    primary_decomposition,
    subsets_to_lists,
    vertices_of,
)
from errors import ComplexError, ImplicationFailure, InvariantError, LyutabError, ResourceBoundError
from homology import is_sequentially_cm_duval, reduced_simplicial_homology
from linalg import FieldSpec
from sqmod import (
    FreeResolution,
    ModuleProfile,
    SquarefreeModule,
    ext_with_structure,
    minimal_free_resolution,
    profile_from_ext,
    quotient_module,
    zero_module,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_VARS = 12

ASSUMPTIONS = (
    "lambda_{p,i} = dim Ext^{n-p}(Ext^{n-i}(R/I, w), w) in degree 0 (double-Ext identity for squarefree modules)",
    "Hochster-Huneke graph counted combinatorially on the monomial minimal primes, without strict Henselization",
    "H^r_I(R) != 0 iff Ext^r(R/I, R) != 0 for squarefree monomial I",
)


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LyubeznikTable:
    """entries[p][i] = λ_{p,i} for 0 <= p, i <= d; zero below the diagonal."""

    d: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        size = self.d + 1
        if len(self.entries) != size or any(len(row) != size for row in self.entries):
            raise InvariantError(f"Lyubeznik table must be {size}x{size}")
        for p, row in enumerate(self.entries):
            for i, value in enumerate(row):
                if value < 0:
                    raise InvariantError(f"negative Lyubeznik number at ({p},{i})")
                if value and p > i:
                    raise InvariantError(f"lambda_{p},{i} = {value} below the diagonal")

    @classmethod
    def trivial(cls, d: int) -> "LyubeznikTable":
        return cls(d, tuple(tuple(1 if p == i == d else 0 for i in range(d + 1)) for p in range(d + 1)))

    def __getitem__(self, key: tuple[int, int]) -> int:
        p, i = key
        if 0 <= p <= self.d and 0 <= i <= self.d:
            return self.entries[p][i]
        return 0

    @property
    def highest(self) -> int:
        return self.entries[self.d][self.d]

    @property
    def is_trivial(self) -> bool:
        return self == LyubeznikTable.trivial(self.d)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (p - i) * v for p, row in enumerate(self.entries) for i, v in enumerate(row))

    def nonzero_cells(self) -> list[tuple[int, int]]:
        return [(p, i) for p, row in enumerate(self.entries) for i, v in enumerate(row) if v]

    def validate(self) -> None:
        if self.highest < 1:
            raise InvariantError(f"lambda_{self.d},{self.d} = {self.highest} < 1")
        if self.euler_characteristic() != 1:
            raise InvariantError(f"Euler characteristic of the table is {self.euler_characteristic()}, not 1")

    def render_text(self) -> str:
        """Upper-triangular layout: row p starts under column p."""
        width = max(len(str(v)) for row in self.entries for v in row)
        lines = []
        for p in range(self.d + 1):
            cells = " ".join(str(v).ljust(width) for v in self.entries[p][p:])
            lines.append((" " * (p * (width + 1)) + cells).rstrip())
        return "\n".join(lines)

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


# ---------------------------------------------------------------------------
# Engine
# ---------------------------------------------------------------------------

def _ext_job(args: tuple[SquarefreeModule, bool]) -> list[SquarefreeModule]:
    module, check = args
    return ext_with_structure(module, check=check)


class LyubeznikEngine:
    """
    Shared state for everything computed about one ideal over one field. The resolution of
    R/I, the first-level Ext modules and each second-level Ext list are computed at most
    once, restored from the cache when one is given, and written back by flush().
    """

    def __init__(
        self,
        ideal: SquarefreeIdeal,
        fld: FieldSpec | None = None,
        cache=None,
        jobs: int = 1,
        check: bool = True,
        max_vars: int = DEFAULT_MAX_VARS,
    ):
        if ideal.n > max_vars:
            raise ResourceBoundError(f"n = {ideal.n} exceeds the configured bound of {max_vars} variables")
        self.ideal = ideal
        self.field = fld or FieldSpec()
        self.cache = cache
        self.jobs = max(1, jobs)
        self.check = check
        self.complex: SimplicialComplex = complex_of_ideal(ideal)
        self._resolution: FreeResolution | None = None
        self._first: list[SquarefreeModule] | None = None
        self._second: dict[int, list[SquarefreeModule]] = {}
        self._dirty = False
        if cache is not None:
            self._restore(cache.load(ideal, self.field))

    @property
    def n(self) -> int:
        return self.ideal.n

    @property
    def d(self) -> int:
        return self.complex.dim + 1

    @cached_property
    def quotient(self) -> SquarefreeModule:
        return quotient_module(self.ideal, self.field)

    # -- cache --------------------------------------------------------------

    def _restore(self, payload: dict | None) -> None:
        if payload is None:
            return
        try:
            resolution = FreeResolution.from_json(payload["resolution"], self.field)
            first = [SquarefreeModule.from_json(m, self.field) for m in payload["ext"]]
            second = {
                int(i): [SquarefreeModule.from_json(m, self.field) for m in mods]
                for i, mods in payload.get("second", {}).items()
            }
        except (KeyError, TypeError, ValueError, LyutabError) as e:
            logger.warning("ignoring unreadable cache entry for %s: %s", self.ideal.canonical_json(), e)
            return
        self._resolution, self._first, self._second = resolution, first, second
        logger.info("restored resolution and %d Ext lists from cache", 1 + len(second))

    def payload(self) -> dict:
        return {
            "resolution": self.resolution.to_json(),
            "ext": [m.to_json() for m in self.first_ext],
            "second": {str(i): [m.to_json() for m in mods] for i, mods in sorted(self._second.items())},
        }

    def flush(self) -> None:
        if self.cache is not None and self._dirty:
            self.cache.store(self.ideal, self.field, self.payload())
            self._dirty = False

    # -- modules ------------------------------------------------------------

    @property
    def resolution(self) -> FreeResolution:
        if self._resolution is None:
            self._resolution = minimal_free_resolution(self.quotient, check=self.check)
            self._dirty = True
            logger.info("resolution of R/I: total Betti numbers %s", self._resolution.total_betti())
        return self._resolution

    @property
    def first_ext(self) -> list[SquarefreeModule]:
        if self._first is None:
            self._first = ext_with_structure(self.quotient, self.resolution, check=self.check)
            self._dirty = True
        return self._first

    def deficiency_module(self, i: int) -> SquarefreeModule:
        """K^i(R/I) = E^{n-i}(R/I)."""
        if i < 0 or i > self.n:
            return zero_module(self.n, self.field)
        return self.first_ext[self.n - i]

    def second_ext(self, i: int) -> list[SquarefreeModule]:
        if i not in self._second:
            self.prefetch_second([i])
        return self._second[i]

    def prefetch_second(self, indices) -> None:
        """Compute E^*(K^i) for the given i, in a process pool when jobs > 1."""
        pending = [i for i in indices if i not in self._second]
        if not pending:
            return
        work = [(self.deficiency_module(i), self.check) for i in pending]
        if self.jobs > 1 and len(pending) > 1:
            with ProcessPoolExecutor(max_workers=min(self.jobs, len(pending))) as pool:
                results = list(pool.map(_ext_job, work))
        else:
            results = [_ext_job(w) for w in work]
        for i, mods in zip(pending, results):
            self._second[i] = mods
        self._dirty = True

    # -- derived data -------------------------------------------------------

    @cached_property
    def table(self) -> LyubeznikTable:
        n, d = self.n, self.d
        live = [i for i in range(n + 1) if not self.deficiency_module(i).is_zero]
        if any(i > d for i in live):
            raise InvariantError(f"K^i nonzero above d = {d}: {live}")
        self.prefetch_second(live)
        entries = [[0] * (d + 1) for _ in range(d + 1)]
        for i in live:
            ext2 = self.second_ext(i)
            for p in range(n + 1):
                value = ext2[n - p].dims[0]
                if not value:
                    continue
                if p > i:
                    raise InvariantError(f"dim E^{n - p}(K^{i}) at degree 0 is {value} with p > i")
                entries[p][i] = value
        table = LyubeznikTable(d, tuple(tuple(row) for row in entries))
        table.validate()
        return table

    @cached_property
    def profile(self) -> ModuleProfile:
        return profile_from_ext(self.quotient, self.first_ext)

    @cached_property
    def deficiency_profiles(self) -> tuple[ModuleProfile, ...]:
        out = []
        for i in range(self.d + 1):
            module = self.deficiency_module(i)
            ext = self.second_ext(i) if not module.is_zero else []
            out.append(profile_from_ext(module, ext))
        return tuple(out)

    def lc_nonvanishing(self) -> frozenset:
        return frozenset(j for j, e in enumerate(self.first_ext) if not e.is_zero)


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def _engine(ideal: SquarefreeIdeal, fld: FieldSpec | None, engine: LyubeznikEngine | None) -> LyubeznikEngine:
    return engine if engine is not None else LyubeznikEngine(ideal, fld)


def lyubeznik_table(ideal: SquarefreeIdeal, fld: FieldSpec | None = None, engine=None) -> LyubeznikTable:
    return _engine(ideal, fld, engine).table


def deficiency_profile(ideal: SquarefreeIdeal, fld: FieldSpec | None = None, engine=None) -> list[ModuleProfile]:
    """module_profile(K^i) for i = 0..d."""
    return list(_engine(ideal, fld, engine).deficiency_profiles)


def is_seq_cm_homological(ideal: SquarefreeIdeal, fld: FieldSpec | None = None, engine=None) -> bool:
    profiles = deficiency_profile(ideal, fld, engine)
    return all(prof.zero_or_cm_of_dim(i) for i, prof in enumerate(profiles))


def is_seq_cm_duval(ideal: SquarefreeIdeal, fld: FieldSpec | None = None) -> bool:
    return is_sequentially_cm_duval(complex_of_ideal(ideal), fld or FieldSpec())


def is_ccm(ideal: SquarefreeIdeal, fld: FieldSpec | None = None, engine=None) -> bool:
    eng = _engine(ideal, fld, engine)
    top = eng.deficiency_profiles[eng.d]
    return top.is_cm and top.dim == eng.d


def is_s2(ideal: SquarefreeIdeal, fld: FieldSpec | None = None, engine=None) -> bool:
    """Serre's S2: every K^i with i < d is zero or has dimension at most i - 2."""
    eng = _engine(ideal, fld, engine)
    return all(prof.is_zero or prof.dim <= i - 2 for i, prof in enumerate(eng.deficiency_profiles[:eng.d]))


def local_cohomology_nonvanishing(ideal: SquarefreeIdeal, fld: FieldSpec | None = None, engine=None) -> frozenset:
    """{r : H^r_I(R) != 0}, read off as {r : Ext^r(R/I, R) != 0}."""
    if ideal.is_zero:
        raise ComplexError("local cohomology with support in the zero ideal is only H^0 = R")
    return _engine(ideal, fld, engine).lc_nonvanishing()


def check_hochster(engine: LyubeznikEngine) -> None:
    """Every component of every E^{n-i}(R/I) must match the reduced homology of a link."""
    n = engine.n
    faces = set(engine.complex.faces)
    for face in all_masks(n):
        hom = reduced_simplicial_homology(link(engine.complex, face), engine.field) if face in faces else {}
        for i in range(n + 1):
            expected = hom.get(i - popcount(face) - 1, 0)
            got = engine.first_ext[n - i].dims[face]
            if got != expected:
                raise InvariantError(
                    f"E^{n - i}(R/I) at {list(vertices_of(face))} has dim {got}, link homology gives {expected}"
                )


# ---------------------------------------------------------------------------
# Classification and verification
# ---------------------------------------------------------------------------

PASS = "pass"
NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class Classification:
    d: int
    depth: int | float
    is_cm: bool
    is_seq_cm_hom: bool
    is_seq_cm_duval: bool
    is_ccm: bool
    is_unmixed: bool
    is_s2: bool
    deficiency_profiles: tuple[ModuleProfile, ...]
    lc_nonvanishing: frozenset
    hh_components: int

    @property
    def is_seq_cm(self) -> bool:
        return self.is_seq_cm_hom

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "depth": self.depth if isinstance(self.depth, int) else "inf",
            "is_cm": self.is_cm,
            "is_seq_cm_hom": self.is_seq_cm_hom,
            "is_seq_cm_duval": self.is_seq_cm_duval,
            "is_ccm": self.is_ccm,
            "is_unmixed": self.is_unmixed,
            "is_s2": self.is_s2,
            "deficiency_profiles": [p.to_json() for p in self.deficiency_profiles],
            "lc_nonvanishing": sorted(self.lc_nonvanishing),
            "hh_components": self.hh_components,
        }


@dataclass
class VerificationReport:
    ideal: SquarefreeIdeal
    field: FieldSpec
    table: LyubeznikTable
    classification: Classification
    checks: dict[str, str] = field(default_factory=dict)
    assumptions: tuple[str, ...] = ASSUMPTIONS

    @property
    def converse_witness(self) -> bool:
        """Trivial table on a ring that is not sequentially CM."""
        return self.table.is_trivial and not self.classification.is_seq_cm

    def to_json(self) -> dict:
        ideal = self.ideal
        return {
            "ideal": ideal.to_document(),
            "characteristic": self.field.characteristic,
            "d": self.table.d,
            "table": self.table.to_json(),
            "trivial": self.table.is_trivial,
            "classification": self.classification.to_json(),
            "checks": dict(self.checks),
            "converse_witness": self.converse_witness,
            "alexander_dual": subsets_to_lists(alexander_dual(ideal).generators) if not ideal.is_zero else None,
            "primary_decomposition": subsets_to_lists(primary_decomposition(ideal)),
            "assumptions": list(self.assumptions),
        }


def classify(engine: LyubeznikEngine) -> Classification:
    profiles = engine.deficiency_profiles
    d = engine.d
    lc = frozenset({0}) if engine.ideal.is_zero else engine.lc_nonvanishing()
    return Classification(
        d=d,
        depth=engine.profile.depth,
        is_cm=engine.profile.is_cm,
        is_seq_cm_hom=all(prof.zero_or_cm_of_dim(i) for i, prof in enumerate(profiles)),
        is_seq_cm_duval=is_sequentially_cm_duval(engine.complex, engine.field),
        is_ccm=profiles[d].is_cm and profiles[d].dim == d,
        is_unmixed=engine.complex.is_pure,
        is_s2=all(prof.is_zero or prof.dim <= i - 2 for i, prof in enumerate(profiles[:d])),
        deficiency_profiles=profiles,
        lc_nonvanishing=lc,
        hh_components=hochster_huneke_components(engine.complex),
    )


def _run_checks(engine: LyubeznikEngine, table: LyubeznikTable, cls: Classification) -> tuple[dict, list[str]]:
    checks: dict[str, str] = {}
    failures: list[str] = []
    d = table.d

    def record(name: str, applicable: bool, holds: bool, detail: str) -> None:
        if not applicable:
            checks[name] = NOT_APPLICABLE
        elif holds:
            checks[name] = PASS
        else:
            checks[name] = "fail"
            failures.append(f"{name}: {detail}")

    record("a_seq_cm_trivial", cls.is_seq_cm, table.is_trivial, "sequentially CM ring with a nontrivial table")
    record("b_euler", True, table.euler_characteristic() == 1, f"Euler characteristic {table.euler_characteristic()}")
    record(
        "c_ccm_column", cls.is_ccm, all(table[i, d] == 0 for i in range(d)),
        f"CCM ring with nonzero lambda_(i,{d}) for some i < {d}",
    )

    profiles = cls.deficiency_profiles
    unmixed_hyp = cls.is_unmixed and all(
        prof.is_zero or prof.depth >= i - 1 for i, prof in enumerate(profiles[:d])
    )
    allowed = {(j - 1, j) for j in range(1, d)} | {(d, d)}
    shape = all(cell in allowed for cell in table.nonzero_cells())
    superdiagonal = sum(table[j - 1, j] for j in range(1, d))
    refined = all(prof.zero_or_cm_of_dim(i - 1) for i, prof in enumerate(profiles[:d]))
    record(
        "d_unmixed_shape", unmixed_hyp,
        shape and superdiagonal == table.highest - 1 and refined and (table.highest != 1 or table.is_trivial),
        f"unmixed ring with depth K^i >= i-1 but table cells {table.nonzero_cells()}",
    )
    record("e_cm_trivial", cls.is_cm, table.highest == 1 and table.is_trivial, "CM ring with a nontrivial table")
    record(
        "f_hh_components", True, table.highest == cls.hh_components,
        f"lambda_(d,d) = {table.highest} but the Hochster-Huneke graph has {cls.hh_components} components",
    )
    record(
        "g_seq_cm_oracles", True, cls.is_seq_cm_hom == cls.is_seq_cm_duval,
        f"homological says {cls.is_seq_cm_hom}, Duval says {cls.is_seq_cm_duval}",
    )
    record("h_s2_highest", cls.is_s2, table.highest == 1, f"S2 ring with lambda_(d,d) = {table.highest}")
    record(
        "i_single_lc", len(cls.lc_nonvanishing) == 1, table.is_trivial,
        f"only H^{min(cls.lc_nonvanishing)}_I(R) is nonzero but the table is nontrivial",
    )
    n = engine.n
    bass = all(
        n - p in profiles[i].nonvanishing_ext for p, i in table.nonzero_cells()
    )
    record("j_bass_vanishing", True, bass, "lambda_(p,i) != 0 while H^p_m(K^i) = 0")
    hierarchy = (not cls.is_cm or cls.is_seq_cm) and (not cls.is_seq_cm or cls.is_ccm)
    record("k_hierarchy", True, hierarchy, "CM => sequentially CM => CCM violated")
    return checks, failures


def classify_and_verify(
    ideal: SquarefreeIdeal,
    fld: FieldSpec | None = None,
    engine: LyubeznikEngine | None = None,
) -> VerificationReport:
    """Full classification plus every applicable implication; a failed one raises ImplicationFailure."""
    eng = _engine(ideal, fld, engine)
    table = eng.table
    cls = classify(eng)
    checks, failures = _run_checks(eng, table, cls)
    report = VerificationReport(eng.ideal, eng.field, table, cls, checks)
    if failures:
        raise ImplicationFailure("; ".join(failures), state=report.to_json())
    logger.info(
        "%s over %s: d=%d trivial=%s seq_cm=%s", ideal.canonical_json(), eng.field.label,
        table.d, table.is_trivial, cls.is_seq_cm,
    )
    return report


def depth_text(value: int | float) -> str:
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return str(value)
