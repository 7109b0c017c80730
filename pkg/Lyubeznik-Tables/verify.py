"""
Corpus verification: classify_and_verify on every generated complex, plus the checks that
only make sense on generated data (construction certificates, Hochster agreement of every
Ext component, sequential CM-ness of shellable and forest elements).

Elements run in a process pool when jobs > 1; results come back in corpus order, so the
aggregate is identical for any job count.
"""
import logging
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor

from tqdm import tqdm

from complexes import ideal_of_complex, subsets_to_lists
from config import RunConfig
from corpus import CorpusItem, certificate_holds, generate_corpus
from errors import ImplicationFailure, LyutabError
from linalg import FieldSpec
from lyub import LyubeznikEngine, check_hochster, classify_and_verify

logger = logging.getLogger(__name__)

SEQ_CM_FAMILIES = ("nonpure-shellable", "forest")


def verify_element(task: tuple[CorpusItem, FieldSpec, bool, int]) -> dict:
    """Verify one corpus element; errors come back as data so they survive the pool."""
    item, fld, check, max_vars = task
    facets = subsets_to_lists(item.complex.facets)
    ideal = ideal_of_complex(item.complex)
    try:
        if not certificate_holds(item):
            raise ImplicationFailure(f"{item.family} element #{item.index} fails its construction certificate")
        engine = LyubeznikEngine(ideal, fld, check=check, max_vars=max_vars)
        check_hochster(engine)
        report = classify_and_verify(ideal, fld, engine)
        if item.family in SEQ_CM_FAMILIES and not report.classification.is_seq_cm:
            raise ImplicationFailure(f"{item.family} element #{item.index} is not sequentially CM")
    except LyutabError as e:
        state = getattr(e, "state", None) or {}
        return {
            "index": item.index,
            "facets": facets,
            "ideal": ideal.canonical_json(),
            "error": {"type": type(e).__name__, "message": str(e), "exit_code": e.exit_code, "state": state},
        }
    cls = report.classification
    return {
        "index": item.index,
        "facets": facets,
        "ideal": ideal.canonical_json(),
        "d": report.table.d,
        "trivial": report.table.is_trivial,
        "is_cm": cls.is_cm,
        "is_seq_cm": cls.is_seq_cm,
        "is_ccm": cls.is_ccm,
        "converse_witness": report.converse_witness,
        "checks": report.checks,
    }


def _run(tasks: list, jobs: int, quiet: bool, desc: str) -> list[dict]:
    disable = quiet or not sys.stderr.isatty()
    with tqdm(total=len(tasks), desc=desc, file=sys.stderr, disable=disable, dynamic_ncols=True) as bar:
        if jobs <= 1:
            results = []
            for task in tasks:
                results.append(verify_element(task))
                bar.update(1)
            return results
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = []
            for result in pool.map(verify_element, tasks, chunksize=1):
                results.append(result)
                bar.update(1)
            return results


def aggregate(config: RunConfig, results: list[dict]) -> dict:
    checks: dict[str, Counter] = {}
    failures = []
    for r in results:
        if "error" in r:
            failures.append(r)
            continue
        for name, outcome in r["checks"].items():
            checks.setdefault(name, Counter())[outcome] += 1
    ok = [r for r in results if "error" not in r]
    spec = config.corpus
    return {
        "family": spec.family,
        "n": spec.n,
        "count": spec.count,
        "seed": config.seed,
        "characteristic": config.field.characteristic,
        "verified": len(ok),
        "checks": {name: dict(sorted(c.items())) for name, c in sorted(checks.items())},
        "trivial": sum(r["trivial"] for r in ok),
        "is_cm": sum(r["is_cm"] for r in ok),
        "is_seq_cm": sum(r["is_seq_cm"] for r in ok),
        "is_ccm": sum(r["is_ccm"] for r in ok),
        "converse_witnesses": [r["ideal"] for r in ok if r["converse_witness"]],
        "non_ccm_witnesses": [r["ideal"] for r in ok if not r["is_ccm"]],
        "failures": failures,
    }


def verify_corpus(config: RunConfig) -> tuple[dict, int]:
    """Aggregate report and exit code (0, or the code of the most severe failure)."""
    items = generate_corpus(config.corpus, config.seed)
    tasks = [(item, config.field, config.check_invariants, config.max_vars) for item in items]
    results = _run(tasks, config.jobs, config.quiet, f"verify {config.corpus.family}")
    report = aggregate(config, results)
    if not report["failures"]:
        return report, 0
    for failure in report["failures"]:
        logger.error("element #%d failed (%s): %s", failure["index"], failure["ideal"], failure["error"]["message"])
    return report, max(f["error"]["exit_code"] for f in report["failures"])
