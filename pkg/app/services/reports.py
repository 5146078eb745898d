"""
Report assembly for claim runs.

Runs (claim, group) pairs, optionally on a process pool, then sorts the
results by (claim id, group name) and renders them as text (jinja2
template) or JSON.
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

from jinja2 import Environment, FileSystemLoader

from app.config import settings
from app.services.claims import ClaimResult, all_claims, get_claim, run_claim
from app.services.corpus import get_group
from app.services.groups import FiniteGroup, GroupError

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).parent.parent / "templates"

GroupRef = Union[str, FiniteGroup]


def _task_ref(G: FiniteGroup) -> GroupRef:
    # corpus groups are rebuilt by name in the worker so its caches stay warm
    try:
        if get_group(G.name) is G:
            return G.name
    except GroupError:
        pass
    return G


def _run_task(claim_id: str, ref: GroupRef, timings: bool) -> Dict:
    G = get_group(ref) if isinstance(ref, str) else ref
    return run_claim(claim_id, G, timings=timings).model_dump()


def run_all(
    groups: Sequence[FiniteGroup],
    claim_ids: Optional[Iterable[str]] = None,
    jobs: Optional[int] = None,
    timings: bool = False,
) -> List[ClaimResult]:
    """
    Run every selected claim on every selected group.

    Args:
        groups: groups to check
        claim_ids: claim ids to run; None runs the whole registry
        jobs: worker processes; 1 runs serially in this process
        timings: record wall-clock milliseconds in each result

    Returns:
        List of ClaimResult sorted by (claim, group)
    """
    jobs = settings.jobs if jobs is None else jobs
    ids = [c.id for c in all_claims()] if claim_ids is None else list(claim_ids)
    for claim_id in ids:
        get_claim(claim_id)

    tasks = [(claim_id, G) for claim_id in ids for G in groups]
    logger.info(f"Running {len(ids)} claims on {len(groups)} groups ({len(tasks)} checks, jobs={jobs})")

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(_run_task, claim_id, _task_ref(G), timings) for claim_id, G in tasks]
            results = [ClaimResult(**f.result()) for f in futures]
    else:
        results = [run_claim(claim_id, G, timings=timings) for claim_id, G in tasks]

    results.sort(key=lambda r: (r.claim, r.group))
    counts = summarize(results)
    logger.info(f"Finished: {counts['pass']} pass, {counts['fail']} fail, {counts['info']} info")
    return results


def summarize(results: Iterable[ClaimResult]) -> Dict[str, int]:
    counts = {"pass": 0, "fail": 0, "info": 0}
    for r in results:
        counts[r.status] += 1
    return counts


def exit_code(results: Iterable[ClaimResult]) -> int:
    return 1 if any(r.status == "fail" for r in results) else 0


def render_json(results: Sequence[ClaimResult]) -> str:
    return json.dumps([r.model_dump() for r in results], indent=2, sort_keys=False, ensure_ascii=False)


def render_text(results: Sequence[ClaimResult], timings: bool = False) -> str:
    env = Environment(loader=FileSystemLoader(str(TEMPLATE_DIR)), trim_blocks=True, lstrip_blocks=True)
    template = env.get_template("report.txt.j2")
    return template.render(results=results, counts=summarize(results), timings=timings)


def render(results: Sequence[ClaimResult], as_json: bool = False, timings: bool = False) -> str:
    return render_json(results) if as_json else render_text(results, timings=timings)


def write_report(text: str, output: str) -> Path:
    """Write a report; relative paths land under settings.reports_dir."""
    path = Path(output)
    if not path.is_absolute():
        path = Path(settings.reports_dir) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    logger.info(f"Report written to {path}")
    return path
