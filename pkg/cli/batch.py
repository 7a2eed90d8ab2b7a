"""
Batch execution over several input files.

Files run on a thread pool; each file's output is rendered into its own
buffer and the buffers are emitted in input order.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

from django.conf import settings

from core.responses import EXIT_OK, CommandResult

from .parsing import canonical_json
from .runner import RunOptions, render, run

logger = logging.getLogger(__name__)


@dataclass
class BatchOutput:
    results: List[CommandResult]
    stdout: str

    @property
    def exit_code(self) -> int:
        return max((r.exit_code for r in self.results), default=EXIT_OK)

    def first_problem(self) -> Optional[CommandResult]:
        return next((r for r in self.results if r.exit_code != EXIT_OK), None)


def run_batch(command: str, options: RunOptions, paths: Sequence[Optional[str]],
              jobs: Optional[int] = None) -> BatchOutput:
    jobs = jobs or getattr(settings, 'CHAINMAIL_DEFAULT_JOBS', 1)
    targets = list(paths) or [None]

    if jobs > 1 and len(targets) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda path: run(command, options, path), targets))
    else:
        results = [run(command, options, path) for path in targets]

    if len(targets) == 1:
        stdout = render(results[0], options.format)
    elif options.format == 'json':
        stdout = canonical_json([
            dict(result.envelope(), path=path) for path, result in zip(targets, results)
        ])
    else:
        stdout = ''.join(
            f"== {path} ==\n{render(result, options.format)}" for path, result in zip(targets, results)
        )

    failed = sum(1 for r in results if r.exit_code != EXIT_OK)
    logger.info(f"🧭 {command}: {len(targets)} inputs, {failed} not OK, jobs={jobs}")
    return BatchOutput(results, stdout)
