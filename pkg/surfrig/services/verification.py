"""Batch verification: generate, reduce, replay and analyze.

Each trial owns a sub-seed drawn in index order from the run seed, so
the summary does not depend on how trials are scheduled.
"""

import logging
import random
from concurrent.futures import ProcessPoolExecutor

from surfrig.config import Settings, get_settings
from surfrig.exceptions import GraphInputError
from surfrig.models.schemas import (
    RigidityReport,
    VerdictStrength,
    VerifyOutcome,
    VerifySummary,
)
from surfrig.services.geometry import parse_surface, surface_label
from surfrig.services.reducer import generate, reduce, replay
from surfrig.services.rigidity import RigidityService

logger = logging.getLogger(__name__)

EXPECTATIONS = ("isostatic", "dependent")

# Smallest vertex count from which every larger count is reachable.
MIN_VERTICES = {1: 5, 2: 4, 3: 2}


def passes(report: RigidityReport, replay_ok: bool, expect: str) -> bool:
    """Whether one analyzed graph meets the expectation."""
    if not replay_ok:
        return False
    if expect == "isostatic":
        return (
            report.isostatic
            and report.strength == VerdictStrength.CERTIFIED
        )
    return not report.independent


def verify_one(
    index: int,
    n: int,
    k: int,
    surface_spec: str,
    expect: str,
    seed: int,
    settings: Settings,
) -> VerifyOutcome:
    """Run one trial; module level so worker processes can import it."""
    surface = parse_surface(surface_spec)
    graph, _ = generate(n, k, seed)
    certificate = reduce(graph, k)
    replay_ok = replay(certificate) == graph
    report = RigidityService(settings).analyze(graph, surface, seed=seed)
    passed = passes(report, replay_ok, expect)
    logger.debug("Trial %d: n=%d passed=%s", index, n, passed)
    return VerifyOutcome(
        index=index,
        n=graph.n,
        edges=graph.num_edges,
        steps=len(certificate.steps),
        replay_ok=replay_ok,
        report=report,
        passed=passed,
    )


class VerifyService:
    """Runs verify batches sequentially or on a process pool.

    Attributes:
        settings: Trial counts, sample height and worker count.
    """

    def __init__(self, settings: Settings | None = None) -> None:
        self.settings = settings or get_settings()

    def run(
        self,
        n_max: int,
        k: int,
        trials: int,
        surface_spec: str,
        expect: str = "isostatic",
        seed: int | None = None,
        workers: int | None = None,
    ) -> VerifySummary:
        """Check `trials` random (2,k)-tight graphs on a surface.

        Vertex counts are drawn uniformly between the smallest count
        from which generation always succeeds and ``n_max``.

        Args:
            n_max: Largest vertex count.
            k: Sparsity parameter of the generated graphs.
            trials: Number of graphs.
            surface_spec: Preset string such as ``"torus:R=2,r=1"``.
            expect: ``"isostatic"`` or ``"dependent"``.
            seed: Run seed; defaults to settings.
            workers: Process count; defaults to settings.

        Returns:
            The summary with outcomes ordered by trial index.

        Raises:
            ValueError: If trials or expect is invalid.
            GraphInputError: If n_max is below the smallest count.
            SurfaceError: If the surface string is invalid.
        """
        if trials < 1:
            raise ValueError("trials must be positive")
        if expect not in EXPECTATIONS:
            raise ValueError(f"expect must be one of {EXPECTATIONS}")
        if k not in MIN_VERTICES:
            raise ValueError(f"k must be 1, 2 or 3, got {k}")
        if n_max < MIN_VERTICES[k]:
            raise GraphInputError(
                f"n must be at least {MIN_VERTICES[k]} for k={k}"
            )
        surface = parse_surface(surface_spec)
        seed = self.settings.seed if seed is None else seed
        workers = self.settings.workers if workers is None else workers
        rng = random.Random(seed)
        jobs = [
            (
                i,
                rng.randint(MIN_VERTICES[k], n_max),
                k,
                surface_spec,
                expect,
                rng.getrandbits(64),
                self.settings,
            )
            for i in range(trials)
        ]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(verify_one, *zip(*jobs)))
        else:
            outcomes = [verify_one(*job) for job in jobs]
        passed = sum(o.passed for o in outcomes)
        logger.info(
            "Verified %d/%d graphs on %s", passed, trials, surface.name
        )
        return VerifySummary(
            surface=surface_label(surface),
            k=k,
            n_max=n_max,
            expect=expect,
            seed=seed,
            trials=trials,
            passed=passed,
            failed=trials - passed,
            outcomes=outcomes,
        )
