"""Seeded Monte Carlo batches.

Trial ``i`` of a batch with master seed ``s`` draws from
``np.random.default_rng(np.random.SeedSequence(s, spawn_key=(i,)))``, so any
trial can be replayed alone and the batch result does not depend on how
trials are split across workers.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import CcpInstance, InputAssignment, sample_assignment
from .protocols import EfficiencyModel, ProtocolKind, binomial_stderr, simulate_run


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


@dataclass(frozen=True)
class BatchResult:
    kind: ProtocolKind
    trials: int
    successes: int
    detector_failures: int

    @property
    def rate(self) -> float:
        return self.successes / self.trials

    @property
    def stderr(self) -> float:
        return binomial_stderr(self.rate, self.trials)


def _run_chunk(args) -> tuple[int, int]:
    kind, inst, seed, start, stop, eta, assignment = args
    eff = EfficiencyModel(eta) if eta is not None else None
    ok = fails = 0
    for i in range(start, stop):
        rng = trial_rng(seed, i)
        a = assignment if assignment is not None else sample_assignment(inst, rng)
        t = simulate_run(kind, a, inst, rng, eff)
        ok += t.correct
        fails += t.detector_failed
    return ok, fails


def run_batch(
    kind: ProtocolKind,
    inst: CcpInstance,
    trials: int,
    seed: int,
    eta: float | None = None,
    assignment: InputAssignment | None = None,
    workers: int = 1,
    chunk: int = 5000,
) -> BatchResult:
    """Run ``trials`` independent protocol runs; fresh inputs per trial unless ``assignment`` is fixed."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    jobs = [(kind, inst, seed, s, min(s + chunk, trials), eta, assignment) for s in range(0, trials, chunk)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(j) for j in jobs]
    return BatchResult(kind, trials, sum(p[0] for p in parts), sum(p[1] for p in parts))
