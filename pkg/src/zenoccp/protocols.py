"""Protocol engines: classical block strategy, P_E, P_1 and P_2.

Each protocol has an exact evaluator and a one-shot stochastic simulator.
Exact evaluators work with *step error laws*: the distribution of the
deviation (mod d) between the label a link contributes to the final answer
and its true ``a``.  Steps are independent, so the chain success is the mass
at zero of their cyclic convolution.  Cancelling errors are included.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import enum
import functools
import itertools
import math

import numpy as np

from . import qudit
from .model import CcpInstance, InputAssignment, ground_truth

EXHAUSTIVE_LIMIT = 10**6


class ProtocolKind(enum.Enum):
    CLASSICAL = "classical"
    PE = "PE"
    P1 = "P1"
    P2 = "P2"

    @classmethod
    def parse(cls, name: str) -> "ProtocolKind":
        for kind in cls:
            if name.lower() in (kind.value.lower(), kind.name.lower()):
                return kind
        raise ValueError(f"unknown protocol {name!r}")


QUANTUM = (ProtocolKind.PE, ProtocolKind.P1, ProtocolKind.P2)


@dataclass(frozen=True)
class StepErrorDistribution:
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"step law sums to {p.sum()!r}")
        object.__setattr__(self, "probs", p)

    @property
    def d(self) -> int:
        return len(self.probs)

    def convolve(self, other: "StepErrorDistribution") -> "StepErrorDistribution":
        d = self.d
        out = np.zeros(d)
        for i, pi in enumerate(self.probs):
            out += pi * np.roll(other.probs, i)
        return StepErrorDistribution(out)

    @property
    def p_zero(self) -> float:
        return float(self.probs[0])


def chain(laws) -> StepErrorDistribution:
    return functools.reduce(StepErrorDistribution.convolve, laws)


# ---------------------------------------------------------------- classical


@dataclass(frozen=True)
class ClassicalStrategy:
    """Block encoding f(x) = k iff x in G_k = {Nk, ..., N(k+1)-1} + offset, MAP decoding."""

    partition_offset: int = 0

    def encode(self, x: int, inst: CcpInstance) -> int:
        return ((x - self.partition_offset) % inst.modulus) // inst.N

    def decode(self, k: int, y: int, inst: CcpInstance) -> int:
        """Most likely label l' given message k and own input y (ties go to the smaller l')."""
        counts = [
            sum(self.encode((y + l * inst.N + b) % inst.modulus, inst) == k for b in range(-inst.mu, inst.mu + 1))
            for l in range(inst.d)
        ]
        return int(np.argmax(counts))


def classical_step_error_distribution(y: int, inst: CcpInstance, strategy: ClassicalStrategy = ClassicalStrategy()):
    """Error law of one hop when the receiver holds ``y`` and (a, b) are uniform."""
    counts = np.zeros(inst.d)
    for a in range(inst.d):
        for b in range(-inst.mu, inst.mu + 1):
            x = (y + a * inst.N + b) % inst.modulus
            guess = strategy.decode(strategy.encode(x, inst), y, inst)
            counts[(guess - a) % inst.d] += 1
    return StepErrorDistribution(counts / counts.sum())


@functools.lru_cache(maxsize=256)
def _classical_average_step(inst: CcpInstance, strategy: ClassicalStrategy) -> StepErrorDistribution:
    total = sum(classical_step_error_distribution(y, inst, strategy).probs for y in range(inst.modulus))
    return StepErrorDistribution(total / inst.modulus)


def exact_success_classical(
    inst: CcpInstance, assignment: InputAssignment | None = None, strategy: ClassicalStrategy = ClassicalStrategy()
) -> float:
    """Chain success of the block strategy.

    With no assignment, averages over uniform inputs.  With an assignment,
    conditions on its receiving inputs y_2..y_M and averages over the
    promise-consistent senders.
    """
    if assignment is None:
        return chain([_classical_average_step(inst, strategy)] * (inst.M - 1)).p_zero
    return chain(classical_step_error_distribution(y, inst, strategy) for y in assignment.ys).p_zero


# ---------------------------------------------------------------- quantum


def drift_law(drift: int, N: int, d: int) -> np.ndarray:
    """P(outcome - true label = eps) for a Fourier measurement after total drift ``drift``.

    Direct evaluation of the cosine/sine double sum, not the closed-form kernel.
    """
    k = np.arange(d)[:, None]
    eps = np.arange(d)[None, :]
    ang = 2 * np.pi * k / d * (drift / N - eps)
    return (np.cos(ang).sum(axis=0) ** 2 + np.sin(ang).sum(axis=0) ** 2) / d**2


def quantum_step_error_distribution(b: int, inst: CcpInstance) -> StepErrorDistribution:
    if abs(b) > inst.mu:
        raise ValueError(f"|b| = {abs(b)} exceeds mu = {inst.mu}")
    return StepErrorDistribution(drift_law(b, inst.N, inst.d))


def exact_success_P1(assignment: InputAssignment, inst: CcpInstance) -> float:
    return float(drift_law(assignment.B, inst.N, inst.d)[0])


def _zeno_chain_success(bs, inst: CcpInstance) -> float:
    return chain(quantum_step_error_distribution(b, inst) for b in bs).p_zero


def exact_success_P2(assignment: InputAssignment, inst: CcpInstance) -> float:
    # after a QND collapse to |e_l> the next step's deviation law does not depend on l
    return _zeno_chain_success(assignment.bs, inst)


def exact_success_PE(assignment: InputAssignment, inst: CcpInstance) -> float:
    # a link's joint (l1, l2) law summed over l1 + l2 = a + eps gives the same step law
    return _zeno_chain_success(assignment.bs, inst)


def _uniform_drift_pmf(inst: CcpInstance) -> dict[int, float]:
    """Distribution of B = sum of M-1 independent uniform b in [-mu, mu]."""
    width = 2 * inst.mu + 1
    pmf = np.ones(1)
    for _ in range(inst.M - 1):
        pmf = np.convolve(pmf, np.ones(width) / width)
    lo = -inst.mu * (inst.M - 1)
    return {lo + i: float(p) for i, p in enumerate(pmf)}


def average_success(kind: ProtocolKind, inst: CcpInstance, strategy: ClassicalStrategy = ClassicalStrategy()) -> float:
    """Exact success averaged over the uniform input distribution."""
    if kind is ProtocolKind.CLASSICAL:
        return exact_success_classical(inst, None, strategy)
    if kind is ProtocolKind.P1:
        return sum(p * drift_law(B, inst.N, inst.d)[0] for B, p in _uniform_drift_pmf(inst).items())
    step = np.mean([drift_law(b, inst.N, inst.d) for b in range(-inst.mu, inst.mu + 1)], axis=0)
    return chain([StepErrorDistribution(step)] * (inst.M - 1)).p_zero


def exact_success(kind: ProtocolKind, inst: CcpInstance, assignment: InputAssignment | None = None, **kw) -> float:
    if assignment is None:
        return average_success(kind, inst, **kw)
    if kind is ProtocolKind.CLASSICAL:
        return exact_success_classical(inst, assignment, **kw)
    return {ProtocolKind.PE: exact_success_PE, ProtocolKind.P1: exact_success_P1, ProtocolKind.P2: exact_success_P2}[
        kind
    ](assignment, inst)


@dataclass(frozen=True)
class WorstCase:
    success: float
    drifts: tuple[int, ...]
    exhaustive: bool


def worst_case_success(kind: ProtocolKind, inst: CcpInstance) -> WorstCase:
    """Minimum exact success over all drift vectors |b_i| <= mu.

    Falls back to the all-b=mu vector when the search space exceeds
    ``EXHAUSTIVE_LIMIT``; that is exact for d=2 only.
    """
    if kind is ProtocolKind.CLASSICAL:
        raise ValueError("worst case is defined for the quantum protocols only")
    L, mu = inst.M - 1, inst.mu
    if (2 * mu + 1) ** L > EXHAUSTIVE_LIMIT:
        bs = (mu,) * L
        val = float(drift_law(sum(bs), inst.N, inst.d)[0]) if kind is ProtocolKind.P1 else _zeno_chain_success(bs, inst)
        return WorstCase(val, bs, False)
    if kind is ProtocolKind.P1:
        # success depends only on B; scan its attainable range
        B = min(range(-mu * L, mu * L + 1), key=lambda B: drift_law(B, inst.N, inst.d)[0])
        bs = tuple(_split_drift(B, L, mu))
        return WorstCase(float(drift_law(B, inst.N, inst.d)[0]), bs, True)
    # order of steps is irrelevant to a convolution
    best = None
    for bs in itertools.combinations_with_replacement(range(-mu, mu + 1), L):
        val = _zeno_chain_success(bs, inst)
        if best is None or val < best.success:
            best = WorstCase(val, bs, True)
    return best


def _split_drift(B: int, L: int, mu: int) -> list[int]:
    out = []
    for _ in range(L):
        b = max(-mu, min(mu, B))
        out.append(b)
        B -= b
    return out


# ---------------------------------------------------------------- efficiency


@dataclass(frozen=True)
class EfficiencyModel:
    eta: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"detector efficiency must lie in [0, 1], got {self.eta}")


def measurement_count(kind: ProtocolKind, M: int) -> int:
    return {ProtocolKind.CLASSICAL: 0, ProtocolKind.PE: 2 * (M - 1), ProtocolKind.P1: 1, ProtocolKind.P2: M - 1}[kind]


def efficiency_adjusted_success(p_ideal: float, kind: ProtocolKind, inst: CcpInstance, eta: float) -> float:
    """All measurements fire with probability eta**m; otherwise the answer is a uniform guess."""
    EfficiencyModel(eta)
    all_ok = eta ** measurement_count(kind, inst.M)
    return all_ok * p_ideal + (1 - all_ok) / inst.d


def efficiency_crossover(p1: float, p_other: float, kind: ProtocolKind, inst: CcpInstance) -> float | None:
    """Efficiency below which P_1 beats ``kind`` despite a weaker ideal success.

    Solves eta*(p1 - 1/d) = eta**m * (p_other - 1/d); None if no crossover in (0, 1).
    """
    m = measurement_count(kind, inst.M)
    g1, g2 = p1 - 1 / inst.d, p_other - 1 / inst.d
    if m <= 1 or g1 <= 0 or g2 <= 0:
        return None
    eta = (g1 / g2) ** (1 / (m - 1))
    return eta if 0 < eta < 1 else None


# ---------------------------------------------------------------- sampled runs


@dataclass
class RunTranscript:
    kind: ProtocolKind
    per_step: list
    final_answer: int
    correct: bool
    detector_failed: bool


def _run_classical(a: InputAssignment, inst: CcpInstance, strategy: ClassicalStrategy):
    steps = []
    xs, ys = a.xs, a.ys
    x_eff = xs[0]
    guess = 0
    for i, y in enumerate(ys):
        k = strategy.encode(x_eff, inst)
        guess = strategy.decode(k, y, inst)
        steps.append((k, guess))
        if i + 1 < len(xs):
            # fold the running estimate into the next input and re-encode
            x_eff = (xs[i + 1] + inst.N * guess) % inst.modulus
    return steps, guess


def _run_P1(a: InputAssignment, inst: CcpInstance, rng):
    N, d = inst.N, inst.d
    st = qudit.apply_phase(qudit.uniform_state(d), a.x_first, N, d)
    for x, y in a.middle:
        st = qudit.apply_phase(st, x - y, N, d)
    st = qudit.apply_phase(st, -a.y_last, N, d)
    l = qudit.sample_outcome(qudit.fourier_distribution(st), rng)
    return [l], l


def _run_P2(a: InputAssignment, inst: CcpInstance, rng):
    N, d = inst.N, inst.d
    st = qudit.apply_phase(qudit.uniform_state(d), a.x_first, N, d)
    steps = []
    for x, y in a.middle:
        st = qudit.apply_phase(st, -y, N, d)
        l, st = qudit.qnd_collapse(st, rng)
        steps.append(l)
        st = qudit.apply_phase(st, x, N, d)
    st = qudit.apply_phase(st, -a.y_last, N, d)
    l = qudit.sample_outcome(qudit.fourier_distribution(st), rng)
    steps.append(l)
    return steps, l


def _run_PE(a: InputAssignment, inst: CcpInstance, rng):
    N, d = inst.N, inst.d
    message = 0
    steps = []
    for x, y in zip(a.xs, a.ys):
        st = qudit.apply_phase_local(qudit.entangled_state(d), x, "left", N, d)
        st = qudit.apply_phase_local(st, -y, "right", N, d)
        l_send, l_recv = qudit.sample_outcome(qudit.fourier_distribution(st), rng)
        steps.append((l_send, l_recv))
        message = (message + l_send + l_recv) % d
    return steps, message


def simulate_run(
    kind: ProtocolKind,
    assignment: InputAssignment,
    inst: CcpInstance,
    rng: np.random.Generator,
    efficiency: EfficiencyModel | None = None,
    strategy: ClassicalStrategy = ClassicalStrategy(),
) -> RunTranscript:
    if kind is ProtocolKind.CLASSICAL:
        steps, answer = _run_classical(assignment, inst, strategy)
    elif kind is ProtocolKind.P1:
        steps, answer = _run_P1(assignment, inst, rng)
    elif kind is ProtocolKind.P2:
        steps, answer = _run_P2(assignment, inst, rng)
    else:
        steps, answer = _run_PE(assignment, inst, rng)
    failed = False
    if efficiency is not None and efficiency.eta < 1.0:
        m = measurement_count(kind, inst.M)
        failed = bool(m) and bool((rng.random(m) >= efficiency.eta).any())
        if failed:
            answer = int(rng.integers(inst.d))
    answer %= inst.d
    truth = ground_truth(assignment, inst)
    return RunTranscript(kind, steps, answer, answer == truth, failed)


def binomial_stderr(p: float, n: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / n)
