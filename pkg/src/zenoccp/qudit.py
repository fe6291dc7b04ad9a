"""Pure-state qudit substrate: phase unitaries, Fourier-basis statistics, QND collapse.

Conventions
-----------
U(z) multiplies amplitude ``k`` by ``exp(2*pi*i*z*k / (d*N))``.
Fourier vectors are ``|e_l> = d**-0.5 * sum_k exp(2*pi*i*k*l/d) |k>`` and
``<e_l|psi>`` conjugates the basis vector.  Bipartite states are dense
length ``d*d`` vectors indexed ``d*k_left + k_right``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import functools
import math

import numpy as np

NORM_TOL = 1e-12
PROB_TOL = 1e-15


class DimensionError(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PureState:
    dim: int
    amps: np.ndarray = field(repr=False)
    bipartite: bool = False

    def __post_init__(self):
        amps = _frozen(self.amps)
        object.__setattr__(self, "amps", amps)
        if self.dim < 2 or amps.shape != (self.dim,):
            raise DimensionError(f"amplitude vector of shape {amps.shape} does not match dim={self.dim}")
        if self.bipartite and math.isqrt(self.dim) ** 2 != self.dim:
            raise DimensionError(f"bipartite state needs a square dimension, got {self.dim}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalised (norm^2 = {norm!r})")

    @property
    def local_dim(self) -> int:
        return math.isqrt(self.dim) if self.bipartite else self.dim


@dataclass(frozen=True)
class OutcomeDistribution:
    """Outcome probabilities; ``probs`` is 1-D for one qudit, ``(d, d)`` for a joint measurement."""

    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.min() < -PROB_TOL or p.max() > 1 + PROB_TOL:
            raise ValueError(f"probability outside [0, 1] beyond tolerance: [{p.min()!r}, {p.max()!r}]")
        p = np.clip(p, 0.0, 1.0)
        if abs(p.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities sum to {p.sum()!r}")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def joint(self) -> bool:
        return self.probs.ndim == 2

    def __getitem__(self, label):
        return float(self.probs[label])


def _phases(z: int, N: int, d: int) -> np.ndarray:
    # z*k stays an exact integer; only the final ratio goes to floating point
    k = np.arange(d)
    return np.exp(2j * np.pi * ((z * k) % (d * N)) / (d * N))


@functools.lru_cache(maxsize=64)
def fourier_basis(d: int) -> np.ndarray:
    """Columns are the Fourier vectors |e_l>."""
    k = np.arange(d)
    F = np.exp(2j * np.pi * np.outer(k, k) / d) / math.sqrt(d)
    F.setflags(write=False)
    return F


def uniform_state(d: int) -> PureState:
    if d < 2:
        raise DimensionError(f"alphabet size must be >= 2, got {d}")
    return PureState(d, np.full(d, 1 / math.sqrt(d)))


def entangled_state(d: int) -> PureState:
    """(1/sqrt d) sum_k |kk>."""
    if d < 2:
        raise DimensionError(f"alphabet size must be >= 2, got {d}")
    amps = np.zeros(d * d, dtype=complex)
    amps[np.arange(d) * (d + 1)] = 1 / math.sqrt(d)
    return PureState(d * d, amps, bipartite=True)


def fourier_state(l: int, d: int) -> PureState:
    return PureState(d, fourier_basis(d)[:, l % d])


def apply_phase(state: PureState, z: int, N: int, d: int) -> PureState:
    if state.bipartite or state.dim != d:
        raise DimensionError(f"apply_phase needs a single qudit of dimension {d}")
    return PureState(d, state.amps * _phases(z, N, d))


def apply_phase_local(state: PureState, z: int, side: str, N: int, d: int) -> PureState:
    if not state.bipartite or state.local_dim != d:
        raise DimensionError(f"apply_phase_local needs a bipartite state of dimension {d}x{d}")
    ph = _phases(z, N, d)
    psi = state.amps.reshape(d, d)
    if side == "left":
        psi = psi * ph[:, None]
    elif side == "right":
        psi = psi * ph[None, :]
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return PureState(state.dim, psi.ravel(), bipartite=True)


def fourier_distribution(state: PureState) -> OutcomeDistribution:
    d = state.local_dim
    F = fourier_basis(d)
    if state.bipartite:
        psi = state.amps.reshape(d, d)
        # amp[l1, l2] = sum_{k1,k2} conj(F[k1,l1]) conj(F[k2,l2]) psi[k1,k2]
        amp = F.conj().T @ psi @ F.conj()
    else:
        amp = F.conj().T @ state.amps
    return OutcomeDistribution(np.abs(amp) ** 2)


def qnd_collapse(state: PureState, rng: np.random.Generator) -> tuple[int, PureState]:
    """Sample a Fourier outcome and return it with the post-measurement state |e_l>."""
    if state.bipartite:
        raise DimensionError("qnd_collapse acts on a single qudit")
    l = sample_outcome(fourier_distribution(state), rng)
    return l, fourier_state(l, state.dim)


def sample_outcome(dist: OutcomeDistribution, rng: np.random.Generator):
    """Draw one label; joint distributions return an ``(l1, l2)`` tuple."""
    cdf = np.cumsum(dist.probs.ravel())
    i = min(int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right")), cdf.size - 1)
    if dist.joint:
        return divmod(i, dist.probs.shape[1])
    return i
