"""Problem instances (N, M, d, mu), promise checks, input sampling and the true answer."""

from __future__ import annotations

from dataclasses import dataclass, field
import json
import warnings

import numpy as np


class PromiseViolation(ValueError):
    pass


class RegimeWarning(UserWarning):
    """Parameters sit outside the N >> mu, N >> M regime the closed forms assume."""


@dataclass(frozen=True)
class CcpInstance:
    N: int
    M: int
    d: int
    mu: int

    @property
    def modulus(self) -> int:
        return self.d * self.N

    def promise_set(self, l: int) -> frozenset[int]:
        """S_l = {N*l - mu, ..., N*l + mu} mod dN."""
        return frozenset((self.N * l + b) % self.modulus for b in range(-self.mu, self.mu + 1))

    def check(self) -> "CcpInstance":
        res = validate_instance(self)
        if not res.ok:
            raise ValueError("invalid instance: " + "; ".join(res.violations))
        for note in res.notes:
            warnings.warn(note, RegimeWarning, stacklevel=2)
        return self

    def to_dict(self) -> dict:
        return {"N": self.N, "M": self.M, "d": self.d, "mu": self.mu}


@dataclass(frozen=True)
class ValidationResult:
    violations: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_instance(inst: CcpInstance) -> ValidationResult:
    violations, notes = [], []
    if inst.N < 1:
        violations.append(f"N must be positive (N={inst.N})")
    if inst.M < 2:
        violations.append(f"need at least two parties (M={inst.M})")
    if inst.d < 2:
        violations.append(f"alphabet size must be >= 2 (d={inst.d})")
    if inst.mu < 0:
        violations.append(f"mu must be non-negative (mu={inst.mu})")
    if not violations and 2 * inst.mu + 1 > inst.N:
        violations.append(f"promise sets overlap: 2*mu+1 = {2 * inst.mu + 1} > N = {inst.N}")
    if violations:
        return ValidationResult(violations, notes)
    if inst.mu == 0:
        notes.append("mu = 0: promise fixes every link difference exactly (degenerate instance)")
    elif inst.N <= 10 * inst.mu * inst.M:
        notes.append(f"N = {inst.N} <= 10*mu*M = {10 * inst.mu * inst.M}: asymptotic regime is strained")
    if inst.mu * (inst.M - 1) >= inst.N - inst.mu:
        notes.append("total drift mu*(M-1) can reach N - mu: the summed difference may leave every S_l")
    return ValidationResult(violations, notes)


@dataclass(frozen=True)
class LinkDecomposition:
    a: int
    b: int


def decompose_link(x: int, y: int, inst: CcpInstance) -> LinkDecomposition:
    """Unique (a, b) with x - y = a*N + b (mod dN), 0 <= a < d, |b| <= mu."""
    m = inst.modulus
    if not (0 <= x < m and 0 <= y < m):
        raise PromiseViolation(f"inputs ({x}, {y}) outside Z_{m}")
    diff = (x - y) % m
    q, r = divmod(diff, inst.N)
    if r <= inst.mu:
        return LinkDecomposition(q % inst.d, r)
    if r >= inst.N - inst.mu:
        return LinkDecomposition((q + 1) % inst.d, r - inst.N)
    nearest = (q + 1) % inst.d if r > inst.N / 2 else q
    raise PromiseViolation(
        f"x={x}, y={y}: x-y = {diff} (mod {m}) is not in any S_l; "
        f"nearest is S_{nearest} = [{nearest * inst.N - inst.mu}, {nearest * inst.N + inst.mu}] (mod {m})"
    )


@dataclass(frozen=True)
class InputAssignment:
    """Inputs of all parties.  ``middle[j]`` is the (x, y) pair held by party j+2."""

    x_first: int
    middle: tuple[tuple[int, int], ...]
    y_last: int
    links: tuple[LinkDecomposition, ...]
    A: int
    B: int

    @property
    def xs(self) -> list[int]:
        return [self.x_first] + [x for x, _ in self.middle]

    @property
    def ys(self) -> list[int]:
        """y_2 ... y_M, the receiving input of each link."""
        return [y for _, y in self.middle] + [self.y_last]

    @property
    def bs(self) -> list[int]:
        return [lk.b for lk in self.links]

    def to_dict(self, inst: CcpInstance) -> dict:
        return {**inst.to_dict(), "x1": self.x_first, "pairs": [list(p) for p in self.middle], "yM": self.y_last}


def make_assignment(inst: CcpInstance, x1: int, pairs, yM: int) -> InputAssignment:
    """Build and validate an assignment; inputs are reduced mod dN first."""
    m = inst.modulus
    pairs = tuple((int(x) % m, int(y) % m) for x, y in pairs)
    if len(pairs) != inst.M - 2:
        raise ValueError(f"expected {inst.M - 2} middle pairs for M={inst.M}, got {len(pairs)}")
    x1, yM = int(x1) % m, int(yM) % m
    xs = [x1] + [x for x, _ in pairs]
    ys = [y for _, y in pairs] + [yM]
    links = tuple(decompose_link(x, y, inst) for x, y in zip(xs, ys))
    A = sum(lk.a for lk in links) % inst.d
    B = sum(lk.b for lk in links)
    return InputAssignment(x1, pairs, yM, links, A, B)


def ground_truth(assignment: InputAssignment, inst: CcpInstance) -> int:
    if inst.mu * (inst.M - 1) >= inst.N - inst.mu:
        warnings.warn(
            f"|B| can reach {inst.mu * (inst.M - 1)} >= N - mu = {inst.N - inst.mu}; answer taken as A mod d",
            RegimeWarning,
            stacklevel=2,
        )
    return assignment.A % inst.d


def sample_assignment(inst: CcpInstance, rng: np.random.Generator) -> InputAssignment:
    """x uniform per link, (a, b) uniform and independent per link."""
    m, L = inst.modulus, inst.M - 1
    draws = rng.integers([0, 0, -inst.mu], [m, inst.d, inst.mu + 1], size=(L, 3))
    xs, a, b = draws[:, 0], draws[:, 1], draws[:, 2]
    ys = (xs - (a * inst.N + b)) % m
    links = tuple(LinkDecomposition(int(ai), int(bi)) for ai, bi in zip(a, b))
    middle = tuple((int(xs[j + 1]), int(ys[j])) for j in range(L - 1))
    return InputAssignment(int(xs[0]), middle, int(ys[-1]), links, int(a.sum()) % inst.d, int(b.sum()))


def assignment_from_json(text: str) -> tuple[CcpInstance, InputAssignment]:
    obj = json.loads(text)
    inst = CcpInstance(int(obj["N"]), int(obj["M"]), int(obj["d"]), int(obj["mu"]))
    res = validate_instance(inst)
    if not res.ok:
        raise ValueError("invalid instance: " + "; ".join(res.violations))
    return inst, make_assignment(inst, obj["x1"], obj.get("pairs", []), obj["yM"])


def assignment_to_json(inst: CcpInstance, assignment: InputAssignment) -> str:
    return json.dumps(assignment.to_dict(inst))
