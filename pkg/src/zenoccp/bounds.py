"""Closed-form error estimates, quantum lower bounds and the single-outcome kernel."""

from __future__ import annotations

from dataclasses import asdict, dataclass
import math
import warnings

import numpy as np

from .model import CcpInstance, RegimeWarning, validate_instance
from .protocols import ProtocolKind, average_success, worst_case_success


def classical_error_estimate(inst: CcpInstance) -> float:
    """Chained block-strategy error with cancellations neglected."""
    mu = inst.mu
    val = mu * (mu + 1) * (inst.M - 1) / (inst.N * (2 * mu + 1))
    if val > 1:
        warnings.warn(f"classical estimate {val:.4g} > 1 clamped to 1", RegimeWarning, stacklevel=2)
        return 1.0
    return val


def _clamp_bound(val: float, d: int) -> float:
    if val < 1 / d:
        warnings.warn(f"bound {val:.4g} below guessing rate, clamped to 1/d", RegimeWarning, stacklevel=3)
        return 1 / d
    return min(val, 1.0)


def pe_success_bound(inst: CcpInstance) -> float:
    N, M, d, mu = inst.N, inst.M, inst.d, inst.mu
    return _clamp_bound(1 - 4 * math.pi**2 * mu**2 * (d - 1) ** 2 * (M - 1) / (d**2 * N**2), d)


def p1_success_bound(inst: CcpInstance) -> float:
    N, M, d, mu = inst.N, inst.M, inst.d, inst.mu
    return _clamp_bound(1 - 4 * math.pi**2 * (d - 1) ** 2 * mu**2 * (M - 1) ** 2 / (d**2 * N**2), d)


def fejer_success(B: int, N: int, d: int) -> float:
    """(1/d^2) [sin(pi B/N) / sin(pi B/(dN))]^2, equal to 1 when dN divides B."""
    if B % (d * N) == 0:
        return 1.0
    return (math.sin(math.pi * B / N) / math.sin(math.pi * B / (d * N))) ** 2 / d**2


@dataclass(frozen=True)
class BoundReport:
    instance: CcpInstance
    classical_error_est: float
    pe_bound: float
    p1_bound: float
    exact_worst_p1: float
    exact_worst_p2: float
    exact_avg_classical: float

    def to_dict(self) -> dict:
        out = asdict(self)
        out["instance"] = self.instance.to_dict()
        return out


def bound_report(inst: CcpInstance) -> BoundReport:
    return BoundReport(
        inst,
        classical_error_estimate(inst),
        pe_success_bound(inst),
        p1_success_bound(inst),
        worst_case_success(ProtocolKind.P1, inst).success,
        worst_case_success(ProtocolKind.P2, inst).success,
        average_success(ProtocolKind.CLASSICAL, inst),
    )


@dataclass(frozen=True)
class ScalingFit:
    Ns: tuple[int, ...]
    classical_error: tuple[float, ...]
    quantum_error: tuple[float, ...]
    classical_slope: float
    quantum_slope: float


def scaling_slopes(Ns, M: int, d: int, mu: int) -> ScalingFit:
    """Log-log slopes of exact average classical error and worst-case P_1 error against N."""
    Ns = tuple(int(n) for n in Ns)
    if len(Ns) < 3:
        raise ValueError("need at least three grid points for a slope fit")
    if mu == 0:
        raise ValueError("mu = 0: every error is identically zero, slope undefined (degenerate grid)")
    ce, qe = [], []
    for N in Ns:
        inst = CcpInstance(N, M, d, mu)
        res = validate_instance(inst)
        if not res.ok:
            raise ValueError(f"grid point N={N}: " + "; ".join(res.violations))
        ce.append(1 - average_success(ProtocolKind.CLASSICAL, inst))
        qe.append(1 - worst_case_success(ProtocolKind.P1, inst).success)
    logN = np.log(Ns)
    cs = float(np.polyfit(logN, np.log(ce), 1)[0])
    qs = float(np.polyfit(logN, np.log(qe), 1)[0])
    return ScalingFit(Ns, tuple(ce), tuple(qe), cs, qs)


@dataclass(frozen=True)
class AuditFinding:
    instance: CcpInstance
    protocol: str
    exact_worst: float
    bound: float

    @property
    def margin(self) -> float:
        return self.exact_worst - self.bound


def audit_bounds(grid) -> tuple[list[AuditFinding], list[AuditFinding]]:
    """Compare exact worst-case success with the closed-form bounds.

    Returns ``(all_checks, violations)``; invalid grid points are skipped.
    """
    checks = []
    for inst in grid:
        if not validate_instance(inst).ok:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            pe_b, p1_b = pe_success_bound(inst), p1_success_bound(inst)
        checks.append(AuditFinding(inst, "P2/PE", worst_case_success(ProtocolKind.P2, inst).success, pe_b))
        checks.append(AuditFinding(inst, "P1", worst_case_success(ProtocolKind.P1, inst).success, p1_b))
    return checks, [c for c in checks if c.margin < 0]
