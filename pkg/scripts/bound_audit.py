"""Audit the closed-form lower bounds against exact worst-case success on a parameter grid."""

import itertools

from zenoccp.bounds import audit_bounds
from zenoccp.model import CcpInstance

GRID = dict(d=(2, 3, 5, 8), M=(2, 3, 5), mu=(1, 2), N=(30, 60, 120))

if __name__ == "__main__":
    grid = [CcpInstance(N, M, d, mu) for d, M, mu, N in itertools.product(*GRID.values())]
    checks, violations = audit_bounds(grid)
    print(f"{'N':>4} {'M':>2} {'d':>2} {'mu':>2} {'protocol':>8} {'exact worst':>12} {'bound':>10} {'margin':>10}")
    for c in checks:
        i = c.instance
        print(f"{i.N:>4} {i.M:>2} {i.d:>2} {i.mu:>2} {c.protocol:>8} {c.exact_worst:12.6f} {c.bound:10.6f} {c.margin:10.2e}")
    print(f"\n{len(checks)} checks, {len(violations)} violations")
