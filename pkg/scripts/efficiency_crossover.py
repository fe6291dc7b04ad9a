"""Detector efficiency at which the one-measurement protocol overtakes the Zeno protocols, for growing M."""

import argparse
import warnings

from zenoccp.model import CcpInstance, RegimeWarning
from zenoccp.protocols import ProtocolKind, efficiency_crossover, worst_case_success

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--N", type=int, default=60)
ap.add_argument("--d", type=int, default=2)
ap.add_argument("--mu", type=int, default=1)
ap.add_argument("--Ms", default="3,4,5,6,8,10")
args = ap.parse_args()

warnings.simplefilter("ignore", RegimeWarning)
print(f"{'M':>3} {'P1 worst':>10} {'P2 worst':>10} {'eta* vs P2':>11} {'eta* vs PE':>11}")
for M in map(int, args.Ms.split(",")):
    inst = CcpInstance(args.N, M, args.d, args.mu)
    p1 = worst_case_success(ProtocolKind.P1, inst).success
    p2 = worst_case_success(ProtocolKind.P2, inst).success
    x2 = efficiency_crossover(p1, p2, ProtocolKind.P2, inst)
    xe = efficiency_crossover(p1, p2, ProtocolKind.PE, inst)
    fmt = lambda v: "none" if v is None else f"{v:.6f}"  # noqa: E731
    print(f"{M:>3} {p1:10.6f} {p2:10.6f} {fmt(x2):>11} {fmt(xe):>11}")
