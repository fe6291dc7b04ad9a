"""Classical chain success as M grows past N: sampled runs next to the exact convolution and the linear estimate."""

import warnings

from zenoccp.batch import run_batch
from zenoccp.bounds import classical_error_estimate
from zenoccp.model import CcpInstance, RegimeWarning
from zenoccp.protocols import ProtocolKind, average_success

warnings.simplefilter("ignore", RegimeWarning)
N, d, mu = 10, 2, 1
print(f"{'M':>4} {'sampled':>8} {'stderr':>7} {'exact':>8} {'linear est':>10}")
for M in (2, 5, 10, 20, 50, 100, 200):
    inst = CcpInstance(N, M, d, mu)
    res = run_batch(ProtocolKind.CLASSICAL, inst, 4000, seed=M)
    print(f"{M:>4} {res.rate:8.4f} {res.stderr:7.4f} {average_success(ProtocolKind.CLASSICAL, inst):8.4f}"
          f" {1 - classical_error_estimate(inst):10.4f}")
