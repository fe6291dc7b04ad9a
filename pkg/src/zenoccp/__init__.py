"""Classical and quantum protocols for a family of distributed phase-sum communication complexity problems."""

from .model import CcpInstance, InputAssignment, make_assignment, sample_assignment
from .protocols import ProtocolKind, exact_success, simulate_run

__all__ = ["CcpInstance", "InputAssignment", "make_assignment", "sample_assignment", "ProtocolKind", "exact_success", "simulate_run"]
