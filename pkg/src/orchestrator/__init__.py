"""Orchestrator module: run dispatch for configured experiments"""

from .coordinator import DEFAULT_OUT_DIR, Coordinator, ExperimentOutcome, run

__all__ = ["DEFAULT_OUT_DIR", "Coordinator", "ExperimentOutcome", "run"]
