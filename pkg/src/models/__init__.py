"""Pydantic models for run configuration"""

from .config import (
    EXPERIMENTS,
    DataSection,
    ExperimentSection,
    GridSection,
    OutputSection,
    RandomizationSection,
    RegularitySection,
    RunConfig,
    TimeSection,
)

__all__ = [
    "EXPERIMENTS",
    "DataSection",
    "ExperimentSection",
    "GridSection",
    "OutputSection",
    "RandomizationSection",
    "RegularitySection",
    "RunConfig",
    "TimeSection",
]
