"""Run telemetry: experiment outcomes, wall time and ensemble throughput"""

import logging
import time
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, write_to_textfile

logger = logging.getLogger(__name__)

METRICS_FILE = "metrics.prom"


@dataclass
class ExperimentMetrics:
    """Metrics for a single experiment"""
    name: str
    start_time: float
    end_time: Optional[float] = None
    status: Optional[str] = None
    members: int = 0

    @property
    def duration_s(self) -> float:
        if self.end_time:
            return self.end_time - self.start_time
        return 0.0


class MetricsCollector:
    """Collects per-run metrics in a private registry"""

    def __init__(self, registry: Optional[CollectorRegistry] = None):
        self.registry = registry or CollectorRegistry()
        self.completed: List[ExperimentMetrics] = []
        self.counters: Dict[str, int] = defaultdict(int)
        self._init_prometheus_metrics()

    def _init_prometheus_metrics(self):
        self.prom_experiments = Counter(
            'randwave_experiments_total',
            'Experiments run, by outcome',
            ['experiment', 'status'],
            registry=self.registry,
        )
        self.prom_duration = Histogram(
            'randwave_experiment_duration_seconds',
            'Experiment wall time in seconds',
            ['experiment'],
            buckets=(0.1, 0.5, 1, 5, 10, 30, 60, 300, 600, 1800),
            registry=self.registry,
        )
        self.prom_members = Gauge(
            'randwave_ensemble_members',
            'Ensemble members evaluated by the last experiment',
            ['experiment'],
            registry=self.registry,
        )

    def start_experiment(self, name: str) -> ExperimentMetrics:
        return ExperimentMetrics(name=name, start_time=time.time())

    def end_experiment(self, metrics: ExperimentMetrics, status: str, members: int = 0):
        """
        Record the outcome of an experiment

        Args:
            metrics: Handle returned by start_experiment
            status: passed, failed, completed or error
            members: Ensemble members evaluated
        """
        metrics.end_time = time.time()
        metrics.status = status
        metrics.members = members
        self.completed.append(metrics)
        self.counters[status] += 1

        self.prom_experiments.labels(experiment=metrics.name, status=status).inc()
        self.prom_duration.labels(experiment=metrics.name).observe(metrics.duration_s)
        self.prom_members.labels(experiment=metrics.name).set(members)

    def summary(self) -> Dict[str, Any]:
        return {
            "experiments": len(self.completed),
            "by_status": dict(self.counters),
            "total_seconds": sum(m.duration_s for m in self.completed),
        }

    def write(self, out_dir: Path) -> Path:
        path = Path(out_dir) / METRICS_FILE
        path.parent.mkdir(parents=True, exist_ok=True)
        write_to_textfile(str(path), self.registry)
        logger.debug(f"Metrics written to {path}")
        return path
