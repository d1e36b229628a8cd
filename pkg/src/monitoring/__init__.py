"""Monitoring and metrics module"""

from .metrics_collector import METRICS_FILE, ExperimentMetrics, MetricsCollector

__all__ = ["METRICS_FILE", "ExperimentMetrics", "MetricsCollector"]
