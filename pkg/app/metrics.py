"""
Prometheus metrics for toolkit runs.

Metrics live in a dedicated registry and are written to a text file on
request (`run --metrics-file`); no HTTP endpoint is exposed.
"""
from prometheus_client import CollectorRegistry, Counter, Histogram, Info, write_to_textfile

from app.config import settings

registry = CollectorRegistry()

tool_info = Info("ppc_tool", "Toolkit build information", registry=registry)
tool_info.info({"version": settings.TOOL_VERSION, "name": settings.TOOL_NAME})

points_generated_total = Counter(
    "ppc_points_generated_total",
    "Points produced by generators",
    ["family"],
    registry=registry,
)

pairs_examined_total = Counter(
    "ppc_pairs_examined_total",
    "Candidate pairs whose torus distance was evaluated",
    ["algorithm"],
    registry=registry,
)

spectrum_frequencies_total = Counter(
    "ppc_spectrum_frequencies_total",
    "Frequency vectors for which a Weyl sum was evaluated",
    registry=registry,
)

analyses_total = Counter(
    "ppc_analyses_total",
    "Experiment analyses run",
    ["kind", "status"],
    registry=registry,
)

analysis_duration = Histogram(
    "ppc_analysis_duration_seconds",
    "Wall-clock time per experiment analysis",
    ["kind"],
    buckets=[0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 300.0],
    registry=registry,
)


def write_metrics(path: str) -> None:
    """Write the registry in Prometheus text exposition format."""
    write_to_textfile(path, registry)
