"""Quasi-regression Monte Carlo solver for decoupled Markovian BSDEs and
semi-linear parabolic PDEs.

The heavy lifting lives in the compiled extension ``qrmc._core``; this
package re-exports its public surface.
"""

from qrmc._core import (
    CoefficientTable,
    Measure,
    MetricReport,
    MultiIndexSet,
    SinBenchmark,
    TruncationStats,
    cardinality_hyperbolic,
    cardinality_total,
    christoffel,
    confidence_interval,
    cosine_eval,
    eval_series,
    exact_solution,
    load_table,
    mse_metrics,
    phi_eval,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "CoefficientTable",
    "Measure",
    "MetricReport",
    "MultiIndexSet",
    "SinBenchmark",
    "TruncationStats",
    "cardinality_hyperbolic",
    "cardinality_total",
    "christoffel",
    "confidence_interval",
    "cosine_eval",
    "eval_series",
    "exact_solution",
    "load_table",
    "mse_metrics",
    "phi_eval",
    "solve",
]
