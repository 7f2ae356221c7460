"""Sparse polynomial approximation: adaptive least squares, compressed sensing, oracles."""

import json

from ._core import (
    ConfigError,
    NumericalError,
    best_n_term_product,
    draw_grid,
    evaluate_basis,
    evaluate_target,
    hyperbolic_cross,
    is_lower,
    kappa,
    kappa_max_lower,
    near_optimal_probabilities,
    reduced_margin,
    relative_error,
    sr_lasso,
    target_ids,
    univariate_coeffs,
)
from ._core import run_experiment as _run_experiment


def run_experiment(config):
    """Run an experiment described by a dict and return the parsed result document."""
    return json.loads(_run_experiment(json.dumps(config)))


__all__ = [
    "ConfigError",
    "NumericalError",
    "best_n_term_product",
    "draw_grid",
    "evaluate_basis",
    "evaluate_target",
    "hyperbolic_cross",
    "is_lower",
    "kappa",
    "kappa_max_lower",
    "near_optimal_probabilities",
    "reduced_margin",
    "relative_error",
    "run_experiment",
    "sr_lasso",
    "target_ids",
    "univariate_coeffs",
]
