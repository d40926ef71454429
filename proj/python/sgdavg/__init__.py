"""Projected stochastic subgradient method with iterate averaging."""

from ._core import (
    CSV_HEADER,
    Averager,
    Dataset,
    Error,
    __version__,
    add_bias,
    closed_form_average,
    estimate_fstar,
    load_libsvm,
    parse_libsvm,
    preprocess,
    project,
    run_experiment,
    standardize,
    step_size,
    svm_full_subgradient,
    svm_objective,
    svm_subgradient,
    synthesize,
    telescoping_closed_form,
    telescoping_sum,
    to_libsvm,
    variance_bound,
    verify_suite,
)

__all__ = [
    "CSV_HEADER",
    "Averager",
    "Dataset",
    "Error",
    "__version__",
    "add_bias",
    "closed_form_average",
    "estimate_fstar",
    "load_libsvm",
    "parse_libsvm",
    "preprocess",
    "project",
    "run_experiment",
    "standardize",
    "step_size",
    "svm_full_subgradient",
    "svm_objective",
    "svm_subgradient",
    "synthesize",
    "telescoping_closed_form",
    "telescoping_sum",
    "to_libsvm",
    "variance_bound",
    "verify_suite",
]
