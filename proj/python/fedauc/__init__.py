"""Federated ROC-AUC evaluation over homomorphic encryption."""

try:
    # installed layout: the extension lives inside the package
    from ._fedauc import (
        detection_evasion_probability,
        dp_trials,
        exact_auc,
        grid_thresholds,
        local_counts,
        log2_detection_evasion_probability,
        multiplier_guess_probability,
        run_attack,
        run_scenario,
        synth,
        trapezoid_auc,
    )
except ImportError:  # build-tree layout: extension on sys.path
    from _fedauc import (
        detection_evasion_probability,
        dp_trials,
        exact_auc,
        grid_thresholds,
        local_counts,
        log2_detection_evasion_probability,
        multiplier_guess_probability,
        run_attack,
        run_scenario,
        synth,
        trapezoid_auc,
    )

__all__ = [
    "detection_evasion_probability",
    "dp_trials",
    "exact_auc",
    "grid_thresholds",
    "local_counts",
    "log2_detection_evasion_probability",
    "multiplier_guess_probability",
    "run_attack",
    "run_scenario",
    "synth",
    "trapezoid_auc",
]
