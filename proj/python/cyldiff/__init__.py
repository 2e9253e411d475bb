from ._core import (
    ConfigError,
    DegenerateVariance,
    InsufficientSamples,
    MapSystem,
    NonFiniteState,
    NormalForm,
    NotTIAdmissible,
    Potentials,
    ResonantInput,
    StripParams,
    check_hypotheses,
    classify,
    clt_test,
    ergodization_time,
    hitting_probability,
    ir_measure,
    ks_statistic,
    moments,
    run_ensemble,
)

__all__ = [
    "ConfigError",
    "DegenerateVariance",
    "InsufficientSamples",
    "MapSystem",
    "NonFiniteState",
    "NormalForm",
    "NotTIAdmissible",
    "Potentials",
    "ResonantInput",
    "StripParams",
    "check_hypotheses",
    "classify",
    "clt_test",
    "ergodization_time",
    "hitting_probability",
    "ir_measure",
    "ks_statistic",
    "moments",
    "run_ensemble",
]
