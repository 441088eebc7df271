from ._otpml import (
    Config,
    Error,
    accuracies,
    correlation,
    generate_csv,
    load_config,
    load_data,
    parse_config,
    parse_csv,
    run_pipeline,
)

__all__ = [
    "Config",
    "Error",
    "accuracies",
    "correlation",
    "generate_csv",
    "load_config",
    "load_data",
    "parse_config",
    "parse_csv",
    "run_pipeline",
]
