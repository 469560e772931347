from ._indde import (
    CrosscheckReport,
    Certificate,
    DecayFit,
    DecayReport,
    Expr,
    Error,
    PicardReport,
    Problem,
    RowTerms,
    SystemSpec,
    Trajectory,
    certify,
    check_definitions,
    crosscheck,
    example,
    example_names,
    example_text,
    fit_decay,
    kernel_sup,
    load,
    parse_spec,
    picard_solve,
    run_cli,
    simulate,
    sup_abs,
)

__all__ = [name for name in dir() if not name.startswith("_")]
