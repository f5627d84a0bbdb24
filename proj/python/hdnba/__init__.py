from ._hdnba import (
    ArchitectureError,
    CapacityError,
    CompileError,
    GrammarError,
    ParseError,
    census,
    data_dir,
    query,
    run,
    scenario,
    scenario_names,
)

__all__ = [
    "ArchitectureError",
    "CapacityError",
    "CompileError",
    "GrammarError",
    "ParseError",
    "census",
    "data_dir",
    "query",
    "run",
    "scenario",
    "scenario_names",
]
