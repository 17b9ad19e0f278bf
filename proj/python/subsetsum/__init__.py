"""Subset-sum solving toolkit.

QUBO/Ising reductions, Hopfield-style multistart descent, an evolutionary
digital annealer with a hardware-precision model, exact oracles, and
financial-table auditing. The heavy lifting lives in the C++ extension
module; this package re-exports its public surface.
"""

from subsetsum._core import (
    Instance,
    Meta,
    QuantizedIsing,
    Report,
    Solution,
    SubsetSumError,
    audit_table,
    brute_force,
    check_table,
    count_solutions,
    dp_decide,
    energy,
    energy_quantized,
    export_ising,
    generate,
    meet_in_middle,
    quantize,
    residual,
    solution_ratio,
    solve,
    verify,
)

__all__ = [
    "Instance",
    "Meta",
    "QuantizedIsing",
    "Report",
    "Solution",
    "SubsetSumError",
    "audit_table",
    "brute_force",
    "check_table",
    "count_solutions",
    "dp_decide",
    "energy",
    "energy_quantized",
    "export_ising",
    "generate",
    "meet_in_middle",
    "quantize",
    "residual",
    "solution_ratio",
    "solve",
    "verify",
]
