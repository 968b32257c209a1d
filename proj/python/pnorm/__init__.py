"""Matrix p-operator norms and C*-likeness gaps of matrix modules."""

from ._pnorm import (
    __version__,
    BudgetExceeded,
    cstar_gap,
    duality_map,
    holder_pairing,
    op_norm,
    op_norm_oracle,
    oracle_upper_bound,
    sd_claim_oracle,
    sd_counterexample,
    sd_module_element,
    sd_sweep,
    transpose_duality_residual,
    upper_triangular_example,
    vector_p_norm,
)

__all__ = [
    "BudgetExceeded",
    "cstar_gap",
    "duality_map",
    "holder_pairing",
    "op_norm",
    "op_norm_oracle",
    "oracle_upper_bound",
    "sd_claim_oracle",
    "sd_counterexample",
    "sd_module_element",
    "sd_sweep",
    "transpose_duality_residual",
    "upper_triangular_example",
    "vector_p_norm",
]
