"""Tree evaluation: instances, a plain solver, and a catalytic solver."""

from .cookmertz import (
    CMResult,
    OP_BUDGET_COMPILED,
    OP_BUDGET_PURE,
    decode_value,
    encode_value,
    estimate_ops,
    solve_cook_mertz,
)
from .extension import (
    BudgetError,
    DOMAIN_BUDGET,
    chi_eval,
    domain_size,
    extension_eval,
    extension_eval_all,
    point_len,
)
from .instance import (
    ExplicitTreeInstance,
    MalformedInstanceError,
    PaddedTreeInstance,
    TreeInstance,
    format_instance,
    int_to_bits,
    pad_instance,
    parse_instance,
    parse_instance_file,
)
from .meter import (
    CMParams,
    SpaceMeter,
    derive_dims,
    make_params,
    meter_closed_form,
    naive_bits_closed_form,
)
from .naive import NaiveResult, solve_naive

__all__ = [
    "BudgetError",
    "CMParams",
    "CMResult",
    "DOMAIN_BUDGET",
    "ExplicitTreeInstance",
    "MalformedInstanceError",
    "NaiveResult",
    "OP_BUDGET_COMPILED",
    "OP_BUDGET_PURE",
    "PaddedTreeInstance",
    "SpaceMeter",
    "TreeInstance",
    "chi_eval",
    "decode_value",
    "derive_dims",
    "domain_size",
    "encode_value",
    "estimate_ops",
    "extension_eval",
    "extension_eval_all",
    "format_instance",
    "int_to_bits",
    "make_params",
    "meter_closed_form",
    "naive_bits_closed_form",
    "pad_instance",
    "parse_instance",
    "parse_instance_file",
    "point_len",
    "solve_cook_mertz",
    "solve_naive",
]
