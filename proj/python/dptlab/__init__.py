"""Exact query-complexity oracles and bound checks."""

from ._core import (
    Distribution,
    Error,
    Function,
    dpt_bound,
    gambling_fuzz,
    opt_success,
    shaltiel,
    verify,
    yao,
)

__all__ = [
    "Distribution",
    "Error",
    "Function",
    "dpt_bound",
    "gambling_fuzz",
    "opt_success",
    "shaltiel",
    "verify",
    "yao",
]
