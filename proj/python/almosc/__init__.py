"""Second-order neutral difference equations with quasidifferences.

Thin wrapper over the C++ core: simulation of the forward recursion,
trajectory classification, and the divergence criteria. Spec documents use
the same TOML subset as the command-line tool.
"""

import json as _json

from ._core import (
    EvalError,
    InputError,
    VerificationError,
    eval_seq,
    eval_seq_exact,
    example_names,
    example_toml,
    f_min,
    power_diff_holds,
    q_dstar,
    q_star,
    simulate,
    verify_example,
)
from ._core import classify_json as _classify_json
from ._core import check_json as _check_json

__all__ = [
    "EvalError",
    "InputError",
    "VerificationError",
    "check",
    "classify",
    "eval_seq",
    "eval_seq_exact",
    "example_names",
    "example_toml",
    "f_min",
    "power_diff_holds",
    "q_dstar",
    "q_star",
    "simulate",
    "verify_example",
]


def classify(spec, n=None, tol=0.02):
    """Simulate the spec (TOML text) and classify the trajectory.

    Returns the verdict report as a dict with keys ``tag`` and ``reports``.
    """
    return _json.loads(_classify_json(spec, n=n, tol=tol))


def check(spec, n=None, d=None, M=None, p=None):
    """Evaluate the divergence criteria for the spec (TOML text).

    Returns a dict with the per-criterion reports and the combined verdict.
    """
    return _json.loads(_check_json(spec, n=n, d=d, M=M, p=p))
