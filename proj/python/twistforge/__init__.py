"""Exact descent data, twists and smoothness certificates for hypersurfaces.

Reports are plain dictionaries mirroring the command-line JSON output.
"""

import json

from ._twistforge import MalformedInput, TwistforgeError, fnv1a_hex
from . import _twistforge as _core

__all__ = [
    "MalformedInput",
    "TwistforgeError",
    "certify_smooth",
    "diagonal_twist",
    "factor_over_q",
    "fnv1a_hex",
    "recheck",
    "run_check",
    "verify_paper_example",
]


def verify_paper_example(which, **params):
    return json.loads(_core.verify_paper_example(which, json.dumps(params)))


def run_check(check, docs=(), **flags):
    return json.loads(_core.run_check(check, [json.dumps(d) for d in docs], json.dumps(flags)))


def recheck(report):
    return json.loads(_core.recheck(json.dumps(report)))


def certify_smooth(form):
    return json.loads(_core.certify_smooth(json.dumps(form)))


def diagonal_twist(form, psi, b):
    return json.loads(_core.diagonal_twist(json.dumps(form), json.dumps(psi), json.dumps(b)))


def factor_over_q(coeffs):
    """Coefficients constant term first, as strings or ints."""
    unit, factors = _core.factor_over_q([str(c) for c in coeffs])
    return unit, [(list(f), e) for f, e in factors]
