"""High-precision Jacobian determinants of the relativistic collision map.

All numeric values cross the Python boundary as decimal strings carrying the
full working precision (binary floats cannot hold 200-bit results); pass
`float()`-able strings or plain floats in, convert out as needed.
"""

from ._core import (
    DegenerateInputError,
    NumericInconsistencyError,
    __version__,
    angle_condition,
    closed_form_limit,
    eval_report,
    hunt,
    post_collisional,
    ray_asymptote,
    scattering_cos,
    special_point,
    verify,
)

__all__ = [
    "DegenerateInputError",
    "NumericInconsistencyError",
    "__version__",
    "angle_condition",
    "closed_form_limit",
    "eval_report",
    "hunt",
    "post_collisional",
    "ray_asymptote",
    "scattering_cos",
    "special_point",
    "verify",
]
