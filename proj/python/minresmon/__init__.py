"""Preconditioned MINRES with progressive per-block residual monitoring.

The heavy lifting lives in the compiled extension ``minresmon._core``; this
package re-exports its public surface.
"""

from minresmon._core import (
    BreakdownError,
    InputError,
    ParseError,
    PreconditionerError,
    Problem,
    Result,
    __version__,
    explicit_norms,
    gen_least_norm,
    gen_least_squares,
    gen_stokes_mac,
    solve,
    solve_problem,
    verify,
    verify_problem,
)

__all__ = [
    "BreakdownError",
    "InputError",
    "ParseError",
    "PreconditionerError",
    "Problem",
    "Result",
    "__version__",
    "explicit_norms",
    "gen_least_norm",
    "gen_least_squares",
    "gen_stokes_mac",
    "solve",
    "solve_problem",
    "verify",
    "verify_problem",
]
