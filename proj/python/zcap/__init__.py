"""Caps, lines and symmetry in Z_n x Z_n."""

from ._core import (
    ParseError,
    apply_affine,
    enumerate_lines,
    evaluate_points,
    extendable_points,
    greedy_complete,
    is_cap,
    is_collinear,
    is_complete,
    lines_through,
    lp_text,
    model_size,
    orbit_canonical,
    psi,
    read_cap_file,
    solve,
    wlog_cuts,
    write_lp,
)

__all__ = [
    "ParseError",
    "apply_affine",
    "enumerate_lines",
    "evaluate_points",
    "extendable_points",
    "greedy_complete",
    "is_cap",
    "is_collinear",
    "is_complete",
    "lines_through",
    "lp_text",
    "model_size",
    "orbit_canonical",
    "psi",
    "read_cap_file",
    "solve",
    "wlog_cuts",
    "write_lp",
]
