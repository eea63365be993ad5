"""Constrained ground states, dynamics and rearrangements for the partially trapped 3D NLS."""

from ._nlstrap import (
    FieldIoError,
    Grid,
    desk_grid,
    energy,
    evolve,
    gn_ratio,
    l2_norm_sq,
    laplacian,
    orbital_distance,
    rayleigh_quotient,
    read_field,
    report,
    schwarz2d,
    shift_x3,
    solve,
    spectrum,
    symm_decr_1d,
    trap_moment_check,
    verify,
    write_field,
)

__all__ = [
    "FieldIoError",
    "Grid",
    "desk_grid",
    "energy",
    "evolve",
    "gn_ratio",
    "l2_norm_sq",
    "laplacian",
    "orbital_distance",
    "rayleigh_quotient",
    "read_field",
    "report",
    "schwarz2d",
    "shift_x3",
    "solve",
    "spectrum",
    "symm_decr_1d",
    "trap_moment_check",
    "verify",
    "write_field",
]
