"""Interval verification of generative-model / perception-network compositions."""

from ._genverify import (  # noqa: F401
    ComposedNetwork,
    Error,
    FormatError,
    Network,
    Partition,
    ProofMap,
    ShapeError,
    VerifierError,
    __version__,
    aggregate,
    apply_break,
    build_proofmap,
    check_candidate,
    emit_heatmap,
    fixtures,
    format_counts_table,
    generate_dataset,
    line_column,
    prove_cell,
    read_pgm,
    render_heatmap,
    render_scene,
    rounded_percent,
    ssim,
    write_pgm,
)
from . import export  # noqa: F401
