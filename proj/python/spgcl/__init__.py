"""Single-pass augmentation-free graph contrastive learning."""

from ._spgcl import (
    SpgclError,
    add_edges,
    band_distances,
    drop_edges,
    edge_homophily,
    exact_loss,
    generate_csbm,
    linear_probe,
    mask_attributes,
    masking_band_distances,
    mine_positives,
    node_homophily,
    ppr_diffusion,
    roc_auc,
    sym_laplacian_eigenvalues,
    train_encoder,
)

__version__ = "0.1.0"

__all__ = [
    "SpgclError",
    "add_edges",
    "band_distances",
    "drop_edges",
    "edge_homophily",
    "exact_loss",
    "generate_csbm",
    "linear_probe",
    "mask_attributes",
    "masking_band_distances",
    "mine_positives",
    "node_homophily",
    "ppr_diffusion",
    "roc_auc",
    "sym_laplacian_eigenvalues",
    "train_encoder",
]
