"""Taxonomy-based semantic similarity: information content, edge weighting and evaluation."""
from taxosim.corpus import (
    FrequencyTable,
    ICTable,
    format_ic_table,
    concept_freq_resnik,
    concept_freq_richardson,
    concept_freq_tagged,
    concept_frequencies,
    estimate_ic,
    good_turing_probability,
    information_content,
    load_frequencies,
    load_ic,
    mle_probability,
)
from taxosim.errors import TaxosimError
from taxosim.evaluation import (
    RatingDataset,
    ablate_pair,
    evaluate_column,
    evaluate_measure,
    load_ratings,
    parameter_sweep,
    pearson,
)
from taxosim.kernels import BACKEND as KERNEL_BACKEND
from taxosim.measures import (
    MeasureConfig,
    MeasureResult,
    combined_distance,
    combined_edge_weight,
    concept_measure,
    distance_to_similarity,
    jc_distance_simplified,
    link_strength,
    sim_edge_counting,
    sim_resnik,
    sussna_directed_weight,
    sussna_distance,
    sussna_edge_weight,
    word_similarity,
)
from taxosim.taxonomy import Edge, Taxonomy, load_taxonomy, parse_taxonomy

__version__ = "0.1.0"
