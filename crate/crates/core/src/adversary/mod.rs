//! Edge colorings that avoid long monochromatic paths.

mod acyclic;
mod digits;
mod theorem1;

pub use acyclic::{
    acyclic_via_completion, greedy_acyclic_set, sparse_acyclic_set, tournament_acyclic_set, AcyclicSearch,
};
pub use digits::{
    acyclic_edge_coloring, block_product_coloring, color_classes_coloring, constructive_chromatic, digit_color,
    minimal_base, product_bound, AcyclicColoring, BlockProduct, DigitEncoding,
};
pub use theorem1::{
    symmetric_adversary, theorem1_adversary, AdversaryOutput, Family, FamilyPartition, PartBounds, SymmetricColoring,
    PART_COVERED, PART_RESIDUE, PART_X,
};
