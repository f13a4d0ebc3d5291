//! Building blocks of the pleated-surface construction: cone-angle vertex
//! maps and the canonical element over a smaller almost-similar triangle.

mod element;
mod fold;
mod triangle;

pub use element::{
    canonical_element, canonical_element_with, isometry_defect, DefectReport, ElementOptions,
    PleatedElement,
};
pub use fold::{contraction_map, standard_vertex_map, FoldParams, Polar};
pub use triangle::AcuteTriangle;
