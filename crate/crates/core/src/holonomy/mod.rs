//! Admissible sections, locally topological groupoids and the holonomy groupoid.

mod hol;
mod locally_top;
mod sections;
mod sweep;

pub use hol::{holonomy_groupoid, lemma_germ_independence, sigma_chart_value, HolArrow, HolonomyCheck, HolonomyGroupoid, Letter, SectionGerm};
pub use locally_top::{atlas_regularity, build_locally_top_from_s, check_locally_top, point_charts, LocallyTopGroupoid, LocallyTopReport, Regularity};
pub use sections::{admissible_sections, continuous_sections, locally_sectionable, sections_through, AdmissibleSection};
pub use sweep::{holonomy_sweep, HolonomySweep};
