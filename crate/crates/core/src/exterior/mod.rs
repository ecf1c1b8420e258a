//! Alternating forms on an oriented inner-product space of dimension at
//! most 8: wedge and interior products, Hodge star, musical isomorphisms
//! and pullbacks along linear maps.

pub(crate) mod basis;
mod complex;
mod kform;
mod linear_map;
mod metric;

pub use basis::{binomial, MAX_DIM};
pub use complex::CForm;
pub use kform::KForm;
pub use linear_map::LinearMap;
pub use metric::{skew_matrix, two_form_from_matrix, Metric};

/// Sign `(-1)^p`.
pub fn parity(p: usize) -> f64 {
    if p.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}
