//! Swiss-cheese counterexample domains for analytic Lipschitz spaces.
//!
//! The crate builds the domains, bounds lower `(1+α)`-dimensional Hausdorff
//! content with dyadic covers, and evaluates the quantitative estimates behind
//! the Taylor-remainder condition (a) and the content series condition (c).

pub mod admissible;
pub mod conditions;
pub mod content;
pub mod domain;
pub mod error;
pub mod testfn;
pub mod wide;

pub use admissible::{AdmissibleFunction, GridSpec, PhiKind, SubsequenceSelection};
pub use conditions::{ConditionSpec, SeriesReport, SeriesVerdict};
pub use content::{content_disk_exact, content_hole, content_upper, ContentEstimate, CoverEstimate, CoverOptions, Target};
pub use domain::{annulus_of, Annulus, BuildMode, Disk, ExceptionalSet, Hole, SwissCheeseDomain};
pub use error::{Error, Result};
pub use testfn::{
    contour_integral, lip_seminorm, melnikov_ratio, random_testfn, Contour, GeneratorOptions, Integrand, MelnikovRecord,
    NormEstimate, PoleTerm, Region, SeminormOptions, Shape, TestFunction,
};
pub use wide::WideReal;
