//! Diameter bounds for surfaces with boundary, the doubling construction
//! that proves them, and nonexistence criteria for Plateau–Douglas
//! boundary contours.

pub mod audit;
pub mod cli;
pub mod contour;
pub mod criteria;
pub mod curvature;
pub mod diameter;
pub mod doubling;
pub mod error;
pub mod format;
pub mod generators;
pub mod mesh;
pub mod optim;
pub mod spatial;
pub mod teardrop;
