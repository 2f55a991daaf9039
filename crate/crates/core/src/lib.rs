//! Exact enumeration of Mikhalkin graded circuits and counts of singular tropical hypersurfaces
//! in pencils through points in Mikhalkin position.

pub mod exactlin;
pub mod simplex;
pub mod symweights;
pub mod tropdual;
pub mod gradedcircuits;
pub mod mgcenum;
pub mod counting;
pub mod realsigns;
