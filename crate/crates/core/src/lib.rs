pub mod fan;
pub mod gf2;
pub mod intlin;
pub mod orbitalg;
pub mod report;
pub mod spectral;
pub mod analysis;
pub mod cli;
pub mod constructions;
