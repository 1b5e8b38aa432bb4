pub mod census;
pub mod cli;
pub mod constants;
pub mod error;
pub mod geom;
pub mod poly;
