pub mod analytic;
pub mod cosets;
pub mod exec;
pub mod kernel;
pub mod lparam;
pub mod satake;
pub mod slope;
pub mod tree;

pub use exec::Exec;
