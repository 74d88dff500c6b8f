pub mod asym;
pub mod bijections;
pub mod comb;
pub mod counts;
pub mod genfunc;
pub mod oracle;
pub mod series;
pub mod error;

pub use error::GalledError;
