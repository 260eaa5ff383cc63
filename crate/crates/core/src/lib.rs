pub mod algebra;
pub mod error;
pub mod partition;
pub mod characters;
pub mod hurwitz;
pub mod oracle;
pub mod series;
pub mod cutjoin;
pub mod kp;
pub mod polyfit;

pub use algebra::{Rational, VPoly};
pub use characters::CharCache;
pub use error::{Error, Result};
pub use hurwitz::RamificationProfile;
pub use partition::Partition;
pub use series::{Basis, GradedSeries};
