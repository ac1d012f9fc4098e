//! Integer sets and the random sequences built from them.

mod base;
mod blocks;
mod record;
mod regularity;
pub mod rng;
mod sampling;
mod schedule;
mod set;

pub use base::BaseSequence;
pub use blocks::BlockSchedule;
pub use record::SetRecord;
pub use regularity::{regularity_report, RegularityReport, RegularityRow};
pub use sampling::{sample_coupled, sample_from_means, sample_set, sample_two_stage, TwoStageSample};
pub use schedule::{alpha_for_p, MeanSchedule};
pub use set::IntegerSet;
