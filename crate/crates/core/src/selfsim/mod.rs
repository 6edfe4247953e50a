//! Self-similar group actions given by finite data.

mod action;
mod degree01;
mod structure;
mod word;

pub use action::SelfSimilarAction;
pub(crate) use degree01::unit_in;
pub use degree01::{Abelianization, Assumptions, Degree01};
pub use structure::Stabilizer;
pub use word::{Generators, Word, WordDisplay};
