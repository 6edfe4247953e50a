//! Homology of ample groupoids of self-similar actions, and K-theory of
//! their C*-algebras, computed with exact integer arithmetic.
//!
//! Inputs are read by [`input::InputDocument`] and dispatched by
//! [`pipeline::compute`]; the engines in [`engines`] can also be called
//! directly. The guide in `book/` walks through each engine.

pub mod abgroup;
pub mod engines;
pub mod error;
pub mod input;
pub mod linalg;
pub mod pipeline;
pub mod reference;
pub mod report;
pub mod selfsim;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    macro_rules! chapters {
        ($($name:ident => $file:literal),* $(,)?) => {
            $(
                #[doc = include_str!(concat!("../../../book/src/", $file))]
                mod $name {}
            )*
        };
    }

    #[doc = include_str!("../../../README.md")]
    mod readme {}

    chapters! {
        introduction => "introduction.md",
        abelian_groups => "abelian-groups.md",
        self_similar_actions => "self-similar-actions.md",
        graphs_and_katsura => "graphs-and-katsura.md",
        free_abelian => "free-abelian.md",
        multispinal => "multispinal.md",
        grigorchuk => "grigorchuk.md",
        reference_families => "reference-families.md",
        coefficients => "coefficients.md",
        input_schema => "input-schema.md",
        cli => "cli.md",
    }
}
