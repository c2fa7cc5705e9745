//! Nash equilibria of a two-feature algorithmic hiring game, in closed form
//! and independently verified.
//!
//! A firm screens a unit mass of high- and low-talent agents using two binary
//! features: a costly *causal* one (education, which raises productivity) and
//! a free-to-game *correlational* one (predictive of talent, no productivity
//! effect). The firm either keeps its algorithm **opaque** (agents cannot
//! game the correlational feature) or makes it **transparent** (everyone
//! games it, wiping out its predictive power). This crate computes the played
//! equilibrium of both scenarios from closed forms, classifies the cost plane
//! into the seven comparison regions, evaluates who gains from transparency,
//! and re-checks every claim with a brute-force deviation oracle and
//! best-response dynamics.
//!
//! ```
//! use transparency_game::model::{validate_params, RawParams};
//! use transparency_game::report::analyze;
//!
//! let params = validate_params(RawParams {
//!     theta: 0.5,   // share of high-talent agents
//!     lambda: 0.75, // accuracy of the correlational feature
//!     alpha: 1.5,   // talent productivity premium
//!     beta: 0.5,    // education productivity premium
//!     reward: 1.0,  // wage
//!     cost_h: 0.5,  // education cost, high-talent
//!     cost_l: 1.2,  // education cost, low-talent
//! })
//! .expect("interior parameters");
//!
//! let report = analyze(&params).unwrap();
//! assert_eq!(report.comparison.region.label(), "C4");
//! assert!(report.verification.opaque.nash_ok);
//! ```
//!
//! The accompanying book (`book/`) walks through the model and every module;
//! its code snippets double as doc-tests via the [`book`] module below.

pub mod analysis;
pub mod equilibrium;
pub mod format;
pub mod model;
pub mod payoff;
pub mod report;
pub mod sampling;
pub mod verify;

/// Book chapters compiled as doc-tests so the guide can never drift from the
/// library. `cargo test --doc` runs every fenced Rust snippet in `book/src/`.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    pub mod model {}
    #[doc = include_str!("../../../book/src/opaque.md")]
    pub mod opaque {}
    #[doc = include_str!("../../../book/src/transparent.md")]
    pub mod transparent {}
    #[doc = include_str!("../../../book/src/transparency.md")]
    pub mod transparency {}
    #[doc = include_str!("../../../book/src/verification.md")]
    pub mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
