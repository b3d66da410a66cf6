//! Coalition-proof (k-lateral) Nash equilibria of finite and continuous
//! games.
//!
//! A pure profile is k-lateral when no coalition of `k` players has a joint
//! deviation that raises the payoff of any of its members. The crate
//! enumerates these sets, checks several equivalent fixed-point criteria,
//! computes clique covers of Kneser graphs for the grouped criterion, and
//! handles mixed extensions, interval games and parameterized families.
//!
//! Players and strategies are zero-based in the API; `Display` output is
//! one-based.

pub mod continuous;
pub mod equilibrium;
pub mod error;
pub mod exec;
pub mod expr;
pub mod family;
pub mod gallery;
pub mod game;
pub mod kneser;
pub mod mixed;
mod nikaido_isoda;
pub mod payoff;
pub mod random;
pub mod rational;

pub use continuous::{cournot_analysis, cournot_game, ContinuousGame, CournotReport, Discretized};
pub use equilibrium::{Analyzer, Deviation, Filtration, MarginalVector};
pub use error::{Error, Result};
pub use exec::{Config, Execution};
pub use expr::{parse_expr, Expr};
pub use family::{cournot_family, segment_family, Fiber, GameFamily, ParameterPoint, ScanResult};
pub use game::{Coalition, FiniteGame, PartialProfile, PureProfile};
pub use kneser::{exact_cover, exact_cover_certified, greedy_cover, lower_bound, Certificate, ExactCover, KneserCover};
pub use mixed::{MixedProfile, TensorTriple};
pub use payoff::Payoff;
pub use rational::Rational;
