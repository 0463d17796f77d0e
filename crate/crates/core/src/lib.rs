//! Geometric crystals on the cluster tori of double Bruhat cells, with exact
//! rational arithmetic and their tropicalizations.

pub mod cartan;
pub mod chart;
pub mod crystal_a;
pub mod crystal_x;
pub mod expr;
pub mod matrix;
pub mod oracle;
pub mod rational;
pub mod seed;
pub mod tori;
pub mod tropical;
pub mod verify;
pub mod semifield;

pub use cartan::CartanData;
pub use expr::{ExprBuilder, NodeId, PositiveMap};
pub use matrix::QMatrix;
pub use rational::Rational;
pub use seed::{Seed, SeedIndex};
pub use semifield::{PositiveRationals, Semifield, TropicalIntegers};
