//! Exact (q,t)-characters of Kirillov-Reshetikhin modules of type `A_r`.
//!
//! The crate builds characters from KR-tableaux, implements the twisted
//! products `*` and `*_γ`, and checks the quantum cluster algebra structure on
//! the fundamental cluster: t-commutation, compatibility of the exchange and
//! commutation matrices, the deformed T-system and the quantum mutation
//! relation.

pub mod blocks;
pub mod cluster;
pub mod error;
pub mod exchange;
pub mod tableaux;
pub mod twist;
pub mod ylattice;

pub use error::{Error, Result};
