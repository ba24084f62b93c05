//! Fricke and Charlap-Coley-Robbins modular polynomials `U_l`, `V_l`,
//! `W_l`, the numerators giving the isogenous curve, and l-isogenous curves
//! over prime fields.
//!
//! Three independent routes produce the same integer polynomials:
//! exact q-expansions ([`fricke_series`]), high-precision evaluation and
//! interpolation ([`fricke_float`]), and isogeny volcanoes over small prime
//! fields glued by CRT ([`volcano`]). [`atkin`] recovers the isogenous curve
//! from `U_l` alone.

pub mod arith;
pub mod atkin;
pub mod cli;
pub mod cosets;
pub mod crt;
pub mod eisenval;
pub mod formbasis;
pub mod fricke_float;
pub mod fricke_series;
pub mod newton;
pub mod poly;
pub mod qseries;
pub mod ring;
pub mod volcano;

pub use poly::{ABPoly, Family, TriPoly};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("{0} is not invertible in the coefficient ring")]
    NotInvertible(u64),
    #[error("result is not integral: {0}")]
    NonIntegral(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("degenerate case: {0}")]
    Degenerate(String),
    #[error("insufficient order: {0}")]
    Order(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Io(_) => 2,
            Error::Numerical(_) | Error::NonIntegral(_) | Error::Order(_) => 3,
            Error::NotInvertible(_) | Error::Degenerate(_) => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
