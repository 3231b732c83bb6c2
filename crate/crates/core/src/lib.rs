//! Exact counting of Bethe string configurations at `q = 0`, the string
//! center equations, and the power series solution of the Q-system for the
//! affine families `X_N^(r)`.

pub mod acceptance;
pub mod algebra;
pub mod character;
pub mod cli;
pub mod error;
pub mod matrix;
pub mod pattern;
pub mod qsystem;
pub mod sce;
pub mod series;
pub mod strings;

pub use error::{Error, Result};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// JSON number when the value fits in `i64`, decimal string otherwise.
pub fn big_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(x.to_string()),
    }
}
