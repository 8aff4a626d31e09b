//! Expression front end and machine interface: parser, canonical printer,
//! JSON codec, and the command-line dispatcher.

pub mod cli;
pub mod json;
pub mod parse;
pub mod print;

pub use json::{const_to_json, fn_from_json, fn_to_json, op_from_json, op_to_json};
pub use parse::{parse_function, parse_operator};
pub use print::{superconst_str, superfn_str, superop_str};

use crate::funcring::FuncRingError;
use crate::superop::SuperOpError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IoError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { message: String, position: usize },
    #[error("unknown generator theta{index} at byte {position}: context has {max} odd constants")]
    UnknownGenerator {
        index: usize,
        max: usize,
        position: usize,
    },
    #[error("denominator at byte {position} is not an invertible function")]
    NonInvertibleDenominator { position: usize },
    #[error("expression contains D but a function was expected")]
    OperatorInFunctionContext,
    #[error("malformed structured input: {message}")]
    Json { message: String },
    #[error(transparent)]
    Ring(#[from] FuncRingError),
    #[error(transparent)]
    Op(#[from] SuperOpError),
}
