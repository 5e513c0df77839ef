//! Twisted Gaudin qq-systems, their Bethe roots, Miura oper connections and
//! G-Wronskians.

pub mod backlund;
pub mod bethe;
pub mod cartan;
pub mod error;
pub mod io;
pub mod matrix;
pub mod minors;
pub mod oper;
pub mod polyring;
pub mod qqcore;
pub mod wronskian;

pub use error::{Error, Result};
