// `!(x > 0.0)` style tests are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod defect;
pub mod derived;
pub mod domain;
pub mod error;
pub mod fixtures;
pub mod gauss;
pub mod geodesy;
pub mod linalg;
pub mod nochka;
pub mod poly;
pub mod suite;
pub mod surface;
