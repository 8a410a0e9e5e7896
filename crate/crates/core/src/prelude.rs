//! Names every module needs. `Float` supplies `sqrt` and friends without std;
//! when std is linked its inherent f64 methods take precedence and the trait
//! goes unused.

pub(crate) use alloc::vec::Vec;
pub(crate) use num_complex::Complex64;
#[allow(unused_imports)]
pub(crate) use num_traits::Float;
