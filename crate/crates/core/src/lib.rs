//! Exact-arithmetic engine for the ℤ₂×ℤ₂-graded extension of osp(1|2).

pub mod algebra;
pub mod cartan;
pub mod linalg;
pub mod rational;
pub mod singular;
pub mod submodule;
pub mod verma;
