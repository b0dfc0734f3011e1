//! Dense univariate polynomials and certified real-root isolation.

mod poly;
pub mod roots;

pub use poly::{delta_h, Poly};
pub use roots::{
    cmp_distinct, eval_interval, real_roots, simplest_between, squarefree_decomposition,
    IsolatingInterval, Root, RootList, RootValue, DEFAULT_ROOT_BITS,
};
