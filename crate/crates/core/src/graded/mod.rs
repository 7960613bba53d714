//! Bigraded modules over `k[x,y]/(xy)`, `k[x,y,u,v]/(xy)` and
//! `k[x^±,y^±][s]`, truncated to finite windows.

pub mod module;
pub mod ring;

pub use module::{
    direct_sum, extend_uv, generate_submodule, homology, quotient_module, ring_variable_ops,
    tensor_formula_module, BasisLabel, BigradedModule, FreeModule, Generated, Generator,
    OperatorAction, Window,
};
pub use ring::{BaseRing, Bideg, Monomial, RingElem, RingMatrix};
