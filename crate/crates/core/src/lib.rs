pub mod arith;
pub mod containment;
pub mod certificates;
pub mod cli;
pub mod corpus;
pub mod cremona;
pub mod errata;
pub mod monomials;
pub mod oracle;
pub mod systems;
