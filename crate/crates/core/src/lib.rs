pub mod derived;
pub mod gen;
pub mod lax;
pub mod logic;
pub mod parse;
pub mod print;
pub mod reduce;
pub mod subst;
pub mod syntax;
pub mod typing;
