pub mod field;
pub mod matrix;
pub mod presentation;
pub mod repetitive;
pub mod sparse;
pub mod module;
pub mod stable;
pub mod strings;
pub mod cli;
