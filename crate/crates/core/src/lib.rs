pub mod diagram;
pub mod exactalg;
pub mod khovanov;
pub mod lee;
pub mod cobordism;
pub mod ssengine;
pub mod concordance;
pub mod cli;
