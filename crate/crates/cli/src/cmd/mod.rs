pub mod basis;
pub mod circuit;
pub mod sweep;
pub mod teleport;
