pub mod analysis;
pub mod em;
pub mod io;
pub mod moea;
pub mod scenarios;
