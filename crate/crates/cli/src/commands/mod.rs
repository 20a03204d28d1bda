pub mod forecast;
pub mod game;
pub mod lattice;
pub mod map;
