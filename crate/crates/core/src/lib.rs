pub mod cli;
pub mod cover;
pub mod curves;
pub mod decomposition;
pub mod mapfile;
pub mod obstruction;
pub mod parabolic;
pub mod surface;
pub mod words;
