pub mod graphcore;
pub mod liealg;
pub mod sectors;
pub mod exactla;
pub mod maps;
pub mod wbench;
