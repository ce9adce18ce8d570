pub mod certificates;
pub mod cli;
pub mod error;
pub mod graph;
pub mod objective;
pub mod opt;
pub mod partite;
pub mod partitions;
pub mod perturbation;
pub mod poly;
pub mod rational;
pub mod strictness;
pub mod symmetrise;
