pub mod angles;
pub mod cli;
pub mod config;
pub mod geometry;
pub mod layered;
pub mod lp;
pub mod surfaces;
pub mod triangulation;
mod union_find;
pub mod volume_opt;
