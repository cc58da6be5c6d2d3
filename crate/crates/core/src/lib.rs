pub mod exact_angles;
pub mod vertex_enum;
pub mod linalg;
pub mod rational_solver;
pub mod diophantine;
pub mod geometry;
pub mod tilings;
pub mod cli;
