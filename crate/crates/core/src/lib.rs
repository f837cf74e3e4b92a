pub mod crossed;
pub mod diffop;
pub mod error;
pub mod expr;
pub mod gauss;
pub mod gns;
pub mod involution;
pub mod koszul;
pub mod lie;
pub mod linalg;
pub mod model;
pub mod morita;
pub mod pbw;
pub mod random;
pub mod report;
pub mod scene;
pub mod suites;
pub mod reduction;
pub mod rieffel;
pub mod star;
pub mod vertical;
pub mod poly;
pub mod scalar;
pub mod series;
