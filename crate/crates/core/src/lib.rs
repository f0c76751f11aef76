pub mod cli;
pub mod currents;
pub mod dirac;
pub mod distcalc;
pub mod qcoeff;
pub mod qvirasoro;
pub mod report;
pub mod vertexcalc;
