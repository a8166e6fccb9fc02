pub mod channel;
pub mod cli;
pub mod detector;
pub mod gain;
pub mod linalg;
pub mod montecarlo;
pub mod output;
pub mod planner;
pub mod quadrature;
pub mod rng;
pub mod scenario;
pub mod sweep;
pub mod tracy_widom;
pub mod validation;
