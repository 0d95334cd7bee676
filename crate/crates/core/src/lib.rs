//! Simulation and feasibility analysis of summoning tasks: a state handed over
//! at one spacetime point must be returned on demand at one of several later
//! points, chosen by the requester and unknown in advance.

pub mod feasibility;
pub mod quantum;
pub mod rng;
pub mod scenario;
pub mod spacetime;
pub mod strategies;
