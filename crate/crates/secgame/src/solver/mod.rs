//! Equilibrium solvers: [`two`] handles arbitrary two-defender games with
//! droppable coverage; [`multi`] handles any number of defenders whose
//! schedules are monotone with respect to their own preferences.

pub mod multi;
pub mod two;
