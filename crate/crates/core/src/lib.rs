//! Exact computations in windows of derived categories of finite acyclic
//! quivers, together with thread quivers and their symbolic orders.

pub mod orders;
pub mod threadquiver;
pub mod derived;
pub mod metric;
pub mod sections;
pub mod threads;
