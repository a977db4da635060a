pub mod classify;
pub mod cli;
pub mod families;
pub mod gfq;
pub mod io;
pub mod lanes;
pub mod matroid;
pub mod matvec;
pub mod report;
pub mod verify;
