pub mod front;
pub mod rewrite;
pub mod cobordism;
pub mod classify;
pub mod planner;
pub mod numerics;
pub mod io;
pub mod random;
