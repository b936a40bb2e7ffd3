//! Ground-truth vessel simulators and synthetic sensor logs.

mod continuous;
mod discrete;
mod excitation;
mod logs;
mod truth;

pub use continuous::*;
pub use discrete::*;
pub use excitation::*;
pub use logs::*;
pub use truth::*;
