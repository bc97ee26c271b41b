pub mod builtins;
pub mod lattice;
pub mod model;
pub mod rep;

pub use builtins::Example;
pub use lattice::{loop_of, Lattice};
pub use model::{GroupElement, SemidirectModel};
pub use rep::{closedness_check, monodromy, separation_demo, verify_path_independence, MonodromyRep, Separation};
