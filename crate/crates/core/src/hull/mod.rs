pub mod connection;
pub mod enveloping;
pub mod splitting;

pub use connection::{build_connection_form, build_hull, ConnectionForm, Hull};
pub use enveloping::{build_enveloping_rep, EnvelopingTruncation, Grading};
pub use splitting::{build_splitting, SplitAlgebra};
