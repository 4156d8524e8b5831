//! Sequence spaces, finitary weight sequences and weighted shifts.

mod shift;
mod space;
mod vector;
mod weights;

pub use shift::{apply_shift, orbit_norms, power_coefficient, twisted, Direction, ShiftOperator};
pub use space::{SpaceKind, SpaceSpec};
pub use vector::{vector_norm, BiVector};
pub use weights::{make_weights, window_product, Annotation, Core, Family, Support, WeightDescription, WeightSequence};
