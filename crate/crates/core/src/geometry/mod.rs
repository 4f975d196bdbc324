//! Metric and predicate kernel.

mod delta;
mod exact;
mod linking;
mod point;
mod polyloop;
mod similarity;
mod tube;

pub use delta::{delta_metric, delta_point_to_polyloop, delta_point_to_segment};
pub use exact::{orient2d, segment_intersect, segments_intersect_2d, PredicateError, XPoint2, XPoint3};
pub use linking::{
    gauss_linking, linking_number, linking_number_exact, linking_report_exact, LinkError, LinkingReport,
};
pub use point::{point_segment_distance, segment_distance, Aabb, Point3, Segment3};
pub use polyloop::{LoopError, PolyLoop};
pub use similarity::{det3, ExactSimilarity, Mat3, Similarity, SimilarityError, IDENTITY3};
pub use tube::{Metric, TubeError, TubeNeighborhood};
