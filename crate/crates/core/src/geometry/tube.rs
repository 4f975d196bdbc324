use super::delta::delta_point_to_segment;
use super::point::{point_segment_distance, Point3};
use super::polyloop::PolyLoop;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TubeError {
    #[error("tube radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("tube core is empty")]
    EmptyCore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Delta,
    Euclidean,
}

/// Closed neighborhood `{p : dist(p, core) <= radius}` of a union of loops.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TubeNeighborhood {
    core: Vec<PolyLoop>,
    radius: f64,
    metric: Metric,
}

impl TubeNeighborhood {
    pub fn new(core: Vec<PolyLoop>, radius: f64, metric: Metric) -> Result<Self, TubeError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(TubeError::BadRadius(radius));
        }
        if core.is_empty() {
            return Err(TubeError::EmptyCore);
        }
        Ok(TubeNeighborhood { core, radius, metric })
    }

    pub fn core(&self) -> &[PolyLoop] {
        &self.core
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    /// Distance from `p` to the core in the tube's metric.
    pub fn distance(&self, p: Point3) -> f64 {
        let f = match self.metric {
            Metric::Delta => delta_point_to_segment,
            Metric::Euclidean => point_segment_distance,
        };
        self.core
            .iter()
            .flat_map(|l| l.edges())
            .map(|(a, b)| f(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: Point3) -> bool {
        self.distance(p) <= self.radius
    }
}
