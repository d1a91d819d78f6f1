//! Grids, discrete fields, multivalued graphs, and initial data.
//!
//! Two discrete representations are used throughout:
//!
//! * [`LineField`] — finite-volume cell averages of w(s,τ) on a uniform
//!   grid in s.  The cell form gives discrete conservation for the 1-D
//!   scheme.
//! * [`RadialField`] — point values of u(r,t) on nodes equispaced in
//!   log r.  The log spacing is what makes the change of variables
//!   s = −(N−2)·log r an exact relabelling: radial nodes map onto line
//!   cell centers with no interpolation.
//!
//! [`MultiGraph`] represents possibly multivalued graphs: at a jump of a
//! limit profile the graph carries the whole vertical segment, which is
//! the correct object for graph-distance diagnostics.

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Line side: uniform cells in s.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineGrid {
    pub s_min: f64,
    pub s_max: f64,
    /// Number of cells.
    pub n: usize,
    pub ds: f64,
}

impl LineGrid {
    pub fn new(s_min: f64, s_max: f64, n: usize) -> Result<Self> {
        if !(s_max > s_min) || !s_min.is_finite() || !s_max.is_finite() {
            return Err(Error::Validation(format!(
                "line grid needs s_min < s_max, got [{s_min}, {s_max}]"
            )));
        }
        if n == 0 {
            return Err(Error::Validation("line grid needs at least one cell".into()));
        }
        Ok(LineGrid { s_min, s_max, n, ds: (s_max - s_min) / n as f64 })
    }

    /// Center of cell j.
    #[inline]
    pub fn center(&self, j: usize) -> f64 {
        self.s_min + (j as f64 + 0.5) * self.ds
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.center(j))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineField {
    pub grid: LineGrid,
    /// Cell averages of w; all nonnegative.
    pub values: Vec<f64>,
    /// Current time τ ≥ 0.
    pub tau: f64,
}

impl LineField {
    pub fn new(grid: LineGrid, values: Vec<f64>, tau: f64) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::Validation(format!(
                "field length {} does not match cell count {}",
                values.len(),
                grid.n
            )));
        }
        validate_values(&values)?;
        if !(tau >= 0.0) {
            return Err(Error::Validation(format!("time must be >= 0, got {tau}")));
        }
        Ok(LineField { grid, values, tau })
    }

    /// Sample a closed form at cell centers.
    pub fn from_fn(grid: LineGrid, tau: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.centers().map(f).collect();
        LineField::new(grid, values, tau)
    }

    /// The finite-volume integral ∫ w ds = ds·Σ wⱼ.
    pub fn mass(&self) -> f64 {
        self.grid.ds * self.values.iter().sum::<f64>()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------------------
// Radial side: nodes equispaced in log r.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    /// Number of nodes (both endpoints included).
    pub n: usize,
    /// log r_{i+1} − log r_i.
    pub dlog: f64,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(r_min > 0.0) {
            // r = 0 carries the density singularity; it is reached only as
            // the s → +∞ limit in the line frame.
            return Err(Error::Validation(format!("r_min must be positive, got {r_min}")));
        }
        if !(r_max > r_min) || !r_max.is_finite() {
            return Err(Error::Validation(format!(
                "radial grid needs r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if n < 2 {
            return Err(Error::Validation("radial grid needs at least two nodes".into()));
        }
        let dlog = (r_max.ln() - r_min.ln()) / (n - 1) as f64;
        Ok(RadialGrid { r_min, r_max, n, dlog })
    }

    /// Node i, log-spaced.
    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        if i == self.n - 1 {
            self.r_max
        } else {
            (self.r_min.ln() + i as f64 * self.dlog).exp()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.node(i))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    pub grid: RadialGrid,
    /// u at the nodes; all nonnegative.
    pub values: Vec<f64>,
    /// Current time t ≥ 0.
    pub t: f64,
}

impl RadialField {
    pub fn new(grid: RadialGrid, values: Vec<f64>, t: f64) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::Validation(format!(
                "field length {} does not match node count {}",
                values.len(),
                grid.n
            )));
        }
        validate_values(&values)?;
        if !(t >= 0.0) {
            return Err(Error::Validation(format!("time must be >= 0, got {t}")));
        }
        Ok(RadialField { grid, values, t })
    }

    pub fn from_fn(grid: RadialGrid, t: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().map(f).collect();
        RadialField::new(grid, values, t)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }
}

fn validate_values(values: &[f64]) -> Result<()> {
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() || *v < 0.0 {
            return Err(Error::Validation(format!(
                "field values must be finite and nonnegative, found {v} at index {i}"
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Multivalued graphs.
// ---------------------------------------------------------------------------

/// One abscissa of a (possibly multivalued) graph: the function takes every
/// value in [lo, hi] at x.  Univalued where lo = hi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphSample {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiGraph {
    samples: Vec<GraphSample>,
}

impl MultiGraph {
    pub fn new(samples: Vec<GraphSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Validation("graph needs at least one sample".into()));
        }
        for pair in samples.windows(2) {
            if !(pair[1].x > pair[0].x) {
                return Err(Error::Validation(format!(
                    "graph abscissae must be strictly increasing, got {} then {}",
                    pair[0].x, pair[1].x
                )));
            }
        }
        for s in &samples {
            if !(s.lo <= s.hi) || !s.x.is_finite() || !s.lo.is_finite() || !s.hi.is_finite() {
                return Err(Error::Validation(format!(
                    "graph sample needs finite lo <= hi, got [{}, {}] at x={}",
                    s.lo, s.hi, s.x
                )));
            }
        }
        Ok(MultiGraph { samples })
    }

    pub fn univalued(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        MultiGraph::new(
            points.into_iter().map(|(x, y)| GraphSample { x, lo: y, hi: y }).collect(),
        )
    }

    pub fn samples(&self) -> &[GraphSample] {
        &self.samples
    }

    pub fn x_min(&self) -> f64 {
        self.samples[0].x
    }

    pub fn x_max(&self) -> f64 {
        self.samples[self.samples.len() - 1].x
    }
}

// ---------------------------------------------------------------------------
// Initial data.
// ---------------------------------------------------------------------------

/// Radial initial data u₀(r).
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// u₀(r) = max{(r−0.5)(1.5−r), 0}: compactly supported, u₀(0) = 0,
    /// maximum 1/4 at r = 1.
    Bump,
    /// Level K near the origin with a monotone cutoff: u₀ = K on
    /// [0, plateau_end], linear down to 0 at `support`, 0 beyond.
    Plateau { k: f64, plateau_end: f64, support: f64 },
    /// Tabulated (r, u₀) pairs, linearly interpolated, 0 outside the table.
    Custom(Vec<(f64, f64)>),
}

impl InitialCondition {
    pub fn plateau(k: f64, plateau_end: f64, support: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(Error::Validation(format!("plateau level must be positive, got {k}")));
        }
        if !(plateau_end > 0.0 && support > plateau_end) {
            return Err(Error::Validation(format!(
                "plateau needs 0 < plateau_end < support, got {plateau_end}, {support}"
            )));
        }
        Ok(InitialCondition::Plateau { k, plateau_end, support })
    }

    pub fn custom(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Validation("custom data needs at least two points".into()));
        }
        for pair in points.windows(2) {
            if !(pair[1].0 > pair[0].0) {
                return Err(Error::Validation(
                    "custom data abscissae must be strictly increasing".into(),
                ));
            }
        }
        if points.iter().any(|&(r, u)| r < 0.0 || u < 0.0 || !r.is_finite() || !u.is_finite()) {
            return Err(Error::Validation("custom data must be finite and nonnegative".into()));
        }
        Ok(InitialCondition::Custom(points))
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            InitialCondition::Bump => ((r - 0.5) * (1.5 - r)).max(0.0),
            InitialCondition::Plateau { k, plateau_end, support } => {
                if r <= *plateau_end {
                    *k
                } else if r >= *support {
                    0.0
                } else {
                    k * (support - r) / (support - plateau_end)
                }
            }
            InitialCondition::Custom(points) => {
                let first = points[0];
                let last = points[points.len() - 1];
                if r < first.0 || r > last.0 {
                    return 0.0;
                }
                let idx = points.partition_point(|&(x, _)| x <= r);
                if idx == 0 {
                    return first.1;
                }
                if idx == points.len() {
                    return last.1;
                }
                let (x0, y0) = points[idx - 1];
                let (x1, y1) = points[idx];
                y0 + (y1 - y0) * (r - x0) / (x1 - x0)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_grid_centers_are_uniform() {
        let g = LineGrid::new(-1.0, 1.0, 4).unwrap();
        assert_eq!(g.ds, 0.5);
        let centers: Vec<f64> = g.centers().collect();
        assert_eq!(centers, vec![-0.75, -0.25, 0.25, 0.75]);
    }

    #[test]
    fn radial_grid_is_log_spaced() {
        let g = RadialGrid::new(0.25, 4.0, 5).unwrap();
        let nodes: Vec<f64> = g.nodes().collect();
        for pair in nodes.windows(2) {
            let ratio = pair[1] / pair[0];
            assert!((ratio - 2.0).abs() < 1e-12, "log spacing broken: {ratio}");
        }
        assert_eq!(nodes[4], 4.0);
    }

    #[test]
    fn fields_reject_bad_values() {
        let g = LineGrid::new(0.0, 1.0, 3).unwrap();
        assert!(LineField::new(g, vec![0.0, -1.0, 0.0], 0.0).is_err());
        assert!(LineField::new(g, vec![0.0, f64::NAN, 0.0], 0.0).is_err());
        assert!(LineField::new(g, vec![0.0, 1.0], 0.0).is_err());
        assert!(LineField::new(g, vec![0.0, 1.0, 2.0], -1.0).is_err());
        assert!(RadialGrid::new(0.0, 1.0, 4).is_err()); // singularity excluded
    }

    #[test]
    fn field_mass_is_cell_sum() {
        let g = LineGrid::new(0.0, 1.0, 10).unwrap();
        let w = LineField::from_fn(g, 0.0, |_| 2.0).unwrap();
        assert!((w.mass() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn multigraph_validates_ordering() {
        assert!(MultiGraph::univalued([(0.0, 1.0), (1.0, 2.0)]).is_ok());
        assert!(MultiGraph::univalued([(1.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(MultiGraph::new(vec![GraphSample { x: 0.0, lo: 2.0, hi: 1.0 }]).is_err());
    }

    #[test]
    fn bump_data_shape() {
        let ic = InitialCondition::Bump;
        assert_eq!(ic.eval(0.0), 0.0);
        assert_eq!(ic.eval(0.5), 0.0);
        assert!((ic.eval(1.0) - 0.25).abs() < 1e-15); // the maximum
        assert_eq!(ic.eval(1.5), 0.0);
        assert_eq!(ic.eval(2.0), 0.0);
    }

    #[test]
    fn plateau_data_shape() {
        let ic = InitialCondition::plateau(1.0, 0.5, 1.0).unwrap();
        assert_eq!(ic.eval(0.0), 1.0);
        assert_eq!(ic.eval(0.5), 1.0);
        assert!((ic.eval(0.75) - 0.5).abs() < 1e-15);
        assert_eq!(ic.eval(1.0), 0.0);
        assert!(InitialCondition::plateau(0.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn custom_data_interpolates() {
        let ic = InitialCondition::custom(vec![(1.0, 0.0), (2.0, 2.0), (3.0, 0.0)]).unwrap();
        assert_eq!(ic.eval(0.5), 0.0);
        assert!((ic.eval(1.5) - 1.0).abs() < 1e-15);
        assert!((ic.eval(2.0) - 2.0).abs() < 1e-15);
        assert_eq!(ic.eval(3.5), 0.0);
    }
}
