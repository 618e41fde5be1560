use lattice_core::{int_inverse, Error, ExpVec, IntMat, Result};
use laurent_ring::TruncatedSeries;
use seed_engine::TrackedPath;

use crate::diagram::{Direction, ScatterDiagram2};

/// The positive chamber direction (1,1).
pub const C_PLUS: [i64; 2] = [1, 1];
/// The negative chamber direction (−1,−1).
pub const C_MINUS: [i64; 2] = [-1, -1];

/// A cluster chamber: the cone spanned by the g-vectors of one cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub generators: [[i64; 2]; 2],
    inverse: IntMat,
}

impl Chamber {
    /// An interior direction, the sum of the generators.
    pub fn representative(&self) -> [i64; 2] {
        let [a, b] = self.generators;
        [a[0] + b[0], a[1] + b[1]]
    }

    pub fn contains(&self, g: &ExpVec) -> bool {
        self.inverse.mul_vec(&g.0).iter().all(|&c| c >= 0)
    }
}

/// Cluster chambers of the diagram's seed, from alternating paths up to `depth`.
pub fn cluster_chambers(d: &ScatterDiagram2, depth: usize) -> Result<Vec<Chamber>> {
    let s = d.seed();
    let mut out: Vec<Chamber> = Vec::new();
    for start in 0..2 {
        let mut p = TrackedPath::new(s.clone());
        for step in 0..=depth {
            let g = p.g_vectors()?;
            let mut generators = [[g[0][0], g[0][1]], [g[1][0], g[1][1]]];
            generators.sort();
            if !out.iter().any(|c| c.generators == generators) {
                let m = IntMat::from_columns(vec![0, 1], vec![0, 1], &[g[0].0.clone(), g[1].0.clone()]);
                out.push(Chamber {
                    generators,
                    inverse: int_inverse(&m)?,
                });
            }
            if step < depth {
                p.push((start + step) % 2)?;
            }
        }
    }
    Ok(out)
}

/// Default depth of the chamber enumeration.
pub const CHAMBER_DEPTH: usize = 12;

/// θ_g at the chamber containing the direction `at`: x^g transported from
/// g's own cluster chamber along the shorter arc.
pub fn theta(d: &ScatterDiagram2, g: &ExpVec, at: [i64; 2]) -> Result<TruncatedSeries> {
    theta_with_depth(d, g, at, CHAMBER_DEPTH)
}

pub fn theta_with_depth(
    d: &ScatterDiagram2,
    g: &ExpVec,
    at: [i64; 2],
    depth: usize,
) -> Result<TruncatedSeries> {
    if g.len() != 2 {
        return Err(Error::Usage(format!("degree {g} is not in the plane")));
    }
    let chambers = cluster_chambers(d, depth)?;
    let Some(c) = chambers.iter().find(|c| c.contains(g)) else {
        return Err(classify_gap(d, g, depth)?);
    };
    let op = d.path_product(c.representative(), at, Direction::Shorter)?;
    let z = TruncatedSeries::monomial(d.seed(), g.clone(), d.order());
    d.apply(&op, &z)
}

// which error a degree outside every enumerated chamber gets
fn classify_gap(d: &ScatterDiagram2, g: &ExpVec, depth: usize) -> Result<Error> {
    let s = d.seed();
    let prod = s.bint(0, 1) * s.bint(1, 0);
    if prod.abs() > 4 {
        return Ok(Error::UnsupportedRegion(format!(
            "{g} (outside the cluster chambers of a wild seed)"
        )));
    }
    if prod.abs() == 4 {
        // the limiting ray of the g-vector fan
        let p = TrackedPath::from_steps(s, &(0..depth).map(|i| i % 2).collect::<Vec<_>>())?;
        let q = TrackedPath::from_steps(s, &(0..depth + 2).map(|i| i % 2).collect::<Vec<_>>())?;
        let a = &q.g_vectors()?[0] - &p.g_vectors()?[0];
        let cross = a[0] * g[1] - a[1] * g[0];
        let dot = a[0] * g[0] + a[1] * g[1];
        if cross == 0 && dot > 0 {
            return Ok(Error::UnsupportedRegion(format!(
                "{g} (limiting ray of the g-vector fan)"
            )));
        }
    }
    Ok(Error::OutsideClusterChambers(g.to_string()))
}
