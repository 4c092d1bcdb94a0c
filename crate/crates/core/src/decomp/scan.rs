//! Bloch-sphere scan for product-conditioning directions.
//!
//! Probes a two-level subsystem on an angular grid and records every
//! direction whose conditional vector on the remaining bipartition is
//! product within tolerance. Hits connected through grid-scale proximity are
//! merged into clusters; a cluster whose spread is far beyond the grid step
//! is flagged as a curve (a continuum of decompositions rather than an
//! isolated one).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::pencil::ConditionalPencil;
use crate::error::{Error, Result};
use crate::tensor::PureState;
use crate::tolerances::{CLUSTER_LINK_STEPS, CURVE_SPREAD_STEPS};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanHit {
    pub theta_deg: f64,
    pub phi_deg: f64,
    pub residual: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanCluster {
    pub centroid_theta_deg: f64,
    pub centroid_phi_deg: f64,
    /// Largest angular distance from the centroid to a member, degrees.
    pub spread_deg: f64,
    pub count: usize,
    /// Spread beyond `CURVE_SPREAD_STEPS` grid steps: a continuum, not a point.
    pub is_curve: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanResult {
    pub grid_deg: f64,
    pub tol: f64,
    pub n_probes: usize,
    pub hits: Vec<ScanHit>,
    pub clusters: Vec<ScanCluster>,
    /// True when any cluster is a curve.
    pub continuum: bool,
}

impl ScanResult {
    /// Clusters that are isolated directions (not curves).
    pub fn point_clusters(&self) -> Vec<&ScanCluster> {
        self.clusters.iter().filter(|c| !c.is_curve).collect()
    }

    pub fn max_hit_residual(&self) -> f64 {
        self.hits.iter().map(|h| h.residual).fold(0.0, f64::max)
    }
}

pub(crate) fn bloch_angle_deg(t1: f64, p1: f64, t2: f64, p2: f64) -> f64 {
    let (t1, p1, t2, p2) = (
        t1.to_radians(),
        p1.to_radians(),
        t2.to_radians(),
        p2.to_radians(),
    );
    let c = t1.cos() * t2.cos() + t1.sin() * t2.sin() * (p1 - p2).cos();
    c.clamp(-1.0, 1.0).acos().to_degrees()
}

/// Scans `state` on subsystem `sys` (dimension 2) at `grid_deg` resolution.
/// Probe angles are in degrees: θ ∈ [0°, 180°], φ ∈ [0°, 360°).
pub fn scan_product_conditioning(
    state: &PureState,
    sys: usize,
    grid_deg: f64,
    tol: f64,
) -> Result<ScanResult> {
    if !(grid_deg > 0.0) || grid_deg > 90.0 {
        return Err(Error::invalid_config(
            "grid_deg",
            format!("must be in (0, 90], got {grid_deg}"),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid_config("tol", "must be positive"));
    }
    let pencil = ConditionalPencil::new(state, sys)?;

    let n_theta = (180.0 / grid_deg - 1e-9).ceil() as usize + 1;
    let n_phi = (360.0 / grid_deg - 1e-9).ceil() as usize;
    let mut probes: Vec<(f64, f64)> = Vec::new();
    for i in 0..n_theta {
        let theta = (i as f64 * grid_deg).min(180.0);
        if theta < 1e-12 || (theta - 180.0).abs() < 1e-12 {
            probes.push((theta, 0.0));
        } else {
            for j in 0..n_phi {
                probes.push((theta, j as f64 * grid_deg));
            }
        }
    }
    let n_probes = probes.len();

    let hits: Vec<ScanHit> = probes
        .par_iter()
        .filter_map(|&(theta, phi)| {
            let r = pencil.residual(theta.to_radians(), phi.to_radians());
            if r.residual <= tol {
                Some(ScanHit {
                    theta_deg: theta,
                    phi_deg: phi,
                    residual: r.residual,
                    probability: r.norm * r.norm,
                })
            } else {
                None
            }
        })
        .collect();

    let clusters = cluster_hits(&hits, grid_deg);
    let continuum = clusters.iter().any(|c| c.is_curve);
    Ok(ScanResult {
        grid_deg,
        tol,
        n_probes,
        hits,
        clusters,
        continuum,
    })
}

fn cluster_hits(hits: &[ScanHit], grid_deg: f64) -> Vec<ScanCluster> {
    let n = hits.len();
    if n == 0 {
        return Vec::new();
    }
    let link = CLUSTER_LINK_STEPS * grid_deg;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    // Hits arrive ordered by θ then φ; only rows within the link distance can
    // touch, and within a row only a bounded φ window (wider near the poles).
    let mut row_starts: Vec<usize> = vec![0];
    for k in 1..n {
        if hits[k].theta_deg != hits[k - 1].theta_deg {
            row_starts.push(k);
        }
    }
    row_starts.push(n);
    let rows = row_starts.len() - 1;
    for a_row in 0..rows {
        let (a_lo, a_hi) = (row_starts[a_row], row_starts[a_row + 1]);
        for b_row in a_row..rows {
            let (b_lo, b_hi) = (row_starts[b_row], row_starts[b_row + 1]);
            if hits[b_lo].theta_deg - hits[a_lo].theta_deg > link + 1e-9 {
                break;
            }
            for a in a_lo..a_hi {
                for b in b_lo..b_hi {
                    if b_row == a_row && b <= a {
                        continue;
                    }
                    let d = bloch_angle_deg(
                        hits[a].theta_deg,
                        hits[a].phi_deg,
                        hits[b].theta_deg,
                        hits[b].phi_deg,
                    );
                    if d <= link + 1e-9 {
                        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                        if ra != rb {
                            parent[ra] = rb;
                        }
                    }
                }
            }
        }
    }

    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for k in 0..n {
        let root = find(&mut parent, k);
        groups.entry(root).or_default().push(k);
    }

    let mut clusters: Vec<ScanCluster> = groups
        .values()
        .map(|members| {
            let (mut x, mut y, mut z) = (0.0f64, 0.0f64, 0.0f64);
            for &k in members {
                let t = hits[k].theta_deg.to_radians();
                let p = hits[k].phi_deg.to_radians();
                x += t.sin() * p.cos();
                y += t.sin() * p.sin();
                z += t.cos();
            }
            let norm = (x * x + y * y + z * z).sqrt();
            let (ct, cp) = if norm < 1e-9 {
                (hits[members[0]].theta_deg, hits[members[0]].phi_deg)
            } else {
                let theta = (z / norm).clamp(-1.0, 1.0).acos().to_degrees();
                let mut phi = y.atan2(x).to_degrees();
                if phi < 0.0 {
                    phi += 360.0;
                }
                (theta, phi)
            };
            let spread = members
                .iter()
                .map(|&k| bloch_angle_deg(hits[k].theta_deg, hits[k].phi_deg, ct, cp))
                .fold(0.0, f64::max);
            ScanCluster {
                centroid_theta_deg: ct,
                centroid_phi_deg: cp,
                spread_deg: spread,
                count: members.len(),
                is_curve: spread > CURVE_SPREAD_STEPS * grid_deg,
            }
        })
        .collect();
    clusters.sort_by(|a, b| {
        (a.centroid_theta_deg, a.centroid_phi_deg)
            .partial_cmp(&(b.centroid_theta_deg, b.centroid_phi_deg))
            .unwrap()
    });
    clusters
}
