use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sparse::SparseMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansConfig {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Stop when no centroid moves farther than this.
    pub tol: f64,
    /// Cluster unit-length copies of the columns (cosine geometry) instead
    /// of the raw columns.
    pub normalize: bool,
    /// Independent k-means++ restarts; the lowest final inertia wins.
    pub restarts: usize,
}

impl KMeansConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        KMeansConfig {
            k,
            seed,
            max_iter: 25,
            tol: 1e-4,
            normalize: true,
            restarts: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub k: usize,
    pub assignment: Vec<usize>,
    pub dims: Vec<usize>,
    /// Within-cluster sum of squares around the final centroids.
    pub inertia: f64,
    pub iterations_run: usize,
    /// Inertia after each assignment step, then the final value.
    pub inertia_history: Vec<f64>,
}

impl Clustering {
    /// Wraps an externally produced assignment. Every cluster must be
    /// non-empty.
    pub fn from_assignment(k: usize, assignment: Vec<usize>) -> Result<Self> {
        let mut dims = vec![0; k];
        for (j, &c) in assignment.iter().enumerate() {
            if c >= k {
                return Err(Error::InvalidArgument(format!(
                    "document {j} assigned to cluster {c} >= k = {k}"
                )));
            }
            dims[c] += 1;
        }
        if let Some(c) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidArgument(format!("cluster {c} is empty")));
        }
        Ok(Clustering {
            k,
            assignment,
            dims,
            inertia: f64::NAN,
            iterations_run: 0,
            inertia_history: Vec::new(),
        })
    }

    /// Every document in its own cluster.
    pub fn singletons(n: usize) -> Self {
        let mut c = Self::from_assignment(n, (0..n).collect()).expect("valid singletons");
        c.inertia = 0.0;
        c
    }

    pub fn members(&self, cluster: usize) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(move |&(_, &c)| c == cluster)
            .map(|(j, _)| j)
    }
}

/// A column view, optionally scaled to unit length.
struct Point<'a> {
    idx: &'a [usize],
    vals: &'a [f64],
    scale: f64,
    norm_sq: f64,
}

impl Point<'_> {
    fn dot(&self, dense: &[f64]) -> f64 {
        self.scale
            * self
                .idx
                .iter()
                .zip(self.vals)
                .map(|(&i, &v)| v * dense[i])
                .sum::<f64>()
    }

    fn dist_sq(&self, centroid: &[f64], centroid_norm_sq: f64) -> f64 {
        (self.norm_sq - 2.0 * self.dot(centroid) + centroid_norm_sq).max(0.0)
    }

    fn add_to(&self, acc: &mut [f64]) {
        for (&i, &v) in self.idx.iter().zip(self.vals) {
            acc[i] += self.scale * v;
        }
    }
}

/// Lloyd's algorithm with k-means++ seeding over the columns of `x`.
///
/// Empty clusters are refilled by moving the point farthest from its
/// centroid (taken from a cluster with more than one member). Results are
/// deterministic for a fixed seed.
pub fn kmeans(x: &SparseMatrix, cfg: &KMeansConfig) -> Result<Clustering> {
    let mut best = lloyd(x, cfg, cfg.seed)?;
    for r in 1..cfg.restarts {
        let run = lloyd(x, cfg, cfg.seed.wrapping_add(r as u64))?;
        if run.inertia < best.inertia {
            best = run;
        }
    }
    Ok(best)
}

fn lloyd(x: &SparseMatrix, cfg: &KMeansConfig, seed: u64) -> Result<Clustering> {
    let (m, n, k) = (x.rows(), x.cols(), cfg.k);
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "cluster count {k} must lie in 1..={n}"
        )));
    }
    let points: Vec<Point> = (0..n)
        .map(|j| {
            let (idx, vals) = x.column(j);
            let raw: f64 = vals.iter().map(|v| v * v).sum();
            let scale = if cfg.normalize && raw > 0.0 {
                1.0 / raw.sqrt()
            } else {
                1.0
            };
            Point {
                idx,
                vals,
                scale,
                norm_sq: raw * scale * scale,
            }
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus_seeds(&points, m, k, &mut rng);
    let mut assignment = vec![0usize; n];
    let mut history = Vec::new();
    let mut iterations = 0;

    for _ in 0..cfg.max_iter.max(1) {
        let norms: Vec<f64> = centroids
            .iter()
            .map(|c| c.iter().map(|v| v * v).sum())
            .collect();
        let mut dist = vec![0.0; n];
        let mut inertia = 0.0;
        for (j, p) in points.iter().enumerate() {
            let (best, d) = nearest(p, &centroids, &norms);
            assignment[j] = best;
            dist[j] = d;
            inertia += d;
        }
        history.push(inertia);
        repair_empty(&mut assignment, &mut dist, k);

        let updated = means(&points, &assignment, m, k);
        let movement = centroids
            .iter()
            .zip(&updated)
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        centroids = updated;
        iterations += 1;
        if movement < cfg.tol {
            break;
        }
    }

    let norms: Vec<f64> = centroids
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum())
        .collect();
    let inertia: f64 = points
        .iter()
        .zip(&assignment)
        .map(|(p, &c)| p.dist_sq(&centroids[c], norms[c]))
        .sum();
    history.push(inertia);

    let mut dims = vec![0; k];
    for &c in &assignment {
        dims[c] += 1;
    }
    Ok(Clustering {
        k,
        assignment,
        dims,
        inertia,
        iterations_run: iterations,
        inertia_history: history,
    })
}

fn nearest(p: &Point, centroids: &[Vec<f64>], norms: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, (centroid, &nc)) in centroids.iter().zip(norms).enumerate() {
        let d = p.dist_sq(centroid, nc);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn plus_plus_seeds(points: &[Point], m: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let dense = |j: usize| {
        let mut c = vec![0.0; m];
        points[j].add_to(&mut c);
        c
    };
    let mut chosen = vec![false; n];
    let first = rng.random_range(0..n);
    chosen[first] = true;
    let mut centroids = vec![dense(first)];
    let mut d2: Vec<f64> = {
        let c = &centroids[0];
        let nc: f64 = c.iter().map(|v| v * v).sum();
        points.iter().map(|p| p.dist_sq(c, nc)).collect()
    };

    while centroids.len() < k {
        let total: f64 = d2
            .iter()
            .zip(&chosen)
            .filter(|(_, &c)| !c)
            .map(|(d, _)| d)
            .sum();
        let pick = if total > 0.0 {
            let target = rng.random_range(0.0..total);
            let mut acc = 0.0;
            let mut pick = None;
            for j in 0..n {
                if chosen[j] || d2[j] == 0.0 {
                    continue;
                }
                acc += d2[j];
                pick = Some(j);
                if acc > target {
                    break;
                }
            }
            pick.expect("positive mass implies a candidate")
        } else {
            // Remaining points coincide with chosen centroids.
            let free: Vec<usize> = (0..n).filter(|&j| !chosen[j]).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen[pick] = true;
        let c = dense(pick);
        let nc: f64 = c.iter().map(|v| v * v).sum();
        for (j, p) in points.iter().enumerate() {
            d2[j] = d2[j].min(p.dist_sq(&c, nc));
        }
        centroids.push(c);
    }
    centroids
}

fn repair_empty(assignment: &mut [usize], dist: &mut [f64], k: usize) {
    let mut sizes = vec![0usize; k];
    for &c in assignment.iter() {
        sizes[c] += 1;
    }
    while let Some(empty) = sizes.iter().position(|&s| s == 0) {
        let donor = (0..assignment.len())
            .filter(|&j| sizes[assignment[j]] > 1)
            .max_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(b.cmp(&a)))
            .expect("k <= n leaves a cluster with spare members");
        sizes[assignment[donor]] -= 1;
        assignment[donor] = empty;
        sizes[empty] = 1;
        dist[donor] = 0.0;
    }
}

fn means(points: &[Point], assignment: &[usize], m: usize, k: usize) -> Vec<Vec<f64>> {
    let mut sums = vec![vec![0.0; m]; k];
    let mut counts = vec![0usize; k];
    for (p, &c) in points.iter().zip(assignment) {
        p.add_to(&mut sums[c]);
        counts[c] += 1;
    }
    for (s, &cnt) in sums.iter_mut().zip(&counts) {
        let inv = 1.0 / cnt as f64;
        s.iter_mut().for_each(|v| *v *= inv);
    }
    sums
}

/// Writes `doc_id,cluster` rows. `doc_ids` defaults to column indices.
pub fn write_clustering_csv(
    clustering: &Clustering,
    doc_ids: Option<&[String]>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::from("doc_id,cluster\n");
    for (j, c) in clustering.assignment.iter().enumerate() {
        match doc_ids.and_then(|ids| ids.get(j)) {
            Some(id) => out.push_str(&format!("{id},{c}\n")),
            None => out.push_str(&format!("{j},{c}\n")),
        }
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_points() -> SparseMatrix {
        // columns (0,0), (0,1), (10,10), (10,11)
        SparseMatrix::from_dense(2, 4, &[0.0, 0.0, 10.0, 10.0, 0.0, 1.0, 10.0, 11.0]).unwrap()
    }

    fn raw(k: usize, seed: u64) -> KMeansConfig {
        KMeansConfig {
            normalize: false,
            ..KMeansConfig::new(k, seed)
        }
    }

    /// Exhaustive optimum over all assignments of `points` to `k` labels.
    fn brute_force_inertia(points: &[[f64; 2]], k: usize) -> f64 {
        let n = points.len();
        let mut best = f64::INFINITY;
        for code in 0..k.pow(n as u32) {
            let labels: Vec<usize> = (0..n).map(|j| code / k.pow(j as u32) % k).collect();
            let mut total = 0.0;
            for c in 0..k {
                let members: Vec<&[f64; 2]> = points
                    .iter()
                    .zip(&labels)
                    .filter(|(_, &l)| l == c)
                    .map(|(p, _)| p)
                    .collect();
                if members.is_empty() {
                    continue;
                }
                let cnt = members.len() as f64;
                let mean = [
                    members.iter().map(|p| p[0]).sum::<f64>() / cnt,
                    members.iter().map(|p| p[1]).sum::<f64>() / cnt,
                ];
                total += members
                    .iter()
                    .map(|p| (p[0] - mean[0]).powi(2) + (p[1] - mean[1]).powi(2))
                    .sum::<f64>();
            }
            best = best.min(total);
        }
        best
    }

    #[test]
    fn two_obvious_groups() {
        let pts = [[0.0, 0.0], [0.0, 1.0], [10.0, 10.0], [10.0, 11.0]];
        let optimum = brute_force_inertia(&pts, 2);
        for seed in 0..10 {
            let c = kmeans(&four_points(), &raw(2, seed)).unwrap();
            assert_eq!(c.assignment[0], c.assignment[1]);
            assert_eq!(c.assignment[2], c.assignment[3]);
            assert_ne!(c.assignment[0], c.assignment[2]);
            assert!(
                (c.inertia - optimum).abs() < 1e-12,
                "{} vs {optimum}",
                c.inertia
            );
        }
    }

    #[test]
    fn singleton_clusters() {
        let c = kmeans(&four_points(), &raw(4, 3)).unwrap();
        assert_eq!(c.dims, vec![1; 4]);
        assert_eq!(c.inertia, 0.0);
    }

    #[test]
    fn duplicate_columns_with_k_equal_n() {
        let x = SparseMatrix::from_dense(2, 3, &[1.0, 1.0, 0.0, 2.0, 2.0, 1.0]).unwrap();
        let c = kmeans(&x, &KMeansConfig::new(3, 0)).unwrap();
        assert_eq!(c.dims, vec![1; 3]);
        assert_eq!(c.inertia, 0.0);
    }

    #[test]
    fn single_cluster_is_normalized_mean() {
        let x = four_points();
        let c = kmeans(&x, &KMeansConfig::new(1, 0)).unwrap();
        assert_eq!(c.dims, vec![4]);
        // Unit columns (0,0),(0,1),(r,r),(10,11)/|.|; inertia around their mean.
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let n4 = (221.0f64).sqrt();
        let pts = [[0.0, 0.0], [0.0, 1.0], [r, r], [10.0 / n4, 11.0 / n4]];
        let mean = [(r + 10.0 / n4) / 4.0, (1.0 + r + 11.0 / n4) / 4.0];
        let expect: f64 = pts
            .iter()
            .map(|p| (p[0] - mean[0]).powi(2) + (p[1] - mean[1]).powi(2))
            .sum();
        assert!((c.inertia - expect).abs() < 1e-12);
    }

    #[test]
    fn too_many_clusters() {
        assert!(kmeans(&four_points(), &raw(5, 0)).is_err());
        assert!(kmeans(&four_points(), &raw(0, 0)).is_err());
    }

    #[test]
    fn from_assignment_validation() {
        assert!(Clustering::from_assignment(2, vec![0, 0, 1]).is_ok());
        assert!(Clustering::from_assignment(2, vec![0, 0, 0]).is_err());
        assert!(Clustering::from_assignment(2, vec![0, 2]).is_err());
    }
}
