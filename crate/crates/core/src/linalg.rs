//! Dense complex matrices and the Jacobi-type factorizations built on them.
//!
//! Everything here targets small dense problems (dimensions up to a few
//! thousand) where accuracy matters more than speed: one-sided Jacobi for the
//! SVD, two-sided Jacobi for hermitian eigendecompositions. Both stop when
//! every off-diagonal ratio falls below [`JACOBI_OFFDIAG_TOL`] and fail with
//! `NoConvergence` after [`JACOBI_MAX_SWEEPS`] sweeps.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::tolerances::{JACOBI_MAX_SWEEPS, JACOBI_OFFDIAG_TOL};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        CMatrix { rows: r, cols: c, data }
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[Complex64]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scaled(&self, s: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let lhs_row = k * other.cols;
                let out_row = i * other.cols;
                for j in 0..other.cols {
                    out.data[out_row + j] += a * other.data[lhs_row + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        let mut out = vec![ZERO; self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = ZERO;
            for (a, x) in row.iter().zip(v) {
                acc += a * x;
            }
            out[i] = acc;
        }
        out
    }

    /// Kronecker product, row-major composite indexing.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// The diagonal, if every off-diagonal entry is exactly zero.
    pub fn diagonal_entries(&self) -> Option<Vec<Complex64>> {
        if self.rows != self.cols {
            return None;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && self.data[i * self.cols + j] != ZERO {
                    return None;
                }
            }
        }
        Some((0..self.rows).map(|i| self[(i, i)]).collect())
    }

    /// ‖A†A − I‖_F
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint().mul(self).sub(&CMatrix::identity(self.cols)).frobenius_norm()
    }

    /// ‖A − A†‖_F
    pub fn hermiticity_residual(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// ‖AB − BA‖_F
    pub fn commutator_norm(&self, other: &CMatrix) -> f64 {
        self.mul(other).sub(&other.mul(self)).frobenius_norm()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

// ---------------------------------------------------------------------------
// vector helpers
// ---------------------------------------------------------------------------

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// ⟨a|b⟩ with the left argument conjugated.
pub fn vec_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_normalize(v: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = vec_norm(v);
    if n < 1e-300 {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|z| z / n).collect())
}

pub fn vec_sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// ‖a − e^{iθ} b‖ minimized over the global phase θ.
pub fn phase_invariant_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let ip = vec_inner(b, a);
    let phase = if ip.norm() < 1e-300 {
        ONE
    } else {
        ip / ip.norm()
    };
    let diff: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - phase * y).norm_sqr())
        .sum();
    diff.sqrt()
}

/// Rotate `v` so its largest-magnitude entry is real and positive; returns the
/// removed phase alongside the rotated vector.
pub fn fix_phase(v: &[Complex64]) -> (Vec<Complex64>, Complex64) {
    let mut best = 0usize;
    let mut best_mag = 0.0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > best_mag {
            best_mag = z.norm();
            best = i;
        }
    }
    if best_mag < 1e-300 {
        return (v.to_vec(), ONE);
    }
    let phase = v[best] / v[best].norm();
    (v.iter().map(|z| z / phase).collect(), phase)
}

// ---------------------------------------------------------------------------
// one-sided Jacobi SVD
// ---------------------------------------------------------------------------

/// Result of `svd`: `a = u · diag(singular_values) · vt`, singular values
/// sorted descending, `u` has orthonormal columns, `vt` is unitary.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub vt: CMatrix,
}

/// Complex one-sided Jacobi SVD.
pub fn svd(a: &CMatrix) -> Result<Svd> {
    if a.rows < a.cols {
        // Orthogonalize the short side: A = (A†)† → swap factors.
        let s = svd(&a.adjoint())?;
        return Ok(Svd {
            u: s.vt.adjoint(),
            singular_values: s.singular_values,
            vt: s.u.adjoint(),
        });
    }
    let m = a.rows;
    let n = a.cols;
    let mut w = a.clone();
    let mut v = CMatrix::identity(n);

    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        // Columns this far below the dominant one carry singular values under
        // the convergence threshold; rotating them only chases roundoff.
        let max_col_sq = (0..n)
            .map(|j| (0..m).map(|i| w[(i, j)].norm_sqr()).sum::<f64>())
            .fold(0.0f64, f64::max);
        let negligible = max_col_sq * JACOBI_OFFDIAG_TOL * JACOBI_OFFDIAG_TOL;
        let mut max_ratio = 0.0f64;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = ZERO;
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    app += wp.norm_sqr();
                    aqq += wq.norm_sqr();
                    apq += wp.conj() * wq;
                }
                let denom = (app * aqq).sqrt();
                if denom <= 0.0 || app <= negligible || aqq <= negligible {
                    continue;
                }
                let ratio = apq.norm() / denom;
                max_ratio = max_ratio.max(ratio);
                if ratio <= JACOBI_OFFDIAG_TOL {
                    continue;
                }
                // Unitary 2×2 that diagonalizes the column Gram block
                // [[app, apq], [conj(apq), aqq]].
                let abs_apq = apq.norm();
                let phase = apq / abs_apq; // e^{iφ}
                let zeta = (app - aqq) / (2.0 * abs_apq);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let pc = phase.conj();
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)] * pc;
                    w[(i, p)] = c * wp + s * wq;
                    w[(i, q)] = -s * wp + c * wq;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)] * pc;
                    v[(i, p)] = c * vp + s * vq;
                    v[(i, q)] = -s * vp + c * vq;
                }
            }
        }
        if max_ratio <= JACOBI_OFFDIAG_TOL || n < 2 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
    }

    let mut sigma: Vec<f64> = (0..n).map(|j| vec_norm(&w.col(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
    let mut u = CMatrix::zeros(m, n);
    let mut vt = CMatrix::zeros(n, n);
    let sigma_max = order.first().map(|&j| sigma[j]).unwrap_or(0.0);
    let tiny = sigma_max * JACOBI_OFFDIAG_TOL.max(f64::EPSILON * m as f64);
    let mut sorted_sigma = Vec::with_capacity(n);
    for (slot, &j) in order.iter().enumerate() {
        let col = w.col(j);
        if sigma[j] > tiny && sigma[j] > 0.0 {
            let unit: Vec<Complex64> = col.iter().map(|z| z / sigma[j]).collect();
            u.set_col(slot, &unit);
        }
        sorted_sigma.push(sigma[j]);
        let vcol = v.col(j);
        for i in 0..n {
            vt[(slot, i)] = vcol[i].conj();
        }
    }
    sigma = sorted_sigma;
    // Null columns of u (rank-deficient input) get an orthonormal completion.
    complete_orthonormal_columns(&mut u, &sigma, tiny);
    Ok(Svd {
        u,
        singular_values: sigma,
        vt,
    })
}

fn complete_orthonormal_columns(u: &mut CMatrix, sigma: &[f64], tiny: f64) {
    let m = u.rows();
    let n = u.cols();
    let needs: Vec<usize> = (0..n).filter(|&j| sigma[j] <= tiny || sigma[j] == 0.0).collect();
    if needs.is_empty() {
        return;
    }
    let mut existing: Vec<Vec<Complex64>> = (0..n)
        .filter(|&j| !(sigma[j] <= tiny || sigma[j] == 0.0))
        .map(|j| u.col(j))
        .collect();
    let mut cursor = 0usize;
    for j in needs {
        loop {
            assert!(cursor < m, "ran out of basis vectors during completion");
            let mut cand = vec![ZERO; m];
            cand[cursor] = ONE;
            cursor += 1;
            for e in &existing {
                let ip = vec_inner(e, &cand);
                for (c, b) in cand.iter_mut().zip(e) {
                    *c -= ip * b;
                }
            }
            let norm = vec_norm(&cand);
            if norm > 1e-6 {
                let unit: Vec<Complex64> = cand.iter().map(|z| z / norm).collect();
                u.set_col(j, &unit);
                existing.push(unit);
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// hermitian eigendecomposition (two-sided Jacobi)
// ---------------------------------------------------------------------------

/// Result of `eig_hermitian`: `h = vectors · diag(values) · vectors†`,
/// eigenvalues sorted descending, eigenvectors in the matching columns.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

pub fn eig_hermitian(h: &CMatrix) -> Result<HermitianEig> {
    assert_eq!(h.rows(), h.cols(), "eig_hermitian needs a square matrix");
    let n = h.rows();
    let mut a = h.clone();
    let mut q = CMatrix::identity(n);
    let scale = h.frobenius_norm().max(1e-300);

    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut max_off = 0.0f64;
        for p in 0..n.saturating_sub(1) {
            for qq in (p + 1)..n {
                let apq = a[(p, qq)];
                let abs_apq = apq.norm();
                max_off = max_off.max(abs_apq / scale);
                if abs_apq / scale <= JACOBI_OFFDIAG_TOL {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq_d = a[(qq, qq)].re;
                let phase = apq / abs_apq;
                let zeta = (app - aqq_d) / (2.0 * abs_apq);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let pc = phase.conj();
                // A ← J† A J with J acting on columns (p, qq).
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, qq)] * pc;
                    a[(i, p)] = c * aip + s * aiq;
                    a[(i, qq)] = -s * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(qq, j)] * phase;
                    a[(p, j)] = c * apj + s * aqj;
                    a[(qq, j)] = -s * apj + c * aqj;
                }
                for i in 0..n {
                    let qip = q[(i, p)];
                    let qiq = q[(i, qq)] * pc;
                    q[(i, p)] = c * qip + s * qiq;
                    q[(i, qq)] = -s * qip + c * qiq;
                }
            }
        }
        if max_off <= JACOBI_OFFDIAG_TOL || n < 2 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
    }

    let mut values: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
    let mut vectors = CMatrix::zeros(n, n);
    let mut sorted = Vec::with_capacity(n);
    for (slot, &j) in order.iter().enumerate() {
        sorted.push(values[j]);
        let col = q.col(j);
        vectors.set_col(slot, &col);
    }
    values = sorted;
    Ok(HermitianEig { values, vectors })
}

// ---------------------------------------------------------------------------
// seeded random draws used by perturbation searches and tests
// ---------------------------------------------------------------------------

/// One standard normal via Box–Muller.
fn gauss(rng: &mut impl Rng) -> f64 {
    loop {
        let u: f64 = rng.gen::<f64>();
        if u > 1e-300 {
            let v: f64 = rng.gen::<f64>();
            return (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos();
        }
    }
}

pub fn random_complex_vector(dim: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::new(gauss(rng), gauss(rng)))
        .collect()
}

pub fn random_unit_vector(dim: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    loop {
        let v = random_complex_vector(dim, rng);
        if let Ok(u) = vec_normalize(&v) {
            return u;
        }
    }
}

/// Haar-distributed unitary: Ginibre draw + modified Gram–Schmidt.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    loop {
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
        let mut ok = true;
        for _ in 0..dim {
            let mut v = random_complex_vector(dim, rng);
            for c in &cols {
                let ip = vec_inner(c, &v);
                for (x, y) in v.iter_mut().zip(c) {
                    *x -= ip * y;
                }
            }
            let norm = vec_norm(&v);
            if norm < 1e-8 {
                ok = false;
                break;
            }
            cols.push(v.iter().map(|z| z / norm).collect());
        }
        if ok {
            let mut m = CMatrix::zeros(dim, dim);
            for (j, c) in cols.iter().enumerate() {
                m.set_col(j, c);
            }
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn svd_of_diagonal() {
        let a = CMatrix::diagonal(&[c(3.0, 0.0), c(1.0, 0.0)]);
        let s = svd(&a).unwrap();
        assert!((s.singular_values[0] - 3.0).abs() < 1e-12);
        assert!((s.singular_values[1] - 1.0).abs() < 1e-12);
        // U and V equal identity up to per-column phases.
        for j in 0..2 {
            assert!(s.u.col(j)[j].norm() > 1.0 - 1e-12);
            assert!(s.vt.row(j)[j].norm() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn svd_reconstructs_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(m, n) in &[(8, 8), (5, 9), (9, 4), (1, 6), (7, 1)] {
            let a = CMatrix::from_fn(m, n, |_, _| c(gauss(&mut rng), gauss(&mut rng)));
            let s = svd(&a).unwrap();
            let sigma = CMatrix::from_fn(s.u.cols(), s.vt.rows(), |i, j| {
                if i == j {
                    c(s.singular_values[i], 0.0)
                } else {
                    ZERO
                }
            });
            let rebuilt = s.u.mul(&sigma).mul(&s.vt);
            let resid = rebuilt.sub(&a).frobenius_norm();
            assert!(
                resid <= 1e-10 * a.frobenius_norm().max(1.0),
                "residual {resid} for {m}x{n}"
            );
            // u has orthonormal columns, vt orthonormal rows.
            assert!(s.u.unitarity_residual() < 1e-10);
            assert!(s.vt.adjoint().unitarity_residual() < 1e-10);
            for w in s.singular_values.windows(2) {
                assert!(w[0] >= w[1] - 1e-14);
            }
        }
    }

    #[test]
    fn svd_matches_adjoint_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = CMatrix::from_fn(6, 3, |_, _| c(gauss(&mut rng), gauss(&mut rng)));
        let s1 = svd(&a).unwrap();
        let s2 = svd(&a.adjoint()).unwrap();
        for (x, y) in s1.singular_values.iter().zip(&s2.singular_values) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn svd_rank_deficient_still_orthonormal() {
        // Rank-1 outer product: second singular value is 0, U must still be
        // column-orthonormal after completion.
        let u = [c(0.6, 0.0), c(0.8, 0.0)];
        let a = CMatrix::from_fn(2, 2, |i, j| u[i] * u[j]);
        let s = svd(&a).unwrap();
        assert!(s.singular_values[1].abs() < 1e-12);
        assert!(s.u.unitarity_residual() < 1e-10);
    }

    #[test]
    fn eig_hermitian_known_2x2() {
        // Pauli X: eigenvalues ±1, eigenvectors (1, ±1)/√2.
        let x = CMatrix::from_rows(vec![
            vec![ZERO, ONE],
            vec![ONE, ZERO],
        ]);
        let e = eig_hermitian(&x).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-12);
        assert!((e.values[1] + 1.0).abs() < 1e-12);
        let v0 = e.vectors.col(0);
        assert!((v0[0].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn eig_hermitian_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = CMatrix::from_fn(7, 7, |_, _| c(gauss(&mut rng), gauss(&mut rng)));
        let h = g.add(&g.adjoint()).scaled(c(0.5, 0.0));
        let e = eig_hermitian(&h).unwrap();
        let lam = CMatrix::diagonal(
            &e.values.iter().map(|&v| c(v, 0.0)).collect::<Vec<_>>(),
        );
        let rebuilt = e.vectors.mul(&lam).mul(&e.vectors.adjoint());
        assert!(rebuilt.sub(&h).frobenius_norm() < 1e-10 * h.frobenius_norm().max(1.0));
        assert!(e.vectors.unitarity_residual() < 1e-10);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for dim in [2, 3, 5] {
            let u = random_unitary(dim, &mut rng);
            assert!(u.unitarity_residual() < 1e-12);
        }
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let v = vec![c(0.6, 0.0), c(0.0, 0.8)];
        let w: Vec<Complex64> = v.iter().map(|z| z * c(0.0, 1.0)).collect();
        assert!(phase_invariant_distance(&v, &w) < 1e-14);
    }
}
