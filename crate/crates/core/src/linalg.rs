//! Thresholded numerical linear algebra over complex doubles.
//!
//! Kernels and ranks are decided by singular values: anything below
//! `delta * sigma_max` counts as zero. Tall matrices are first compressed by a
//! QR factorization (`ker A = ker R`, singular values unchanged).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub struct KernelResult {
    /// Orthonormal kernel basis, one column per kernel vector.
    pub basis: CMat,
    /// Orthonormal basis of the row space (complement of the kernel).
    pub row_space: CMat,
    pub rank: usize,
    /// Set when kept/dropped singular values crowd the threshold.
    pub gap_warning: Option<String>,
}

/// Constraint rows whose norm falls below this fraction of their natural
/// scale are residue of an approximate point, not signal; they are dropped so
/// normalization cannot amplify them. Matches the on-variety residual band.
const ROW_NOISE_FLOOR: f64 = 1e-6;

/// Drop numerically vacuous rows and normalize the rest; the kernel is
/// unchanged and conditioning improves.
pub fn clean_rows(rows: Vec<(CVec, f64)>) -> Vec<CVec> {
    let mut out = Vec::with_capacity(rows.len());
    for (r, scale) in rows {
        let n = r.norm();
        if n > ROW_NOISE_FLOOR * scale.max(1e-300) {
            out.push(r.map(|c| c / Complex64::new(n, 0.0)));
        }
    }
    out
}

fn vec_amax(v: &CVec) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn matrix_from_rows(ncols: usize, rows: &[CVec]) -> CMat {
    let mut m = CMat::zeros(rows.len(), ncols);
    for (i, r) in rows.iter().enumerate() {
        m.row_mut(i).copy_from(&r.transpose());
    }
    m
}

/// Numerical kernel of `a` with relative threshold `delta`.
///
/// Inputs are expected at unit row scale (see [`clean_rows`]); the threshold
/// is `delta * max(sigma_max, 1)` so a matrix that is zero up to roundoff
/// has full kernel instead of a roundoff-rank.
pub fn kernel(a: &CMat, delta: f64) -> KernelResult {
    let ncols = a.ncols();
    if ncols == 0 {
        return KernelResult {
            basis: CMat::zeros(0, 0),
            row_space: CMat::zeros(0, 0),
            rank: 0,
            gap_warning: None,
        };
    }
    if a.nrows() == 0 {
        return KernelResult {
            basis: CMat::identity(ncols, ncols),
            row_space: CMat::zeros(ncols, 0),
            rank: 0,
            gap_warning: None,
        };
    }

    // QR compression for tall inputs: ker(A) = ker(R) with identical sigma.
    let work: CMat = if a.nrows() > ncols + ncols / 2 {
        let qr = a.clone().qr();
        qr.r()
    } else {
        a.clone()
    };

    // pad to square so the SVD returns the full right singular basis
    let padded = if work.nrows() < ncols {
        let mut p = CMat::zeros(ncols, ncols);
        p.view_mut((0, 0), (work.nrows(), ncols)).copy_from(&work);
        p
    } else {
        work
    };

    let svd = padded.svd_unordered(false, true);
    let vt = svd.v_t.expect("svd requested v_t");
    let sigma = svd.singular_values;

    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
    let smax = sigma[order[0]];
    let tol = delta * smax.max(1.0);

    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for &i in &order {
        if smax > 0.0 && sigma[i] > tol {
            kept.push(i);
        } else {
            dropped.push(i);
        }
    }

    let gap_warning = match (kept.last(), dropped.first()) {
        (Some(&k), Some(&d)) if sigma[d] > tol / 10.0 && sigma[k] < tol * 10.0 => Some(format!(
            "singular values {:.3e} (kept) and {:.3e} (dropped) straddle threshold {:.3e}",
            sigma[k], sigma[d], tol
        )),
        _ => None,
    };

    let mut basis = CMat::zeros(ncols, dropped.len());
    for (c, &i) in dropped.iter().enumerate() {
        for r in 0..ncols {
            basis[(r, c)] = vt[(i, r)].conj();
        }
    }
    let mut row_space = CMat::zeros(ncols, kept.len());
    for (c, &i) in kept.iter().enumerate() {
        for r in 0..ncols {
            row_space[(r, c)] = vt[(i, r)].conj();
        }
    }

    KernelResult {
        basis,
        row_space,
        rank: kept.len(),
        gap_warning,
    }
}

/// Row-reduce the columns of `basis` (each column a vector over positions
/// `0..n`) against the position order given by `priority`: positions earlier
/// in `priority` are eliminated first, so each surviving vector gets a unique
/// leading position. Returns (reduced columns, leading positions).
///
/// Entries below `tol` (relative to the column max) are treated as zero.
pub fn rref_columns(basis: &CMat, priority: &[usize], tol: f64) -> (Vec<CVec>, Vec<usize>) {
    let n = basis.nrows();
    let mut cols: Vec<CVec> = (0..basis.ncols())
        .map(|j| basis.column(j).into_owned())
        .collect();
    let mut done: Vec<(usize, CVec)> = Vec::new(); // (pivot position, vector)

    for &pos in priority {
        debug_assert!(pos < n);
        // find the remaining column with the largest entry at `pos`
        let mut best: Option<(usize, f64)> = None;
        for (j, c) in cols.iter().enumerate() {
            let v = c[pos].norm();
            if v > best.map(|(_, bv)| bv).unwrap_or(0.0) {
                best = Some((j, v));
            }
        }
        let Some((j, v)) = best else { continue };
        let scale = vec_amax(&cols[j]);
        if v <= tol * scale.max(1.0) {
            continue;
        }
        let mut pivot = cols.swap_remove(j);
        let lead = pivot[pos];
        pivot /= lead;
        // eliminate from the others and from earlier pivots
        for c in cols.iter_mut() {
            let f = c[pos];
            if f.norm() > 0.0 {
                let upd = &pivot * f;
                *c -= upd;
            }
        }
        for (_, c) in done.iter_mut() {
            let f = c[pos];
            if f.norm() > 0.0 {
                let upd = &pivot * f;
                *c -= upd;
            }
        }
        done.push((pos, pivot));
        if cols.is_empty() {
            break;
        }
    }

    // zero out numerical dust so displayed bases are clean
    let (mut vecs, mut leads) = (Vec::new(), Vec::new());
    for (pos, mut c) in done {
        let scale = vec_amax(&c).max(1.0);
        for v in c.iter_mut() {
            if v.norm() < tol * scale {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        vecs.push(c);
        leads.push(pos);
    }
    (vecs, leads)
}

/// Least-squares / minimum-norm solve via SVD pseudo-inverse.
pub fn solve_min_norm(a: &CMat, b: &CVec, delta: f64) -> Option<CVec> {
    let svd = a.clone().svd_unordered(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if smax == 0.0 {
        return None;
    }
    svd.solve(b, delta * smax).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kernel_of_simple_matrix() {
        // rows: x + iy = 0 over (x, y, z) -> kernel dim 2
        let mut a = CMat::zeros(1, 3);
        a[(0, 0)] = c(1.0, 0.0);
        a[(0, 1)] = c(0.0, 1.0);
        let k = kernel(&a, 1e-8);
        assert_eq!(k.rank, 1);
        assert_eq!(k.basis.ncols(), 2);
        for j in 0..2 {
            let v = k.basis.column(j);
            let r = v[0] + c(0.0, 1.0) * v[1];
            assert!(r.norm() < 1e-12);
        }
    }

    #[test]
    fn kernel_of_wide_matrix_is_complete() {
        let mut a = CMat::zeros(1, 5);
        a[(0, 2)] = c(2.0, -1.0);
        let k = kernel(&a, 1e-8);
        assert_eq!(k.basis.ncols(), 4);
        assert_eq!(k.rank, 1);
    }

    #[test]
    fn qr_compression_matches_direct_svd() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut a = CMat::zeros(40, 8);
        // rank 5: product of 40x5 and 5x8
        let b = CMat::from_fn(40, 5, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let d = CMat::from_fn(5, 8, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        a.copy_from(&(&b * &d));
        let k = kernel(&a, 1e-8);
        assert_eq!(k.rank, 5);
        assert_eq!(k.basis.ncols(), 3);
        let prod = &a * &k.basis;
        assert!(prod.norm() < 1e-8 * a.norm());
    }

    #[test]
    fn rref_produces_distinct_leads() {
        // two columns spanning {e0 + e1, e0 - e1}: leads should be positions 0 and 1
        let mut m = CMat::zeros(3, 2);
        m[(0, 0)] = c(1.0, 0.0);
        m[(1, 0)] = c(1.0, 0.0);
        m[(0, 1)] = c(1.0, 0.0);
        m[(1, 1)] = c(-1.0, 0.0);
        let (vecs, leads) = rref_columns(&m, &[0, 1, 2], 1e-10);
        assert_eq!(leads, vec![0, 1]);
        assert_eq!(vecs.len(), 2);
        assert!((vecs[0][0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(vecs[0][1].norm() < 1e-12); // fully reduced
    }
}
