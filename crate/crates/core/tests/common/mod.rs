//! Shared test oracles, independent of the implementation paths they check.

use nalgebra::DMatrix;
use num_complex::Complex64;

use npd_core::dual::Point;
use npd_core::poly::Polynomial;
use npd_core::ring::{monomials_of_degree, ExpVec, Ring};

/// Brute-force truncated dual dimensions: the nullity of the full Macaulay
/// matrix with one row per generator multiple `x^b f_j`, `|b| <= k`, and one
/// column per monomial functional of order <= k. No completion loop, no
/// closedness rows.
pub fn brute_dual_dims(gens: &[Polynomial], y: &Point, k: usize, delta: f64) -> Vec<usize> {
    let ring = gens[0].ring.clone();
    let n = ring.nvars();
    let local: Vec<Polynomial> = gens.iter().map(|f| f.translate(&y.coords)).collect();
    let mut dims = Vec::with_capacity(k + 1);
    for kk in 0..=k {
        let mut cols: Vec<ExpVec> = Vec::new();
        for d in 0..=kk as u32 {
            cols.extend(monomials_of_degree(n, d));
        }
        let index: std::collections::HashMap<&ExpVec, usize> =
            cols.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut rows: Vec<Vec<Complex64>> = Vec::new();
        for f in &local {
            for d in 0..=kk as u32 {
                for beta in monomials_of_degree(n, d) {
                    let shifted = f.mul_monomial(&beta, Complex64::new(1.0, 0.0));
                    let mut row = vec![Complex64::new(0.0, 0.0); cols.len()];
                    for (e, c) in &shifted.terms {
                        if let Some(&i) = index.get(e) {
                            row[i] = *c;
                        }
                    }
                    let norm: f64 = row.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                    let scale = shifted.coeff_norm();
                    if norm > 1e-6 * scale.max(1.0) {
                        for c in row.iter_mut() {
                            *c /= Complex64::new(norm, 0.0);
                        }
                        rows.push(row);
                    }
                }
            }
        }
        if rows.is_empty() {
            dims.push(cols.len());
            continue;
        }
        let m = DMatrix::from_fn(rows.len(), cols.len(), |i, j| rows[i][j]);
        let svd = m.svd_unordered(false, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
        let tol = delta * smax.max(1.0);
        let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
        dims.push(cols.len() - rank);
    }
    dims
}

/// Path to a shipped problem file.
pub fn problem_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../problems")
        .join(name)
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random polynomial without constant term (so the origin stays on the
/// variety), degree <= `maxdeg`.
pub fn random_vanishing_poly(
    ring: &Ring,
    rng: &mut impl rand::Rng,
    maxdeg: u32,
    terms: usize,
) -> Polynomial {
    let n = ring.nvars();
    let mut f = Polynomial::zero(ring);
    for _ in 0..terms {
        let d = rng.gen_range(1..=maxdeg);
        let options = monomials_of_degree(n, d);
        let e = options[rng.gen_range(0..options.len())].clone();
        f.add_term(e, c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    f
}
