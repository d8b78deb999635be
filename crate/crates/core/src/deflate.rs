//! Deflation systems: adjoin the action of a generic differential operator
//! of bounded order with indeterminate coefficients.
//!
//! For order d the extended ring gains one variable `a_b` per exponent vector
//! `|b| <= d`, and the system gains `q(x^a f_i)` for all `|a| <= d - 1`, where
//! `q = sum a_b d^b`. Over a point of the variety the a-linear solution space
//! of the extended system is isomorphic to the truncated dual space there.

use num_complex::Complex64;

use crate::config::{NumericalConfig, ON_VARIETY_TOL};
use crate::dual::Point;
use crate::error::{Error, Result};
use crate::linalg::{self, CVec};
use crate::poly::Polynomial;
use crate::ring::{monomials_of_degree, ExpVec, Ring};

#[derive(Debug, Clone)]
pub struct DeflationSystem {
    /// Extended ring: the original variables followed by the a-variables.
    pub ring: Ring,
    pub generators: Vec<Polynomial>,
    /// Original variable count.
    pub nx: usize,
    /// Operator coefficient index: the exponent vector each a-variable tags.
    pub a_index: Vec<ExpVec>,
    pub order: usize,
}

/// a-variables ordered by degree, then lexicographically ascending.
fn operator_index(n: usize, d: usize) -> Vec<ExpVec> {
    let mut out = Vec::new();
    for deg in 0..=d as u32 {
        let mut layer = monomials_of_degree(n, deg);
        layer.sort_by(|a, b| a.0.cmp(&b.0));
        out.extend(layer);
    }
    out
}

fn a_name(beta: &ExpVec) -> String {
    let mut s = String::from("a");
    for v in &beta.0 {
        s.push('_');
        s.push_str(&v.to_string());
    }
    s
}

pub fn deflate(gens: &[Polynomial], d: usize) -> Result<DeflationSystem> {
    if d < 1 {
        return Err(Error::InvalidArgument(
            "deflation order must be at least 1".into(),
        ));
    }
    let ring = gens
        .first()
        .map(|f| f.ring.clone())
        .ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?;
    let nx = ring.nvars();
    let a_index = operator_index(nx, d);

    let mut names = ring.names.clone();
    for beta in &a_index {
        names.push(a_name(beta));
    }
    let ext = crate::ring::ring_from_names(names);
    let nall = ext.nvars();

    let lift = |f: &Polynomial| -> Polynomial {
        let mut out = Polynomial::zero(&ext);
        for (e, c) in &f.terms {
            let mut v = e.0.clone();
            v.resize(nall, 0);
            out.add_term(ExpVec(v), *c);
        }
        out
    };

    let mut generators: Vec<Polynomial> = gens.iter().map(&lift).collect();
    for deg in 0..d as u32 {
        for alpha in monomials_of_degree(nx, deg) {
            for f in gens {
                let shifted = f.mul_monomial(&alpha, Complex64::new(1.0, 0.0));
                let mut g = Polynomial::zero(&ext);
                for (bi, beta) in a_index.iter().enumerate() {
                    let part = shifted.diff_normalized(beta);
                    for (e, c) in &part.terms {
                        let mut v = e.0.clone();
                        v.resize(nall, 0);
                        v[nx + bi] = 1;
                        g.add_term(ExpVec(v), *c);
                    }
                }
                generators.push(g);
            }
        }
    }

    Ok(DeflationSystem {
        ring: ext,
        generators,
        nx,
        a_index,
        order: d,
    })
}

/// Dimension of the a-linear solution space of the deflation generators over
/// the point `x`; equals `dim D_x^d[<F>]`.
pub fn fiber_dual_dim(
    gens: &[Polynomial],
    x: &Point,
    d: usize,
    cfg: &NumericalConfig,
) -> Result<usize> {
    if d < 1 {
        return Err(Error::InvalidArgument(
            "deflation order must be at least 1".into(),
        ));
    }
    let ring = gens
        .first()
        .map(|f| f.ring.clone())
        .ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?;
    for f in gens {
        let r = f.evaluate(&x.coords).norm();
        let tol = ON_VARIETY_TOL * (1.0 + f.coeff_norm());
        if r > tol {
            return Err(Error::NotOnVariety { residual: r, tol });
        }
    }
    let nx = ring.nvars();
    let a_index = operator_index(nx, d);
    let na = a_index.len();

    let mut rows: Vec<(CVec, f64)> = Vec::new();
    for deg in 0..d as u32 {
        for alpha in monomials_of_degree(nx, deg) {
            for f in gens {
                let local = f
                    .mul_monomial(&alpha, Complex64::new(1.0, 0.0))
                    .translate(&x.coords);
                let mut row = CVec::zeros(na);
                for (bi, beta) in a_index.iter().enumerate() {
                    row[bi] = local.coeff(beta);
                }
                rows.push((row, local.coeff_norm()));
            }
        }
    }
    let cleaned = linalg::clean_rows(rows);
    let mat = linalg::matrix_from_rows(na, &cleaned);
    let res = linalg::kernel(&mat, cfg.delta);
    Ok(na - res.rank)
}
