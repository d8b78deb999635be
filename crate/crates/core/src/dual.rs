//! Truncated Macaulay dual spaces.
//!
//! `D_y^k[I]` is the space of differential functionals of order <= k at `y`
//! annihilating the ideal. Functionals are combinations of normalized partials
//! `d^a = (1/a!) d^|a|/dx^a`, so the module action of a variable is the clean
//! exponent shift `d^a -> d^(a-e_i)`.
//!
//! Two computation paths:
//! * [`DualEngine`]: the degree-by-degree completion loop for arbitrary
//!   ideals — candidates at step k are constrained by generator vanishing and
//!   by every derivative landing in the previous truncation.
//! * [`GradedDualEngine`]: for homogeneous ideals the dual is graded, so each
//!   degree layer is an independent kernel; this is what staircase and colon
//!   computations run on.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::config::{NumericalConfig, ON_VARIETY_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::poly::Polynomial;
use crate::ring::{monomials_of_degree, ExpVec, MonomialTable, Ring};

/// An approximate point with an error bound.
#[derive(Debug, Clone)]
pub struct Point {
    pub coords: Vec<Complex64>,
    pub err: f64,
}

impl Point {
    pub fn new(coords: Vec<Complex64>) -> Self {
        Point { coords, err: 0.0 }
    }

    pub fn origin(n: usize) -> Self {
        Point::new(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|c| c.norm() == 0.0)
    }
}

/// A finite combination of normalized partial derivatives at a base point.
#[derive(Debug, Clone)]
pub struct DualFunctional {
    pub ring: Ring,
    pub basepoint: Point,
    pub terms: BTreeMap<ExpVec, Complex64>,
}

impl DualFunctional {
    pub fn zero(ring: &Ring, basepoint: Point) -> Self {
        DualFunctional {
            ring: ring.clone(),
            basepoint,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(ring: &Ring, basepoint: Point, alpha: ExpVec) -> Self {
        let mut q = DualFunctional::zero(ring, basepoint);
        q.terms.insert(alpha, Complex64::new(1.0, 0.0));
        q
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `ord q`: the highest derivative order appearing.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|e| e.degree()).max().unwrap_or(0)
    }

    /// Initial term under the dual order (requires a nonzero functional).
    pub fn initial_exponent(&self) -> Result<ExpVec> {
        let mut best: Option<&ExpVec> = None;
        for e in self.terms.keys() {
            best = Some(match best {
                None => e,
                Some(m) => {
                    if self.ring.cmp_dual(e, m) == std::cmp::Ordering::Greater {
                        e
                    } else {
                        m
                    }
                }
            });
        }
        best.cloned().ok_or(Error::ZeroPolynomial)
    }

    pub fn coeff(&self, e: &ExpVec) -> Complex64 {
        self.terms
            .get(e)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }
}

/// Evaluate `q(f)`: pair the functional against the Taylor coefficients of
/// `f` at the base point.
pub fn apply(q: &DualFunctional, f: &Polynomial) -> Result<Complex64> {
    if f.ring.nvars() != q.ring.nvars() {
        return Err(Error::LengthMismatch(f.ring.nvars(), q.ring.nvars()));
    }
    let local = if q.basepoint.is_origin() {
        f.clone()
    } else {
        f.translate(&q.basepoint.coords)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for (alpha, c) in &q.terms {
        acc += c * local.coeff(alpha);
    }
    Ok(acc)
}

/// The action of `x_i` on a functional: `d^a -> d^(a - e_i)`, annihilating
/// terms with `a_i = 0`. Satisfies `(x_i . q)(f) = q(x_i f)`.
pub fn differentiate(q: &DualFunctional, i: usize) -> DualFunctional {
    let mut out = DualFunctional::zero(&q.ring, q.basepoint.clone());
    for (e, c) in &q.terms {
        if e.0[i] > 0 {
            let mut e2 = e.clone();
            e2.0[i] -= 1;
            out.terms.insert(e2, *c);
        }
    }
    out
}

/// The action of a polynomial `g` on a functional: `(g . q)(f) = q(g f)`.
pub fn poly_action(g: &Polynomial, q: &DualFunctional) -> DualFunctional {
    let mut out = DualFunctional::zero(&q.ring, q.basepoint.clone());
    for (beta, gc) in &g.terms {
        for (alpha, qc) in &q.terms {
            if let Some(rest) = alpha.checked_sub(beta) {
                let entry = out.terms.entry(rest).or_insert(Complex64::new(0.0, 0.0));
                *entry += gc * qc;
            }
        }
    }
    out.terms.retain(|_, c| *c != Complex64::new(0.0, 0.0));
    out
}

/// A computed truncated dual basis.
#[derive(Debug, Clone)]
pub struct DualBasis {
    pub ring: Ring,
    pub basepoint: Point,
    pub functionals: Vec<DualFunctional>,
    /// Truncation order k.
    pub order: usize,
    pub reduced: bool,
    /// Cumulative dimensions `dim D^0, ..., dim D^k`.
    pub dims: Vec<usize>,
    /// Numerical health notes (threshold-gap warnings).
    pub warnings: Vec<String>,
}

impl DualBasis {
    pub fn dim(&self) -> usize {
        self.functionals.len()
    }

    pub fn initial_exponents(&self) -> Result<Vec<ExpVec>> {
        self.functionals
            .iter()
            .map(|q| q.initial_exponent())
            .collect()
    }
}

/// The completion loop for a general (not necessarily homogeneous) ideal,
/// localized at the origin. Layers are cached so truncation orders can grow
/// incrementally.
pub struct DualEngine {
    pub ring: Ring,
    gens: Vec<Polynomial>,
    delta: f64,
    table: MonomialTable,
    kernels: Vec<CMat>,
    rowspaces: Vec<CMat>,
    pub warnings: Vec<String>,
}

impl DualEngine {
    /// `gens` must already be local at the origin (translate first).
    pub fn at_origin(ring: &Ring, gens: Vec<Polynomial>, delta: f64) -> Self {
        DualEngine {
            ring: ring.clone(),
            gens,
            delta,
            table: MonomialTable::new(ring, 4),
            kernels: Vec::new(),
            rowspaces: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn extend_to(&mut self, k: usize) {
        while self.kernels.len() <= k {
            self.step();
        }
    }

    pub fn dim(&mut self, k: usize) -> usize {
        self.extend_to(k);
        self.kernels[k].ncols()
    }

    pub fn dims_up_to(&mut self, k: usize) -> Vec<usize> {
        self.extend_to(k);
        (0..=k).map(|j| self.kernels[j].ncols()).collect()
    }

    pub fn kernel_matrix(&mut self, k: usize) -> &CMat {
        self.extend_to(k);
        &self.kernels[k]
    }

    fn step(&mut self) {
        let k = self.kernels.len();
        if self.table.offsets.len() <= k + 1 {
            self.table = MonomialTable::new(&self.ring, (k + 4) as u32);
        }
        let ncols = self.table.count_up_to(k as u32);
        let mut rows: Vec<(CVec, f64)> = Vec::new();

        // generator vanishing: q(f) = sum_a c_a f_a over |a| <= k
        for f in &self.gens {
            let mut row = CVec::zeros(ncols);
            for (e, c) in &f.terms {
                if let Some(idx) = self.table.position(e) {
                    if idx < ncols {
                        row[idx] = *c;
                    }
                }
            }
            rows.push((row, f.coeff_norm()));
        }

        // closedness: x_i . q must lie in the span of the previous truncation,
        // i.e. be orthogonal to the previous constraint row space
        if k > 0 {
            let prev_cols = self.table.count_up_to(k as u32 - 1);
            let w = &self.rowspaces[k - 1];
            for i in 0..self.ring.nvars() {
                for wc in 0..w.ncols() {
                    let mut row = CVec::zeros(ncols);
                    for (idx, e) in self.table.exps[..ncols].iter().enumerate() {
                        if e.0[i] > 0 {
                            let mut shifted = e.clone();
                            shifted.0[i] -= 1;
                            let pos = self.table.position(&shifted).unwrap();
                            debug_assert!(pos < prev_cols);
                            row[idx] = w[(pos, wc)].conj();
                        }
                    }
                    rows.push((row, 1.0));
                }
            }
        }

        let cleaned = linalg::clean_rows(rows);
        let mat = linalg::matrix_from_rows(ncols, &cleaned);
        let res = linalg::kernel(&mat, self.delta);
        if let Some(w) = res.gap_warning {
            self.warnings.push(format!("order {}: {}", k, w));
        }
        self.kernels.push(res.basis);
        self.rowspaces.push(res.row_space);
    }

    /// Reduced basis of `D^k` as functionals, ordered with `d^0` first.
    pub fn reduced_basis(&mut self, k: usize, basepoint: &Point) -> Result<DualBasis> {
        self.extend_to(k);
        let ncols = self.table.count_up_to(k as u32);
        let kernel = &self.kernels[k];
        // dual-descending priority = reversed table order
        let priority: Vec<usize> = (0..ncols).rev().collect();
        let (vecs, _) = linalg::rref_columns(kernel, &priority, self.delta);
        if vecs.len() != kernel.ncols() {
            return Err(Error::DependentBasis {
                rank: vecs.len(),
                count: kernel.ncols(),
            });
        }
        let mut functionals: Vec<DualFunctional> = vecs
            .into_iter()
            .map(|v| self.vector_to_functional(&v, basepoint))
            .collect();
        functionals.reverse();
        Ok(DualBasis {
            ring: self.ring.clone(),
            basepoint: basepoint.clone(),
            functionals,
            order: k,
            reduced: true,
            dims: (0..=k).map(|j| self.kernels[j].ncols()).collect(),
            warnings: self.warnings.clone(),
        })
    }

    fn vector_to_functional(&self, v: &CVec, basepoint: &Point) -> DualFunctional {
        let mut q = DualFunctional::zero(&self.ring, basepoint.clone());
        for (idx, c) in v.iter().enumerate() {
            if c.norm() > 0.0 {
                q.terms.insert(self.table.exps[idx].clone(), *c);
            }
        }
        q
    }
}

/// Compute a reduced basis of `D_y^k[F]`.
///
/// Checks that `y` lies on the variety: `|f(y)| < tol * (1 + ||f||)` for every
/// generator. Empty generator lists are allowed (the zero ideal).
pub fn truncated_dual(
    gens: &[Polynomial],
    y: &Point,
    k: usize,
    cfg: &NumericalConfig,
) -> Result<DualBasis> {
    let ring = gens
        .first()
        .map(|f| f.ring.clone())
        .ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?;
    truncated_dual_in_ring(&ring, gens, y, k, cfg)
}

/// Same as [`truncated_dual`] but usable with an empty generator list.
pub fn truncated_dual_in_ring(
    ring: &Ring,
    gens: &[Polynomial],
    y: &Point,
    k: usize,
    cfg: &NumericalConfig,
) -> Result<DualBasis> {
    for f in gens {
        let r = f.evaluate(&y.coords).norm();
        let tol = ON_VARIETY_TOL * (1.0 + f.coeff_norm());
        if r > tol {
            return Err(Error::NotOnVariety { residual: r, tol });
        }
    }
    let local: Vec<Polynomial> = if y.is_origin() {
        gens.to_vec()
    } else {
        gens.iter().map(|f| f.translate(&y.coords)).collect()
    };
    let mut engine = DualEngine::at_origin(ring, local, cfg.delta);
    engine.reduced_basis(k, y)
}

/// Gaussian-eliminate a dual basis into a reduced one (distinct initial
/// terms, unit leading coefficients). Errors if the input spans fewer
/// dimensions than it has elements.
pub fn reduce_basis(basis: &DualBasis, cfg: &NumericalConfig) -> Result<DualBasis> {
    let reduced = reduce_functionals(&basis.ring, &basis.basepoint, &basis.functionals, cfg.delta)?;
    if reduced.len() != basis.functionals.len() {
        return Err(Error::DependentBasis {
            rank: reduced.len(),
            count: basis.functionals.len(),
        });
    }
    Ok(DualBasis {
        functionals: reduced,
        reduced: true,
        ..basis.clone()
    })
}

/// Reduce a spanning set of functionals; dependent elements are dropped.
pub fn reduce_functionals(
    ring: &Ring,
    basepoint: &Point,
    funcs: &[DualFunctional],
    delta: f64,
) -> Result<Vec<DualFunctional>> {
    if funcs.is_empty() {
        return Ok(Vec::new());
    }
    let max_ord = funcs.iter().map(|q| q.order()).max().unwrap();
    let table = MonomialTable::new(ring, max_ord);
    let ncols = table.len();
    let mut m = CMat::zeros(ncols, funcs.len());
    for (j, q) in funcs.iter().enumerate() {
        for (e, c) in &q.terms {
            m[(table.position(e).unwrap(), j)] = *c;
        }
    }
    // orthonormalize the span first so RREF rank decisions are robust
    let span = linalg::kernel(&m.adjoint(), delta).row_space;
    let priority: Vec<usize> = (0..ncols).rev().collect();
    let (vecs, _) = linalg::rref_columns(&span, &priority, delta);
    let mut out: Vec<DualFunctional> = vecs
        .into_iter()
        .map(|v| {
            let mut q = DualFunctional::zero(ring, basepoint.clone());
            for (idx, c) in v.iter().enumerate() {
                if c.norm() > 0.0 {
                    q.terms.insert(table.exps[idx].clone(), *c);
                }
            }
            q
        })
        .collect();
    out.reverse();
    Ok(out)
}

/// Per-degree dual layers of a homogeneous ideal. The dual space of a
/// homogeneous ideal is graded, so each degree is an independent kernel
/// computation and staircase data can be read off layer by layer.
pub struct GradedDualEngine {
    pub ring: Ring,
    gens: Vec<Polynomial>,
    delta: f64,
    layers: Vec<GradedLayer>,
    pub warnings: Vec<String>,
}

pub struct GradedLayer {
    /// Degree-j monomials, primal-descending.
    pub monos: Vec<ExpVec>,
    /// Orthonormal kernel basis of the dual layer.
    pub kernel: CMat,
    /// Reduced layer basis (unit leading coefficients, distinct initials).
    pub reduced: Vec<CVec>,
    /// Initial functional monomials (pivot exponents) of the reduced basis.
    pub lead_exponents: Vec<ExpVec>,
    /// Complement: monomials of this degree lying in the initial ideal.
    pub initial_monomials: Vec<ExpVec>,
}

impl GradedDualEngine {
    pub fn new(ring: &Ring, gens: Vec<Polynomial>, delta: f64) -> Self {
        debug_assert!(gens.iter().all(is_homogeneous));
        GradedDualEngine {
            ring: ring.clone(),
            gens,
            delta,
            layers: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn extend_to(&mut self, k: usize) {
        while self.layers.len() <= k {
            self.step();
        }
    }

    pub fn layer(&mut self, j: usize) -> &GradedLayer {
        self.extend_to(j);
        &self.layers[j]
    }

    /// `dim D^k` (cumulative over layers 0..=k).
    pub fn dim_up_to(&mut self, k: usize) -> usize {
        self.extend_to(k);
        self.layers[..=k].iter().map(|l| l.kernel.ncols()).sum()
    }

    pub fn layer_dim(&mut self, j: usize) -> usize {
        self.extend_to(j);
        self.layers[j].kernel.ncols()
    }

    /// Monomials of the initial ideal with degree <= k.
    pub fn initial_monomials_up_to(&mut self, k: usize) -> Vec<ExpVec> {
        self.extend_to(k);
        self.layers[..=k]
            .iter()
            .flat_map(|l| l.initial_monomials.iter().cloned())
            .collect()
    }

    fn step(&mut self) {
        let j = self.layers.len();
        let n = self.ring.nvars();
        let mut monos = monomials_of_degree(n, j as u32);
        monos.sort_by(|a, b| self.ring.cmp_primal(a, b).reverse());
        let index: std::collections::HashMap<&ExpVec, usize> =
            monos.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let ncols = monos.len();

        let mut rows: Vec<(CVec, f64)> = Vec::new();
        for f in &self.gens {
            let d = f.degree();
            if d as usize > j || f.is_zero() {
                continue;
            }
            for beta in monomials_of_degree(n, j as u32 - d) {
                let mut row = CVec::zeros(ncols);
                for (e, c) in &f.terms {
                    let target = e.mul(&beta);
                    row[index[&target]] = *c;
                }
                rows.push((row, f.coeff_norm()));
            }
        }

        let cleaned = linalg::clean_rows(rows);
        let mat = linalg::matrix_from_rows(ncols, &cleaned);
        let res = linalg::kernel(&mat, self.delta);
        if let Some(w) = res.gap_warning {
            self.warnings.push(format!("degree {}: {}", j, w));
        }

        let priority: Vec<usize> = (0..ncols).rev().collect();
        let (reduced, leads) = linalg::rref_columns(&res.basis, &priority, self.delta);
        let lead_set: std::collections::HashSet<usize> = leads.iter().copied().collect();
        let lead_exponents = leads.iter().map(|&p| monos[p].clone()).collect();
        let initial_monomials = monos
            .iter()
            .enumerate()
            .filter(|(i, _)| !lead_set.contains(i))
            .map(|(_, e)| e.clone())
            .collect();
        self.layers.push(GradedLayer {
            monos,
            kernel: res.basis,
            reduced,
            lead_exponents,
            initial_monomials,
        });
    }

    /// Dual layers of the colon ideal `<gens> : <g>` for homogeneous `g`:
    /// the action of `g` maps the degree-(t+e) dual layer onto the degree-t
    /// colon dual layer exactly.
    pub fn colon_layer(&mut self, g: &Polynomial, t: usize) -> ColonLayer {
        let e = g.degree() as usize;
        self.extend_to(t + e);
        let src = &self.layers[t + e];
        let n = self.ring.nvars();
        let mut monos = monomials_of_degree(n, t as u32);
        monos.sort_by(|a, b| self.ring.cmp_primal(a, b).reverse());
        let src_index: std::collections::HashMap<&ExpVec, usize> =
            src.monos.iter().enumerate().map(|(i, m)| (m, i)).collect();

        let mut raw = CMat::zeros(monos.len(), src.kernel.ncols());
        for col in 0..src.kernel.ncols() {
            for (i, alpha) in monos.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (beta, gc) in &g.terms {
                    let shifted = alpha.mul(beta);
                    if let Some(&si) = src_index.get(&shifted) {
                        acc += gc * src.kernel[(si, col)];
                    }
                }
                raw[(i, col)] = acc;
            }
        }
        // orthonormalize the span, then read initial terms
        let span = linalg::kernel(&raw.adjoint(), self.delta).row_space;
        let priority: Vec<usize> = (0..monos.len()).rev().collect();
        let (reduced, leads) = linalg::rref_columns(&span, &priority, self.delta);
        let lead_set: std::collections::HashSet<usize> = leads.iter().copied().collect();
        let initial_monomials = monos
            .iter()
            .enumerate()
            .filter(|(i, _)| !lead_set.contains(i))
            .map(|(_, m)| m.clone())
            .collect();
        let lead_exponents = leads.iter().map(|&p| monos[p].clone()).collect();
        ColonLayer {
            monos,
            reduced,
            lead_exponents,
            initial_monomials,
        }
    }
}

pub struct ColonLayer {
    pub monos: Vec<ExpVec>,
    pub reduced: Vec<CVec>,
    pub lead_exponents: Vec<ExpVec>,
    /// Monomials of this degree in the initial ideal of the colon.
    pub initial_monomials: Vec<ExpVec>,
}

impl ColonLayer {
    pub fn dim(&self) -> usize {
        self.reduced.len()
    }
}

pub fn is_homogeneous(f: &Polynomial) -> bool {
    let mut deg = None;
    for e in f.terms.keys() {
        match deg {
            None => deg = Some(e.degree()),
            Some(d) if d != e.degree() => return false,
            _ => {}
        }
    }
    true
}
