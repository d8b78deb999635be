//! Local interpolation for isolated components: degree-bounded elements of a
//! primary ideal from point samples carrying local dual-space constraints.
//!
//! Each sample point on a positive-dimensional component is paired with a
//! generic affine slice of matching codimension; the full dual space of the
//! sliced (now finite) scheme supplies the constraints. Points are added
//! until the constraint-matrix rank survives one full extra point.

use num_complex::Complex64;

use crate::config::NumericalConfig;
use crate::dual::{DualBasis, DualEngine, Point};
use crate::embedded::{space_from_columns, TruncationSpace};
use crate::error::{Error, Result};
use crate::linalg::{self, CVec};
use crate::oracle::{OracleHandle, Representation};
use crate::poly::Polynomial;
use crate::ring::{ExpVec, MonomialTable, Ring};

/// Compute a basis of `(Q_i)_e`, the degree-<= e part of the primary ideal of
/// the isolated component `id`.
pub fn interpolate_isolated(
    h: &mut OracleHandle,
    id: &str,
    e: usize,
    cfg: &NumericalConfig,
) -> Result<TruncationSpace> {
    let ring = h.ring.clone();
    let comp = h
        .components
        .iter()
        .find(|c| c.id == id)
        .cloned()
        .ok_or_else(|| Error::InvalidArgument(format!("unknown component '{}'", id)))?;
    let table = MonomialTable::new(&ring, e as u32);
    let n = table.len();
    let system = h.system.clone();

    let mut rows: Vec<(CVec, f64)> = Vec::new();
    let mut rank = 0usize;
    let mut stable_since_rank_change = 0usize;
    let far = Point::new(vec![Complex64::new(1e6, 1e6); ring.nvars()]);

    let points: Vec<Point> = match &comp.rep {
        Representation::PointList(pts) => pts.clone(),
        Representation::Parametrization(_) => Vec::new(),
    };
    let mut point_iter = points.into_iter();

    for _ in 0..cfg.max_samples {
        let x = match &comp.rep {
            Representation::PointList(_) => match point_iter.next() {
                Some(p) => p,
                None => break, // finitely many fixture points carry all constraints
            },
            Representation::Parametrization(_) => h.sample_point(id, &far, None)?,
        };
        let codim = comp.effective_dim();
        let mut sliced = system.clone();
        for _ in 0..codim {
            sliced.push(random_affine_through(&ring, h, &x));
        }
        let local = full_local_dual(&ring, &sliced, &x, cfg)?;
        let shifted: Vec<Polynomial> = table
            .exps
            .iter()
            .map(|g| {
                Polynomial::monomial(&ring, g.clone(), Complex64::new(1.0, 0.0))
                    .translate(&x.coords)
            })
            .collect();
        for q in &local.functionals {
            let mut row = CVec::zeros(n);
            for (gi, tg) in shifted.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (alpha, c) in &q.terms {
                    acc += c * tg.coeff(alpha);
                }
                row[gi] = acc;
            }
            rows.push((row, 1.0));
        }

        let cleaned = linalg::clean_rows(rows.clone());
        let mat = linalg::matrix_from_rows(n, &cleaned);
        let res = linalg::kernel(&mat, cfg.delta);
        if res.rank == rank {
            stable_since_rank_change += 1;
            if stable_since_rank_change >= 1 && rank > 0 {
                return Ok(space_from_columns(&ring, &table, &res.basis, e, None, cfg));
            }
        } else {
            rank = res.rank;
            stable_since_rank_change = 0;
        }
    }

    // point lists exhaust their fixtures; treat that as stabilized
    if matches!(comp.rep, Representation::PointList(_)) {
        let cleaned = linalg::clean_rows(rows);
        let mat = linalg::matrix_from_rows(n, &cleaned);
        let res = linalg::kernel(&mat, cfg.delta);
        return Ok(space_from_columns(&ring, &table, &res.basis, e, None, cfg));
    }
    Err(Error::SamplingFailed(format!(
        "interpolation rank did not stabilize within {} samples",
        cfg.max_samples
    )))
}

/// Full (untruncated) local dual of a zero-dimensional local scheme: extend
/// the truncation until a degree adds no new functionals.
fn full_local_dual(
    ring: &Ring,
    gens: &[Polynomial],
    x: &Point,
    cfg: &NumericalConfig,
) -> Result<DualBasis> {
    let local: Vec<Polynomial> = gens.iter().map(|f| f.translate(&x.coords)).collect();
    let mut engine = DualEngine::at_origin(ring, local, cfg.delta);
    let mut k = 0usize;
    loop {
        let d0 = engine.dim(k);
        let d1 = engine.dim(k + 1);
        if d1 == d0 {
            return engine.reduced_basis(k, x);
        }
        k += 1;
        if k > cfg.max_degree {
            return Err(Error::Inconclusive(format!(
                "local dual did not terminate by order {}; the sliced scheme may not be finite",
                cfg.max_degree
            )));
        }
    }
}

fn random_affine_through(ring: &Ring, h: &mut OracleHandle, x: &Point) -> Polynomial {
    let mut f = Polynomial::zero(ring);
    let mut shift = Complex64::new(0.0, 0.0);
    for i in 0..ring.nvars() {
        let c = h.draw_circle();
        f.add_term(ExpVec::unit(ring.nvars(), i), c);
        shift += c * x.coords[i];
    }
    f.add_term(ExpVec::zero(ring.nvars()), -shift);
    f
}

/// Truncated dual dimensions of the ideal generated by an interpolated
/// truncation space (the zero ideal when the space is empty).
pub fn dual_dims_of_truncated_ideal(
    space: &TruncationSpace,
    k: usize,
    cfg: &NumericalConfig,
) -> Result<Vec<usize>> {
    let y = Point::origin(space.ring.nvars());
    let basis = crate::dual::truncated_dual_in_ring(&space.ring, &space.basis, &y, k, cfg)?;
    Ok(basis.dims)
}
