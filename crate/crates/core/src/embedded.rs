//! Decision procedures for embedded-component testing: double truncations,
//! witness polynomial certification, ideal truncation, the origin test, and
//! the dimension reduction by generic slicing.
//!
//! The origin test races two certificates. Degree-d truncations of the
//! intersection of the non-suspect components are certified against the
//! colon staircase and searched for elements outside the initial ideal of
//! `<F>` (embedded). Meanwhile the colon duals `l . D^{d+1}[I]` accumulate
//! s-corner coverage (pseudocomponent).

use num_complex::Complex64;
use serde::Serialize;

use crate::colon::{colon_dual, ideal_membership};
use crate::config::{NumericalConfig, ON_VARIETY_TOL};
use crate::dual::{DualEngine, GradedDualEngine, Point};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::oracle::OracleHandle;
use crate::poly::Polynomial;
use crate::ring::{ExpVec, MonomialTable, Ring};
use crate::staircase::gcorners;

/// Degree-d polynomial space cut out by dual constraints of order e at
/// generic component points. `e = None` marks a certified truncation `J_d`.
#[derive(Debug, Clone)]
pub struct TruncationSpace {
    pub ring: Ring,
    /// Reduced basis: distinct initial terms, unit leading coefficients.
    pub basis: Vec<Polynomial>,
    pub d: usize,
    /// Dual-constraint order; `None` once certified to lie inside `J`.
    pub e: Option<usize>,
}

impl TruncationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "certificate_type", rename_all = "snake_case")]
pub enum Certificate {
    /// An element of `J` outside `I`: the suspect is a true embedded
    /// component. `degree` is the witness degree d', `cutoff` the
    /// certification degree d of the (d', d) record.
    Witness {
        witness_poly: String,
        degree: usize,
        cutoff: usize,
    },
    /// Every s-corner of the initial ideal was reached by the colon duals:
    /// the suspect is a pseudocomponent.
    Coverage { covered_scorners: Vec<String> },
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddedVerdict {
    pub verdict: bool,
    #[serde(flatten)]
    pub certificate: Certificate,
    pub degrees: DegreesReached,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreesReached {
    pub d: usize,
    pub e: usize,
}

/// The double truncation `J_d^e`: polynomials of degree <= d annihilated by
/// all order-e dual constraints at generic points of every component.
/// Fresh points are drawn each round until a full round leaves the space
/// unchanged.
pub fn double_truncation(
    h: &mut OracleHandle,
    d: usize,
    e: usize,
    cfg: &NumericalConfig,
) -> Result<TruncationSpace> {
    if h.components.is_empty() {
        return Err(Error::InvalidArgument(
            "double truncation needs at least one component".into(),
        ));
    }
    let ring = h.ring.clone();
    let table = MonomialTable::new(&ring, d as u32);
    let n = table.len();
    let suspect = h.suspect.clone();
    let mut k_basis = CMat::identity(n, n);

    let max_rounds = n + 2;
    for _ in 0..max_rounds {
        let old_dim = k_basis.ncols();
        if old_dim == 0 {
            break;
        }
        let mut rows: Vec<(CVec, f64)> = Vec::new();
        let ids: Vec<String> = h.components.iter().map(|c| c.id.clone()).collect();
        for id in &ids {
            let x = h.sample_point(id, &suspect, None)?;
            let dual = h.dual_at(&x, e, cfg)?;
            // pairing of each functional against the monomial basis of R_d
            let shifted: Vec<Polynomial> = table
                .exps
                .iter()
                .map(|g| {
                    Polynomial::monomial(&ring, g.clone(), Complex64::new(1.0, 0.0))
                        .translate(&x.coords)
                })
                .collect();
            for q in &dual.functionals {
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
        }
        let cleaned = linalg::clean_rows(rows);
        let constraint = linalg::matrix_from_rows(n, &cleaned);
        let reduced = &constraint * &k_basis;
        let ker = linalg::kernel(&reduced, cfg.delta);
        k_basis = &k_basis * &ker.basis;
        if k_basis.ncols() == old_dim {
            return Ok(space_from_columns(&ring, &table, &k_basis, d, Some(e), cfg));
        }
    }
    Ok(space_from_columns(&ring, &table, &k_basis, d, Some(e), cfg))
}

pub(crate) fn space_from_columns(
    ring: &Ring,
    table: &MonomialTable,
    cols: &CMat,
    d: usize,
    e: Option<usize>,
    cfg: &NumericalConfig,
) -> TruncationSpace {
    // reduce against the primal order so leading monomials are initial terms
    let priority: Vec<usize> = (0..table.len()).collect();
    let (vecs, _) = linalg::rref_columns(cols, &priority, cfg.delta);
    let basis = vecs
        .into_iter()
        .map(|v| {
            let mut f = Polynomial::zero(ring);
            for (i, c) in v.iter().enumerate() {
                if c.norm() > 0.0 {
                    f.add_term(table.exps[i].clone(), *c);
                }
            }
            f
        })
        .collect();
    TruncationSpace {
        ring: ring.clone(),
        basis,
        d,
        e,
    }
}

/// Certify that `g` lies in the intersection `J` of the non-suspect
/// components: within the degree cutoff `c`, the initial ideal of the colon
/// `<F> : <g>` (read from the homogenized colon duals) must reveal a pure
/// power of every variable, i.e. a zero-dimensional colon. `false` doubles
/// as "inconclusive at this cutoff".
pub fn is_witness_polynomial(
    gens: &[Polynomial],
    g: &Polynomial,
    c: usize,
    cfg: &NumericalConfig,
) -> Result<bool> {
    let ring = gens
        .first()
        .map(|f| f.ring.clone())
        .ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?;
    let rh = ring.homogenized()?;
    let homog: Vec<Polynomial> = gens
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| f.homogenize(&rh))
        .collect::<Result<_>>()?;
    let mut engine = GradedDualEngine::new(&rh, homog, cfg.delta);
    witness_with_engine(&mut engine, g, c)
}

fn witness_with_engine(engine: &mut GradedDualEngine, g: &Polynomial, c: usize) -> Result<bool> {
    if g.is_zero() {
        return Ok(true);
    }
    let rh = engine.ring.clone();
    let n = rh.nvars() - 1;
    let gh = g.homogenize(&rh)?;
    let mut pure_found = vec![false; n];
    for dw in 0..=c {
        let layer = engine.colon_layer(&gh, dw);
        for m in &layer.initial_monomials {
            let phi = ExpVec(m.0[..n].to_vec());
            if phi.is_zero() {
                // a unit in the localized colon: g is a member of <F> R_0
                return Ok(true);
            }
            if phi.is_pure_power() {
                for i in phi.support() {
                    pure_found[i] = true;
                }
            }
        }
        if pure_found.iter().all(|&b| b) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Record of the random element that certified an ideal truncation.
#[derive(Debug, Clone)]
pub struct CertifiedWitness {
    pub poly: Polynomial,
    /// Cutoff at which the colon test certified membership in `J`.
    pub cutoff: usize,
}

/// `J_d`: iterate the dual-constraint order e upward, drawing a random
/// element of each `J_d^e` until the colon test certifies it lies in `J`.
pub fn ideal_truncation(
    gens: &[Polynomial],
    h: &mut OracleHandle,
    d: usize,
    cfg: &NumericalConfig,
) -> Result<(TruncationSpace, Option<CertifiedWitness>)> {
    let ring = gens
        .first()
        .map(|f| f.ring.clone())
        .ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?;
    let rh = ring.homogenized()?;
    let homog: Vec<Polynomial> = gens
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| f.homogenize(&rh))
        .collect::<Result<_>>()?;
    let mut engine = GradedDualEngine::new(&rh, homog, cfg.delta);
    ideal_truncation_with_engine(gens, h, d, cfg, &mut engine)
}

fn ideal_truncation_with_engine(
    _gens: &[Polynomial],
    h: &mut OracleHandle,
    d: usize,
    cfg: &NumericalConfig,
    engine_h: &mut GradedDualEngine,
) -> Result<(TruncationSpace, Option<CertifiedWitness>)> {
    for e in 0..=cfg.max_e {
        let mut space = double_truncation(h, d, e, cfg)?;
        if space.basis.is_empty() {
            space.e = None;
            return Ok((space, None));
        }
        let g = random_element(h, &space.basis);
        if witness_with_engine(engine_h, &g, e)? {
            space.e = None;
            return Ok((space, Some(CertifiedWitness { poly: g, cutoff: e })));
        }
    }
    Err(Error::Inconclusive(format!(
        "ideal truncation at degree {} not certified within dual order {}",
        d, cfg.max_e
    )))
}

/// Random unit element of the span: complex Gaussian coefficients over the
/// basis, normalized.
fn random_element(h: &mut OracleHandle, basis: &[Polynomial]) -> Polynomial {
    let ring = basis[0].ring.clone();
    let mut g = Polynomial::zero(&ring);
    for b in basis {
        g = g.add(&b.scale(h.draw_gaussian()));
    }
    let n = g.coeff_norm();
    if n > 0.0 {
        g = g.scale(Complex64::new(1.0 / n, 0.0));
    }
    g
}

/// Is the origin an embedded component of `<F>`?
///
/// The oracle must list every component whose closure contains the origin,
/// excluding the origin itself; all components of `<F>` must pass through
/// the origin.
pub fn is_origin_embedded(
    gens: &[Polynomial],
    h: &mut OracleHandle,
    cfg: &NumericalConfig,
) -> Result<EmbeddedVerdict> {
    if h.components.is_empty() {
        return Err(Error::InvalidArgument(
            "the suspect must be properly contained in at least one listed component".into(),
        ));
    }
    let ring = gens
        .first()
        .map(|f| f.ring.clone())
        .ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?;
    let origin = Point::origin(ring.nvars());

    let staircase = gcorners(gens, &origin, cfg)?;
    let corner_bound = staircase
        .gcorners
        .iter()
        .map(|c| c.degree())
        .max()
        .unwrap_or(0)
        .max(1);
    let scorners = staircase.scorners(corner_bound * ring.nvars() as u32 + 1);

    // generic linear form for the colon side
    let ell = random_linear_form(&ring, h);

    let rh = ring.homogenized()?;
    let homog: Vec<Polynomial> = gens
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| f.homogenize(&rh))
        .collect::<Result<_>>()?;
    let mut engine_h = GradedDualEngine::new(&rh, homog, cfg.delta);
    let mut engine_i = DualEngine::at_origin(&ring, gens.to_vec(), cfg.delta);

    for d in 0..=cfg.max_d {
        // (a) truncations of J escape the staircase of I => embedded
        let (jd, record) = ideal_truncation_with_engine(gens, h, d, cfg, &mut engine_h)?;
        if !jd.basis.is_empty() {
            let record = record.expect("nonzero certified truncation carries its witness");
            for b in &jd.basis {
                let init = b.initial_exponent()?;
                if !staircase.contains(&init) {
                    return Ok(EmbeddedVerdict {
                        verdict: true,
                        certificate: Certificate::Witness {
                            witness_poly: format!("{}", b),
                            degree: b.degree() as usize,
                            cutoff: record.cutoff,
                        },
                        degrees: DegreesReached {
                            d,
                            e: record.cutoff,
                        },
                    });
                }
            }
            // the certified random element may still avoid I even when every
            // basis initial stays inside the staircase
            match ideal_membership(gens, &record.poly, cfg) {
                Ok(false) => {
                    return Ok(EmbeddedVerdict {
                        verdict: true,
                        certificate: Certificate::Witness {
                            witness_poly: format!("{}", record.poly),
                            degree: record.poly.degree() as usize,
                            cutoff: record.cutoff,
                        },
                        degrees: DegreesReached {
                            d,
                            e: record.cutoff,
                        },
                    });
                }
                Ok(true) => {}
                Err(Error::Inconclusive(_)) => {}
                Err(e) => return Err(e),
            }
        }

        // (b) colon duals cover every s-corner => pseudocomponent
        let basis = engine_i.reduced_basis(d + 1, &origin)?;
        let s_d = colon_dual(&basis, &ell, cfg)?;
        let inits: std::collections::HashSet<ExpVec> =
            s_d.initial_exponents()?.into_iter().collect();
        if scorners.iter().all(|a| inits.contains(a)) {
            return Ok(EmbeddedVerdict {
                verdict: false,
                certificate: Certificate::Coverage {
                    covered_scorners: scorners.iter().map(|a| ring.monomial_string(a)).collect(),
                },
                degrees: DegreesReached { d, e: d + 1 },
            });
        }
    }
    Err(Error::Inconclusive(format!(
        "no verdict reached within degree {}",
        cfg.max_d
    )))
}

fn random_linear_form(ring: &Ring, h: &mut OracleHandle) -> Polynomial {
    let mut ell = Polynomial::zero(ring);
    for i in 0..ring.nvars() {
        ell.add_term(ExpVec::unit(ring.nvars(), i), h.draw_circle());
    }
    ell
}

/// Translate the system and oracle so `y` becomes the origin, keeping only
/// the components that contain `y`.
pub fn localize_at(
    gens: &[Polynomial],
    y: &Point,
    h: &mut OracleHandle,
    cfg: &NumericalConfig,
) -> Result<(Vec<Polynomial>, OracleHandle)> {
    for f in gens {
        let r = f.evaluate(&y.coords).norm();
        let tol = ON_VARIETY_TOL * (1.0 + f.coeff_norm());
        if r > tol {
            return Err(Error::NotOnVariety { residual: r, tol });
        }
    }
    let ids: Vec<String> = h.components.iter().map(|c| c.id.clone()).collect();
    let mut keep = Vec::new();
    for id in &ids {
        if h.component_contains(id, y)? {
            keep.push(id.clone());
        }
    }
    if keep.is_empty() {
        return Err(Error::InvalidArgument(
            "the suspect must be properly contained in at least one listed component".into(),
        ));
    }
    // a smooth point on a single component is not a suspect: its local dual
    // dimensions match the regular pattern of the component's dimension
    if keep.len() == 1 {
        let d = h
            .components
            .iter()
            .find(|c| c.id == keep[0])
            .map(|c| c.dim)
            .unwrap_or(0);
        let dims = crate::dual::truncated_dual(gens, y, 2, cfg)?.dims;
        let smooth = vec![1, 1 + d, 1 + d + d * (d + 1) / 2];
        if dims == smooth {
            return Err(Error::InvalidArgument(format!(
                "the point is a smooth point of component '{}', not a suspect",
                keep[0]
            )));
        }
    }
    let translated_gens: Vec<Polynomial> = gens.iter().map(|f| f.translate(&y.coords)).collect();
    let comps = h
        .components
        .iter()
        .filter(|c| keep.contains(&c.id))
        .map(|c| c.translated(&y.coords))
        .collect();
    let ht = OracleHandle::new(
        &h.ring,
        translated_gens.clone(),
        comps,
        Point::origin(h.ring.nvars()),
        cfg,
    )?;
    Ok((translated_gens, ht))
}

/// Embedded test at an arbitrary suspect point: translate everything so the
/// suspect becomes the origin, keep only the oracle components that contain
/// it, and run the origin test.
pub fn is_point_embedded(
    gens: &[Polynomial],
    y: &Point,
    h: &mut OracleHandle,
    cfg: &NumericalConfig,
) -> Result<EmbeddedVerdict> {
    let (translated_gens, mut ht) = localize_at(gens, y, h, cfg)?;
    is_origin_embedded(&translated_gens, &mut ht, cfg)
}

/// Reduce a positive-dimensional suspect component to a point test: slice by
/// generic affine planes through a generic point of the suspect. Returns the
/// extended system, the point to test, and the sliced oracle. Run
/// [`is_point_embedded`] on the result.
pub fn slice_suspect(
    gens: &[Polynomial],
    suspect_id: &str,
    h: &mut OracleHandle,
    cfg: &NumericalConfig,
) -> Result<(Vec<Polynomial>, Point, OracleHandle)> {
    let ring = h.ring.clone();
    let suspect = h
        .components
        .iter()
        .find(|c| c.id == suspect_id)
        .cloned()
        .ok_or_else(|| Error::InvalidArgument(format!("unknown component '{}'", suspect_id)))?;
    let k = suspect.dim;
    if k == 0 {
        return Err(Error::InvalidArgument(
            "suspect has dimension 0: use the point test directly".into(),
        ));
    }
    let far = far_point(&ring);
    let y = h.sample_point(suspect_id, &far, None)?;

    // k random affine forms through y
    let mut forms = Vec::with_capacity(k);
    for _ in 0..k {
        let mut f = Polynomial::zero(&ring);
        let mut shift = Complex64::new(0.0, 0.0);
        for i in 0..ring.nvars() {
            let c = h.draw_circle();
            f.add_term(ExpVec::unit(ring.nvars(), i), c);
            shift += c * y.coords[i];
        }
        f.add_term(ExpVec::zero(ring.nvars()), -shift);
        forms.push(f);
    }
    let mut extended = gens.to_vec();
    extended.extend(forms.iter().cloned());

    let mut sliced_comps = Vec::new();
    let ids: Vec<(String, usize)> = h
        .components
        .iter()
        .filter(|c| c.id != suspect_id)
        .map(|c| (c.id.clone(), c.dim))
        .collect();
    for (id, dim) in ids {
        if dim > k {
            let mut c = h.components.iter().find(|c| c.id == id).cloned().unwrap();
            c.constraints.extend(forms.iter().cloned());
            sliced_comps.push(c);
        } else if dim == k {
            let pts = h.slice_points(&id, &forms)?;
            if !pts.is_empty() {
                sliced_comps.push(crate::oracle::ComponentSpec {
                    id: format!("{}_slice", id),
                    dim: 0,
                    rep: crate::oracle::Representation::PointList(pts),
                    constraints: Vec::new(),
                });
            }
        }
        // components of dimension < k miss a generic slice
    }

    let sliced = OracleHandle::new(
        &ring,
        extended.clone(),
        sliced_comps,
        y.clone(),
        &cfg.with_seed(cfg.child_seed(0x51)),
    )?;
    Ok((extended, y, sliced))
}

fn far_point(ring: &Ring) -> Point {
    Point::new(vec![Complex64::new(1e6, 1e6); ring.nvars()])
}
