//! Component oracle: sample generic points on prescribed components and
//! evaluate truncated local dual spaces there.
//!
//! Components come in as fixtures — parametrizations (rational coordinate
//! maps of the parameters) or explicit point lists — validated against the
//! system at load. Constrained sampling Newton-refines random parameters onto
//! affine slicing planes.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{NumericalConfig, AVOID_DIST, ON_VARIETY_TOL};
use crate::dual::{truncated_dual, DualBasis, Point};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::parse::RationalExpr;
use crate::poly::Polynomial;
use crate::ring::Ring;

#[derive(Debug, Clone)]
pub enum Representation {
    /// Coordinate functions of the parameters `t1..td` (rational entries are
    /// allowed, e.g. `1/t`).
    Parametrization(Vec<RationalExpr>),
    /// Explicit points; only for zero-dimensional components.
    PointList(Vec<Point>),
}

#[derive(Debug, Clone)]
pub struct ComponentSpec {
    pub id: String,
    pub dim: usize,
    pub rep: Representation,
    /// Affine forms cutting the component down (set by slicing).
    pub constraints: Vec<Polynomial>,
}

/// Ring for the parameters of a dim-dimensional parametrization.
pub fn param_ring(dim: usize) -> Ring {
    if dim == 1 {
        crate::ring::ring(&["t"])
    } else {
        crate::ring::ring_from_names((1..=dim).map(|i| format!("t{}", i)).collect())
    }
}

impl ComponentSpec {
    /// Effective dimension after constraints.
    pub fn effective_dim(&self) -> usize {
        self.dim.saturating_sub(self.constraints.len())
    }

    pub fn translated(&self, shift: &[Complex64]) -> ComponentSpec {
        let rep = match &self.rep {
            Representation::Parametrization(coords) => Representation::Parametrization(
                coords
                    .iter()
                    .zip(shift)
                    .map(|(c, s)| c.sub_constant(*s))
                    .collect(),
            ),
            Representation::PointList(pts) => Representation::PointList(
                pts.iter()
                    .map(|p| Point::new(p.coords.iter().zip(shift).map(|(c, s)| c - s).collect()))
                    .collect(),
            ),
        };
        let constraints = self
            .constraints
            .iter()
            .map(|f| f.translate(shift))
            .collect();
        ComponentSpec {
            id: self.id.clone(),
            dim: self.dim,
            rep,
            constraints,
        }
    }
}

pub struct OracleHandle {
    pub ring: Ring,
    pub system: Vec<Polynomial>,
    pub components: Vec<ComponentSpec>,
    pub suspect: Point,
    rng: ChaCha8Rng,
    delta: f64,
}

impl OracleHandle {
    /// Build a handle and validate every parametrization against the system:
    /// generator residuals must stay inside the on-variety band at 20 random
    /// parameter draws.
    pub fn new(
        ring: &Ring,
        system: Vec<Polynomial>,
        components: Vec<ComponentSpec>,
        suspect: Point,
        cfg: &NumericalConfig,
    ) -> Result<Self> {
        let mut h = OracleHandle {
            ring: ring.clone(),
            system,
            components,
            suspect,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            delta: cfg.delta,
        };
        for ci in 0..h.components.len() {
            h.validate_component(ci)?;
        }
        Ok(h)
    }

    /// Clone with an independently seeded random stream.
    pub fn with_seed(&self, seed: u64) -> OracleHandle {
        OracleHandle {
            ring: self.ring.clone(),
            system: self.system.clone(),
            components: self.components.clone(),
            suspect: self.suspect.clone(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            delta: self.delta,
        }
    }

    fn validate_component(&mut self, ci: usize) -> Result<()> {
        match &self.components[ci].rep {
            Representation::PointList(pts) => {
                for p in pts.clone() {
                    self.check_on_system(&p).map_err(|e| {
                        Error::Problem(format!(
                            "component {}: fixture point off the variety: {}",
                            self.components[ci].id, e
                        ))
                    })?;
                }
            }
            Representation::Parametrization(_) => {
                for _ in 0..20 {
                    let p = self.raw_sample(ci)?;
                    self.check_on_system(&p).map_err(|e| {
                        Error::Problem(format!(
                            "component {}: parametrization leaves the variety: {}",
                            self.components[ci].id, e
                        ))
                    })?;
                }
            }
        }
        Ok(())
    }

    fn check_on_system(&self, p: &Point) -> Result<()> {
        for f in &self.system {
            let r = f.evaluate(&p.coords).norm();
            let tol = ON_VARIETY_TOL * (1.0 + f.coeff_norm());
            if r > tol {
                return Err(Error::NotOnVariety { residual: r, tol });
            }
        }
        Ok(())
    }

    fn component(&self, id: &str) -> Result<usize> {
        self.components
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown component '{}'", id)))
    }

    fn draw_unit_disc(&mut self) -> Complex64 {
        let r = self.rng.gen::<f64>().sqrt();
        let a = self.rng.gen::<f64>() * std::f64::consts::TAU;
        Complex64::new(r * a.cos(), r * a.sin())
    }

    /// Seeded draw from the complex unit circle.
    pub fn draw_circle(&mut self) -> Complex64 {
        let a = self.rng.gen::<f64>() * std::f64::consts::TAU;
        Complex64::new(a.cos(), a.sin())
    }

    /// Seeded standard complex Gaussian (Box–Muller).
    pub fn draw_gaussian(&mut self) -> Complex64 {
        let u: f64 = self.rng.gen::<f64>().max(1e-300);
        let v: f64 = self.rng.gen();
        let r = (-2.0 * u.ln()).sqrt();
        Complex64::new(
            r * (std::f64::consts::TAU * v).cos(),
            r * (std::f64::consts::TAU * v).sin(),
        )
    }

    /// One unconstrained draw from a parametrized component (no avoid check).
    fn raw_sample(&mut self, ci: usize) -> Result<Point> {
        let comp = self.components[ci].clone();
        let Representation::Parametrization(coords) = &comp.rep else {
            return Err(Error::InvalidArgument(
                "raw_sample needs a parametrization".into(),
            ));
        };
        let dim = comp.dim;
        'attempt: for _ in 0..50 {
            let t: Vec<Complex64> = (0..dim).map(|_| self.draw_unit_disc()).collect();
            for c in coords {
                if c.den_value(&t).norm() < 0.2 {
                    continue 'attempt;
                }
            }
            let t = if comp.constraints.is_empty() {
                t
            } else {
                match self.newton_onto_constraints(&comp, t) {
                    Some(t) => t,
                    None => continue 'attempt,
                }
            };
            let x: Vec<Complex64> = coords.iter().map(|c| c.evaluate(&t)).collect();
            return Ok(Point::new(x));
        }
        Err(Error::SamplingFailed(format!(
            "component {}: no sample after 50 attempts",
            comp.id
        )))
    }

    /// Newton-refine parameters so the component's constraint forms vanish.
    fn newton_onto_constraints(
        &self,
        comp: &ComponentSpec,
        start: Vec<Complex64>,
    ) -> Option<Vec<Complex64>> {
        let Representation::Parametrization(coords) = &comp.rep else {
            return None;
        };
        let m = comp.constraints.len();
        let dim = comp.dim;
        if m > dim {
            return None;
        }
        let mut t = start;
        for _ in 0..40 {
            let x: Vec<Complex64> = coords.iter().map(|c| c.evaluate(&t)).collect();
            let mut fval = CVec::zeros(m);
            let mut scale = 0.0f64;
            for (l, form) in comp.constraints.iter().enumerate() {
                fval[l] = form.evaluate(&x);
                scale = scale.max(form.coeff_norm());
            }
            if fval.norm() < 1e-11 * scale.max(1.0) {
                return Some(t);
            }
            let mut jac = CMat::zeros(m, dim);
            for (l, form) in comp.constraints.iter().enumerate() {
                for j in 0..dim {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (i, c) in coords.iter().enumerate() {
                        let dfdx = form.diff(i).evaluate(&x);
                        if dfdx.norm() > 0.0 {
                            acc += dfdx * c.diff_value(j, &t);
                        }
                    }
                    jac[(l, j)] = acc;
                }
            }
            let rhs = -fval;
            let step = linalg::solve_min_norm(&jac, &rhs, 1e-13)?;
            for j in 0..dim {
                t[j] += step[j];
            }
            // denominators must stay away from their poles
            for c in coords {
                if c.den_value(&t).norm() < 1e-6 {
                    return None;
                }
            }
        }
        None
    }

    /// Sample a point on the component, away from `avoid`, optionally on the
    /// extra affine planes in `constraints`.
    pub fn sample_point(
        &mut self,
        id: &str,
        avoid: &Point,
        constraints: Option<&[Polynomial]>,
    ) -> Result<Point> {
        let ci = self.component(id)?;
        let comp = self.components[ci].clone();
        match &comp.rep {
            Representation::PointList(pts) => {
                let candidates: Vec<&Point> = pts
                    .iter()
                    .filter(|p| p.dist(avoid) > AVOID_DIST)
                    .filter(|p| {
                        constraints.is_none_or(|cs| {
                            cs.iter().all(|f| {
                                f.evaluate(&p.coords).norm()
                                    < ON_VARIETY_TOL * (1.0 + f.coeff_norm())
                            })
                        })
                    })
                    .collect();
                if candidates.is_empty() {
                    return Err(Error::SamplingFailed(format!(
                        "component {}: no fixture point away from the suspect satisfies the constraints",
                        comp.id
                    )));
                }
                let k = self.rng.gen_range(0..candidates.len());
                Ok(candidates[k].clone())
            }
            Representation::Parametrization(_) => {
                // merge slicing constraints into the component for refinement
                let mut merged = comp.clone();
                if let Some(cs) = constraints {
                    if cs.len() + merged.constraints.len() > merged.dim {
                        return Err(Error::InvalidArgument(format!(
                            "component {}: constraint codimension exceeds dimension",
                            merged.id
                        )));
                    }
                    merged.constraints.extend(cs.iter().cloned());
                }
                let idx = self.push_temp(merged);
                let result = (0..50).find_map(|_| {
                    let p = self.raw_sample(idx).ok()?;
                    if p.dist(avoid) > AVOID_DIST && self.check_on_system(&p).is_ok() {
                        Some(p)
                    } else {
                        None
                    }
                });
                self.pop_temp();
                result.ok_or_else(|| {
                    Error::SamplingFailed(format!(
                        "component {}: constrained sampling did not converge",
                        comp.id
                    ))
                })
            }
        }
    }

    fn push_temp(&mut self, c: ComponentSpec) -> usize {
        self.components.push(c);
        self.components.len() - 1
    }

    fn pop_temp(&mut self) {
        self.components.pop();
    }

    /// Truncated local dual space of the system at a sampled point.
    pub fn dual_at(&self, x: &Point, e: usize, cfg: &NumericalConfig) -> Result<DualBasis> {
        if x.dist(&self.suspect) < AVOID_DIST {
            return Err(Error::InvalidArgument(
                "dual_at: point is too close to the suspect point".into(),
            ));
        }
        truncated_dual(&self.system, x, e, cfg)
    }

    /// Does the component pass through `y`? Decided by solving the
    /// parametrization for `y` with Newton from several starts.
    pub fn component_contains(&mut self, id: &str, y: &Point) -> Result<bool> {
        let ci = self.component(id)?;
        let comp = self.components[ci].clone();
        match &comp.rep {
            Representation::PointList(pts) => Ok(pts
                .iter()
                .any(|p| p.dist(y) < 1e-6 * (1.0 + y.coords.len() as f64))),
            Representation::Parametrization(coords) => {
                let n = self.ring.nvars();
                for _ in 0..12 {
                    let start: Vec<Complex64> =
                        (0..comp.dim).map(|_| self.draw_unit_disc()).collect();
                    if let Some(t) = newton_solve_param(coords, &comp.constraints, y, start) {
                        let x: Vec<Complex64> = coords.iter().map(|c| c.evaluate(&t)).collect();
                        let d = Point::new(x).dist(y);
                        if d < 1e-7 * (1.0 + n as f64) {
                            return Ok(true);
                        }
                    }
                }
                Ok(false)
            }
        }
    }

    /// Intersection points of a parametrized component with affine forms of
    /// codimension equal to its dimension (used when slicing).
    pub fn slice_points(&mut self, id: &str, forms: &[Polynomial]) -> Result<Vec<Point>> {
        let ci = self.component(id)?;
        let mut comp = self.components[ci].clone();
        comp.constraints.extend(forms.iter().cloned());
        if comp.constraints.len() != comp.dim {
            return Err(Error::InvalidArgument(
                "slice_points: constraint count must match the component dimension".into(),
            ));
        }
        let Representation::Parametrization(_) = comp.rep else {
            return Err(Error::InvalidArgument(
                "slice_points needs a parametrization".into(),
            ));
        };
        let idx = self.push_temp(comp);
        let mut found: Vec<Point> = Vec::new();
        for _ in 0..30 {
            if let Ok(p) = self.raw_sample(idx) {
                if self.check_on_system(&p).is_ok() && found.iter().all(|q| q.dist(&p) > 1e-6) {
                    found.push(p);
                }
            }
        }
        self.pop_temp();
        Ok(found)
    }
}

fn newton_solve_param(
    coords: &[RationalExpr],
    constraints: &[Polynomial],
    y: &Point,
    start: Vec<Complex64>,
) -> Option<Vec<Complex64>> {
    let n = coords.len();
    let m = constraints.len();
    let dim = start.len();
    let mut t = start;
    for _ in 0..50 {
        let x: Vec<Complex64> = coords.iter().map(|c| c.evaluate(&t)).collect();
        let mut fval = CVec::zeros(n + m);
        for i in 0..n {
            fval[i] = x[i] - y.coords[i];
        }
        for (l, form) in constraints.iter().enumerate() {
            fval[n + l] = form.evaluate(&x);
        }
        if fval.norm() < 1e-12 {
            return Some(t);
        }
        let mut jac = CMat::zeros(n + m, dim);
        for j in 0..dim {
            for (i, coord) in coords.iter().enumerate() {
                jac[(i, j)] = coord.diff_value(j, &t);
            }
            for (l, form) in constraints.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, coord) in coords.iter().enumerate() {
                    let dfdx = form.diff(i).evaluate(&x);
                    if dfdx.norm() > 0.0 {
                        acc += dfdx * coord.diff_value(j, &t);
                    }
                }
                jac[(n + l, j)] = acc;
            }
        }
        let rhs = -fval;
        let step = linalg::solve_min_norm(&jac, &rhs, 1e-13)?;
        let mut moved = 0.0;
        for j in 0..dim {
            t[j] += step[j];
            moved += step[j].norm();
        }
        if !moved.is_finite() {
            return None;
        }
    }
    // accept slow convergence if the residual is already tiny
    let x: Vec<Complex64> = coords.iter().map(|c| c.evaluate(&t)).collect();
    let d: f64 = x
        .iter()
        .zip(&y.coords)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if d < 1e-9 {
        Some(t)
    } else {
        None
    }
}
