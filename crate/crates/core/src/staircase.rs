//! Local Hilbert data: initial-ideal staircases, g- and s-corners,
//! regularity index and multiplicity.
//!
//! The g-corner computation homogenizes the generators, reads the initial
//! ideal of `<F^h>` degree by degree from reduced dual layers (the monomial
//! lattice splits into dual initial terms and ideal initial terms), and
//! dehomogenizes the resulting generator set.

use std::collections::HashSet;

use serde::Serialize;

use crate::config::NumericalConfig;
use crate::dual::{GradedDualEngine, Point};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ring::{monomials_of_degree, ExpVec, Ring};

/// Monomial staircase of an initial ideal, stored by its minimal generators.
#[derive(Debug, Clone)]
pub struct Staircase {
    pub ring: Ring,
    pub gcorners: Vec<ExpVec>,
    /// Degree up to which dual layers were inspected.
    pub depth: usize,
}

impl Staircase {
    /// Build from any monomial set by extracting minimal generators.
    pub fn from_monomials(ring: &Ring, monos: &[ExpVec], depth: usize) -> Self {
        let set: HashSet<&ExpVec> = monos.iter().collect();
        let mut corners: Vec<ExpVec> = monos
            .iter()
            .filter(|m| !monos.iter().any(|other| *other != **m && other.divides(m)))
            .cloned()
            .collect();
        let _ = set;
        corners.sort();
        corners.dedup();
        Staircase {
            ring: ring.clone(),
            gcorners: corners,
            depth,
        }
    }

    /// Membership in the monomial ideal.
    pub fn contains(&self, m: &ExpVec) -> bool {
        self.gcorners.iter().any(|c| c.divides(m))
    }

    /// Standard monomials of degree exactly `k`.
    pub fn standard_count(&self, k: u32) -> usize {
        monomials_of_degree(self.nvars(), k)
            .into_iter()
            .filter(|m| !self.contains(m))
            .count()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    /// Combinatorial dimension of the quotient: the largest variable subset
    /// `S` such that no corner is supported inside `S`.
    pub fn dimension(&self) -> usize {
        let n = self.nvars();
        if self.gcorners.iter().any(|c| c.is_zero()) {
            return 0; // unit ideal
        }
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let inside = |c: &ExpVec| c.support().all(|i| mask & (1 << i) != 0);
            if !self.gcorners.iter().any(inside) {
                best = size;
            }
        }
        best
    }

    /// s-corners: monomials outside the ideal all of whose variable multiples
    /// lie inside. Finite; `bound` truncates the search degree as a guard.
    pub fn scorners(&self, bound: u32) -> Vec<ExpVec> {
        let n = self.nvars();
        if self.gcorners.is_empty() {
            return Vec::new();
        }
        // any s-corner exponent is bounded by the corner exponents
        let mut boxmax = vec![0u32; n];
        for c in &self.gcorners {
            for (i, &a) in c.0.iter().enumerate() {
                boxmax[i] = boxmax[i].max(a);
            }
        }
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(
            i: usize,
            boxmax: &[u32],
            cur: &mut Vec<u32>,
            st: &Staircase,
            bound: u32,
            out: &mut Vec<ExpVec>,
        ) {
            if i == boxmax.len() {
                let m = ExpVec(cur.clone());
                if m.degree() > bound || st.contains(&m) {
                    return;
                }
                let n = boxmax.len();
                let all_in = (0..n).all(|j| {
                    let mut up = m.clone();
                    up.0[j] += 1;
                    st.contains(&up)
                });
                if all_in {
                    out.push(m);
                }
                return;
            }
            for a in 0..=boxmax[i] {
                cur[i] = a;
                rec(i + 1, boxmax, cur, st, bound, out);
            }
            cur[i] = 0;
        }
        rec(0, &boxmax, &mut cur, self, bound, &mut out);
        out.sort();
        out
    }

    pub fn corner_strings(&self) -> Vec<String> {
        self.gcorners
            .iter()
            .map(|c| self.ring.monomial_string(c))
            .collect()
    }
}

/// Hilbert statistics of a staircase.
#[derive(Debug, Clone, Serialize)]
pub struct HilbertData {
    /// Standard-monomial counts `H(0..)` up to the regularity window.
    pub values: Vec<usize>,
    pub regularity: usize,
    pub multiplicity: usize,
    /// Dimension `d` of the local ring; the Hilbert polynomial has degree `d - 1`.
    pub dimension: usize,
    /// Leading coefficient `a_{d-1}` of the Hilbert polynomial (0 when d = 0).
    pub hp_leading: f64,
}

/// Hilbert function `H_I(k)` at `y` as the first difference of truncated dual
/// dimensions.
pub fn hilbert_function(
    gens: &[Polynomial],
    y: &Point,
    k: usize,
    cfg: &NumericalConfig,
) -> Result<usize> {
    Ok(*hilbert_values(gens, y, k, cfg)?.last().unwrap())
}

/// `H_I(0), ..., H_I(k)` from one incremental dual computation.
pub fn hilbert_values(
    gens: &[Polynomial],
    y: &Point,
    k: usize,
    cfg: &NumericalConfig,
) -> Result<Vec<usize>> {
    let basis = crate::dual::truncated_dual(gens, y, k, cfg)?;
    let mut out = Vec::with_capacity(k + 1);
    let mut prev = 0;
    for &d in &basis.dims {
        out.push(d - prev);
        prev = d;
    }
    Ok(out)
}

/// g-corners of the initial ideal of `<F>` localized at `y`.
///
/// Homogenizes the translated generators, walks dual layers of `<F^h>` for
/// increasing degree, extracts the corners visible so far, and stops once the
/// corner set has been stable for two full degrees past the generator degree.
/// Hitting `cfg.max_degree` first yields an incomplete-staircase error
/// carrying the partial corners.
pub fn gcorners(gens: &[Polynomial], y: &Point, cfg: &NumericalConfig) -> Result<Staircase> {
    let ring = gens
        .first()
        .map(|f| f.ring.clone())
        .ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?;
    for f in gens {
        let r = f.evaluate(&y.coords).norm();
        let tol = crate::config::ON_VARIETY_TOL * (1.0 + f.coeff_norm());
        if r > tol {
            return Err(Error::NotOnVariety { residual: r, tol });
        }
    }
    let local: Vec<Polynomial> = if y.is_origin() {
        gens.to_vec()
    } else {
        gens.iter().map(|f| f.translate(&y.coords)).collect()
    };
    let rh = ring.homogenized()?;
    let homog: Vec<Polynomial> = local
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| f.homogenize(&rh))
        .collect::<Result<_>>()?;

    // exactly-linear generators contribute their lead variable as a corner;
    // substituting their tails shrinks the ambient ring for the dual layers
    let (red_ring, red_gens, kept, linear_corners) = eliminate_linear(&rh, homog, cfg.delta);
    let mut engine = GradedDualEngine::new(&red_ring, red_gens, cfg.delta);
    let corners_red = homog_corners(&mut engine, gens, cfg)?;

    // lift reduced-ring corners back, join the eliminated lead variables,
    // dehomogenize, and extract minimal generators
    let nh = rh.nvars();
    let mut corners_h: Vec<ExpVec> = linear_corners;
    for c in &corners_red {
        let mut full = vec![0u32; nh];
        for (ri, &oi) in kept.iter().enumerate() {
            full[oi] = c.0[ri];
        }
        corners_h.push(ExpVec(full));
    }
    let n = ring.nvars();
    let dehom: Vec<ExpVec> = corners_h
        .iter()
        .map(|c| ExpVec(c.0[..n].to_vec()))
        .collect();
    Ok(Staircase::from_monomials(
        &ring,
        &dehom,
        engine_depth(&corners_h),
    ))
}

/// Split off the exactly-linear generators of a homogeneous system. Each
/// contributes its lead variable to the initial ideal; substituting its tail
/// into the remaining generators yields an equivalent system in fewer
/// variables with the complementary staircase. (Lead variables beat every
/// variable in their tail under the degree-wise revlex comparison, so
/// substituted monomials stay below the ones they replace and initial terms
/// are preserved.)
fn eliminate_linear(
    rh: &Ring,
    gens: Vec<Polynomial>,
    delta: f64,
) -> (Ring, Vec<Polynomial>, Vec<usize>, Vec<ExpVec>) {
    let nh = rh.nvars();
    let linear: Vec<&Polynomial> = gens.iter().filter(|f| f.degree() == 1).collect();
    if linear.is_empty() {
        return (rh.clone(), gens, (0..nh).collect(), Vec::new());
    }
    // reduce the linear forms against each other (coefficients over the
    // degree-1 monomials, primal-descending priority)
    let mut monos = monomials_of_degree(nh, 1);
    monos.sort_by(|a, b| rh.cmp_primal(a, b).reverse());
    let mut m = crate::linalg::CMat::zeros(monos.len(), linear.len());
    for (j, f) in linear.iter().enumerate() {
        for (i, e) in monos.iter().enumerate() {
            m[(i, j)] = f.coeff(e);
        }
    }
    let span = crate::linalg::kernel(&m.adjoint(), delta).row_space;
    let priority: Vec<usize> = (0..monos.len()).collect();
    let (vecs, leads) = crate::linalg::rref_columns(&span, &priority, delta);

    let mut replacement: Vec<Option<Polynomial>> = vec![None; nh];
    let mut linear_corners = Vec::new();
    for (v, &lead) in vecs.iter().zip(&leads) {
        let lead_exp = &monos[lead];
        let var = lead_exp.support().next().expect("degree-1 lead");
        debug_assert!(
            var != nh - 1,
            "proper local ideals have h-free linear parts"
        );
        let mut tail = Polynomial::zero(rh);
        for (i, c) in v.iter().enumerate() {
            if i != lead && c.norm() > 0.0 {
                tail.add_term(monos[i].clone(), -c);
            }
        }
        replacement[var] = Some(tail);
        linear_corners.push(lead_exp.clone());
    }

    let kept: Vec<usize> = (0..nh).filter(|i| replacement[*i].is_none()).collect();
    let red_names: Vec<String> = kept.iter().map(|&i| rh.names[i].clone()).collect();
    let red_ring = std::sync::Arc::new(crate::ring::RingData {
        names: red_names,
        homog: true,
    });

    let mut red_gens = Vec::new();
    for f in &gens {
        if f.degree() == 1 {
            continue;
        }
        let mut g = f.clone();
        for (var, rep) in replacement.iter().enumerate() {
            if let Some(rep) = rep {
                g = g.substitute(var, rep);
            }
        }
        if g.is_zero() {
            continue;
        }
        // project exponents onto the kept variables
        let mut out = Polynomial::zero(&red_ring);
        for (e, c) in &g.terms {
            let proj = ExpVec(kept.iter().map(|&i| e.0[i]).collect());
            out.add_term(proj, *c);
        }
        red_gens.push(out);
    }
    (red_ring, red_gens, kept, linear_corners)
}

fn engine_depth(corners: &[ExpVec]) -> usize {
    corners
        .iter()
        .map(|c| c.degree() as usize)
        .max()
        .unwrap_or(0)
}

/// Corner loop on the homogenized engine.
///
/// Stops once no degree past the generator degrees has contributed a new
/// corner for three consecutive layers. Cancellation chains in the
/// homogenized ideal surface new corners every other degree, so a window of
/// two is exactly marginal; three keeps those chains alive while deeper gaps
/// hit the degree cap and surface as an incomplete staircase.
fn homog_corners(
    engine: &mut GradedDualEngine,
    orig: &[Polynomial],
    cfg: &NumericalConfig,
) -> Result<Vec<ExpVec>> {
    let floor = orig.iter().map(|f| f.degree()).max().unwrap_or(0) as usize + 1;
    let mut in_set: HashSet<ExpVec> = HashSet::new();
    let mut corners: Vec<ExpVec> = Vec::new();
    let mut quiet = 0usize;
    for k in 1..=cfg.max_degree {
        for m in &engine.layer(k).initial_monomials {
            in_set.insert(m.clone());
        }
        let new_corners: Vec<ExpVec> = in_set
            .iter()
            .filter(|m| {
                m.support().all(|i| {
                    let mut down = (*m).clone();
                    down.0[i] -= 1;
                    !in_set.contains(&down)
                })
            })
            .cloned()
            .collect();
        let mut new_corners = new_corners;
        new_corners.sort();
        if new_corners == corners {
            quiet += 1;
        } else {
            quiet = 0;
        }
        corners = new_corners;
        if k > floor && quiet >= 3 {
            return Ok(corners);
        }
    }
    Err(Error::IncompleteStaircase {
        reached: cfg.max_degree,
        partial: corners.iter().map(|c| format!("{}", c)).collect(),
    })
}

/// Full Hilbert statistics: counts, regularity index, multiplicity.
pub fn staircase_stats(
    gens: &[Polynomial],
    y: &Point,
    cfg: &NumericalConfig,
) -> Result<HilbertData> {
    let st = gcorners(gens, y, cfg)?;
    stats_of_staircase(&st)
}

/// Statistics straight from a (complete) staircase.
pub fn stats_of_staircase(st: &Staircase) -> Result<HilbertData> {
    let d = st.dimension();
    let maxdeg = st.gcorners.iter().map(|c| c.degree()).max().unwrap_or(0);
    if d == 0 {
        let mut values = Vec::new();
        let mut k = 0u32;
        loop {
            let c = st.standard_count(k);
            values.push(c);
            if c == 0 {
                break;
            }
            k += 1;
        }
        let multiplicity: usize = values.iter().sum();
        let rho = st
            .scorners(maxdeg.max(1) * st.nvars() as u32 + 1)
            .iter()
            .map(|s| s.degree() as usize)
            .max()
            .map(|m| m + 1)
            .unwrap_or(0);
        return Ok(HilbertData {
            values,
            regularity: rho,
            multiplicity,
            dimension: 0,
            hp_leading: 0.0,
        });
    }

    // positive dimension: counts eventually agree with a degree-(d-1)
    // polynomial; detect via vanishing d-th finite differences
    let mut top = (maxdeg as usize + st.nvars() + 2 * d + 2) as u32;
    loop {
        let values: Vec<i64> = (0..=top).map(|k| st.standard_count(k) as i64).collect();
        // difference table
        let mut diffs = vec![values.clone()];
        for _ in 0..d {
            let prev = diffs.last().unwrap();
            diffs.push(prev.windows(2).map(|w| w[1] - w[0]).collect());
        }
        let dth = &diffs[d];
        let window = 2 * d + 1;
        if dth.len() >= window && dth[dth.len() - window..].iter().all(|&v| v == 0) {
            // regularity: first index from which all d-th differences vanish
            let mut rho = dth.len();
            while rho > 0 && dth[rho - 1] == 0 {
                rho -= 1;
            }
            let mu = *diffs[d - 1].last().unwrap() as usize;
            let fact: f64 = (1..d).map(|i| i as f64).product::<f64>().max(1.0);
            let values_usize: Vec<usize> = values.iter().map(|&v| v as usize).collect();
            return Ok(HilbertData {
                values: values_usize,
                regularity: rho,
                multiplicity: mu,
                dimension: d,
                hp_leading: mu as f64 / fact,
            });
        }
        top += 4;
        if top > 200 {
            return Err(Error::Inconclusive(
                "Hilbert polynomial did not stabilize within degree 200".into(),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::ring::ring;

    fn cfg() -> NumericalConfig {
        NumericalConfig::default()
    }

    #[test]
    fn hilbert_values_examples() {
        let r = ring(&["x", "y"]);
        let gens = vec![
            parse_poly("x(y^2-x^3)", &r).unwrap(),
            parse_poly("y(y^2-x^3)", &r).unwrap(),
        ];
        let h = hilbert_values(&gens, &Point::origin(2), 4, &cfg()).unwrap();
        assert_eq!(h, vec![1, 2, 3, 2, 2]);

        let maximal = vec![parse_poly("x", &r).unwrap(), parse_poly("y", &r).unwrap()];
        assert_eq!(
            hilbert_function(&maximal, &Point::origin(2), 1, &cfg()).unwrap(),
            0
        );

        let smooth = vec![parse_poly("x^2 + y", &r).unwrap()];
        let h = hilbert_values(&smooth, &Point::origin(2), 3, &cfg()).unwrap();
        assert_eq!(h, vec![1, 1, 1, 1]);
    }

    #[test]
    fn monomial_ideal_is_fixed_point() {
        let r = ring(&["x", "y"]);
        let gens = vec![
            parse_poly("x^3", &r).unwrap(),
            parse_poly("x^2 y^2", &r).unwrap(),
            parse_poly("y^4", &r).unwrap(),
        ];
        let st = gcorners(&gens, &Point::origin(2), &cfg()).unwrap();
        assert_eq!(
            st.gcorners,
            vec![ExpVec(vec![0, 4]), ExpVec(vec![2, 2]), ExpVec(vec![3, 0])]
        );
    }

    #[test]
    fn monomial_ideal_with_degree_gap() {
        let r = ring(&["x", "y"]);
        let gens = vec![parse_poly("x", &r).unwrap(), parse_poly("y^5", &r).unwrap()];
        let st = gcorners(&gens, &Point::origin(2), &cfg()).unwrap();
        assert_eq!(st.gcorners, vec![ExpVec(vec![0, 5]), ExpVec(vec![1, 0])]);
    }

    #[test]
    fn maximal_ideal_corners() {
        let r = ring(&["x", "y"]);
        let gens = vec![parse_poly("x", &r).unwrap(), parse_poly("y", &r).unwrap()];
        let st = gcorners(&gens, &Point::origin(2), &cfg()).unwrap();
        assert_eq!(st.gcorners, vec![ExpVec(vec![0, 1]), ExpVec(vec![1, 0])]);
        assert_eq!(st.scorners(4), vec![ExpVec(vec![0, 0])]);
        let stats = stats_of_staircase(&st).unwrap();
        assert_eq!(stats.regularity, 1);
        assert_eq!(stats.multiplicity, 1);
    }

    #[test]
    fn cusp_union_axis_corners_golden() {
        // initial ideal of <x(y^2-x^3), y(y^2-x^3)> is <x y^2, y^3>
        let r = ring(&["x", "y"]);
        let gens = vec![
            parse_poly("x(y^2-x^3)", &r).unwrap(),
            parse_poly("y(y^2-x^3)", &r).unwrap(),
        ];
        let st = gcorners(&gens, &Point::origin(2), &cfg()).unwrap();
        assert_eq!(st.gcorners, vec![ExpVec(vec![0, 3]), ExpVec(vec![1, 2])]);
        // dimension 1, socle at y^2
        assert_eq!(st.dimension(), 1);
        assert_eq!(st.scorners(10), vec![ExpVec(vec![0, 2])]);
    }

    #[test]
    fn staircase_stats_examples() {
        let r = ring(&["x", "y"]);
        // the monomial staircase with rho_0 = 5
        let gens = vec![
            parse_poly("x^3", &r).unwrap(),
            parse_poly("x^2 y^2", &r).unwrap(),
            parse_poly("y^4", &r).unwrap(),
        ];
        let stats = staircase_stats(&gens, &Point::origin(2), &cfg()).unwrap();
        assert_eq!(stats.regularity, 5);
        assert_eq!(stats.multiplicity, 10);
        assert_eq!(stats.dimension, 0);
        let st = gcorners(&gens, &Point::origin(2), &cfg()).unwrap();
        assert_eq!(
            st.scorners(20),
            vec![ExpVec(vec![1, 3]), ExpVec(vec![2, 1])]
        );

        // smooth curve point: constant Hilbert polynomial 1
        let smooth = vec![parse_poly("x^2 + y", &r).unwrap()];
        let stats = staircase_stats(&smooth, &Point::origin(2), &cfg()).unwrap();
        assert_eq!(stats.dimension, 1);
        assert_eq!(stats.multiplicity, 1);
        assert_eq!(stats.hp_leading, 1.0);
    }

    #[test]
    fn deep_corner_chain_is_followed() {
        // <x^3 + y, y^3> in three variables: homogenized cancellations expose
        // corners at degrees 3, 5, 7, 9; the staircase is <y, x^9>
        let r = ring(&["x", "y", "z"]);
        let gens = vec![
            parse_poly("x^3 + y", &r).unwrap(),
            parse_poly("y^3", &r).unwrap(),
        ];
        let st = gcorners(&gens, &Point::origin(3), &cfg()).unwrap();
        assert_eq!(
            st.gcorners,
            vec![ExpVec(vec![0, 1, 0]), ExpVec(vec![9, 0, 0])]
        );
        let stats = stats_of_staircase(&st).unwrap();
        assert_eq!(stats.dimension, 1);
        assert_eq!(stats.multiplicity, 9);
    }

    #[test]
    fn too_deep_chain_reports_incomplete() {
        // the k = 4 member of the same family needs corners past the degree
        // cap; this must surface as an explicit incomplete staircase
        let r = ring(&["x", "y", "z"]);
        let gens = vec![
            parse_poly("x^4 + y", &r).unwrap(),
            parse_poly("y^4", &r).unwrap(),
        ];
        match gcorners(&gens, &Point::origin(3), &cfg()) {
            Err(Error::IncompleteStaircase { .. }) => {}
            other => panic!("expected incomplete staircase, got {:?}", other),
        }
    }

    #[test]
    fn complementary_staircase_counts() {
        // at every degree, standard monomials + initial-ideal monomials fill the lattice
        let r = ring(&["x", "y"]);
        let gens = vec![
            parse_poly("x(y^2-x^3)", &r).unwrap(),
            parse_poly("y(y^2-x^3)", &r).unwrap(),
        ];
        let st = gcorners(&gens, &Point::origin(2), &cfg()).unwrap();
        let h = hilbert_values(&gens, &Point::origin(2), 6, &cfg()).unwrap();
        for k in 0..=6u32 {
            let standard = st.standard_count(k);
            let inside = monomials_of_degree(2, k).len() - standard;
            assert_eq!(standard + inside, (k as usize) + 1);
            // Hilbert function from duals equals standard-monomial counts
            assert_eq!(h[k as usize], standard, "degree {}", k);
        }
    }

    #[test]
    fn random_monomial_ideals_round_trip() {
        use rand::{Rng, SeedableRng};
        let r = ring(&["x", "y", "z"]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..6 {
            let mut monos = Vec::new();
            for _ in 0..4 {
                let e = ExpVec(vec![
                    rng.gen_range(0..4),
                    rng.gen_range(0..4),
                    rng.gen_range(0..3),
                ]);
                if !e.is_zero() {
                    monos.push(e);
                }
            }
            if monos.is_empty() {
                continue;
            }
            let expected = Staircase::from_monomials(&r, &monos, 0);
            let gens: Vec<Polynomial> = monos
                .iter()
                .map(|e| Polynomial::monomial(&r, e.clone(), num_complex::Complex64::new(1.0, 0.0)))
                .collect();
            let st = gcorners(&gens, &Point::origin(3), &cfg()).unwrap();
            assert_eq!(st.gcorners, expected.gcorners, "input {:?}", monos);
        }
    }
}
