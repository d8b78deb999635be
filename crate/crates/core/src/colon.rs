//! Colon ideals through dual spaces and the local ideal membership test.
//!
//! The action of `g` maps `D_0[I]` onto `D_0[I : <g>]`. For truncated duals
//! this is exact only for homogeneous data, so the membership test runs on
//! the homogenized generators: `g^h . D_0^{d+e}[<F^h>]` equals the degree-d
//! truncation of the dual of `<F^h> : <g^h>`.

use crate::config::NumericalConfig;
use crate::dual::{poly_action, reduce_functionals, DualBasis, DualEngine, GradedDualEngine};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ring::ExpVec;

/// Span of `{g . q : q in B}`, reduced. When `B` is the truncated dual of a
/// homogeneous ideal and `g` is homogeneous of degree e, this is exactly the
/// order-(d-e) dual of the colon ideal; otherwise it is a subspace of it.
pub fn colon_dual(basis: &DualBasis, g: &Polynomial, cfg: &NumericalConfig) -> Result<DualBasis> {
    let moved: Vec<_> = basis
        .functionals
        .iter()
        .map(|q| poly_action(g, q))
        .filter(|q| !q.is_zero())
        .collect();
    let reduced = reduce_functionals(&basis.ring, &basis.basepoint, &moved, cfg.delta)?;
    let min_deg = g.terms.keys().map(|e| e.degree()).min().unwrap_or(0) as usize;
    let dim = reduced.len();
    Ok(DualBasis {
        ring: basis.ring.clone(),
        basepoint: basis.basepoint.clone(),
        functionals: reduced,
        order: basis.order.saturating_sub(min_deg),
        reduced: true,
        dims: vec![dim],
        warnings: basis.warnings.clone(),
    })
}

/// Local ideal membership: is `g` in `<F> R_0`?
///
/// Runs two tests per degree d. Unequal truncated dual dimensions of `<F>`
/// and `<F> + <g>` certify non-membership. The colon dual of the homogenized
/// system certifies membership once the monomial `h^d` shows up in the
/// initial ideal of `<F^h> : <g^h>`. Hitting `cfg.max_degree` first is
/// reported as inconclusive, distinct from `false`.
pub fn ideal_membership(
    gens: &[Polynomial],
    g: &Polynomial,
    cfg: &NumericalConfig,
) -> Result<bool> {
    if g.is_zero() {
        return Ok(true);
    }
    let ring = gens
        .first()
        .map(|f| f.ring.clone())
        .ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?;

    let mut engine_i = DualEngine::at_origin(&ring, gens.to_vec(), cfg.delta);
    let mut with_g = gens.to_vec();
    with_g.push(g.clone());
    let mut engine_ig = DualEngine::at_origin(&ring, with_g, cfg.delta);

    let rh = ring.homogenized()?;
    let homog: Vec<Polynomial> = gens
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| f.homogenize(&rh))
        .collect::<Result<_>>()?;
    let mut engine_h = GradedDualEngine::new(&rh, homog, cfg.delta);
    let gh = g.homogenize(&rh)?;

    for d in 0..=cfg.max_degree {
        if engine_i.dim(d) != engine_ig.dim(d) {
            return Ok(false);
        }
        let layer = engine_h.colon_layer(&gh, d);
        let mut hd = vec![0u32; rh.nvars()];
        hd[rh.nvars() - 1] = d as u32;
        let hd = ExpVec(hd);
        if layer.initial_monomials.contains(&hd) {
            return Ok(true);
        }
    }
    Err(Error::Inconclusive(format!(
        "membership test still undecided at degree {}",
        cfg.max_degree
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{truncated_dual, Point};
    use crate::parse::parse_poly;
    use crate::ring::ring;
    use num_complex::Complex64;

    fn cfg() -> NumericalConfig {
        NumericalConfig::default()
    }

    #[test]
    fn colon_dual_examples() {
        let r = ring(&["x", "y"]);
        // dual of <y, x^3> at 0 is {d0, dx, dx^2}; colon by x shifts down
        let gens = vec![parse_poly("y", &r).unwrap(), parse_poly("x^3", &r).unwrap()];
        let b = truncated_dual(&gens, &Point::origin(2), 3, &cfg()).unwrap();
        assert_eq!(b.dim(), 3);
        let x = parse_poly("x", &r).unwrap();
        let c = colon_dual(&b, &x, &cfg()).unwrap();
        let inits = c.initial_exponents().unwrap();
        assert_eq!(inits, vec![ExpVec(vec![0, 0]), ExpVec(vec![1, 0])]);
        // g = 1 acts as the identity
        let one = Polynomial::one(&r);
        let c1 = colon_dual(&b, &one, &cfg()).unwrap();
        assert_eq!(c1.dim(), 3);
    }

    #[test]
    fn colon_of_homogenized_cusp_by_curve_equation() {
        // <F^h> : <(y^2-x^3)^h> has x and y as degree-1 corners
        let r = ring(&["x", "y"]);
        let rh = r.homogenized().unwrap();
        let gens: Vec<Polynomial> = ["x(y^2-x^3)", "y(y^2-x^3)"]
            .iter()
            .map(|s| parse_poly(s, &r).unwrap().homogenize(&rh).unwrap())
            .collect();
        let mut engine = GradedDualEngine::new(&rh, gens, 1e-8);
        let g = parse_poly("y^2 - x^3", &r)
            .unwrap()
            .homogenize(&rh)
            .unwrap();
        let layer = engine.colon_layer(&g, 1);
        // at degree <= 1 the colon's initial ideal contains x and y but not h
        assert!(layer.initial_monomials.contains(&ExpVec(vec![1, 0, 0])));
        assert!(layer.initial_monomials.contains(&ExpVec(vec![0, 1, 0])));
        assert!(!layer.initial_monomials.contains(&ExpVec(vec![0, 0, 1])));
    }

    #[test]
    fn membership_trivial_cases() {
        let r = ring(&["x", "y"]);
        let f = vec![parse_poly("x", &r).unwrap()];
        let x = parse_poly("x", &r).unwrap();
        assert_eq!(ideal_membership(&f, &x, &cfg()).unwrap(), true);

        let f2 = vec![parse_poly("x^2", &r).unwrap()];
        assert_eq!(ideal_membership(&f2, &x, &cfg()).unwrap(), false);
    }

    #[test]
    fn membership_curve_equation_not_in_cusp_ideal() {
        let r = ring(&["x", "y"]);
        let gens = vec![
            parse_poly("x(y^2-x^3)", &r).unwrap(),
            parse_poly("y(y^2-x^3)", &r).unwrap(),
        ];
        let g = parse_poly("y^2 - x^3", &r).unwrap();
        assert_eq!(ideal_membership(&gens, &g, &cfg()).unwrap(), false);
    }

    #[test]
    fn membership_generator_closure() {
        use rand::{Rng, SeedableRng};
        let r = ring(&["x", "y"]);
        let gens = vec![
            parse_poly("x(y^2-x^3)", &r).unwrap(),
            parse_poly("y(y^2-x^3)", &r).unwrap(),
        ];
        for f in &gens {
            assert_eq!(ideal_membership(&gens, f, &cfg()).unwrap(), true);
        }
        // random polynomial combinations of the generators are members
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            let mut combo = Polynomial::zero(&r);
            for f in &gens {
                let mut a = Polynomial::zero(&r);
                for _ in 0..3 {
                    let e = ExpVec(vec![rng.gen_range(0..3), rng.gen_range(0..3)]);
                    a.add_term(
                        e,
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    );
                }
                combo = combo.add(&a.mul(f));
            }
            assert_eq!(ideal_membership(&gens, &combo, &cfg()).unwrap(), true);
        }
    }

    #[test]
    fn membership_golden_nonmembers() {
        let r = ring(&["x", "y"]);
        let gens = vec![
            parse_poly("x(y^2-x^3)", &r).unwrap(),
            parse_poly("y(y^2-x^3)", &r).unwrap(),
        ];
        for s in ["x^3", "y^2", "x y", "x^2"] {
            let g = parse_poly(s, &r).unwrap();
            assert_eq!(ideal_membership(&gens, &g, &cfg()).unwrap(), false, "{}", s);
        }
    }

    #[test]
    fn colon_containment_pairing() {
        // every element of x_i . D^{d+1}[I] annihilates (I : x_i) up to degree d;
        // spot-check with the known colon <x^2, xy> : x = <x, y>
        let r = ring(&["x", "y"]);
        let gens = vec![
            parse_poly("x^2", &r).unwrap(),
            parse_poly("x y", &r).unwrap(),
        ];
        let b = truncated_dual(&gens, &Point::origin(2), 4, &cfg()).unwrap();
        let x = parse_poly("x", &r).unwrap();
        let c = colon_dual(&b, &x, &cfg()).unwrap();
        // colon ideal is <x, y>: its annihilator is spanned by d0 only
        for q in &c.functionals {
            for gen in ["x", "y"] {
                let f = parse_poly(gen, &r).unwrap();
                let v = crate::dual::apply(q, &f).unwrap();
                assert!(v.norm() < 1e-8);
            }
        }
        assert_eq!(c.dim(), 1);
    }
}
