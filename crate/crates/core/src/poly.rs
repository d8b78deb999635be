//! Sparse multivariate polynomials over complex double-precision coefficients.
//!
//! Zero coefficients are never stored; only exact structural cancellation
//! removes a term. Numerical near-zeros are left to downstream SVD thresholds.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ring::{ExpVec, Ring};

#[derive(Debug, Clone)]
pub struct Polynomial {
    pub ring: Ring,
    /// term map exponent -> coefficient; no zero coefficients stored
    pub terms: BTreeMap<ExpVec, Complex64>,
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Ring, c: Complex64) -> Self {
        let mut p = Polynomial::zero(ring);
        p.add_term(ExpVec::zero(ring.nvars()), c);
        p
    }

    pub fn one(ring: &Ring) -> Self {
        Polynomial::constant(ring, Complex64::new(1.0, 0.0))
    }

    pub fn variable(ring: &Ring, i: usize) -> Self {
        let mut p = Polynomial::zero(ring);
        p.add_term(ExpVec::unit(ring.nvars(), i), Complex64::new(1.0, 0.0));
        p
    }

    pub fn monomial(ring: &Ring, e: ExpVec, c: Complex64) -> Self {
        let mut p = Polynomial::zero(ring);
        p.add_term(e, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.degree()).max().unwrap_or(0)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn add_term(&mut self, e: ExpVec, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s == Complex64::new(0.0, 0.0) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        if c == Complex64::new(0.0, 0.0) {
            return out;
        }
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.mul(e2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, e: &ExpVec, c: Complex64) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (e1, c1) in &self.terms {
            out.add_term(e1.mul(e), c1 * c);
        }
        out
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = *c;
            for (i, &a) in e.0.iter().enumerate() {
                if a > 0 {
                    m *= point[i].powu(a);
                }
            }
            acc += m;
        }
        acc
    }

    /// Plain partial derivative with respect to variable `i`.
    pub fn diff(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (e, c) in &self.terms {
            if e.0[i] > 0 {
                let mut e2 = e.clone();
                e2.0[i] -= 1;
                out.add_term(e2, c * Complex64::new(e.0[i] as f64, 0.0));
            }
        }
        out
    }

    /// Normalized derivative `(1/a!) d^a f`; on monomials
    /// `x^b -> binom(b, a) x^(b-a)`.
    pub fn diff_normalized(&self, alpha: &ExpVec) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (e, c) in &self.terms {
            if let Some(rest) = e.checked_sub(alpha) {
                let mut b = 1.0f64;
                for (bi, ai) in e.0.iter().zip(&alpha.0) {
                    b *= binom(*bi, *ai);
                }
                out.add_term(rest, c * Complex64::new(b, 0.0));
            }
        }
        out
    }

    /// Taylor shift: returns `g(u) = f(u + c)`.
    pub fn translate(&self, shift: &[Complex64]) -> Polynomial {
        let n = self.ring.nvars();
        assert_eq!(shift.len(), n);
        let mut out = Polynomial::zero(&self.ring);
        for (e, c) in &self.terms {
            // expand prod_i (u_i + c_i)^{a_i}
            let mut partial: Vec<(ExpVec, Complex64)> = vec![(ExpVec::zero(n), *c)];
            for (i, &a) in e.0.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let mut next = Vec::with_capacity(partial.len() * (a as usize + 1));
                for (pe, pc) in &partial {
                    for k in 0..=a {
                        let mut ne = pe.clone();
                        ne.0[i] += k;
                        let coef = pc * Complex64::new(binom(a, k), 0.0) * shift[i].powu(a - k);
                        next.push((ne, coef));
                    }
                }
                partial = next;
            }
            for (ne, nc) in partial {
                out.add_term(ne, nc);
            }
        }
        out
    }

    /// Initial term under the ring's primal order: the largest monomial
    /// carrying a nonzero coefficient. Errors on the zero polynomial.
    pub fn initial_exponent(&self) -> Result<ExpVec> {
        let mut best: Option<&ExpVec> = None;
        for e in self.terms.keys() {
            best = Some(match best {
                None => e,
                Some(m) => {
                    if self.ring.cmp_primal(e, m) == std::cmp::Ordering::Greater {
                        e
                    } else {
                        m
                    }
                }
            });
        }
        best.cloned().ok_or(Error::ZeroPolynomial)
    }

    /// Homogenize into `R[h]`; the result is homogeneous of degree `deg f`.
    pub fn homogenize(&self, target: &Ring) -> Result<Polynomial> {
        if self.ring.homog {
            return Err(Error::AlreadyHomogenized);
        }
        debug_assert_eq!(target.nvars(), self.ring.nvars() + 1);
        let d = self.degree();
        let mut out = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut v = e.0.clone();
            v.push(d - e.degree());
            out.add_term(ExpVec(v), *c);
        }
        Ok(out)
    }

    /// Dehomogenize: send `h -> 1` and combine terms.
    pub fn dehomogenize(&self, target: &Ring) -> Result<Polynomial> {
        if !self.ring.homog {
            return Err(Error::NotHomogenized);
        }
        let n = self.ring.nvars() - 1;
        debug_assert_eq!(target.nvars(), n);
        let mut out = Polynomial::zero(target);
        for (e, c) in &self.terms {
            out.add_term(ExpVec(e.0[..n].to_vec()), *c);
        }
        Ok(out)
    }

    /// Coefficient of a given monomial (0 if absent).
    pub fn coeff(&self, e: &ExpVec) -> Complex64 {
        self.terms
            .get(e)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Substitute a polynomial for one variable.
    pub fn substitute(&self, var: usize, rep: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        let mut powers: Vec<Polynomial> = vec![Polynomial::one(&self.ring)];
        for (e, c) in &self.terms {
            let a = e.0[var] as usize;
            while powers.len() <= a {
                powers.push(powers.last().unwrap().mul(rep));
            }
            let mut rest = e.clone();
            rest.0[var] = 0;
            for (pe, pc) in &powers[a].terms {
                out.add_term(rest.mul(pe), c * pc);
            }
        }
        out
    }

    /// Terms in primal-descending order (largest monomial first).
    pub fn ordered_terms(&self) -> Vec<(&ExpVec, &Complex64)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| self.ring.cmp_primal(a.0, b.0).reverse());
        v
    }
}

pub fn binom(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

fn fmt_coeff(c: Complex64, f: &mut fmt::Formatter<'_>, lead: bool) -> fmt::Result {
    let (re, im) = (c.re, c.im);
    if im == 0.0 {
        if re < 0.0 {
            write!(f, "{}{}", if lead { "-" } else { " - " }, fmt_f64(-re))
        } else {
            write!(f, "{}{}", if lead { "" } else { " + " }, fmt_f64(re))
        }
    } else if re == 0.0 {
        if im < 0.0 {
            write!(f, "{}{}i", if lead { "-" } else { " - " }, fmt_f64(-im))
        } else {
            write!(f, "{}{}i", if lead { "" } else { " + " }, fmt_f64(im))
        }
    } else {
        write!(
            f,
            "{}({}{}{}i)",
            if lead { "" } else { " + " },
            fmt_f64(re),
            if im < 0.0 { "-" } else { "+" },
            fmt_f64(im.abs())
        )
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{}", v)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.ordered_terms().into_iter().enumerate() {
            let unit = Complex64::new(1.0, 0.0);
            let m = self.ring.monomial_string(e);
            if e.is_zero() {
                fmt_coeff(*c, f, i == 0)?;
            } else if *c == unit {
                write!(f, "{}{}", if i == 0 { "" } else { " + " }, m)?;
            } else if *c == -unit {
                write!(f, "{}{}", if i == 0 { "-" } else { " - " }, m)?;
            } else {
                fmt_coeff(*c, f, i == 0)?;
                write!(f, "*{}", m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::ring::ring;
    use rand::Rng;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn homogenize_examples() {
        let r = ring(&["x", "y"]);
        let rh = r.homogenized().unwrap();
        // x^2 + y -> x^2 + y h
        let f = parse_poly("x^2 + y", &r).unwrap();
        let fh = f.homogenize(&rh).unwrap();
        assert_eq!(fh.coeff(&ExpVec(vec![2, 0, 0])), c(1.0, 0.0));
        assert_eq!(fh.coeff(&ExpVec(vec![0, 1, 1])), c(1.0, 0.0));
        assert_eq!(fh.terms.len(), 2);
        // constants are fixed points
        let one = Polynomial::one(&r);
        assert_eq!(
            one.homogenize(&rh).unwrap().coeff(&ExpVec::zero(3)),
            c(1.0, 0.0)
        );
        // x(y^2 - x^3) -> x y^2 h - x^4
        let g = parse_poly("x(y^2 - x^3)", &r).unwrap();
        let gh = g.homogenize(&rh).unwrap();
        assert_eq!(gh.coeff(&ExpVec(vec![1, 2, 1])), c(1.0, 0.0));
        assert_eq!(gh.coeff(&ExpVec(vec![4, 0, 0])), c(-1.0, 0.0));
        // homogenizing twice is an error
        assert!(gh.homogenize(&rh).is_err());
    }

    #[test]
    fn dehomogenize_examples() {
        let r = ring(&["x", "y"]);
        let rh = r.homogenized().unwrap();
        let f = Polynomial::monomial(&rh, ExpVec(vec![1, 0, 2]), c(1.0, 0.0));
        let g = f.dehomogenize(&r).unwrap();
        assert_eq!(g.coeff(&ExpVec(vec![1, 0])), c(1.0, 0.0));
        // h^3 -> 1
        let h3 = Polynomial::monomial(&rh, ExpVec(vec![0, 0, 3]), c(1.0, 0.0));
        assert_eq!(
            h3.dehomogenize(&r).unwrap().coeff(&ExpVec::zero(2)),
            c(1.0, 0.0)
        );
    }

    #[test]
    fn dehomogenize_inverts_homogenize() {
        let r = ring(&["x", "y", "z"]);
        let rh = r.homogenized().unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut f = Polynomial::zero(&r);
            for _ in 0..6 {
                let e = ExpVec(vec![
                    rng.gen_range(0..4),
                    rng.gen_range(0..4),
                    rng.gen_range(0..3),
                ]);
                f.add_term(e, c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)));
            }
            let fh = f.homogenize(&rh).unwrap();
            // homogeneous of degree deg f
            for e in fh.terms.keys() {
                assert_eq!(e.degree(), f.degree());
            }
            let back = fh.dehomogenize(&r).unwrap();
            assert_eq!(back.terms.len(), f.terms.len());
            for (e, co) in &f.terms {
                assert_eq!(back.coeff(e), *co);
            }
        }
    }

    #[test]
    fn initial_term_examples() {
        let r = ring(&["x", "y"]);
        // local order: y (degree 1) beats x^2
        let f = parse_poly("x^2 + y", &r).unwrap();
        assert_eq!(f.initial_exponent().unwrap(), ExpVec(vec![0, 1]));
        let g = parse_poly("x^3", &r).unwrap();
        assert_eq!(g.initial_exponent().unwrap(), ExpVec(vec![3, 0]));
        let h = parse_poly("1 + x", &r).unwrap();
        assert_eq!(h.initial_exponent().unwrap(), ExpVec(vec![0, 0]));
        assert!(Polynomial::zero(&r).initial_exponent().is_err());
    }

    #[test]
    fn ring_axioms_on_random_inputs() {
        let r = ring(&["x", "y"]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let mut polys = Vec::new();
            for _ in 0..3 {
                let mut f = Polynomial::zero(&r);
                for _ in 0..4 {
                    let e = ExpVec(vec![rng.gen_range(0..3), rng.gen_range(0..3)]);
                    f.add_term(e, c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
                }
                polys.push(f);
            }
            let (f, g, h) = (&polys[0], &polys[1], &polys[2]);
            let lhs = f.add(g).mul(h);
            let rhs = f.mul(h).add(&g.mul(h));
            let diff = lhs.sub(&rhs);
            let scale = 1.0 + lhs.coeff_norm();
            assert!(diff.coeff_norm() <= 1e-12 * scale);
            if !f.is_zero() && !g.is_zero() {
                let fg = f.mul(g);
                if !fg.is_zero() {
                    assert_eq!(fg.degree(), f.degree() + g.degree());
                }
            }
        }
    }

    #[test]
    fn translate_shifts_base_point() {
        let r = ring(&["x", "y"]);
        let f = parse_poly("x^2*y - 3*y + 2", &r).unwrap();
        let shift = [c(1.5, -0.5), c(-0.25, 2.0)];
        let g = f.translate(&shift);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let u = [
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ];
            let shifted = [u[0] + shift[0], u[1] + shift[1]];
            let a = g.evaluate(&u);
            let b = f.evaluate(&shifted);
            assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn display_round_trips_through_parser() {
        let r = ring(&["x", "y", "z"]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..30 {
            let mut f = Polynomial::zero(&r);
            for _ in 0..5 {
                let e = ExpVec(vec![
                    rng.gen_range(0..3),
                    rng.gen_range(0..3),
                    rng.gen_range(0..2),
                ]);
                f.add_term(e, c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
            }
            let s = format!("{}", f);
            let back = parse_poly(&s, &r).unwrap();
            let d = f.sub(&back);
            assert!(d.coeff_norm() < 1e-12 * (1.0 + f.coeff_norm()), "{}", s);
        }
    }
}
