//! Ring context, exponent vectors and the primal/dual monomial orders.
//!
//! The primal order is a graded local order: 1 is the largest monomial, lower
//! total degree wins, and ties inside a degree are broken by reverse
//! lexicographic comparison on the declared variable order. On a homogenized
//! ring the order compares dehomogenized images inside each total degree.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Exponent vector of a monomial `x^a = x_1^{a_1} ... x_N^{a_N}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpVec(pub Vec<u32>);

impl ExpVec {
    pub fn zero(n: usize) -> Self {
        ExpVec(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        ExpVec(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `|a|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn divides(&self, other: &ExpVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &ExpVec) -> Option<ExpVec> {
        let mut out = Vec::with_capacity(self.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(ExpVec(out))
    }

    /// Support: indices with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, _)| i)
    }

    /// True when the monomial is a pure power of a single variable (or 1).
    pub fn is_pure_power(&self) -> bool {
        self.support().count() <= 1
    }
}

/// Ring context: variable names plus a flag marking the homogenizing variable.
///
/// When `homog` is set, the *last* variable is the homogenizing one and the
/// primal order compares dehomogenized images inside each total degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingData {
    pub names: Vec<String>,
    pub homog: bool,
}

pub type Ring = Arc<RingData>;

pub fn ring(names: &[&str]) -> Ring {
    Arc::new(RingData {
        names: names.iter().map(|s| s.to_string()).collect(),
        homog: false,
    })
}

pub fn ring_from_names(names: Vec<String>) -> Ring {
    Arc::new(RingData {
        names,
        homog: false,
    })
}

impl RingData {
    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    /// Extend with a homogenizing variable (named `h`, or `h_`, ... on collision).
    pub fn homogenized(&self) -> Result<Ring> {
        if self.homog {
            return Err(Error::AlreadyHomogenized);
        }
        let mut name = "h".to_string();
        while self.names.contains(&name) {
            name.push('_');
        }
        let mut names = self.names.clone();
        names.push(name);
        Ok(Arc::new(RingData { names, homog: true }))
    }

    /// Drop the homogenizing variable.
    pub fn dehomogenized(&self) -> Result<Ring> {
        if !self.homog {
            return Err(Error::NotHomogenized);
        }
        let mut names = self.names.clone();
        names.pop();
        Ok(Arc::new(RingData {
            names,
            homog: false,
        }))
    }

    /// Primal comparison: `Greater` means `a` is the larger monomial (1 largest).
    pub fn cmp_primal(&self, a: &ExpVec, b: &ExpVec) -> Ordering {
        debug_assert_eq!(a.len(), self.nvars());
        debug_assert_eq!(b.len(), self.nvars());
        let (da, db) = (a.degree(), b.degree());
        if da != db {
            // local: lower total degree is larger
            return db.cmp(&da);
        }
        if self.homog {
            // same total degree: compare dehomogenized images under the base order
            let n = self.nvars() - 1;
            let (xa, xb) = (&a.0[..n], &b.0[..n]);
            let (dxa, dxb): (u32, u32) = (xa.iter().sum(), xb.iter().sum());
            if dxa != dxb {
                return dxb.cmp(&dxa);
            }
            return revlex(xa, xb);
        }
        revlex(&a.0, &b.0)
    }

    /// Checked public comparison (length mismatch is an error).
    pub fn compare_primal(&self, a: &ExpVec, b: &ExpVec) -> Result<Ordering> {
        if a.len() != b.len() || a.len() != self.nvars() {
            return Err(Error::LengthMismatch(a.len(), b.len()));
        }
        Ok(self.cmp_primal(a, b))
    }

    /// Dual comparison on monomial functionals: `d^a >= d^b  <=>  x^a <= x^b`.
    pub fn cmp_dual(&self, a: &ExpVec, b: &ExpVec) -> Ordering {
        self.cmp_primal(a, b).reverse()
    }

    /// Render a monomial; factors are sorted by variable name so the output
    /// does not depend on the declaration order.
    pub fn monomial_string(&self, e: &ExpVec) -> String {
        let mut parts = Vec::new();
        for (i, &a) in e.0.iter().enumerate() {
            if a == 1 {
                parts.push(self.names[i].clone());
            } else if a > 1 {
                parts.push(format!("{}^{}", self.names[i], a));
            }
        }
        parts.sort();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Reverse-lexicographic tie-break inside a degree: the monomial whose last
/// nonzero entry of `a - b` is negative is the larger one.
fn revlex(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()).rev() {
        if x != y {
            return if x < y {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
    }
    Ordering::Equal
}

/// All exponent vectors in `n` variables of total degree exactly `d`,
/// in a fixed deterministic order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<ExpVec> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<ExpVec>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(ExpVec(cur.clone()));
            return;
        }
        for a in (0..=left).rev() {
            cur[i] = a;
            rec(i + 1, left - a, cur, out);
        }
        cur[i] = 0;
    }
    if n == 0 {
        if d == 0 {
            out.push(ExpVec(vec![]));
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// Table of all monomials of degree <= `max_degree`, sorted primal-descending
/// (largest monomial first, so index 0 is the constant monomial).
pub struct MonomialTable {
    pub ring: Ring,
    pub exps: Vec<ExpVec>,
    index: std::collections::HashMap<ExpVec, usize>,
    /// `offsets[d]` = number of monomials of degree < d.
    pub offsets: Vec<usize>,
}

impl MonomialTable {
    pub fn new(ring: &Ring, max_degree: u32) -> Self {
        let n = ring.nvars();
        let mut exps = Vec::new();
        let mut offsets = vec![0usize];
        for d in 0..=max_degree {
            let mut layer = monomials_of_degree(n, d);
            layer.sort_by(|a, b| ring.cmp_primal(a, b).reverse());
            exps.extend(layer);
            offsets.push(exps.len());
        }
        let index = exps
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        MonomialTable {
            ring: ring.clone(),
            exps,
            index,
            offsets,
        }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn position(&self, e: &ExpVec) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Number of monomials of degree <= d.
    pub fn count_up_to(&self, d: u32) -> usize {
        self.offsets[(d as usize + 1).min(self.offsets.len() - 1)]
    }
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primal_order_constant_is_largest() {
        let r = ring(&["x", "y"]);
        let one = ExpVec::zero(2);
        let x = ExpVec::unit(2, 0);
        assert_eq!(r.cmp_primal(&one, &x), Ordering::Greater);
    }

    #[test]
    fn primal_order_respects_degree() {
        let r = ring(&["x", "y"]);
        let x2 = ExpVec(vec![2, 0]);
        let y = ExpVec(vec![0, 1]);
        // degree 1 beats degree 2
        assert_eq!(r.cmp_primal(&x2, &y), Ordering::Less);
    }

    #[test]
    fn revlex_tie_break() {
        let r = ring(&["x", "y"]);
        let xy = ExpVec(vec![1, 1]);
        let y2 = ExpVec(vec![0, 2]);
        assert_eq!(r.cmp_primal(&xy, &y2), Ordering::Greater);
        let x = ExpVec(vec![1, 0]);
        let y = ExpVec(vec![0, 1]);
        assert_eq!(r.cmp_primal(&x, &y), Ordering::Greater);
    }

    #[test]
    fn compare_primal_checks_lengths() {
        let r = ring(&["x", "y"]);
        let a = ExpVec(vec![1]);
        let b = ExpVec(vec![0, 1]);
        assert!(r.compare_primal(&a, &b).is_err());
    }

    #[test]
    fn primal_order_is_total_up_to_degree_six() {
        // antisymmetry and transitivity over all monomials of degree <= 6 in 3 vars
        let r = ring(&["x", "y", "z"]);
        let mut all = Vec::new();
        for d in 0..=6 {
            all.extend(monomials_of_degree(3, d));
        }
        for a in &all {
            for b in &all {
                let ab = r.cmp_primal(a, b);
                let ba = r.cmp_primal(b, a);
                assert_eq!(ab, ba.reverse());
                if ab == Ordering::Equal {
                    assert_eq!(a, b);
                }
            }
        }
        // transitivity via consistency with a sort
        let mut sorted = all.clone();
        sorted.sort_by(|a, b| r.cmp_primal(b, a));
        for w in sorted.windows(2) {
            assert_ne!(r.cmp_primal(&w[0], &w[1]), Ordering::Less);
        }
    }

    #[test]
    fn homogenized_order_compares_dehomogenized_images() {
        let r = ring(&["x", "y"]).homogenized().unwrap();
        // degree-2 monomials: x*h vs y^2 -> phi: x (deg 1) beats y^2 (deg 2)
        let xh = ExpVec(vec![1, 0, 1]);
        let y2 = ExpVec(vec![0, 2, 0]);
        assert_eq!(r.cmp_primal(&xh, &y2), Ordering::Greater);
        // h^2 dehomogenizes to 1, the largest
        let h2 = ExpVec(vec![0, 0, 2]);
        assert_eq!(r.cmp_primal(&h2, &xh), Ordering::Greater);
    }

    #[test]
    fn monomial_table_counts() {
        let r = ring(&["x", "y", "z"]);
        let t = MonomialTable::new(&r, 4);
        assert_eq!(t.count_up_to(0), 1);
        assert_eq!(t.count_up_to(1), 4);
        assert_eq!(t.count_up_to(4), 35);
        assert_eq!(t.exps[0], ExpVec::zero(3));
        for e in &t.exps {
            assert_eq!(t.position(e), Some(t.position(e).unwrap()));
        }
    }
}
