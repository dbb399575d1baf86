//! Maps `H -> K` from a finite canonical hypergroup into the rationals, with
//! pointwise addition and the convolution
//! `(fg)(x) = sum of f(x1) g(x2) over pairs with x in x1*x2`.
//!
//! Convolution is not associative in general; [`associativity_probe`] finds
//! the first point where `(fg)h` and `f(gh)` differ.

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{HyperError, Result};
use crate::hypergroup::{sign_hypergroup, FiniteCanonicalHypergroup, SIGN_NEG, SIGN_POS, SIGN_ZERO};
use crate::rational::{format_rational, int, Rational};
use crate::ElementId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSupportMap {
    domain: Arc<FiniteCanonicalHypergroup>,
    values: Vec<Rational>,
}

impl FiniteSupportMap {
    pub fn new(domain: Arc<FiniteCanonicalHypergroup>, values: Vec<Rational>) -> Result<Self> {
        if values.len() != domain.size() {
            return Err(HyperError::TableShape { expected: domain.size(), found: values.len() });
        }
        Ok(FiniteSupportMap { domain, values })
    }

    pub fn from_fn(domain: Arc<FiniteCanonicalHypergroup>, f: impl Fn(ElementId) -> Rational) -> Self {
        let values = (0..domain.size()).map(f).collect();
        FiniteSupportMap { domain, values }
    }

    pub fn zero(domain: Arc<FiniteCanonicalHypergroup>) -> Self {
        Self::from_fn(domain, |_| Rational::zero())
    }

    /// The indicator of the identity, a two-sided unit for convolution.
    pub fn delta_identity(domain: Arc<FiniteCanonicalHypergroup>) -> Self {
        let e = domain.identity();
        Self::from_fn(domain, |x| if x == e { int(1) } else { int(0) })
    }

    pub fn domain(&self) -> &Arc<FiniteCanonicalHypergroup> {
        &self.domain
    }

    pub fn get(&self, x: ElementId) -> &Rational {
        &self.values[x]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn neg(&self) -> Self {
        FiniteSupportMap { domain: self.domain.clone(), values: self.values.iter().map(|v| -v).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        FiniteSupportMap { domain: self.domain.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    /// `label: value` pairs in carrier order.
    pub fn display(&self) -> String {
        let parts: Vec<String> = (0..self.values.len())
            .map(|x| format!("{}: {}", self.domain.label(x), format_rational(&self.values[x])))
            .collect();
        format!("({})", parts.join(", "))
    }
}

fn same_domain(f: &FiniteSupportMap, g: &FiniteSupportMap) -> Result<()> {
    if Arc::ptr_eq(&f.domain, &g.domain) || f.domain == g.domain {
        Ok(())
    } else {
        Err(HyperError::DomainMismatch)
    }
}

pub fn pointwise_add(f: &FiniteSupportMap, g: &FiniteSupportMap) -> Result<FiniteSupportMap> {
    same_domain(f, g)?;
    let values = f.values.iter().zip(&g.values).map(|(a, b)| a + b).collect();
    Ok(FiniteSupportMap { domain: f.domain.clone(), values })
}

pub fn convolve(f: &FiniteSupportMap, g: &FiniteSupportMap) -> Result<FiniteSupportMap> {
    same_domain(f, g)?;
    let h = &f.domain;
    let n = h.size();
    let mut values = vec![Rational::zero(); n];
    for x1 in 0..n {
        if f.values[x1].is_zero() {
            continue;
        }
        for x2 in 0..n {
            let term = &f.values[x1] * &g.values[x2];
            for x in h.op(x1, x2) {
                values[x] += &term;
            }
        }
    }
    Ok(FiniteSupportMap { domain: f.domain.clone(), values })
}

/// First `x` in carrier order with `((fg)h)(x) != (f(gh))(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssociativityWitness {
    pub x: ElementId,
    pub label: String,
    pub left: String,
    pub right: String,
}

pub fn associativity_probe(
    f: &FiniteSupportMap,
    g: &FiniteSupportMap,
    h: &FiniteSupportMap,
) -> Result<Option<AssociativityWitness>> {
    same_domain(f, g)?;
    same_domain(f, h)?;
    let left = convolve(&convolve(f, g)?, h)?;
    let right = convolve(f, &convolve(g, h)?)?;
    Ok((0..f.values.len()).find(|&x| left.values[x] != right.values[x]).map(|x| AssociativityWitness {
        x,
        label: f.domain.label(x).to_string(),
        left: format_rational(&left.values[x]),
        right: format_rational(&right.values[x]),
    }))
}

/// The maps of the non-associativity example on the sign hypergroup:
/// `f = 1`, `g = -1`, `h(1) = 1, h(0) = -1, h(-1) = 0`.
pub fn sign_convolution_example() -> [FiniteSupportMap; 3] {
    let dom = Arc::new(sign_hypergroup());
    let f = FiniteSupportMap::from_fn(dom.clone(), |_| int(1));
    let g = FiniteSupportMap::from_fn(dom.clone(), |_| int(-1));
    let h = FiniteSupportMap::from_fn(dom, |x| match x {
        SIGN_POS => int(1),
        SIGN_ZERO => int(-1),
        SIGN_NEG => int(0),
        _ => unreachable!(),
    });
    [f, g, h]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergroup::cyclic_group;

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    /// Convolution by summing over all ordered pairs and testing membership,
    /// without the row-skipping of `convolve`.
    fn oracle(f: &FiniteSupportMap, g: &FiniteSupportMap) -> Vec<Rational> {
        let h = f.domain();
        (0..h.size())
            .map(|x| {
                let mut s = Rational::zero();
                for x1 in 0..h.size() {
                    for x2 in 0..h.size() {
                        if h.op(x1, x2).contains(x) {
                            s += f.get(x1) * g.get(x2);
                        }
                    }
                }
                s
            })
            .collect()
    }

    #[test]
    fn sign_example_products() {
        let [f, g, h] = sign_convolution_example();
        let fg = convolve(&f, &g).unwrap();
        // carrier order is [0, 1, -1]
        assert_eq!(fg.values(), ints(&[-3, -5, -5]).as_slice());
        assert_eq!(fg.values(), oracle(&f, &g).as_slice());
        let gh = convolve(&g, &h).unwrap();
        assert_eq!(gh.values(), ints(&[0, -2, 0]).as_slice());
        let left = convolve(&fg, &h).unwrap();
        let right = convolve(&f, &gh).unwrap();
        assert_eq!(left.values(), ints(&[-2, -8, 0]).as_slice());
        assert_eq!(right.values(), ints(&[-2, -6, -2]).as_slice());
    }

    #[test]
    fn probe_finds_first_witness() {
        let [f, g, h] = sign_convolution_example();
        let w = associativity_probe(&f, &g, &h).unwrap().unwrap();
        assert_eq!((w.x, w.label.as_str(), w.left.as_str(), w.right.as_str()), (SIGN_POS, "1", "-8", "-6"));
    }

    #[test]
    fn pointwise_sum_of_example_maps() {
        let [f, g, _] = sign_convolution_example();
        assert_eq!(pointwise_add(&f, &g).unwrap(), FiniteSupportMap::zero(f.domain().clone()));
        assert_eq!(pointwise_add(&f, &f.neg()).unwrap(), FiniteSupportMap::zero(f.domain().clone()));
    }

    #[test]
    fn delta_is_unit() {
        let [f, g, h] = sign_convolution_example();
        let d = FiniteSupportMap::delta_identity(f.domain().clone());
        for m in [&f, &g, &h] {
            assert_eq!(&convolve(m, &d).unwrap(), m);
            assert_eq!(&convolve(&d, m).unwrap(), m);
        }
        assert_eq!(associativity_probe(&f, &g, &d).unwrap(), None);
        let z = FiniteSupportMap::zero(f.domain().clone());
        assert_eq!(convolve(&z, &g).unwrap(), z);
    }

    #[test]
    fn group_algebra_is_associative() {
        let dom = Arc::new(cyclic_group(3).unwrap());
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 11) as i64 - 5
        };
        for _ in 0..50 {
            let maps: Vec<FiniteSupportMap> =
                (0..3).map(|_| FiniteSupportMap::new(dom.clone(), (0..3).map(|_| int(next())).collect()).unwrap()).collect();
            assert_eq!(associativity_probe(&maps[0], &maps[1], &maps[2]).unwrap(), None);
        }
    }

    #[test]
    fn domain_mismatch() {
        let [f, ..] = sign_convolution_example();
        let other = FiniteSupportMap::zero(Arc::new(cyclic_group(3).unwrap()));
        assert!(matches!(convolve(&f, &other), Err(HyperError::DomainMismatch)));
        assert!(matches!(pointwise_add(&f, &other), Err(HyperError::DomainMismatch)));
    }
}
