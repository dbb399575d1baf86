//! The rationals modulo nonzero squares, `Q/Q̇²`.
//!
//! Classes are named by squarefree integers. The hyperoperation
//! `aQ̇² + bQ̇² = {(ag + bh)Q̇² : g, h nonzero squares}` has infinitely many
//! members in general, so it is exposed as a membership oracle
//! ([`sc_membership_exact`]) and a bounded witness search ([`sc_sum_members`]).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::hilbert::{hilbert_places, hilbert_symbol};
use crate::diagnostic::{Diagnostic, DiagnosticBundle, Witness};
use crate::error::{HyperError, Result};
use crate::rational::{format_rational, squarefree_part, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SquareClass {
    Zero,
    /// Squarefree representative, sign preserved.
    Nonzero(i64),
}

impl SquareClass {
    /// Panics unless `rep` is a nonzero squarefree integer.
    pub fn new(rep: i64) -> Self {
        assert!(rep != 0, "use SquareClass::Zero");
        Self::try_new(rep).unwrap_or_else(|| panic!("{rep} is not squarefree"))
    }

    /// `None` unless `rep` is a nonzero squarefree integer.
    pub fn try_new(rep: i64) -> Option<Self> {
        let class = (rep != 0).then(|| square_class_of(&Rational::from_integer(rep.into())))?;
        (class == SquareClass::Nonzero(rep)).then_some(class)
    }

    pub fn rep(self) -> i64 {
        match self {
            SquareClass::Zero => 0,
            SquareClass::Nonzero(r) => r,
        }
    }

    pub fn is_positive(self) -> bool {
        self.rep() > 0
    }

    /// The additive inverse class `-aQ̇²`.
    pub fn neg(self) -> Self {
        match self {
            SquareClass::Zero => SquareClass::Zero,
            SquareClass::Nonzero(r) => SquareClass::Nonzero(-r),
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}Q²", self.rep())
    }
}

/// Canonical representative of `qQ̇²`: since `n/d = nd / d²`, it is the
/// squarefree part of `|nd|` with the sign of `q`. Panics if that does not
/// fit in an `i64`.
pub fn square_class_of(q: &Rational) -> SquareClass {
    if q.is_zero() {
        return SquareClass::Zero;
    }
    let nd = (q.numer() * q.denom()).abs().to_biguint().expect("positive");
    let rep = squarefree_part(&nd).to_i64().expect("square class representative exceeds i64");
    SquareClass::Nonzero(if q.is_negative() { -rep } else { rep })
}

/// A class found in `aQ̇² + bQ̇²` with `a (p/q)² + b (r/s)² = value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumMember {
    pub class: SquareClass,
    pub p: u32,
    pub q: u32,
    pub r: u32,
    pub s: u32,
    pub value: String,
}

impl SumMember {
    pub fn g(&self) -> Rational {
        Rational::new(BigInt::from(self.p * self.p), BigInt::from(self.q * self.q))
    }

    pub fn h(&self) -> Rational {
        Rational::new(BigInt::from(self.r * self.r), BigInt::from(self.s * self.s))
    }
}

/// Semi-decision for sum membership: all classes `c` reached as
/// `a (p/q)² + b (r/s)²` with `1 <= p, q, r, s <= bound`. Each class keeps
/// its first witness in order of `max(p, q, r, s)`, then lexicographic.
pub fn sc_sum_members(a: SquareClass, b: SquareClass, bound: u32) -> Vec<SumMember> {
    let (ra, rb) = (Rational::from_integer(a.rep().into()), Rational::from_integer(b.rep().into()));
    let mut out: Vec<SumMember> = Vec::new();
    for m in 1..=bound {
        for p in 1..=m {
            for q in 1..=m {
                for r in 1..=m {
                    for s in 1..=m {
                        if p.max(q).max(r).max(s) != m {
                            continue;
                        }
                        let g = Rational::new(BigInt::from(p * p), BigInt::from(q * q));
                        let h = Rational::new(BigInt::from(r * r), BigInt::from(s * s));
                        let value = &ra * g + &rb * h;
                        let class = square_class_of(&value);
                        if !out.iter().any(|w| w.class == class) {
                            out.push(SumMember { class, p, q, r, s, value: format_rational(&value) });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Exact membership `c ∈ a + b` in `Q/Q̇²` for nonzero `a`, `b`.
///
/// For `c = 0` this asks for `ag + bh = 0`, i.e. `-ab` a square. For `c != 0`
/// it asks whether `a x² + b y² = c` has a rational solution with `x, y != 0`.
/// Dividing by `c`, this is `(ac, bc)_v = +1` at every place `v` (Hasse-Minkowski
/// for the ternary form `ac X² + bc Y² - Z²`); only infinity, 2 and the odd
/// primes dividing `abc` can contribute `-1`.
///
/// Solutions with `x = 0` or `y = 0` are accepted. The conic `a x² + b y² = c`
/// is smooth, so one rational point gives a rational parametrization with
/// infinitely many points, while the axes meet it in at most four.
/// `a` and `b` must be nonzero classes.
pub fn sc_membership_exact(c: SquareClass, a: SquareClass, b: SquareClass) -> bool {
    assert!(a != SquareClass::Zero && b != SquareClass::Zero, "summands must be nonzero classes");
    let (a, b) = (a.rep(), b.rep());
    match c {
        SquareClass::Zero => square_class_of(&Rational::from_integer((-(a as i128) * b as i128).into())) == SquareClass::Nonzero(1),
        SquareClass::Nonzero(c) => {
            let (ac, bc) = (a * c, b * c);
            let places = hilbert_places(ac, bc);
            let symbols: Vec<i8> = places.iter().map(|&v| hilbert_symbol(ac, bc, v).expect("valid place")).collect();
            debug_assert_eq!(symbols.iter().product::<i8>(), 1, "product formula for ({ac}, {bc})");
            symbols.iter().all(|&s| s == 1)
        }
    }
}

/// One side of the failed antisymmetry: `x <= y` because some `c` lies in
/// `(y * x^-1) ∩ P`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipEvidence {
    pub x: SquareClass,
    pub y: SquareClass,
    pub member: SquareClass,
    /// `y g + (-x) h = member`, with `g`, `h` given as `(numerator, denominator)` squares.
    pub g: (u32, u32),
    pub h: (u32, u32),
    pub arithmetic: String,
    pub exact: bool,
    /// Smallest witness for the same class from the bounded search.
    pub search: Option<SumMember>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeCounterexampleReport {
    pub three_le_two: MembershipEvidence,
    pub two_le_three: MembershipEvidence,
    pub distinct: bool,
    pub antisymmetric: bool,
    pub verdict: String,
    pub search_bound: u32,
    pub cross_check_agrees: bool,
    pub cone_checks: DiagnosticBundle,
}

const SEARCH_BOUND: u32 = 4;

fn evidence(x: i64, y: i64, member: i64, g: (u32, u32), h: (u32, u32)) -> Result<MembershipEvidence> {
    let (x, y, member) = (SquareClass::new(x), SquareClass::new(y), SquareClass::new(member));
    let gq = Rational::new(BigInt::from(g.0 * g.0), BigInt::from(g.1 * g.1));
    let hq = Rational::new(BigInt::from(h.0 * h.0), BigInt::from(h.1 * h.1));
    let value = Rational::from_integer(y.rep().into()) * &gq + Rational::from_integer(x.neg().rep().into()) * &hq;
    if square_class_of(&value) != member {
        return Err(HyperError::InvalidArgument(format!("witness arithmetic gives {value}, not class {member}")));
    }
    let exact = sc_membership_exact(member, y, x.neg());
    let search = sc_sum_members(y, x.neg(), SEARCH_BOUND).into_iter().find(|m| m.class == member);
    if !exact || search.is_none() {
        return Err(HyperError::InvalidArgument(format!("membership {member} in {y} + {} not confirmed", x.neg())));
    }
    Ok(MembershipEvidence {
        x,
        y,
        member,
        g,
        h,
        arithmetic: format!("{} * {} + ({}) * {} = {}", y.rep(), gq, x.neg().rep(), hq, value),
        exact,
        search,
    })
}

/// Checks the cone axioms for `P = Q⁺/Q̇² ∪ {0}` on the classes `0, ±1, ±2, ±3, ±5, ±6`.
fn sampled_cone_checks() -> DiagnosticBundle {
    let positives = [1i64, 2, 3, 5, 6];
    let mut samples = vec![SquareClass::Zero];
    for &r in &positives {
        samples.push(SquareClass::new(r));
        samples.push(SquareClass::new(-r));
    }
    let in_p = |c: SquareClass| c == SquareClass::Zero || c.is_positive();
    let in_neg_p = |c: SquareClass| in_p(c.neg());
    let mut bundle = DiagnosticBundle::new();

    let p1 = samples.iter().find(|&&c| (in_p(c) && in_neg_p(c)) != (c == SquareClass::Zero));
    bundle.push(match p1 {
        None => Diagnostic::pass("P1 on sampled classes"),
        Some(c) => Diagnostic::fail("P1 on sampled classes", Witness::values([c]), ""),
    });

    let mut p2 = Diagnostic::pass("P2 on sampled classes");
    'outer: for &a in &positives {
        for &b in &positives {
            let (a, b) = (SquareClass::new(a), SquareClass::new(b));
            let escaped = samples.iter().find(|&&c| !in_p(c) && sc_membership_exact(c, a, b));
            let found = sc_sum_members(a, b, SEARCH_BOUND).into_iter().find(|m| !in_p(m.class));
            if let Some(c) = escaped.copied().or(found.map(|m| m.class)) {
                p2 = Diagnostic::fail("P2 on sampled classes", Witness::values([a, b, c]), "sum leaves P");
                break 'outer;
            }
        }
    }
    bundle.push(p2);

    let p3 = samples.iter().find(|&&c| !in_p(c) && !in_neg_p(c));
    bundle.push(match p3 {
        None => Diagnostic::pass("P3 on sampled classes"),
        Some(c) => Diagnostic::fail("P3 on sampled classes", Witness::values([c]), ""),
    });
    bundle
}

/// With `P` the positive classes and zero, the relation `x <= y iff
/// (y * x^-1) ∩ P` nonempty has `3Q̇² <= 2Q̇²` and `2Q̇² <= 3Q̇²`.
///
/// Fails if either membership cannot be confirmed by both the exact oracle
/// and the bounded search.
pub fn reproduce_cone_counterexample() -> Result<ConeCounterexampleReport> {
    // 2*4 - 3*1 = 5
    let three_le_two = evidence(3, 2, 5, (2, 1), (1, 1))?;
    // 3*1 - 2*1 = 1
    let two_le_three = evidence(2, 3, 1, (1, 1), (1, 1))?;
    let distinct = SquareClass::new(2) != SquareClass::new(3);
    let antisymmetric = !distinct;
    let cross_check_agrees = [&three_le_two, &two_le_three].iter().all(|e| e.exact == e.search.is_some());
    Ok(ConeCounterexampleReport {
        three_le_two,
        two_le_three,
        distinct,
        antisymmetric,
        verdict: if antisymmetric { "antisymmetric".into() } else { "not antisymmetric".into() },
        search_bound: SEARCH_BOUND,
        cross_check_agrees,
        cone_checks: sampled_cone_checks(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    /// Square class by explicit prime factorization of numerator and denominator.
    fn oracle_class(n: i64, d: i64) -> i64 {
        let mut parity = std::collections::BTreeMap::new();
        for x in [n.unsigned_abs(), d.unsigned_abs()] {
            let mut x = x;
            let mut p = 2;
            while x > 1 {
                while x % p == 0 {
                    x /= p;
                    *parity.entry(p).or_insert(0) ^= 1;
                }
                p += 1;
            }
        }
        let sign = if (n < 0) != (d < 0) { -1 } else { 1 };
        parity.iter().filter(|(_, &e)| e == 1).fold(sign, |acc, (&p, _)| acc * p as i64)
    }

    #[test]
    fn canonical_representatives() {
        assert_eq!(square_class_of(&int(8)), SquareClass::Nonzero(2));
        assert_eq!(square_class_of(&rat(-9, 4)), SquareClass::Nonzero(-1));
        assert_eq!(oracle_class(50, 27), 6);
        assert_eq!(square_class_of(&rat(50, 27)), SquareClass::Nonzero(6));
        assert_eq!(square_class_of(&int(0)), SquareClass::Zero);
        for (n, d) in [(12, 5), (-18, 49), (7, 63), (1, 1), (-45, 8)] {
            assert_eq!(square_class_of(&rat(n, d)).rep(), oracle_class(n, d), "{n}/{d}");
        }
    }

    #[test]
    fn bounded_sums() {
        let s = sc_sum_members(SquareClass::new(2), SquareClass::new(-3), 2);
        assert!(s.iter().any(|m| m.class == SquareClass::new(5)));
        let s = sc_sum_members(SquareClass::new(3), SquareClass::new(-2), 1);
        assert_eq!(s[0].class, SquareClass::new(1));
        assert_eq!((s[0].p, s[0].q, s[0].r, s[0].s), (1, 1, 1, 1));
        let s = sc_sum_members(SquareClass::new(1), SquareClass::new(-1), 1);
        assert_eq!(s[0].class, SquareClass::Zero);
    }

    #[test]
    fn exact_membership() {
        assert!(sc_membership_exact(SquareClass::new(5), SquareClass::new(2), SquareClass::new(-3)));
        assert!(sc_membership_exact(SquareClass::Zero, SquareClass::new(1), SquareClass::new(-1)));
        assert!(!sc_membership_exact(SquareClass::Zero, SquareClass::new(1), SquareClass::new(1)));
        // 7 has a prime factor = 3 mod 4, so it is not a sum of two rational squares
        assert!(!sc_membership_exact(SquareClass::new(7), SquareClass::new(1), SquareClass::new(1)));
        assert!(sc_sum_members(SquareClass::new(1), SquareClass::new(1), 8)
            .iter()
            .all(|m| m.class != SquareClass::new(7)));
        // 5 = 1 + 4
        assert!(sc_membership_exact(SquareClass::new(5), SquareClass::new(1), SquareClass::new(1)));
        // positives never sum to negatives
        assert!(!sc_membership_exact(SquareClass::new(-1), SquareClass::new(2), SquareClass::new(3)));
    }

    #[test]
    fn cone_counterexample() {
        let r = reproduce_cone_counterexample().unwrap();
        assert_eq!(r.verdict, "not antisymmetric");
        assert_eq!(r.three_le_two.member, SquareClass::new(5));
        assert_eq!((r.three_le_two.g, r.three_le_two.h), ((2, 1), (1, 1)));
        assert_eq!(r.two_le_three.member, SquareClass::new(1));
        assert!(r.cross_check_agrees);
        assert!(r.cone_checks.all_passed(), "{}", r.cone_checks);
    }
}
