//! Krasner quotients `R/G` of finite commutative rings by subgroups of the
//! unit group, plus the infinite quotients of the rationals that are only
//! available through oracles.

mod hilbert;
mod square_class;
mod zn;

pub use hilbert::{hilbert_places, hilbert_product, hilbert_symbol, Place};
pub use square_class::{
    reproduce_cone_counterexample, sc_membership_exact, sc_sum_members, square_class_of, ConeCounterexampleReport,
    MembershipEvidence, SquareClass, SumMember,
};
pub use zn::{demonstrate_zn_failure, InverseCandidate, ZnReport};

use crate::diagnostic::{Diagnostic, DiagnosticBundle, Witness};
use crate::error::{HyperError, Result};
use crate::hypergroup::{self, FiniteCanonicalHypergroup, HyperOpTable};
use crate::hyperring::{self, FiniteHyperfield, FiniteHyperring, HyperringData};
use crate::morphism::find_isomorphism_with;
use crate::order::OrderRelation;
use crate::{ElementId, SubsetMask, CARRIER_CAP};

/// A finite commutative ring with identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiniteCommutativeRing {
    /// `Z/mZ`.
    Residue { modulus: usize },
    /// Explicit operation tables, row-major.
    Table { labels: Vec<String>, add: Vec<usize>, mul: Vec<usize>, zero: usize, one: usize },
}

impl FiniteCommutativeRing {
    pub fn zmod(modulus: usize) -> Result<Self> {
        if modulus < 2 {
            return Err(HyperError::InvalidRing(format!("modulus {modulus} < 2")));
        }
        Ok(FiniteCommutativeRing::Residue { modulus })
    }

    /// Validates the commutative ring axioms on explicit tables.
    pub fn table(labels: Vec<String>, add: Vec<usize>, mul: Vec<usize>, zero: usize, one: usize) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(HyperError::EmptyCarrier);
        }
        if add.len() != n * n || mul.len() != n * n {
            return Err(HyperError::TableShape { expected: n * n, found: add.len().min(mul.len()) });
        }
        if add.iter().chain(&mul).chain([&zero, &one]).any(|&v| v >= n) {
            return Err(HyperError::InvalidRing("table value outside carrier".into()));
        }
        let a = |x: usize, y: usize| add[x * n + y];
        let m = |x: usize, y: usize| mul[x * n + y];
        for x in 0..n {
            if a(x, zero) != x || m(x, one) != x {
                return Err(HyperError::InvalidRing(format!("identity law fails at {x}")));
            }
            if !(0..n).any(|y| a(x, y) == zero) {
                return Err(HyperError::InvalidRing(format!("{x} has no additive inverse")));
            }
            for y in 0..n {
                if a(x, y) != a(y, x) || m(x, y) != m(y, x) {
                    return Err(HyperError::InvalidRing(format!("not commutative at ({x}, {y})")));
                }
                for z in 0..n {
                    if a(a(x, y), z) != a(x, a(y, z)) || m(m(x, y), z) != m(x, m(y, z)) {
                        return Err(HyperError::InvalidRing(format!("not associative at ({x}, {y}, {z})")));
                    }
                    if m(x, a(y, z)) != a(m(x, y), m(x, z)) {
                        return Err(HyperError::InvalidRing(format!("not distributive at ({x}, {y}, {z})")));
                    }
                }
            }
        }
        Ok(FiniteCommutativeRing::Table { labels, add, mul, zero, one })
    }

    pub fn size(&self) -> usize {
        match self {
            FiniteCommutativeRing::Residue { modulus } => *modulus,
            FiniteCommutativeRing::Table { labels, .. } => labels.len(),
        }
    }

    pub fn zero(&self) -> usize {
        match self {
            FiniteCommutativeRing::Residue { .. } => 0,
            FiniteCommutativeRing::Table { zero, .. } => *zero,
        }
    }

    pub fn one(&self) -> usize {
        match self {
            FiniteCommutativeRing::Residue { modulus } => 1 % modulus,
            FiniteCommutativeRing::Table { one, .. } => *one,
        }
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        match self {
            FiniteCommutativeRing::Residue { modulus } => (x + y) % modulus,
            FiniteCommutativeRing::Table { add, labels, .. } => add[x * labels.len() + y],
        }
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        match self {
            FiniteCommutativeRing::Residue { modulus } => x * y % modulus,
            FiniteCommutativeRing::Table { mul, labels, .. } => mul[x * labels.len() + y],
        }
    }

    pub fn label(&self, x: usize) -> String {
        match self {
            FiniteCommutativeRing::Residue { .. } => x.to_string(),
            FiniteCommutativeRing::Table { labels, .. } => labels[x].clone(),
        }
    }

    pub fn units(&self) -> Vec<usize> {
        let one = self.one();
        (0..self.size()).filter(|&x| (0..self.size()).any(|y| self.mul(x, y) == one)).collect()
    }

    pub fn is_field(&self) -> bool {
        self.size() >= 2 && self.units().len() == self.size() - 1
    }
}

/// A subgroup of the unit group of a ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitSubgroup {
    members: Vec<usize>,
}

impl UnitSubgroup {
    pub fn new(ring: &FiniteCommutativeRing, members: &[usize]) -> Result<Self> {
        let mut members: Vec<usize> = members.to_vec();
        members.sort_unstable();
        members.dedup();
        if let Some(&x) = members.iter().find(|&&x| x >= ring.size()) {
            return Err(HyperError::InvalidSubgroup(format!("{x} is not a ring element")));
        }
        let one = ring.one();
        if !members.contains(&one) {
            return Err(HyperError::InvalidSubgroup("does not contain 1".into()));
        }
        for &g in &members {
            if !members.iter().any(|&h| ring.mul(g, h) == one) {
                return Err(HyperError::InvalidSubgroup(format!("{} has no inverse in the subgroup", ring.label(g))));
            }
            for &h in &members {
                let gh = ring.mul(g, h);
                if !members.contains(&gh) {
                    return Err(HyperError::InvalidSubgroup(format!(
                        "not closed: {} * {} = {}",
                        ring.label(g),
                        ring.label(h),
                        ring.label(gh)
                    )));
                }
            }
        }
        Ok(UnitSubgroup { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }
}

/// Every subgroup of the unit group, smallest first.
pub fn unit_subgroups(ring: &FiniteCommutativeRing) -> Vec<UnitSubgroup> {
    let close = |gens: &[usize]| -> Vec<usize> {
        let mut set = vec![ring.one()];
        loop {
            let mut next = set.clone();
            for &a in &set {
                for &g in gens {
                    let p = ring.mul(a, g);
                    if !next.contains(&p) {
                        next.push(p);
                    }
                }
            }
            if next.len() == set.len() {
                set.sort_unstable();
                return set;
            }
            set = next;
        }
    };
    let mut found: Vec<Vec<usize>> = ring.units().iter().map(|&u| close(&[u])).collect();
    found.sort();
    found.dedup();
    // joins of cyclic subgroups reach every subgroup
    loop {
        let mut added = false;
        for i in 0..found.len() {
            for j in i + 1..found.len() {
                let mut gens = found[i].clone();
                gens.extend(&found[j]);
                let join = close(&gens);
                if !found.contains(&join) {
                    found.push(join);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    found.sort_by_key(|s| (s.len(), s.clone()));
    found.into_iter().map(|members| UnitSubgroup { members }).collect()
}

/// The orbit partition `R/G`, class of zero first, then by smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl OrbitPartition {
    pub fn new(ring: &FiniteCommutativeRing, g: &UnitSubgroup) -> Self {
        let n = ring.size();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let order = std::iter::once(ring.zero()).chain((0..n).filter(|&x| x != ring.zero()));
        for a in order {
            if class_of[a] != usize::MAX {
                continue;
            }
            let mut orbit: Vec<usize> = g.members().iter().map(|&h| ring.mul(a, h)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &x in &orbit {
                class_of[x] = classes.len();
            }
            classes.push(orbit);
        }
        OrbitPartition { classes, class_of }
    }

    pub fn representative(&self, class: usize) -> usize {
        self.classes[class][0]
    }
}

/// `aG + bG = {(ag + bh)G : g, h in G}`.
fn orbit_sum(ring: &FiniteCommutativeRing, g: &UnitSubgroup, part: &OrbitPartition, a: usize, b: usize) -> SubsetMask {
    let (ra, rb) = (part.representative(a), part.representative(b));
    let mut out = SubsetMask::EMPTY;
    for &x in g.members() {
        for &y in g.members() {
            out.insert(part.class_of[ring.add(ring.mul(ra, x), ring.mul(rb, y))]);
        }
    }
    out
}

fn quotient_data(ring: &FiniteCommutativeRing, g: &UnitSubgroup) -> Result<(HyperringData, OrbitPartition)> {
    let part = OrbitPartition::new(ring, g);
    let k = part.classes.len();
    if k > CARRIER_CAP {
        return Err(HyperError::CarrierTooLarge(k));
    }
    let add = HyperOpTable::from_fn(k, |a, b| orbit_sum(ring, g, &part, a, b))?;
    let mul = (0..k * k)
        .map(|i| part.class_of[ring.mul(part.representative(i / k), part.representative(i % k))])
        .collect();
    let labels = (0..k).map(|c| ring.label(part.representative(c))).collect();
    let data = HyperringData { labels, add, zero: 0, mul, one: part.class_of[ring.one()] };
    Ok((data, part))
}

pub fn quotient_hypergroup(ring: &FiniteCommutativeRing, g: &UnitSubgroup) -> Result<(FiniteCanonicalHypergroup, OrbitPartition)> {
    let (data, part) = quotient_data(ring, g)?;
    let h = hypergroup::verify_canonical(data.add, data.zero, data.labels).map_err(HyperError::Verification)?;
    Ok((h, part))
}

pub fn quotient_hyperring(ring: &FiniteCommutativeRing, g: &UnitSubgroup) -> Result<(FiniteHyperring, OrbitPartition)> {
    let (data, part) = quotient_data(ring, g)?;
    let r = hyperring::verify_hyperring(data).map_err(HyperError::Verification)?;
    Ok((r, part))
}

/// `R/G` for a field `R`; also confirms `(aG)^-1 = a^-1 G`.
pub fn quotient_hyperfield(ring: &FiniteCommutativeRing, g: &UnitSubgroup) -> Result<(FiniteHyperfield, OrbitPartition)> {
    if !ring.is_field() {
        return Err(HyperError::InvalidRing(format!("Z/{} is not a field", ring.size())));
    }
    let (data, part) = quotient_data(ring, g)?;
    let f = hyperring::verify_hyperfield(data).map_err(HyperError::Verification)?;
    let one = ring.one();
    for a in (0..ring.size()).filter(|&a| a != ring.zero()) {
        let a_inv = (0..ring.size()).find(|&b| ring.mul(a, b) == one).expect("field");
        if f.inv(part.class_of[a]) != Some(part.class_of[a_inv]) {
            let d = Diagnostic::fail("quotient inverse", Witness::elements([a]), "(aG)^-1 != a^-1 G");
            return Err(HyperError::Verification(DiagnosticBundle(vec![d])));
        }
    }
    Ok((f, part))
}

/// The rationals modulo the positive rationals.
#[derive(Debug, Clone)]
pub struct SignQuotient {
    /// Carrier `[zero, pos, neg]`.
    pub hyperfield: FiniteHyperfield,
    /// For each class pair, the sums observed with `g, h` drawn from `{1/2, 1, 2}`.
    pub witnesses: Vec<(usize, usize, Vec<String>)>,
    pub isomorphism: Option<Vec<ElementId>>,
    pub report: DiagnosticBundle,
}

/// Builds `Q/Q⁺` by sign arithmetic and exhibits an order preserving
/// isomorphism onto the sign hyperfield.
///
/// Each sum class is populated from explicit witnesses `a*g + b*h`. The sets
/// are complete: `Q⁺` is closed under addition, so `pos + pos` and `neg + neg`
/// cannot leave their class, and `pos + neg` already meets all three classes.
pub fn sign_quotient_of_rationals() -> SignQuotient {
    use crate::rational::{rat, sign_of, Rational};
    let reps: [i64; 3] = [0, 1, -1];
    let units = [rat(1, 2), rat(1, 1), rat(2, 1)];
    let class_of = |q: &Rational| match sign_of(q) {
        0 => 0,
        1 => 1,
        _ => 2,
    };
    let mut witnesses = Vec::new();
    let add = HyperOpTable::from_fn(3, |a, b| {
        let mut s = SubsetMask::EMPTY;
        for g in &units {
            for h in &units {
                let v = Rational::from_integer(reps[a].into()) * g + Rational::from_integer(reps[b].into()) * h;
                s.insert(class_of(&v));
            }
        }
        s
    })
    .expect("nonempty sums");
    for a in 0..3 {
        for b in 0..3 {
            let mut seen = Vec::new();
            for g in &units {
                for h in &units {
                    let v = Rational::from_integer(reps[a].into()) * g + Rational::from_integer(reps[b].into()) * h;
                    let c = class_of(&v);
                    if !seen.iter().any(|(cc, _)| *cc == c) {
                        seen.push((c, format!("{}*{} + {}*{} = {}", reps[a], g, reps[b], h, v)));
                    }
                }
            }
            witnesses.push((a, b, seen.into_iter().map(|(_, w)| w).collect()));
        }
    }
    let mul = (0..9).map(|i| class_of(&Rational::from_integer((reps[i / 3] * reps[i % 3]).into()))).collect();
    let labels = vec!["0Q+".to_string(), "1Q+".to_string(), "-1Q+".to_string()];
    let data = HyperringData { labels, add, zero: 0, mul, one: 1 };
    let hyperfield = hyperring::verify_hyperfield(data).expect("Q/Q+ is a hyperfield");

    let sign = hyperring::sign_hyperfield();
    let order_q = OrderRelation::chain(3, &[2, 0, 1]).expect("chain");
    let order_s = crate::order::ordered_sign_hypergroup().order().clone();
    let isomorphism = find_isomorphism_with(hyperfield.additive(), sign.additive(), Some((&order_q, &order_s)), &|m| {
        (0..3).all(|x| (0..3).all(|y| m[hyperfield.mul(x, y)] == sign.mul(m[x], m[y])))
    });
    let mut report = DiagnosticBundle::new();
    report.push(Diagnostic::pass("Q/Q+ hyperfield axioms"));
    report.push(match &isomorphism {
        Some(m) => Diagnostic::pass("order preserving isomorphism onto the sign hyperfield")
            .with_witness(Witness::elements(m.clone()))
            .with_details("pos -> 1, zero -> 0, neg -> -1"),
        None => Diagnostic::fail("order preserving isomorphism onto the sign hyperfield", Witness::default(), "none found"),
    });
    SignQuotient { hyperfield, witnesses, isomorphism, report }
}
