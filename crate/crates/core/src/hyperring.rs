//! Krasner hyperrings and hyperfields: hyper-addition, single-valued
//! multiplication. Also units, hyperideals and valuation hyperrings.

use crate::diagnostic::{Diagnostic, DiagnosticBundle, Witness};
use crate::error::{HyperError, Result};
use crate::hypergroup::{self, FiniteCanonicalHypergroup, HyperOpTable};
use crate::{ElementId, SubsetMask};

pub const R1: &str = "R1 additive canonical hypergroup";
pub const R2_MONOID: &str = "R2 commutative monoid";
pub const R2_ZERO: &str = "R2 x*0 = 0";
pub const R3: &str = "R3 distributivity";
pub const MUL_GROUP: &str = "nonzero elements form an abelian group";

/// Unverified hyperring input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperringData {
    pub labels: Vec<String>,
    pub add: HyperOpTable,
    pub zero: ElementId,
    /// Row-major `n x n` product table.
    pub mul: Vec<ElementId>,
    pub one: ElementId,
}

/// `x(y+z) = xy + xz` as sets, where `xA = {xa : a in A}`.
pub fn check_distributivity(add: &HyperOpTable, mul: &[ElementId]) -> Diagnostic {
    let n = add.size();
    let m = |x: usize, y: usize| mul[x * n + y];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let left = add.get(y, z).map(|a| m(x, a));
                let right = add.get(m(x, y), m(x, z));
                if left != right {
                    return Diagnostic::fail(
                        R3,
                        Witness::elements([x, y, z]).with_sets([left, right]),
                        format!("x(y+z) = {left:?} but xy+xz = {right:?} at ({x}, {y}, {z})"),
                    );
                }
            }
        }
    }
    Diagnostic::pass(R3)
}

fn check_monoid(n: usize, mul: &[ElementId], one: ElementId) -> Diagnostic {
    let m = |x: usize, y: usize| mul[x * n + y];
    if mul.len() != n * n {
        return Diagnostic::fail(R2_MONOID, Witness::default(), format!("product table has {} entries", mul.len()));
    }
    if let Some(i) = mul.iter().position(|&v| v >= n) {
        return Diagnostic::fail(R2_MONOID, Witness::elements([i / n, i % n]), "product outside the carrier");
    }
    if one >= n {
        return Diagnostic::fail(R2_MONOID, Witness::elements([one]), "unit outside the carrier");
    }
    for x in 0..n {
        if m(x, one) != x {
            return Diagnostic::fail(R2_MONOID, Witness::elements([x]), format!("{x}*1 = {}", m(x, one)));
        }
        for y in 0..n {
            if m(x, y) != m(y, x) {
                return Diagnostic::fail(R2_MONOID, Witness::elements([x, y]), "not commutative");
            }
            for z in 0..n {
                if m(m(x, y), z) != m(x, m(y, z)) {
                    return Diagnostic::fail(R2_MONOID, Witness::elements([x, y, z]), "not associative");
                }
            }
        }
    }
    Diagnostic::pass(R2_MONOID)
}

/// A verified hyperring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteHyperring {
    additive: FiniteCanonicalHypergroup,
    mul: Vec<ElementId>,
    one: ElementId,
}

impl FiniteHyperring {
    pub fn additive(&self) -> &FiniteCanonicalHypergroup {
        &self.additive
    }

    pub fn size(&self) -> usize {
        self.additive.size()
    }

    pub fn labels(&self) -> &[String] {
        self.additive.labels()
    }

    pub fn label(&self, x: ElementId) -> &str {
        self.additive.label(x)
    }

    pub fn zero(&self) -> ElementId {
        self.additive.identity()
    }

    pub fn one(&self) -> ElementId {
        self.one
    }

    #[inline]
    pub fn add(&self, x: ElementId, y: ElementId) -> SubsetMask {
        self.additive.op(x, y)
    }

    #[inline]
    pub fn mul(&self, x: ElementId, y: ElementId) -> ElementId {
        self.mul[x * self.size() + y]
    }

    pub fn mul_table(&self) -> &[ElementId] {
        &self.mul
    }

    pub fn neg(&self, x: ElementId) -> ElementId {
        self.additive.inverse(x)
    }

    pub fn carrier(&self) -> SubsetMask {
        self.additive.carrier()
    }

    pub fn data(&self) -> HyperringData {
        HyperringData {
            labels: self.labels().to_vec(),
            add: self.additive.table().clone(),
            zero: self.zero(),
            mul: self.mul.clone(),
            one: self.one,
        }
    }

    pub fn relabeled(&self, perm: &[ElementId]) -> Self {
        let n = self.size();
        let mut mul = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                mul[perm[x] * n + perm[y]] = perm[self.mul(x, y)];
            }
        }
        FiniteHyperring { additive: self.additive.relabeled(perm), mul, one: perm[self.one] }
    }
}

/// R1, R2 and R3; all failures are reported.
pub fn verify_hyperring(data: HyperringData) -> std::result::Result<FiniteHyperring, DiagnosticBundle> {
    let n = data.add.size();
    let mut bundle = DiagnosticBundle::new();
    let additive = match hypergroup::verify_canonical(data.add.clone(), data.zero, data.labels.clone()) {
        Ok(h) => {
            bundle.push(Diagnostic::pass(R1));
            Some(h)
        }
        Err(inner) => {
            bundle.push(inner.summarize(R1));
            None
        }
    };
    let monoid = check_monoid(n, &data.mul, data.one);
    let monoid_ok = monoid.passed();
    bundle.push(monoid);
    if monoid_ok && data.zero < n {
        let bad = (0..n).find(|&x| data.mul[x * n + data.zero] != data.zero);
        bundle.push(match bad {
            None => Diagnostic::pass(R2_ZERO),
            Some(x) => Diagnostic::fail(R2_ZERO, Witness::elements([x]), "x*0 != 0"),
        });
        bundle.push(check_distributivity(&data.add, &data.mul));
    }
    match additive {
        Some(additive) if bundle.all_passed() => Ok(FiniteHyperring { additive, mul: data.mul, one: data.one }),
        _ => Err(bundle),
    }
}

/// A verified hyperfield.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteHyperfield {
    ring: FiniteHyperring,
    inv: Vec<Option<ElementId>>,
}

impl FiniteHyperfield {
    pub fn ring(&self) -> &FiniteHyperring {
        &self.ring
    }

    pub fn additive(&self) -> &FiniteCanonicalHypergroup {
        self.ring.additive()
    }

    pub fn size(&self) -> usize {
        self.ring.size()
    }

    pub fn zero(&self) -> ElementId {
        self.ring.zero()
    }

    pub fn one(&self) -> ElementId {
        self.ring.one()
    }

    pub fn add(&self, x: ElementId, y: ElementId) -> SubsetMask {
        self.ring.add(x, y)
    }

    pub fn mul(&self, x: ElementId, y: ElementId) -> ElementId {
        self.ring.mul(x, y)
    }

    pub fn neg(&self, x: ElementId) -> ElementId {
        self.ring.neg(x)
    }

    /// Multiplicative inverse; `None` at zero.
    pub fn inv(&self, x: ElementId) -> Option<ElementId> {
        self.inv[x]
    }

    pub fn label(&self, x: ElementId) -> &str {
        self.ring.label(x)
    }

    pub fn labels(&self) -> &[String] {
        self.ring.labels()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.size()).filter(move |&x| x != self.zero())
    }

    pub fn relabeled(&self, perm: &[ElementId]) -> Self {
        let ring = self.ring.relabeled(perm);
        let mut inv = vec![None; self.size()];
        for x in 0..self.size() {
            inv[perm[x]] = self.inv[x].map(|y| perm[y]);
        }
        FiniteHyperfield { ring, inv }
    }
}

pub fn verify_hyperfield(data: HyperringData) -> std::result::Result<FiniteHyperfield, DiagnosticBundle> {
    let n = data.add.size();
    let zero = data.zero;
    let one = data.one;
    let mul = data.mul.clone();
    let group = (|| {
        if mul.len() != n * n || zero >= n || one >= n {
            return Diagnostic::fail(MUL_GROUP, Witness::default(), "malformed input");
        }
        if zero == one {
            return Diagnostic::fail(MUL_GROUP, Witness::elements([zero]), "0 = 1");
        }
        for x in (0..n).filter(|&x| x != zero) {
            if let Some(y) = (0..n).find(|&y| y != zero && mul[x * n + y] == zero) {
                return Diagnostic::fail(MUL_GROUP, Witness::elements([x, y]), "zero divisor");
            }
            if !(0..n).any(|y| mul[x * n + y] == one) {
                return Diagnostic::fail(MUL_GROUP, Witness::elements([x]), "no multiplicative inverse");
            }
        }
        Diagnostic::pass(MUL_GROUP)
    })();
    match verify_hyperring(data) {
        Ok(ring) if group.passed() => {
            let inv = (0..n)
                .map(|x| (x != zero).then(|| (0..n).find(|&y| ring.mul(x, y) == one).unwrap()))
                .collect();
            Ok(FiniteHyperfield { ring, inv })
        }
        Ok(_) => Err(DiagnosticBundle(vec![group])),
        Err(mut bundle) => {
            bundle.push(group);
            Err(bundle)
        }
    }
}

/// Units of the sub-hyperring `sub` of `r`: `x` with some `y` in `sub`, `xy = 1`.
pub fn units_in(r: &FiniteHyperring, sub: SubsetMask) -> SubsetMask {
    sub.iter().filter(|&x| sub.iter().any(|y| r.mul(x, y) == r.one())).collect()
}

pub fn units(r: &FiniteHyperring) -> SubsetMask {
    units_in(r, r.carrier())
}

/// Smallest hyperideal of the sub-hyperring `sub` containing `seed`.
pub fn ideal_closure_in(r: &FiniteHyperring, sub: SubsetMask, seed: SubsetMask) -> SubsetMask {
    let mut cur = seed.with(r.zero());
    loop {
        let mut next = cur;
        for a in cur {
            next.insert(r.neg(a));
            for b in cur {
                next = next.union(r.add(a, b));
            }
            for s in sub {
                next.insert(r.mul(a, s));
            }
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Every hyperideal of `sub`, generated by closing `I ∪ {x}` starting from `{0}`.
pub fn hyperideals_in(r: &FiniteHyperring, sub: SubsetMask) -> Vec<SubsetMask> {
    let start = ideal_closure_in(r, sub, SubsetMask::EMPTY);
    let mut found = vec![start];
    let mut i = 0;
    while i < found.len() {
        let ideal = found[i];
        for x in sub.difference(ideal) {
            let j = ideal_closure_in(r, sub, ideal.with(x));
            if !found.contains(&j) {
                found.push(j);
            }
        }
        i += 1;
    }
    found.sort_by_key(|m| (m.len(), m.bits()));
    found
}

pub const HYPERIDEAL: &str = "hyperideal";
pub const MAXIMAL: &str = "maximal hyperideal";

pub fn verify_hyperideal_in(r: &FiniteHyperring, sub: SubsetMask, i: SubsetMask) -> Result<Diagnostic> {
    if i.is_empty() {
        return Err(HyperError::EmptyIdeal);
    }
    if !i.is_subset(sub) {
        let x = i.difference(sub).first().unwrap();
        return Ok(Diagnostic::fail(HYPERIDEAL, Witness::elements([x]), "not inside the ring"));
    }
    for a in i {
        if !i.contains(r.neg(a)) {
            return Ok(Diagnostic::fail(HYPERIDEAL, Witness::elements([a]), format!("-{} not in I", r.label(a))));
        }
        for b in i {
            let s = r.add(a, b);
            if !s.is_subset(i) {
                return Ok(Diagnostic::fail(
                    HYPERIDEAL,
                    Witness::elements([a, b]).with_sets([s]),
                    format!("{}+{} not inside I", r.label(a), r.label(b)),
                ));
            }
        }
        for s in sub {
            if !i.contains(r.mul(a, s)) {
                return Ok(Diagnostic::fail(
                    HYPERIDEAL,
                    Witness::elements([a, s]),
                    format!("{}*{} not in I", r.label(a), r.label(s)),
                ));
            }
        }
    }
    Ok(Diagnostic::pass(HYPERIDEAL))
}

pub fn verify_hyperideal(r: &FiniteHyperring, i: SubsetMask) -> Result<Diagnostic> {
    verify_hyperideal_in(r, r.carrier(), i)
}

/// Maximality among proper hyperideals of `sub`. On failure the witness is
/// the smallest proper hyperideal strictly containing `i`.
pub fn is_maximal_in(r: &FiniteHyperring, sub: SubsetMask, i: SubsetMask) -> Result<Diagnostic> {
    let d = verify_hyperideal_in(r, sub, i)?;
    if !d.passed() {
        return Ok(Diagnostic { name: MAXIMAL.into(), ..d });
    }
    if i == sub {
        return Ok(Diagnostic::fail(MAXIMAL, Witness::default().with_sets([i]), "not a proper hyperideal"));
    }
    let larger = sub
        .difference(i)
        .iter()
        .map(|x| ideal_closure_in(r, sub, i.with(x)))
        .filter(|&j| j != sub)
        .min_by_key(|j| (j.len(), j.bits()));
    Ok(match larger {
        None => Diagnostic::pass(MAXIMAL),
        Some(j) => Diagnostic::fail(MAXIMAL, Witness::default().with_sets([i, j]), format!("contained in proper {j:?}")),
    })
}

pub fn is_maximal(r: &FiniteHyperring, i: SubsetMask) -> Result<Diagnostic> {
    is_maximal_in(r, r.carrier(), i)
}

pub const SUBRING: &str = "sub-hyperring";
pub const VALUATION_RING: &str = "valuation hyperring";

/// Closure of `o` under `+`, negation and `*`, and containment of `0`, `1`.
pub fn check_sub_hyperring(r: &FiniteHyperring, o: SubsetMask) -> Diagnostic {
    for (x, what) in [(r.zero(), "0"), (r.one(), "1")] {
        if !o.contains(x) {
            return Diagnostic::fail(SUBRING, Witness::elements([x]), format!("{what} missing"));
        }
    }
    for a in o {
        if !o.contains(r.neg(a)) {
            return Diagnostic::fail(SUBRING, Witness::elements([a]), "not closed under negation");
        }
        for b in o {
            if !r.add(a, b).is_subset(o) {
                return Diagnostic::fail(SUBRING, Witness::elements([a, b]).with_sets([r.add(a, b)]), "not closed under +");
            }
            if !o.contains(r.mul(a, b)) {
                return Diagnostic::fail(SUBRING, Witness::elements([a, b]), "not closed under *");
            }
        }
    }
    Diagnostic::pass(SUBRING)
}

/// `o` is a sub-hyperring and every nonzero `x` has `x` or `x^-1` in `o`.
pub fn is_valuation_hyperring(f: &FiniteHyperfield, o: SubsetMask) -> Diagnostic {
    let sub = check_sub_hyperring(f.ring(), o);
    if !sub.passed() {
        return Diagnostic { name: VALUATION_RING.into(), ..sub };
    }
    for x in f.nonzero() {
        let xi = f.inv(x).unwrap();
        if !o.contains(x) && !o.contains(xi) {
            return Diagnostic::fail(
                VALUATION_RING,
                Witness::elements([x]),
                format!("neither {} nor its inverse lies in O", f.label(x)),
            );
        }
    }
    Diagnostic::pass(VALUATION_RING)
}

/// The sign hyperfield on `[0, 1, -1]`.
pub fn sign_hyperfield() -> FiniteHyperfield {
    use crate::hypergroup::{sign_hypergroup, SIGN_NEG, SIGN_POS, SIGN_ZERO};
    let add = sign_hypergroup();
    let sign = |x: usize| match x {
        SIGN_ZERO => 0i8,
        SIGN_POS => 1,
        _ => -1,
    };
    let back = |s: i8| match s {
        0 => SIGN_ZERO,
        1 => SIGN_POS,
        _ => SIGN_NEG,
    };
    let mul = (0..9).map(|i| back(sign(i / 3) * sign(i % 3))).collect();
    verify_hyperfield(HyperringData {
        labels: add.labels().to_vec(),
        add: add.table().clone(),
        zero: SIGN_ZERO,
        mul,
        one: SIGN_POS,
    })
    .expect("sign hyperfield")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergroup::{SIGN_NEG, SIGN_POS, SIGN_ZERO};

    fn set(xs: &[usize]) -> SubsetMask {
        xs.iter().copied().collect()
    }

    /// Z/p with singleton addition.
    fn prime_field(p: usize) -> HyperringData {
        HyperringData {
            labels: (0..p).map(|i| i.to_string()).collect(),
            add: HyperOpTable::from_fn(p, |x, y| SubsetMask::singleton((x + y) % p)).unwrap(),
            zero: 0,
            mul: (0..p * p).map(|i| (i / p) * (i % p) % p).collect(),
            one: 1,
        }
    }

    #[test]
    fn sign_multiplication() {
        let f = sign_hyperfield();
        assert_eq!(f.mul(SIGN_NEG, SIGN_NEG), SIGN_POS);
        assert_eq!(f.mul(SIGN_NEG, SIGN_POS), SIGN_NEG);
        for x in 0..3 {
            assert_eq!(f.mul(SIGN_ZERO, x), SIGN_ZERO);
        }
        assert_eq!(f.inv(SIGN_NEG), Some(SIGN_NEG));
        assert_eq!(f.inv(SIGN_ZERO), None);
        let add = f.additive().table();
        assert!(check_distributivity(add, f.ring().mul_table()).passed());
    }

    #[test]
    fn prime_fields_are_hyperfields() {
        for p in [2, 3, 5, 7] {
            let f = verify_hyperfield(prime_field(p)).unwrap();
            assert_eq!(units(f.ring()), f.ring().carrier().difference(set(&[0])));
        }
    }

    #[test]
    fn z4_is_a_hyperring_not_a_hyperfield() {
        let mut d = prime_field(4);
        d.mul = (0..16).map(|i| (i / 4) * (i % 4) % 4).collect();
        let r = verify_hyperring(d.clone()).unwrap();
        assert_eq!(units(&r), set(&[1, 3]));
        let err = verify_hyperfield(d).unwrap_err();
        assert!(!err.get(MUL_GROUP).unwrap().passed());
        // {0, 2} is the unique maximal ideal of Z/4
        assert!(is_maximal(&r, set(&[0, 2])).unwrap().passed());
        let zero = is_maximal(&r, set(&[0])).unwrap();
        assert!(!zero.passed());
        assert_eq!(zero.witness.unwrap().sets[1], set(&[0, 2]));
        assert_eq!(hyperideals_in(&r, r.carrier()), vec![set(&[0]), set(&[0, 2]), set(&[0, 1, 2, 3])]);
    }

    #[test]
    fn broken_distributivity_detected() {
        let mut d = prime_field(3);
        // 2*2 = 1 replaced by 2*2 = 2 breaks the ring
        d.mul[2 * 3 + 2] = 2;
        let err = verify_hyperring(d).unwrap_err();
        assert!(err.failures().any(|f| f.name == R3 || f.name == R2_MONOID));
    }

    #[test]
    fn ideals_of_sign_hyperfield() {
        let f = sign_hyperfield();
        let r = f.ring();
        assert!(verify_hyperideal(r, set(&[SIGN_ZERO])).unwrap().passed());
        assert!(verify_hyperideal(r, r.carrier()).unwrap().passed());
        assert!(!is_maximal(r, r.carrier()).unwrap().passed());
        assert!(is_maximal(r, set(&[SIGN_ZERO])).unwrap().passed());
        assert!(matches!(verify_hyperideal(r, SubsetMask::EMPTY), Err(HyperError::EmptyIdeal)));
        // {0, 1} is not closed under negation
        assert!(!verify_hyperideal(r, set(&[SIGN_ZERO, SIGN_POS])).unwrap().passed());
    }

    #[test]
    fn ideal_with_unit_is_everything() {
        let f = sign_hyperfield();
        let r = f.ring();
        for ideal in hyperideals_in(r, r.carrier()) {
            if !ideal.intersection(units(r)).is_empty() {
                assert_eq!(ideal, r.carrier());
            }
        }
    }

    #[test]
    fn valuation_hyperrings_of_sign() {
        let f = sign_hyperfield();
        assert!(is_valuation_hyperring(&f, f.ring().carrier()).passed());
        // {0, 1}: 1 + 1 = {1}, closed under *, but -1 is missing
        let d = is_valuation_hyperring(&f, set(&[SIGN_ZERO, SIGN_POS]));
        assert!(!d.passed());
        assert!(d.details.contains("negation"));
    }
}
