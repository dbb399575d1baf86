//! Orders on canonical hypergroups: the domination relation `A ↗ B`, order
//! compatibility, positive cones and the relation a cone induces.

use crate::diagnostic::{Diagnostic, DiagnosticBundle, Witness};
use crate::error::{HyperError, Result};
use crate::hypergroup::FiniteCanonicalHypergroup;
use crate::{ElementId, SubsetMask};

pub const COMPATIBILITY: &str = "order compatibility a<=b => a*c ↗ b*c";
pub const FVK: [&str; 4] = [
    "lemma part 1: {a} ↗ B => a <= b for all b in B",
    "lemma part 2: x > e => x^-1 < e",
    "lemma part 3: x, y >= e => b >= e for b in x*y",
    "lemma part 4: x > e, y >= e => b > e for b in x*y",
];
pub const P1: &str = "P1 P ∩ -P = {e}";
pub const P2: &str = "P2 P*P ⊆ P";
pub const P3: &str = "P3 P ∪ -P = H";

/// A partial order on `{0, .., n-1}`, stored as up-sets: `up[x] = {y : x <= y}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderRelation {
    up: Vec<SubsetMask>,
    total: bool,
}

impl OrderRelation {
    /// Validates reflexivity, antisymmetry and transitivity of `leq`.
    pub fn from_fn(n: usize, leq: impl Fn(ElementId, ElementId) -> bool) -> Result<Self> {
        let up: Vec<SubsetMask> = (0..n).map(|x| (0..n).filter(|&y| leq(x, y)).collect()).collect();
        Self::from_up_sets(up)
    }

    pub fn from_up_sets(up: Vec<SubsetMask>) -> Result<Self> {
        let report = classify_relation(&up);
        if !(report.reflexive && report.antisymmetric && report.transitive) {
            let d = report.diagnostics.failures().next().expect("some property failed");
            return Err(HyperError::NotAnOrder(d.details.clone()));
        }
        Ok(OrderRelation { total: report.total, up })
    }

    /// Reflexive-transitive closure of the given `a <= b` pairs.
    pub fn from_pairs(n: usize, pairs: &[(ElementId, ElementId)]) -> Result<Self> {
        let mut up: Vec<SubsetMask> = (0..n).map(SubsetMask::singleton).collect();
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(HyperError::ElementOutOfRange { index: a.max(b), size: n });
            }
            up[a].insert(b);
        }
        loop {
            let mut changed = false;
            for x in 0..n {
                let mut reach = up[x];
                for y in up[x] {
                    reach = reach.union(up[y]);
                }
                if reach != up[x] {
                    up[x] = reach;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Self::from_up_sets(up)
    }

    /// The order `chain[0] < chain[1] < ...`; elements not in the chain stay incomparable.
    pub fn chain(n: usize, chain: &[ElementId]) -> Result<Self> {
        let pairs: Vec<_> = chain.windows(2).map(|w| (w[0], w[1])).collect();
        if chain.iter().any(|&x| x >= n) {
            let bad = *chain.iter().find(|&&x| x >= n).unwrap();
            return Err(HyperError::ElementOutOfRange { index: bad, size: n });
        }
        Self::from_pairs(n, &pairs)
    }

    /// Only `x <= x`.
    pub fn discrete(n: usize) -> Self {
        Self::from_pairs(n, &[]).expect("equality is an order")
    }

    pub fn size(&self) -> usize {
        self.up.len()
    }

    #[inline]
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: ElementId, b: ElementId) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn up_set(&self, x: ElementId) -> SubsetMask {
        self.up[x]
    }

    pub fn up_sets(&self) -> &[SubsetMask] {
        &self.up
    }

    pub fn is_total(&self) -> bool {
        self.total
    }

    pub fn incomparable_pair(&self) -> Option<(ElementId, ElementId)> {
        let n = self.size();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| !self.leq(a, b) && !self.leq(b, a))
    }

    /// Fails with [`HyperError::PartialOrder`] unless the order is linear.
    pub fn require_total(&self) -> Result<()> {
        match self.incomparable_pair() {
            None => Ok(()),
            Some((a, b)) => Err(HyperError::PartialOrder(a, b)),
        }
    }

    /// Minimum of two comparable elements.
    pub fn min_of(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        if self.leq(a, b) {
            Some(a)
        } else if self.leq(b, a) {
            Some(b)
        } else {
            None
        }
    }

    /// Elements sorted ascending. Only meaningful for total orders.
    pub fn sorted(&self) -> Vec<ElementId> {
        let mut xs: Vec<ElementId> = (0..self.size()).collect();
        xs.sort_by_key(|&x| std::cmp::Reverse(self.up[x].len()));
        xs
    }

    pub fn permuted(&self, perm: &[ElementId]) -> Self {
        let mut up = vec![SubsetMask::EMPTY; self.size()];
        for x in 0..self.size() {
            up[perm[x]] = self.up[x].map(|y| perm[y]);
        }
        OrderRelation { up, total: self.total }
    }
}

/// `A ↗ B`: every `b` in `B` has some `a` in `A` with `a <= b`.
pub fn dominates(a_set: SubsetMask, b_set: SubsetMask, order: &OrderRelation) -> bool {
    let mut covered = SubsetMask::EMPTY;
    for a in a_set {
        covered = covered.union(order.up_set(a));
    }
    b_set.is_subset(covered)
}

pub fn check_compatibility(h: &FiniteCanonicalHypergroup, order: &OrderRelation) -> Diagnostic {
    let n = h.size();
    if order.size() != n {
        return Diagnostic::fail(
            COMPATIBILITY,
            Witness::default(),
            format!("order on {} elements, hypergroup has {n}", order.size()),
        );
    }
    for a in 0..n {
        for b in order.up_set(a) {
            for c in 0..n {
                let (ac, bc) = (h.op(a, c), h.op(b, c));
                if !dominates(ac, bc, order) {
                    return Diagnostic::fail(
                        COMPATIBILITY,
                        Witness::elements([a, b, c]).with_sets([ac, bc]),
                        format!(
                            "{} <= {} but {} is not ↗ {}",
                            h.label(a),
                            h.label(b),
                            h.show(ac),
                            h.show(bc)
                        ),
                    );
                }
            }
        }
    }
    Diagnostic::pass(COMPATIBILITY)
}

/// `(H, *, e, <=)` with the compatibility condition verified.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedCanonicalHypergroup {
    hypergroup: FiniteCanonicalHypergroup,
    order: OrderRelation,
}

impl OrderedCanonicalHypergroup {
    pub fn new(hypergroup: FiniteCanonicalHypergroup, order: OrderRelation) -> Result<Self> {
        let d = check_compatibility(&hypergroup, &order);
        if !d.passed() {
            return Err(HyperError::Verification(DiagnosticBundle(vec![d])));
        }
        Ok(OrderedCanonicalHypergroup { hypergroup, order })
    }

    pub fn hypergroup(&self) -> &FiniteCanonicalHypergroup {
        &self.hypergroup
    }

    pub fn order(&self) -> &OrderRelation {
        &self.order
    }

    pub fn size(&self) -> usize {
        self.hypergroup.size()
    }

    pub fn identity(&self) -> ElementId {
        self.hypergroup.identity()
    }

    pub fn relabeled(&self, perm: &[ElementId]) -> Self {
        OrderedCanonicalHypergroup {
            hypergroup: self.hypergroup.relabeled(perm),
            order: self.order.permuted(perm),
        }
    }
}

/// The sign hypergroup with `-1 <= 0 <= 1`.
pub fn ordered_sign_hypergroup() -> OrderedCanonicalHypergroup {
    use crate::hypergroup::{sign_hypergroup, SIGN_NEG, SIGN_POS, SIGN_ZERO};
    let order = OrderRelation::chain(3, &[SIGN_NEG, SIGN_ZERO, SIGN_POS]).expect("chain");
    OrderedCanonicalHypergroup::new(sign_hypergroup(), order).expect("sign order is compatible")
}

/// Machine check of the four-part lemma on ordered canonical hypergroups.
/// Requires a linear order.
pub fn check_fvk_properties(oh: &OrderedCanonicalHypergroup) -> Result<DiagnosticBundle> {
    let order = oh.order();
    order.require_total()?;
    let h = oh.hypergroup();
    let n = h.size();
    let e = h.identity();
    let mut bundle = DiagnosticBundle::new();

    let part1 = (|| {
        for a in 0..n {
            for b_set in SubsetMask::all_subsets(n).skip(1) {
                if dominates(SubsetMask::singleton(a), b_set, order) {
                    if let Some(b) = b_set.iter().find(|&b| !order.leq(a, b)) {
                        return Diagnostic::fail(FVK[0], Witness::elements([a, b]).with_sets([b_set]), "");
                    }
                }
            }
        }
        Diagnostic::pass(FVK[0])
    })();
    bundle.push(part1);

    let part2 = (0..n)
        .find(|&x| order.lt(e, x) && !order.lt(h.inverse(x), e))
        .map(|x| {
            Diagnostic::fail(
                FVK[1],
                Witness::elements([x, h.inverse(x)]),
                format!("{} > e but its inverse {} is not < e", h.label(x), h.label(h.inverse(x))),
            )
        })
        .unwrap_or_else(|| Diagnostic::pass(FVK[1]));
    bundle.push(part2);

    let mut part3 = Diagnostic::pass(FVK[2]);
    let mut part4 = Diagnostic::pass(FVK[3]);
    'outer: for x in 0..n {
        for y in 0..n {
            if !order.leq(e, x) || !order.leq(e, y) {
                continue;
            }
            for b in h.op(x, y) {
                if part3.passed() && !order.leq(e, b) {
                    part3 = Diagnostic::fail(FVK[2], Witness::elements([x, y, b]), "");
                }
                if part4.passed() && order.lt(e, x) && !order.lt(e, b) {
                    part4 = Diagnostic::fail(FVK[3], Witness::elements([x, y, b]), "");
                }
                if !part3.passed() && !part4.passed() {
                    break 'outer;
                }
            }
        }
    }
    bundle.push(part3);
    bundle.push(part4);
    Ok(bundle)
}

/// A verified positive cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PositiveCone(SubsetMask);

impl PositiveCone {
    pub fn new(h: &FiniteCanonicalHypergroup, p: SubsetMask) -> Result<Self> {
        let bundle = verify_positive_cone(h, p);
        if bundle.all_passed() {
            Ok(PositiveCone(p))
        } else {
            Err(HyperError::Verification(bundle))
        }
    }

    pub fn mask(self) -> SubsetMask {
        self.0
    }
}

/// P1, P2 and P3, each reported with its own witness.
pub fn verify_positive_cone(h: &FiniteCanonicalHypergroup, p: SubsetMask) -> DiagnosticBundle {
    let e = SubsetMask::singleton(h.identity());
    let neg = h.negate(p);
    let mut bundle = DiagnosticBundle::new();

    let meet = p.intersection(neg);
    bundle.push(if meet == e {
        Diagnostic::pass(P1)
    } else {
        Diagnostic::fail(P1, Witness::default().with_sets([p, neg, meet]), format!("P ∩ -P = {}", h.show(meet)))
    });

    let mut p2 = Diagnostic::pass(P2);
    'p2: for x in p {
        for y in p {
            let xy = h.op(x, y);
            if !xy.is_subset(p) {
                p2 = Diagnostic::fail(
                    P2,
                    Witness::elements([x, y]).with_sets([xy]),
                    format!("{}*{} = {} leaves P", h.label(x), h.label(y), h.show(xy)),
                );
                break 'p2;
            }
        }
    }
    bundle.push(p2);

    let missing = h.carrier().difference(p.union(neg));
    bundle.push(match missing.first() {
        None => Diagnostic::pass(P3),
        Some(x) => Diagnostic::fail(P3, Witness::elements([x]), format!("{} not in P ∪ -P", h.label(x))),
    });
    bundle
}

/// Property classification of an arbitrary binary relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    /// Row `x` is `{y : x R y}`.
    pub matrix: Vec<SubsetMask>,
    pub reflexive: bool,
    pub antisymmetric: bool,
    pub transitive: bool,
    pub total: bool,
    pub diagnostics: DiagnosticBundle,
}

impl RelationReport {
    pub fn is_order(&self) -> bool {
        self.reflexive && self.antisymmetric && self.transitive
    }

    pub fn is_linear_order(&self) -> bool {
        self.is_order() && self.total
    }

    pub fn as_order(&self) -> Option<OrderRelation> {
        self.is_order().then(|| OrderRelation { up: self.matrix.clone(), total: self.total })
    }

    pub fn holds(&self, x: ElementId, y: ElementId) -> bool {
        self.matrix[x].contains(y)
    }
}

pub fn classify_relation(rows: &[SubsetMask]) -> RelationReport {
    let n = rows.len();
    let r = |x: usize, y: usize| rows[x].contains(y);
    let pairs = || (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)));

    let refl = (0..n).find(|&x| !r(x, x));
    let anti = pairs().find(|&(x, y)| x != y && r(x, y) && r(y, x));
    let trans = pairs().find_map(|(x, y)| {
        if !r(x, y) {
            return None;
        }
        (0..n).find(|&z| r(y, z) && !r(x, z)).map(|z| (x, y, z))
    });
    let total = pairs().find(|&(x, y)| !r(x, y) && !r(y, x));

    let mut diagnostics = DiagnosticBundle::new();
    diagnostics.push(match refl {
        None => Diagnostic::pass("reflexive"),
        Some(x) => Diagnostic::fail("reflexive", Witness::elements([x]), format!("not {x} R {x}")),
    });
    diagnostics.push(match anti {
        None => Diagnostic::pass("antisymmetric"),
        Some((x, y)) => Diagnostic::fail("antisymmetric", Witness::elements([x, y]), format!("{x} R {y} and {y} R {x}")),
    });
    diagnostics.push(match trans {
        None => Diagnostic::pass("transitive"),
        Some((x, y, z)) => Diagnostic::fail(
            "transitive",
            Witness::elements([x, y, z]),
            format!("{x} R {y}, {y} R {z} but not {x} R {z}"),
        ),
    });
    diagnostics.push(match total {
        None => Diagnostic::pass("total"),
        Some((x, y)) => Diagnostic::fail("total", Witness::elements([x, y]), format!("{x}, {y} incomparable")),
    });
    RelationReport {
        matrix: rows.to_vec(),
        reflexive: refl.is_none(),
        antisymmetric: anti.is_none(),
        transitive: trans.is_none(),
        total: total.is_none(),
        diagnostics,
    }
}

/// `x <= y  iff  (y * x^-1) ∩ P` is nonempty. The result is classified, not
/// assumed to be an order.
pub fn relation_from_cone(h: &FiniteCanonicalHypergroup, p: PositiveCone) -> RelationReport {
    let n = h.size();
    let rows: Vec<SubsetMask> = (0..n)
        .map(|x| (0..n).filter(|&y| !h.op(y, h.inverse(x)).intersection(p.mask()).is_empty()).collect())
        .collect();
    classify_relation(&rows)
}

/// `P = {x : x >= e}` together with the cone verdict on it.
pub fn cone_from_order(oh: &OrderedCanonicalHypergroup) -> (SubsetMask, DiagnosticBundle) {
    let p = oh.order().up_set(oh.identity());
    let verdict = verify_positive_cone(oh.hypergroup(), p);
    (p, verdict)
}
