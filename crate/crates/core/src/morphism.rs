//! Maps between finite canonical hypergroups: homomorphism checks and
//! isomorphism search.

use crate::diagnostic::{Diagnostic, Witness};
use crate::error::{HyperError, Result};
use crate::hypergroup::FiniteCanonicalHypergroup;
use crate::order::OrderRelation;
use crate::{ElementId, SubsetMask};

pub const HOMOMORPHISM: &str = "homomorphism f(a*b) ⊆ f(a)*f(b)";
pub const STRONG: &str = "strong homomorphism f(a*b) = f(a)*f(b)";
pub const BIJECTIVE: &str = "bijective";
pub const ORDER_PRESERVING: &str = "order preserving";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypergroupMap {
    source: FiniteCanonicalHypergroup,
    target: FiniteCanonicalHypergroup,
    map: Vec<ElementId>,
}

impl HypergroupMap {
    pub fn new(source: FiniteCanonicalHypergroup, target: FiniteCanonicalHypergroup, map: Vec<ElementId>) -> Result<Self> {
        if map.len() != source.size() {
            return Err(HyperError::TableShape { expected: source.size(), found: map.len() });
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.size()) {
            return Err(HyperError::ElementOutOfRange { index: bad, size: target.size() });
        }
        Ok(HypergroupMap { source, target, map })
    }

    pub fn source(&self) -> &FiniteCanonicalHypergroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteCanonicalHypergroup {
        &self.target
    }

    pub fn apply(&self, x: ElementId) -> ElementId {
        self.map[x]
    }

    pub fn image(&self, a: SubsetMask) -> SubsetMask {
        a.map(|x| self.map[x])
    }

    pub fn values(&self) -> &[ElementId] {
        &self.map
    }
}

fn identity_check(m: &HypergroupMap, name: &str) -> Option<Diagnostic> {
    let (e1, e2) = (m.source.identity(), m.target.identity());
    (m.map[e1] != e2).then(|| Diagnostic::fail(name, Witness::elements([e1]), "identity not preserved"))
}

fn check_products(m: &HypergroupMap, name: &str, strong: bool) -> Diagnostic {
    if let Some(d) = identity_check(m, name) {
        return d;
    }
    let n = m.source.size();
    for a in 0..n {
        for b in 0..n {
            let image = m.image(m.source.op(a, b));
            let target = m.target.op(m.map[a], m.map[b]);
            let ok = if strong { image == target } else { image.is_subset(target) };
            if !ok {
                return Diagnostic::fail(
                    name,
                    Witness::elements([a, b]).with_sets([image, target]),
                    format!(
                        "f({}*{}) = {} vs f(a)*f(b) = {}",
                        m.source.label(a),
                        m.source.label(b),
                        m.target.show(image),
                        m.target.show(target)
                    ),
                );
            }
        }
    }
    Diagnostic::pass(name)
}

pub fn is_homomorphism(m: &HypergroupMap) -> Diagnostic {
    check_products(m, HOMOMORPHISM, false)
}

pub fn is_strong_homomorphism(m: &HypergroupMap) -> Diagnostic {
    check_products(m, STRONG, true)
}

pub fn is_bijective(m: &HypergroupMap) -> Diagnostic {
    let image: SubsetMask = m.map.iter().copied().collect();
    Diagnostic::from_bool(
        BIJECTIVE,
        m.source.size() == m.target.size() && image == m.target.carrier(),
        format!("image {}", m.target.show(image)),
    )
}

/// `a <= b` implies `f(a) <= f(b)`.
pub fn is_order_preserving(m: &HypergroupMap, source: &OrderRelation, target: &OrderRelation) -> Diagnostic {
    let n = m.source.size();
    for a in 0..n {
        for b in source.up_set(a) {
            if !target.leq(m.map[a], m.map[b]) {
                return Diagnostic::fail(ORDER_PRESERVING, Witness::elements([a, b]), "order reversed or lost");
            }
        }
    }
    Diagnostic::pass(ORDER_PRESERVING)
}

/// Backtracking search for a bijection that is a strong homomorphism,
/// respects inverses and, when `orders` is given, is an order isomorphism.
/// `accept` vets each complete candidate (e.g. for multiplicative structure).
pub fn find_isomorphism_with(
    h1: &FiniteCanonicalHypergroup,
    h2: &FiniteCanonicalHypergroup,
    orders: Option<(&OrderRelation, &OrderRelation)>,
    accept: &dyn Fn(&[ElementId]) -> bool,
) -> Option<Vec<ElementId>> {
    let n = h1.size();
    if n != h2.size() {
        return None;
    }
    let mut assign: Vec<Option<ElementId>> = vec![None; n];
    let mut used = SubsetMask::EMPTY;
    assign[h1.identity()] = Some(h2.identity());
    used.insert(h2.identity());

    fn consistent(
        h1: &FiniteCanonicalHypergroup,
        h2: &FiniteCanonicalHypergroup,
        orders: Option<(&OrderRelation, &OrderRelation)>,
        assign: &[Option<ElementId>],
        x: ElementId,
    ) -> bool {
        let fx = assign[x].unwrap();
        if let Some(fi) = assign[h1.inverse(x)] {
            if fi != h2.inverse(fx) {
                return false;
            }
        }
        for y in 0..h1.size() {
            let Some(fy) = assign[y] else { continue };
            if let Some((o1, o2)) = orders {
                if o1.leq(x, y) != o2.leq(fx, fy) || o1.leq(y, x) != o2.leq(fy, fx) {
                    return false;
                }
            }
            let prod = h1.op(x, y);
            if prod.iter().all(|z| assign[z].is_some()) {
                let image: SubsetMask = prod.iter().map(|z| assign[z].unwrap()).collect();
                if image != h2.op(fx, fy) {
                    return false;
                }
            }
        }
        true
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        h1: &FiniteCanonicalHypergroup,
        h2: &FiniteCanonicalHypergroup,
        orders: Option<(&OrderRelation, &OrderRelation)>,
        accept: &dyn Fn(&[ElementId]) -> bool,
        assign: &mut Vec<Option<ElementId>>,
        used: &mut SubsetMask,
        next: ElementId,
    ) -> Option<Vec<ElementId>> {
        let n = h1.size();
        let Some(x) = (next..n).find(|&x| assign[x].is_none()) else {
            let full: Vec<ElementId> = assign.iter().map(|a| a.unwrap()).collect();
            // every product is checked once all its members are assigned
            let all_ok = (0..n).all(|x| consistent(h1, h2, orders, assign, x));
            return (all_ok && accept(&full)).then_some(full);
        };
        for y in 0..n {
            if used.contains(y) {
                continue;
            }
            assign[x] = Some(y);
            used.insert(y);
            if consistent(h1, h2, orders, assign, x) {
                if let Some(found) = go(h1, h2, orders, accept, assign, used, x + 1) {
                    return Some(found);
                }
            }
            assign[x] = None;
            used.remove(y);
        }
        None
    }

    if !consistent(h1, h2, orders, &assign, h1.identity()) {
        return None;
    }
    go(h1, h2, orders, accept, &mut assign, &mut used, 0)
}

pub fn find_isomorphism(
    h1: &FiniteCanonicalHypergroup,
    h2: &FiniteCanonicalHypergroup,
    orders: Option<(&OrderRelation, &OrderRelation)>,
) -> Option<Vec<ElementId>> {
    find_isomorphism_with(h1, h2, orders, &|_| true)
}
