//! Hypervaluations `w: F -> H ∪ {∞}` from a hyperfield onto an ordered
//! canonical hypergroup, the derived `O_w`, `U_w`, `m_w`, the value group
//! `F*/U_w`, and the decomposition `w = h ∘ v` through it.
//!
//! `∞` is a sentinel strictly above every element of `H`; products with
//! zero are not compared against the hyperoperation, since `w(0 * y) = ∞`
//! and `∞ * a` is taken to be `{∞}`.

mod computable;

pub use computable::{
    decompose_computable, o_equal_without_isomorphism_report, sampled_check, sign_hypervaluation_padic,
    ComputableDecomposition, ComputableField, ComputableHypervaluation, MembershipPoint, OEqualReport, RationalField,
    SampleFailure, SampleReport, SampledCheck, BACKING_ADD, BACKING_MUL, COSET_REP, H_COMPOSITE, H_HOMOMORPHISM, H_ORDER,
    SAME_RING as SAMPLED_SAME_RING,
};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagnostic::{Diagnostic, DiagnosticBundle, Witness};
use crate::error::{HyperError, Result};
use crate::hypergroup::{embed_group, trivial_hypergroup, FiniteCanonicalHypergroup};
use crate::hyperring::{
    hyperideals_in, is_valuation_hyperring, units_in, verify_hyperideal_in, FiniteHyperfield,
};
use crate::morphism::{is_homomorphism, is_order_preserving, HypergroupMap};
use crate::order::{classify_relation, OrderRelation, OrderedCanonicalHypergroup};
use crate::{ElementId, SubsetMask};

pub const V1: &str = "V1 w(x) = ∞ iff x = 0";
pub const V2: &str = "V2 w(-x) = w(x)";
pub const V3: &str = "V3 w(xy) ∈ w(x)*w(y)";
pub const V4: &str = "V4 z ∈ x+y => w(z) >= min(w(x), w(y))";
pub const SURJECTIVE: &str = "surjective onto H ∪ {∞}";
pub const VALPRO_ONE: &str = "w(1) = e";
pub const VALPRO_INV: &str = "w(x^-1) = w(x)^-1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Value {
    Finite(ElementId),
    Infinity,
}

impl Value {
    pub fn finite(self) -> Option<ElementId> {
        match self {
            Value::Finite(h) => Some(h),
            Value::Infinity => None,
        }
    }

    pub fn show(self, h: &FiniteCanonicalHypergroup) -> String {
        match self {
            Value::Finite(x) => h.label(x).to_string(),
            Value::Infinity => "inf".into(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(x) => write!(f, "{x}"),
            Value::Infinity => f.write_str("inf"),
        }
    }
}

/// `a <= b` with `∞` on top.
pub fn value_leq(order: &OrderRelation, a: Value, b: Value) -> bool {
    match (a, b) {
        (_, Value::Infinity) => true,
        (Value::Infinity, Value::Finite(_)) => false,
        (Value::Finite(a), Value::Finite(b)) => order.leq(a, b),
    }
}

/// Minimum under a total order, ignoring `∞`.
pub fn value_min(order: &OrderRelation, a: Value, b: Value) -> Value {
    if value_leq(order, a, b) {
        a
    } else {
        b
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteHypervaluation {
    domain: FiniteHyperfield,
    codomain: OrderedCanonicalHypergroup,
    values: Vec<Value>,
}

impl FiniteHypervaluation {
    /// Shape and range checks only; the axioms are [`check_hypervaluation`].
    pub fn new(domain: FiniteHyperfield, codomain: OrderedCanonicalHypergroup, values: Vec<Value>) -> Result<Self> {
        if values.len() != domain.size() {
            return Err(HyperError::TableShape { expected: domain.size(), found: values.len() });
        }
        for v in &values {
            if let Value::Finite(h) = *v {
                if h >= codomain.size() {
                    return Err(HyperError::ElementOutOfRange { index: h, size: codomain.size() });
                }
            }
        }
        Ok(FiniteHypervaluation { domain, codomain, values })
    }

    /// Every nonzero element to the identity of the one-element hypergroup.
    pub fn trivial(domain: FiniteHyperfield) -> Self {
        let codomain = OrderedCanonicalHypergroup::new(trivial_hypergroup(), OrderRelation::discrete(1)).expect("trivial");
        let values = (0..domain.size())
            .map(|x| if x == domain.zero() { Value::Infinity } else { Value::Finite(0) })
            .collect();
        FiniteHypervaluation { domain, codomain, values }
    }

    pub fn domain(&self) -> &FiniteHyperfield {
        &self.domain
    }

    pub fn codomain(&self) -> &OrderedCanonicalHypergroup {
        &self.codomain
    }

    pub fn value(&self, x: ElementId) -> Value {
        self.values[x]
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    fn order(&self) -> &OrderRelation {
        self.codomain.order()
    }

    fn h(&self) -> &FiniteCanonicalHypergroup {
        self.codomain.hypergroup()
    }

    fn at_least(&self, x: ElementId, bound: ElementId) -> bool {
        value_leq(self.order(), Value::Finite(bound), self.values[x])
    }

    /// Transport along `perm_f` on the domain and `perm_h` on the codomain.
    pub fn relabeled(&self, perm_f: &[ElementId], perm_h: &[ElementId]) -> Self {
        let mut values = vec![Value::Infinity; self.values.len()];
        for (x, v) in self.values.iter().enumerate() {
            values[perm_f[x]] = match *v {
                Value::Finite(h) => Value::Finite(perm_h[h]),
                Value::Infinity => Value::Infinity,
            };
        }
        FiniteHypervaluation { domain: self.domain.relabeled(perm_f), codomain: self.codomain.relabeled(perm_h), values }
    }

    fn show(&self, v: Value) -> String {
        v.show(self.h())
    }
}

/// V1-V4 and surjectivity, exhaustively. Rejects a codomain whose order is
/// not linear, since V4 needs `min`.
pub fn check_hypervaluation(w: &FiniteHypervaluation) -> Result<DiagnosticBundle> {
    w.order().require_total()?;
    let f = &w.domain;
    let n = f.size();
    let mut bundle = DiagnosticBundle::new();

    let v1 = (0..n).find(|&x| (w.values[x] == Value::Infinity) != (x == f.zero()));
    bundle.push(match v1 {
        None => Diagnostic::pass(V1),
        Some(x) => Diagnostic::fail(
            V1,
            Witness::elements([x]).with_values([w.show(w.values[x])]),
            format!("w({}) = {}", f.label(x), w.show(w.values[x])),
        ),
    });

    let v2 = (0..n).find(|&x| w.values[f.neg(x)] != w.values[x]);
    bundle.push(match v2 {
        None => Diagnostic::pass(V2),
        Some(x) => Diagnostic::fail(
            V2,
            Witness::elements([x, f.neg(x)]),
            format!("w({}) != w(-{})", f.label(f.neg(x)), f.label(x)),
        ),
    });

    let mut v3 = Diagnostic::pass(V3);
    'v3: for x in f.nonzero() {
        for y in f.nonzero() {
            let (Value::Finite(a), Value::Finite(b)) = (w.values[x], w.values[y]) else { continue };
            let xy = f.mul(x, y);
            let ok = matches!(w.values[xy], Value::Finite(c) if w.h().op(a, b).contains(c));
            if !ok {
                v3 = Diagnostic::fail(
                    V3,
                    Witness::elements([x, y]).with_values([w.show(w.values[xy])]).with_sets([w.h().op(a, b)]),
                    format!(
                        "w({}*{}) = {} not in {}",
                        f.label(x),
                        f.label(y),
                        w.show(w.values[xy]),
                        w.h().show(w.h().op(a, b))
                    ),
                );
                break 'v3;
            }
        }
    }
    bundle.push(v3);

    let mut v4 = Diagnostic::pass(V4);
    'v4: for x in 0..n {
        for y in 0..n {
            let m = value_min(w.order(), w.values[x], w.values[y]);
            for z in f.add(x, y) {
                if !value_leq(w.order(), m, w.values[z]) {
                    v4 = Diagnostic::fail(
                        V4,
                        Witness::elements([x, y, z]).with_values([w.show(w.values[z]), w.show(m)]),
                        format!(
                            "{} ∈ {}+{} but w = {} < {}",
                            f.label(z),
                            f.label(x),
                            f.label(y),
                            w.show(w.values[z]),
                            w.show(m)
                        ),
                    );
                    break 'v4;
                }
            }
        }
    }
    bundle.push(v4);

    let image: SubsetMask = w.values.iter().filter_map(|v| v.finite()).collect();
    let missing = w.h().carrier().difference(image);
    bundle.push(if missing.is_empty() {
        Diagnostic::pass(SURJECTIVE)
    } else {
        Diagnostic::fail(SURJECTIVE, Witness::default().with_sets([missing]), format!("missed {}", w.h().show(missing)))
    });
    Ok(bundle)
}

/// `w(1) = e` and `w(x^-1) = w(x)^-1` for nonzero `x`.
pub fn check_valpro(w: &FiniteHypervaluation) -> DiagnosticBundle {
    let f = &w.domain;
    let e = w.codomain.identity();
    let mut bundle = DiagnosticBundle::new();
    bundle.push(if w.values[f.one()] == Value::Finite(e) {
        Diagnostic::pass(VALPRO_ONE)
    } else {
        Diagnostic::fail(VALPRO_ONE, Witness::elements([f.one()]), format!("w(1) = {}", w.show(w.values[f.one()])))
    });
    let bad = f.nonzero().find(|&x| {
        let xi = f.inv(x).expect("nonzero");
        match (w.values[x], w.values[xi]) {
            (Value::Finite(a), Value::Finite(b)) => w.h().inverse(a) != b,
            _ => true,
        }
    });
    bundle.push(match bad {
        None => Diagnostic::pass(VALPRO_INV),
        Some(x) => Diagnostic::fail(VALPRO_INV, Witness::elements([x]), format!("at x = {}", f.label(x))),
    });
    bundle
}

/// `O_w = {x : w(x) >= e}`, including 0.
pub fn valuation_ring(w: &FiniteHypervaluation) -> SubsetMask {
    let e = w.codomain.identity();
    (0..w.domain.size()).filter(|&x| w.at_least(x, e)).collect()
}

/// `U_w = {x : w(x) = e}`.
pub fn unit_group(w: &FiniteHypervaluation) -> SubsetMask {
    let e = w.codomain.identity();
    (0..w.domain.size()).filter(|&x| w.values[x] == Value::Finite(e)).collect()
}

/// `m_w = {x : w(x) > e}`, including 0.
pub fn maximal_ideal(w: &FiniteHypervaluation) -> SubsetMask {
    let e = w.codomain.identity();
    (0..w.domain.size())
        .filter(|&x| match w.values[x] {
            Value::Infinity => true,
            Value::Finite(a) => w.order().lt(e, a),
        })
        .collect()
}

pub const O_VALUATION_RING: &str = "O_w is a valuation hyperring";
pub const U_UNITS: &str = "U_w = units of O_w";
pub const U_GROUP: &str = "U_w is a multiplicative group";
pub const M_TRICHOTOMY: &str = "m_w = O_w \\ U_w";
pub const M_IDEAL: &str = "m_w is a hyperideal of O_w";
pub const M_UNIQUE_MAXIMAL: &str = "m_w is the unique maximal hyperideal";
pub const UNIT_IDEALS: &str = "hyperideals containing a unit are O_w";

fn set_diag(name: &str, ok: bool, sets: impl Into<Vec<SubsetMask>>, details: String) -> Diagnostic {
    if ok {
        Diagnostic::pass(name)
    } else {
        Diagnostic::fail(name, Witness::default().with_sets(sets), details)
    }
}

/// The valuation-hyperring postconditions: `O_w`, `U_w`, `m_w` as above, and
/// the value group checks of [`value_group`].
///
/// V1-V4 do not imply all of them. When `H` has an element `x < e` with
/// `x^-1 = x`, nothing forces `w(a^-1) > e` from `w(a) < e`: on `GF(4)`,
/// `w(1) = e`, `w(a) = x` into `{e, x}` with `x*x = {e, x}` is a
/// hypervaluation whose `O_w = {0, 1}` is not a valuation hyperring.
pub fn proposition_checks(w: &FiniteHypervaluation) -> Result<DiagnosticBundle> {
    let f = &w.domain;
    let r = f.ring();
    let o = valuation_ring(w);
    let u = unit_group(w);
    let m = maximal_ideal(w);
    let mut bundle = DiagnosticBundle::new();

    bundle.push(Diagnostic { name: O_VALUATION_RING.into(), ..is_valuation_hyperring(f, o) });
    let units = units_in(r, o);
    bundle.push(set_diag(U_UNITS, units == u, [u, units], format!("U_w = {:?}, units = {units:?}", u)));
    let closed = u.iter().all(|x| u.iter().all(|y| u.contains(f.mul(x, y))) && f.inv(x).is_some_and(|i| u.contains(i)));
    bundle.push(set_diag(U_GROUP, closed && u.contains(f.one()), [u], "not closed".into()));
    bundle.push(set_diag(M_TRICHOTOMY, m == o.difference(u), [m, o.difference(u)], String::new()));
    bundle.push(Diagnostic { name: M_IDEAL.into(), ..verify_hyperideal_in(r, o, m)? });

    let ideals = hyperideals_in(r, o);
    let proper: Vec<SubsetMask> = ideals.iter().copied().filter(|&i| i != o).collect();
    let maximal: Vec<SubsetMask> =
        proper.iter().copied().filter(|&i| !proper.iter().any(|&j| j != i && i.is_subset(j))).collect();
    bundle.push(set_diag(M_UNIQUE_MAXIMAL, maximal == [m], maximal.clone(), format!("maximal: {maximal:?}")));
    let bad = ideals.iter().copied().find(|&i| !i.intersection(u).is_empty() && i != o);
    bundle.push(set_diag(UNIT_IDEALS, bad.is_none(), bad.into_iter().collect::<Vec<_>>(), String::new()));

    match value_group(w) {
        Ok(g) => bundle.extend(g.report),
        Err(HyperError::Verification(b)) => bundle.extend(b),
        Err(e) => return Err(e),
    }
    Ok(bundle)
}

pub const COSET_PRODUCT: &str = "coset product well defined";
pub const COSET_ORDER: &str = "coset order well defined";
pub const G_LINEAR: &str = "value group order is linear";
pub const G_COMPATIBLE: &str = "value group order compatible with product";

/// `G = F*/U_w` with `xU <= yU iff yx^-1 ∈ O_w`.
#[derive(Debug, Clone)]
pub struct ValueGroup {
    /// Cosets of `U_w`, ordered by smallest member.
    pub cosets: Vec<SubsetMask>,
    /// Coset index of each nonzero element; `None` at zero.
    pub coset_of: Vec<Option<usize>>,
    pub ordered: OrderedCanonicalHypergroup,
    pub report: DiagnosticBundle,
}

impl ValueGroup {
    pub fn size(&self) -> usize {
        self.cosets.len()
    }

    pub fn group(&self) -> &FiniteCanonicalHypergroup {
        self.ordered.hypergroup()
    }

    pub fn representative(&self, c: usize) -> ElementId {
        self.cosets[c].first().expect("nonempty coset")
    }
}

/// Fails with [`HyperError::Verification`] if `U_w` is not a subgroup or
/// `G` does not come out as a linearly ordered abelian group.
pub fn value_group(w: &FiniteHypervaluation) -> Result<ValueGroup> {
    let f = &w.domain;
    let n = f.size();
    let o = valuation_ring(w);
    let u = unit_group(w);
    let mut report = DiagnosticBundle::new();
    let subgroup = u.contains(f.one()) && u.iter().all(|x| u.iter().all(|y| u.contains(f.mul(x, y))));
    if !subgroup {
        report.push(Diagnostic::fail(U_GROUP, Witness::default().with_sets([u]), "U_w is not a subgroup"));
        return Err(HyperError::Verification(report));
    }

    let mut cosets: Vec<SubsetMask> = Vec::new();
    let mut coset_of = vec![None; n];
    for x in f.nonzero() {
        if coset_of[x].is_some() {
            continue;
        }
        let c: SubsetMask = u.iter().map(|g| f.mul(x, g)).collect();
        for y in c {
            coset_of[y] = Some(cosets.len());
        }
        cosets.push(c);
    }
    let k = cosets.len();
    let rep = |c: usize| cosets[c].first().unwrap();

    let mut product = vec![vec![0; k]; k];
    let mut well_defined = Diagnostic::pass(COSET_PRODUCT);
    for i in 0..k {
        for j in 0..k {
            product[i][j] = coset_of[f.mul(rep(i), rep(j))].unwrap();
            for x in cosets[i] {
                for y in cosets[j] {
                    if coset_of[f.mul(x, y)] != Some(product[i][j]) && well_defined.passed() {
                        well_defined = Diagnostic::fail(COSET_PRODUCT, Witness::elements([x, y]), "");
                    }
                }
            }
        }
    }
    report.push(well_defined);

    let mut rows = vec![SubsetMask::EMPTY; k];
    let mut order_defined = Diagnostic::pass(COSET_ORDER);
    for i in 0..k {
        for j in 0..k {
            let leq = o.contains(f.mul(rep(j), f.inv(rep(i)).unwrap()));
            if leq {
                rows[i].insert(j);
            }
            for x in cosets[i] {
                for y in cosets[j] {
                    if o.contains(f.mul(y, f.inv(x).unwrap())) != leq && order_defined.passed() {
                        order_defined = Diagnostic::fail(COSET_ORDER, Witness::elements([x, y]), "");
                    }
                }
            }
        }
    }
    report.push(order_defined);
    let classified = classify_relation(&rows);
    report.push(if classified.is_linear_order() {
        Diagnostic::pass(G_LINEAR)
    } else {
        let failed: Vec<String> = classified.diagnostics.failures().map(|d| d.name.clone()).collect();
        Diagnostic::fail(G_LINEAR, Witness::default().with_sets(rows.clone()), format!("not {}", failed.join(", ")))
    });
    if !report.all_passed() {
        return Err(HyperError::Verification(report));
    }

    let labels = (0..k).map(|c| format!("{}U", f.label(rep(c)))).collect();
    let group = embed_group(&product, coset_of[f.one()].unwrap(), Some(labels))?;
    let order = OrderRelation::from_up_sets(rows)?;
    let ordered = match OrderedCanonicalHypergroup::new(group, order) {
        Ok(oh) => {
            report.push(Diagnostic::pass(G_COMPATIBLE));
            oh
        }
        Err(HyperError::Verification(b)) => {
            report.extend(b.into_iter().map(|d| Diagnostic { name: G_COMPATIBLE.into(), ..d }).collect());
            return Err(HyperError::Verification(report));
        }
        Err(e) => return Err(e),
    };
    Ok(ValueGroup { cosets, coset_of, ordered, report })
}

pub const H_WELL_DEFINED: &str = "h(xU) = w(x) well defined";
pub const COMPOSITE: &str = "w = h ∘ v";
pub const SAME_RING: &str = "O_v = O_w";

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub value_group: ValueGroup,
    /// `v(x) = xU_w`, a hypervaluation onto the value group.
    pub v: FiniteHypervaluation,
    /// `h(xU_w) = w(x)`; `h(∞) = ∞` is implicit.
    pub h: HypergroupMap,
    pub report: DiagnosticBundle,
}

/// `w = h ∘ v` through the value group, with every postcondition checked.
/// Any failure is returned as [`HyperError::Verification`]; this happens for
/// the hypervaluations described at [`proposition_checks`].
pub fn decompose(w: &FiniteHypervaluation) -> Result<Decomposition> {
    let g = value_group(w)?;
    let f = &w.domain;
    let mut report = g.report.clone();

    let v_values = (0..f.size())
        .map(|x| match g.coset_of[x] {
            Some(c) => Value::Finite(c),
            None => Value::Infinity,
        })
        .collect();
    let v = FiniteHypervaluation::new(f.clone(), g.ordered.clone(), v_values)?;

    let h_values: Vec<ElementId> = (0..g.size())
        .map(|c| w.values[g.representative(c)].finite().expect("nonzero has finite value"))
        .collect();
    let constant = (0..g.size()).find(|&c| g.cosets[c].iter().any(|x| w.values[x] != Value::Finite(h_values[c])));
    report.push(match constant {
        None => Diagnostic::pass(H_WELL_DEFINED),
        Some(c) => Diagnostic::fail(H_WELL_DEFINED, Witness::default().with_sets([g.cosets[c]]), "w varies on a coset"),
    });
    let h = HypergroupMap::new(g.group().clone(), w.h().clone(), h_values)?;
    report.push(is_homomorphism(&h));
    report.push(is_order_preserving(&h, g.ordered.order(), w.order()));
    report.extend(check_hypervaluation(&v)?);

    let composite = (0..f.size()).find(|&x| {
        let via = match v.values[x] {
            Value::Finite(c) => Value::Finite(h.apply(c)),
            Value::Infinity => Value::Infinity,
        };
        via != w.values[x]
    });
    report.push(match composite {
        None => Diagnostic::pass(COMPOSITE),
        Some(x) => Diagnostic::fail(COMPOSITE, Witness::elements([x]), format!("at {}", f.label(x))),
    });
    let (ov, ow) = (valuation_ring(&v), valuation_ring(w));
    report.push(set_diag(SAME_RING, ov == ow, [ov, ow], format!("O_v = {ov:?}, O_w = {ow:?}")));

    if !report.all_passed() {
        return Err(HyperError::Verification(report));
    }
    Ok(Decomposition { value_group: g, v, h, report })
}
