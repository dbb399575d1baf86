//! Exhaustive enumeration of small structures, deduplicated up to
//! isomorphism, plus deliberately naive oracles to cross-check the search.
//!
//! Canonical forms fix the identity at index 0 and minimise the flattened
//! table over all permutations of the remaining indices.

use std::collections::{BTreeMap, BTreeSet};

use crate::diagnostic::DiagnosticBundle;
use crate::error::{HyperError, Result};
use crate::hypergroup::{default_labels, verify_canonical, FiniteCanonicalHypergroup, HyperOpTable};
use crate::hyperring::{verify_hyperfield, FiniteHyperfield, HyperringData};
use crate::order::{
    check_compatibility, relation_from_cone, verify_positive_cone, OrderRelation, OrderedCanonicalHypergroup,
    PositiveCone, RelationReport,
};
use crate::quotient::{reproduce_cone_counterexample, ConeCounterexampleReport};
use crate::valuation::{check_hypervaluation, FiniteHypervaluation, Value};
use crate::{ElementId, SubsetMask, CARRIER_CAP};

/// Upper bound on search nodes; exceeding it yields a partial catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { max_nodes: u64::MAX };
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 50_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct Catalog<T> {
    pub kind: &'static str,
    pub order: usize,
    pub entries: Vec<T>,
    pub exhaustive: bool,
    pub nodes: u64,
}

impl<T> Catalog<T> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// All permutations of `0..n` that fix 0, as `perm[old] = new`.
pub fn permutations_fixing_zero(n: usize) -> Vec<Vec<ElementId>> {
    fn go(rest: &mut Vec<ElementId>, cur: &mut Vec<ElementId>, out: &mut Vec<Vec<ElementId>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    go(&mut (1..n).collect(), &mut vec![0], &mut out);
    out
}

fn table_key(t: &HyperOpTable) -> Vec<u32> {
    t.entries().iter().map(|m| m.bits()).collect()
}

/// Minimal key of a table over permutations fixing index 0, with the
/// permutation achieving it.
pub fn canonical_table(t: &HyperOpTable) -> (Vec<u32>, Vec<ElementId>) {
    permutations_fixing_zero(t.size())
        .into_iter()
        .map(|p| (table_key(&t.permuted(&p)), p))
        .min()
        .expect("at least the identity permutation")
}

/// Moves the identity to index 0 and canonicalises.
pub fn canonical_hypergroup(h: &FiniteCanonicalHypergroup) -> FiniteCanonicalHypergroup {
    let n = h.size();
    let e = h.identity();
    let mut swap: Vec<ElementId> = (0..n).collect();
    swap.swap(0, e);
    let h0 = h.relabeled(&swap);
    let (_, p) = canonical_table(h0.table());
    let t = h0.table().permuted(&p);
    verify_canonical(t, 0, default_labels(n)).expect("relabelling preserves the axioms")
}

fn involutions(n: usize) -> Vec<Vec<ElementId>> {
    fn go(sigma: &mut Vec<Option<ElementId>>, out: &mut Vec<Vec<ElementId>>) {
        match sigma.iter().position(|s| s.is_none()) {
            None => out.push(sigma.iter().map(|s| s.unwrap()).collect()),
            Some(x) => {
                for y in x..sigma.len() {
                    if sigma[y].is_none() {
                        sigma[x] = Some(y);
                        sigma[y] = Some(x);
                        go(sigma, out);
                        sigma[x] = None;
                        sigma[y] = None;
                    }
                }
            }
        }
    }
    let mut sigma = vec![None; n];
    sigma[0] = Some(0);
    let mut out = Vec::new();
    go(&mut sigma, &mut out);
    out
}

struct TableSearch {
    n: usize,
    sigma: Vec<ElementId>,
    cells: Vec<(ElementId, ElementId)>,
    entries: Vec<SubsetMask>,
    nodes: u64,
    max_nodes: u64,
    aborted: bool,
    found: Vec<HyperOpTable>,
}

impl TableSearch {
    fn get(&self, x: ElementId, y: ElementId) -> SubsetMask {
        self.entries[x * self.n + y]
    }

    fn set(&mut self, x: ElementId, y: ElementId, s: SubsetMask) {
        self.entries[x * self.n + y] = s;
        self.entries[y * self.n + x] = s;
    }

    /// Products of an assigned set with an element; `None` if any needed cell is open.
    fn right_product(&self, a: SubsetMask, c: ElementId) -> Option<SubsetMask> {
        a.iter().try_fold(SubsetMask::EMPTY, |acc, d| {
            let dc = self.get(d, c);
            (!dc.is_empty()).then(|| acc.union(dc))
        })
    }

    /// Reversibility and associativity on the cells assigned so far.
    fn consistent(&self) -> bool {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                let ab = self.get(a, b);
                if ab.is_empty() {
                    continue;
                }
                for z in ab {
                    let s = self.get(self.sigma[a], z);
                    if !s.is_empty() && !s.contains(b) {
                        return false;
                    }
                }
                for c in 0..n {
                    let bc = self.get(b, c);
                    if bc.is_empty() {
                        continue;
                    }
                    let Some(left) = self.right_product(ab, c) else { continue };
                    let Some(right) = self.right_product(bc, a) else { continue };
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.aborted = true;
            return;
        }
        if k == self.cells.len() {
            let t = HyperOpTable::new(self.n, self.entries.clone()).expect("complete table");
            if verify_canonical(t.clone(), 0, default_labels(self.n)).is_ok() {
                self.found.push(t);
            }
            return;
        }
        let (x, y) = self.cells[k];
        let must_hold_zero = self.sigma[x] == y;
        let others = SubsetMask::full(self.n).difference(SubsetMask::singleton(0)).bits();
        // subsets of the nonzero elements, then add 0 exactly for the inverse pair
        let mut sub = others;
        loop {
            let s = SubsetMask::from_bits(sub);
            let s = if must_hold_zero { s.with(0) } else { s };
            if !s.is_empty() {
                self.set(x, y, s);
                if self.consistent() {
                    self.run(k + 1);
                }
                self.set(x, y, SubsetMask::EMPTY);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & others;
        }
    }
}

/// Every canonical hypergroup on `n` elements with identity at index 0;
/// with `dedup`, one canonical representative per isomorphism class.
/// Tables are searched commutatively, with `0` in `x*y` exactly when `y` is
/// the chosen inverse of `x`, pruning on reversibility and on
/// associativity of every fully assigned triple.
pub fn enumerate_canonical_hypergroups(
    n: usize,
    dedup: bool,
    budget: Budget,
) -> Result<Catalog<FiniteCanonicalHypergroup>> {
    if n == 0 {
        return Err(HyperError::EmptyCarrier);
    }
    if n > CARRIER_CAP {
        return Err(HyperError::CarrierTooLarge(n));
    }
    let mut cells = Vec::new();
    for x in 1..n {
        for y in x..n {
            cells.push((x, y));
        }
    }
    let mut base = vec![SubsetMask::EMPTY; n * n];
    for x in 0..n {
        base[x] = SubsetMask::singleton(x);
        base[x * n] = SubsetMask::singleton(x);
    }
    let mut tables = Vec::new();
    let mut nodes = 0;
    let mut exhaustive = true;
    for sigma in involutions(n) {
        let mut s = TableSearch {
            n,
            sigma,
            cells: cells.clone(),
            entries: base.clone(),
            nodes: 0,
            max_nodes: budget.max_nodes.saturating_sub(nodes),
            aborted: false,
            found: Vec::new(),
        };
        s.run(0);
        nodes += s.nodes;
        tables.extend(s.found);
        if s.aborted {
            exhaustive = false;
            break;
        }
    }
    let tables: Vec<HyperOpTable> = if dedup {
        let forms: BTreeSet<Vec<u32>> = tables.iter().map(|t| canonical_table(t).0).collect();
        forms
            .into_iter()
            .map(|k| HyperOpTable::new(n, k.into_iter().map(SubsetMask::from_bits).collect()).unwrap())
            .collect()
    } else {
        tables.sort_by_key(table_key);
        tables
    };
    let entries = tables
        .into_iter()
        .map(|t| verify_canonical(t, 0, default_labels(n)).expect("search output verified"))
        .collect();
    Ok(Catalog { kind: "canonical hypergroup", order: n, entries, exhaustive, nodes })
}

/// Canonical forms of every canonical hypergroup on `n <= 2` elements,
/// found by generating all `2^(n^3)` set-valued tables (any identity) and
/// filtering by the axioms.
pub fn naive_oracle(n: usize) -> Result<BTreeSet<Vec<u32>>> {
    if !(1..=2).contains(&n) {
        return Err(HyperError::InvalidArgument(format!("naive oracle supports n <= 2, got {n}")));
    }
    let cells = n * n;
    let mut out = BTreeSet::new();
    for code in 0u64..(1 << (n * cells)) {
        let entries: Vec<SubsetMask> =
            (0..cells).map(|c| SubsetMask::from_bits(((code >> (c * n)) & ((1 << n) - 1)) as u32)).collect();
        let Ok(t) = HyperOpTable::new(n, entries) else { continue };
        for e in 0..n {
            if let Ok(h) = verify_canonical(t.clone(), e, default_labels(n)) {
                out.insert(table_key(canonical_hypergroup(&h).table()));
            }
        }
    }
    Ok(out)
}

/// Labelled canonical hypergroups with identity 0, from every commutative
/// table whose identity row and column are fixed; no other pruning.
pub fn identity_row_oracle(n: usize) -> Result<Vec<HyperOpTable>> {
    if !(1..=4).contains(&n) {
        return Err(HyperError::InvalidArgument(format!("identity-row oracle supports n <= 4, got {n}")));
    }
    let cells: Vec<(usize, usize)> = (1..n).flat_map(|x| (x..n).map(move |y| (x, y))).collect();
    let choices = (1u64 << n) - 1;
    let total = choices.pow(cells.len() as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut entries = vec![SubsetMask::EMPTY; n * n];
        for x in 0..n {
            entries[x] = SubsetMask::singleton(x);
            entries[x * n] = SubsetMask::singleton(x);
        }
        for &(x, y) in &cells {
            let s = SubsetMask::from_bits((code % choices + 1) as u32);
            code /= choices;
            entries[x * n + y] = s;
            entries[y * n + x] = s;
        }
        let t = HyperOpTable::new(n, entries).expect("nonempty entries");
        if verify_canonical(t.clone(), 0, default_labels(n)).is_ok() {
            out.push(t);
        }
    }
    out.sort_by_key(table_key);
    Ok(out)
}

/// All linear orders on the carrier compatible with the hyperoperation.
pub fn enumerate_orders(h: &FiniteCanonicalHypergroup) -> Vec<OrderRelation> {
    let n = h.size();
    let mut out: Vec<OrderRelation> = all_chains(n)
        .into_iter()
        .map(|c| OrderRelation::chain(n, &c).expect("chain is a permutation"))
        .filter(|o| check_compatibility(h, o).passed())
        .collect();
    out.sort_by_key(|o| o.up_sets().iter().map(|m| m.bits()).collect::<Vec<_>>());
    out
}

fn all_chains(n: usize) -> Vec<Vec<ElementId>> {
    // permutations of 0..n, generated from the zero-fixing ones by rotation of 0
    let mut out = Vec::new();
    for p in permutations_fixing_zero(n) {
        let rest: Vec<ElementId> = p[1..].to_vec();
        for i in 0..n {
            let mut c = rest.clone();
            c.insert(i, 0);
            out.push(c);
        }
    }
    out
}

/// All subsets satisfying the positive cone axioms.
pub fn search_positive_cones(h: &FiniteCanonicalHypergroup) -> Vec<PositiveCone> {
    SubsetMask::all_subsets(h.size())
        .filter(|p| p.contains(h.identity()) && verify_positive_cone(h, *p).all_passed())
        .map(|p| PositiveCone::new(h, p).expect("verified cone"))
        .collect()
}

fn ordered_key(oh: &OrderedCanonicalHypergroup, p: &[ElementId]) -> Vec<u32> {
    let mut k = table_key(&oh.hypergroup().table().permuted(p));
    k.extend(oh.order().permuted(p).up_sets().iter().map(|m| m.bits()));
    k
}

/// Ordered canonical hypergroups of order `n` (linear orders only), up to
/// isomorphism of the pair.
pub fn enumerate_ordered_hypergroups(n: usize, budget: Budget) -> Result<Catalog<OrderedCanonicalHypergroup>> {
    let base = enumerate_canonical_hypergroups(n, true, budget)?;
    let perms = permutations_fixing_zero(n);
    let mut forms: BTreeMap<Vec<u32>, OrderedCanonicalHypergroup> = BTreeMap::new();
    for h in &base.entries {
        for o in enumerate_orders(h) {
            let oh = OrderedCanonicalHypergroup::new(h.clone(), o).expect("compatible");
            let (k, p) = perms.iter().map(|p| (ordered_key(&oh, p), p)).min().unwrap();
            forms.entry(k).or_insert_with(|| oh.relabeled(p));
        }
    }
    Ok(Catalog {
        kind: "ordered canonical hypergroup",
        order: n,
        entries: forms.into_values().collect(),
        exhaustive: base.exhaustive,
        nodes: base.nodes,
    })
}

/// Abelian groups of order `m` as lists of cyclic factor orders `d1 | d2 | ...`.
fn abelian_group_types(m: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            out.push(cur.clone());
            return;
        }
        for d in min.max(2)..=rest {
            if rest % d == 0 && cur.last().map_or(true, |&l| d % l == 0) {
                cur.push(d);
                go(rest / d, d, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(m, 2, &mut Vec::new(), &mut out);
    out
}

/// Cayley table of a product of cyclic groups, elements in mixed radix.
fn product_group_table(factors: &[usize]) -> Vec<Vec<usize>> {
    let m: usize = factors.iter().product();
    let digits = |mut x: usize| {
        factors
            .iter()
            .map(|&d| {
                let r = x % d;
                x /= d;
                r
            })
            .collect::<Vec<_>>()
    };
    let encode = |ds: &[usize]| ds.iter().zip(factors).rev().fold(0, |acc, (&r, &d)| acc * d + r);
    (0..m)
        .map(|x| {
            (0..m)
                .map(|y| {
                    let s: Vec<usize> =
                        digits(x).iter().zip(digits(y)).zip(factors).map(|((a, b), d)| (a + b) % d).collect();
                    encode(&s)
                })
                .collect()
        })
        .collect()
}

fn hyperfield_key(f: &FiniteHyperfield, p: &[ElementId]) -> Vec<u32> {
    let r = f.relabeled(p);
    let mut k = table_key(r.additive().table());
    k.extend(r.ring().mul_table().iter().map(|&x| x as u32));
    k
}

/// Hyperfields of order `n` up to isomorphism: each additive hypergroup from
/// the catalog (zero at 0) with each abelian group structure on the nonzero
/// elements, kept when the axioms pass.
pub fn enumerate_hyperfields(n: usize, budget: Budget) -> Result<Catalog<FiniteHyperfield>> {
    if n < 2 {
        return Err(HyperError::InvalidArgument("a hyperfield needs 0 != 1".into()));
    }
    let base = enumerate_canonical_hypergroups(n, true, budget)?;
    let m = n - 1;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for factors in abelian_group_types(m) {
        let cayley = product_group_table(&factors);
        // place group element g at nonzero index perm[g] (perm over 1..n)
        for p in permutations_fixing_zero(n) {
            let place = |g: usize| p[g + 1];
            let mut mul = vec![0; n * n];
            for g in 0..m {
                for h in 0..m {
                    mul[place(g) * n + place(h)] = place(cayley[g][h]);
                }
            }
            if !groups.contains(&mul) {
                groups.push(mul);
            }
        }
    }
    let perms = permutations_fixing_zero(n);
    let mut forms: BTreeMap<Vec<u32>, FiniteHyperfield> = BTreeMap::new();
    for h in &base.entries {
        for mul in &groups {
            let one = (1..n).find(|&x| (1..n).all(|y| mul[x * n + y] == y)).expect("group identity");
            let data = HyperringData {
                labels: default_labels(n),
                add: h.table().clone(),
                zero: 0,
                mul: mul.clone(),
                one,
            };
            if let Ok(f) = verify_hyperfield(data) {
                let (k, p) = perms.iter().map(|p| (hyperfield_key(&f, p), p)).min().unwrap();
                forms.entry(k).or_insert_with(|| f.relabeled(p));
            }
        }
    }
    Ok(Catalog {
        kind: "hyperfield",
        order: n,
        entries: forms.into_values().collect(),
        exhaustive: base.exhaustive,
        nodes: base.nodes,
    })
}

/// Every hypervaluation `F -> H ∪ {∞}`, by filtering all maps with
/// `w(0) = ∞`. Rejects a non-linear order on `H`.
pub fn enumerate_hypervaluations(
    f: &FiniteHyperfield,
    h: &OrderedCanonicalHypergroup,
) -> Result<Catalog<FiniteHypervaluation>> {
    h.order().require_total()?;
    let nonzero: Vec<ElementId> = f.nonzero().collect();
    let k = h.size();
    let total = (k as u64).checked_pow(nonzero.len() as u32).ok_or_else(|| {
        HyperError::InvalidArgument(format!("{k}^{} maps is too many", nonzero.len()))
    })?;
    let mut entries = Vec::new();
    for mut code in 0..total {
        let mut values = vec![Value::Infinity; f.size()];
        for &x in &nonzero {
            values[x] = Value::Finite((code % k as u64) as usize);
            code /= k as u64;
        }
        let w = FiniteHypervaluation::new(f.clone(), h.clone(), values)?;
        if check_hypervaluation(&w)?.all_passed() {
            entries.push(w);
        }
    }
    Ok(Catalog { kind: "hypervaluation", order: f.size(), entries, exhaustive: true, nodes: total })
}

/// A finite hypergroup and cone whose induced relation is not a linear order.
#[derive(Debug, Clone)]
pub struct ConeWitness {
    pub hypergroup: FiniteCanonicalHypergroup,
    pub cone: SubsetMask,
    pub relation: RelationReport,
}

#[derive(Debug, Clone)]
pub struct MiningReport {
    pub max_n: usize,
    /// `(n, hypergroups, cones)` examined per order.
    pub searched: Vec<(usize, usize, usize)>,
    pub witness: Option<ConeWitness>,
    pub exhaustive: bool,
    /// The infinite witness in the rationals modulo squares.
    pub square_classes: ConeCounterexampleReport,
}

impl MiningReport {
    pub fn summary(&self) -> String {
        match &self.witness {
            Some(w) => {
                let failed: Vec<String> = w.relation.diagnostics.failures().map(|d| d.name.clone()).collect();
                format!(
                    "order {} hypergroup with cone {} induces a relation failing {}",
                    w.hypergroup.size(),
                    w.hypergroup.show(w.cone),
                    failed.join(", ")
                )
            }
            None if self.exhaustive => {
                format!("exhausted all orders <= {}: every cone induces a linear order", self.max_n)
            }
            None => format!("no witness found before the budget ran out (orders <= {})", self.max_n),
        }
    }
}

/// First `(H, P)` in catalog order, by increasing `n <= max_n`, whose
/// relation `x <= y iff (y * x^-1) ∩ P` nonempty is not a linear order.
pub fn mine_cone_order_counterexample(max_n: usize, budget: Budget) -> Result<MiningReport> {
    if max_n > CARRIER_CAP {
        return Err(HyperError::CarrierTooLarge(max_n));
    }
    let mut searched = Vec::new();
    let mut exhaustive = true;
    let mut witness = None;
    'outer: for n in 1..=max_n {
        let cat = enumerate_canonical_hypergroups(n, true, budget)?;
        exhaustive &= cat.exhaustive;
        let mut cones = 0;
        for h in &cat.entries {
            for p in search_positive_cones(h) {
                cones += 1;
                let rel = relation_from_cone(h, p);
                if !rel.is_linear_order() {
                    witness = Some(ConeWitness { hypergroup: h.clone(), cone: p.mask(), relation: rel });
                    searched.push((n, cat.len(), cones));
                    break 'outer;
                }
            }
        }
        searched.push((n, cat.len(), cones));
        if !cat.exhaustive {
            break;
        }
    }
    Ok(MiningReport { max_n, searched, witness, exhaustive, square_classes: reproduce_cone_counterexample()? })
}

/// Per-structure regression data: compatible orders, cones, and whether
/// `{x : x >= e}` is a cone for each order.
pub fn order_cone_table(h: &FiniteCanonicalHypergroup) -> (usize, usize, Vec<bool>) {
    let orders = enumerate_orders(h);
    let cones = search_positive_cones(h).len();
    let verdicts = orders
        .iter()
        .map(|o| verify_positive_cone(h, o.up_set(h.identity())).all_passed())
        .collect::<Vec<_>>();
    (orders.len(), cones, verdicts)
}

/// Convenience for the unused-bundle case in reports.
pub fn catalog_bundle<T>(c: &Catalog<T>) -> DiagnosticBundle {
    DiagnosticBundle(vec![crate::Diagnostic::from_bool(
        format!("{} catalog of order {}", c.kind, c.order),
        c.exhaustive,
        format!("{} entries, {} nodes, exhaustive: {}", c.len(), c.nodes, c.exhaustive),
    )])
}
