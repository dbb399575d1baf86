//! Finite hypergroupoids given by set-valued operation tables, and the
//! canonical hypergroup axioms checked by exhaustive enumeration.
//!
//! Every check reports the lexicographically first failing `(x, y, z)`.

use crate::diagnostic::{Diagnostic, DiagnosticBundle, Witness};
use crate::error::{HyperError, Result};
use crate::{ElementId, SubsetMask, CARRIER_CAP};

pub const H1: &str = "H1 associativity";
pub const H2: &str = "H2 commutativity";
pub const H3: &str = "H3 unique inverses";
pub const H4: &str = "H4 reversibility";
pub const IDENTITY_LAW: &str = "identity law x*e = {x}";
pub const MARTY: &str = "Marty reproducibility x*H = H";

/// An `n x n` table of nonempty subsets, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperOpTable {
    n: usize,
    entries: Vec<SubsetMask>,
}

impl HyperOpTable {
    pub fn new(n: usize, entries: Vec<SubsetMask>) -> Result<Self> {
        if n == 0 {
            return Err(HyperError::EmptyCarrier);
        }
        if n > CARRIER_CAP {
            return Err(HyperError::CarrierTooLarge(n));
        }
        if entries.len() != n * n {
            return Err(HyperError::TableShape { expected: n * n, found: entries.len() });
        }
        let carrier = SubsetMask::full(n);
        for (i, e) in entries.iter().enumerate() {
            if e.is_empty() {
                return Err(HyperError::EmptyEntry(i / n, i % n));
            }
            if !e.is_subset(carrier) {
                let bad = e.difference(carrier).first().unwrap();
                return Err(HyperError::ElementOutOfRange { index: bad, size: n });
            }
        }
        Ok(HyperOpTable { n, entries })
    }

    pub fn from_fn(n: usize, f: impl Fn(ElementId, ElementId) -> SubsetMask) -> Result<Self> {
        let entries = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Self::new(n, entries)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: ElementId, y: ElementId) -> SubsetMask {
        self.entries[x * self.n + y]
    }

    pub fn entries(&self) -> &[SubsetMask] {
        &self.entries
    }

    /// `A*B`, the union of `a*b` over `a in A`, `b in B`.
    pub fn product(&self, a: SubsetMask, b: SubsetMask) -> SubsetMask {
        let mut out = SubsetMask::EMPTY;
        for x in a {
            for y in b {
                out = out.union(self.get(x, y));
            }
        }
        out
    }

    /// Transport the table along `perm`, where `perm[old] = new`.
    pub fn permuted(&self, perm: &[ElementId]) -> Self {
        let n = self.n;
        let mut entries = vec![SubsetMask::EMPTY; n * n];
        for x in 0..n {
            for y in 0..n {
                entries[perm[x] * n + perm[y]] = self.get(x, y).map(|z| perm[z]);
            }
        }
        HyperOpTable { n, entries }
    }
}

fn check_index(x: ElementId, n: usize) -> Result<()> {
    if x >= n {
        Err(HyperError::ElementOutOfRange { index: x, size: n })
    } else {
        Ok(())
    }
}

pub fn check_associativity(table: &HyperOpTable) -> Diagnostic {
    let n = table.size();
    for x in 0..n {
        for y in 0..n {
            let xy = table.get(x, y);
            for z in 0..n {
                let left = table.product(xy, SubsetMask::singleton(z));
                let right = table.product(SubsetMask::singleton(x), table.get(y, z));
                if left != right {
                    return Diagnostic::fail(
                        H1,
                        Witness::elements([x, y, z]).with_sets([left, right]),
                        format!("(x*y)*z = {left:?} but x*(y*z) = {right:?} at (x, y, z) = ({x}, {y}, {z})"),
                    );
                }
            }
        }
    }
    Diagnostic::pass(H1)
}

pub fn check_commutativity(table: &HyperOpTable) -> Diagnostic {
    let n = table.size();
    for x in 0..n {
        for y in 0..n {
            if table.get(x, y) != table.get(y, x) {
                return Diagnostic::fail(
                    H2,
                    Witness::elements([x, y]).with_sets([table.get(x, y), table.get(y, x)]),
                    format!("x*y != y*x at (x, y) = ({x}, {y})"),
                );
            }
        }
    }
    Diagnostic::pass(H2)
}

/// Collects `{x' : e in x*x'}` for each `x`; succeeds with the inverse map when
/// every candidate set is a singleton.
pub fn check_inverses(table: &HyperOpTable, e: ElementId) -> std::result::Result<Vec<ElementId>, Diagnostic> {
    let n = table.size();
    if e >= n {
        return Err(Diagnostic::fail(
            H3,
            Witness::elements([e]),
            format!("identity index {e} outside carrier of size {n}"),
        ));
    }
    let mut inverse = Vec::with_capacity(n);
    for x in 0..n {
        let candidates: SubsetMask = (0..n).filter(|&y| table.get(x, y).contains(e)).collect();
        match candidates.as_singleton() {
            Some(y) => inverse.push(y),
            None => {
                let what = if candidates.is_empty() { "no inverse" } else { "several inverses" };
                return Err(Diagnostic::fail(
                    H3,
                    Witness::elements([x]).with_sets([candidates]),
                    format!("element {x} has {what}: candidates {candidates:?}"),
                ));
            }
        }
    }
    Ok(inverse)
}

/// `z in x*y` implies `y in x^-1 * z`.
pub fn check_reversibility(table: &HyperOpTable, inverse: &[ElementId]) -> Diagnostic {
    let n = table.size();
    for x in 0..n {
        for y in 0..n {
            for z in table.get(x, y) {
                let back = table.get(inverse[x], z);
                if !back.contains(y) {
                    return Diagnostic::fail(
                        H4,
                        Witness::elements([x, y, z]).with_sets([back]),
                        format!("{z} in {x}*{y} but {y} not in {}*{z} = {back:?}", inverse[x]),
                    );
                }
            }
        }
    }
    Diagnostic::pass(H4)
}

pub fn check_identity_law(table: &HyperOpTable, e: ElementId) -> Diagnostic {
    for x in 0..table.size() {
        let xe = table.get(x, e);
        if xe != SubsetMask::singleton(x) {
            return Diagnostic::fail(
                IDENTITY_LAW,
                Witness::elements([x]).with_sets([xe]),
                format!("{x}*e = {xe:?}"),
            );
        }
    }
    Diagnostic::pass(IDENTITY_LAW)
}

/// A verified canonical hypergroup `(H, *, e)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteCanonicalHypergroup {
    labels: Vec<String>,
    table: HyperOpTable,
    identity: ElementId,
    inverse: Vec<ElementId>,
}

impl FiniteCanonicalHypergroup {
    pub fn size(&self) -> usize {
        self.table.size()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: ElementId) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<ElementId> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn table(&self) -> &HyperOpTable {
        &self.table
    }

    pub fn identity(&self) -> ElementId {
        self.identity
    }

    pub fn inverse(&self, x: ElementId) -> ElementId {
        self.inverse[x]
    }

    pub fn inverse_map(&self) -> &[ElementId] {
        &self.inverse
    }

    /// `-A`, the image of `A` under the inverse map.
    pub fn negate(&self, a: SubsetMask) -> SubsetMask {
        a.map(|x| self.inverse[x])
    }

    #[inline]
    pub fn op(&self, x: ElementId, y: ElementId) -> SubsetMask {
        self.table.get(x, y)
    }

    pub fn product(&self, a: SubsetMask, b: SubsetMask) -> SubsetMask {
        self.table.product(a, b)
    }

    pub fn carrier(&self) -> SubsetMask {
        SubsetMask::full(self.size())
    }

    pub fn show(&self, a: SubsetMask) -> String {
        a.display_with(&self.labels)
    }

    /// Whether every entry is a singleton, i.e. the structure is an abelian group.
    pub fn is_group(&self) -> bool {
        self.table.entries().iter().all(|e| e.len() == 1)
    }

    /// The isomorphic copy obtained by moving element `x` to index `perm[x]`.
    pub fn relabeled(&self, perm: &[ElementId]) -> Self {
        let n = self.size();
        let mut labels = vec![String::new(); n];
        let mut inverse = vec![0; n];
        for x in 0..n {
            labels[perm[x]] = self.labels[x].clone();
            inverse[perm[x]] = perm[self.inverse[x]];
        }
        FiniteCanonicalHypergroup {
            labels,
            table: self.table.permuted(perm),
            identity: perm[self.identity],
            inverse,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size() {
            return Err(HyperError::InvalidArgument(format!(
                "{} labels for a carrier of size {}",
                labels.len(),
                self.size()
            )));
        }
        self.labels = labels;
        Ok(self)
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// Checks H1-H4 and the derived identity law. All independently checkable
/// axioms are reported; H4 is only checked once H3 produced an inverse map.
pub fn verify_canonical(
    table: HyperOpTable,
    e: ElementId,
    labels: Vec<String>,
) -> std::result::Result<FiniteCanonicalHypergroup, DiagnosticBundle> {
    let mut bundle = DiagnosticBundle::new();
    let n = table.size();
    if labels.len() != n {
        bundle.push(Diagnostic::fail(
            "labels",
            Witness::default(),
            format!("{} labels for a carrier of size {n}", labels.len()),
        ));
        return Err(bundle);
    }
    if e >= n {
        bundle.push(Diagnostic::fail(
            "identity",
            Witness::elements([e]),
            format!("identity index {e} outside carrier of size {n}"),
        ));
        return Err(bundle);
    }
    bundle.push(check_associativity(&table));
    bundle.push(check_commutativity(&table));
    let inverse = match check_inverses(&table, e) {
        Ok(inv) => {
            bundle.push(Diagnostic::pass(H3));
            bundle.push(check_reversibility(&table, &inv));
            Some(inv)
        }
        Err(d) => {
            bundle.push(d);
            None
        }
    };
    bundle.push(check_identity_law(&table, e));
    match inverse {
        Some(inverse) if bundle.all_passed() => {
            Ok(FiniteCanonicalHypergroup { labels, table, identity: e, inverse })
        }
        _ => Err(bundle),
    }
}

/// `x*H = H` for every `x`; holds in every canonical hypergroup.
pub fn check_marty(h: &FiniteCanonicalHypergroup) -> Diagnostic {
    let all = h.carrier();
    for x in 0..h.size() {
        let row = h.product(SubsetMask::singleton(x), all);
        if row != all {
            return Diagnostic::fail(MARTY, Witness::elements([x]).with_sets([row]), format!("{x}*H = {row:?}"));
        }
    }
    Diagnostic::pass(MARTY)
}

/// Turns an abelian group, given by its Cayley table, into a hypergroup with
/// singleton products.
pub fn embed_group(cayley: &[Vec<ElementId>], e: ElementId, labels: Option<Vec<String>>) -> Result<FiniteCanonicalHypergroup> {
    let n = cayley.len();
    if n == 0 {
        return Err(HyperError::EmptyCarrier);
    }
    if n > CARRIER_CAP {
        return Err(HyperError::CarrierTooLarge(n));
    }
    check_index(e, n)?;
    for (x, row) in cayley.iter().enumerate() {
        if row.len() != n {
            return Err(HyperError::TableShape { expected: n, found: row.len() });
        }
        for &v in row {
            if v >= n {
                return Err(HyperError::NotAbelianGroup(format!("{x}*_ = {v} is not an element")));
            }
        }
    }
    for x in 0..n {
        if cayley[x][e] != x || cayley[e][x] != x {
            return Err(HyperError::NotAbelianGroup(format!("{e} is not an identity for {x}")));
        }
        if !(0..n).any(|y| cayley[x][y] == e) {
            return Err(HyperError::NotAbelianGroup(format!("{x} has no inverse")));
        }
        for y in 0..n {
            if cayley[x][y] != cayley[y][x] {
                return Err(HyperError::NotAbelianGroup(format!("{x}*{y} != {y}*{x}")));
            }
            for z in 0..n {
                if cayley[cayley[x][y]][z] != cayley[x][cayley[y][z]] {
                    return Err(HyperError::NotAbelianGroup(format!("associativity fails at ({x}, {y}, {z})")));
                }
            }
        }
    }
    let table = HyperOpTable::from_fn(n, |x, y| SubsetMask::singleton(cayley[x][y]))?;
    let labels = labels.unwrap_or_else(|| default_labels(n));
    verify_canonical(table, e, labels).map_err(HyperError::Verification)
}

/// The cyclic group `Z/n` as a hypergroup, labelled `0..n-1`.
pub fn cyclic_group(n: usize) -> Result<FiniteCanonicalHypergroup> {
    let cayley: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
    embed_group(&cayley, 0, Some((0..n).map(|i| i.to_string()).collect()))
}

pub fn trivial_hypergroup() -> FiniteCanonicalHypergroup {
    cyclic_group(1).expect("one-element group")
}

/// Index of `0` in the sign hypergroup.
pub const SIGN_ZERO: ElementId = 0;
/// Index of `1` in the sign hypergroup.
pub const SIGN_POS: ElementId = 1;
/// Index of `-1` in the sign hypergroup.
pub const SIGN_NEG: ElementId = 2;

/// `{-1, 0, 1}` with `1*(-1) = {-1, 0, 1}`, identity `0`.
///
/// The carrier is stored as `[0, 1, -1]`.
pub fn sign_hypergroup() -> FiniteCanonicalHypergroup {
    let table = HyperOpTable::from_fn(3, |x, y| match (x, y) {
        (SIGN_ZERO, y) => SubsetMask::singleton(y),
        (x, SIGN_ZERO) => SubsetMask::singleton(x),
        (x, y) if x == y => SubsetMask::singleton(x),
        _ => SubsetMask::full(3),
    })
    .expect("static table");
    verify_canonical(table, SIGN_ZERO, vec!["0".into(), "1".into(), "-1".into()])
        .expect("sign hypergroup is canonical")
}
