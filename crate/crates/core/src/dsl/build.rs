use std::collections::HashMap;

use super::{
    Block, BlockBody, BlockKind, Cell, Document, DslError, FunctionDecl, FunctionsDecl, Mapping, MulCell, Name,
    Spanned, StructureDecl, ValuationDecl,
};
use crate::finite_support::FiniteSupportMap;
use crate::hypergroup::{FiniteCanonicalHypergroup, HyperOpTable};
use crate::hyperring::{FiniteHyperfield, HyperringData};
use crate::order::OrderRelation;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::valuation::{FiniteHypervaluation, Value};
use crate::{ElementId, SubsetMask};

type Result<T> = std::result::Result<T, DslError>;

/// Unverified pieces of a structure block, indexed in declaration order.
#[derive(Debug, Clone)]
pub struct HypergroupParts {
    pub labels: Vec<String>,
    pub table: HyperOpTable,
    pub identity: ElementId,
    pub order: Option<OrderRelation>,
    pub cone: Option<SubsetMask>,
}

fn find<'a>(doc: &'a Document, name: &str, kinds: &[BlockKind]) -> Result<&'a Block> {
    let b = doc
        .block(name)
        .ok_or_else(|| DslError::new(Default::default(), format!("no declaration named `{name}`")))?;
    if !kinds.contains(&b.kind) {
        return Err(DslError::new(b.name.span, format!("`{name}` is a {}", b.kind.keyword())));
    }
    Ok(b)
}

fn index_of(s: &StructureDecl) -> HashMap<&str, ElementId> {
    s.elements.iter().enumerate().map(|(i, e)| (e.value.as_str(), i)).collect()
}

fn lookup(index: &HashMap<&str, ElementId>, n: &Name) -> Result<ElementId> {
    index.get(n.value.as_str()).copied().ok_or_else(|| DslError::new(n.span, format!("undeclared element `{}`", n.value)))
}

fn table_of(s: &StructureDecl, index: &HashMap<&str, ElementId>) -> Result<HyperOpTable> {
    let n = s.elements.len();
    let mut entries = vec![SubsetMask::default(); n * n];
    for c in &s.cells {
        let mut set = SubsetMask::default();
        for z in &c.set {
            set.insert(lookup(index, z)?);
        }
        entries[lookup(index, &c.x)? * n + lookup(index, &c.y)?] = set;
    }
    HyperOpTable::new(n, entries).map_err(|e| DslError::new(Default::default(), e.to_string()))
}

/// Additive structure of any structure block, with its order and cone.
pub fn build_hypergroup(doc: &Document, name: &str) -> Result<HypergroupParts> {
    let b = find(doc, name, &[BlockKind::Hypergroup, BlockKind::Hyperring, BlockKind::Hyperfield])?;
    let s = b.structure().unwrap();
    let index = index_of(s);
    let identity = lookup(&index, s.identity.as_ref().unwrap())?;
    let order = if s.order.is_empty() {
        None
    } else {
        let mut pairs = Vec::new();
        for chain in &s.order {
            let ids = chain.iter().map(|x| lookup(&index, x)).collect::<Result<Vec<_>>>()?;
            pairs.extend(ids.windows(2).map(|w| (w[0], w[1])));
        }
        let o = OrderRelation::from_pairs(s.elements.len(), &pairs)
            .map_err(|e| DslError::new(s.order[0][0].span, e.to_string()))?;
        Some(o)
    };
    let cone = match &s.cone {
        None => None,
        Some(xs) => Some(xs.iter().map(|x| lookup(&index, x)).collect::<Result<SubsetMask>>()?),
    };
    Ok(HypergroupParts {
        labels: s.elements.iter().map(|e| e.value.clone()).collect(),
        table: table_of(s, &index)?,
        identity,
        order,
        cone,
    })
}

pub fn build_ring(doc: &Document, name: &str) -> Result<HyperringData> {
    let b = find(doc, name, &[BlockKind::Hyperring, BlockKind::Hyperfield])?;
    let s = b.structure().unwrap();
    let parts = build_hypergroup(doc, name)?;
    let index = index_of(s);
    let n = s.elements.len();
    let mut mul = vec![0; n * n];
    for m in &s.mul {
        mul[lookup(&index, &m.x)? * n + lookup(&index, &m.y)?] = lookup(&index, &m.product)?;
    }
    Ok(HyperringData {
        labels: parts.labels,
        add: parts.table,
        zero: parts.identity,
        mul,
        one: lookup(&index, s.one.as_ref().unwrap())?,
    })
}

/// Domain name, codomain name, and the values indexed by domain element.
pub fn build_valuation_values(doc: &Document, name: &str) -> Result<(String, String, Vec<Value>)> {
    let b = find(doc, name, &[BlockKind::Valuation])?;
    let BlockBody::Valuation(v) = &b.body else { unreachable!() };
    let (dn, cn) = (v.domain.as_ref().unwrap(), v.codomain.as_ref().unwrap());
    let dom = find(doc, &dn.value, &[BlockKind::Hyperfield])?.structure().unwrap();
    let cod = find(doc, &cn.value, &[BlockKind::Hypergroup])?.structure().unwrap();
    let (di, ci) = (index_of(dom), index_of(cod));
    let mut values = vec![Value::Infinity; dom.elements.len()];
    for m in &v.map {
        values[lookup(&di, &m.from)?] =
            if m.to.value == "inf" { Value::Infinity } else { Value::Finite(lookup(&ci, &m.to)?) };
    }
    Ok((dn.value.clone(), cn.value.clone(), values))
}

/// Domain name and each function's values indexed by domain element.
pub fn build_functions(doc: &Document, name: &str) -> Result<(String, Vec<(String, Vec<Rational>)>)> {
    let b = find(doc, name, &[BlockKind::Functions])?;
    let BlockBody::Functions(fs) = &b.body else { unreachable!() };
    let dn = fs.domain.as_ref().unwrap();
    let dom = find(doc, &dn.value, &[BlockKind::Hypergroup])?.structure().unwrap();
    let di = index_of(dom);
    let mut out = Vec::new();
    for f in &fs.functions {
        let mut vals = vec![Rational::default(); dom.elements.len()];
        for (x, q) in &f.values {
            vals[lookup(&di, x)?] = parse_rational(&q.value)
                .ok_or_else(|| DslError::new(q.span, format!("`{}` is not a rational number", q.value)))?;
        }
        out.push((f.name.value.clone(), vals));
    }
    Ok((dn.value.clone(), out))
}

fn bare(s: &str) -> Name {
    Spanned::bare(s.to_string())
}

fn names(labels: &[String], set: SubsetMask) -> Vec<Name> {
    set.iter().map(|x| bare(&labels[x])).collect()
}

/// Covering pairs of a partial order; a total order becomes one chain.
fn order_chains(labels: &[String], order: &OrderRelation) -> Vec<Vec<Name>> {
    let n = order.size();
    if order.is_total() {
        return vec![order.sorted().iter().map(|&x| bare(&labels[x])).collect()];
    }
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let covers = order.lt(a, b) && !(0..n).any(|c| order.lt(a, c) && order.lt(c, b));
            if covers {
                out.push(vec![bare(&labels[a]), bare(&labels[b])]);
            }
        }
    }
    out
}

fn table_cells(labels: &[String], table: &HyperOpTable) -> Vec<Cell> {
    let n = labels.len();
    (0..n * n)
        .map(|i| Cell { x: bare(&labels[i / n]), y: bare(&labels[i % n]), set: names(labels, table.get(i / n, i % n)) })
        .collect()
}

pub fn hypergroup_block(
    name: &str,
    h: &FiniteCanonicalHypergroup,
    order: Option<&OrderRelation>,
    cone: Option<SubsetMask>,
) -> Block {
    let labels = h.labels();
    let s = StructureDecl {
        elements: labels.iter().map(|l| bare(l)).collect(),
        identity: Some(bare(h.label(h.identity()))),
        one: None,
        cells: table_cells(labels, h.table()),
        mul: Vec::new(),
        order: order.map(|o| order_chains(labels, o)).unwrap_or_default(),
        cone: cone.map(|c| names(labels, c)),
    };
    Block { kind: BlockKind::Hypergroup, name: bare(name), body: BlockBody::Structure(s) }
}

pub fn hyperfield_block(name: &str, f: &FiniteHyperfield) -> Block {
    let labels = f.labels();
    let n = f.size();
    let s = StructureDecl {
        elements: labels.iter().map(|l| bare(l)).collect(),
        identity: Some(bare(f.label(f.zero()))),
        one: Some(bare(f.label(f.one()))),
        cells: table_cells(labels, f.additive().table()),
        mul: (0..n * n)
            .map(|i| MulCell {
                x: bare(&labels[i / n]),
                y: bare(&labels[i % n]),
                product: bare(&labels[f.mul(i / n, i % n)]),
            })
            .collect(),
        order: Vec::new(),
        cone: None,
    };
    Block { kind: BlockKind::Hyperfield, name: bare(name), body: BlockBody::Structure(s) }
}

pub fn valuation_block(name: &str, domain: &str, codomain: &str, w: &FiniteHypervaluation) -> Block {
    let h = w.codomain().hypergroup();
    let v = ValuationDecl {
        domain: Some(bare(domain)),
        codomain: Some(bare(codomain)),
        map: (0..w.domain().size())
            .map(|x| Mapping { from: bare(w.domain().label(x)), to: bare(&w.value(x).show(h)) })
            .collect(),
    };
    Block { kind: BlockKind::Valuation, name: bare(name), body: BlockBody::Valuation(v) }
}

pub fn functions_block(name: &str, domain: &str, fs: &[(&str, &FiniteSupportMap)]) -> Block {
    let decl = FunctionsDecl {
        domain: Some(bare(domain)),
        functions: fs
            .iter()
            .map(|(fname, f)| FunctionDecl {
                name: bare(fname),
                values: (0..f.values().len())
                    .map(|x| (bare(f.domain().label(x)), bare(&format_rational(f.get(x)))))
                    .collect(),
            })
            .collect(),
    };
    Block { kind: BlockKind::Functions, name: bare(name), body: BlockBody::Functions(decl) }
}
