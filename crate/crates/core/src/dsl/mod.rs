//! The `.hyp` text format: named elements, set-valued tables, orders,
//! cones, valuations and finite-support maps.
//!
//! ```text
//! # the sign hypergroup
//! hypergroup Sign {
//!   elements: 0, 1, -1
//!   identity: 0
//!   table: 1*-1 = -1*1 = {-1, 0, 1}
//!   ...
//!   order: -1 < 0 < 1
//! }
//! ```
//!
//! Statements end at a newline or `;`. Every referenced name must be
//! declared, tables must be total, and a cell may be given only once.

mod build;
mod parse;

use std::fmt::{self, Write};

pub use build::{
    build_functions, build_hypergroup, build_ring, build_valuation_values, functions_block, hyperfield_block,
    hypergroup_block, valuation_block, HypergroupParts,
};
pub use parse::parse;

/// 1-based position in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

/// A value with its source position; equality ignores the position.
#[derive(Debug, Clone, Eq)]
pub struct Spanned<T> {
    pub value: T,
    pub span: Span,
}

impl<T> Spanned<T> {
    pub fn new(value: T, span: Span) -> Self {
        Spanned { value, span }
    }

    /// No source position, for documents built in code.
    pub fn bare(value: T) -> Self {
        Spanned { value, span: Span::default() }
    }
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

pub type Name = Spanned<String>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{span}: {message}")]
pub struct DslError {
    pub span: Span,
    pub message: String,
}

impl DslError {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        DslError { span, message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Hypergroup,
    Hyperring,
    Hyperfield,
    Valuation,
    Functions,
}

impl BlockKind {
    pub fn keyword(self) -> &'static str {
        match self {
            BlockKind::Hypergroup => "hypergroup",
            BlockKind::Hyperring => "hyperring",
            BlockKind::Hyperfield => "hyperfield",
            BlockKind::Valuation => "valuation",
            BlockKind::Functions => "functions",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Some(match s {
            "hypergroup" => BlockKind::Hypergroup,
            "hyperring" => BlockKind::Hyperring,
            "hyperfield" => BlockKind::Hyperfield,
            "valuation" => BlockKind::Valuation,
            "functions" => BlockKind::Functions,
            _ => return None,
        })
    }

    pub fn is_ring(self) -> bool {
        matches!(self, BlockKind::Hyperring | BlockKind::Hyperfield)
    }
}

/// `x*y = {..}`, one per cell; chained cells are expanded when parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub x: Name,
    pub y: Name,
    pub set: Vec<Name>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulCell {
    pub x: Name,
    pub y: Name,
    pub product: Name,
}

/// Body of `hypergroup`, `hyperring` and `hyperfield` blocks.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StructureDecl {
    pub elements: Vec<Name>,
    /// `identity:` for hypergroups, `zero:` for rings.
    pub identity: Option<Name>,
    pub one: Option<Name>,
    pub cells: Vec<Cell>,
    pub mul: Vec<MulCell>,
    /// Each chain `a < b < c` as written.
    pub order: Vec<Vec<Name>>,
    pub cone: Option<Vec<Name>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mapping {
    pub from: Name,
    /// A codomain element or `inf`.
    pub to: Name,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValuationDecl {
    pub domain: Option<Name>,
    pub codomain: Option<Name>,
    pub map: Vec<Mapping>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDecl {
    pub name: Name,
    /// Element name and the rational value as written.
    pub values: Vec<(Name, Spanned<String>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FunctionsDecl {
    pub domain: Option<Name>,
    pub functions: Vec<FunctionDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockBody {
    Structure(StructureDecl),
    Valuation(ValuationDecl),
    Functions(FunctionsDecl),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub name: Name,
    pub body: BlockBody,
}

impl Block {
    pub fn structure(&self) -> Option<&StructureDecl> {
        match &self.body {
            BlockBody::Structure(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub blocks: Vec<Block>,
}

impl Document {
    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name.value == name)
    }
}

fn join(names: &[Name]) -> String {
    names.iter().map(|n| n.value.as_str()).collect::<Vec<_>>().join(", ")
}

/// Canonical text: fixed statement order, one statement per line,
/// two-space indentation, blank line between blocks.
pub fn serialize(doc: &Document) -> String {
    let mut out = String::new();
    for (i, b) in doc.blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        writeln!(out, "{} {} {{", b.kind.keyword(), b.name.value).unwrap();
        match &b.body {
            BlockBody::Structure(s) => {
                let op = if b.kind.is_ring() { '+' } else { '*' };
                writeln!(out, "  elements: {}", join(&s.elements)).unwrap();
                if let Some(e) = &s.identity {
                    let kw = if b.kind.is_ring() { "zero" } else { "identity" };
                    writeln!(out, "  {kw}: {}", e.value).unwrap();
                }
                if let Some(one) = &s.one {
                    writeln!(out, "  one: {}", one.value).unwrap();
                }
                for c in &s.cells {
                    writeln!(out, "  table: {}{op}{} = {{{}}}", c.x.value, c.y.value, join(&c.set)).unwrap();
                }
                for m in &s.mul {
                    writeln!(out, "  mul: {}*{} = {}", m.x.value, m.y.value, m.product.value).unwrap();
                }
                for chain in &s.order {
                    let names: Vec<&str> = chain.iter().map(|n| n.value.as_str()).collect();
                    writeln!(out, "  order: {}", names.join(" < ")).unwrap();
                }
                if let Some(cone) = &s.cone {
                    writeln!(out, "  cone: {}", join(cone)).unwrap();
                }
            }
            BlockBody::Valuation(v) => {
                if let Some(d) = &v.domain {
                    writeln!(out, "  domain: {}", d.value).unwrap();
                }
                if let Some(c) = &v.codomain {
                    writeln!(out, "  codomain: {}", c.value).unwrap();
                }
                for m in &v.map {
                    writeln!(out, "  map: {} -> {}", m.from.value, m.to.value).unwrap();
                }
            }
            BlockBody::Functions(fs) => {
                if let Some(d) = &fs.domain {
                    writeln!(out, "  domain: {}", d.value).unwrap();
                }
                for f in &fs.functions {
                    let vals: Vec<String> = f.values.iter().map(|(x, v)| format!("{} -> {}", x.value, v.value)).collect();
                    writeln!(out, "  {}: {}", f.name.value, vals.join(", ")).unwrap();
                }
            }
        }
        out.push_str("}\n");
    }
    out
}
