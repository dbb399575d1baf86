use std::collections::{BTreeSet, HashMap};

use super::{
    Block, BlockBody, BlockKind, Cell, Document, DslError, FunctionDecl, FunctionsDecl, Mapping, MulCell, Name, Span,
    Spanned, StructureDecl, ValuationDecl,
};
use crate::order::OrderRelation;
use crate::rational::parse_rational;
use crate::CARRIER_CAP;

type Result<T> = std::result::Result<T, DslError>;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    Colon,
    Comma,
    Op(char),
    Eq,
    Lt,
    Arrow,
    Slash,
    Sep,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Op(c) => format!("`{c}`"),
            Tok::Eq => "`=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Sep => "end of statement".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<(Tok, Span)>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let span = Span { line: li + 1, col: i + 1 };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let single = match c {
                '{' => Some(Tok::LBrace),
                '}' => Some(Tok::RBrace),
                ':' => Some(Tok::Colon),
                ',' => Some(Tok::Comma),
                '*' | '+' => Some(Tok::Op(c)),
                '=' => Some(Tok::Eq),
                '<' => Some(Tok::Lt),
                '/' => Some(Tok::Slash),
                ';' => Some(Tok::Sep),
                _ => None,
            };
            if let Some(t) = single {
                out.push((t, span));
                i += 1;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push((Tok::Arrow, span));
                i += 2;
            } else if is_name_char(c) || (c == '-' && chars.get(i + 1).is_some_and(|&d| is_name_char(d))) {
                let start = i;
                i += 1;
                while i < chars.len() && is_name_char(chars[i]) {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), span));
            } else {
                return Err(DslError::new(span, format!("unexpected character `{c}`")));
            }
        }
        out.push((Tok::Sep, Span { line: li + 1, col: chars.len() + 1 }));
    }
    let end = Span { line: text.lines().count().max(1), col: 1 };
    out.push((Tok::Eof, end));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, what: &str) -> Result<T> {
        Err(DslError::new(self.span(), format!("expected {what}, found {}", self.peek().describe())))
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<Span> {
        if *self.peek() == t {
            Ok(self.bump().1)
        } else {
            self.error(what)
        }
    }

    fn name(&mut self) -> Result<Name> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let span = self.bump().1;
                Ok(Spanned::new(s, span))
            }
            _ => self.error("a name"),
        }
    }

    fn skip_seps(&mut self) {
        while *self.peek() == Tok::Sep {
            self.bump();
        }
    }

    fn end_statement(&mut self) -> Result<()> {
        match self.peek() {
            Tok::Sep => {
                self.bump();
                Ok(())
            }
            Tok::RBrace => Ok(()),
            _ => self.error("end of statement"),
        }
    }

    fn name_list(&mut self) -> Result<Vec<Name>> {
        let mut out = vec![self.name()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.name()?);
        }
        Ok(out)
    }

    fn set(&mut self) -> Result<Vec<Name>> {
        self.expect(Tok::LBrace, "`{`")?;
        let names = if *self.peek() == Tok::RBrace { Vec::new() } else { self.name_list()? };
        self.expect(Tok::RBrace, "`}`")?;
        Ok(names)
    }

    /// `x op y (= x op y)* = rhs`, returning the operand pairs.
    fn cell_chain(&mut self) -> Result<Vec<(Name, Name)>> {
        let mut pairs = Vec::new();
        loop {
            let x = self.name()?;
            match self.peek() {
                Tok::Op(_) => {
                    self.bump();
                }
                _ => return self.error("`*` or `+`"),
            }
            let y = self.name()?;
            pairs.push((x, y));
            self.expect(Tok::Eq, "`=`")?;
            let is_operand = matches!(self.peek(), Tok::Ident(_)) && matches!(self.peek_at(1), Tok::Op(_));
            if !is_operand {
                return Ok(pairs);
            }
        }
    }

    fn rational(&mut self) -> Result<Spanned<String>> {
        let num = self.name()?;
        let mut text = num.value.clone();
        if *self.peek() == Tok::Slash {
            self.bump();
            let den = self.name()?;
            text = format!("{text}/{}", den.value);
        }
        if parse_rational(&text).is_none() {
            return Err(DslError::new(num.span, format!("`{text}` is not a rational number")));
        }
        Ok(Spanned::new(text, num.span))
    }

    fn document(&mut self) -> Result<Document> {
        let mut blocks = Vec::new();
        self.skip_seps();
        while *self.peek() != Tok::Eof {
            blocks.push(self.block()?);
            self.skip_seps();
        }
        if blocks.is_empty() {
            return Err(DslError::new(Span { line: 1, col: 1 }, "no declarations"));
        }
        Ok(Document { blocks })
    }

    fn block(&mut self) -> Result<Block> {
        let kw = self.name()?;
        let kind = BlockKind::from_keyword(&kw.value).ok_or_else(|| {
            DslError::new(
                kw.span,
                format!("unknown declaration `{}` (expected hypergroup, hyperring, hyperfield, valuation or functions)", kw.value),
            )
        })?;
        let name = self.name()?;
        self.skip_seps();
        self.expect(Tok::LBrace, "`{`")?;
        let body = match kind {
            BlockKind::Valuation => BlockBody::Valuation(self.valuation_body()?),
            BlockKind::Functions => BlockBody::Functions(self.functions_body()?),
            _ => BlockBody::Structure(self.structure_body(kind)?),
        };
        self.expect(Tok::RBrace, "`}`")?;
        Ok(Block { kind, name, body })
    }

    fn keyword(&self) -> Option<(String, Span)> {
        match (self.peek(), self.peek_at(1)) {
            (Tok::Ident(s), Tok::Colon) => Some((s.clone(), self.span())),
            _ => None,
        }
    }

    fn once<T>(slot: &mut Option<T>, value: T, kw: &str, span: Span) -> Result<()> {
        if slot.is_some() {
            return Err(DslError::new(span, format!("`{kw}` given twice")));
        }
        *slot = Some(value);
        Ok(())
    }

    fn structure_body(&mut self, kind: BlockKind) -> Result<StructureDecl> {
        let mut s = StructureDecl::default();
        let mut elements: Option<Vec<Name>> = None;
        loop {
            self.skip_seps();
            if matches!(self.peek(), Tok::RBrace | Tok::Eof) {
                break;
            }
            let kw = self.keyword();
            if let Some((_, _)) = &kw {
                self.bump();
                self.bump();
            }
            match kw.as_ref().map(|(k, sp)| (k.as_str(), *sp)) {
                Some(("elements", sp)) => {
                    let list = self.name_list()?;
                    Self::once(&mut elements, list, "elements", sp)?;
                }
                Some(("identity" | "zero", sp)) => {
                    let n = self.name()?;
                    Self::once(&mut s.identity, n, "identity", sp)?;
                }
                Some(("one", sp)) if kind.is_ring() => {
                    let n = self.name()?;
                    Self::once(&mut s.one, n, "one", sp)?;
                }
                Some(("table", _)) | None => {
                    if kw.is_none() && !matches!(self.peek_at(1), Tok::Op(_)) {
                        return self.error("a statement");
                    }
                    let pairs = self.cell_chain()?;
                    let set = self.set()?;
                    for (x, y) in pairs {
                        s.cells.push(Cell { x, y, set: set.clone() });
                    }
                }
                Some(("mul", _)) if kind.is_ring() => {
                    let pairs = self.cell_chain()?;
                    let product = self.name()?;
                    for (x, y) in pairs {
                        s.mul.push(MulCell { x, y, product: product.clone() });
                    }
                }
                Some(("order", _)) => {
                    let mut chain = vec![self.name()?];
                    while *self.peek() == Tok::Lt {
                        self.bump();
                        chain.push(self.name()?);
                    }
                    s.order.push(chain);
                }
                Some(("cone", sp)) => {
                    let list = self.name_list()?;
                    Self::once(&mut s.cone, list, "cone", sp)?;
                }
                Some((other, sp)) => {
                    return Err(DslError::new(sp, format!("`{other}` is not allowed in a {} block", kind.keyword())))
                }
            }
            self.end_statement()?;
        }
        s.elements = elements.unwrap_or_default();
        Ok(s)
    }

    fn mapping(&mut self) -> Result<Mapping> {
        let from = self.name()?;
        self.expect(Tok::Arrow, "`->`")?;
        let to = self.name()?;
        Ok(Mapping { from, to })
    }

    fn valuation_body(&mut self) -> Result<ValuationDecl> {
        let mut v = ValuationDecl::default();
        loop {
            self.skip_seps();
            if matches!(self.peek(), Tok::RBrace | Tok::Eof) {
                break;
            }
            match self.keyword() {
                Some((k, sp)) => {
                    self.bump();
                    self.bump();
                    match k.as_str() {
                        "domain" => {
                            let n = self.name()?;
                            Self::once(&mut v.domain, n, "domain", sp)?;
                        }
                        "codomain" => {
                            let n = self.name()?;
                            Self::once(&mut v.codomain, n, "codomain", sp)?;
                        }
                        "map" => {
                            v.map.push(self.mapping()?);
                            while *self.peek() == Tok::Comma {
                                self.bump();
                                v.map.push(self.mapping()?);
                            }
                        }
                        other => return Err(DslError::new(sp, format!("`{other}` is not allowed in a valuation block"))),
                    }
                }
                None => v.map.push(self.mapping()?),
            }
            self.end_statement()?;
        }
        Ok(v)
    }

    fn functions_body(&mut self) -> Result<FunctionsDecl> {
        let mut fs = FunctionsDecl::default();
        loop {
            self.skip_seps();
            if matches!(self.peek(), Tok::RBrace | Tok::Eof) {
                break;
            }
            let Some((k, sp)) = self.keyword() else { return self.error("`domain:` or `<function>:`") };
            let name = self.name()?;
            self.bump();
            if k == "domain" {
                let n = self.name()?;
                Self::once(&mut fs.domain, n, "domain", sp)?;
            } else {
                let mut values = Vec::new();
                loop {
                    let x = self.name()?;
                    self.expect(Tok::Arrow, "`->`")?;
                    values.push((x, self.rational()?));
                    if *self.peek() != Tok::Comma {
                        break;
                    }
                    self.bump();
                }
                fs.functions.push(FunctionDecl { name, values });
            }
            self.end_statement()?;
        }
        Ok(fs)
    }
}

fn check_elements(block: &Block, elements: &[Name]) -> Result<HashMap<String, usize>> {
    if elements.is_empty() {
        return Err(DslError::new(block.name.span, format!("`{}` declares no elements", block.name.value)));
    }
    if elements.len() > CARRIER_CAP {
        return Err(DslError::new(
            elements[CARRIER_CAP].span,
            format!("{} elements exceed the carrier cap {CARRIER_CAP}", elements.len()),
        ));
    }
    let mut index = HashMap::new();
    for (i, e) in elements.iter().enumerate() {
        if e.value == "inf" {
            return Err(DslError::new(e.span, "`inf` is reserved"));
        }
        if index.insert(e.value.clone(), i).is_some() {
            return Err(DslError::new(e.span, format!("element `{}` declared twice", e.value)));
        }
    }
    Ok(index)
}

fn resolve(index: &HashMap<String, usize>, n: &Name, block: &Name) -> Result<usize> {
    index
        .get(&n.value)
        .copied()
        .ok_or_else(|| DslError::new(n.span, format!("undeclared element `{}` in `{}`", n.value, block.value)))
}

fn check_structure(block: &Block, s: &StructureDecl) -> Result<()> {
    let index = check_elements(block, &s.elements)?;
    let n = s.elements.len();
    let r = |x: &Name| resolve(&index, x, &block.name);
    let ring = block.kind.is_ring();
    let op = if ring { '+' } else { '*' };
    let what = if ring { "zero" } else { "identity" };
    match &s.identity {
        None => return Err(DslError::new(block.name.span, format!("`{}` has no `{what}:`", block.name.value))),
        Some(e) => {
            r(e)?;
        }
    }
    let mut seen = vec![None; n * n];
    for c in &s.cells {
        let (x, y) = (r(&c.x)?, r(&c.y)?);
        for z in &c.set {
            r(z)?;
        }
        if c.set.is_empty() {
            return Err(DslError::new(c.x.span, format!("cell {}{op}{} is empty", c.x.value, c.y.value)));
        }
        if seen[x * n + y].replace(c.x.span).is_some() {
            return Err(DslError::new(c.x.span, format!("duplicate cell {}{op}{}", c.x.value, c.y.value)));
        }
    }
    if let Some(i) = seen.iter().position(|s| s.is_none()) {
        return Err(DslError::new(
            block.name.span,
            format!("missing cell {}{op}{} in `{}`", s.elements[i / n].value, s.elements[i % n].value, block.name.value),
        ));
    }
    if ring {
        match &s.one {
            None => return Err(DslError::new(block.name.span, format!("`{}` has no `one:`", block.name.value))),
            Some(o) => {
                r(o)?;
            }
        }
        let mut seen = vec![false; n * n];
        for m in &s.mul {
            let (x, y) = (r(&m.x)?, r(&m.y)?);
            r(&m.product)?;
            if std::mem::replace(&mut seen[x * n + y], true) {
                return Err(DslError::new(m.x.span, format!("duplicate cell {}*{}", m.x.value, m.y.value)));
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(DslError::new(
                block.name.span,
                format!("missing cell {}*{} in `{}`", s.elements[i / n].value, s.elements[i % n].value, block.name.value),
            ));
        }
    }
    let mut pairs = Vec::new();
    for chain in &s.order {
        let ids = chain.iter().map(r).collect::<Result<Vec<_>>>()?;
        pairs.extend(ids.windows(2).map(|w| (w[0], w[1])));
    }
    if !s.order.is_empty() {
        OrderRelation::from_pairs(n, &pairs)
            .map_err(|e| DslError::new(s.order[0][0].span, format!("order of `{}`: {e}", block.name.value)))?;
    }
    if let Some(cone) = &s.cone {
        for x in cone {
            r(x)?;
        }
    }
    Ok(())
}

fn structure_named<'a>(doc: &'a Document, n: &Name, want: &[BlockKind], role: &str) -> Result<&'a Block> {
    let b = doc
        .block(&n.value)
        .ok_or_else(|| DslError::new(n.span, format!("undeclared structure `{}`", n.value)))?;
    if !want.contains(&b.kind) {
        return Err(DslError::new(n.span, format!("`{}` is a {}, not a valid {role}", n.value, b.kind.keyword())));
    }
    Ok(b)
}

fn check_valuation(doc: &Document, block: &Block, v: &ValuationDecl) -> Result<()> {
    let missing = |what: &str| DslError::new(block.name.span, format!("`{}` has no `{what}:`", block.name.value));
    let dom = structure_named(doc, v.domain.as_ref().ok_or_else(|| missing("domain"))?, &[BlockKind::Hyperfield], "domain")?;
    let cod = structure_named(doc, v.codomain.as_ref().ok_or_else(|| missing("codomain"))?, &[BlockKind::Hypergroup], "codomain")?;
    let (d, c) = (dom.structure().unwrap(), cod.structure().unwrap());
    if c.order.is_empty() {
        return Err(DslError::new(v.codomain.as_ref().unwrap().span, format!("codomain `{}` has no order", cod.name.value)));
    }
    let di: HashMap<String, usize> = d.elements.iter().enumerate().map(|(i, e)| (e.value.clone(), i)).collect();
    let ci: BTreeSet<&str> = c.elements.iter().map(|e| e.value.as_str()).collect();
    let mut seen = vec![false; d.elements.len()];
    for m in &v.map {
        let x = resolve(&di, &m.from, &dom.name)?;
        if m.to.value != "inf" && !ci.contains(m.to.value.as_str()) {
            return Err(DslError::new(m.to.span, format!("undeclared element `{}` in `{}`", m.to.value, cod.name.value)));
        }
        if std::mem::replace(&mut seen[x], true) {
            return Err(DslError::new(m.from.span, format!("`{}` mapped twice", m.from.value)));
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(DslError::new(block.name.span, format!("missing value for `{}`", d.elements[i].value)));
    }
    Ok(())
}

fn check_functions(doc: &Document, block: &Block, fs: &FunctionsDecl) -> Result<()> {
    let dn = fs
        .domain
        .as_ref()
        .ok_or_else(|| DslError::new(block.name.span, format!("`{}` has no `domain:`", block.name.value)))?;
    let dom = structure_named(doc, dn, &[BlockKind::Hypergroup], "domain")?;
    let d = dom.structure().unwrap();
    let di: HashMap<String, usize> = d.elements.iter().enumerate().map(|(i, e)| (e.value.clone(), i)).collect();
    let mut names = BTreeSet::new();
    for f in &fs.functions {
        if !names.insert(f.name.value.clone()) {
            return Err(DslError::new(f.name.span, format!("function `{}` defined twice", f.name.value)));
        }
        let mut seen = vec![false; d.elements.len()];
        for (x, _) in &f.values {
            let i = resolve(&di, x, &dom.name)?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(DslError::new(x.span, format!("`{}({})` given twice", f.name.value, x.value)));
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(DslError::new(f.name.span, format!("missing value {}({})", f.name.value, d.elements[i].value)));
        }
    }
    Ok(())
}

/// Parses and validates a document: syntax, declared names, total tables,
/// no duplicate cells, and well-formed orders. Axioms are not checked here.
pub fn parse(text: &str) -> Result<Document> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let doc = p.document()?;
    let mut names = BTreeSet::new();
    for b in &doc.blocks {
        if !names.insert(b.name.value.as_str()) {
            return Err(DslError::new(b.name.span, format!("`{}` declared twice", b.name.value)));
        }
        match &b.body {
            BlockBody::Structure(s) => check_structure(b, s)?,
            BlockBody::Valuation(v) => check_valuation(&doc, b, v)?,
            BlockBody::Functions(f) => check_functions(&doc, b, f)?,
        }
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::serialize;

    const SMALL: &str = "hypergroup Z2 {\n  elements: e, a\n  identity: e\n  table: e*e = {e}; e*a = a*e = {a}\n  a*a = {e}\n}\n";

    #[test]
    fn parses_small_hypergroup() {
        let doc = parse(SMALL).unwrap();
        let s = doc.blocks[0].structure().unwrap();
        assert_eq!(s.cells.len(), 4);
        assert_eq!(s.cells[2].x.value, "a");
    }

    #[test]
    fn empty_input() {
        for text in ["", "   \n# only a comment\n"] {
            let e = parse(text).unwrap_err();
            assert_eq!(e.message, "no declarations");
        }
    }

    #[test]
    fn missing_cell_is_named() {
        let e = parse(&SMALL.replace("  a*a = {e}\n", "")).unwrap_err();
        assert_eq!(e.message, "missing cell a*a in `Z2`");
        assert_eq!(e.span, Span { line: 1, col: 12 });
    }

    #[test]
    fn duplicate_cell() {
        let e = parse(&SMALL.replace("a*a = {e}", "a*a = {e}; a*a = {a}")).unwrap_err();
        assert_eq!(e.message, "duplicate cell a*a");
        assert_eq!(e.span, Span { line: 5, col: 14 });
    }

    #[test]
    fn undeclared_element() {
        let e = parse(&SMALL.replace("a*a = {e}", "a*a = {b}")).unwrap_err();
        assert_eq!(e.message, "undeclared element `b` in `Z2`");
        assert_eq!(e.span.line, 5);
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse("hypergroup X {\n  elements: a b\n}\n").unwrap_err();
        assert_eq!(e.span, Span { line: 2, col: 15 });
        let e = parse("monoid X {}").unwrap_err();
        assert!(e.message.starts_with("unknown declaration `monoid`"));
        let e = parse("hypergroup X { elements: a ! }").unwrap_err();
        assert_eq!(e.message, "unexpected character `!`");
    }

    #[test]
    fn dash_names_and_arrows() {
        let toks: Vec<Tok> = lex("1*-1 -> -x").unwrap().into_iter().map(|t| t.0).collect();
        assert_eq!(
            toks,
            vec![
                Tok::Ident("1".into()),
                Tok::Op('*'),
                Tok::Ident("-1".into()),
                Tok::Arrow,
                Tok::Ident("-x".into()),
                Tok::Sep,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn round_trip() {
        let doc = parse(SMALL).unwrap();
        let text = serialize(&doc);
        assert_eq!(parse(&text).unwrap(), doc);
        assert_eq!(serialize(&parse(&text).unwrap()), text);
    }
}
