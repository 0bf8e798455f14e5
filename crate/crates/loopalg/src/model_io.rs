//! The `.sul` model language, the element grammar, and reports.
//!
//! ```text
//! model m11
//! generator x deg 3
//! generator y deg 3
//! generator z deg 5
//! diff z = x*y
//! weight z = 2
//! shriek fundamental = (-L(x)+R(x))*(-L(y)+R(y))*(-L(z)+R(z))
//! ```
//!
//! Bars are written with a prime (`z'`), tensor slots with `L(..)`/`R(..)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::algebra::{mul, power, Algebra, Cdga, Derivation, Element, Generator, Mono, Slot, Tag, Q};
use crate::Error;

const RESERVED: [&str; 4] = ["u", "e", "L", "R"];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Sym(String),
    Prime,
    Slash,
    Star,
    Caret,
    Plus,
    Minus,
    LParen,
    RParen,
    Eq,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn perr<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, Error> {
    Err(Error::Parse { line, col, msg: msg.into() })
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<Token>, Error> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[s..i].iter().collect();
            out.push(Token { tok: Tok::Num(digits.parse().unwrap()), line, col });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Sym(chars[s..i].iter().collect()), line, col });
            continue;
        }
        let t = match c {
            '\'' | '′' => Tok::Prime,
            '/' => Tok::Slash,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '=' => Tok::Eq,
            _ => return perr(line, col, format!("unexpected character '{c}'")),
        };
        out.push(Token { tok: t, line, col });
        i += 1;
    }
    Ok(out)
}

/// Resolves a symbol (name, barred, slot) to a generator index.
pub trait Resolver {
    fn resolve(&self, name: &str, bar: bool, slot: Slot) -> Option<usize>;
}

/// Resolution by generator names and tags of an algebra.
pub struct AlgebraResolver<'a>(pub &'a Algebra);

impl Resolver for AlgebraResolver<'_> {
    fn resolve(&self, name: &str, bar: bool, slot: Slot) -> Option<usize> {
        let alg = self.0;
        let tag_ok = |g: &Generator| match g.tag {
            Tag::Bar => bar,
            _ => !bar,
        };
        alg.gens.iter().position(|g| g.name == name && g.slot == slot && tag_ok(g))
    }
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    alg: &'a Algebra,
    res: &'a dyn Resolver,
    line: usize,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => (self.line, self.end_col),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self, slot: Slot) -> Result<Element, Error> {
        let mut acc = Element::zero();
        let mut sign = Q::one();
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                sign = -Q::one();
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        loop {
            let t = self.term(slot)?;
            acc.add_scaled(&t, &sign);
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    sign = Q::one();
                }
                Some(Tok::Minus) => {
                    self.bump();
                    sign = -Q::one();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, slot: Slot) -> Result<Element, Error> {
        let mut acc = self.factor(slot)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.factor(slot)?;
                    acc = mul(self.alg, &acc, &f);
                }
                Some(Tok::Num(_)) | Some(Tok::Sym(_)) | Some(Tok::LParen) => {
                    let f = self.factor(slot)?;
                    acc = mul(self.alg, &acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self, slot: Slot) -> Result<Element, Error> {
        let base = self.atom(slot)?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let (l, c) = self.here();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let k: u32 = n.try_into().map_err(|_| Error::Parse { line: l, col: c, msg: "exponent too large".into() })?;
                    return Ok(power(self.alg, &base, k));
                }
                _ => return perr(l, c, "expected an integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self, slot: Slot) -> Result<Element, Error> {
        let (l, c) = self.here();
        match self.bump() {
            Some(Tok::Num(n)) => {
                let mut v = Q::from_integer(n);
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let (l2, c2) = self.here();
                    match self.bump() {
                        Some(Tok::Num(d)) if !d.is_zero() => v /= Q::from_integer(d),
                        _ => return perr(l2, c2, "malformed rational: expected a nonzero denominator"),
                    }
                }
                Ok(Element::scalar(self.alg, v))
            }
            Some(Tok::LParen) => {
                let e = self.expr(slot)?;
                self.expect_rparen()?;
                Ok(e)
            }
            Some(Tok::Sym(s)) => {
                if (s == "L" || s == "R") && self.peek() == Some(&Tok::LParen) {
                    if slot != Slot::Plain {
                        return perr(l, c, "nested tensor slots");
                    }
                    self.bump();
                    let inner = if s == "L" { Slot::Left } else { Slot::Right };
                    let e = self.expr(inner)?;
                    self.expect_rparen()?;
                    return Ok(e);
                }
                let bar = if let Some(Tok::Prime) = self.peek() {
                    self.bump();
                    true
                } else {
                    false
                };
                match self.res.resolve(&s, bar, slot) {
                    Some(i) => Ok(Element::gen(self.alg, i)),
                    None => {
                        let shown = if bar { format!("{s}'") } else { s.clone() };
                        perr(l, c, format!("unknown symbol '{shown}'"))
                    }
                }
            }
            Some(t) => perr(l, c, format!("unexpected token {t:?}")),
            None => perr(l, c, "unexpected end of expression"),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), Error> {
        let (l, c) = self.here();
        match self.bump() {
            Some(Tok::RParen) => Ok(()),
            _ => perr(l, c, "expected ')'"),
        }
    }
}

fn parse_expr_at(alg: &Algebra, res: &dyn Resolver, text: &str, line: usize, col: usize) -> Result<Element, Error> {
    let toks = lex(text, line, col)?;
    if toks.is_empty() {
        return perr(line, col, "empty expression");
    }
    let mut p = Parser { toks, pos: 0, alg, res, line, end_col: col + text.chars().count() };
    let e = p.expr(Slot::Plain)?;
    if p.pos < p.toks.len() {
        let (l, c) = p.here();
        return perr(l, c, "trailing input");
    }
    Ok(e)
}

/// Parse an element of `alg`; bars are primed symbols, slots are `L(..)`/`R(..)`.
pub fn parse_element(alg: &Algebra, text: &str) -> Result<Element, Error> {
    parse_expr_at(alg, &AlgebraResolver(alg), text, 1, 1)
}

fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn mono_factors(alg: &Algebra, m: &Mono, slot: Slot) -> Vec<String> {
    let mut out = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        let g = &alg.gens[i];
        if e == 0 || g.slot != slot {
            continue;
        }
        if e == 1 {
            out.push(g.symbol());
        } else {
            out.push(format!("{}^{}", g.symbol(), e));
        }
    }
    out
}

pub fn format_mono(alg: &Algebra, m: &Mono) -> String {
    let mut parts = mono_factors(alg, m, Slot::Plain);
    for (slot, name) in [(Slot::Left, "L"), (Slot::Right, "R")] {
        let f = mono_factors(alg, m, slot);
        if !f.is_empty() {
            parts.push(format!("{}({})", name, f.join("*")));
        }
    }
    parts.join("*")
}

/// Canonical text form; `parse_element(alg, format_element(alg, e)) == e`.
pub fn format_element(alg: &Algebra, e: &Element) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (k, (m, c)) in e.terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let body = format_mono(alg, m);
        if body.is_empty() {
            s.push_str(&fmt_q(&a));
        } else if a.is_one() {
            s.push_str(&body);
        } else {
            s.push_str(&fmt_q(&a));
            s.push(' ');
            s.push_str(&body);
        }
    }
    s
}

/// A parsed `.sul` file.
#[derive(Clone, Debug)]
pub struct ModelFile {
    pub cdga: Cdga,
    /// The shriek fundamental class as an element of the tensor square of
    /// the base algebra (slots `L`/`R`), when declared.
    pub shriek: Option<Element>,
}

/// Tensor-square algebra of the base generators, with `L`/`R` slots.
pub fn slot_algebra(base: &Algebra) -> Algebra {
    let mut gens = Vec::new();
    for slot in [Slot::Left, Slot::Right] {
        for g in &base.gens {
            let mut h = g.clone();
            h.slot = slot;
            gens.push(h);
        }
    }
    Algebra::new(gens)
}

struct Assign {
    line: usize,
    sym: String,
    scol: usize,
    rhs: String,
    rcol: usize,
}

struct Stmt {
    words: Vec<(String, usize)>,
    rhs: Option<(String, usize)>,
}

fn split_stmt(raw: &str) -> Option<Stmt> {
    let text = match raw.find('#') {
        Some(i) => &raw[..i],
        None => raw,
    };
    if text.trim().is_empty() {
        return None;
    }
    let (lhs, rhs) = match text.find('=') {
        Some(i) => (&text[..i], Some((text[i + 1..].to_string(), text[..=i].chars().count() + 1))),
        None => (text, None),
    };
    let mut words = Vec::new();
    let mut col = 1;
    let mut cur = String::new();
    let mut start = 1;
    for ch in lhs.chars() {
        if ch.is_whitespace() {
            if !cur.is_empty() {
                words.push((std::mem::take(&mut cur), start));
            }
        } else {
            if cur.is_empty() {
                start = col;
            }
            cur.push(ch);
        }
        col += 1;
    }
    if !cur.is_empty() {
        words.push((cur, start));
    }
    Some(Stmt { words, rhs })
}

fn valid_symbol(s: &str) -> bool {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) if c.is_alphabetic() || c == '_' => cs.all(|c| c.is_alphanumeric() || c == '_'),
        _ => false,
    }
}

/// Parse a model file. Validates declarations, homogeneity, weights and d² = 0.
pub fn parse_model_file(text: &str) -> Result<ModelFile, Error> {
    let mut name = String::from("model");
    let mut gens: Vec<Generator> = Vec::new();
    let mut diffs: Vec<Assign> = Vec::new();
    let mut weights: Vec<Assign> = Vec::new();
    let mut shriek: Option<(String, usize, usize)> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let st = match split_stmt(raw) {
            Some(s) => s,
            None => continue,
        };
        let w: Vec<&str> = st.words.iter().map(|(s, _)| s.as_str()).collect();
        let col = |k: usize| st.words.get(k).map(|x| x.1).unwrap_or(1);
        match (w.first().copied(), st.rhs.as_ref()) {
            (Some("model"), None) if w.len() == 2 => name = w[1].to_string(),
            (Some("generator"), None) => {
                if w.len() != 4 || w[2] != "deg" {
                    return perr(line, col(0), "expected 'generator <sym> deg <n>'");
                }
                let sym = w[1];
                if !valid_symbol(sym) {
                    return perr(line, col(1), format!("invalid generator name '{sym}'"));
                }
                if RESERVED.contains(&sym) {
                    return perr(line, col(1), format!("'{sym}' is reserved"));
                }
                if gens.iter().any(|g| g.name == sym) {
                    return perr(line, col(1), format!("generator '{sym}' declared twice"));
                }
                let deg: i64 = match w[3].parse() {
                    Ok(d) => d,
                    Err(_) => return perr(line, col(3), "degree must be an integer"),
                };
                if deg <= 0 {
                    return perr(line, col(3), format!("generator '{sym}' must have positive degree"));
                }
                if deg < 2 {
                    return perr(line, col(3), format!("generator '{sym}' has degree 1; base models must be simply connected"));
                }
                gens.push(Generator::new(sym, deg as i32, Tag::Base));
            }
            (Some("diff"), Some((rhs, rc))) if w.len() == 2 => {
                diffs.push(Assign { line, sym: w[1].to_string(), scol: col(1), rhs: rhs.clone(), rcol: *rc });
            }
            (Some("weight"), Some((rhs, rc))) if w.len() == 2 => {
                weights.push(Assign { line, sym: w[1].to_string(), scol: col(1), rhs: rhs.clone(), rcol: *rc });
            }
            (Some("shriek"), Some((rhs, rc))) if w.len() == 2 && w[1] == "fundamental" => {
                shriek = Some((rhs.clone(), line, *rc));
            }
            _ => return perr(line, col(0), "unrecognised statement"),
        }
    }
    let alg = Algebra::new(gens.clone());
    let res = AlgebraResolver(&alg);
    let mut d = Derivation::zero(&alg, 1);
    let mut seen = vec![false; gens.len()];
    for Assign { line, sym, scol, rhs, rcol } in &diffs {
        let i = match alg.find(sym, Tag::Base, Slot::Plain) {
            Some(i) => i,
            None => return perr(*line, *scol, format!("undeclared generator '{sym}'")),
        };
        if seen[i] {
            return perr(*line, *scol, format!("differential of '{sym}' given twice"));
        }
        seen[i] = true;
        let v = parse_expr_at(&alg, &res, rhs, *line, *rcol)?;
        for m in v.terms.keys() {
            if alg.degree(m) != gens[i].degree as i64 + 1 {
                return perr(
                    *line,
                    *rcol,
                    format!("inhomogeneous differential: d {sym} must have degree {}", gens[i].degree + 1),
                );
            }
        }
        d.values[i] = v;
    }
    let mut wts: Option<Vec<i64>> = None;
    for Assign { line, sym, scol, rhs, rcol } in &weights {
        let i = match alg.find(sym, Tag::Base, Slot::Plain) {
            Some(i) => i,
            None => return perr(*line, *scol, format!("undeclared generator '{sym}'")),
        };
        let v: i64 = match rhs.trim().parse() {
            Ok(v) => v,
            Err(_) => return perr(*line, *rcol, "weight must be an integer"),
        };
        if v <= 0 {
            return perr(*line, *rcol, "weights must be positive integers");
        }
        wts.get_or_insert_with(|| vec![0; gens.len()])[i] = v;
    }
    if let Some(w) = &wts {
        if let Some(i) = w.iter().position(|&x| x == 0) {
            return perr(1, 1, format!("no weight given for generator '{}'", gens[i].name));
        }
    }
    let mut cdga = Cdga::new(&name, alg, d)?;
    cdga.weights = wts;
    let shriek = match shriek {
        None => None,
        Some((rhs, line, col)) => {
            let sq = slot_algebra(&cdga.alg);
            Some(parse_expr_at(&sq, &AlgebraResolver(&sq), &rhs, line, col)?)
        }
    };
    Ok(ModelFile { cdga, shriek })
}

pub fn parse_model(text: &str) -> Result<Cdga, Error> {
    Ok(parse_model_file(text)?.cdga)
}

/// Serialise a model back into the `.sul` language.
pub fn format_model(m: &ModelFile) -> String {
    let c = &m.cdga;
    let mut s = format!("model {}\n", c.name);
    for g in &c.alg.gens {
        s.push_str(&format!("generator {} deg {}\n", g.name, g.degree));
    }
    for (i, g) in c.alg.gens.iter().enumerate() {
        s.push_str(&format!("diff {} = {}\n", g.name, format_element(&c.alg, &c.d.values[i])));
    }
    if let Some(w) = &c.weights {
        for (i, g) in c.alg.gens.iter().enumerate() {
            s.push_str(&format!("weight {} = {}\n", g.name, w[i]));
        }
    }
    if let Some(f) = &m.shriek {
        s.push_str(&format!("shriek fundamental = {}\n", format_element(&slot_algebra(&c.alg), f)));
    }
    s
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Table {
    pub degree: i64,
    pub dimension: usize,
    pub basis: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filtration: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub page: Option<usize>,
}

impl Table {
    pub fn new(degree: i64, basis: Vec<String>) -> Self {
        Table { degree, dimension: basis.len(), basis, component: None, filtration: None, page: None }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub command: String,
    pub model_name: String,
    pub max_degree: i64,
    pub tables: Vec<Table>,
    pub verdicts: Map<String, Value>,
    pub witnesses: Map<String, Value>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: &str, model_name: &str, max_degree: i64) -> Self {
        Report {
            command: command.to_string(),
            model_name: model_name.to_string(),
            max_degree,
            tables: Vec::new(),
            verdicts: Map::new(),
            witnesses: Map::new(),
            elapsed_ms: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report serialises");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!("{} {} (max degree {})\n", r.command, r.model_name, r.max_degree);
            for t in &r.tables {
                let mut head = format!("degree {}", t.degree);
                if let Some(n) = t.component {
                    head.push_str(&format!(" component {n}"));
                }
                if let Some(p) = t.filtration {
                    head.push_str(&format!(" filtration {p}"));
                }
                if let Some(p) = t.page {
                    head.push_str(&format!(" page {p}"));
                }
                s.push_str(&format!("{head}: dim {}\n", t.dimension));
                for b in &t.basis {
                    s.push_str(&format!("  {b}\n"));
                }
            }
            for (k, v) in &r.verdicts {
                s.push_str(&format!("{k}: {v}\n"));
            }
            for (k, v) in &r.witnesses {
                s.push_str(&format!("witness {k}: {v}\n"));
            }
            s
        }
    }
}
