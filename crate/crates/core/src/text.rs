//! Line-oriented text formats for groups, function groups, homomorphisms
//! and codes, and the [`Workspace`] that resolves them by name.
//!
//! A file is a sequence of blocks. Each block opens with `group`, `fgroup`,
//! `hom` or `code` followed by a name; `#` starts a comment.
//!
//! ```text
//! group Z2
//! order 2
//! table
//! 0 1
//! 1 0
//!
//! fgroup A
//! group Z2
//! domain 3
//! gen 1 1 0
//! gen 0 1 1
//!
//! hom swap
//! source A
//! target A
//! pair 1 1 0 -> 0 1 1
//! pair 0 1 1 -> 1 1 0
//!
//! code H
//! field 2
//! length 7
//! dim 4
//! row 1000011
//! ...
//! ```
//!
//! `cyclic <n>` and `symmetric <n>` may replace `order`/`table`, and `full`
//! may replace the `gen` lines of an `fgroup`. Homomorphism sources and
//! targets may name codes as well as function groups.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::code::LinearCode;
use crate::fgroup::{FunctionGroup, PointMap};
use crate::group::FiniteGroup;
use crate::hom::GroupHom;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorkspaceError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{file}:{line}:{column}: {message}")]
    Parse { file: String, line: usize, column: usize, message: String },
    #[error("{file}:{line}: duplicate name `{name}`")]
    DuplicateName { name: String, file: String, line: usize },
    #[error("{file}:{line}: `{name}` does not name a {kind}")]
    DanglingReference { name: String, kind: &'static str, file: String, line: usize },
    #[error("{file}:{line}: {kind} `{name}` is invalid: {message}")]
    Invalid { kind: &'static str, name: String, file: String, line: usize, message: String },
}

impl WorkspaceError {
    /// Short machine-readable kind, used in error prefixes.
    pub fn kind(&self) -> &'static str {
        match self {
            WorkspaceError::Io { .. } => "IoError",
            WorkspaceError::Parse { .. } => "ParseError",
            WorkspaceError::DuplicateName { .. } => "DuplicateName",
            WorkspaceError::DanglingReference { .. } => "DanglingReference",
            WorkspaceError::Invalid { .. } => "InvalidDefinition",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Group,
    FGroup,
    Hom,
    Code,
}

impl Kind {
    fn keyword(self) -> &'static str {
        match self {
            Kind::Group => "group",
            Kind::FGroup => "fgroup",
            Kind::Hom => "hom",
            Kind::Code => "code",
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    text: String,
    column: usize,
}

#[derive(Debug, Clone)]
struct Line {
    number: usize,
    tokens: Vec<Token>,
}

#[derive(Debug, Clone)]
struct Block {
    kind: Kind,
    name: String,
    file: String,
    line: usize,
    body: Vec<Line>,
}

fn tokenize(text: &str) -> Vec<Line> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token { text: content[s..pos].to_string(), column: content[..s].chars().count() + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            out.push(Line { number: i + 1, tokens });
        }
    }
    out
}

struct Cursor<'a> {
    file: &'a str,
}

impl Cursor<'_> {
    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> WorkspaceError {
        WorkspaceError::Parse { file: self.file.to_string(), line, column, message: message.into() }
    }

    fn number(&self, line: &Line, token: &Token) -> Result<usize, WorkspaceError> {
        token.text.parse().map_err(|_| self.error(line.number, token.column, format!("expected a number, found `{}`", token.text)))
    }

    fn numbers(&self, line: &Line, tokens: &[Token]) -> Result<Vec<usize>, WorkspaceError> {
        tokens.iter().map(|t| self.number(line, t)).collect()
    }

    /// `keyword <number>` with nothing else on the line.
    fn single_number(&self, line: &Line) -> Result<usize, WorkspaceError> {
        match line.tokens.as_slice() {
            [_, t] => self.number(line, t),
            [k] => Err(self.error(line.number, k.column + k.text.len(), format!("`{}` needs a value", k.text))),
            [_, _, extra, ..] => Err(self.error(line.number, extra.column, "unexpected trailing input")),
            [] => unreachable!("lines are never empty"),
        }
    }

    fn single_name<'l>(&self, line: &'l Line) -> Result<&'l str, WorkspaceError> {
        match line.tokens.as_slice() {
            [_, t] => Ok(&t.text),
            [k] => Err(self.error(line.number, k.column + k.text.len(), format!("`{}` needs a name", k.text))),
            [_, _, extra, ..] => Err(self.error(line.number, extra.column, "unexpected trailing input")),
            [] => unreachable!("lines are never empty"),
        }
    }
}

fn split_blocks(file: &str, text: &str) -> Result<Vec<Block>, WorkspaceError> {
    let cursor = Cursor { file };
    let mut blocks: Vec<Block> = Vec::new();
    for line in tokenize(text) {
        let head = &line.tokens[0];
        let kind = match head.text.as_str() {
            "group" if blocks.last().is_none_or(|b| b.kind != Kind::FGroup || b.body.iter().any(|l| l.tokens[0].text == "group")) => {
                Some(Kind::Group)
            }
            "fgroup" => Some(Kind::FGroup),
            "hom" => Some(Kind::Hom),
            "code" => Some(Kind::Code),
            _ => None,
        };
        match kind {
            Some(kind) => {
                let name = cursor.single_name(&line)?.to_string();
                blocks.push(Block { kind, name, file: file.to_string(), line: line.number, body: Vec::new() });
            }
            None => match blocks.last_mut() {
                Some(b) => b.body.push(line),
                None => {
                    return Err(cursor.error(
                        line.number,
                        head.column,
                        format!("expected `group`, `fgroup`, `hom` or `code`, found `{}`", head.text),
                    ))
                }
            },
        }
    }
    Ok(blocks)
}

/// Named groups, function groups, homomorphisms and codes, all in one
/// namespace.
#[derive(Debug, Default)]
pub struct Workspace {
    groups: BTreeMap<String, Arc<FiniteGroup>>,
    fgroups: BTreeMap<String, Arc<FunctionGroup>>,
    homs: BTreeMap<String, GroupHom>,
    codes: BTreeMap<String, LinearCode>,
}

impl Workspace {
    /// Reads and parses files.
    pub fn load<P: AsRef<Path>>(paths: &[P], max_closure: usize) -> Result<Self, WorkspaceError> {
        let mut sources = Vec::with_capacity(paths.len());
        for p in paths {
            let path = p.as_ref().display().to_string();
            let text = std::fs::read_to_string(p).map_err(|e| WorkspaceError::Io { path: path.clone(), message: e.to_string() })?;
            sources.push((path, text));
        }
        Self::parse(&sources, max_closure)
    }

    /// Parses `(file label, text)` pairs. Names may be used before they are
    /// defined and across files.
    pub fn parse(sources: &[(String, String)], max_closure: usize) -> Result<Self, WorkspaceError> {
        let mut blocks = Vec::new();
        for (file, text) in sources {
            blocks.extend(split_blocks(file, text)?);
        }
        let mut seen: HashMap<&str, ()> = HashMap::new();
        for b in &blocks {
            if seen.insert(&b.name, ()).is_some() {
                return Err(WorkspaceError::DuplicateName { name: b.name.clone(), file: b.file.clone(), line: b.line });
            }
        }
        let mut ws = Workspace::default();
        for kind in [Kind::Group, Kind::FGroup, Kind::Code, Kind::Hom] {
            for b in blocks.iter().filter(|b| b.kind == kind) {
                match kind {
                    Kind::Group => {
                        let g = build_group(b)?;
                        ws.groups.insert(b.name.clone(), Arc::new(g));
                    }
                    Kind::FGroup => {
                        let a = ws.build_fgroup(b, max_closure)?;
                        ws.fgroups.insert(b.name.clone(), Arc::new(a));
                    }
                    Kind::Code => {
                        let c = build_code(b, max_closure)?;
                        ws.codes.insert(b.name.clone(), c);
                    }
                    Kind::Hom => {
                        let h = ws.build_hom(b)?;
                        ws.homs.insert(b.name.clone(), h);
                    }
                }
            }
        }
        Ok(ws)
    }

    pub fn group(&self, name: &str) -> Option<&Arc<FiniteGroup>> {
        self.groups.get(name)
    }

    /// A function group, or the function group of a code.
    pub fn fgroup(&self, name: &str) -> Option<&Arc<FunctionGroup>> {
        self.fgroups.get(name).or_else(|| self.codes.get(name).map(LinearCode::as_fgroup))
    }

    pub fn hom(&self, name: &str) -> Option<&GroupHom> {
        self.homs.get(name)
    }

    pub fn code(&self, name: &str) -> Option<&LinearCode> {
        self.codes.get(name)
    }

    pub fn group_names(&self) -> impl Iterator<Item = &str> {
        self.groups.keys().map(String::as_str)
    }

    pub fn fgroup_names(&self) -> impl Iterator<Item = &str> {
        self.fgroups.keys().map(String::as_str)
    }

    pub fn hom_names(&self) -> impl Iterator<Item = &str> {
        self.homs.keys().map(String::as_str)
    }

    pub fn code_names(&self) -> impl Iterator<Item = &str> {
        self.codes.keys().map(String::as_str)
    }

    fn build_fgroup(&self, b: &Block, max_closure: usize) -> Result<FunctionGroup, WorkspaceError> {
        let cursor = Cursor { file: &b.file };
        let mut group: Option<(&Line, &str)> = None;
        let mut domain: Option<usize> = None;
        let mut full = false;
        let mut gens: Vec<(&Line, Vec<usize>)> = Vec::new();
        for line in &b.body {
            let head = &line.tokens[0];
            match head.text.as_str() {
                "group" => group = Some((line, cursor.single_name(line)?)),
                "domain" => domain = Some(cursor.single_number(line)?),
                "full" => full = true,
                "gen" => gens.push((line, cursor.numbers(line, &line.tokens[1..])?)),
                other => return Err(cursor.error(line.number, head.column, format!("unknown fgroup field `{other}`"))),
            }
        }
        let missing = |field: &str| cursor.error(b.line, 1, format!("fgroup `{}` is missing `{field}`", b.name));
        let (gline, gname) = group.ok_or_else(|| missing("group"))?;
        let n = domain.ok_or_else(|| missing("domain"))?;
        let g = self.groups.get(gname).ok_or_else(|| WorkspaceError::DanglingReference {
            name: gname.to_string(),
            kind: "group",
            file: b.file.clone(),
            line: gline.number,
        })?;
        let mut maps = Vec::with_capacity(gens.len());
        for (line, values) in &gens {
            if values.len() != n {
                let column = line.tokens.get(n + 1).or(line.tokens.last()).map_or(1, |t| t.column);
                return Err(cursor.error(line.number, column, format!("expected {n} values, found {}", values.len())));
            }
            if let Some(i) = values.iter().position(|&v| v >= g.order()) {
                return Err(cursor.error(line.number, line.tokens[i + 1].column, format!("{} is not an element of `{gname}`", values[i])));
            }
            maps.push(PointMap::new(values.iter().map(|&v| v as u8).collect()));
        }
        let invalid = |message: String| WorkspaceError::Invalid {
            kind: "fgroup",
            name: b.name.clone(),
            file: b.file.clone(),
            line: b.line,
            message,
        };
        if full {
            let a = FunctionGroup::full_power(g.clone(), n).map_err(|e| invalid(e.to_string()))?;
            if a.len() > max_closure {
                return Err(invalid(format!("closure exceeds the bound of {max_closure} elements")));
            }
            if !maps.is_empty() {
                return Err(invalid("`full` cannot be combined with `gen`".into()));
            }
            return Ok(a);
        }
        FunctionGroup::generate_bounded(g.clone(), n, &maps, max_closure).map_err(|e| invalid(e.to_string()))
    }

    fn build_hom(&self, b: &Block) -> Result<GroupHom, WorkspaceError> {
        let cursor = Cursor { file: &b.file };
        let mut source: Option<(&Line, &str)> = None;
        let mut target: Option<(&Line, &str)> = None;
        let mut pairs: Vec<(&Line, Vec<usize>, Vec<usize>)> = Vec::new();
        for line in &b.body {
            let head = &line.tokens[0];
            match head.text.as_str() {
                "source" => source = Some((line, cursor.single_name(line)?)),
                "target" => target = Some((line, cursor.single_name(line)?)),
                "pair" => {
                    let rest = &line.tokens[1..];
                    let arrow = rest
                        .iter()
                        .position(|t| t.text == "->")
                        .ok_or_else(|| cursor.error(line.number, head.column, "pair needs `->`"))?;
                    pairs.push((line, cursor.numbers(line, &rest[..arrow])?, cursor.numbers(line, &rest[arrow + 1..])?));
                }
                other => return Err(cursor.error(line.number, head.column, format!("unknown hom field `{other}`"))),
            }
        }
        let missing = |field: &str| cursor.error(b.line, 1, format!("hom `{}` is missing `{field}`", b.name));
        let resolve = |(line, name): (&Line, &str)| {
            self.fgroup(name).cloned().ok_or_else(|| WorkspaceError::DanglingReference {
                name: name.to_string(),
                kind: "function group",
                file: b.file.clone(),
                line: line.number,
            })
        };
        let a = resolve(source.ok_or_else(|| missing("source"))?)?;
        let bb = resolve(target.ok_or_else(|| missing("target"))?)?;
        let mut maps = Vec::with_capacity(pairs.len());
        for (line, s, t) in &pairs {
            for (values, fg) in [(s, &a), (t, &bb)] {
                if values.len() != fg.domain_size() {
                    return Err(cursor.error(
                        line.number,
                        line.tokens[0].column,
                        format!("expected {} values on each side, found {}", fg.domain_size(), values.len()),
                    ));
                }
                if values.iter().any(|&v| v >= fg.group().order()) {
                    return Err(cursor.error(line.number, line.tokens[0].column, "value out of range for the group"));
                }
            }
            let pm = |v: &Vec<usize>| PointMap::new(v.iter().map(|&x| x as u8).collect());
            maps.push((pm(s), pm(t)));
        }
        GroupHom::from_images(a, bb, &maps).map_err(|e| WorkspaceError::Invalid {
            kind: "hom",
            name: b.name.clone(),
            file: b.file.clone(),
            line: b.line,
            message: e.to_string(),
        })
    }
}

fn build_group(b: &Block) -> Result<FiniteGroup, WorkspaceError> {
    let cursor = Cursor { file: &b.file };
    let invalid = |message: String| WorkspaceError::Invalid {
        kind: "group",
        name: b.name.clone(),
        file: b.file.clone(),
        line: b.line,
        message,
    };
    let mut order: Option<usize> = None;
    let mut lines = b.body.iter();
    while let Some(line) = lines.next() {
        let head = &line.tokens[0];
        match head.text.as_str() {
            "cyclic" => return FiniteGroup::cyclic(cursor.single_number(line)?).map_err(|e| invalid(e.to_string())),
            "symmetric" => return FiniteGroup::symmetric(cursor.single_number(line)?).map_err(|e| invalid(e.to_string())),
            "order" => order = Some(cursor.single_number(line)?),
            "table" => {
                let n = order.ok_or_else(|| cursor.error(line.number, head.column, "`table` must follow `order`"))?;
                let mut rows = Vec::with_capacity(n);
                for _ in 0..n {
                    let row = lines
                        .next()
                        .ok_or_else(|| cursor.error(line.number, head.column, format!("table needs {n} rows")))?;
                    if row.tokens.len() != n {
                        let column = row.tokens.get(n).map_or(row.tokens.last().map_or(1, |t| t.column + t.text.len()), |t| t.column);
                        return Err(cursor.error(
                            row.number,
                            column,
                            format!("table row has {} entries, expected {n}", row.tokens.len()),
                        ));
                    }
                    rows.push(cursor.numbers(row, &row.tokens)?);
                }
                if let Some(extra) = lines.next() {
                    return Err(cursor.error(extra.number, extra.tokens[0].column, "unexpected input after the table"));
                }
                return FiniteGroup::from_table(n, &rows).map_err(|e| invalid(e.to_string()));
            }
            other => return Err(cursor.error(line.number, head.column, format!("unknown group field `{other}`"))),
        }
    }
    Err(cursor.error(b.line, 1, format!("group `{}` has no table", b.name)))
}

fn build_code(b: &Block, max_closure: usize) -> Result<LinearCode, WorkspaceError> {
    let cursor = Cursor { file: &b.file };
    let (mut p, mut n, mut k) = (None, None, None);
    let mut rows: Vec<(&Line, &[Token])> = Vec::new();
    for line in &b.body {
        let head = &line.tokens[0];
        match head.text.as_str() {
            "field" => p = Some(cursor.single_number(line)?),
            "length" => n = Some(cursor.single_number(line)?),
            "dim" => k = Some(cursor.single_number(line)?),
            "row" => rows.push((line, &line.tokens[1..])),
            other => return Err(cursor.error(line.number, head.column, format!("unknown code field `{other}`"))),
        }
    }
    let missing = |field: &str| cursor.error(b.line, 1, format!("code `{}` is missing `{field}`", b.name));
    let p = p.ok_or_else(|| missing("field"))?;
    let n = n.ok_or_else(|| missing("length"))?;
    let k = k.ok_or_else(|| missing("dim"))?;
    if rows.len() != k {
        return Err(cursor.error(b.line, 1, format!("code `{}` declares dim {k} but has {} rows", b.name, rows.len())));
    }
    let mut matrix = Vec::with_capacity(k);
    for (line, tokens) in rows {
        // A single token of n digits is the compact form.
        let entries = match tokens {
            [t] if n > 1 && p <= 10 && t.text.len() == n && t.text.chars().all(|c| c.is_ascii_digit()) => {
                t.text.chars().map(|c| c.to_digit(10).expect("digit") as usize).collect()
            }
            _ => cursor.numbers(line, tokens)?,
        };
        if entries.len() != n {
            let column = tokens.first().map_or(line.tokens[0].column, |t| t.column);
            return Err(cursor.error(line.number, column, format!("row has {} entries, expected {n}", entries.len())));
        }
        matrix.push(entries);
    }
    LinearCode::from_matrix_bounded(p, n, &matrix, max_closure).map_err(|e| WorkspaceError::Invalid {
        kind: "code",
        name: b.name.clone(),
        file: b.file.clone(),
        line: b.line,
        message: e.to_string(),
    })
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}
