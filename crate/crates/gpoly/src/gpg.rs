//! The `.gpg` graph file format.
//!
//! ```text
//! graph NAME {
//!   vertex VID [weighted] ;
//!   flag FID at VID [momentum SYM] ;
//!   edge EID VID -> VID ;
//!   order VID : SLOT (, SLOT)* ;   # SLOT = e:EID.a | e:EID.b | f:FID
//! }
//! ```
//!
//! `#` starts a comment. If any `order` line is present the file describes a
//! ribbon graph and the orders must cover every half-edge and flag of their
//! vertices exactly once; the first slot of each order is the vertex's root
//! slot. Without `order` lines the file is a plain graph and ribbon-only
//! operations refuse it.

use std::collections::BTreeMap;

use crate::graph::{Graph, VertexId};
use crate::ribbon::{End, RibbonGraph, Slot};
use crate::{Error, Result};

/// A parsed graph file.
#[derive(Clone, Debug)]
pub struct GraphFile {
    pub name: String,
    pub graph: Graph,
    pub ribbon: Option<RibbonGraph>,
}

impl GraphFile {
    /// The ribbon graph, or an unsupported-operation error for plain files.
    pub fn require_ribbon(&self) -> Result<&RibbonGraph> {
        self.ribbon.as_ref().ok_or_else(|| {
            Error::Unsupported(
                "this operation needs a ribbon graph; the file has no `order` lines".into(),
            )
        })
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Punct(char),
    Arrow,
    Eof,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn advance(&mut self, c: char) {
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c == '#' {
                while let Some(c) = self.src[self.pos..].chars().next() {
                    self.advance(c);
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.advance(c);
            } else {
                break;
            }
        }
    }

    fn next(&mut self) -> Result<Tok> {
        self.skip_trivia();
        let Some(c) = self.src[self.pos..].chars().next() else {
            return Ok(Tok::Eof);
        };
        if c.is_alphanumeric() || c == '_' {
            let start = self.pos;
            while let Some(c) = self.src[self.pos..].chars().next() {
                if c.is_alphanumeric() || c == '_' {
                    self.advance(c);
                } else {
                    break;
                }
            }
            return Ok(Tok::Ident(self.src[start..self.pos].to_string()));
        }
        if c == '-' {
            self.advance(c);
            if self.src[self.pos..].starts_with('>') {
                self.advance('>');
                return Ok(Tok::Arrow);
            }
            return Err(self.err("expected `->`"));
        }
        if "{};:,.".contains(c) {
            self.advance(c);
            return Ok(Tok::Punct(c));
        }
        Err(self.err(format!("unexpected character `{c}`")))
    }

    fn expect_ident(&mut self) -> Result<String> {
        match self.next()? {
            Tok::Ident(s) => Ok(s),
            t => Err(self.err(format!("expected identifier, found {t:?}"))),
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<()> {
        match self.next()? {
            Tok::Punct(p) if p == c => Ok(()),
            t => Err(self.err(format!("expected `{c}`, found {t:?}"))),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        match self.next()? {
            Tok::Ident(s) if s == kw => Ok(()),
            t => Err(self.err(format!("expected `{kw}`, found {t:?}"))),
        }
    }
}

/// Parses `.gpg` text.
pub fn parse_str(src: &str) -> Result<GraphFile> {
    let mut lx = Lexer::new(src);
    lx.expect_keyword("graph")?;
    let name = lx.expect_ident()?;
    lx.expect_punct('{')?;

    let mut graph = Graph::new();
    let mut orders: BTreeMap<VertexId, Vec<Slot>> = BTreeMap::new();
    let to_parse_err = |lx: &Lexer, e: Error| match e {
        Error::Parse { .. } => e,
        other => Error::Parse {
            line: lx.line,
            col: lx.col,
            msg: other.to_string(),
        },
    };

    loop {
        match lx.next()? {
            Tok::Punct('}') => break,
            Tok::Ident(kw) => match kw.as_str() {
                "vertex" => {
                    let id = lx.expect_ident()?;
                    let mut weighted = false;
                    match lx.next()? {
                        Tok::Punct(';') => {}
                        Tok::Ident(w) if w == "weighted" => {
                            weighted = true;
                            lx.expect_punct(';')?;
                        }
                        t => return Err(lx.err(format!("expected `weighted` or `;`, found {t:?}"))),
                    }
                    graph
                        .add_vertex(id, weighted)
                        .map_err(|e| to_parse_err(&lx, e))?;
                }
                "flag" => {
                    let id = lx.expect_ident()?;
                    lx.expect_keyword("at")?;
                    let v = lx.expect_ident()?;
                    let mut momentum = None;
                    match lx.next()? {
                        Tok::Punct(';') => {}
                        Tok::Ident(m) if m == "momentum" => {
                            momentum = Some(lx.expect_ident()?);
                            lx.expect_punct(';')?;
                        }
                        t => {
                            return Err(
                                lx.err(format!("expected `momentum` or `;`, found {t:?}"))
                            )
                        }
                    }
                    graph
                        .add_flag(id, v, momentum)
                        .map_err(|e| to_parse_err(&lx, e))?;
                }
                "edge" => {
                    let id = lx.expect_ident()?;
                    let tail = lx.expect_ident()?;
                    match lx.next()? {
                        Tok::Arrow => {}
                        t => return Err(lx.err(format!("expected `->`, found {t:?}"))),
                    }
                    let head = lx.expect_ident()?;
                    lx.expect_punct(';')?;
                    graph
                        .add_edge(id, tail, head)
                        .map_err(|e| to_parse_err(&lx, e))?;
                }
                "order" => {
                    let v = VertexId::from(lx.expect_ident()?);
                    if orders.contains_key(&v) {
                        return Err(lx.err(format!("duplicate order for vertex `{v}`")));
                    }
                    lx.expect_punct(':')?;
                    let mut slots = Vec::new();
                    loop {
                        let kind = lx.expect_ident()?;
                        lx.expect_punct(':')?;
                        let id = lx.expect_ident()?;
                        let slot = match kind.as_str() {
                            "e" => {
                                lx.expect_punct('.')?;
                                let end = match lx.expect_ident()?.as_str() {
                                    "a" => End::A,
                                    "b" => End::B,
                                    other => {
                                        return Err(
                                            lx.err(format!("expected `a` or `b`, found `{other}`"))
                                        )
                                    }
                                };
                                Slot::Half(id.into(), end)
                            }
                            "f" => Slot::Flag(id.into()),
                            other => {
                                return Err(lx.err(format!(
                                    "slot kind must be `e` or `f`, found `{other}`"
                                )))
                            }
                        };
                        slots.push(slot);
                        match lx.next()? {
                            Tok::Punct(',') => continue,
                            Tok::Punct(';') => break,
                            t => return Err(lx.err(format!("expected `,` or `;`, found {t:?}"))),
                        }
                    }
                    orders.insert(v, slots);
                }
                other => return Err(lx.err(format!("unknown statement `{other}`"))),
            },
            t => return Err(lx.err(format!("expected statement or `}}`, found {t:?}"))),
        }
    }
    match lx.next()? {
        Tok::Eof => {}
        t => return Err(lx.err(format!("trailing input: {t:?}"))),
    }

    let ribbon = if orders.is_empty() {
        None
    } else {
        Some(
            RibbonGraph::new(graph.clone(), orders).map_err(|e| Error::Parse {
                line: lx.line,
                col: lx.col,
                msg: e.to_string(),
            })?,
        )
    };
    Ok(GraphFile { name, graph, ribbon })
}

/// Parses a `.gpg` file from disk.
pub fn parse_file(path: &std::path::Path) -> Result<GraphFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_str(&text)
}

/// Renders a graph back to `.gpg` text (used to ship generated fixtures).
pub fn to_gpg(name: &str, graph: &Graph, ribbon: Option<&RibbonGraph>) -> String {
    let mut out = format!("graph {name} {{\n");
    for v in graph.vertices() {
        if v.weighted {
            out.push_str(&format!("  vertex {} weighted ;\n", v.id));
        } else {
            out.push_str(&format!("  vertex {} ;\n", v.id));
        }
    }
    for f in graph.flags() {
        match &f.momentum {
            Some(m) => out.push_str(&format!("  flag {} at {} momentum {m} ;\n", f.id, f.vertex)),
            None => out.push_str(&format!("  flag {} at {} ;\n", f.id, f.vertex)),
        }
    }
    for e in graph.edges() {
        out.push_str(&format!("  edge {} {} -> {} ;\n", e.id, e.tail, e.head));
    }
    if let Some(r) = ribbon {
        for v in graph.vertices() {
            let slots = r.rotation(&v.id);
            if slots.is_empty() {
                continue;
            }
            let parts: Vec<String> = slots.iter().map(|s| s.to_string()).collect();
            out.push_str(&format!("  order {} : {} ;\n", v.id, parts.join(", ")));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_plain_and_ribbon() {
        let plain = parse_str("graph g { vertex u ; vertex v ; edge e1 u -> v ; }").unwrap();
        assert!(plain.ribbon.is_none());
        assert!(plain.require_ribbon().is_err());
        let rib = parse_str(
            "graph g {\n  vertex u ;\n  vertex v ;\n  edge e1 u -> v ;\n\
             # a comment\n  order u : e:e1.a ;\n  order v : e:e1.b ;\n}",
        )
        .unwrap();
        assert!(rib.ribbon.is_some());
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_str("graph g { vertex u ; vertex u ; }").unwrap_err();
        match e {
            Error::Parse { line, msg, .. } => {
                assert_eq!(line, 1);
                assert!(msg.contains("duplicate"));
            }
            other => panic!("wrong error {other:?}"),
        }
        assert!(parse_str("graph g { edge e1 u -> v ; }").is_err());
        // Incomplete order coverage is a parse error.
        let e = parse_str(
            "graph g { vertex u ; vertex v ; edge e1 u -> v ; order u : e:e1.a ; }",
        )
        .unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
    }

    #[test]
    fn roundtrips_through_writer() {
        let src = "graph g {\n  vertex u weighted ;\n  vertex v ;\n  flag f1 at u momentum p1 ;\n  edge e1 u -> v ;\n  order u : e:e1.a, f:f1 ;\n  order v : e:e1.b ;\n}\n";
        let gf = parse_str(src).unwrap();
        let out = to_gpg(&gf.name, &gf.graph, gf.ribbon.as_ref());
        assert_eq!(out, src);
        let gf2 = parse_str(&out).unwrap();
        assert_eq!(gf2.graph, gf.graph);
    }
}
