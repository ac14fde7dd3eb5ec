//! Text formats for structures, rooted trees, groups and towers.
//!
//! Structures are line-oriented:
//!
//! ```text
//! signature E/2 R/3
//! structure NAME size 4
//! E: (0,1) (1,2)
//! R: (0,1,2)
//! end
//! ```
//!
//! The other formats are whitespace-token streams (line breaks are free):
//!
//! ```text
//! tree NAME size 5 parents - 0 0 1 1 end
//! rational NAME states 2 start 0 children 0 1 / 0 end
//! group NAME order 4 table 0 1 2 3 / 1 2 3 0 / 2 3 0 1 / 3 0 1 2 end
//! tower NAME levels G0 G1 maps 0 1 0 1 end
//! ```
//!
//! A tower's `maps` section lists, for each level above the first, the images
//! of its elements in the level below, separated by `/`. Level names refer to
//! groups defined earlier in the file or to built-in names: `1`, `Z/n`, `Sk`,
//! and products such as `Z/4xZ/2`.
//!
//! `#` starts a comment running to the end of the line.

use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

use homcount::profinite::{FiniteGroup, Tower};
use homcount::trees::{FiniteTree, RationalTreeSpec};
use homcount::{Signature, Structure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn parse_number(line: usize, token: &str, what: &str) -> Result<usize, ParseError> {
    token
        .parse()
        .or_else(|_| err(line, format!("expected {what}, found `{token}`")))
}

/// A named structure read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedStructure {
    pub name: String,
    pub structure: Structure,
}

/// Every structure block in `text`.
pub fn parse_structures(text: &str) -> Result<Vec<NamedStructure>, ParseError> {
    let mut out = Vec::new();
    let mut signature: Option<Arc<Signature>> = None;
    let mut current: Option<(usize, NamedStructure)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let head = words.next().unwrap_or_default();
        if let Some((_, block)) = current.as_mut() {
            if head == "end" {
                if words.next().is_some() {
                    return err(line, "unexpected text after `end`");
                }
                out.push(current.take().expect("open block").1);
                continue;
            }
            let Some((symbol, tuples)) = content.split_once(':') else {
                return err(
                    line,
                    format!("expected `SYMBOL: (..)` or `end`, found `{content}`"),
                );
            };
            let symbol = symbol.trim();
            let sig = block.structure.signature().clone();
            let Some(rel) = sig.index_of(symbol) else {
                return err(line, format!("unknown symbol `{symbol}`"));
            };
            for tuple in parse_tuples(line, tuples)? {
                if tuple.len() != sig.arity(rel) {
                    return err(
                        line,
                        format!(
                            "tuple of length {} for `{symbol}` of arity {}",
                            tuple.len(),
                            sig.arity(rel)
                        ),
                    );
                }
                if let Some(&x) = tuple.iter().find(|&&x| x >= block.structure.size()) {
                    return err(
                        line,
                        format!(
                            "element {x} out of range for size {}",
                            block.structure.size()
                        ),
                    );
                }
                block
                    .structure
                    .insert(rel, &tuple)
                    .or_else(|e| err(line, e.to_string()))?;
            }
            continue;
        }
        match head {
            "signature" => {
                let mut symbols = Vec::new();
                for w in words {
                    let Some((name, arity)) = w.split_once('/') else {
                        return err(line, format!("expected NAME/ARITY, found `{w}`"));
                    };
                    symbols.push((name.to_string(), parse_number(line, arity, "an arity")?));
                }
                signature = Some(Signature::new(symbols).or_else(|e| err(line, e.to_string()))?);
            }
            "structure" => {
                let Some(sig) = &signature else {
                    return err(line, "`structure` before any `signature` line");
                };
                let rest: Vec<&str> = words.collect();
                let [name, "size", n] = rest.as_slice() else {
                    return err(line, "expected `structure NAME size N`");
                };
                let n = parse_number(line, n, "a size")?;
                let structure = Structure::new(sig, n).or_else(|e| err(line, e.to_string()))?;
                current = Some((
                    line,
                    NamedStructure {
                        name: name.to_string(),
                        structure,
                    },
                ));
            }
            _ => {
                return err(
                    line,
                    format!("expected `signature` or `structure`, found `{head}`"),
                )
            }
        }
    }
    if let Some((start, block)) = current {
        return err(start, format!("structure `{}` has no `end`", block.name));
    }
    Ok(out)
}

/// `(0,1) (1, 2)` → `[[0,1],[1,2]]`.
fn parse_tuples(line: usize, text: &str) -> Result<Vec<Vec<usize>>, ParseError> {
    let mut out = Vec::new();
    let mut rest = text.trim_start();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('(') else {
            return err(line, format!("expected `(`, found `{rest}`"));
        };
        let Some(close) = body.find(')') else {
            return err(line, "unclosed `(`");
        };
        let inner = body[..close].trim();
        let tuple = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|t| parse_number(line, t.trim(), "an element"))
                .collect::<Result<_, _>>()?
        };
        out.push(tuple);
        rest = body[close + 1..].trim_start();
    }
    Ok(out)
}

/// The single structure in `text`.
pub fn parse_one_structure(text: &str) -> Result<NamedStructure, ParseError> {
    let mut all = parse_structures(text)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        n => err(1, format!("expected exactly one structure, found {n}")),
    }
}

fn tuple_text(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// The signature line and block for `s`; relations are listed in signature
/// order with tuples in lexicographic order, empty relations omitted.
pub fn write_structure(name: &str, s: &Structure) -> String {
    let mut out = String::new();
    let sig = s.signature();
    if sig.is_empty() {
        out.push_str("signature\n");
    } else {
        let _ = writeln!(out, "signature {sig}");
    }
    let _ = writeln!(out, "structure {name} size {}", s.size());
    for rel in 0..sig.len() {
        let tuples: Vec<String> = s.tuples(rel).map(|t| tuple_text(&t)).collect();
        if !tuples.is_empty() {
            let _ = writeln!(out, "{}: {}", sig.name(rel), tuples.join(" "));
        }
    }
    out.push_str("end\n");
    out
}

/// One-line relation listing for table cells: `E:(0,1)(1,0)`, or `-`.
pub fn compact_relations(s: &Structure) -> String {
    let sig = s.signature();
    let parts: Vec<String> = (0..sig.len())
        .filter(|&r| s.tuple_count(r) > 0)
        .map(|r| {
            let tuples: String = s.tuples(r).map(|t| tuple_text(&t)).collect();
            format!("{}:{tuples}", sig.name(r))
        })
        .collect();
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(";")
    }
}

struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Tokens<'a> {
        let mut items = Vec::new();
        let mut last_line = 1;
        for (i, raw) in text.lines().enumerate() {
            last_line = i + 1;
            items.extend(strip_comment(raw).split_whitespace().map(|w| (i + 1, w)));
        }
        Tokens {
            items,
            pos: 0,
            last_line,
        }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.items.get(self.pos).copied()
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        match self.items.get(self.pos) {
            Some(&t) => {
                self.pos += 1;
                Ok(t)
            }
            None => err(
                self.last_line,
                format!("unexpected end of input, expected {what}"),
            ),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<usize, ParseError> {
        let (line, t) = self.next(&format!("`{word}`"))?;
        if t != word {
            return err(line, format!("expected `{word}`, found `{t}`"));
        }
        Ok(line)
    }

    fn number(&mut self, what: &str) -> Result<(usize, usize), ParseError> {
        let (line, t) = self.next(what)?;
        Ok((line, parse_number(line, t, what)?))
    }

    /// Tokens up to `end`, split into `/`-separated groups.
    fn groups_until_end(&mut self) -> Result<Vec<Vec<(usize, &'a str)>>, ParseError> {
        let mut groups = vec![Vec::new()];
        loop {
            let (line, t) = self.next("`end`")?;
            match t {
                "end" => return Ok(groups),
                "/" => groups.push(Vec::new()),
                _ => groups.last_mut().expect("nonempty").push((line, t)),
            }
        }
    }
}

/// The blocks of a token-format file.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub trees: Vec<(String, FiniteTree)>,
    pub rationals: Vec<(String, RationalTreeSpec)>,
    pub groups: Vec<FiniteGroup>,
    pub towers: Vec<Tower>,
}

impl Document {
    /// A group defined in this document, or a built-in one.
    pub fn group(&self, name: &str) -> Option<FiniteGroup> {
        self.groups
            .iter()
            .rev()
            .find(|g| g.name() == name)
            .cloned()
            .or_else(|| builtin_group(name))
    }
}

/// `1`, `Z/n`, `Sk` (k ≤ 5) and `x`-separated products of these.
pub fn builtin_group(name: &str) -> Option<FiniteGroup> {
    let factor = |f: &str| -> Option<FiniteGroup> {
        if f == "1" {
            return Some(FiniteGroup::trivial());
        }
        if let Some(n) = f.strip_prefix("Z/") {
            let n: usize = n.parse().ok()?;
            return (1..=homcount::profinite::MAX_GROUP_ORDER)
                .contains(&n)
                .then(|| FiniteGroup::cyclic(n));
        }
        let k: usize = f.strip_prefix('S')?.parse().ok()?;
        (1..=5).contains(&k).then(|| FiniteGroup::symmetric(k))
    };
    let mut parts = name.split('x');
    let mut g = factor(parts.next()?)?;
    for p in parts {
        let h = factor(p)?;
        if g.order() * h.order() > homcount::profinite::MAX_GROUP_ORDER {
            return None;
        }
        g = FiniteGroup::product(&g, &h);
    }
    Some(g.with_name(name))
}

pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let mut doc = Document::default();
    let mut tokens = Tokens::new(text);
    while let Some((line, head)) = tokens.peek() {
        tokens.pos += 1;
        let (_, name) = tokens.next("a name")?;
        match head {
            "tree" => {
                tokens.keyword("size")?;
                let (_, n) = tokens.number("a size")?;
                tokens.keyword("parents")?;
                let mut parents = Vec::with_capacity(n);
                for _ in 0..n {
                    let (l, t) = tokens.next("a parent")?;
                    parents.push(if t == "-" {
                        None
                    } else {
                        Some(parse_number(l, t, "a parent or `-`")?)
                    });
                }
                tokens.keyword("end")?;
                let tree = FiniteTree::new(parents).or_else(|e| err(line, e.to_string()))?;
                doc.trees.push((name.to_string(), tree));
            }
            "rational" => {
                tokens.keyword("states")?;
                let (_, states) = tokens.number("a state count")?;
                tokens.keyword("start")?;
                let (_, start) = tokens.number("a start state")?;
                tokens.keyword("children")?;
                let groups = tokens.groups_until_end()?;
                if groups.len() != states {
                    return err(
                        line,
                        format!("{states} states but {} child lists", groups.len()),
                    );
                }
                let children = groups
                    .iter()
                    .map(|g| {
                        g.iter()
                            .map(|&(l, t)| parse_number(l, t, "a state"))
                            .collect()
                    })
                    .collect::<Result<Vec<Vec<usize>>, _>>()?;
                let spec =
                    RationalTreeSpec::new(children, start).or_else(|e| err(line, e.to_string()))?;
                doc.rationals.push((name.to_string(), spec));
            }
            "group" => {
                tokens.keyword("order")?;
                let (_, n) = tokens.number("an order")?;
                tokens.keyword("table")?;
                let rows = tokens.groups_until_end()?;
                if rows.len() != n {
                    return err(line, format!("order {n} but {} table rows", rows.len()));
                }
                let rows = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|&(l, t)| parse_number(l, t, "an element"))
                            .collect()
                    })
                    .collect::<Result<Vec<Vec<usize>>, _>>()?;
                let g = FiniteGroup::new(name, rows).or_else(|e| err(line, e.to_string()))?;
                doc.groups.push(g);
            }
            "tower" => {
                tokens.keyword("levels")?;
                let mut levels = Vec::new();
                loop {
                    let (l, t) = tokens.next("a level name or `maps`")?;
                    if t == "maps" {
                        break;
                    }
                    match doc.group(t) {
                        Some(g) => levels.push(g),
                        None => return err(l, format!("unknown group `{t}`")),
                    }
                }
                let groups = tokens.groups_until_end()?;
                let maps = if levels.len() == 1 && groups.len() == 1 && groups[0].is_empty() {
                    Vec::new()
                } else {
                    groups
                        .iter()
                        .map(|g| {
                            g.iter()
                                .map(|&(l, t)| parse_number(l, t, "an element"))
                                .collect()
                        })
                        .collect::<Result<Vec<Vec<usize>>, _>>()?
                };
                let t = Tower::new(name, levels, maps).or_else(|e| err(line, e.to_string()))?;
                doc.towers.push(t);
            }
            _ => {
                return err(
                    line,
                    format!("expected `tree`, `rational`, `group` or `tower`, found `{head}`"),
                )
            }
        }
    }
    Ok(doc)
}

pub fn write_tree(name: &str, t: &FiniteTree) -> String {
    let parents: Vec<String> = t
        .parents()
        .iter()
        .map(|p| p.map_or("-".to_string(), |x| x.to_string()))
        .collect();
    let mut out = format!("tree {name} size {} parents", t.size());
    for p in parents {
        out.push(' ');
        out.push_str(&p);
    }
    out.push_str(" end\n");
    out
}

pub fn write_group(g: &FiniteGroup) -> String {
    let rows: Vec<String> = g
        .rows()
        .map(|r| {
            r.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    format!(
        "group {} order {} table {} end\n",
        g.name(),
        g.order(),
        rows.join(" / ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use homcount::sigstruct::graphs::cycle;

    #[test]
    fn structure_round_trip() {
        let text = "signature E/2 R/3\nstructure s size 4\nE: (0,1) (1,2)\nR: (0,1,2)\nend\n";
        let s = parse_one_structure(text).unwrap();
        assert_eq!(s.name, "s");
        assert_eq!(write_structure("s", &s.structure), text);
        let c6 = cycle(6);
        let back = parse_one_structure(&write_structure("c6", &c6)).unwrap();
        assert_eq!(back.structure, c6);
    }

    #[test]
    fn structure_errors_carry_lines() {
        let cases = [
            (
                "signature E/2\nstructure s size 2\nE: (0,2)\nend\n",
                3,
                "out of range",
            ),
            (
                "signature E/2\nstructure s size 2\nE: (0,1,1)\nend\n",
                3,
                "arity",
            ),
            (
                "signature E/2\nstructure s size 2\nF: (0,1)\nend\n",
                3,
                "unknown symbol",
            ),
            ("structure s size 2\nend\n", 1, "before any"),
            (
                "signature E/2\n\nstructure s size 2\nE: (0,1)\n",
                3,
                "no `end`",
            ),
            ("signature E/x\n", 1, "arity"),
            (
                "signature E/2\nstructure s size 2\nE: (0,1\nend\n",
                3,
                "unclosed",
            ),
        ];
        for (text, line, needle) in cases {
            let e = parse_structures(text).unwrap_err();
            assert_eq!(e.line, line, "{text}");
            assert!(e.message.contains(needle), "{}", e.message);
        }
    }

    #[test]
    fn comments_and_several_blocks() {
        let text = "# two graphs\nsignature E/2\nstructure a size 1\nend\nstructure b size 2 # pair\nE: (0,1)\nend\n";
        let all = parse_structures(text).unwrap();
        assert_eq!(all.len(), 2);
        assert!(parse_one_structure(text).is_err());
        assert_eq!(compact_relations(&all[1].structure), "E:(0,1)");
        assert_eq!(compact_relations(&all[0].structure), "-");
    }

    #[test]
    fn token_formats() {
        let text = "tree t size 5 parents - 0 0 1 1 end\n\
                    rational r states 2 start 0 children 0 1 / 0 end\n\
                    group V order 4 table 0 1 2 3 / 1 0 3 2 / 2 3 0 1 / 3 2 1 0 end\n\
                    tower T levels Z/2 V\n maps 0 1 0 1 end\n";
        let doc = parse_document(text).unwrap();
        assert_eq!(doc.trees[0].1.size(), 5);
        assert_eq!(
            write_tree("t", &doc.trees[0].1),
            "tree t size 5 parents - 0 0 1 1 end\n"
        );
        assert_eq!(doc.rationals[0].1.states(), 2);
        assert_eq!(doc.groups[0].order(), 4);
        assert_eq!(doc.towers[0].depth(), 1);
        let again = parse_document(&write_group(&doc.groups[0])).unwrap();
        assert_eq!(again.groups[0], doc.groups[0]);
        let single = parse_document("tower one levels Z/3 maps end").unwrap();
        assert_eq!(single.towers[0].depth(), 0);
    }

    #[test]
    fn token_errors_carry_lines() {
        let cases = [
            ("tree t size 2 parents - 5 end", 1, "out of range"),
            ("tree t size 2\nparents - 0", 2, "end of input"),
            ("group G order 2 table 0 1 / 1 1 end", 1, "invalid group"),
            ("tower T levels Q maps end", 1, "unknown group"),
            (
                "tower T levels Z/2 Z/4\nmaps 0 0 0 0 end",
                1,
                "not surjective",
            ),
            (
                "rational r states 2 start 0 children 0 end",
                1,
                "child lists",
            ),
            ("forest f", 1, "expected"),
        ];
        for (text, line, needle) in cases {
            let e = parse_document(text).unwrap_err();
            assert_eq!(e.line, line, "{text}: {e}");
            assert!(e.message.contains(needle), "{}", e.message);
        }
    }

    #[test]
    fn builtin_groups() {
        assert_eq!(builtin_group("Z/4xZ/2").unwrap().order(), 8);
        assert_eq!(builtin_group("S3").unwrap().order(), 6);
        assert_eq!(builtin_group("1").unwrap().order(), 1);
        assert!(builtin_group("Z/0").is_none());
        assert!(builtin_group("Q8").is_none());
    }
}
