//! Plain-text formats.
//!
//! Design file:
//!
//! ```text
//! k t lambda n
//! order v0 v1 … v(n-1)      (omitted for the natural order)
//! a b c                     (one block per line, ascending ids,
//! …                          lines in lexicographic order)
//! ```
//!
//! The writer is canonical: two ordered designs are equal exactly when their
//! files are byte-equal. The reader also accepts blank lines, `#` comments, a
//! natural `order` line and blocks in any order.
//!
//! Structure file (the encoded form of a design):
//!
//! ```text
//! structure k t lambda n
//! order …                   (optional, as above)
//! R a b c                   (one line per block)
//! F ell x1 … xt : y1 … yell (one line per t-set in a function domain)
//! ```
//!
//! Map file: one `a -> b` pair per line.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{
    ClosureStructure, Order, OrderedPartialDesign, OrderedStructure, Params, PartialDesign,
};
use crate::{Error, Result, VertexSet};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
        }
    }
}

impl<'a> Iterator for Lines<'a> {
    type Item = (usize, Vec<&'a str>);

    fn next(&mut self) -> Option<Self::Item> {
        for (i, line) in self.inner.by_ref() {
            let line = line.split('#').next().unwrap_or("");
            let fields: Vec<&str> = line.split_whitespace().collect();
            if !fields.is_empty() {
                return Some((i + 1, fields));
            }
        }
        None
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn numbers(line: usize, fields: &[&str]) -> Result<Vec<usize>> {
    fields
        .iter()
        .map(|f| {
            f.parse::<usize>()
                .map_err(|_| parse_err(line, format!("expected a non-negative integer, got `{f}`")))
        })
        .collect()
}

fn header(line: usize, fields: &[&str]) -> Result<(Params, usize)> {
    let nums = numbers(line, fields)?;
    if nums.len() != 4 {
        return Err(parse_err(line, "header must be `k t lambda n`"));
    }
    let params =
        Params::new(nums[0], nums[1], nums[2]).map_err(|e| parse_err(line, e.to_string()))?;
    Ok((params, nums[3]))
}

fn order_line(line: usize, fields: &[&str], n: usize) -> Result<Order> {
    let seq = numbers(line, fields)?;
    if seq.len() != n {
        return Err(parse_err(
            line,
            format!("order lists {} vertices, expected {n}", seq.len()),
        ));
    }
    Order::from_sequence(seq).map_err(|e| parse_err(line, e.to_string()))
}

fn vertex_block(line: usize, ids: &[usize], n: usize) -> Result<VertexSet> {
    // vertices >= n are kept so validation can report them; only ids that
    // cannot be stored at all are a parse error
    if let Some(&v) = ids.iter().find(|&&v| v >= crate::MAX_VERTICES) {
        return Err(parse_err(
            line,
            Error::VertexOutOfRange { vertex: v, n }.to_string(),
        ));
    }
    Ok(ids.iter().copied().collect())
}

/// Reads a design file. The design is *not* validated; call
/// [`PartialDesign::validate`] on the result.
pub fn parse_design(text: &str) -> Result<OrderedPartialDesign> {
    let mut lines = Lines::new(text);
    let (line, fields) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty design file"))?;
    let (params, n) = header(line, &fields)?;
    let mut order = None;
    let mut blocks = Vec::new();
    for (line, fields) in lines {
        if fields[0] == "order" {
            if order.is_some() || !blocks.is_empty() {
                return Err(parse_err(line, "`order` must directly follow the header"));
            }
            order = Some(order_line(line, &fields[1..], n)?);
            continue;
        }
        let ids = numbers(line, &fields)?;
        blocks.push(vertex_block(line, &ids, n)?);
    }
    let design =
        PartialDesign::unchecked(params, n, blocks).map_err(|e| parse_err(1, e.to_string()))?;
    let order = order.unwrap_or_else(|| Order::natural(n));
    OrderedPartialDesign::new(design, order)
}

fn write_header(out: &mut String, design: &PartialDesign) {
    let p = design.params();
    let _ = write!(out, "{} {} {} {}", p.k(), p.t(), p.lambda(), design.n());
}

fn write_order(out: &mut String, order: &Order) {
    if !order.is_natural() {
        out.push_str("order");
        for v in order.sequence() {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
}

/// Canonical text of an ordered design.
pub fn write_design(design: &OrderedPartialDesign) -> String {
    let mut out = String::new();
    write_header(&mut out, &design.design);
    out.push('\n');
    write_order(&mut out, &design.order);
    for b in design.design.blocks() {
        let _ = writeln!(out, "{b}");
    }
    out
}

/// Text of an encoded structure: relation and function table, both in
/// lexicographic order.
pub fn write_structure(structure: &OrderedStructure) -> String {
    let cs = &structure.structure;
    let mut out = String::from("structure ");
    write_header(&mut out, cs.design());
    out.push('\n');
    write_order(&mut out, &structure.order);
    for b in cs.design().blocks() {
        let _ = writeln!(out, "R {b}");
    }
    for (ts, nb) in cs.table() {
        let _ = writeln!(out, "F {} {ts} : {nb}", nb.len());
    }
    out
}

/// Reads a structure file. The function table is taken as written; use
/// [`decode`](super::decode) to check it against the relation.
pub fn parse_structure(text: &str) -> Result<OrderedStructure> {
    let mut lines = Lines::new(text);
    let (line, fields) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty structure file"))?;
    if fields[0] != "structure" {
        return Err(parse_err(
            line,
            "structure files start with `structure k t lambda n`",
        ));
    }
    let (params, n) = header(line, &fields[1..])?;
    let mut order = None;
    let mut blocks = Vec::new();
    let mut table = BTreeMap::new();
    for (line, fields) in lines {
        match fields[0] {
            "order" => {
                if order.is_some() {
                    return Err(parse_err(line, "duplicate `order` line"));
                }
                order = Some(order_line(line, &fields[1..], n)?);
            }
            "R" => {
                let ids = numbers(line, &fields[1..])?;
                blocks.push(vertex_block(line, &ids, n)?);
            }
            "F" => {
                let colon = fields
                    .iter()
                    .position(|f| *f == ":")
                    .ok_or_else(|| parse_err(line, "function line needs `:`"))?;
                if colon < 2 {
                    return Err(parse_err(
                        line,
                        "function line is `F ell x1 … xt : y1 … yell`",
                    ));
                }
                let ell = numbers(line, &fields[1..2])?[0];
                let args = numbers(line, &fields[2..colon])?;
                let value = numbers(line, &fields[colon + 1..])?;
                if args.len() != params.t() || value.len() != ell {
                    return Err(parse_err(
                        line,
                        format!("expected {} arguments and {ell} values", params.t()),
                    ));
                }
                let key = vertex_block(line, &args, n)?;
                let val = vertex_block(line, &value, n)?;
                if key.len() != args.len() || val.len() != value.len() {
                    return Err(parse_err(line, "repeated vertex in function line"));
                }
                if table.insert(key, val).is_some() {
                    return Err(parse_err(line, "function defined twice on the same t-set"));
                }
            }
            other => return Err(parse_err(line, format!("unknown record `{other}`"))),
        }
    }
    let design =
        PartialDesign::unchecked(params, n, blocks).map_err(|e| parse_err(1, e.to_string()))?;
    let order = order.unwrap_or_else(|| Order::natural(n));
    OrderedStructure::new(ClosureStructure::from_parts(design, table), order)
}

/// Reads `a -> b` lines into a vertex map on `0..domain`. Every domain vertex
/// must be mapped exactly once.
pub fn parse_map(text: &str, domain: usize) -> Result<Vec<usize>> {
    let mut map = vec![usize::MAX; domain];
    for (line, fields) in Lines::new(text) {
        let joined = fields.join(" ");
        let (a, b) = joined
            .split_once("->")
            .ok_or_else(|| parse_err(line, "expected `a -> b`"))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| parse_err(line, format!("bad vertex `{}`", s.trim())))
        };
        let (a, b) = (parse(a)?, parse(b)?);
        if a >= domain {
            return Err(parse_err(line, format!("vertex {a} outside 0..{domain}")));
        }
        if map[a] != usize::MAX {
            return Err(parse_err(line, format!("vertex {a} mapped twice")));
        }
        map[a] = b;
    }
    if let Some(a) = map.iter().position(|&b| b == usize::MAX) {
        return Err(parse_err(0, format!("vertex {a} is not mapped")));
    }
    Ok(map)
}

pub fn write_map(map: &[usize]) -> String {
    let mut out = String::new();
    for (a, b) in map.iter().enumerate() {
        let _ = writeln!(out, "{a} -> {b}");
    }
    out
}
