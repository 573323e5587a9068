//! Compact text syntax for words on the command line, e.g.
//! `t0 a^2 b^-1 t0^-1`. Vertex-group generators are named a, b, c, ...
//! running through the coordinates of each vertex in id order; stable
//! letters are `t` followed by the edge id (a leading `e` in the id may be
//! omitted, so `t0` refers to edge `e0`).

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gog::{GbsGraph, Gen, GroupWord};

/// Generator names in declaration order: one letter per vertex coordinate,
/// then the stable letters.
pub fn generator_names(g: &GbsGraph) -> Vec<(String, Gen)> {
    let mut out = Vec::new();
    let mut next = 0usize;
    for v in &g.vertices {
        for k in 0..g.rank {
            let name = letter_name(next);
            next += 1;
            out.push((
                name,
                Gen::Vertex {
                    vertex: v.clone(),
                    index: k,
                },
            ));
        }
    }
    for e in &g.edges {
        out.push((format!("t{}", e.id), Gen::Stable { edge: e.id.clone() }));
    }
    out
}

fn letter_name(i: usize) -> String {
    // a, b, ..., z, aa, ab, ... (bijective base 26)
    let mut i = i + 1;
    let mut s = Vec::new();
    while i > 0 {
        i -= 1;
        s.push(b'a' + (i % 26) as u8);
        i /= 26;
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}

pub fn parse_word(g: &GbsGraph, text: &str) -> Result<GroupWord> {
    let mut by_name: BTreeMap<String, Gen> = BTreeMap::new();
    for (name, gen) in generator_names(g) {
        by_name.insert(name, gen);
    }
    let mut w = GroupWord::empty();
    for token in text.split_whitespace() {
        let (name, exp) = match token.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad exponent in token {token}")))?,
            ),
            None => (token, 1),
        };
        let gen = by_name
            .get(name)
            .cloned()
            .or_else(|| {
                // allow t0 as shorthand for te0
                name.strip_prefix('t')
                    .map(|rest| format!("te{rest}"))
                    .and_then(|alt| by_name.get(&alt).cloned())
            })
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        if exp == 0 {
            continue;
        }
        match gen {
            Gen::Vertex { vertex, index } => {
                let mut vec = vec![crate::exact::Int::zero(); g.rank];
                vec[index] = crate::exact::Int::from(exp);
                w = w.concat(&GroupWord::v(&vertex, vec));
            }
            Gen::Stable { edge } => {
                w = w.concat(&GroupWord::t(&edge, 1).pow(exp));
            }
        }
    }
    Ok(w)
}

/// Inverse of [`parse_word`] up to free reduction.
pub fn format_word(g: &GbsGraph, w: &GroupWord) -> String {
    let mut names: BTreeMap<(String, usize), String> = BTreeMap::new();
    let mut tnames: BTreeMap<String, String> = BTreeMap::new();
    for (name, gen) in generator_names(g) {
        match gen {
            Gen::Vertex { vertex, index } => {
                names.insert((vertex, index), name);
            }
            Gen::Stable { edge } => {
                tnames.insert(edge, name);
            }
        }
    }
    let mut parts = Vec::new();
    for l in w.letters() {
        match l {
            crate::gog::Letter::V { vertex, vec } => {
                for (k, x) in vec.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let name = &names[&(vertex.clone(), k)];
                    if *x == crate::exact::Int::from(1) {
                        parts.push(name.clone());
                    } else {
                        parts.push(format!("{name}^{x}"));
                    }
                }
            }
            crate::gog::Letter::T { edge, sign } => {
                let name = &tnames[edge];
                if *sign == 1 {
                    parts.push(name.clone());
                } else {
                    parts.push(format!("{name}^-1"));
                }
            }
        }
    }
    parts.join(" ")
}
