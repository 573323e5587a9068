//! Word reduction and element classification for the action on the
//! Bass-Serre tree.
//!
//! Elements are represented as path words: alternating vertex-group
//! elements and oriented edge crossings, projecting a path in the tree to
//! the quotient graph. A crossing with positive sign travels from the
//! `to`-end of the edge to its `from`-end, so that a stable letter `t`
//! (which satisfies `t iota_from(x) t^-1 = iota_to(x)`) contributes a single
//! positive crossing. Britton-style pinch moves eliminate subwords
//! `e, x, e-bar` whenever `x` lies in the edge-image lattice, and the empty
//! reduced word characterizes the identity.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{Int, Lattice, Rat, RatMatrix};
use crate::gog::{GbsGraph, GroupWord, Letter};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathItem {
    Vertex { vertex: String, vec: Vec<Int> },
    Cross { edge: String, sign: i8 },
}

/// Alternating sequence vertex, crossing, vertex, ... (always beginning and
/// ending with a vertex element).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PathWord {
    pub items: Vec<PathItem>,
}

impl PathWord {
    pub fn crossings(&self) -> usize {
        self.items
            .iter()
            .filter(|i| matches!(i, PathItem::Cross { .. }))
            .count()
    }

    /// True when the word is empty or a single zero vertex element.
    pub fn is_trivial(&self) -> bool {
        match self.items.as_slice() {
            [] => true,
            [PathItem::Vertex { vec, .. }] => vec.iter().all(Zero::is_zero),
            _ => false,
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.items
                .iter()
                .map(|i| match i {
                    PathItem::Vertex { vertex, vec } => json!({
                        "v": vertex,
                        "vec": vec.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    }),
                    PathItem::Cross { edge, sign } => json!({ "edge": edge, "sign": sign }),
                })
                .collect(),
        )
    }
}

/// Start vertex of a crossing: positive crossings run `to -> from`.
fn cross_start<'a>(g: &'a GbsGraph, edge: &str, sign: i8) -> Result<&'a str> {
    let e = g.edge(edge)?;
    Ok(if sign > 0 { &e.to } else { &e.from })
}

fn cross_end<'a>(g: &'a GbsGraph, edge: &str, sign: i8) -> Result<&'a str> {
    let e = g.edge(edge)?;
    Ok(if sign > 0 { &e.from } else { &e.to })
}

/// Appends an item, merging adjacent vertex elements and keeping strict
/// alternation by inserting zero vertex elements between crossings.
fn push_raw(g: &GbsGraph, items: &mut Vec<PathItem>, item: PathItem) -> Result<()> {
    match item {
        PathItem::Vertex { vertex, vec } => {
            if let Some(PathItem::Vertex {
                vertex: tv,
                vec: tvec,
            }) = items.last_mut()
            {
                if *tv != vertex {
                    return Err(Error::MalformedPathWord(format!(
                        "vertex elements at {tv} and {vertex} are not separated by a crossing"
                    )));
                }
                for (a, b) in tvec.iter_mut().zip(&vec) {
                    *a += b;
                }
            } else {
                items.push(PathItem::Vertex { vertex, vec });
            }
        }
        PathItem::Cross { edge, sign } => {
            let start = cross_start(g, &edge, sign)?.to_string();
            match items.last() {
                Some(PathItem::Vertex { vertex, .. }) => {
                    if *vertex != start {
                        return Err(Error::MalformedPathWord(format!(
                            "crossing of {edge} starts at {start}, path is at {vertex}"
                        )));
                    }
                }
                _ => {
                    items.push(PathItem::Vertex {
                        vertex: start,
                        vec: vec![Int::zero(); g.rank],
                    });
                }
            }
            items.push(PathItem::Cross { edge, sign });
        }
    }
    Ok(())
}

/// Crossing sequence from `v` up the spanning tree to the base vertex.
fn path_to_base(g: &GbsGraph, v: &str) -> Result<Vec<(String, i8)>> {
    let parents = g.tree_parents();
    let mut out = Vec::new();
    let mut cur = v.to_string();
    while let Some((parent, eid)) = parents.get(&cur) {
        let e = g.edge(eid)?;
        // positive crossings travel to -> from
        let sign = if e.to == cur { 1 } else { -1 };
        out.push((eid.clone(), sign));
        cur = parent.clone();
    }
    Ok(out)
}

/// Expands a group word into a path word: each letter becomes a loop at the
/// base vertex through the spanning tree. The result is unreduced.
pub fn to_path_word(g: &GbsGraph, w: &GroupWord) -> Result<PathWord> {
    g.ensure_valid()?;
    let base = g.base_vertex().to_string();
    let zero = vec![Int::zero(); g.rank];
    let mut items = vec![PathItem::Vertex {
        vertex: base,
        vec: zero.clone(),
    }];
    let walk_down = |items: &mut Vec<PathItem>, v: &str| -> Result<()> {
        for (eid, sign) in path_to_base(g, v)?.into_iter().rev() {
            push_raw(g, items, PathItem::Cross { edge: eid, sign: -sign })?;
        }
        Ok(())
    };
    let walk_up = |items: &mut Vec<PathItem>, g2: &GbsGraph, v: &str| -> Result<()> {
        for (eid, sign) in path_to_base(g2, v)? {
            push_raw(g2, items, PathItem::Cross { edge: eid, sign })?;
        }
        Ok(())
    };
    for l in w.letters() {
        match l {
            Letter::V { vertex, vec } => {
                if !g.has_vertex(vertex) {
                    return Err(Error::UnknownSymbol(format!("vertex {vertex}")));
                }
                walk_down(&mut items, vertex)?;
                push_raw(
                    g,
                    &mut items,
                    PathItem::Vertex {
                        vertex: vertex.clone(),
                        vec: vec.clone(),
                    },
                )?;
                walk_up(&mut items, g, vertex)?;
            }
            Letter::T { edge, sign } => {
                let e = g.edge(edge)?;
                let (start, end) = if *sign > 0 {
                    (e.to.clone(), e.from.clone())
                } else {
                    (e.from.clone(), e.to.clone())
                };
                walk_down(&mut items, &start)?;
                push_raw(
                    g,
                    &mut items,
                    PathItem::Cross {
                        edge: edge.clone(),
                        sign: *sign,
                    },
                )?;
                push_raw(
                    g,
                    &mut items,
                    PathItem::Vertex {
                        vertex: end.clone(),
                        vec: vec![Int::zero(); g.rank],
                    },
                )?;
                walk_up(&mut items, g, &end)?;
            }
        }
    }
    Ok(PathWord { items })
}

/// Exact preimage `iota^-1(x)` when `x` lies in the edge image, else `None`.
fn solve_in_image(iota: &crate::exact::IntMatrix, x: &[Int]) -> Option<Vec<Int>> {
    let rats: Vec<Rat> = x.iter().map(|v| Rat::from(v.clone())).collect();
    let y = iota.to_rat().inverse().ok()?.mul_vec(&rats);
    if y.iter().all(Rat::is_integer) {
        Some(y.iter().map(Rat::to_integer).collect())
    } else {
        None
    }
}

/// Britton reduction: removes every pinch `e, x, e-bar` with `x` in the
/// image lattice of the side the path is on, carrying `x` through the edge
/// group to the other side, until no pinch remains. A trivial result (empty
/// or a zero vertex element) certifies the identity.
pub fn britton_reduce(g: &GbsGraph, p: &PathWord) -> Result<PathWord> {
    let mut stack: Vec<PathItem> = Vec::new();
    for item in &p.items {
        match item {
            PathItem::Vertex { vertex, vec } => push_raw(
                g,
                &mut stack,
                PathItem::Vertex {
                    vertex: vertex.clone(),
                    vec: vec.clone(),
                },
            )?,
            PathItem::Cross { edge, sign } => {
                let mut pinched = false;
                if stack.len() >= 2 {
                    if let (
                        PathItem::Cross {
                            edge: pe,
                            sign: ps,
                        },
                        PathItem::Vertex { vec: x, .. },
                    ) = (&stack[stack.len() - 2], &stack[stack.len() - 1])
                    {
                        if pe == edge && *ps == -sign {
                            let e = g.edge(edge)?;
                            // previous crossing landed on the from-side when
                            // its sign was positive
                            let (side_in, side_out, out_vertex) = if *ps > 0 {
                                (&e.iota_from, &e.iota_to, e.to.clone())
                            } else {
                                (&e.iota_to, &e.iota_from, e.from.clone())
                            };
                            if let Some(y) = solve_in_image(side_in, x) {
                                let carried = side_out.mul_vec(&y);
                                stack.pop();
                                stack.pop();
                                push_raw(
                                    g,
                                    &mut stack,
                                    PathItem::Vertex {
                                        vertex: out_vertex,
                                        vec: carried,
                                    },
                                )?;
                                pinched = true;
                            }
                        }
                    }
                }
                if !pinched {
                    push_raw(
                        g,
                        &mut stack,
                        PathItem::Cross {
                            edge: edge.clone(),
                            sign: *sign,
                        },
                    )?;
                }
            }
        }
    }
    // canonical identity: single zero vertex element becomes the empty word
    if let [PathItem::Vertex { vec, .. }] = stack.as_slice() {
        if vec.iter().all(Zero::is_zero) {
            stack.clear();
        }
    }
    Ok(PathWord { items: stack })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeActionKind {
    Elliptic,
    Hyperbolic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeClassification {
    pub kind: TreeActionKind,
    pub translation_length: usize,
}

impl TreeClassification {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": match self.kind {
                TreeActionKind::Elliptic => "elliptic",
                TreeActionKind::Hyperbolic => "hyperbolic",
            },
            "translation_length": self.translation_length,
        })
    }
}

/// Cyclic reduction: while the reduced loop begins and ends with opposite
/// crossings of the same edge, conjugate the leading segment to the end and
/// re-reduce; stop when the crossing count no longer drops.
pub fn classify_tree_action(g: &GbsGraph, w: &GroupWord) -> Result<TreeClassification> {
    let mut p = britton_reduce(g, &to_path_word(g, w)?)?;
    loop {
        let count = p.crossings();
        if count == 0 {
            return Ok(TreeClassification {
                kind: TreeActionKind::Elliptic,
                translation_length: 0,
            });
        }
        let first = p
            .items
            .iter()
            .find_map(|i| match i {
                PathItem::Cross { edge, sign } => Some((edge.clone(), *sign)),
                _ => None,
            })
            .unwrap();
        let last = p
            .items
            .iter()
            .rev()
            .find_map(|i| match i {
                PathItem::Cross { edge, sign } => Some((edge.clone(), *sign)),
                _ => None,
            })
            .unwrap();
        if count < 2 || first.0 != last.0 || first.1 != -last.1 {
            break;
        }
        // rotate: move the leading vertex element and first crossing to the
        // end, closing the loop at the next vertex
        let mut items: Vec<PathItem> = Vec::new();
        for it in p.items.iter().skip(2) {
            push_raw(g, &mut items, it.clone())?;
        }
        push_raw(g, &mut items, p.items[0].clone())?;
        push_raw(g, &mut items, p.items[1].clone())?;
        let end = cross_end(g, &first.0, first.1)?.to_string();
        push_raw(
            g,
            &mut items,
            PathItem::Vertex {
                vertex: end,
                vec: vec![Int::zero(); g.rank],
            },
        )?;
        let rotated = britton_reduce(g, &PathWord { items })?;
        if rotated.crossings() < count {
            p = rotated;
        } else {
            break;
        }
    }
    Ok(TreeClassification {
        kind: TreeActionKind::Hyperbolic,
        translation_length: p.crossings(),
    })
}

/// Sublattice of the base vertex group fixing every vertex on the geodesic
/// from the base to `w . base`: walk the reduced path word, pulling the
/// crossing-image condition back through the accumulated rational transport
/// and intersecting. Commensurability of vertex stabilizers keeps the
/// result of full rank.
pub fn path_stabilizer(g: &GbsGraph, w: &GroupWord) -> Result<Lattice> {
    let n = g.rank;
    let p = britton_reduce(g, &to_path_word(g, w)?)?;
    let mut phi = RatMatrix::identity(n);
    let mut lat = Lattice::full(n);
    for item in &p.items {
        if let PathItem::Cross { edge, sign } = item {
            let e = g.edge(edge)?;
            // entering from the to-side when the sign is positive
            let (cond, step) = if *sign > 0 {
                (
                    Lattice::from_generators(&e.iota_to),
                    e.iota_from.to_rat().mul(&e.iota_to.to_rat().inverse()?),
                )
            } else {
                (
                    Lattice::from_generators(&e.iota_from),
                    e.iota_to.to_rat().mul(&e.iota_from.to_rat().inverse()?),
                )
            };
            lat = lat.intersect(&cond.preimage(&phi));
            phi = step.mul(&phi);
        }
    }
    Ok(lat)
}

pub struct AcylindricityWitnesses {
    /// `t^K` for a hyperbolic stable letter, moving the base vertex at
    /// least `R` apart.
    pub g_k: GroupWord,
    pub distance: usize,
    /// Distinct elements fixing both the base vertex and `g_k . base`.
    pub elements: Vec<GroupWord>,
    pub verified: bool,
}

impl AcylindricityWitnesses {
    pub fn to_json(&self) -> Value {
        json!({
            "gK": self.g_k.to_json(),
            "distance": self.distance,
            "elements": self.elements.iter().map(GroupWord::to_json).collect::<Vec<_>>(),
            "verified": self.verified,
        })
    }
}

/// Produces, for any separation `R` and count `N`, `N` distinct elements
/// each moving two points at tree distance at least `R` by zero — so the
/// tree action is never acylindrical. The two points are the base vertex
/// and its image under a power of a hyperbolic stable letter; the elements
/// are multiples of a basis vector of the path stabilizer, certified by
/// Britton reduction.
pub fn acylindricity_witnesses(
    g: &GbsGraph,
    r: usize,
    n_elements: usize,
) -> Result<AcylindricityWitnesses> {
    g.ensure_valid()?;
    assert!(r >= 1);
    let mut hyperbolic: Option<(GroupWord, usize)> = None;
    for e in g.non_tree_edges() {
        let t = GroupWord::t(&e.id, 1);
        let c = classify_tree_action(g, &t)?;
        if c.kind == TreeActionKind::Hyperbolic {
            hyperbolic = Some((t, c.translation_length));
            break;
        }
    }
    let Some((t, len)) = hyperbolic else {
        return Err(Error::NoHyperbolicElement);
    };
    let k = r.div_ceil(len);
    let g_k = t.pow(k as i64);
    let distance = k * len;
    let stab = path_stabilizer(g, &g_k)?;
    let b0 = stab.basis().col(0);
    let base = g.base_vertex().to_string();
    let mut elements = Vec::new();
    let mut verified = true;
    for j in 1..=n_elements {
        let vec: Vec<Int> = b0.iter().map(|x| x * Int::from(j)).collect();
        let z = GroupWord::v(&base, vec);
        // certificate: z fixes the base vertex and g_k . base
        let fixes_base = britton_reduce(g, &to_path_word(g, &z)?)?.crossings() == 0;
        let conj = g_k.inverse().concat(&z).concat(&g_k);
        let fixes_far = britton_reduce(g, &to_path_word(g, &conj)?)?.crossings() == 0;
        verified &= fixes_base && fixes_far;
        elements.push(z);
    }
    Ok(AcylindricityWitnesses {
        g_k,
        distance,
        elements,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::gog::{bs, leary_minasyan, presentation, zn_cross_fr, Edge, GbsGraph};
    use crate::exact::IntMatrix;

    fn reduce_word(g: &GbsGraph, w: &GroupWord) -> PathWord {
        britton_reduce(g, &to_path_word(g, w).unwrap()).unwrap()
    }

    #[test]
    fn relators_reduce_to_empty() {
        let two_vertex = GbsGraph::new(
            1,
            vec!["v0".into(), "v1".into()],
            vec![
                Edge {
                    id: "e0".into(),
                    from: "v0".into(),
                    to: "v1".into(),
                    iota_from: IntMatrix::from_rows(&[&[2]]),
                    iota_to: IntMatrix::from_rows(&[&[3]]),
                },
                Edge {
                    id: "e1".into(),
                    from: "v1".into(),
                    to: "v0".into(),
                    iota_from: IntMatrix::from_rows(&[&[5]]),
                    iota_to: IntMatrix::from_rows(&[&[4]]),
                },
            ],
        );
        for g in [
            leary_minasyan(),
            bs(2, 3).unwrap(),
            zn_cross_fr(2, 2).unwrap(),
            two_vertex,
        ] {
            for rel in presentation(&g).unwrap().relators {
                assert!(reduce_word(&g, &rel).is_trivial(), "relator survived in {g:?}");
                let conj = GroupWord::t(&g.edges[0].id, 1)
                    .concat(&rel)
                    .concat(&GroupWord::t(&g.edges[0].id, -1));
                if g.non_tree_edges().iter().any(|e| e.id == g.edges[0].id) {
                    assert!(reduce_word(&g, &conj).is_trivial());
                }
            }
        }
    }

    #[test]
    fn bs_defining_relator_and_blocked_pinch() {
        let g = bs(1, 2).unwrap();
        let w = GroupWord::t("e0", 1)
            .concat(&GroupWord::v("v0", vec![int(1)]))
            .concat(&GroupWord::t("e0", -1))
            .concat(&GroupWord::v("v0", vec![int(-2)]));
        assert!(reduce_word(&g, &w).is_trivial());

        let g = bs(2, 3).unwrap();
        let w = GroupWord::t("e0", 1)
            .concat(&GroupWord::v("v0", vec![int(1)]))
            .concat(&GroupWord::t("e0", -1));
        let p = reduce_word(&g, &w);
        assert_eq!(p.crossings(), 2);
    }

    #[test]
    fn classification_of_simple_words() {
        let lm = leary_minasyan();
        let a = GroupWord::v("v0", vec![int(1), int(0)]);
        assert_eq!(
            classify_tree_action(&lm, &a).unwrap().kind,
            TreeActionKind::Elliptic
        );
        let t = GroupWord::t("e0", 1);
        let c = classify_tree_action(&lm, &t).unwrap();
        assert_eq!(c.kind, TreeActionKind::Hyperbolic);
        assert_eq!(c.translation_length, 1);

        let g = bs(1, 2).unwrap();
        let w = GroupWord::t("e0", 1)
            .concat(&GroupWord::v("v0", vec![int(1)]))
            .concat(&GroupWord::t("e0", -1));
        assert_eq!(
            classify_tree_action(&g, &w).unwrap().kind,
            TreeActionKind::Elliptic
        );
    }

    #[test]
    fn translation_length_is_conjugacy_invariant() {
        let g = bs(2, 3).unwrap();
        let w = GroupWord::t("e0", 1).concat(&GroupWord::v("v0", vec![int(1)]));
        let base_len = classify_tree_action(&g, &w).unwrap().translation_length;
        for u in [
            GroupWord::t("e0", 1),
            GroupWord::v("v0", vec![int(5)]),
            GroupWord::t("e0", -1).concat(&GroupWord::v("v0", vec![int(2)])),
        ] {
            let conj = u.concat(&w).concat(&u.inverse());
            assert_eq!(
                classify_tree_action(&g, &conj).unwrap().translation_length,
                base_len
            );
        }
    }

    #[test]
    fn stabilizer_of_stable_letter_powers() {
        let g = bs(1, 2).unwrap();
        for (k, idx) in [(1i64, 2i64), (2, 4), (3, 8)] {
            let lat = path_stabilizer(&g, &GroupWord::t("e0", 1).pow(k)).unwrap();
            assert_eq!(lat.index().unwrap(), Int::from(idx));
        }
        assert_eq!(
            path_stabilizer(&g, &GroupWord::empty()).unwrap(),
            Lattice::full(1)
        );
    }

    #[test]
    fn stabilizer_monotone_under_longer_paths() {
        let g = leary_minasyan();
        let mut prev = Lattice::full(2);
        for k in 1..=3 {
            let lat = path_stabilizer(&g, &GroupWord::t("e0", 1).pow(k)).unwrap();
            assert_eq!(lat.rank(), 2);
            assert!(prev.contains_lattice(&lat));
            prev = lat;
        }
    }

    #[test]
    fn acylindricity_witnesses_bs12() {
        let g = bs(1, 2).unwrap();
        let w = acylindricity_witnesses(&g, 3, 5).unwrap();
        assert!(w.distance >= 3);
        assert!(w.verified);
        assert_eq!(w.elements.len(), 5);
        match &w.elements[0].letters()[0] {
            Letter::V { vec, .. } => assert_eq!(vec, &vec![int(8)]),
            _ => panic!("expected vertex element"),
        }
    }

    #[test]
    fn no_hyperbolic_element_in_a_tree() {
        let g = GbsGraph::new(
            1,
            vec!["v0".into(), "v1".into()],
            vec![Edge {
                id: "e0".into(),
                from: "v0".into(),
                to: "v1".into(),
                iota_from: IntMatrix::from_rows(&[&[2]]),
                iota_to: IntMatrix::from_rows(&[&[2]]),
            }],
        );
        assert!(matches!(
            acylindricity_witnesses(&g, 1, 1),
            Err(Error::NoHyperbolicElement)
        ));
    }

    #[test]
    fn elliptic_words_have_identity_modular_image() {
        let g = bs(2, 4).unwrap();
        let words = [
            GroupWord::v("v0", vec![int(7)]),
            GroupWord::t("e0", 1)
                .concat(&GroupWord::v("v0", vec![int(2)]))
                .concat(&GroupWord::t("e0", -1)),
        ];
        for w in words {
            if classify_tree_action(&g, &w).unwrap().kind == TreeActionKind::Elliptic {
                assert!(crate::modular::modular_image(&g, &w).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn double_reduction_is_stable() {
        let g = leary_minasyan();
        let w = GroupWord::t("e0", 1)
            .concat(&GroupWord::v("v0", vec![int(2), int(-1)]))
            .concat(&GroupWord::t("e0", -1))
            .concat(&GroupWord::v("v0", vec![int(3), int(3)]))
            .concat(&GroupWord::t("e0", 1));
        let p1 = reduce_word(&g, &w);
        let p2 = britton_reduce(&g, &p1).unwrap();
        assert_eq!(p1, p2);
    }
}
