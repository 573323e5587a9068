//! The graph-of-groups data model for `GBS_n` groups.
//!
//! A [`GbsGraph`] is the single source of truth for a group: a finite
//! connected graph whose vertices all carry `Z^n` and whose edges carry two
//! injective `n x n` integer matrices, column `k` being the image in the
//! incident vertex group of the `k`-th edge-group basis vector. The stable
//! letter of a non-tree edge conjugates the from-side inclusion to the
//! to-side inclusion: `t iota_from(x) t^-1 = iota_to(x)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{Int, IntMatrix, Lattice, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub from: String,
    pub to: String,
    pub iota_from: IntMatrix,
    pub iota_to: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GbsGraph {
    pub rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

/// A failed validation rule, pointing at the offending vertex or edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub location: String,
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.rule)
    }
}

impl GbsGraph {
    pub fn new(rank: usize, vertices: Vec<String>, edges: Vec<Edge>) -> GbsGraph {
        let mut vertices = vertices;
        vertices.sort();
        let mut edges = edges;
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        GbsGraph {
            rank,
            vertices,
            edges,
        }
    }

    /// Lexicographically smallest vertex id; the base for every derived
    /// computation.
    pub fn base_vertex(&self) -> &str {
        &self.vertices[0]
    }

    pub fn edge(&self, id: &str) -> Result<&Edge> {
        self.edges
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnknownSymbol(format!("edge {id}")))
    }

    pub fn has_vertex(&self, id: &str) -> bool {
        self.vertices.iter().any(|v| v == id)
    }

    /// Checks every structural invariant; an empty list means the graph is a
    /// valid `GBS_n` presentation graph. Violations are data, not failures.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.rank == 0 {
            out.push(Violation {
                location: "graph".into(),
                rule: "rank must be at least 1".into(),
            });
        }
        if self.vertices.is_empty() {
            out.push(Violation {
                location: "graph".into(),
                rule: "at least one vertex required".into(),
            });
            return out;
        }
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v) {
                out.push(Violation {
                    location: format!("vertex {v}"),
                    rule: "duplicate vertex id".into(),
                });
            }
        }
        let mut eseen = BTreeSet::new();
        for e in &self.edges {
            if !eseen.insert(&e.id) {
                out.push(Violation {
                    location: format!("edge {}", e.id),
                    rule: "duplicate edge id".into(),
                });
            }
            for end in [&e.from, &e.to] {
                if !self.has_vertex(end) {
                    out.push(Violation {
                        location: format!("edge {}", e.id),
                        rule: format!("endpoint {end} is not a vertex"),
                    });
                }
            }
            for (name, m) in [("iota_from", &e.iota_from), ("iota_to", &e.iota_to)] {
                if m.rows() != self.rank || m.cols() != self.rank {
                    out.push(Violation {
                        location: format!("edge {}", e.id),
                        rule: format!("{name} must be {0}x{0}", self.rank),
                    });
                } else if m.det().is_zero() {
                    out.push(Violation {
                        location: format!("edge {}", e.id),
                        rule: format!("{name} is singular (edge inclusion not injective)"),
                    });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        // connectivity
        let mut reached: BTreeSet<&str> = BTreeSet::new();
        let mut queue = VecDeque::new();
        reached.insert(self.base_vertex());
        queue.push_back(self.base_vertex().to_string());
        while let Some(v) = queue.pop_front() {
            for e in &self.edges {
                for (a, b) in [(&e.from, &e.to), (&e.to, &e.from)] {
                    if a == &v && !reached.contains(b.as_str()) {
                        reached.insert(self.vertices.iter().find(|x| *x == b).unwrap());
                        queue.push_back(b.clone());
                    }
                }
            }
        }
        for v in &self.vertices {
            if !reached.contains(v.as_str()) {
                out.push(Violation {
                    location: format!("vertex {v}"),
                    rule: "not connected to the base vertex".into(),
                });
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidGraph(
                violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            ))
        }
    }

    /// Deterministic spanning tree: breadth-first from the lexicographically
    /// smallest vertex, edges considered in id order. Returns the tree edge
    /// ids.
    pub fn spanning_tree(&self) -> BTreeSet<String> {
        let mut tree = BTreeSet::new();
        let mut reached: BTreeSet<String> = BTreeSet::new();
        reached.insert(self.base_vertex().to_string());
        let mut queue = VecDeque::new();
        queue.push_back(self.base_vertex().to_string());
        while let Some(v) = queue.pop_front() {
            for e in &self.edges {
                let other = if e.from == v {
                    &e.to
                } else if e.to == v {
                    &e.from
                } else {
                    continue;
                };
                if !reached.contains(other) {
                    reached.insert(other.clone());
                    tree.insert(e.id.clone());
                    queue.push_back(other.clone());
                }
            }
        }
        tree
    }

    /// Non-tree edges in id order; each contributes one stable letter.
    pub fn non_tree_edges(&self) -> Vec<&Edge> {
        let tree = self.spanning_tree();
        self.edges.iter().filter(|e| !tree.contains(&e.id)).collect()
    }

    /// Parent map of the spanning tree: vertex -> (parent vertex, edge id),
    /// absent for the base.
    pub fn tree_parents(&self) -> BTreeMap<String, (String, String)> {
        let tree = self.spanning_tree();
        let mut parents = BTreeMap::new();
        let mut reached: BTreeSet<String> = BTreeSet::new();
        reached.insert(self.base_vertex().to_string());
        let mut queue = VecDeque::new();
        queue.push_back(self.base_vertex().to_string());
        while let Some(v) = queue.pop_front() {
            for e in &self.edges {
                if !tree.contains(&e.id) {
                    continue;
                }
                let other = if e.from == v {
                    &e.to
                } else if e.to == v {
                    &e.from
                } else {
                    continue;
                };
                if !reached.contains(other) {
                    reached.insert(other.clone());
                    parents.insert(other.clone(), (v.clone(), e.id.clone()));
                    queue.push_back(other.clone());
                }
            }
        }
        parents
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "vertices": self.vertices,
            "edges": self.edges.iter().map(|e| json!({
                "id": e.id,
                "from": e.from,
                "to": e.to,
                "iota_from": int_matrix_to_json(&e.iota_from),
                "iota_to": int_matrix_to_json(&e.iota_to),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<GbsGraph> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("graph must be a JSON object".into()))?;
        let rank = obj
            .get("rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing or invalid \"rank\"".into()))?
            as usize;
        let vertices: Vec<String> = obj
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"vertices\" array".into()))?
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Parse("vertex ids must be strings".into()))
            })
            .collect::<Result<_>>()?;
        let mut edges = Vec::new();
        for e in obj
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"edges\" array".into()))?
        {
            let get = |k: &str| {
                e.get(k)
                    .ok_or_else(|| Error::Parse(format!("edge missing \"{k}\"")))
            };
            edges.push(Edge {
                id: get("id")?
                    .as_str()
                    .ok_or_else(|| Error::Parse("edge id must be a string".into()))?
                    .to_string(),
                from: get("from")?
                    .as_str()
                    .ok_or_else(|| Error::Parse("edge from must be a string".into()))?
                    .to_string(),
                to: get("to")?
                    .as_str()
                    .ok_or_else(|| Error::Parse("edge to must be a string".into()))?
                    .to_string(),
                iota_from: int_matrix_from_json(get("iota_from")?)?,
                iota_to: int_matrix_from_json(get("iota_to")?)?,
            });
        }
        Ok(GbsGraph::new(rank, vertices, edges))
    }
}

pub fn int_matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| {
                            serde_json::Number::from_string_unchecked(m[(i, j)].to_string())
                                .into()
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn int_matrix_from_json(v: &Value) -> Result<IntMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    let nrows = rows.len();
    let ncols = rows
        .first()
        .and_then(|r| r.as_array())
        .map(|r| r.len())
        .unwrap_or(0);
    if nrows == 0 {
        return Err(Error::Parse("matrix must have at least one row".into()));
    }
    let mut m = IntMatrix::zero(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
        if row.len() != ncols {
            return Err(Error::Parse("ragged matrix rows".into()));
        }
        for (j, cell) in row.iter().enumerate() {
            m[(i, j)] = match cell {
                Value::Number(n) => n
                    .to_string()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer entry {n}")))?,
                Value::String(s) => s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer entry {s:?}")))?,
                other => return Err(Error::Parse(format!("bad matrix entry {other}"))),
            };
        }
    }
    Ok(m)
}

pub fn rat_matrix_to_json(m: &RatMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| Value::String(crate::exact::rat_to_string(&m[(i, j)])))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn rat_matrix_from_json(v: &Value) -> Result<RatMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    if rows.is_empty() {
        return Err(Error::Parse("matrix must have at least one row".into()));
    }
    let ncols = rows[0].as_array().map(|r| r.len()).unwrap_or(0);
    let mut m = RatMatrix::zero(rows.len(), ncols);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
        for (j, cell) in row.iter().enumerate() {
            m[(i, j)] = match cell {
                Value::Number(n) => crate::exact::rat_from_str(&n.to_string())?,
                Value::String(s) => crate::exact::rat_from_str(s)?,
                other => return Err(Error::Parse(format!("bad matrix entry {other}"))),
            };
        }
    }
    Ok(m)
}

/// One letter of a group word: either a vertex-group element (a vector in
/// that vertex's `Z^n`) or a stable letter of a non-tree edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    V { vertex: String, vec: Vec<Int> },
    T { edge: String, sign: i8 },
}

/// A freely reduced word: adjacent same-vertex `V` letters are merged by
/// vector addition (vertex groups are abelian), zero vectors are dropped,
/// and adjacent inverse `T` pairs cancel.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn empty() -> GroupWord {
        GroupWord::default()
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> GroupWord {
        let mut w = GroupWord::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn v(vertex: &str, vec: Vec<Int>) -> GroupWord {
        GroupWord::from_letters([Letter::V {
            vertex: vertex.into(),
            vec,
        }])
    }

    pub fn t(edge: &str, sign: i8) -> GroupWord {
        GroupWord::from_letters([Letter::T {
            edge: edge.into(),
            sign,
        }])
    }

    pub fn push(&mut self, letter: Letter) {
        match (&letter, self.letters.last()) {
            (
                Letter::V { vertex, vec },
                Some(Letter::V {
                    vertex: tv,
                    vec: tvec,
                }),
            ) if vertex == tv => {
                let sum: Vec<Int> = tvec.iter().zip(vec).map(|(a, b)| a + b).collect();
                self.letters.pop();
                if !sum.iter().all(Zero::is_zero) {
                    self.letters.push(Letter::V {
                        vertex: vertex.clone(),
                        vec: sum,
                    });
                }
            }
            (
                Letter::T { edge, sign },
                Some(Letter::T {
                    edge: te,
                    sign: ts,
                }),
            ) if edge == te && sign + ts == 0 => {
                self.letters.pop();
            }
            (Letter::V { vec, .. }, _) if vec.iter().all(Zero::is_zero) => {}
            _ => self.letters.push(letter),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut w = self.clone();
        for l in &other.letters {
            w.push(l.clone());
        }
        w
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord::from_letters(self.letters.iter().rev().map(|l| match l {
            Letter::V { vertex, vec } => Letter::V {
                vertex: vertex.clone(),
                vec: vec.iter().map(|x| -x.clone()).collect(),
            },
            Letter::T { edge, sign } => Letter::T {
                edge: edge.clone(),
                sign: -sign,
            },
        }))
    }

    pub fn pow(&self, k: i64) -> GroupWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = GroupWord::empty();
        for _ in 0..k.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.letters
                .iter()
                .map(|l| match l {
                    Letter::V { vertex, vec } => json!({
                        "v": vertex,
                        "vec": vec.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    }),
                    Letter::T { edge, sign } => json!({ "t": edge, "sign": sign }),
                })
                .collect(),
        )
    }
}

/// A generator of the presentation derived from a graph of groups.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    /// `index`-th basis generator of the vertex group at `vertex`.
    Vertex { vertex: String, index: usize },
    /// Stable letter of a non-tree edge.
    Stable { edge: String },
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Vertex { vertex, index } => write!(f, "a[{vertex},{index}]"),
            Gen::Stable { edge } => write!(f, "t[{edge}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<Gen>,
    pub relators: Vec<GroupWord>,
}

/// Finite presentation read off the graph of groups. Commutation of
/// same-vertex generators is built into the `GroupWord` letter encoding, so
/// the listed relators are exactly the edge relators: for a tree edge the
/// two inclusions of each edge basis vector are identified, and each
/// non-tree edge contributes `t iota_from(e_k) t^-1 iota_to(e_k)^-1`.
pub fn presentation(g: &GbsGraph) -> Result<Presentation> {
    g.ensure_valid()?;
    let n = g.rank;
    let tree = g.spanning_tree();
    let mut generators = Vec::new();
    for v in &g.vertices {
        for k in 0..n {
            generators.push(Gen::Vertex {
                vertex: v.clone(),
                index: k,
            });
        }
    }
    for e in g.non_tree_edges() {
        generators.push(Gen::Stable { edge: e.id.clone() });
    }

    let mut relators = Vec::new();
    for e in &g.edges {
        for k in 0..n {
            let from_img = e.iota_from.col(k);
            let to_img: Vec<Int> = e.iota_to.col(k).iter().map(|x| -x.clone()).collect();
            let mut w = GroupWord::empty();
            if tree.contains(&e.id) {
                w.push(Letter::V {
                    vertex: e.from.clone(),
                    vec: from_img,
                });
                w.push(Letter::V {
                    vertex: e.to.clone(),
                    vec: to_img,
                });
            } else {
                w.push(Letter::T {
                    edge: e.id.clone(),
                    sign: 1,
                });
                w.push(Letter::V {
                    vertex: e.from.clone(),
                    vec: from_img,
                });
                w.push(Letter::T {
                    edge: e.id.clone(),
                    sign: -1,
                });
                w.push(Letter::V {
                    vertex: e.to.clone(),
                    vec: to_img,
                });
            }
            relators.push(w);
        }
    }
    Ok(Presentation {
        generators,
        relators,
    })
}

// ---------------------------------------------------------------------------
// Catalog of named examples.

/// The classical Baumslag-Solitar group `BS(m, n) = <a, t | t a^m t^-1 = a^n>`.
pub fn bs(m: i64, n: i64) -> Result<GbsGraph> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidFamilyParameter(
            "bs(m, n) requires nonzero m and n".into(),
        ));
    }
    Ok(GbsGraph::new(
        1,
        vec!["v0".into()],
        vec![Edge {
            id: "e0".into(),
            from: "v0".into(),
            to: "v0".into(),
            iota_from: IntMatrix::from_rows(&[&[m]]),
            iota_to: IntMatrix::from_rows(&[&[n]]),
        }],
    ))
}

/// `bs(1, -1)`: the Klein bottle group `<a, t | t a t^-1 = a^-1>`.
pub fn klein_bottle() -> GbsGraph {
    bs(1, -1).unwrap()
}

/// `Z^n x F_r`: one vertex, `r` loops with identity inclusions.
pub fn zn_cross_fr(n: usize, r: usize) -> Result<GbsGraph> {
    if n == 0 {
        return Err(Error::InvalidFamilyParameter("rank must be >= 1".into()));
    }
    let edges = (0..r)
        .map(|i| Edge {
            id: format!("e{i}"),
            from: "v0".into(),
            to: "v0".into(),
            iota_from: IntMatrix::identity(n),
            iota_to: IntMatrix::identity(n),
        })
        .collect();
    Ok(GbsGraph::new(n, vec!["v0".into()], edges))
}

/// The Leary-Minasyan group
/// `L = <t, a, b | [a,b], t a^2 b^-1 t^-1 = a^2 b, t a b^2 t^-1 = a^-1 b^2>`:
/// an HNN extension of `Z^2` whose edge subgroups have index 5 and whose
/// stable letter realizes the infinite-order rotation
/// `[[3/5, -4/5], [4/5, 3/5]]`. It is quasi-isometric to `Z^2 x F_5` yet is
/// not virtually an HHG and does not have property (QT) — the headline
/// example showing neither property is a quasi-isometry invariant.
pub fn leary_minasyan() -> GbsGraph {
    // columns (2,-1), (1,2) and their images (2,1), (-1,2)
    GbsGraph::new(
        2,
        vec!["v0".into()],
        vec![Edge {
            id: "e0".into(),
            from: "v0".into(),
            to: "v0".into(),
            iota_from: IntMatrix::from_rows(&[&[2, 1], &[-1, 2]]),
            iota_to: IntMatrix::from_rows(&[&[2, -1], &[1, 2]]),
        }],
    )
}

/// Largest sublattice `B` of `Z^n` with `M(B)` still inside `Z^n`, i.e.
/// `Z^n ∩ M^-1(Z^n)` — the maximal admissible edge subgroup for
/// [`lm_general`].
pub fn max_edge_subgroup(m: &RatMatrix) -> Result<Lattice> {
    if !m.is_square() {
        return Err(Error::InvalidFamilyParameter("M must be square".into()));
    }
    if m.det().is_zero() {
        return Err(Error::InvalidFamilyParameter("M must be nonsingular".into()));
    }
    Ok(Lattice::full(m.rows()).preimage(m))
}

/// General Leary-Minasyan group: HNN extension of `Z^n` with associated
/// subgroups `B` and `M(B)`, where `M` is a nonsingular rational matrix and
/// `B` a full-rank sublattice with `M(B)` integral.
pub fn lm_general(n: usize, m: &RatMatrix, b: &Lattice) -> Result<GbsGraph> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::InvalidFamilyParameter(format!(
            "M must be {n}x{n}"
        )));
    }
    if m.det().is_zero() {
        return Err(Error::InvalidFamilyParameter("M must be nonsingular".into()));
    }
    if b.ambient_rank() != n || !b.is_full_rank() {
        return Err(Error::InvalidFamilyParameter(
            "B must be a full-rank sublattice of Z^n".into(),
        ));
    }
    let image = m.mul(&b.basis().to_rat());
    if !image.is_integral() {
        return Err(Error::InvalidFamilyParameter(
            "M(B) is not contained in Z^n".into(),
        ));
    }
    Ok(GbsGraph::new(
        n,
        vec!["v0".into()],
        vec![Edge {
            id: "e0".into(),
            from: "v0".into(),
            to: "v0".into(),
            iota_from: b.basis().clone(),
            iota_to: image.to_int(),
        }],
    ))
}

/// Looks up a catalog entry by name for the CLI.
pub fn catalog_names() -> Vec<&'static str> {
    vec!["leary-minasyan", "klein-bottle", "bs", "zn-cross-fr"]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use num_traits::Signed;

    #[test]
    fn leary_minasyan_is_valid() {
        assert!(leary_minasyan().validate().is_empty());
    }

    #[test]
    fn singular_iota_flagged() {
        let mut g = leary_minasyan();
        g.edges[0].iota_from = IntMatrix::from_rows(&[&[1, 2], &[2, 4]]);
        let v = g.validate();
        assert_eq!(v.len(), 1);
        assert!(v[0].location.contains("e0"));
        assert!(v[0].rule.contains("singular"));
    }

    #[test]
    fn disconnected_graph_flagged() {
        let g = GbsGraph::new(1, vec!["v0".into(), "v1".into()], vec![]);
        let v = g.validate();
        assert_eq!(v.len(), 1);
        assert!(v[0].rule.contains("connected"));
    }

    #[test]
    fn spanning_tree_cases() {
        // one vertex, one loop -> empty tree
        assert!(bs(1, 2).unwrap().spanning_tree().is_empty());

        // path v0 - v1 - v2 -> both edges
        let path = GbsGraph::new(
            1,
            vec!["v0".into(), "v1".into(), "v2".into()],
            vec![
                Edge {
                    id: "e0".into(),
                    from: "v0".into(),
                    to: "v1".into(),
                    iota_from: IntMatrix::from_rows(&[&[1]]),
                    iota_to: IntMatrix::from_rows(&[&[1]]),
                },
                Edge {
                    id: "e1".into(),
                    from: "v1".into(),
                    to: "v2".into(),
                    iota_from: IntMatrix::from_rows(&[&[1]]),
                    iota_to: IntMatrix::from_rows(&[&[1]]),
                },
            ],
        );
        let tree = path.spanning_tree();
        assert!(tree.contains("e0") && tree.contains("e1"));

        // double edge: deterministic tie-break by id
        let double = GbsGraph::new(
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
                    from: "v0".into(),
                    to: "v1".into(),
                    iota_from: IntMatrix::from_rows(&[&[1]]),
                    iota_to: IntMatrix::from_rows(&[&[1]]),
                },
            ],
        );
        let tree = double.spanning_tree();
        assert!(tree.contains("e0") && !tree.contains("e1"));
    }

    #[test]
    fn bs_presentation_matches_classic_form() {
        let g = bs(1, 2).unwrap();
        let p = presentation(&g).unwrap();
        assert_eq!(p.generators.len(), 2);
        assert_eq!(p.relators.len(), 1);
        let expected = GroupWord::from_letters([
            Letter::T {
                edge: "e0".into(),
                sign: 1,
            },
            Letter::V {
                vertex: "v0".into(),
                vec: vec![int(1)],
            },
            Letter::T {
                edge: "e0".into(),
                sign: -1,
            },
            Letter::V {
                vertex: "v0".into(),
                vec: vec![int(-2)],
            },
        ]);
        assert_eq!(p.relators[0], expected);
    }

    #[test]
    fn leary_minasyan_relators_in_vector_notation() {
        let p = presentation(&leary_minasyan()).unwrap();
        assert_eq!(p.relators.len(), 2);
        // t (2,-1) t^-1 = (2,1) and t (1,2) t^-1 = (-1,2)
        let r0 = &p.relators[0];
        match &r0.letters()[1] {
            Letter::V { vec, .. } => assert_eq!(vec, &[int(2), int(-1)]),
            _ => panic!("expected vertex letter"),
        }
        match &r0.letters()[3] {
            Letter::V { vec, .. } => assert_eq!(vec, &[int(-2), int(-1)]),
            _ => panic!("expected vertex letter"),
        }
    }

    #[test]
    fn zn_cross_fr_presentation() {
        let g = zn_cross_fr(2, 1).unwrap();
        let p = presentation(&g).unwrap();
        // a, b, t; relators t a t^-1 a^-1 and t b t^-1 b^-1
        assert_eq!(p.generators.len(), 3);
        assert_eq!(p.relators.len(), 2);
    }

    #[test]
    fn lm_general_reproduces_leary_minasyan_subgroup() {
        let m = RatMatrix::from_rows_rat(&[&[(3, 5), (-4, 5)], &[(4, 5), (3, 5)]]);
        let b = max_edge_subgroup(&m).unwrap();
        assert_eq!(b.index().unwrap(), int(5));
        let g = lm_general(2, &m, &b).unwrap();
        assert!(g.validate().is_empty());
        // from-side index |det B|, to-side index |det M| * |det B|
        assert_eq!(g.edges[0].iota_from.det().abs(), int(5));
        assert_eq!(g.edges[0].iota_to.det().abs(), int(5));
        // same edge subgroup as the hard-coded presentation
        let lm = leary_minasyan();
        assert_eq!(
            Lattice::from_generators(&g.edges[0].iota_from),
            Lattice::from_generators(&lm.edges[0].iota_from)
        );
    }

    #[test]
    fn lm_general_rejects_non_integral_image() {
        let m = RatMatrix::from_rows_rat(&[&[(3, 5), (-4, 5)], &[(4, 5), (3, 5)]]);
        let b = Lattice::full(2);
        assert!(matches!(
            lm_general(2, &m, &b),
            Err(Error::InvalidFamilyParameter(_))
        ));
    }

    #[test]
    fn json_roundtrip_is_identity() {
        let g = leary_minasyan();
        let v = g.to_json();
        let g2 = GbsGraph::from_json(&v).unwrap();
        assert_eq!(g, g2);
        assert_eq!(v.to_string(), g2.to_json().to_string());
    }

    #[test]
    fn word_free_reduction() {
        let mut w = GroupWord::empty();
        w.push(Letter::V {
            vertex: "v0".into(),
            vec: vec![int(1), int(2)],
        });
        w.push(Letter::V {
            vertex: "v0".into(),
            vec: vec![int(-1), int(-2)],
        });
        assert!(w.is_empty());
        let t = GroupWord::t("e0", 1);
        assert!(t.concat(&t.inverse()).is_empty());
    }
}
