//! The modular homomorphism `M : G -> GL(n, Q)` and its image, the
//! monodromy.
//!
//! Identifying every vertex group's rational span with the base vertex's
//! copy of `Q^n` along the spanning tree turns each stable letter into a
//! rational matrix; vertex-group elements act trivially. The group is
//! (virtually) an extension whose quotient is free on the stable letters, so
//! the homomorphism is determined by the stable matrices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{Int, Rat, RatMatrix};
use crate::gog::{GbsGraph, GroupWord, Letter};

#[derive(Clone, Debug, PartialEq)]
pub struct ModularData {
    pub base_vertex: String,
    /// Identification of each vertex group's rational span with the base
    /// coordinates; `psi[base]` is the identity.
    pub psi: BTreeMap<String, RatMatrix>,
    /// `M(t_e)` for each non-tree edge `e`.
    pub stable_matrices: BTreeMap<String, RatMatrix>,
}

/// Transports every vertex group to the base vertex along the canonical
/// spanning tree and reads off the stable-letter matrices.
pub fn modular_data(g: &GbsGraph) -> Result<ModularData> {
    modular_data_with_base(g, g.base_vertex())
}

/// Same spanning tree, re-rooted at `base`; stable matrices for different
/// bases differ by a single fixed conjugation.
pub fn modular_data_with_base(g: &GbsGraph, base: &str) -> Result<ModularData> {
    g.ensure_valid()?;
    if !g.has_vertex(base) {
        return Err(Error::UnknownSymbol(format!("vertex {base}")));
    }
    let n = g.rank;
    let tree = g.spanning_tree();

    let mut psi: BTreeMap<String, RatMatrix> = BTreeMap::new();
    psi.insert(base.to_string(), RatMatrix::identity(n));
    let mut queue = VecDeque::new();
    queue.push_back(base.to_string());
    while let Some(u) = queue.pop_front() {
        for e in &g.edges {
            if !tree.contains(&e.id) {
                continue;
            }
            let other = if e.from == u {
                &e.to
            } else if e.to == u {
                &e.from
            } else {
                continue;
            };
            if psi.contains_key(other) {
                continue;
            }
            // t-side and from-side images of the edge group coincide in G,
            // so the transport from the far endpoint into u's frame is the
            // composite through the edge group.
            let step = if e.from == u {
                // identify coordinates at e.to: psi[to] = psi[u] . if . it^-1
                e.iota_from.to_rat().mul(&e.iota_to.to_rat().inverse()?)
            } else {
                e.iota_to.to_rat().mul(&e.iota_from.to_rat().inverse()?)
            };
            psi.insert(other.clone(), psi[&u].mul(&step));
            queue.push_back(other.clone());
        }
    }

    let mut stable_matrices = BTreeMap::new();
    for e in &g.edges {
        // t iota_from(x) t^-1 = iota_to(x), read in base coordinates;
        // tree-edge stable letters are trivial and get the identity here
        // by construction of psi
        let m = psi[&e.to]
            .mul(&e.iota_to.to_rat())
            .mul(&e.iota_from.to_rat().inverse()?)
            .mul(&psi[&e.from].inverse()?);
        stable_matrices.insert(e.id.clone(), m);
    }

    Ok(ModularData {
        base_vertex: base.to_string(),
        psi,
        stable_matrices,
    })
}

impl ModularData {
    fn rank(&self) -> usize {
        self.psi[&self.base_vertex].rows()
    }

    /// `M(w)`: vertex letters map to the identity, `T(e, s)` to the `s`-th
    /// power of the stable matrix, multiplied in word order.
    pub fn image(&self, w: &GroupWord) -> Result<RatMatrix> {
        let mut acc = RatMatrix::identity(self.rank());
        for l in w.letters() {
            match l {
                Letter::V { vertex, .. } => {
                    if !self.psi.contains_key(vertex) {
                        return Err(Error::UnknownSymbol(format!("vertex {vertex}")));
                    }
                }
                Letter::T { edge, sign } => {
                    let m = self
                        .stable_matrices
                        .get(edge)
                        .ok_or_else(|| Error::UnknownSymbol(format!("stable letter {edge}")))?;
                    let f = if *sign >= 0 { m.clone() } else { m.inverse()? };
                    acc = acc.mul(&f);
                }
            }
        }
        Ok(acc)
    }
}

pub fn modular_image(g: &GbsGraph, w: &GroupWord) -> Result<RatMatrix> {
    modular_data(g)?.image(w)
}

/// Upper bound on the order of any finite subgroup of `GL(n, Q)`:
/// the product over primes `p <= n + 1` of `p` raised to
/// `sum_i floor(n / (p^i (p - 1)))`.
pub fn minkowski_bound(n: usize) -> Int {
    assert!(n >= 1);
    let mut bound = Int::one();
    let mut p: usize = 2;
    while p <= n + 1 {
        if (2..p).all(|d| p % d != 0) {
            let mut exp = 0usize;
            let mut pi = 1usize; // p^i
            loop {
                let term = n / (pi * (p - 1));
                if term == 0 {
                    break;
                }
                exp += term;
                pi *= p;
            }
            bound *= Int::from(p).pow(exp as u32);
        }
        p += 1;
    }
    bound
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonodromyVerdict {
    Finite { order: usize, trivial: bool },
    Infinite { elements_enumerated: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyReport {
    pub verdict: MonodromyVerdict,
    /// Everything enumerated by the closure, identity first.
    pub elements: Vec<RatMatrix>,
}

impl MonodromyReport {
    pub fn is_finite(&self) -> bool {
        matches!(self.verdict, MonodromyVerdict::Finite { .. })
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.verdict, MonodromyVerdict::Finite { trivial: true, .. })
    }

    pub fn to_json(&self) -> Value {
        match self.verdict {
            MonodromyVerdict::Finite { order, trivial } => {
                json!({ "verdict": "finite", "order": order, "trivial": trivial })
            }
            MonodromyVerdict::Infinite {
                elements_enumerated,
            } => {
                json!({ "verdict": "infinite", "elements_enumerated": elements_enumerated })
            }
        }
    }
}

fn matrix_key(m: &RatMatrix) -> Vec<Rat> {
    (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| m[(i, j)].clone()))
        .collect()
}

/// Decides finiteness of the monodromy by breadth-first closure of the
/// stable matrices and their inverses under multiplication. Any finite
/// subgroup of `GL(n, Q)` has order at most [`minkowski_bound`], so the
/// closure either completes within the bound (finite, with exact order) or
/// the first element past the bound certifies infiniteness.
pub fn monodromy_finiteness(g: &GbsGraph) -> Result<MonodromyReport> {
    let data = modular_data(g)?;
    let n = g.rank;
    let bound = minkowski_bound(n);

    let mut gens: Vec<RatMatrix> = Vec::new();
    for m in data.stable_matrices.values() {
        gens.push(m.clone());
        gens.push(m.inverse()?);
    }

    let identity = RatMatrix::identity(n);
    let mut seen: BTreeSet<Vec<Rat>> = BTreeSet::new();
    seen.insert(matrix_key(&identity));
    let mut elements = vec![identity.clone()];
    let mut queue = VecDeque::new();
    queue.push_back(identity);
    let mut exceeded = false;
    'bfs: while let Some(m) = queue.pop_front() {
        for gmat in &gens {
            let next = m.mul(gmat);
            if seen.insert(matrix_key(&next)) {
                elements.push(next.clone());
                if Int::from(elements.len()) > bound {
                    exceeded = true;
                    break 'bfs;
                }
                queue.push_back(next);
            }
        }
    }

    let verdict = if exceeded {
        MonodromyVerdict::Infinite {
            elements_enumerated: elements.len(),
        }
    } else {
        MonodromyVerdict::Finite {
            order: elements.len(),
            trivial: elements.len() == 1,
        }
    };
    Ok(MonodromyReport { verdict, elements })
}

/// The decompositions for which the modular homomorphism is not an
/// invariant of the group itself: `Z^n`, a mapping torus `Z^n x| Z`, or an
/// amalgam of two copies of `Z^n` over a common index-2 subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasicCase {
    NotBasic,
    Zn,
    ZnSemidirectZ,
    IndexTwoAmalgam,
}

impl BasicCase {
    pub fn as_str(self) -> &'static str {
        match self {
            BasicCase::NotBasic => "not-basic",
            BasicCase::Zn => "zn",
            BasicCase::ZnSemidirectZ => "zn-semidirect-z",
            BasicCase::IndexTwoAmalgam => "index-two-amalgam",
        }
    }
}

/// Collapses non-loop edges whose inclusions are both unimodular (these are
/// isomorphisms of vertex groups) and classifies the collapsed shape.
pub fn is_basic_case(g: &GbsGraph) -> Result<BasicCase> {
    g.ensure_valid()?;
    // union-find over vertices
    let mut parent: BTreeMap<&str, &str> = g.vertices.iter().map(|v| (v.as_str(), v.as_str())).collect();
    fn find<'a>(parent: &BTreeMap<&'a str, &'a str>, mut v: &'a str) -> &'a str {
        while parent[v] != v {
            v = parent[v];
        }
        v
    }
    let one = Int::one();
    let mut remaining = Vec::new();
    for e in &g.edges {
        let (rf, rt) = (find(&parent, &e.from), find(&parent, &e.to));
        let unimodular = e.iota_from.det().abs() == one && e.iota_to.det().abs() == one;
        if rf != rt && unimodular {
            let key = rf;
            parent.insert(key, rt);
        } else {
            remaining.push(e);
        }
    }
    let components: BTreeSet<&str> = g.vertices.iter().map(|v| find(&parent, v)).collect();

    let verdict = match (components.len(), remaining.len()) {
        (1, 0) => BasicCase::Zn,
        (1, 1) => {
            let e = remaining[0];
            if e.iota_from.det().abs() == one && e.iota_to.det().abs() == one {
                BasicCase::ZnSemidirectZ
            } else {
                BasicCase::NotBasic
            }
        }
        (2, 1) => {
            let e = remaining[0];
            let two = Int::from(2);
            if e.iota_from.det().abs() == two && e.iota_to.det().abs() == two {
                BasicCase::IndexTwoAmalgam
            } else {
                BasicCase::NotBasic
            }
        }
        _ => BasicCase::NotBasic,
    };
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, IntMatrix};
    use crate::gog::{bs, klein_bottle, leary_minasyan, presentation, zn_cross_fr, Edge};

    #[test]
    fn leary_minasyan_stable_matrix() {
        let d = modular_data(&leary_minasyan()).unwrap();
        let expect = RatMatrix::from_rows_rat(&[&[(3, 5), (-4, 5)], &[(4, 5), (3, 5)]]);
        assert_eq!(d.stable_matrices["e0"], expect);
    }

    #[test]
    fn bs_and_trivial_stable_matrices() {
        let d = modular_data(&bs(1, 2).unwrap()).unwrap();
        assert_eq!(d.stable_matrices["e0"][(0, 0)], rat(2, 1));
        let d = modular_data(&zn_cross_fr(2, 1).unwrap()).unwrap();
        assert!(d.stable_matrices["e0"].is_identity());
    }

    #[test]
    fn image_of_words() {
        let g = bs(1, 2).unwrap();
        let tt = GroupWord::t("e0", 1).concat(&GroupWord::t("e0", 1));
        assert_eq!(modular_image(&g, &tt).unwrap()[(0, 0)], rat(4, 1));
        assert!(modular_image(&g, &GroupWord::empty()).unwrap().is_identity());
    }

    #[test]
    fn relators_map_to_identity() {
        for g in [leary_minasyan(), bs(3, -2).unwrap(), zn_cross_fr(3, 2).unwrap()] {
            let d = modular_data(&g).unwrap();
            for r in presentation(&g).unwrap().relators {
                assert!(d.image(&r).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn minkowski_values() {
        assert_eq!(minkowski_bound(1), Int::from(2));
        assert_eq!(minkowski_bound(2), Int::from(24));
        assert_eq!(minkowski_bound(3), Int::from(48));
        assert_eq!(minkowski_bound(4), Int::from(5760));
    }

    #[test]
    fn finiteness_verdicts() {
        let r = monodromy_finiteness(&leary_minasyan()).unwrap();
        assert_eq!(
            r.verdict,
            MonodromyVerdict::Infinite {
                elements_enumerated: 25
            }
        );
        let r = monodromy_finiteness(&bs(1, 2).unwrap()).unwrap();
        assert_eq!(
            r.verdict,
            MonodromyVerdict::Infinite {
                elements_enumerated: 3
            }
        );
        let r = monodromy_finiteness(&klein_bottle()).unwrap();
        assert_eq!(
            r.verdict,
            MonodromyVerdict::Finite {
                order: 2,
                trivial: false
            }
        );
        let r = monodromy_finiteness(&zn_cross_fr(3, 4).unwrap()).unwrap();
        assert!(r.is_trivial());
    }

    #[test]
    fn finite_order_lagrange_certificate() {
        let r = monodromy_finiteness(&klein_bottle()).unwrap();
        if let MonodromyVerdict::Finite { order, .. } = r.verdict {
            for m in &r.elements {
                let mut acc = RatMatrix::identity(1);
                for _ in 0..order {
                    acc = acc.mul(m);
                }
                assert!(acc.is_identity());
            }
        } else {
            panic!("expected finite");
        }
    }

    #[test]
    fn basic_case_classification() {
        let single = GbsGraph::new(2, vec!["v0".into()], vec![]);
        assert_eq!(is_basic_case(&single).unwrap(), BasicCase::Zn);
        assert_eq!(is_basic_case(&klein_bottle()).unwrap(), BasicCase::ZnSemidirectZ);
        assert_eq!(is_basic_case(&leary_minasyan()).unwrap(), BasicCase::NotBasic);

        let amalgam = GbsGraph::new(
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
        assert_eq!(is_basic_case(&amalgam).unwrap(), BasicCase::IndexTwoAmalgam);
        assert_eq!(is_basic_case(&bs(2, 3).unwrap()).unwrap(), BasicCase::NotBasic);
    }

    #[test]
    fn base_vertex_independence_up_to_conjugacy() {
        // two vertices joined by a tree edge, plus a loop at v1
        let g = GbsGraph::new(
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
                    to: "v1".into(),
                    iota_from: IntMatrix::from_rows(&[&[1]]),
                    iota_to: IntMatrix::from_rows(&[&[5]]),
                },
            ],
        );
        let d0 = modular_data(&g).unwrap();
        let d1 = modular_data_with_base(&g, "v1").unwrap();
        // conjugator: ratio of the psi maps at any vertex
        let c = d0.psi["v1"].mul(&d1.psi["v1"].inverse().unwrap());
        for (e, m1) in &d1.stable_matrices {
            let m0 = &d0.stable_matrices[e];
            assert_eq!(m0.char_poly(), m1.char_poly());
            assert_eq!(*m0, c.mul(m1).mul(&c.inverse().unwrap()));
        }
    }
}
