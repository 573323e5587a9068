//! Isometry-type algebra for factor-preserving actions on products of
//! spaces, and the top-level classification predicates for a GBS_n group.

use serde_json::{json, Value};

use crate::abel::{witness_never_loxodromic, Witness};
use crate::error::{Error, Result};
use crate::gog::GbsGraph;
use crate::modular::{is_basic_case, monodromy_finiteness, BasicCase, MonodromyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum IsometryType {
    Elliptic,
    Parabolic,
    Loxodromic,
}

impl IsometryType {
    pub fn as_str(self) -> &'static str {
        match self {
            IsometryType::Elliptic => "elliptic",
            IsometryType::Parabolic => "parabolic",
            IsometryType::Loxodromic => "loxodromic",
        }
    }
}

/// Isometry type of a diagonal action on a product, given the types on the
/// factors: loxodromic dominates, then parabolic, then elliptic.
pub fn combine_product_types(types: &[IsometryType]) -> Result<IsometryType> {
    types.iter().max().copied().ok_or(Error::EmptyInput)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductObstruction {
    Consistent,
    ParabolicForbidden,
}

/// In an acylindrical action on a product no element can act parabolically,
/// so a type profile combining to parabolic rules such an action out.
pub fn product_acylindrical_obstruction(types: &[IsometryType]) -> Result<ProductObstruction> {
    Ok(match combine_product_types(types)? {
        IsometryType::Parabolic => ProductObstruction::ParabolicForbidden,
        _ => ProductObstruction::Consistent,
    })
}

pub struct ClassificationReport {
    pub monodromy: MonodromyReport,
    pub basic_case: BasicCase,
    pub virtually_hhg: bool,
    pub virtually_zn_cross_fr: bool,
    pub has_qt: bool,
    pub acylindrically_hyperbolic: bool,
    pub witness: Option<Witness>,
}

impl ClassificationReport {
    pub fn to_json(&self) -> Value {
        let finite = self.monodromy.is_finite();
        let mut justification = vec![
            format!(
                "monodromy group is {}",
                if finite { "finite" } else { "infinite" }
            ),
            if finite {
                "finite monodromy gives a finite-index subgroup of the form Z^n x F_r, \
                 which is hierarchically hyperbolic"
                    .to_string()
            } else {
                "infinite monodromy rules out a hierarchically hyperbolic structure on \
                 any finite-index subgroup"
                    .to_string()
            },
            if finite {
                "Z^n x F_r acts on a product of lines and a tree, giving property (QT), \
                 and (QT) passes from a finite-index subgroup to the group"
                    .to_string()
            } else {
                "without finite monodromy the group has no quasi-tree product action"
                    .to_string()
            },
            "a GBS_n group is never acylindrically hyperbolic: vertex stabilizers are \
             commensurated"
                .to_string(),
        ];
        if self.witness.is_some() {
            justification.push(
                "witness element is elliptic in every cobounded isometric action on a \
                 product of hyperbolic spaces"
                    .to_string(),
            );
        }
        json!({
            "monodromy": self.monodromy.to_json(),
            "basic_case": self.basic_case.as_str(),
            "virtually_hhg": self.virtually_hhg,
            "virtually_zn_cross_fr": self.virtually_zn_cross_fr,
            "has_qt": self.has_qt,
            "acylindrically_hyperbolic": self.acylindrically_hyperbolic,
            "witness": self.witness.as_ref().map(Witness::to_json).unwrap_or(Value::Null),
            "justification": justification,
        })
    }
}

/// Evaluates every classification predicate: all of them reduce to
/// finiteness of the monodromy group, except acylindrical hyperbolicity,
/// which always fails.
pub fn classify_group(g: &GbsGraph) -> Result<ClassificationReport> {
    g.ensure_valid()?;
    let monodromy = monodromy_finiteness(g)?;
    let finite = monodromy.is_finite();
    let witness = witness_never_loxodromic(g)?;
    assert_eq!(witness.is_some(), !finite);
    Ok(ClassificationReport {
        monodromy,
        basic_case: is_basic_case(g)?,
        virtually_hhg: finite,
        virtually_zn_cross_fr: finite,
        has_qt: finite,
        acylindrically_hyperbolic: false,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::IsometryType::*;
    use super::*;
    use crate::gog::{bs, klein_bottle, leary_minasyan, zn_cross_fr};

    #[test]
    fn combine_examples() {
        assert_eq!(combine_product_types(&[Elliptic, Elliptic]).unwrap(), Elliptic);
        assert_eq!(combine_product_types(&[Parabolic, Elliptic]).unwrap(), Parabolic);
        assert_eq!(
            combine_product_types(&[Loxodromic, Parabolic, Elliptic]).unwrap(),
            Loxodromic
        );
        assert!(matches!(combine_product_types(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn combine_full_truth_table() {
        let all = [Elliptic, Parabolic, Loxodromic];
        for &a in &all {
            for &b in &all {
                for &c in &all {
                    let types = [a, b, c];
                    let expected = if types.contains(&Loxodromic) {
                        Loxodromic
                    } else if types.contains(&Parabolic) {
                        Parabolic
                    } else {
                        Elliptic
                    };
                    assert_eq!(combine_product_types(&types).unwrap(), expected);
                    // permutation invariance
                    assert_eq!(combine_product_types(&[c, a, b]).unwrap(), expected);
                    // duplication
                    assert_eq!(
                        combine_product_types(&[a, b, c, a, b, c]).unwrap(),
                        expected
                    );
                }
            }
        }
    }

    #[test]
    fn obstruction_examples() {
        assert_eq!(
            product_acylindrical_obstruction(&[Parabolic, Elliptic]).unwrap(),
            ProductObstruction::ParabolicForbidden
        );
        assert_eq!(
            product_acylindrical_obstruction(&[Loxodromic, Parabolic]).unwrap(),
            ProductObstruction::Consistent
        );
        assert_eq!(
            product_acylindrical_obstruction(&[Elliptic]).unwrap(),
            ProductObstruction::Consistent
        );
    }

    #[test]
    fn classify_examples() {
        let r = classify_group(&leary_minasyan()).unwrap();
        assert!(!r.virtually_hhg);
        assert!(!r.has_qt);
        assert!(!r.acylindrically_hyperbolic);
        assert!(r.witness.is_some());

        let r = classify_group(&zn_cross_fr(2, 5).unwrap()).unwrap();
        assert!(r.virtually_hhg);
        assert!(r.virtually_zn_cross_fr);
        assert!(r.has_qt);
        assert!(r.witness.is_none());

        let r = classify_group(&bs(1, 2).unwrap()).unwrap();
        assert!(!r.virtually_hhg);
        assert!(r.witness.is_some());

        let r = classify_group(&klein_bottle()).unwrap();
        assert!(r.virtually_hhg);
    }

    #[test]
    fn report_internal_consistency() {
        for g in [leary_minasyan(), bs(3, 3).unwrap(), zn_cross_fr(1, 1).unwrap()] {
            let r = classify_group(&g).unwrap();
            let finite = r.monodromy.is_finite();
            assert_eq!(r.virtually_hhg, finite);
            assert_eq!(r.virtually_zn_cross_fr, finite);
            assert_eq!(r.has_qt, finite);
            assert!(!r.acylindrically_hyperbolic);
            assert_eq!(r.witness.is_some(), !finite);
            let j = r.to_json();
            assert!(j["justification"].as_array().unwrap().len() >= 4);
        }
    }
}
