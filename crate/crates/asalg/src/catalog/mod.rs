//! The built-in classification data — every indecomposable complex
//! associative algebra of dimension 2, 3 and 4 as an executable catalog
//! entry — plus decomposable-algebra generation and the verification
//! harness over it all.

mod format;
pub mod verify;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::algebra::Algebra;
use crate::exactnum::Scalar;
use crate::invariants::WedderburnClaim;
use crate::morphisms::expr::{Assignment, ParamExpr};
use crate::morphisms::AutFamilyTemplate;

pub use format::{parse_catalog, render_catalog, HEADER};
pub use verify::{
    emit_table, separation_matrix, verify_all, verify_entry, CheckLine, CheckStatus, Overall,
    SeparationReport, TableFormat, VerificationReport,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("cannot parse catalog: {0}")]
    Parse(String),
    #[error("unknown catalog id {0:?}")]
    UnknownId(String),
    #[error("parameter {name} = {value} is excluded for this entry")]
    ExcludedParameter { name: String, value: String },
    #[error("missing value for parameter {0}")]
    MissingParameter(String),
    #[error("parameter expression failed to evaluate: {0}")]
    BadParameter(String),
    #[error("instantiated entry {id} is not associative at ({i},{j},{k}) — transcription bug")]
    AssociativityFailure {
        id: String,
        i: usize,
        j: usize,
        k: usize,
    },
    #[error("decomposables are generated for dimensions 2..=4, got {0}")]
    BadDimension(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: String,
    pub excluded: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimedInvariants {
    pub commutative: bool,
    pub unital: bool,
    pub nilpotent: bool,
    pub dim_c: usize,
    pub dim_l: usize,
    pub dim_r: usize,
    /// Claimed N and S spans as 1-based basis indices.
    pub wedderburn: Option<(Vec<usize>, Vec<usize>)>,
}

/// One classification table row: products (possibly parametrized), the
/// claimed invariant columns, and the printed automorphism families.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: String,
    pub dim: usize,
    pub products: Vec<(usize, usize, usize, ParamExpr)>,
    pub params: Vec<ParamSpec>,
    pub claimed: ClaimedInvariants,
    pub aut_families: Vec<AutFamilyTemplate>,
    pub notes: Vec<String>,
}

impl CatalogEntry {
    pub fn is_parametrized(&self) -> bool {
        !self.params.is_empty()
    }

    /// The claimed Wedderburn spans as coordinate vectors.
    pub fn wedderburn_claim(&self) -> Option<WedderburnClaim> {
        let (n_idx, s_idx) = self.claimed.wedderburn.as_ref()?;
        let to_vecs = |idxs: &[usize]| {
            idxs.iter()
                .map(|&i| {
                    let mut v = vec![Scalar::zero(); self.dim];
                    v[i - 1] = Scalar::one();
                    v
                })
                .collect()
        };
        Some(WedderburnClaim {
            n_span: to_vecs(n_idx),
            s_span: to_vecs(s_idx),
        })
    }

    /// Concrete algebra at a parameter assignment.  Exclusions are honored
    /// and the result must pass the associativity check — a failure there
    /// can only mean corrupted data.
    pub fn instantiate(&self, assignment: &Assignment) -> Result<Algebra, CatalogError> {
        for p in &self.params {
            let v = assignment
                .get(&p.name)
                .ok_or_else(|| CatalogError::MissingParameter(p.name.clone()))?;
            if p.excluded.contains(v) {
                return Err(CatalogError::ExcludedParameter {
                    name: p.name.clone(),
                    value: v.to_string(),
                });
            }
        }
        let mut concrete = Vec::new();
        for (i, j, k, expr) in &self.products {
            let c = expr
                .eval(assignment)
                .map_err(|e| CatalogError::BadParameter(e.to_string()))?;
            if !c.is_zero() {
                concrete.push((*i, *j, *k, c));
            }
        }
        let label = label_for(&self.id, assignment);
        let algebra = Algebra::new(self.dim, label, &concrete)
            .map_err(|e| CatalogError::Parse(e.to_string()))?;
        if let Some(w) = algebra.associativity_witness() {
            return Err(CatalogError::AssociativityFailure {
                id: self.id.clone(),
                i: w.triple.0,
                j: w.triple.1,
                k: w.triple.2,
            });
        }
        Ok(algebra)
    }

    /// The standard deterministic parameter samples for this entry:
    /// α ∈ {0, 2, −1, 1/2} minus the entry's exclusions; a single empty
    /// assignment for unparametrized entries.
    pub fn standard_samples(&self) -> Vec<Assignment> {
        if self.params.is_empty() {
            return vec![Assignment::new()];
        }
        let values = standard_parameter_values();
        // entries carry at most one parameter; a cartesian product would be
        // the generalization
        let p = &self.params[0];
        values
            .into_iter()
            .filter(|v| !p.excluded.contains(v))
            .map(|v| {
                let mut a = Assignment::new();
                a.insert(p.name.clone(), v);
                a
            })
            .collect()
    }
}

/// The fixed sample set {0, 2, -1, 1/2}: zero, a generic integer, a
/// negative, a non-integer.
pub fn standard_parameter_values() -> Vec<Scalar> {
    vec![
        Scalar::zero(),
        Scalar::from_int(2),
        Scalar::from_int(-1),
        Scalar::from_ratio(1, 2),
    ]
}

fn label_for(id: &str, assignment: &Assignment) -> String {
    if assignment.is_empty() {
        id.to_string()
    } else {
        let parts: Vec<String> = assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{id}({})", parts.join(","))
    }
}

/// Report tag for an entry at a sample, e.g. `As_3_2@alpha=0`.
pub fn sample_tag(id: &str, assignment: &Assignment) -> String {
    if assignment.is_empty() {
        id.to_string()
    } else {
        let parts: Vec<String> = assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{id}@{}", parts.join(","))
    }
}

static BUILTIN: OnceLock<Vec<CatalogEntry>> = OnceLock::new();

/// The full built-in catalog: 4 + 12 + 46 = 62 entries with ids
/// `As_2_1` … `As_4_46`.
pub fn builtin_catalog() -> &'static [CatalogEntry] {
    BUILTIN.get_or_init(|| {
        parse_catalog(include_str!("data.txt")).expect("built-in catalog data parses")
    })
}

pub fn entry_by_id(id: &str) -> Result<&'static CatalogEntry, CatalogError> {
    builtin_catalog()
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| CatalogError::UnknownId(id.to_string()))
}

/// The complete dimension-1 classification: the zero algebra and the field
/// (e₁e₁ = λe₁ rescales to λ = 1).
pub fn one_dim_algebras() -> Vec<Algebra> {
    vec![
        Algebra::zero_algebra(1, "Z1"),
        Algebra::new(1, "F1", &[(1, 1, 1, Scalar::one())]).expect("valid"),
    ]
}

/// All direct sums of catalog entries and dimension-1 algebras with the
/// given total dimension, as unordered multisets of summands; parametrized
/// summands contribute one piece per standard sample.
pub fn generate_decomposables(dim: usize) -> Result<Vec<Algebra>, CatalogError> {
    if !(2..=4).contains(&dim) {
        return Err(CatalogError::BadDimension(dim));
    }
    // ordered pool of available pieces of each dimension < dim
    let mut pieces: Vec<Algebra> = one_dim_algebras();
    for e in builtin_catalog() {
        if e.dim >= dim {
            continue;
        }
        for sample in e.standard_samples() {
            pieces.push(e.instantiate(&sample).expect("catalog data instantiates"));
        }
    }
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    enumerate_multisets(&pieces, dim, 0, &mut stack, &mut out);
    for a in &out {
        debug_assert!(a.is_associative());
    }
    Ok(out)
}

fn enumerate_multisets(
    pieces: &[Algebra],
    remaining: usize,
    min_idx: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Algebra>,
) {
    if remaining == 0 {
        if stack.len() >= 2 {
            let mut iter = stack.iter();
            let first = &pieces[*iter.next().unwrap()];
            let sum = iter.fold(first.clone(), |acc, &i| acc.direct_sum(&pieces[i]));
            out.push(sum);
        }
        return;
    }
    for idx in min_idx..pieces.len() {
        if pieces[idx].dim() > remaining {
            continue;
        }
        stack.push(idx);
        enumerate_multisets(pieces, remaining - pieces[idx].dim(), idx, stack, out);
        stack.pop();
    }
}

/// Parses `--param name=value` style assignments.
pub fn parse_assignment(pairs: &[String]) -> Result<Assignment, CatalogError> {
    let mut out = BTreeMap::new();
    for pair in pairs {
        let (name, value) = pair.split_once('=').ok_or_else(|| {
            CatalogError::BadParameter(format!("expected name=value, got {pair:?}"))
        })?;
        let v: Scalar = value
            .parse()
            .map_err(|_| CatalogError::BadParameter(format!("bad scalar {value:?}")))?;
        out.insert(name.to_string(), v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants;

    fn assign(name: &str, v: &str) -> Assignment {
        let mut a = Assignment::new();
        a.insert(name.into(), v.parse().unwrap());
        a
    }

    #[test]
    fn catalog_has_the_right_shape() {
        let cat = builtin_catalog();
        assert_eq!(cat.len(), 62);
        let count = |d: usize| cat.iter().filter(|e| e.dim == d).count();
        assert_eq!((count(2), count(3), count(4)), (4, 12, 46));
        for (i, e) in cat.iter().enumerate() {
            // ids run As_2_1..As_2_4, As_3_1..As_3_12, As_4_1..As_4_46
            let expected = if i < 4 {
                format!("As_2_{}", i + 1)
            } else if i < 16 {
                format!("As_3_{}", i - 3)
            } else {
                format!("As_4_{}", i - 15)
            };
            assert_eq!(e.id, expected);
        }
    }

    #[test]
    fn parametrized_entries_are_the_documented_six() {
        let ids: Vec<&str> = builtin_catalog()
            .iter()
            .filter(|e| e.is_parametrized())
            .map(|e| e.id.as_str())
            .collect();
        assert_eq!(
            ids,
            ["As_3_2", "As_4_6", "As_4_16", "As_4_18", "As_4_28", "As_4_44"]
        );
        // As_3_2 and As_4_6 exclude alpha = 1
        for id in ["As_3_2", "As_4_6"] {
            let e = entry_by_id(id).unwrap();
            assert_eq!(e.params[0].excluded, vec![Scalar::one()]);
        }
    }

    #[test]
    fn spot_check_products_against_the_tables() {
        // As_2_1: the single product e1e1 = e2
        let a = entry_by_id("As_2_1")
            .unwrap()
            .instantiate(&Assignment::new())
            .unwrap();
        assert_eq!(a.nonzero_products(), vec![(1, 1, 2, Scalar::one())]);
        // As_3_2 at alpha=2: e1e3 = e2, e3e1 = 2e2
        let b = entry_by_id("As_3_2")
            .unwrap()
            .instantiate(&assign("alpha", "2"))
            .unwrap();
        assert_eq!(
            b.nonzero_products(),
            vec![(1, 3, 2, Scalar::one()), (3, 1, 2, Scalar::from_int(2))]
        );
        // As_4_44 has nine products including e2e3 = alpha*e4
        let c = entry_by_id("As_4_44").unwrap();
        assert_eq!(c.products.len(), 9);
        let at2 = c.instantiate(&assign("alpha", "2")).unwrap();
        assert_eq!(
            at2.mul(&at2.basis_element(1), &at2.basis_element(2)),
            vec![
                Scalar::zero(),
                Scalar::zero(),
                Scalar::zero(),
                Scalar::from_int(2)
            ]
        );
    }

    #[test]
    fn excluded_parameters_are_rejected() {
        let e = entry_by_id("As_3_2").unwrap();
        assert!(matches!(
            e.instantiate(&assign("alpha", "1")),
            Err(CatalogError::ExcludedParameter { .. })
        ));
        assert!(matches!(
            e.instantiate(&Assignment::new()),
            Err(CatalogError::MissingParameter(_))
        ));
        // As_4_6's coefficient (1+alpha)/(1-alpha) also guards alpha=1
        let e6 = entry_by_id("As_4_6").unwrap();
        assert!(e6.instantiate(&assign("alpha", "1")).is_err());
    }

    #[test]
    fn every_entry_is_associative_at_every_standard_sample() {
        for e in builtin_catalog() {
            for sample in e.standard_samples() {
                let a = e.instantiate(&sample).unwrap();
                assert!(a.is_associative(), "{}", sample_tag(&e.id, &sample));
            }
        }
    }

    #[test]
    fn standard_samples_respect_exclusions() {
        let e = entry_by_id("As_3_2").unwrap();
        let samples = e.standard_samples();
        assert_eq!(samples.len(), 4); // 1 is not in the sample set anyway
        let plain = entry_by_id("As_2_1").unwrap();
        assert_eq!(plain.standard_samples().len(), 1);
    }

    #[test]
    fn builtin_catalog_round_trips_through_the_format() {
        let rendered = render_catalog(builtin_catalog());
        let back = parse_catalog(&rendered).unwrap();
        assert_eq!(builtin_catalog(), &back[..]);
    }

    #[test]
    fn one_dimensional_classification() {
        let one = one_dim_algebras();
        assert_eq!(one.len(), 2);
        assert!(one[0].nonzero_products().is_empty());
        assert_eq!(one[1].nonzero_products(), vec![(1, 1, 1, Scalar::one())]);
    }

    #[test]
    fn decomposable_counts() {
        // dim 2: zero+zero, zero+field, field+field
        assert_eq!(generate_decomposables(2).unwrap().len(), 3);
        // dim 3: 4 triple sums of 1-dim pieces + 2*4 pairs (1-dim, 2-dim)
        assert_eq!(generate_decomposables(3).unwrap().len(), 12);
        // dim 4: 5 + 12 + 10 + 2*(11 + 4) by partition shape
        assert_eq!(generate_decomposables(4).unwrap().len(), 57);
        assert!(matches!(
            generate_decomposables(5),
            Err(CatalogError::BadDimension(5))
        ));
    }

    #[test]
    fn decomposables_satisfy_fingerprint_additivity() {
        // spot-check one: As_2_2 (+) F1
        let a22 = entry_by_id("As_2_2")
            .unwrap()
            .instantiate(&Assignment::new())
            .unwrap();
        let f1 = &one_dim_algebras()[1];
        let sum = a22.direct_sum(f1);
        let (fa, fb, fs) = (
            invariants::fingerprint(&a22),
            invariants::fingerprint(f1),
            invariants::fingerprint(&sum),
        );
        assert_eq!(fs.dim_left_ann, fa.dim_left_ann + fb.dim_left_ann);
        assert_eq!(fs.dim_radical, fa.dim_radical + fb.dim_radical);
    }

    #[test]
    fn direct_sum_is_commutative_up_to_isomorphism() {
        use crate::morphisms::{is_homomorphism, search_isomorphism};
        let a = entry_by_id("As_2_2")
            .unwrap()
            .instantiate(&Assignment::new())
            .unwrap();
        let b = entry_by_id("As_2_1")
            .unwrap()
            .instantiate(&Assignment::new())
            .unwrap();
        let ab = a.direct_sum(&b);
        let ba = b.direct_sum(&a);
        let cert = search_isomorphism(&ab, &ba, 50, 0).expect("swap certificate");
        assert!(is_homomorphism(&ab, &ba, &cert).unwrap().ok);
    }
}
