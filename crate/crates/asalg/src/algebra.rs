//! Structure-constant algebras and their basic calculus.
//!
//! An [`Algebra`] is a dimension n together with the tensor c[i][j][k]
//! defining eᵢeⱼ = Σₖ c[i][j][k] eₖ.  Elements are coordinate vectors over
//! the defining basis; all operations extend the table bilinearly.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::exactnum::{Matrix, Scalar, Subspace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("duplicate product entry for (e{i}, e{j}) -> e{k}")]
    DuplicateProduct { i: usize, j: usize, k: usize },
    #[error("element has {got} coordinates, algebra has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("basis-change matrix is singular")]
    SingularMatrix,
    #[error("basis-change matrix is {rows}x{cols}, expected {dim}x{dim}")]
    BadMatrixShape { rows: usize, cols: usize, dim: usize },
    #[error("cannot parse algebra file: {0}")]
    Parse(String),
}

/// Both sides of the first associativity violation, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociativityWitness {
    /// 1-based indices (i, j, k) with (eᵢeⱼ)eₖ ≠ eᵢ(eⱼeₖ).
    pub triple: (usize, usize, usize),
    pub lhs: Vec<Scalar>,
    pub rhs: Vec<Scalar>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Algebra {
    dim: usize,
    sc: Vec<Scalar>, // c[i][j][k] at ((i*dim)+j)*dim + k
    label: String,
}

impl Algebra {
    /// Builds an algebra from its nonzero products.  Indices are 1-based as
    /// in the table notation; listing the same (i, j, k) twice is rejected.
    pub fn new(
        dim: usize,
        label: impl Into<String>,
        products: &[(usize, usize, usize, Scalar)],
    ) -> Result<Algebra, AlgebraError> {
        let mut sc = vec![Scalar::zero(); dim * dim * dim];
        let mut seen = vec![false; dim * dim * dim];
        for &(i, j, k, ref coeff) in products {
            for idx in [i, j, k] {
                if idx == 0 || idx > dim {
                    return Err(AlgebraError::IndexOutOfRange { index: idx, dim });
                }
            }
            let flat = ((i - 1) * dim + (j - 1)) * dim + (k - 1);
            if seen[flat] {
                return Err(AlgebraError::DuplicateProduct { i, j, k });
            }
            seen[flat] = true;
            sc[flat] = coeff.clone();
        }
        Ok(Algebra {
            dim,
            sc,
            label: label.into(),
        })
    }

    /// The algebra with all products zero.
    pub fn zero_algebra(dim: usize, label: impl Into<String>) -> Algebra {
        Algebra {
            dim,
            sc: vec![Scalar::zero(); dim * dim * dim],
            label: label.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    /// c[i][j][k] with 0-based indices.
    pub fn sc(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.sc[(i * self.dim + j) * self.dim + k]
    }

    /// Coordinate vector of the basis element eᵢ (0-based).
    pub fn basis_element(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim];
        v[i] = Scalar::one();
        v
    }

    pub fn zero_element(&self) -> Vec<Scalar> {
        vec![Scalar::zero(); self.dim]
    }

    /// Bilinear product of two coordinate vectors.  Lengths must equal the
    /// algebra dimension; use [`Algebra::multiply`] for the checked variant.
    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        let n = self.dim;
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for k in 0..n {
                    let s = self.sc(i, j, k);
                    if !s.is_zero() {
                        out[k] += &(&c * s);
                    }
                }
            }
        }
        out
    }

    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>, AlgebraError> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: self.dim,
                    got: v.len(),
                });
            }
        }
        Ok(self.mul(x, y))
    }

    /// Checks (eᵢeⱼ)eₖ = eᵢ(eⱼeₖ) over all basis triples; `None` means the
    /// algebra is associative, otherwise the first violating triple is
    /// returned with both sides.
    pub fn associativity_witness(&self) -> Option<AssociativityWitness> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul(&self.basis_element(i), &self.basis_element(j));
                for k in 0..n {
                    let lhs = self.mul(&ij, &self.basis_element(k));
                    let jk = self.mul(&self.basis_element(j), &self.basis_element(k));
                    let rhs = self.mul(&self.basis_element(i), &jk);
                    if lhs != rhs {
                        return Some(AssociativityWitness {
                            triple: (i + 1, j + 1, k + 1),
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
        None
    }

    pub fn is_associative(&self) -> bool {
        self.associativity_witness().is_none()
    }

    /// span{uv : u ∈ basis(U), v ∈ basis(V)} — the right notion of UV for
    /// subspaces because the product is bilinear.
    pub fn subspace_product(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let mut products = Vec::new();
        for bu in u.basis() {
            for bv in v.basis() {
                products.push(self.mul(bu, bv));
            }
        }
        Subspace::from_vectors(self.dim, products)
    }

    /// The chain A¹ ⊇ A² ⊇ … with Aᵏ⁺¹ = A·Aᵏ, listed until it stabilizes.
    /// A repeated term is included once when the chain stops above zero
    /// (e.g. a unital algebra yields dims [n, n]), while a chain reaching
    /// zero ends at its first zero term.
    pub fn power_chain(&self) -> Vec<Subspace> {
        let full = Subspace::full(self.dim);
        let mut chain = vec![full.clone()];
        loop {
            let last = chain.last().unwrap();
            if last.is_zero() {
                break;
            }
            let next = self.subspace_product(&full, last);
            let stabilized = &next == last;
            chain.push(next);
            if stabilized {
                break;
            }
        }
        chain
    }

    /// Transports the products through P, where the columns of P express the
    /// new basis vectors in the old one.  `change_basis(A, I) = A`.
    pub fn change_basis(&self, p: &Matrix) -> Result<Algebra, AlgebraError> {
        if p.rows() != self.dim || p.cols() != self.dim {
            return Err(AlgebraError::BadMatrixShape {
                rows: p.rows(),
                cols: p.cols(),
                dim: self.dim,
            });
        }
        let inv = p
            .invert()
            .expect("shape checked above")
            .ok_or(AlgebraError::SingularMatrix)?;
        let n = self.dim;
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let fi = p.col(i);
                let fj = p.col(j);
                let w = self.mul(&fi, &fj);
                let coords = inv.apply(&w).expect("dimension checked");
                for (k, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        products.push((i + 1, j + 1, k + 1, c));
                    }
                }
            }
        }
        Algebra::new(n, self.label.clone(), &products)
    }

    /// Block-diagonal sum: products within each summand, zero across.
    pub fn direct_sum(&self, other: &Algebra) -> Algebra {
        let n = self.dim;
        let m = other.dim;
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = self.sc(i, j, k);
                    if !c.is_zero() {
                        products.push((i + 1, j + 1, k + 1, c.clone()));
                    }
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let c = other.sc(i, j, k);
                    if !c.is_zero() {
                        products.push((n + i + 1, n + j + 1, n + k + 1, c.clone()));
                    }
                }
            }
        }
        let label = format!("{} (+) {}", self.label, other.label);
        Algebra::new(n + m, label, &products).expect("indices in range by construction")
    }

    /// Smallest product-closed subspace containing the generators, by
    /// closure iteration: adjoin pairwise products and re-reduce until
    /// nothing new appears.
    pub fn generated_subalgebra(&self, gens: &[Vec<Scalar>]) -> Subspace {
        let mut span = Subspace::from_vectors(self.dim, gens.to_vec());
        loop {
            let grown = span.sum(&self.subspace_product(&span, &span));
            if grown == span {
                return span;
            }
            span = grown;
        }
    }

    /// Nonzero products as 1-based (i, j, k, coefficient) tuples, in
    /// lexicographic order.
    pub fn nonzero_products(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = self.sc(i, j, k);
                    if !c.is_zero() {
                        out.push((i + 1, j + 1, k + 1, c.clone()));
                    }
                }
            }
        }
        out
    }

    /// Renders the algebra file format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "dim {}", self.dim).unwrap();
        if !self.label.is_empty() {
            writeln!(out, "label {}", self.label).unwrap();
        }
        writeln!(out, "# e_i e_j = coeff * e_k").unwrap();
        for (i, j, k, c) in self.nonzero_products() {
            writeln!(out, "{i} {j} -> {k} : {c}").unwrap();
        }
        out
    }
}

/// Parses the algebra file format:
///
/// ```text
/// dim 3
/// label As_3_2
/// # e_i e_j = coeff * e_k
/// 1 3 -> 2 : 1
/// 3 1 -> 2 : 2
/// ```
impl FromStr for Algebra {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut dim = None;
        let mut label = String::new();
        let mut products = Vec::new();
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| AlgebraError::Parse(format!("line {}: {msg}", lineno + 1));
            if let Some(rest) = line.strip_prefix("dim ") {
                dim = Some(
                    rest.trim()
                        .parse::<usize>()
                        .map_err(|_| err("bad dimension"))?,
                );
            } else if let Some(rest) = line.strip_prefix("label ") {
                label = rest.trim().to_string();
            } else {
                // `i j -> k : scalar`
                let (lhs, scalar_text) = line.split_once(':').ok_or_else(|| err("missing `:`"))?;
                let (idx_part, target) = lhs.split_once("->").ok_or_else(|| err("missing `->`"))?;
                let mut idx = idx_part.split_whitespace();
                let i: usize = idx
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err("bad left index"))?;
                let j: usize = idx
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err("bad right index"))?;
                if idx.next().is_some() {
                    return Err(err("too many indices"));
                }
                let k: usize = target
                    .trim()
                    .parse()
                    .map_err(|_| err("bad target index"))?;
                let coeff: Scalar = scalar_text
                    .trim()
                    .parse()
                    .map_err(|_| err("bad scalar"))?;
                products.push((i, j, k, coeff));
            }
        }
        let dim = dim.ok_or_else(|| AlgebraError::Parse("missing `dim` line".into()))?;
        Algebra::new(dim, label, &products)
    }
}

/// Renders an element as a combination of basis vectors, e.g. `e1-e2` or
/// `1/2*e1+e3`; the zero element renders as `0`.
pub fn element_to_string(v: &[Scalar]) -> String {
    let mut out = String::new();
    for (idx, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = if c.is_one() {
            format!("e{}", idx + 1)
        } else if (-c).is_one() {
            format!("-e{}", idx + 1)
        } else {
            format!("{}*e{}", c, idx + 1)
        };
        if out.is_empty() {
            out.push_str(&term);
        } else if term.starts_with('-') {
            out.push_str(&term);
        } else {
            out.push('+');
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    fn as21() -> Algebra {
        Algebra::new(2, "As_2_1", &[(1, 1, 2, Scalar::one())]).unwrap()
    }

    fn as24() -> Algebra {
        Algebra::new(
            2,
            "As_2_4",
            &[
                (1, 1, 1, Scalar::one()),
                (1, 2, 2, Scalar::one()),
                (2, 1, 2, Scalar::one()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn make_algebra_validates() {
        assert!(matches!(
            Algebra::new(2, "", &[(1, 3, 2, Scalar::one())]),
            Err(AlgebraError::IndexOutOfRange { index: 3, .. })
        ));
        assert!(matches!(
            Algebra::new(2, "", &[(1, 1, 2, Scalar::one()), (1, 1, 2, Scalar::one())]),
            Err(AlgebraError::DuplicateProduct { .. })
        ));
        let zero = Algebra::zero_algebra(3, "Z");
        assert!(zero.nonzero_products().is_empty());
    }

    #[test]
    fn basis_products_follow_the_table() {
        let a = as21();
        let e1 = a.basis_element(0);
        assert_eq!(a.mul(&e1, &e1), a.basis_element(1));
        assert_eq!(a.mul(&a.zero_element(), &e1), a.zero_element());
        // (e1+e2)² = e2: every other product vanishes
        let x = vec![s("1"), s("1")];
        assert_eq!(a.mul(&x, &x), a.basis_element(1));
    }

    #[test]
    fn multiply_checks_dimensions() {
        let a = as21();
        assert!(matches!(
            a.multiply(&[Scalar::one()], &a.basis_element(0)),
            Err(AlgebraError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn associativity_witness_reports_first_violation() {
        assert!(as21().is_associative());
        assert!(Algebra::zero_algebra(3, "Z").is_associative());
        // e1e1=e1, e1e2=e2, e2e1=e1 fails at (2,1,2): (e2e1)e2=e2, e2(e1e2)=e1
        let bad = Algebra::new(
            2,
            "bad",
            &[
                (1, 1, 1, Scalar::one()),
                (1, 2, 2, Scalar::one()),
                (2, 1, 1, Scalar::one()),
            ],
        )
        .unwrap();
        let w = bad.associativity_witness().unwrap();
        assert_eq!(w.triple, (2, 1, 2));
        assert_eq!(w.lhs, bad.basis_element(1));
        assert_eq!(w.rhs, bad.zero_element());
    }

    #[test]
    fn power_chain_dims() {
        let dims = |a: &Algebra| -> Vec<usize> {
            a.power_chain().iter().map(Subspace::dim).collect()
        };
        assert_eq!(dims(&as21()), vec![2, 1, 0]);
        assert_eq!(dims(&as24()), vec![2, 2]);
        // As_3_3: e1e1=e2, e1e2=e3, e2e1=e3 -> dims 3,2,1,0
        let a33 = Algebra::new(
            3,
            "As_3_3",
            &[
                (1, 1, 2, Scalar::one()),
                (1, 2, 3, Scalar::one()),
                (2, 1, 3, Scalar::one()),
            ],
        )
        .unwrap();
        assert_eq!(dims(&a33), vec![3, 2, 1, 0]);
    }

    #[test]
    fn power_chain_is_monotone_and_stabilizes() {
        for a in [as21(), as24(), Algebra::zero_algebra(3, "Z")] {
            let chain = a.power_chain();
            for w in chain.windows(2) {
                assert!(w[0].contains_subspace(&w[1]));
            }
            // one extra step beyond the returned chain stays put
            let last = chain.last().unwrap();
            let extra = a.subspace_product(&Subspace::full(a.dim()), last);
            assert_eq!(&extra, last);
        }
    }

    #[test]
    fn change_basis_round_trip() {
        let a = as21();
        let p: Matrix = "1 1\n0 1".parse().unwrap();
        let b = a.change_basis(&p).unwrap();
        assert!(b.is_associative());
        let p_inv = p.invert().unwrap().unwrap();
        assert_eq!(b.change_basis(&p_inv).unwrap(), a);
        assert_eq!(a.change_basis(&Matrix::identity(2)).unwrap(), a);
        let singular: Matrix = "1 1\n1 1".parse().unwrap();
        assert_eq!(
            a.change_basis(&singular),
            Err(AlgebraError::SingularMatrix)
        );
    }

    #[test]
    fn direct_sum_blocks() {
        let field = Algebra::new(1, "F", &[(1, 1, 1, Scalar::one())]).unwrap();
        let sum = as21().direct_sum(&field);
        assert_eq!(sum.dim(), 3);
        assert!(sum.is_associative());
        assert_eq!(
            sum.nonzero_products(),
            vec![(1, 1, 2, Scalar::one()), (3, 3, 3, Scalar::one())]
        );
        let e1 = sum.basis_element(0);
        let e3 = sum.basis_element(2);
        assert_eq!(sum.mul(&e1, &e3), sum.zero_element());
    }

    #[test]
    fn generated_subalgebra_is_closed() {
        let a33 = Algebra::new(
            3,
            "As_3_3",
            &[
                (1, 1, 2, Scalar::one()),
                (1, 2, 3, Scalar::one()),
                (2, 1, 3, Scalar::one()),
            ],
        )
        .unwrap();
        let gen = a33.generated_subalgebra(&[a33.basis_element(0)]);
        assert_eq!(gen.dim(), 3);
        let sq = a33.subspace_product(&gen, &gen);
        assert!(gen.contains_subspace(&sq));
    }

    #[test]
    fn file_format_round_trip() {
        let a = Algebra::new(
            3,
            "As_3_2",
            &[(1, 3, 2, Scalar::one()), (3, 1, 2, s("2"))],
        )
        .unwrap();
        let text = a.to_file_string();
        let back: Algebra = text.parse().unwrap();
        assert_eq!(a, back);
        let bad = "label no_dim\n1 1 -> 1 : 1";
        assert!(bad.parse::<Algebra>().is_err());
    }

    #[test]
    fn element_rendering() {
        assert_eq!(element_to_string(&[s("1"), s("-1"), s("0")]), "e1-e2");
        assert_eq!(element_to_string(&[s("0"), s("1/2"), s("1")]), "1/2*e2+e3");
        assert_eq!(element_to_string(&[s("0"), s("0")]), "0");
    }
}
