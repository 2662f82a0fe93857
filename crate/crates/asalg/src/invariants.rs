//! Basis-change invariants: annihilators, center, unit, nilpotency, the
//! radical, Wedderburn-style decompositions, commutative-subalgebra search,
//! and the composite [`Fingerprint`].
//!
//! Everything here reduces to exact kernels of linear systems read off the
//! structure constants, so each computed value doubles as a certificate:
//! discrepancies against tabulated claims can always be exhibited by an
//! explicit element.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{element_to_string, Algebra};
use crate::exactnum::{Matrix, Scalar, Subspace};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvariantError {
    /// The radical failed its own cross-validation; this indicates a bug in
    /// the library, never bad input.
    #[error("radical self-check failed: {0}")]
    InternalInconsistency(String),
}

/// {x : x·eⱼ = 0 for all j}, the kernel of the stacked right-multiplication
/// maps.
pub fn left_annihilator(a: &Algebra) -> Subspace {
    let n = a.dim();
    // row for each (j, k): sum_i x_i c[i][j][k] = 0
    let mut rows = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            rows.push((0..n).map(|i| a.sc(i, j, k).clone()).collect());
        }
    }
    Matrix::from_rows(rows).kernel()
}

/// {x : eᵢ·x = 0 for all i}.
pub fn right_annihilator(a: &Algebra) -> Subspace {
    let n = a.dim();
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            rows.push((0..n).map(|j| a.sc(i, j, k).clone()).collect());
        }
    }
    Matrix::from_rows(rows).kernel()
}

pub fn two_sided_annihilator(a: &Algebra) -> Subspace {
    left_annihilator(a).intersect(&right_annihilator(a))
}

/// {x : x·eᵢ = eᵢ·x for all i}.
pub fn center(a: &Algebra) -> Subspace {
    let n = a.dim();
    let mut rows = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            rows.push((0..n).map(|i| a.sc(i, j, k) - a.sc(j, i, k)).collect());
        }
    }
    Matrix::from_rows(rows).kernel()
}

pub fn is_commutative(a: &Algebra) -> bool {
    let n = a.dim();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                if a.sc(i, j, k) != a.sc(j, i, k) {
                    return false;
                }
            }
        }
    }
    true
}

/// The unique two-sided unit, if the defining linear system is consistent.
/// The solve is double-checked by direct multiplication against every basis
/// vector.
pub fn find_unit(a: &Algebra) -> Option<Vec<Scalar>> {
    let n = a.dim();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for j in 0..n {
        for k in 0..n {
            // u e_j = e_j
            rows.push((0..n).map(|i| a.sc(i, j, k).clone()).collect::<Vec<_>>());
            rhs.push(if j == k { Scalar::one() } else { Scalar::zero() });
            // e_j u = e_j
            rows.push((0..n).map(|i| a.sc(j, i, k).clone()).collect::<Vec<_>>());
            rhs.push(if j == k { Scalar::one() } else { Scalar::zero() });
        }
    }
    let u = Matrix::from_rows(rows).solve(&rhs).expect("lengths match")?;
    for j in 0..n {
        let e = a.basis_element(j);
        if a.mul(&u, &e) != e || a.mul(&e, &u) != e {
            return None;
        }
    }
    Some(u)
}

/// Smallest k with Aᵏ = 0, or `None` when the power chain stabilizes at a
/// nonzero subspace.
pub fn nilpotency_index(a: &Algebra) -> Option<usize> {
    let chain = a.power_chain();
    if chain.last().unwrap().is_zero() {
        Some(chain.len())
    } else {
        None
    }
}

/// The unitalization A₁ = A ⊕ ⟨1⟩ as a concrete algebra (the unit is the
/// last basis vector).
pub fn unitalization(a: &Algebra) -> Algebra {
    let n = a.dim();
    let mut products = a.nonzero_products();
    for i in 1..=n {
        products.push((i, n + 1, i, Scalar::one()));
        products.push((n + 1, i, i, Scalar::one()));
    }
    products.push((n + 1, n + 1, n + 1, Scalar::one()));
    Algebra::new(n + 1, format!("{}^1", a.label()), &products).expect("valid indices")
}

fn trace_of_left_mul(a1: &Algebra, z: &[Scalar]) -> Scalar {
    let mut t = Scalar::zero();
    for b in 0..a1.dim() {
        let img = a1.mul(z, &a1.basis_element(b));
        t += &img[b];
    }
    t
}

/// The trace-form matrix τ(eᵢ,eⱼ) = tr(L over A₁ of eᵢeⱼ), restricted to the
/// original basis.
pub fn trace_form(a: &Algebra) -> Matrix {
    let n = a.dim();
    let a1 = unitalization(a);
    Matrix::from_fn(n, n, |i, j| {
        let mut z = a.mul(&a.basis_element(i), &a.basis_element(j));
        z.push(Scalar::zero());
        trace_of_left_mul(&a1, &z)
    })
}

/// The radical by the trace criterion in characteristic zero:
/// rad(A) = {x ∈ A : tr(L over A₁ of x·a) = 0 for every a in a basis of A₁}.
///
/// The result is cross-validated before being returned: it must be a
/// two-sided ideal, nilpotent as a subalgebra, and the trace form induced on
/// a complement must have full rank (semisimple quotient).  A failure is an
/// internal bug, never a statement about the input.
pub fn radical(a: &Algebra) -> Result<Subspace, InvariantError> {
    let n = a.dim();
    let a1 = unitalization(a);
    let embed = |v: &[Scalar]| {
        let mut w = v.to_vec();
        w.push(Scalar::zero());
        w
    };
    let mut rows = Vec::with_capacity(n + 1);
    for b in 0..=n {
        let eb = a1.basis_element(b);
        let row: Vec<Scalar> = (0..n)
            .map(|j| {
                let prod = a1.mul(&embed(&a.basis_element(j)), &eb);
                trace_of_left_mul(&a1, &prod)
            })
            .collect();
        rows.push(row);
    }
    let rad = Matrix::from_rows(rows).kernel();

    // cross-validation
    let full = Subspace::full(n);
    if !rad.contains_subspace(&a.subspace_product(&full, &rad))
        || !rad.contains_subspace(&a.subspace_product(&rad, &full))
    {
        return Err(InvariantError::InternalInconsistency(
            "candidate radical is not a two-sided ideal".into(),
        ));
    }
    if subalgebra_power_dims(a, &rad).last() != Some(&0) {
        return Err(InvariantError::InternalInconsistency(
            "candidate radical is not nilpotent".into(),
        ));
    }
    // complement: extend the radical basis by coordinate vectors, then check
    // the induced trace form has rank n - dim rad
    let mut comp = Vec::new();
    let mut span = rad.clone();
    for i in 0..n {
        let e = a.basis_element(i);
        if !span.contains(&e) {
            span = span.sum(&Subspace::from_vectors(n, vec![e.clone()]));
            comp.push(e);
        }
    }
    let tf = trace_form(a);
    let m = comp.len();
    let induced = Matrix::from_fn(m, m, |r, c| {
        let mut acc = Scalar::zero();
        for (i, xi) in comp[r].iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in comp[c].iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                acc += &(&(xi * yj) * tf.get(i, j));
            }
        }
        acc
    });
    if induced.rank() != m {
        return Err(InvariantError::InternalInconsistency(
            "trace form is degenerate on the complement of the candidate radical".into(),
        ));
    }
    Ok(rad)
}

/// Dims of the chain S¹ ⊇ S² ⊇ … for a subspace treated as a subalgebra
/// (Sᵏ⁺¹ = S·Sᵏ), listed until zero or stabilization.
pub fn subalgebra_power_dims(a: &Algebra, s: &Subspace) -> Vec<usize> {
    let mut dims = vec![s.dim()];
    let mut cur = s.clone();
    while !cur.is_zero() {
        let next = a.subspace_product(s, &cur);
        if next.dim() == cur.dim() {
            dims.push(next.dim());
            break;
        }
        dims.push(next.dim());
        cur = next;
    }
    dims
}

/// A claimed vector-space splitting A = N ∔ S.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedderburnClaim {
    pub n_span: Vec<Vec<Scalar>>,
    pub s_span: Vec<Vec<Scalar>>,
}

#[derive(Debug, Clone)]
pub struct WedderburnReport {
    /// (check name, passed, detail) per sub-check, in a fixed order.
    pub checks: Vec<(&'static str, bool, String)>,
}

impl WedderburnReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok, _)| *ok)
    }

    pub fn first_failure(&self) -> Option<&(&'static str, bool, String)> {
        self.checks.iter().find(|(_, ok, _)| !*ok)
    }
}

/// Checks a claimed decomposition: span(N) must equal the computed radical,
/// span(S) must be product-closed, the spans must intersect trivially and
/// fill the algebra, and S must be semisimple as a standalone algebra.
pub fn verify_wedderburn(a: &Algebra, claim: &WedderburnClaim) -> WedderburnReport {
    let n = a.dim();
    let nspan = Subspace::from_vectors(n, claim.n_span.clone());
    let sspan = Subspace::from_vectors(n, claim.s_span.clone());
    let mut checks = Vec::new();

    let rad = radical(a).expect("radical self-check");
    let rad_ok = nspan == rad;
    checks.push((
        "n_equals_radical",
        rad_ok,
        if rad_ok {
            format!("radical = claimed N, dim {}", rad.dim())
        } else {
            format!(
                "claimed N is {} but the computed radical is {}",
                basis_to_string(&nspan),
                basis_to_string(&rad)
            )
        },
    ));

    let closed = sspan.contains_subspace(&a.subspace_product(&sspan, &sspan));
    checks.push((
        "s_product_closed",
        closed,
        if closed {
            "S is a subalgebra".into()
        } else {
            "S is not closed under the product".into()
        },
    ));

    let meet = nspan.intersect(&sspan);
    checks.push((
        "trivial_intersection",
        meet.is_zero(),
        format!("dim(N meet S) = {}", meet.dim()),
    ));

    let dims_ok = nspan.dim() + sspan.dim() == n;
    checks.push((
        "dims_fill_algebra",
        dims_ok,
        format!("dim N + dim S = {} + {}", nspan.dim(), sspan.dim()),
    ));

    // rad(S as standalone algebra) = 0, when S really is a subalgebra
    let s_semisimple = if closed && !sspan.is_zero() {
        match subalgebra_structure(a, &sspan) {
            Some(s_alg) => radical(&s_alg).map(|r| r.is_zero()).unwrap_or(false),
            None => false,
        }
    } else {
        closed // an empty S is vacuously semisimple
    };
    checks.push((
        "s_semisimple",
        s_semisimple,
        if s_semisimple {
            "rad(S) = 0".into()
        } else {
            "S has a nonzero radical".into()
        },
    ));

    WedderburnReport { checks }
}

/// The structure constants of a product-closed subspace written over its own
/// RREF basis; `None` if the subspace is not closed.
pub fn subalgebra_structure(a: &Algebra, s: &Subspace) -> Option<Algebra> {
    let m = s.dim();
    if m == 0 {
        return Some(Algebra::zero_algebra(0, "0"));
    }
    // columns of b are the basis vectors; products are solved back through b
    let b = Matrix::from_rows(s.basis().to_vec()).transpose();
    let mut products = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let w = a.mul(&s.basis()[i], &s.basis()[j]);
            let coords = b.solve(&w).expect("shape")?;
            for (k, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    products.push((i + 1, j + 1, k + 1, c));
                }
            }
        }
    }
    Algebra::new(m, format!("{}|sub", a.label()), &products).ok()
}

/// Outcome of the commutative-subalgebra search.
#[derive(Debug, Clone)]
pub struct CommSubalgebraReport {
    pub claimed_dim: usize,
    pub found_dim: usize,
    pub witness: Subspace,
    /// True only in the logically forced cases: claimed = n for a
    /// commutative algebra, or claimed = n−1 for a noncommutative one.
    pub upper_bound_proved: bool,
}

pub fn is_commutative_subspace(a: &Algebra, s: &Subspace) -> bool {
    let b = s.basis();
    for (i, u) in b.iter().enumerate() {
        for v in &b[i + 1..] {
            if a.mul(u, v) != a.mul(v, u) {
                return false;
            }
        }
    }
    true
}

pub fn is_closed_subspace(a: &Algebra, s: &Subspace) -> bool {
    s.contains_subspace(&a.subspace_product(s, s))
}

/// Constructive lower bound for the maximal commutative subalgebra
/// dimension: seeds from the center and one-generated subalgebras over a
/// structured candidate pool, then greedy extension.  The bound is a
/// certificate (the witness subspace); the upper bound is only claimed when
/// it is forced.
pub fn max_commutative_subalgebra(a: &Algebra, claimed: usize, seed: u64) -> CommSubalgebraReport {
    let n = a.dim();
    let commutative = is_commutative(a);

    // candidate pool: basis vectors, ±1/0 vectors with ≤2 nonzero
    // coordinates, then seeded-random small rational vectors
    let mut pool: Vec<Vec<Scalar>> = (0..n).map(|i| a.basis_element(i)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            for (si, sj) in [(1, 1), (1, -1)] {
                let mut v = a.zero_element();
                v[i] = Scalar::from_int(si);
                v[j] = Scalar::from_int(sj);
                pool.push(v);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..50 {
        let v: Vec<Scalar> = (0..n)
            .map(|_| match rng.gen_range(0..6) {
                0 => Scalar::from_int(-2),
                1 => Scalar::from_int(-1),
                2 => Scalar::zero(),
                3 => Scalar::from_int(1),
                4 => Scalar::from_int(2),
                _ => Scalar::from_ratio(1, 2),
            })
            .collect();
        if v.iter().any(|c| !c.is_zero()) {
            pool.push(v);
        }
    }

    // a commutative subalgebra of dim n forces commutativity, so the
    // search can stop at n-1 for a noncommutative algebra
    let cap = if commutative { n } else { n - 1 };

    let mut seeds: Vec<Subspace> = Vec::new();
    let c = center(a);
    if is_closed_subspace(a, &c) && is_commutative_subspace(a, &c) {
        seeds.push(c);
    }
    for v in &pool {
        let g = a.generated_subalgebra(std::slice::from_ref(v));
        if !seeds.contains(&g) {
            seeds.push(g);
        }
    }

    let mut best = Subspace::zero(n);
    for seed_space in seeds {
        if !is_commutative_subspace(a, &seed_space) {
            continue;
        }
        let mut cur = seed_space;
        let mut improved = true;
        while improved && cur.dim() < cap {
            improved = false;
            for v in &pool {
                if cur.contains(v) {
                    continue;
                }
                let grown = cur.sum(&Subspace::from_vectors(n, vec![v.clone()]));
                if grown.dim() == cur.dim() {
                    continue;
                }
                if is_closed_subspace(a, &grown) && is_commutative_subspace(a, &grown) {
                    cur = grown;
                    improved = true;
                    if cur.dim() == cap {
                        break;
                    }
                }
            }
        }
        if cur.dim() > best.dim() {
            best = cur;
        }
        if best.dim() == cap {
            break;
        }
    }

    let upper_bound_proved =
        (claimed == n && commutative) || (claimed + 1 == n && !commutative && best.dim() >= claimed);
    CommSubalgebraReport {
        claimed_dim: claimed,
        found_dim: best.dim(),
        witness: best,
        upper_bound_proved,
    }
}

/// Ordered tuple of basis-change invariants used to separate non-isomorphic
/// algebras.  Unequal fingerprints certify non-isomorphism; equal
/// fingerprints prove nothing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub dim: usize,
    pub commutative: bool,
    pub unital: bool,
    pub nilpotency_index: Option<usize>,
    /// dims of A², A³, A⁴ (the stabilized value is repeated past the end of
    /// the chain).
    pub power_dims: [usize; 3],
    pub dim_left_ann: usize,
    pub dim_right_ann: usize,
    pub dim_two_sided_ann: usize,
    pub dim_center: usize,
    pub dim_radical: usize,
    pub radical_power_dims: Vec<usize>,
    /// rank of span{eᵢeⱼ − eⱼeᵢ}
    pub dim_commutator_span: usize,
    pub trace_form_rank: usize,
}

pub fn fingerprint(a: &Algebra) -> Fingerprint {
    let n = a.dim();
    let chain_dims: Vec<usize> = a.power_chain().iter().map(Subspace::dim).collect();
    let at = |k: usize| -> usize { *chain_dims.get(k - 1).unwrap_or(chain_dims.last().unwrap()) };
    let rad = radical(a).expect("radical self-check");
    let mut commutators = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            commutators.push(
                (0..n)
                    .map(|k| a.sc(i, j, k) - a.sc(j, i, k))
                    .collect::<Vec<_>>(),
            );
        }
    }
    Fingerprint {
        dim: n,
        commutative: is_commutative(a),
        unital: find_unit(a).is_some(),
        nilpotency_index: nilpotency_index(a),
        power_dims: [at(2), at(3), at(4)],
        dim_left_ann: left_annihilator(a).dim(),
        dim_right_ann: right_annihilator(a).dim(),
        dim_two_sided_ann: two_sided_annihilator(a).dim(),
        dim_center: center(a).dim(),
        dim_radical: rad.dim(),
        radical_power_dims: subalgebra_power_dims(a, &rad),
        dim_commutator_span: Subspace::from_vectors(n, commutators).dim(),
        trace_form_rank: trace_form(a).rank(),
    }
}

impl Fingerprint {
    /// Name of the first field differing from `other`, for reports.
    pub fn first_difference(&self, other: &Fingerprint) -> Option<&'static str> {
        macro_rules! diff {
            ($($field:ident),*) => {
                $(if self.$field != other.$field { return Some(stringify!($field)); })*
            };
        }
        diff!(
            dim,
            commutative,
            unital,
            nilpotency_index,
            power_dims,
            dim_left_ann,
            dim_right_ann,
            dim_two_sided_ann,
            dim_center,
            dim_radical,
            radical_power_dims,
            dim_commutator_span,
            trace_form_rank
        );
        None
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dim={} commutative={} unital={} nilpotency={} powers={:?} \
             annL={} annR={} ann2={} center={} radical={} rad_powers={:?} \
             commutators={} trace_rank={}",
            self.dim,
            self.commutative,
            self.unital,
            self.nilpotency_index
                .map_or("none".to_string(), |k| k.to_string()),
            self.power_dims,
            self.dim_left_ann,
            self.dim_right_ann,
            self.dim_two_sided_ann,
            self.dim_center,
            self.dim_radical,
            self.radical_power_dims,
            self.dim_commutator_span,
            self.trace_form_rank
        )
    }
}

pub fn basis_to_string(s: &Subspace) -> String {
    if s.is_zero() {
        return "{0}".to_string();
    }
    let parts: Vec<String> = s.basis().iter().map(|v| element_to_string(v)).collect();
    format!("<{}>", parts.join(", "))
}
