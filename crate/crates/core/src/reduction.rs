//! Reduction of symmetric invertible matrices to their standard congruence
//! form, always carrying an exact invertible witness.
//!
//! The pipeline:
//!
//! 1. [`diagonalize`] — congruence-diagonalize with unit pivots;
//! 2. [`normalize_diagonal`] — scale each diagonal unit into its square
//!    class representative (`1` or the canonical non-square `z`) and sort;
//! 3. [`collapse_z_pairs`] — turn `z I_{2k}` into `I_{2k}` via explicit
//!    2x2 blocks, leaving `I_n` or `I_{n-1} + (z)` (the two type forms);
//! 4. [`hyperbolize`] — convert the type form into `H_{2nu} + Delta`,
//!    branching on the squareness of `-1` and the relevant parities.
//!
//! [`reduce`] composes all four; [`classify`] reads the answer off the
//! determinant square class without constructing a witness.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::localring::{canonical_nonsquare, RingContext, RingElement};
use crate::matrix::Matrix;

/// Shape of the trailing block `Delta` in the standard form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeltaKind {
    /// `Delta` is empty (even rank, fully hyperbolic).
    None,
    /// `Delta = (1)`.
    One,
    /// `Delta = (z)`.
    Z,
    /// `Delta = diag(1, -z)`.
    DiagOneNegZ,
}

impl DeltaKind {
    pub fn delta(self) -> usize {
        match self {
            DeltaKind::None => 0,
            DeltaKind::One | DeltaKind::Z => 1,
            DeltaKind::DiagOneNegZ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DeltaKind::None => "NONE",
            DeltaKind::One => "ONE",
            DeltaKind::Z => "Z",
            DeltaKind::DiagOneNegZ => "DIAG_1_NEG_Z",
        }
    }
}

/// The invariant triple `(nu, delta, Delta-kind)` over a fixed ring; the
/// standard matrix `H_{2nu} + Delta` is determined by it together with the
/// ring's canonical non-square unit.
#[derive(Clone, PartialEq, Eq)]
pub struct StandardForm {
    ctx: Arc<RingContext>,
    nu: usize,
    delta_kind: DeltaKind,
}

impl fmt::Debug for StandardForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "StandardForm(nu={}, delta={}, kind={}, over {})",
            self.nu,
            self.delta(),
            self.delta_kind.name(),
            self.ctx
        )
    }
}

impl StandardForm {
    pub fn new(ctx: &Arc<RingContext>, nu: usize, delta_kind: DeltaKind) -> Self {
        Self {
            ctx: Arc::clone(ctx),
            nu,
            delta_kind,
        }
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn delta(&self) -> usize {
        self.delta_kind.delta()
    }

    pub fn delta_kind(&self) -> DeltaKind {
        self.delta_kind
    }

    /// Matrix rank `n = 2 nu + delta`.
    pub fn rank(&self) -> usize {
        2 * self.nu + self.delta()
    }

    /// The ring's canonical non-square unit used in `Delta`.
    pub fn z(&self) -> RingElement {
        canonical_nonsquare(&self.ctx)
    }
}

/// Intermediate two-class form: `I_n` or `I_{n-1} + (z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TypeKind {
    Identity,
    IdentityZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeForm {
    pub kind: TypeKind,
    pub n: usize,
}

/// A classification together with its certificate: `witness * S * witness^T
/// = target` exactly, and the witness is invertible.
#[derive(Clone, Debug)]
pub struct ReductionWitness {
    form: StandardForm,
    witness: Matrix,
    target: Matrix,
}

impl ReductionWitness {
    pub fn form(&self) -> &StandardForm {
        &self.form
    }

    pub fn witness(&self) -> &Matrix {
        &self.witness
    }

    pub fn target(&self) -> &Matrix {
        &self.target
    }

    /// Re-multiply against the original input.
    pub fn verify(&self, s: &Matrix) -> bool {
        self.witness.is_invertible() && self.witness.congruence(s) == self.target
    }
}

/// The standard matrix `H_{2nu} + Delta`.
pub fn standard_matrix(form: &StandardForm) -> Matrix {
    let ctx = form.ring();
    let h = Matrix::hyperbolic(ctx, form.nu());
    let one = RingElement::one(ctx);
    let z = form.z();
    match form.delta_kind() {
        DeltaKind::None => h,
        DeltaKind::One => h.direct_sum(&Matrix::diagonal(ctx, &[one])),
        DeltaKind::Z => h.direct_sum(&Matrix::diagonal(ctx, &[z])),
        DeltaKind::DiagOneNegZ => h.direct_sum(&Matrix::diagonal(ctx, &[one, z.neg()])),
    }
}

/// The matrix of a type form: `I_n` or `I_{n-1} + (z)`.
pub fn type_matrix(ctx: &Arc<RingContext>, t: &TypeForm) -> Matrix {
    let mut m = Matrix::identity(ctx, t.n);
    if t.kind == TypeKind::IdentityZ {
        m.set(t.n - 1, t.n - 1, canonical_nonsquare(ctx));
    }
    m
}

/// The two standard forms realizable at rank `n`.
pub fn realizable_forms(ctx: &Arc<RingContext>, n: usize) -> [StandardForm; 2] {
    assert!(n >= 1);
    if n.is_multiple_of(2) {
        [
            StandardForm::new(ctx, n / 2, DeltaKind::None),
            StandardForm::new(ctx, n / 2 - 1, DeltaKind::DiagOneNegZ),
        ]
    } else {
        [
            StandardForm::new(ctx, (n - 1) / 2, DeltaKind::One),
            StandardForm::new(ctx, (n - 1) / 2, DeltaKind::Z),
        ]
    }
}

fn check_symmetric_invertible(s: &Matrix) -> Result<()> {
    if s.n_rows() == 0 {
        return Err(Error::Dimension("rank must be at least 1".into()));
    }
    if !s.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !s.det()?.is_unit() {
        return Err(Error::NotInvertible);
    }
    Ok(())
}

/// Congruence diagonalization with unit pivots: returns `(P, D)` with
/// `P S P^T = D` diagonal and every diagonal entry a unit.
///
/// Pivot policy, deterministic: prefer the smallest-index unit on the
/// diagonal of the trailing block; otherwise take the smallest `(j, k)`
/// unit off-diagonal entry and add row/column `k` into `j`, which makes
/// position `(j, j)` equal `m1 + 2u + m2`, a unit since `2u` is a unit and
/// `m1 + m2` lies in the maximal ideal.
pub fn diagonalize(s: &Matrix) -> Result<(Matrix, Matrix)> {
    check_symmetric_invertible(s)?;
    let ctx = s.ring();
    let n = s.n_rows();
    let one = RingElement::one(ctx);
    let mut a = s.clone();
    let mut p = Matrix::identity(ctx, n);
    for i in 0..n {
        let diag_pivot = (i..n).find(|&j| a.get(j, j).is_unit());
        match diag_pivot {
            Some(j) => {
                if j != i {
                    a.sym_swap(i, j);
                    p.swap_rows(i, j);
                }
            }
            None => {
                let mut found = None;
                'scan: for j in i..n {
                    for k in j + 1..n {
                        if a.get(j, k).is_unit() {
                            found = Some((j, k));
                            break 'scan;
                        }
                    }
                }
                let (j, k) = found.expect("invertible input has a unit pivot");
                a.sym_add(j, k, &one);
                p.add_row_multiple(j, k, &one);
                debug_assert!(a.get(j, j).is_unit());
                if j != i {
                    a.sym_swap(i, j);
                    p.swap_rows(i, j);
                }
            }
        }
        let d_inv = a.get(i, i).inv().expect("pivot is a unit");
        for j in i + 1..n {
            if a.get(j, i).is_zero() {
                continue;
            }
            let c = a.get(j, i).mul(&d_inv).neg();
            a.sym_add(j, i, &c);
            p.add_row_multiple(j, i, &c);
        }
    }
    debug_assert!((0..n).all(|i| a.get(i, i).is_unit()));
    debug_assert!((0..n).all(|i| (0..n).all(|j| i == j || a.get(i, j).is_zero())));
    Ok((p, a))
}

/// Normalize a unit diagonal into `I_r + z I_{n-r}`: each square class
/// entry is scaled to exactly `1`, each non-square to exactly `z`, then a
/// stable permutation moves the squares in front. Returns `(P, r)`.
pub fn normalize_diagonal(d: &Matrix) -> Result<(Matrix, usize)> {
    let ctx = d.ring();
    let n = d.n_rows();
    if !d.is_square() {
        return Err(Error::Dimension("diagonal input must be square".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && !d.get(i, j).is_zero() {
                return Err(Error::Dimension("input is not diagonal".into()));
            }
        }
        if !d.get(i, i).is_unit() {
            return Err(Error::NotInvertible);
        }
    }
    let z = canonical_nonsquare(ctx);
    let z_inv = z.inv().expect("z is a unit");
    let mut scales = Vec::with_capacity(n);
    let mut is_square = Vec::with_capacity(n);
    for i in 0..n {
        let u = d.get(i, i);
        if u.is_square_unit()? {
            // u = w^2, scale by w^{-1}
            scales.push(u.sqrt_unit()?.inv()?);
            is_square.push(true);
        } else {
            // u = z w^2, scale by w^{-1}
            let w = u.mul(&z_inv).sqrt_unit()?;
            scales.push(w.inv()?);
            is_square.push(false);
        }
    }
    let p_scale = Matrix::diagonal(ctx, &scales);
    let mut perm: Vec<usize> = (0..n).filter(|&i| is_square[i]).collect();
    let r = perm.len();
    perm.extend((0..n).filter(|&i| !is_square[i]));
    let p = Matrix::permutation(ctx, &perm).mul(&p_scale);
    Ok((p, r))
}

/// A 2x2 block `B` with `B B^T = z I_2` for the canonical non-square `z`.
/// Two constructions, branching on the squareness of `-1`: with `-1 = u^2`,
/// `B = 2^{-1} [[1+z, u^{-1}(1-z)], [u(1-z), 1+z]]`; otherwise write
/// `z = (1 + x^2) y^2` and take `B = [[xy, y], [-y, xy]]`.
pub fn z_scaling_block(ctx: &Arc<RingContext>) -> Matrix {
    let z = canonical_nonsquare(ctx);
    scaling_block(ctx, &z)
}

/// Same as [`z_scaling_block`] but for an arbitrary non-square unit `w`:
/// returns `B` with `B B^T = w I_2`. When `-1` is a non-square this needs
/// `w`'s decomposition, which exists exactly then; when `-1 = u^2` the
/// closed formula applies to any unit `w`.
fn scaling_block(ctx: &Arc<RingContext>, w: &RingElement) -> Matrix {
    let one = RingElement::one(ctx);
    if ctx.minus_one_is_square() {
        let u = one.neg().sqrt_unit().expect("-1 is a square here");
        let half = RingElement::from_int(ctx, 2).inv().expect("2 is a unit");
        let a = one.add(w);
        let b = one.sub(w);
        let entries = vec![
            a.clone(),
            u.inv().expect("u is a unit").mul(&b),
            u.mul(&b),
            a,
        ];
        Matrix::new(ctx, 2, 2, entries).scalar_mul(&half)
    } else {
        let (x, y) = w.decompose_nonsquare().expect("w is a non-square unit");
        let xy = x.mul(&y);
        Matrix::new(ctx, 2, 2, vec![xy.clone(), y.clone(), y.neg(), xy])
    }
}

/// Invertible `W` with `W (z I_count) W^T = I_count`, built from 2x2
/// blocks `z^{-1} B` for the block `B` of [`z_scaling_block`]. `count` must
/// be even.
pub fn collapse_z_pairs(ctx: &Arc<RingContext>, count: usize) -> Result<Matrix> {
    if !count.is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "can only collapse an even number of z entries, got {count}"
        )));
    }
    let z_inv = canonical_nonsquare(ctx).inv().expect("z is a unit");
    let block = z_scaling_block(ctx).scalar_mul(&z_inv);
    let mut w = Matrix::zeros(ctx, 0, 0);
    for _ in 0..count / 2 {
        w = w.direct_sum(&block);
    }
    Ok(w)
}

/// Witness `W` sending the pre-hyperbolic diagonal to `H_{2nu}`:
/// `W G W^T = H_{2nu}` where `G = I_{2nu}` when `-1` is a square and
/// `G = I_nu + z I_nu` otherwise.
///
/// Both routes pass through `L = 2 diag(I_nu, -I_nu)`, which the fixed
/// matrix `2^{-1} [[I, -I], [I, I]]` carries onto `H_{2nu}`; exactly one
/// of `2, -2` is a square when `-1` is not, which fixes the sign
/// bookkeeping.
pub fn hyperbolic_witness(ctx: &Arc<RingContext>, nu: usize) -> Matrix {
    if nu == 0 {
        return Matrix::zeros(ctx, 0, 0);
    }
    let one = RingElement::one(ctx);
    let two = RingElement::from_int(ctx, 2);
    let half = two.inv().expect("2 is a unit");
    let i_nu = Matrix::identity(ctx, nu);
    // T3: L = 2 diag(I, -I) -> H
    let mut t3 = Matrix::zeros(ctx, 2 * nu, 2 * nu);
    for i in 0..nu {
        t3.set(i, i, one.clone());
        t3.set(i, nu + i, one.neg());
        t3.set(nu + i, i, one.clone());
        t3.set(nu + i, nu + i, one.clone());
    }
    let t3 = t3.scalar_mul(&half);

    if ctx.minus_one_is_square() {
        let u = one.neg().sqrt_unit().expect("-1 is a square");
        // T1: I_{2nu} -> 2 I_{2nu}
        let t1 = if two.is_square_unit().expect("2 is a unit") {
            Matrix::identity(ctx, 2 * nu).scalar_mul(&two.sqrt_unit().expect("2 is a square"))
        } else {
            // 2 is a non-square: the doubling block gives B B^T = 2 I_2
            let b = scaling_block(ctx, &two);
            let mut w = Matrix::zeros(ctx, 0, 0);
            for _ in 0..nu {
                w = w.direct_sum(&b);
            }
            w
        };
        // T2: 2 I_{2nu} -> diag(2 I, 2 u^2 I) = L
        let t2 = i_nu.direct_sum(&i_nu.scalar_mul(&u));
        t3.mul(&t2).mul(&t1)
    } else {
        let z = canonical_nonsquare(ctx);
        // c with z c^2 = -1: c = sqrt(-z^{-1}), a square since -1 and z are not
        let c = z
            .inv()
            .expect("z is a unit")
            .neg()
            .sqrt_unit()
            .expect("-1/z is a square when both -1 and z are non-squares");
        // Ta: I + z I -> diag(I, -I)
        let ta = i_nu.direct_sum(&i_nu.scalar_mul(&c));
        if two.is_square_unit().expect("2 is a unit") {
            let s = two.sqrt_unit().expect("2 is a square");
            let tb = Matrix::identity(ctx, 2 * nu).scalar_mul(&s);
            t3.mul(&tb).mul(&ta)
        } else {
            // -2 must be the square; scaling gives diag(-2I, 2I), swap blocks
            let s = two.neg().sqrt_unit().expect("-2 is a square here");
            let tb = Matrix::identity(ctx, 2 * nu).scalar_mul(&s);
            let swap = Matrix::hyperbolic(ctx, nu); // [[0, I], [I, 0]] as a permutation
            t3.mul(&swap).mul(&tb).mul(&ta)
        }
    }
}

/// Reduce to the type form: `(P, T)` with `P S P^T` equal to `I_n` or
/// `I_{n-1} + (z)` exactly.
pub fn to_type_form(s: &Matrix) -> Result<(Matrix, TypeForm)> {
    let ctx = s.ring();
    let n = s.n_rows();
    let (p1, d) = diagonalize(s)?;
    let (p2, r) = normalize_diagonal(&d)?;
    let k = n - r;
    let (p3, kind) = if k.is_multiple_of(2) {
        let w = Matrix::identity(ctx, r).direct_sum(&collapse_z_pairs(ctx, k)?);
        (w, TypeKind::Identity)
    } else {
        let w = Matrix::identity(ctx, r)
            .direct_sum(&collapse_z_pairs(ctx, k - 1)?)
            .direct_sum(&Matrix::identity(ctx, 1));
        (w, TypeKind::IdentityZ)
    };
    let p = p3.mul(&p2).mul(&p1);
    Ok((p, TypeForm { kind, n }))
}

/// The standard form that a given type form lands on, keyed on the
/// squareness of `-1` and the relevant parity. Consistent with the
/// determinant square-class invariant: `I_n` goes to the form whose
/// standard matrix has a square-class determinant.
fn target_form(ctx: &Arc<RingContext>, kind: TypeKind, n: usize) -> StandardForm {
    let sq = ctx.minus_one_is_square();
    if n.is_multiple_of(2) {
        let h = n / 2;
        let identity_lands_hyperbolic = sq || h.is_multiple_of(2);
        let take_hyperbolic = match kind {
            TypeKind::Identity => identity_lands_hyperbolic,
            TypeKind::IdentityZ => !identity_lands_hyperbolic,
        };
        if take_hyperbolic {
            StandardForm::new(ctx, h, DeltaKind::None)
        } else {
            StandardForm::new(ctx, h - 1, DeltaKind::DiagOneNegZ)
        }
    } else {
        let v = (n - 1) / 2;
        let identity_lands_one = sq || v.is_multiple_of(2);
        let take_one = match kind {
            TypeKind::Identity => identity_lands_one,
            TypeKind::IdentityZ => !identity_lands_one,
        };
        if take_one {
            StandardForm::new(ctx, v, DeltaKind::One)
        } else {
            StandardForm::new(ctx, v, DeltaKind::Z)
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tag {
    One,
    Z,
}

/// From a type form to the standard form, with witness: `(P, form)` where
/// `P * type_matrix * P^T = standard_matrix(form)`.
pub fn hyperbolize(ctx: &Arc<RingContext>, t: &TypeForm) -> (Matrix, StandardForm) {
    assert!(t.n >= 1);
    let n = t.n;
    let form = target_form(ctx, t.kind, n);
    let nu = form.nu();
    let sq = ctx.minus_one_is_square();
    let tail = form.delta_kind();

    let initial_z = usize::from(t.kind == TypeKind::IdentityZ);
    let needed_z = if sq {
        usize::from(matches!(tail, DeltaKind::Z | DeltaKind::DiagOneNegZ))
    } else {
        nu + usize::from(tail == DeltaKind::Z)
    };
    debug_assert!(needed_z >= initial_z && (needed_z - initial_z) % 2 == 0);
    let k = (needed_z - initial_z) / 2;

    // Step 1: convert the first 2k ones into z's via B I_2 B^T = z I_2.
    let mut w1 = Matrix::zeros(ctx, 0, 0);
    if k > 0 {
        let b = z_scaling_block(ctx);
        for _ in 0..k {
            w1 = w1.direct_sum(&b);
        }
    }
    let w1 = w1.direct_sum(&Matrix::identity(ctx, n - 2 * k));

    let mut tags = Vec::with_capacity(n);
    tags.extend(std::iter::repeat_n(Tag::Z, 2 * k));
    tags.extend(std::iter::repeat_n(Tag::One, n - 2 * k - initial_z));
    tags.extend(std::iter::repeat_n(Tag::Z, initial_z));

    // Step 2: permute into [pair part | tail part].
    let mut target_tags = Vec::with_capacity(n);
    if sq {
        target_tags.extend(std::iter::repeat_n(Tag::One, 2 * nu));
    } else {
        target_tags.extend(std::iter::repeat_n(Tag::One, nu));
        target_tags.extend(std::iter::repeat_n(Tag::Z, nu));
    }
    match tail {
        DeltaKind::None => {}
        DeltaKind::One => target_tags.push(Tag::One),
        DeltaKind::Z => target_tags.push(Tag::Z),
        DeltaKind::DiagOneNegZ => {
            target_tags.push(Tag::One);
            target_tags.push(if sq { Tag::Z } else { Tag::One });
        }
    }
    debug_assert_eq!(target_tags.len(), n);
    let mut ones: Vec<usize> = (0..n).filter(|&i| tags[i] == Tag::One).collect();
    let mut zs: Vec<usize> = (0..n).filter(|&i| tags[i] == Tag::Z).collect();
    ones.reverse();
    zs.reverse();
    let perm: Vec<usize> = target_tags
        .iter()
        .map(|tag| match tag {
            Tag::One => ones.pop().expect("tag counts match"),
            Tag::Z => zs.pop().expect("tag counts match"),
        })
        .collect();
    let pi = Matrix::permutation(ctx, &perm);

    // Step 3: hyperbolic step on the pair part, explicit 2x2 swap on the tail.
    let h_step = hyperbolic_witness(ctx, nu);
    let tail_step = match tail {
        DeltaKind::None => Matrix::zeros(ctx, 0, 0),
        DeltaKind::One | DeltaKind::Z => Matrix::identity(ctx, 1),
        DeltaKind::DiagOneNegZ => {
            let one = RingElement::one(ctx);
            if sq {
                // diag(1, u) sends diag(1, z) to diag(1, u^2 z) = diag(1, -z)
                let u = one.neg().sqrt_unit().expect("-1 is a square");
                Matrix::diagonal(ctx, &[one, u])
            } else {
                // diag(1, c^{-1}) sends I_2 to diag(1, c^{-2}) = diag(1, -z)
                let c = canonical_nonsquare(ctx)
                    .inv()
                    .expect("z is a unit")
                    .neg()
                    .sqrt_unit()
                    .expect("-1/z is a square");
                Matrix::diagonal(ctx, &[one, c.inv().expect("c is a unit")])
            }
        }
    };
    let w2 = h_step.direct_sum(&tail_step);
    let p = w2.mul(&pi).mul(&w1);
    debug_assert_eq!(
        p.congruence(&type_matrix(ctx, t)),
        standard_matrix(&form),
        "hyperbolize witness must land exactly on the standard matrix"
    );
    (p, form)
}

/// Full reduction: `P S P^T = standard_matrix(form)` exactly, with `P`
/// invertible. Inputs already in standard form are fixed points with an
/// identity witness.
pub fn reduce(s: &Matrix) -> Result<ReductionWitness> {
    let ctx = s.ring();
    let form = classify(s)?;
    let target = standard_matrix(&form);
    if *s == target {
        return Ok(ReductionWitness {
            form,
            witness: Matrix::identity(ctx, s.n_rows()),
            target,
        });
    }
    let (pt, t) = to_type_form(s)?;
    let (ph, hform) = hyperbolize(ctx, &t);
    debug_assert_eq!(hform, form, "classification and reduction must agree");
    let witness = ph.mul(&pt);
    debug_assert_eq!(witness.congruence(s), target);
    Ok(ReductionWitness {
        form,
        witness,
        target,
    })
}

/// Witness-free classification via the determinant square class: the type
/// is `Identity` iff `det(S)` is a square unit, and the `(nu, delta,
/// Delta)` table is keyed on the squareness of `-1` and the parities.
/// Always agrees with `reduce(s).form()`.
pub fn classify(s: &Matrix) -> Result<StandardForm> {
    check_symmetric_invertible(s)?;
    let ctx = s.ring();
    let kind = if s.det()?.is_square_unit()? {
        TypeKind::Identity
    } else {
        TypeKind::IdentityZ
    };
    Ok(target_form(ctx, kind, s.n_rows()))
}
