//! Dense exact linear algebra over a [`RingContext`].
//!
//! Matrices are immutable values for callers; the in-place row/column
//! operations are crate-internal building blocks for elimination and for
//! the congruence generators of the orbit search. Determinants use the
//! Berkowitz algorithm, which is division-free and therefore sound over
//! rings with zero divisors; inverses use Gauss-Jordan elimination, where
//! a unit pivot always exists for invertible input because the residue
//! image stays invertible over the field.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::localring::{RingContext, RingElement};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ctx: Arc<RingContext>,
    n_rows: usize,
    n_cols: usize,
    entries: Vec<RingElement>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix({}x{} over {})", self.n_rows, self.n_cols, self.ctx)?;
        for i in 0..self.n_rows {
            write!(f, "\n  [")?;
            for j in 0..self.n_cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n_rows {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for j in 0..self.n_cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn new(
        ctx: &Arc<RingContext>,
        n_rows: usize,
        n_cols: usize,
        entries: Vec<RingElement>,
    ) -> Self {
        assert_eq!(entries.len(), n_rows * n_cols, "entry count mismatch");
        debug_assert!(entries.iter().all(|e| e.ring().as_ref() == ctx.as_ref()));
        Self {
            ctx: Arc::clone(ctx),
            n_rows,
            n_cols,
            entries,
        }
    }

    pub fn from_fn(
        ctx: &Arc<RingContext>,
        n_rows: usize,
        n_cols: usize,
        mut f: impl FnMut(usize, usize) -> RingElement,
    ) -> Self {
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                entries.push(f(i, j));
            }
        }
        Self::new(ctx, n_rows, n_cols, entries)
    }

    pub fn zeros(ctx: &Arc<RingContext>, n_rows: usize, n_cols: usize) -> Self {
        let zero = RingElement::zero(ctx);
        Self::new(ctx, n_rows, n_cols, vec![zero; n_rows * n_cols])
    }

    pub fn identity(ctx: &Arc<RingContext>, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        let one = RingElement::one(ctx);
        for i in 0..n {
            m.set(i, i, one.clone());
        }
        m
    }

    pub fn diagonal(ctx: &Arc<RingContext>, diag: &[RingElement]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(ctx, n, n);
        for (i, e) in diag.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    /// The hyperbolic block: identity blocks on the antidiagonal,
    /// size `2 * nu`.
    pub fn hyperbolic(ctx: &Arc<RingContext>, nu: usize) -> Self {
        let mut m = Self::zeros(ctx, 2 * nu, 2 * nu);
        let one = RingElement::one(ctx);
        for i in 0..nu {
            m.set(i, nu + i, one.clone());
            m.set(nu + i, i, one.clone());
        }
        m
    }

    /// Permutation matrix `P` with `P[i][perm[i]] = 1`, so that congruence
    /// by `P` relabels: `(P M P^T)[i][j] = M[perm[i]][perm[j]]`.
    pub fn permutation(ctx: &Arc<RingContext>, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(ctx, n, n);
        let one = RingElement::one(ctx);
        for (i, &p) in perm.iter().enumerate() {
            assert!(p < n, "permutation index out of range");
            m.set(i, p, one.clone());
        }
        m
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, e: RingElement) {
        self.entries[i * self.n_cols + j] = e;
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.n_rows {
            for j in i + 1..self.n_cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert!(
            self.ctx.as_ref() == rhs.ctx.as_ref(),
            "ring context mismatch in matrix product"
        );
        assert_eq!(
            self.n_cols, rhs.n_rows,
            "inner dimensions disagree: {}x{} * {}x{}",
            self.n_rows, self.n_cols, rhs.n_rows, rhs.n_cols
        );
        let mut out = Matrix::zeros(&self.ctx, self.n_rows, rhs.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.n_cols {
                    let t = out.get(i, j).add(&a.mul(rhs.get(k, j)));
                    out.set(i, j, t);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ctx, self.n_cols, self.n_rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn scalar_mul(&self, c: &RingElement) -> Matrix {
        Matrix::from_fn(&self.ctx, self.n_rows, self.n_cols, |i, j| {
            c.mul(self.get(i, j))
        })
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(&self.ctx, self.n_rows, self.n_cols, |i, j| {
            self.get(i, j).neg()
        })
    }

    /// Block-diagonal assembly `diag(self, rhs)`.
    pub fn direct_sum(&self, rhs: &Matrix) -> Matrix {
        assert!(
            self.ctx.as_ref() == rhs.ctx.as_ref(),
            "ring context mismatch in direct sum"
        );
        let mut out = Matrix::zeros(
            &self.ctx,
            self.n_rows + rhs.n_rows,
            self.n_cols + rhs.n_cols,
        );
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..rhs.n_rows {
            for j in 0..rhs.n_cols {
                out.set(self.n_rows + i, self.n_cols + j, rhs.get(i, j).clone());
            }
        }
        out
    }

    /// `self * s * self^T`, the congruence transform by `self`.
    pub fn congruence(&self, s: &Matrix) -> Matrix {
        assert!(self.is_square() && s.is_square() && self.n_rows == s.n_rows,
            "congruence needs matching square matrices");
        self.mul(s).mul(&self.transpose())
    }

    /// Exact determinant. Fast paths for tiny sizes, Berkowitz (division
    /// free) in general.
    pub fn det(&self) -> Result<RingElement> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of {}x{} matrix",
                self.n_rows, self.n_cols
            )));
        }
        let n = self.n_rows;
        Ok(match n {
            0 => RingElement::one(&self.ctx),
            1 => self.get(0, 0).clone(),
            2 => self
                .get(0, 0)
                .mul(self.get(1, 1))
                .sub(&self.get(0, 1).mul(self.get(1, 0))),
            3 => {
                let m = |i: usize, j: usize| self.get(i, j);
                let pos = m(0, 0)
                    .mul(&m(1, 1).mul(m(2, 2)))
                    .add(&m(0, 1).mul(&m(1, 2).mul(m(2, 0))))
                    .add(&m(0, 2).mul(&m(1, 0).mul(m(2, 1))));
                let neg = m(0, 2)
                    .mul(&m(1, 1).mul(m(2, 0)))
                    .add(&m(0, 0).mul(&m(1, 2).mul(m(2, 1))))
                    .add(&m(0, 1).mul(&m(1, 0).mul(m(2, 2))));
                pos.sub(&neg)
            }
            _ => self.det_berkowitz(),
        })
    }

    /// Berkowitz: characteristic polynomial coefficients via iterated
    /// Toeplitz products over leading principal submatrices; the constant
    /// coefficient yields the determinant up to sign.
    fn det_berkowitz(&self) -> RingElement {
        let n = self.n_rows;
        let ctx = &self.ctx;
        let one = RingElement::one(ctx);
        let zero = RingElement::zero(ctx);
        let mut coeffs = vec![one.clone()];
        for m in 1..=n {
            let mut q = Vec::with_capacity(m + 1);
            q.push(one.clone());
            q.push(self.get(m - 1, m - 1).neg());
            if m >= 2 {
                let mut v: Vec<RingElement> =
                    (0..m - 1).map(|i| self.get(i, m - 1).clone()).collect();
                for k in 2..=m {
                    let mut s = zero.clone();
                    for (j, vj) in v.iter().enumerate() {
                        s = s.add(&self.get(m - 1, j).mul(vj));
                    }
                    q.push(s.neg());
                    if k < m {
                        let mut nv = Vec::with_capacity(m - 1);
                        for i in 0..m - 1 {
                            let mut acc = zero.clone();
                            for (j, vj) in v.iter().enumerate() {
                                acc = acc.add(&self.get(i, j).mul(vj));
                            }
                            nv.push(acc);
                        }
                        v = nv;
                    }
                }
            }
            let mut next = vec![zero.clone(); m + 1];
            for (i, qi) in q.iter().enumerate() {
                if qi.is_zero() {
                    continue;
                }
                for (j, cj) in coeffs.iter().enumerate() {
                    if i + j <= m {
                        next[i + j] = next[i + j].add(&qi.mul(cj));
                    }
                }
            }
            coeffs = next;
        }
        if n % 2 == 1 {
            coeffs[n].neg()
        } else {
            coeffs[n].clone()
        }
    }

    /// True iff the determinant is a unit; equivalently the associated
    /// bilinear form is nondegenerate.
    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.det().map(|d| d.is_unit()).unwrap_or(false)
    }

    /// Gauss-Jordan inverse over unit pivots.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.n_rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(&self.ctx, n);
        for col in 0..n {
            let piv = (col..n)
                .find(|&i| a.get(i, col).is_unit())
                .ok_or(Error::NotInvertible)?;
            if piv != col {
                a.swap_rows(piv, col);
                inv.swap_rows(piv, col);
            }
            let d = a.get(col, col).inv().expect("pivot is a unit");
            a.scale_row(col, &d);
            inv.scale_row(col, &d);
            for i in 0..n {
                if i == col || a.get(i, col).is_zero() {
                    continue;
                }
                let c = a.get(i, col).neg();
                a.add_row_multiple(i, col, &c);
                inv.add_row_multiple(i, col, &c);
            }
        }
        Ok(inv)
    }

    // --- in-place row/column operations ---

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.n_cols {
            self.entries.swap(i * self.n_cols + k, j * self.n_cols + k);
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, c: &RingElement) {
        for k in 0..self.n_cols {
            let t = self.get(i, k).mul(c);
            self.set(i, k, t);
        }
    }

    /// `row_i += c * row_j`
    pub(crate) fn add_row_multiple(&mut self, i: usize, j: usize, c: &RingElement) {
        for k in 0..self.n_cols {
            let t = self.get(i, k).add(&c.mul(self.get(j, k)));
            self.set(i, k, t);
        }
    }

    // Symmetric congruence updates: apply the row operation and the matching
    // column operation, i.e. `self <- E self E^T` for the elementary `E`.

    pub(crate) fn sym_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.swap_rows(i, j);
        for k in 0..self.n_rows {
            self.entries.swap(k * self.n_cols + i, k * self.n_cols + j);
        }
    }

    /// `E = I + c e_{ij}`: row_i += c row_j, then col_i += c col_j.
    pub(crate) fn sym_add(&mut self, i: usize, j: usize, c: &RingElement) {
        self.add_row_multiple(i, j, c);
        for k in 0..self.n_rows {
            let t = self.get(k, i).add(&c.mul(self.get(k, j)));
            self.set(k, i, t);
        }
    }

    /// `E = diag(..., c at i, ...)`: scales row i and column i.
    pub(crate) fn sym_scale(&mut self, i: usize, c: &RingElement) {
        self.scale_row(i, c);
        for k in 0..self.n_rows {
            let t = self.get(k, i).mul(c);
            self.set(k, i, t);
        }
    }
}

fn random_element<R: rand::Rng>(ctx: &Arc<RingContext>, rng: &mut R) -> RingElement {
    RingElement::from_index(ctx, rng.random_range(0..ctx.card()))
}

fn random_unit<R: rand::Rng>(ctx: &Arc<RingContext>, rng: &mut R) -> RingElement {
    loop {
        let e = random_element(ctx, rng);
        if e.is_unit() {
            return e;
        }
    }
}

/// A random symmetric matrix with unit determinant: `E D E^T` for a random
/// unit diagonal `D` and a random product `E` of elementary congruence
/// operations. Deterministic for a fixed generator state.
pub fn random_symmetric_invertible(
    ctx: &Arc<RingContext>,
    n: usize,
    rng: &mut impl rand::Rng,
) -> Matrix {
    assert!(n >= 1);
    let diag: Vec<RingElement> = (0..n).map(|_| random_unit(ctx, rng)).collect();
    let mut m = Matrix::diagonal(ctx, &diag);
    for _ in 0..3 * n + 4 {
        match rng.random_range(0..3u32) {
            0 => {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                m.sym_swap(i, j);
            }
            1 => {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                if i != j {
                    let c = random_element(ctx, rng);
                    m.sym_add(i, j, &c);
                }
            }
            _ => {
                let i = rng.random_range(0..n);
                let u = random_unit(ctx, rng);
                m.sym_scale(i, &u);
            }
        }
    }
    debug_assert!(m.is_symmetric() && m.is_invertible());
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::canonical_nonsquare;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(spec: &str) -> Arc<RingContext> {
        RingContext::from_spec(spec).unwrap()
    }

    fn m(ctx: &Arc<RingContext>, n: usize, vals: &[i64]) -> Matrix {
        Matrix::from_fn(ctx, n, n, |i, j| RingElement::from_int(ctx, vals[i * n + j]))
    }

    fn rand_matrix(ctx: &Arc<RingContext>, n: usize, rng: &mut impl Rng) -> Matrix {
        let card = ctx.card();
        Matrix::from_fn(ctx, n, n, |_, _| {
            RingElement::from_index(ctx, rng.random_range(0..card))
        })
    }

    /// Independent oracle: cofactor expansion along the first row.
    fn det_cofactor(a: &Matrix) -> RingElement {
        let n = a.n_rows();
        if n == 0 {
            return RingElement::one(a.ring());
        }
        if n == 1 {
            return a.get(0, 0).clone();
        }
        let mut acc = RingElement::zero(a.ring());
        for j in 0..n {
            let minor = Matrix::from_fn(a.ring(), n - 1, n - 1, |r, c| {
                a.get(r + 1, if c < j { c } else { c + 1 }).clone()
            });
            let term = a.get(0, j).mul(&det_cofactor(&minor));
            acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    #[test]
    fn identity_is_neutral() {
        let z3 = ctx("zmod:3");
        let a = m(&z3, 2, &[1, 2, 0, 1]);
        let i2 = Matrix::identity(&z3, 2);
        assert_eq!(i2.mul(&a), a);
        assert_eq!(a.mul(&i2), a);
    }

    #[test]
    fn product_frozen_values() {
        let z3 = ctx("zmod:3");
        let a = m(&z3, 2, &[1, 1, 2, 1]);
        let b = m(&z3, 2, &[1, 2, 1, 1]);
        assert_eq!(a.mul(&b), m(&z3, 2, &[2, 0, 0, 2]));

        let z9 = ctx("zmod:3^2");
        let two = m(&z9, 2, &[2, 0, 0, 2]);
        let five = m(&z9, 2, &[5, 0, 0, 5]);
        assert_eq!(two.mul(&five), Matrix::identity(&z9, 2));
    }

    #[test]
    fn transpose_basics() {
        let z3 = ctx("zmod:3");
        let i3 = Matrix::identity(&z3, 3);
        assert_eq!(i3.transpose(), i3);
        let a = m(&z3, 2, &[0, 1, 0, 0]);
        assert_eq!(a.transpose(), m(&z3, 2, &[0, 0, 1, 0]));
        let s = m(&z3, 2, &[1, 2, 2, 0]);
        assert_eq!(s.transpose(), s);
    }

    #[test]
    fn det_frozen_values() {
        let z9 = ctx("zmod:3^2");
        assert!(Matrix::identity(&z9, 4).det().unwrap().is_one());
        let h2 = Matrix::hyperbolic(&z9, 1);
        assert_eq!(h2.det().unwrap(), RingElement::from_int(&z9, -1));
        let a = m(&z9, 2, &[1, 3, 3, 2]);
        assert_eq!(a.det().unwrap(), RingElement::from_int(&z9, 2));
    }

    #[test]
    fn det_matches_cofactor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in ["zmod:3^2", "zmod:5", "gr:3^2:2", "trunc:3:2:2"] {
            let c = ctx(spec);
            for n in 1..=4 {
                for _ in 0..20 {
                    let a = rand_matrix(&c, n, &mut rng);
                    assert_eq!(a.det().unwrap(), det_cofactor(&a), "{spec}, n={n}");
                }
            }
        }
    }

    #[test]
    fn berkowitz_path_matches_cofactor() {
        // n >= 4 exercises the Berkowitz branch directly
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for spec in ["zmod:3^2", "gr:3:2"] {
            let c = ctx(spec);
            for _ in 0..10 {
                let a = rand_matrix(&c, 5, &mut rng);
                assert_eq!(a.det_berkowitz(), det_cofactor(&a), "{spec}");
            }
        }
    }

    #[test]
    fn det_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for spec in ["zmod:3^3", "gr:3^2:2", "trunc:3:1:3"] {
            let c = ctx(spec);
            for n in 1..=4 {
                for _ in 0..10 {
                    let a = rand_matrix(&c, n, &mut rng);
                    let b = rand_matrix(&c, n, &mut rng);
                    assert_eq!(
                        a.mul(&b).det().unwrap(),
                        a.det().unwrap().mul(&b.det().unwrap()),
                        "{spec}, n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn invertibility_frozen_values() {
        let z9 = ctx("zmod:3^2");
        assert!(Matrix::identity(&z9, 3).is_invertible());
        assert!(!m(&z9, 2, &[3, 0, 0, 1]).is_invertible());
        assert!(m(&z9, 2, &[1, 3, 3, 2]).is_invertible());
    }

    #[test]
    fn inverse_contract() {
        let z3 = ctx("zmod:3");
        let a = m(&z3, 2, &[2, 0, 0, 1]);
        assert_eq!(a.inverse().unwrap(), a);

        let z9 = ctx("zmod:3^2");
        let b = m(&z9, 2, &[1, 3, 3, 2]);
        let binv = b.inverse().unwrap();
        assert_eq!(b.mul(&binv), Matrix::identity(&z9, 2));
        assert_eq!(binv.mul(&b), Matrix::identity(&z9, 2));

        assert!(matches!(
            m(&z9, 2, &[3, 0, 0, 1]).inverse(),
            Err(Error::NotInvertible)
        ));
    }

    #[test]
    fn inverse_random_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for spec in ["zmod:3^2", "gr:3:2", "trunc:3:1:2"] {
            let c = ctx(spec);
            let mut found = 0;
            while found < 10 {
                let a = rand_matrix(&c, 3, &mut rng);
                if !a.is_invertible() {
                    continue;
                }
                found += 1;
                let ainv = a.inverse().unwrap();
                assert_eq!(a.mul(&ainv), Matrix::identity(&c, 3), "{spec}");
                assert_eq!(ainv.mul(&a), Matrix::identity(&c, 3), "{spec}");
            }
        }
    }

    #[test]
    fn direct_sum_shapes() {
        let z5 = ctx("zmod:5");
        let i1 = Matrix::identity(&z5, 1);
        assert_eq!(i1.direct_sum(&i1), Matrix::identity(&z5, 2));

        let zc = canonical_nonsquare(&z5);
        let dz = Matrix::diagonal(&z5, &[RingElement::one(&z5), zc.clone()]);
        let got = Matrix::new(&z5, 1, 1, vec![RingElement::one(&z5)])
            .direct_sum(&Matrix::new(&z5, 1, 1, vec![zc]));
        assert_eq!(got, dz);

        let h2 = Matrix::hyperbolic(&z5, 1);
        let s = h2.direct_sum(&i1);
        assert_eq!(s.n_rows(), 3);
        assert_eq!(s.get(0, 1), &RingElement::one(&z5));
        assert_eq!(s.get(2, 2), &RingElement::one(&z5));
        assert!(s.get(0, 2).is_zero());
    }

    #[test]
    fn congruence_frozen_values() {
        let z3 = ctx("zmod:3");
        let s = m(&z3, 2, &[1, 2, 2, 0]);
        let i2 = Matrix::identity(&z3, 2);
        assert_eq!(i2.congruence(&s), s);

        let p = m(&z3, 2, &[1, 1, 2, 1]);
        assert_eq!(p.congruence(&i2), m(&z3, 2, &[2, 0, 0, 2]));

        // (cI) S (cI)^T = c^2 S
        let z9 = ctx("zmod:3^2");
        let s9 = m(&z9, 2, &[1, 3, 3, 2]);
        let c = RingElement::from_int(&z9, 4);
        let ci = Matrix::identity(&z9, 2).scalar_mul(&c);
        assert_eq!(ci.congruence(&s9), s9.scalar_mul(&c.mul(&c)));
    }

    #[test]
    fn congruence_preserves_symmetry_and_det_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for spec in ["zmod:3^2", "gr:3:2"] {
            let c = ctx(spec);
            for _ in 0..20 {
                let mut s = rand_matrix(&c, 3, &mut rng);
                // symmetrize
                for i in 0..3 {
                    for j in 0..i {
                        s.set(i, j, s.get(j, i).clone());
                    }
                }
                let p = rand_matrix(&c, 3, &mut rng);
                let t = p.congruence(&s);
                assert!(t.is_symmetric(), "{spec}");
                // det(P S P^T) = det(P)^2 det(S)
                let dp = p.det().unwrap();
                assert_eq!(
                    t.det().unwrap(),
                    dp.mul(&dp).mul(&s.det().unwrap()),
                    "{spec}"
                );
            }
        }
    }

    #[test]
    fn permutation_congruence_relabels() {
        let z5 = ctx("zmod:5");
        let s = m(&z5, 3, &[0, 1, 2, 1, 3, 4, 2, 4, 1]);
        let perm = [2usize, 0, 1];
        let p = Matrix::permutation(&z5, &perm);
        let t = p.congruence(&s);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(t.get(i, j), s.get(perm[i], perm[j]));
            }
        }
    }

    #[test]
    fn sym_ops_match_explicit_congruence() {
        let z9 = ctx("zmod:3^2");
        let s = m(&z9, 3, &[1, 3, 0, 3, 2, 1, 0, 1, 5]);

        let mut a = s.clone();
        a.sym_swap(0, 2);
        let e = Matrix::permutation(&z9, &[2, 1, 0]);
        assert_eq!(a, e.congruence(&s));

        let mut b = s.clone();
        let c = RingElement::from_int(&z9, 7);
        b.sym_add(0, 1, &c);
        let mut e = Matrix::identity(&z9, 3);
        e.set(0, 1, c.clone());
        assert_eq!(b, e.congruence(&s));

        let mut d = s.clone();
        d.sym_scale(1, &c);
        let mut e = Matrix::identity(&z9, 3);
        e.set(1, 1, c);
        assert_eq!(d, e.congruence(&s));
    }
}
