//! Residue-field arithmetic: `F_{p^r} = F_p[x]/(f)` with `f` monic
//! irreducible, plus the square-root machinery (Tonelli-Shanks) that the
//! ring layer lifts to the full local ring.
//!
//! Field elements are raw coefficient vectors `[c_0, ..., c_{r-1}]` with
//! `c_i` in `[0, p)`, low degree first. The canonical total order compares
//! the constant term first.

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u128, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for all `u64` inputs.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d as u128, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors_u32(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// --- dense polynomials over F_p, used only for irreducibility testing ---

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `x^r + f`, coefficients mod p.
fn poly_rem(mut a: Vec<u64>, f: &[u64], p: u64) -> Vec<u64> {
    let r = f.len();
    let mut i = a.len();
    while i > r {
        i -= 1;
        let c = a[i];
        if c != 0 {
            a[i] = 0;
            for (j, &fj) in f.iter().enumerate() {
                let sub = mul_mod(c, fj, p);
                a[i - r + j] = (a[i - r + j] + p - sub) % p;
            }
        }
    }
    a.truncate(r);
    a.resize(r, 0);
    a
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(ai, bj, p)) % p;
        }
    }
    poly_rem(prod, f, p)
}

fn poly_powmod(base: &[u64], mut exp: u128, f: &[u64], p: u64) -> Vec<u64> {
    let r = f.len();
    let mut acc = vec![0u64; r];
    acc[0] = 1;
    let mut b = base.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        // a <- a mod b; the leading term cancels exactly each pass
        let lead_inv = pow_mod(*b.last().unwrap(), (p - 2) as u128, p);
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let c = mul_mod(*a.last().unwrap(), lead_inv, p);
            for (j, &bj) in b.iter().enumerate() {
                let sub = mul_mod(c, bj, p);
                a[shift + j] = (a[shift + j] + p - sub) % p;
            }
            poly_trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Rabin irreducibility test for the monic polynomial `x^r + sum f_i x^i`
/// over `F_p`. `f` holds the `r` lower coefficients, low degree first.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let r = f.len() as u32;
    if r == 0 {
        return false;
    }
    if r == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // x^(p^r) == x (mod f)
    let mut exp = 1u128;
    for _ in 0..r {
        exp = match exp.checked_mul(p as u128) {
            Some(v) => v,
            None => return false,
        };
    }
    let frob = poly_powmod(&x, exp, f, p);
    let mut diff = frob.clone();
    diff[1] = (diff[1] + p - 1) % p;
    poly_trim(&mut diff);
    if !diff.is_empty() {
        return false;
    }
    // gcd(x^(p^(r/q)) - x, f) == 1 for each prime q | r
    for q in prime_factors_u32(r) {
        let mut e = 1u128;
        for _ in 0..r / q {
            e *= p as u128;
        }
        let xe = poly_powmod(&x, e, f, p);
        let mut d = xe;
        d[1] = (d[1] + p - 1) % p;
        let mut full = f.to_vec();
        full.push(1);
        let g = poly_gcd(d, full, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The canonically smallest monic irreducible polynomial of degree `r` over
/// `F_p`: coefficient vectors are compared low degree first.
pub(crate) fn default_irreducible_poly(p: u64, r: u32) -> Vec<u64> {
    let mut coeffs = vec![0u64; r as usize];
    loop {
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
        // increment with c_0 most significant, i.e. bump the last slot first
        let mut i = r as usize;
        loop {
            debug_assert!(i > 0, "no irreducible polynomial found");
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

// --- the residue field F_{p^r} ---

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ResidueField {
    pub p: u64,
    pub r: u32,
    /// Lower coefficients of the monic defining polynomial, in `[0, p)`.
    pub poly: Vec<u64>,
    /// Field order `p^r`.
    pub q: u128,
    /// Smallest non-square in canonical order (unused when `q = 3 mod 4`
    /// but cheap to hold).
    nonresidue: Vec<u64>,
}

impl ResidueField {
    pub fn new(p: u64, r: u32, poly: Vec<u64>) -> Self {
        debug_assert_eq!(poly.len(), r as usize);
        let q = (0..r).fold(1u128, |acc, _| acc * p as u128);
        let mut fq = ResidueField {
            p,
            r,
            poly,
            q,
            nonresidue: Vec::new(),
        };
        fq.nonresidue = fq.find_nonresidue();
        fq
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.r as usize]
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        poly_mulmod(a, b, &self.poly, self.p)
    }

    pub fn pow(&self, a: &[u64], mut exp: u128) -> Vec<u64> {
        let mut acc = self.one();
        let mut b = a.to_vec();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            exp >>= 1;
        }
        acc
    }

    pub fn is_square(&self, a: &[u64]) -> bool {
        if self.is_zero(a) {
            return true;
        }
        self.pow(a, (self.q - 1) / 2) == self.one()
    }

    pub fn element_at(&self, mut idx: u128) -> Vec<u64> {
        let mut v = vec![0u64; self.r as usize];
        for slot in v.iter_mut().rev() {
            *slot = (idx % self.p as u128) as u64;
            idx /= self.p as u128;
        }
        v
    }

    fn find_nonresidue(&self) -> Vec<u64> {
        let mut idx = 1u128;
        loop {
            let cand = self.element_at(idx);
            if !self.is_square(&cand) {
                return cand;
            }
            idx += 1;
            debug_assert!(idx < self.q, "no nonresidue in a field of odd order");
        }
    }

    /// Tonelli-Shanks. Returns `None` when `a` is a non-square.
    pub fn sqrt(&self, a: &[u64]) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        if !self.is_square(a) {
            return None;
        }
        if self.q % 4 == 3 {
            return Some(self.pow(a, (self.q + 1) / 4));
        }
        let mut t = self.q - 1;
        let mut s = 0u32;
        while t.is_multiple_of(2) {
            t /= 2;
            s += 1;
        }
        let one = self.one();
        let mut m = s;
        let mut c = self.pow(&self.nonresidue, t);
        let mut u = self.pow(a, t);
        let mut w = self.pow(a, t.div_ceil(2));
        while u != one {
            let mut i = 0u32;
            let mut probe = u.clone();
            while probe != one {
                probe = self.mul(&probe, &probe);
                i += 1;
            }
            let b = self.pow(&c, 1u128 << (m - i - 1));
            m = i;
            c = self.mul(&b, &b);
            u = self.mul(&u, &c);
            w = self.mul(&w, &b);
        }
        Some(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3));
        assert!(is_prime_u64(727));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(9));
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(is_prime_u64(2_147_483_647));
    }

    #[test]
    fn default_polys() {
        // degree 1 over any p: x itself
        assert_eq!(default_irreducible_poly(3, 1), vec![0]);
        // x^2 + 1 is the first irreducible quadratic over F_3
        assert_eq!(default_irreducible_poly(3, 2), vec![1, 0]);
        // over F_5, x^2 + 1 splits as (x+2)(x+3); x^2 + x + 1 has no root
        assert_eq!(default_irreducible_poly(5, 2), vec![1, 1]);
    }

    #[test]
    fn irreducibility_catches_products() {
        // x^2 + 2 = (x+1)(x+2) over F_3
        assert!(!is_irreducible(&[2, 0], 3));
        assert!(is_irreducible(&[1, 0], 3));
        // x^3 + 2x + 1 over F_3 has root x=1: 1 + 2 + 1 = 4 = 1 != 0; x=2: 8+4+1=13=1; x=0: 1.
        assert!(is_irreducible(&[1, 2, 0], 3));
    }

    #[test]
    fn f9_squares() {
        // F_9 = F_3[x]/(x^2+1); x plays sqrt(-1), so -1 is a square.
        let f9 = ResidueField::new(3, 2, vec![1, 0]);
        let minus_one = vec![2, 0];
        assert!(f9.is_square(&minus_one));
        let s = f9.sqrt(&minus_one).unwrap();
        assert_eq!(f9.mul(&s, &s), minus_one);
        // exactly (9-1)/2 = 4 nonzero squares
        let squares: std::collections::BTreeSet<Vec<u64>> = (1..9u128)
            .map(|i| {
                let e = f9.element_at(i);
                f9.mul(&e, &e)
            })
            .collect();
        assert_eq!(squares.len(), 4);
    }

    #[test]
    fn sqrt_small_primes() {
        for p in [3u64, 5, 7, 13, 17, 29] {
            let fp = ResidueField::new(p, 1, vec![0]);
            for a in 1..p {
                let e = vec![a];
                if fp.is_square(&e) {
                    let w = fp.sqrt(&e).unwrap();
                    assert_eq!(fp.mul(&w, &w), e, "sqrt failed for {a} mod {p}");
                } else {
                    assert_eq!(fp.sqrt(&e), None);
                }
            }
        }
    }
}
