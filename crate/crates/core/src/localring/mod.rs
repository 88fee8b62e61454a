//! Exact arithmetic in three families of finite local rings of odd
//! characteristic, together with the square-class structure of the unit
//! group.
//!
//! Supported families:
//!
//! * `Zmod` — `Z/p^n` for an odd prime `p`;
//! * `Galois` — `GR(p^n, r) = Z_{p^n}[x]/(f)` with `f` monic of degree `r`
//!   and irreducible mod `p`;
//! * `Trunc` — `F_{p^r}[t]/(t^m)`, a non-Galois local ring with maximal
//!   ideal `(t)`.
//!
//! Every element has a canonical encoding (see [`RingElement`]) and every
//! ring a canonical element order, which fixes deterministic choices for
//! square roots and for the canonical non-square unit `z`.

mod residue;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use residue::{is_prime_u64, mul_mod, ResidueField};

/// The implemented ring families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Zmod,
    Galois,
    Trunc,
}

/// Immutable description of one finite local ring. Construct via
/// [`RingContext::from_spec`] or the family constructors, always behind an
/// `Arc`; elements and matrices hold shared references to it.
#[derive(Debug)]
pub struct RingContext {
    family: Family,
    p: u64,
    n_exp: u32,
    r: u32,
    m: u32,
    /// Coefficient modulus: `p^n` for Zmod/Galois, `p` for Trunc blocks.
    q: u64,
    /// Lower coefficients of the monic defining polynomial, in `[0, p)`.
    /// Empty for Zmod.
    defining_poly: Vec<u64>,
    fq: ResidueField,
    card_r: u128,
    card_m: u128,
    card_units: u128,
    z_repr: Vec<u64>,
    minus_one_square: bool,
    spec: String,
}

impl PartialEq for RingContext {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
            && self.p == other.p
            && self.n_exp == other.n_exp
            && self.r == other.r
            && self.m == other.m
            && self.defining_poly == other.defining_poly
    }
}

impl Eq for RingContext {}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec)
    }
}

fn checked_pow_u128(base: u64, exp: u32) -> Result<u128> {
    let mut acc = 1u128;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base as u128)
            .ok_or_else(|| Error::RingSpec("ring cardinality overflows u128".into()))?;
    }
    Ok(acc)
}

impl RingContext {
    pub fn zmod(p: u64, n_exp: u32) -> Result<Arc<Self>> {
        Self::validate_p(p)?;
        if n_exp == 0 {
            return Err(Error::RingSpec("exponent must be >= 1".into()));
        }
        let q_128 = checked_pow_u128(p, n_exp)?;
        let q = u64::try_from(q_128)
            .map_err(|_| Error::RingSpec("p^n exceeds u64 range".into()))?;
        let card_r = q_128;
        let card_m = card_r / p as u128;
        let spec = if n_exp == 1 {
            format!("zmod:{p}")
        } else {
            format!("zmod:{p}^{n_exp}")
        };
        let fq = ResidueField::new(p, 1, vec![0]);
        Ok(Self::finish(Self {
            family: Family::Zmod,
            p,
            n_exp,
            r: 1,
            m: 1,
            q,
            defining_poly: Vec::new(),
            fq,
            card_r,
            card_m,
            card_units: card_r - card_m,
            z_repr: Vec::new(),
            minus_one_square: false,
            spec,
        }))
    }

    pub fn galois(p: u64, n_exp: u32, r: u32, poly: Option<Vec<u64>>) -> Result<Arc<Self>> {
        Self::validate_p(p)?;
        if n_exp == 0 || r == 0 {
            return Err(Error::RingSpec("parameters must be >= 1".into()));
        }
        let q_128 = checked_pow_u128(p, n_exp)?;
        let q = u64::try_from(q_128)
            .map_err(|_| Error::RingSpec("p^n exceeds u64 range".into()))?;
        let card_r = checked_pow_u128(p, n_exp.checked_mul(r).ok_or_else(|| {
            Error::RingSpec("ring cardinality overflows u128".into())
        })?)?;
        let card_m = checked_pow_u128(p, (n_exp - 1) * r)?;
        let (defining_poly, explicit) = Self::resolve_poly(p, r, poly)?;
        let spec = if explicit {
            format!("gr:{}:{}:{}", Self::pn(p, n_exp), r, poly_string(&defining_poly))
        } else {
            format!("gr:{}:{}", Self::pn(p, n_exp), r)
        };
        let fq = ResidueField::new(p, r, defining_poly.clone());
        Ok(Self::finish(Self {
            family: Family::Galois,
            p,
            n_exp,
            r,
            m: 1,
            q,
            defining_poly,
            fq,
            card_r,
            card_m,
            card_units: card_r - card_m,
            z_repr: Vec::new(),
            minus_one_square: false,
            spec,
        }))
    }

    pub fn trunc(p: u64, r: u32, m: u32, poly: Option<Vec<u64>>) -> Result<Arc<Self>> {
        Self::validate_p(p)?;
        if r == 0 || m == 0 {
            return Err(Error::RingSpec("parameters must be >= 1".into()));
        }
        let rm = r.checked_mul(m).ok_or_else(|| {
            Error::RingSpec("ring cardinality overflows u128".into())
        })?;
        let card_r = checked_pow_u128(p, rm)?;
        let card_m = checked_pow_u128(p, r * (m - 1))?;
        let (defining_poly, explicit) = Self::resolve_poly(p, r, poly)?;
        let spec = if explicit {
            format!("trunc:{p}:{r}:{m}:{}", poly_string(&defining_poly))
        } else {
            format!("trunc:{p}:{r}:{m}")
        };
        let fq = ResidueField::new(p, r, defining_poly.clone());
        Ok(Self::finish(Self {
            family: Family::Trunc,
            p,
            n_exp: 1,
            r,
            m,
            q: p,
            defining_poly,
            fq,
            card_r,
            card_m,
            card_units: card_r - card_m,
            z_repr: Vec::new(),
            minus_one_square: false,
            spec,
        }))
    }

    /// Parse a ring spec: `zmod:<p>[^<n>]` | `gr:<p>[^<n>]:<r>[:<poly>]` |
    /// `trunc:<p>:<r>:<m>[:<poly>]`, with `<poly>` a comma-separated list of
    /// the lower coefficients (low degree first, leading 1 omitted).
    pub fn from_spec(spec: &str) -> Result<Arc<Self>> {
        let bad = |msg: &str| Error::RingSpec(format!("{msg} (in `{spec}`)"));
        let parts: Vec<&str> = spec.split(':').collect();
        let parse_u64 = |s: &str, what: &str| -> Result<u64> {
            s.parse::<u64>()
                .map_err(|_| bad(&format!("cannot parse {what} `{s}`")))
        };
        let parse_u32 = |s: &str, what: &str| -> Result<u32> {
            s.parse::<u32>()
                .map_err(|_| bad(&format!("cannot parse {what} `{s}`")))
        };
        let parse_pn = |s: &str| -> Result<(u64, u32)> {
            match s.split_once('^') {
                Some((ps, ns)) => Ok((parse_u64(ps, "prime")?, parse_u32(ns, "exponent")?)),
                None => Ok((parse_u64(s, "prime")?, 1)),
            }
        };
        let parse_poly = |s: &str| -> Result<Vec<u64>> {
            s.split(',')
                .map(|c| parse_u64(c.trim(), "polynomial coefficient"))
                .collect()
        };
        match parts.as_slice() {
            ["zmod", pn] => {
                let (p, n) = parse_pn(pn)?;
                Self::zmod(p, n)
            }
            ["gr", pn, r] => {
                let (p, n) = parse_pn(pn)?;
                Self::galois(p, n, parse_u32(r, "degree")?, None)
            }
            ["gr", pn, r, poly] => {
                let (p, n) = parse_pn(pn)?;
                Self::galois(p, n, parse_u32(r, "degree")?, Some(parse_poly(poly)?))
            }
            ["trunc", p, r, m] => Self::trunc(
                parse_u64(p, "prime")?,
                parse_u32(r, "degree")?,
                parse_u32(m, "truncation order")?,
                None,
            ),
            ["trunc", p, r, m, poly] => Self::trunc(
                parse_u64(p, "prime")?,
                parse_u32(r, "degree")?,
                parse_u32(m, "truncation order")?,
                Some(parse_poly(poly)?),
            ),
            _ => Err(bad("unrecognized ring spec")),
        }
    }

    fn validate_p(p: u64) -> Result<()> {
        if p == 2 {
            return Err(Error::RingSpec("characteristic 2 is not supported".into()));
        }
        if !is_prime_u64(p) {
            return Err(Error::RingSpec(format!("{p} is not prime")));
        }
        Ok(())
    }

    fn resolve_poly(p: u64, r: u32, poly: Option<Vec<u64>>) -> Result<(Vec<u64>, bool)> {
        match poly {
            Some(coeffs) => {
                if coeffs.len() != r as usize {
                    return Err(Error::RingSpec(format!(
                        "defining polynomial needs exactly {r} coefficients (leading 1 omitted), got {}",
                        coeffs.len()
                    )));
                }
                let reduced: Vec<u64> = coeffs.iter().map(|&c| c % p).collect();
                if !residue::is_irreducible(&reduced, p) {
                    return Err(Error::RingSpec(
                        "defining polynomial is reducible mod p".into(),
                    ));
                }
                Ok((reduced, true))
            }
            None => Ok((residue::default_irreducible_poly(p, r), false)),
        }
    }

    fn pn(p: u64, n: u32) -> String {
        if n == 1 {
            format!("{p}")
        } else {
            format!("{p}^{n}")
        }
    }

    /// Derive the cached quantities (canonical `z`, squareness of -1) that
    /// need ring arithmetic, then freeze.
    fn finish(mut ctx: Self) -> Arc<Self> {
        debug_assert!(ctx.card_m % 2 == 1, "|M| must be odd in odd characteristic");
        let minus_one = ctx.raw_neg(&ctx.raw_one());
        ctx.minus_one_square = ctx.raw_is_square_unit(&minus_one);
        ctx.z_repr = ctx.find_nonsquare_unit();
        Arc::new(ctx)
    }

    fn find_nonsquare_unit(&self) -> Vec<u64> {
        for idx in self.unit_index_iter() {
            let cand = self.repr_from_index(idx);
            if !self.raw_is_square_unit(&cand) {
                return cand;
            }
        }
        unreachable!("every finite local ring of odd characteristic has a non-square unit")
    }

    // --- accessors ---

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.n_exp
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    pub fn truncation(&self) -> u32 {
        self.m
    }

    pub fn defining_poly(&self) -> &[u64] {
        &self.defining_poly
    }

    /// `|R|`
    pub fn card(&self) -> u128 {
        self.card_r
    }

    /// `|M|`, the size of the maximal ideal.
    pub fn card_maximal_ideal(&self) -> u128 {
        self.card_m
    }

    /// `|R^x| = |R| - |M|`
    pub fn card_units(&self) -> u128 {
        self.card_units
    }

    pub fn minus_one_is_square(&self) -> bool {
        self.minus_one_square
    }

    /// Canonical spec string; parsing it reproduces this context.
    pub fn spec_string(&self) -> &str {
        &self.spec
    }

    fn repr_len(&self) -> usize {
        match self.family {
            Family::Zmod => 1,
            Family::Galois => self.r as usize,
            Family::Trunc => (self.r * self.m) as usize,
        }
    }

    // --- raw encoding-level arithmetic ---

    fn raw_zero(&self) -> Vec<u64> {
        vec![0; self.repr_len()]
    }

    fn raw_one(&self) -> Vec<u64> {
        let mut v = self.raw_zero();
        v[0] = 1;
        v
    }

    fn raw_int(&self, value: i64) -> Vec<u64> {
        let q = self.q as i128;
        let c = (value as i128).rem_euclid(q) as u64;
        let mut v = self.raw_zero();
        v[0] = c;
        v
    }

    fn raw_add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let q = self.q;
        a.iter().zip(b).map(|(&x, &y)| {
            let s = (x as u128 + y as u128) % q as u128;
            s as u64
        }).collect()
    }

    fn raw_sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let q = self.q as u128;
        a.iter()
            .zip(b)
            .map(|(&x, &y)| ((x as u128 + q - y as u128) % q) as u64)
            .collect()
    }

    fn raw_neg(&self, a: &[u64]) -> Vec<u64> {
        let q = self.q as u128;
        a.iter().map(|&x| ((q - x as u128) % q) as u64).collect()
    }

    fn raw_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        match self.family {
            Family::Zmod => vec![mul_mod(a[0], b[0], self.q)],
            Family::Galois => {
                // convolution then reduction by the (lifted) monic defining poly
                let r = self.r as usize;
                let mut prod = vec![0u64; 2 * r - 1];
                for (i, &ai) in a.iter().enumerate() {
                    if ai == 0 {
                        continue;
                    }
                    for (j, &bj) in b.iter().enumerate() {
                        let t = (prod[i + j] as u128 + ai as u128 * bj as u128)
                            % self.q as u128;
                        prod[i + j] = t as u64;
                    }
                }
                let mut i = prod.len();
                while i > r {
                    i -= 1;
                    let c = prod[i];
                    if c != 0 {
                        prod[i] = 0;
                        for (j, &fj) in self.defining_poly.iter().enumerate() {
                            let sub = mul_mod(c, fj, self.q);
                            prod[i - r + j] =
                                ((prod[i - r + j] as u128 + self.q as u128 - sub as u128)
                                    % self.q as u128) as u64;
                        }
                    }
                }
                prod.truncate(r);
                prod
            }
            Family::Trunc => {
                // t-truncated convolution with residue-field block products
                let r = self.r as usize;
                let m = self.m as usize;
                let mut out = vec![0u64; r * m];
                for i in 0..m {
                    let bi = &a[i * r..(i + 1) * r];
                    if bi.iter().all(|&c| c == 0) {
                        continue;
                    }
                    for j in 0..m - i {
                        let bj = &b[j * r..(j + 1) * r];
                        let prod = self.fq.mul(bi, bj);
                        let k = i + j;
                        let slot = &mut out[k * r..(k + 1) * r];
                        for (s, pc) in slot.iter_mut().zip(prod) {
                            *s = (*s + pc) % self.p;
                        }
                    }
                }
                out
            }
        }
    }

    fn raw_pow(&self, a: &[u64], mut exp: u128) -> Vec<u64> {
        let mut acc = self.raw_one();
        let mut base = a.to_vec();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.raw_mul(&acc, &base);
            }
            base = self.raw_mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    fn raw_is_unit(&self, a: &[u64]) -> bool {
        match self.family {
            Family::Zmod => !a[0].is_multiple_of(self.p),
            Family::Galois => a.iter().any(|&c| c % self.p != 0),
            Family::Trunc => a[..self.r as usize].iter().any(|&c| c != 0),
        }
    }

    /// Residue-field image, as an `fq` coefficient vector.
    fn residue_image(&self, a: &[u64]) -> Vec<u64> {
        match self.family {
            Family::Zmod | Family::Galois => a.iter().map(|&c| c % self.p).collect(),
            Family::Trunc => a[..self.r as usize].to_vec(),
        }
    }

    fn lift_residue(&self, img: &[u64]) -> Vec<u64> {
        let mut v = self.raw_zero();
        v[..img.len()].copy_from_slice(img);
        v
    }

    fn raw_inv(&self, a: &[u64]) -> Vec<u64> {
        debug_assert!(self.raw_is_unit(a));
        self.raw_pow(a, self.card_units - 1)
    }

    fn raw_is_square_unit(&self, a: &[u64]) -> bool {
        debug_assert!(self.raw_is_unit(a));
        self.raw_pow(a, self.card_units / 2) == self.raw_one()
    }

    /// Canonical square root of a square unit: the smaller of `{w, -w}` in
    /// canonical encoding order. Tonelli-Shanks in the residue field, then
    /// Newton lifting (`2w` is a unit since `p` is odd).
    fn raw_sqrt_unit(&self, a: &[u64]) -> Vec<u64> {
        let img = self.residue_image(a);
        let root = self
            .fq
            .sqrt(&img)
            .expect("caller checks squareness before lifting");
        let mut w = self.lift_residue(&root);
        let depth = self.n_exp.max(self.m);
        let iters = 64 - u64::from(depth).leading_zeros() + 1;
        for _ in 0..iters {
            let ww = self.raw_mul(&w, &w);
            if ww == a {
                break;
            }
            let num = self.raw_sub(&ww, a);
            let den = self.raw_add(&w, &w);
            w = self.raw_sub(&w, &self.raw_mul(&num, &self.raw_inv(&den)));
        }
        debug_assert_eq!(self.raw_mul(&w, &w), a, "Newton lift failed to converge");
        let neg = self.raw_neg(&w);
        if self.index_of_repr(&neg) < self.index_of_repr(&w) {
            neg
        } else {
            w
        }
    }

    // --- canonical enumeration ---

    /// Canonical index of an encoding. Zmod: the value itself; Galois/Trunc:
    /// mixed-radix with the constant term most significant.
    fn index_of_repr(&self, a: &[u64]) -> u128 {
        match self.family {
            Family::Zmod => a[0] as u128,
            Family::Galois => a
                .iter()
                .fold(0u128, |acc, &c| acc * self.q as u128 + c as u128),
            Family::Trunc => a
                .iter()
                .fold(0u128, |acc, &c| acc * self.p as u128 + c as u128),
        }
    }

    fn repr_from_index(&self, mut idx: u128) -> Vec<u64> {
        debug_assert!(idx < self.card_r);
        let base = self.q as u128;
        let mut v = self.raw_zero();
        for slot in v.iter_mut().rev() {
            *slot = (idx % base) as u64;
            idx /= base;
        }
        v
    }

    /// Indices of all units, ascending. For Trunc the units are exactly the
    /// top contiguous index range (non-units have a zero constant block,
    /// which is the most significant digit group).
    fn unit_index_iter(&self) -> Box<dyn Iterator<Item = u128> + '_> {
        match self.family {
            Family::Zmod => {
                let p = self.p as u128;
                Box::new((1..self.card_r).filter(move |k| k % p != 0))
            }
            Family::Galois => Box::new(
                (1..self.card_r).filter(move |&k| self.raw_is_unit(&self.repr_from_index(k))),
            ),
            Family::Trunc => Box::new(self.card_m..self.card_r),
        }
    }
}

fn poly_string(coeffs: &[u64]) -> String {
    coeffs
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// One element of a specific [`RingContext`], in canonical encoding:
///
/// * Zmod — a single integer in `[0, p^n)`;
/// * Galois — `r` coefficients in `[0, p^n)`, low degree first;
/// * Trunc — `m` blocks of `r` coefficients in `[0, p)`, block `j` being the
///   residue-field coefficient of `t^j`.
#[derive(Clone)]
pub struct RingElement {
    ctx: Arc<RingContext>,
    repr: Vec<u64>,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx) && self.repr == other.repr
    }
}

impl Eq for RingElement {}

impl std::hash::Hash for RingElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ctx.p.hash(state);
        self.repr.hash(state);
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.ctx.spec)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ctx.family {
            Family::Zmod => write!(f, "{}", self.repr[0]),
            Family::Galois => write!(f, "[{}]", poly_string(&self.repr)),
            Family::Trunc => {
                let r = self.ctx.r as usize;
                let blocks: Vec<String> = self
                    .repr
                    .chunks(r)
                    .map(|b| format!("[{}]", poly_string(b)))
                    .collect();
                write!(f, "[{}]", blocks.join(","))
            }
        }
    }
}

#[track_caller]
fn assert_same_ctx(a: &RingElement, b: &RingElement) {
    assert!(
        Arc::ptr_eq(&a.ctx, &b.ctx) || a.ctx == b.ctx,
        "ring context mismatch: {} vs {}",
        a.ctx.spec,
        b.ctx.spec
    );
}

impl RingElement {
    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        Self {
            ctx: Arc::clone(ctx),
            repr: ctx.raw_zero(),
        }
    }

    pub fn one(ctx: &Arc<RingContext>) -> Self {
        Self {
            ctx: Arc::clone(ctx),
            repr: ctx.raw_one(),
        }
    }

    /// Image of an integer under `Z -> R`.
    pub fn from_int(ctx: &Arc<RingContext>, value: i64) -> Self {
        Self {
            ctx: Arc::clone(ctx),
            repr: ctx.raw_int(value),
        }
    }

    /// Element with the given canonical index (see `index`).
    pub fn from_index(ctx: &Arc<RingContext>, idx: u128) -> Self {
        Self {
            ctx: Arc::clone(ctx),
            repr: ctx.repr_from_index(idx),
        }
    }

    /// Build from a raw canonical encoding, validating slot count and ranges.
    pub fn from_repr(ctx: &Arc<RingContext>, repr: Vec<u64>) -> Result<Self> {
        if repr.len() != ctx.repr_len() {
            return Err(Error::RingSpec(format!(
                "encoding needs {} slots, got {}",
                ctx.repr_len(),
                repr.len()
            )));
        }
        if repr.iter().any(|&c| c >= ctx.q) {
            return Err(Error::RingSpec(format!(
                "encoding slot out of range [0, {})",
                ctx.q
            )));
        }
        Ok(Self {
            ctx: Arc::clone(ctx),
            repr,
        })
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn repr(&self) -> &[u64] {
        &self.repr
    }

    /// Canonical index in the ring's element order.
    pub fn index(&self) -> u128 {
        self.ctx.index_of_repr(&self.repr)
    }

    pub fn is_zero(&self) -> bool {
        self.repr.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.repr == self.ctx.raw_one()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_same_ctx(self, rhs);
        Self {
            ctx: Arc::clone(&self.ctx),
            repr: self.ctx.raw_add(&self.repr, &rhs.repr),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_same_ctx(self, rhs);
        Self {
            ctx: Arc::clone(&self.ctx),
            repr: self.ctx.raw_sub(&self.repr, &rhs.repr),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            ctx: Arc::clone(&self.ctx),
            repr: self.ctx.raw_neg(&self.repr),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_same_ctx(self, rhs);
        Self {
            ctx: Arc::clone(&self.ctx),
            repr: self.ctx.raw_mul(&self.repr, &rhs.repr),
        }
    }

    pub fn pow(&self, exp: u128) -> Self {
        Self {
            ctx: Arc::clone(&self.ctx),
            repr: self.ctx.raw_pow(&self.repr, exp),
        }
    }

    /// Units are exactly the elements with nonzero residue-field image.
    pub fn is_unit(&self) -> bool {
        self.ctx.raw_is_unit(&self.repr)
    }

    /// Inverse of a unit, by exponentiation with `|R^x| - 1`.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        Ok(Self {
            ctx: Arc::clone(&self.ctx),
            repr: self.ctx.raw_inv(&self.repr),
        })
    }

    /// Whether this unit lies in `(R^x)^2`, tested as `u^(|R^x|/2) = 1`.
    /// Valid because the squares form the unique index-2 subgroup.
    pub fn is_square_unit(&self) -> Result<bool> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        Ok(self.ctx.raw_is_square_unit(&self.repr))
    }

    /// Canonical square root of a square unit (smaller of the two roots in
    /// canonical order).
    pub fn sqrt_unit(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        if !self.ctx.raw_is_square_unit(&self.repr) {
            return Err(Error::NotASquare);
        }
        Ok(Self {
            ctx: Arc::clone(&self.ctx),
            repr: self.ctx.raw_sqrt_unit(&self.repr),
        })
    }

    /// For a unit `u = self` and ideal element `a`: the unit `c` with
    /// `c^2 (u + a) = u`. Constructive: `t = u^{-1}(u+a)` lies in `1 + M`,
    /// whose (odd) order divides `|M|`, so `c = t^((|M|-1)/2)` works.
    pub fn scale_to(&self, a: &Self) -> Result<Self> {
        assert_same_ctx(self, a);
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        if a.is_unit() {
            return Err(Error::NotInIdeal);
        }
        let t = self.inv()?.mul(&self.add(a));
        Ok(t.pow((self.ctx.card_m - 1) / 2))
    }

    /// Write a non-square unit `z` as `(1 + x^2) y^2` with `x, y` units.
    /// Requires -1 to be a non-square. Scans `x` over units in canonical
    /// order until `1 + x^2` is a non-square unit, then solves for `y`.
    pub fn decompose_nonsquare(&self) -> Result<(Self, Self)> {
        let ctx = &self.ctx;
        if ctx.minus_one_square {
            return Err(Error::MinusOneIsSquare);
        }
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        if ctx.raw_is_square_unit(&self.repr) {
            return Err(Error::NotASquare);
        }
        for idx in ctx.unit_index_iter() {
            let x = Self::from_index(ctx, idx);
            let t = Self::one(ctx).add(&x.mul(&x));
            debug_assert!(t.is_unit(), "1 + x^2 must be a unit when -1 is non-square");
            if !ctx.raw_is_square_unit(&t.repr) {
                let y = self.mul(&t.inv()?).sqrt_unit()?;
                return Ok((x, y));
            }
        }
        unreachable!("a decomposition always exists when -1 and z are non-squares")
    }
}

/// The ring's canonical non-square unit `z`: the first unit in canonical
/// order that fails the square test. Cached at context construction.
pub fn canonical_nonsquare(ctx: &Arc<RingContext>) -> RingElement {
    RingElement {
        ctx: Arc::clone(ctx),
        repr: ctx.z_repr.clone(),
    }
}

/// All elements in canonical order.
pub fn elements(ctx: &Arc<RingContext>) -> impl Iterator<Item = RingElement> {
    let ctx = Arc::clone(ctx);
    (0..ctx.card()).map(move |i| RingElement::from_index(&ctx, i))
}

/// All units in canonical order.
pub fn units(ctx: &Arc<RingContext>) -> impl Iterator<Item = RingElement> {
    let ctx2 = Arc::clone(ctx);
    unit_indices_owned(ctx).map(move |i| RingElement::from_index(&ctx2, i))
}

/// Unit indices in canonical order, without materializing elements. For
/// Trunc the non-units are exactly the indices below `|M|`; elsewhere the
/// non-units are filtered out on the fly.
pub fn unit_indices_owned(ctx: &Arc<RingContext>) -> impl Iterator<Item = u128> {
    let ctx = Arc::clone(ctx);
    let start = match ctx.family() {
        Family::Trunc => ctx.card_maximal_ideal(),
        Family::Zmod | Family::Galois => 1,
    };
    (start..ctx.card()).filter(move |&i| ctx.raw_is_unit(&ctx.repr_from_index(i)))
}
