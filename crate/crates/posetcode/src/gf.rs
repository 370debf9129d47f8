//! Exact arithmetic in GF(p^m), p^m <= 2^20.
//!
//! Elements are identified with integers in [0, p^m) via base-p digits
//! (low-to-high), the digits being the coefficients of the residue polynomial
//! modulo the field's irreducible modulus. For m = 1 the modulus is the
//! placeholder x and arithmetic is plain arithmetic mod p.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Hard cap on the field order: exhaustive enumeration dominates every use.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

#[derive(Debug)]
struct FieldInner {
    p: u64,
    m: u32,
    q: u64,
    /// Monic irreducible of degree m over GF(p), coefficients low-to-high.
    modulus: Vec<u64>,
}

/// A finite field GF(p^m), cheaply cloneable and shareable across threads.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "{}", self.0.p)
        } else {
            write!(f, "{}^{}", self.0.p, self.0.m)
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_order(p: u64, m: u32) -> Result<u64> {
    let mut q: u64 = 1;
    for _ in 0..m {
        q = q.checked_mul(p).ok_or(Error::FieldTooLarge { p, m })?;
        if q > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge { p, m });
        }
    }
    Ok(q)
}

// --- dense polynomials over GF(p) as digit vectors, low-to-high ---

fn ptrim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    ptrim(&mut out);
    out
}

/// Remainder of a modulo the monic polynomial b.
fn prem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(*b.last().unwrap(), 1);
    let mut r: Vec<u64> = a.to_vec();
    ptrim(&mut r);
    let db = b.len() - 1;
    while r.len() > db {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (k, &bk) in b.iter().enumerate() {
                let idx = shift + k;
                r[idx] = (r[idx] + p * p - (lead * bk) % p) % p;
            }
        }
        r.pop();
        ptrim(&mut r);
    }
    r
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    // trial division by every monic polynomial of degree 1..=m/2
    for d in 1..=(m / 2) {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut g = digits(low, p, d);
            g.push(1);
            if prem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree m over GF(p) whose lower coefficients,
/// read as a base-p integer, are minimal.
fn minimal_irreducible(p: u64, m: u32, q: u64) -> Vec<u64> {
    for low in 0..q {
        let mut f = digits(low, p, m as usize);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

fn digits(mut code: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for d in out.iter_mut() {
        *d = code % p;
        code /= p;
    }
    out
}

fn recomp(digits: &[u64], p: u64) -> u64 {
    let mut code = 0u64;
    for &d in digits.iter().rev() {
        code = code * p + d;
    }
    code
}

impl Field {
    /// GF(p^m) with the deterministic minimal modulus.
    pub fn new(p: u64, m: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        if m < 1 {
            return Err(Error::ParameterOutOfRange("extension degree m must be >= 1".into()));
        }
        let q = checked_order(p, m)?;
        let modulus = if m == 1 { vec![0, 1] } else { minimal_irreducible(p, m, q) };
        Ok(Field(Arc::new(FieldInner { p, m, q, modulus })))
    }

    /// GF(p^m) with a caller-supplied monic irreducible modulus of degree m.
    pub fn with_modulus(p: u64, m: u32, modulus: Vec<u64>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        if m < 1 {
            return Err(Error::ParameterOutOfRange("extension degree m must be >= 1".into()));
        }
        let q = checked_order(p, m)?;
        if modulus.len() != m as usize + 1 {
            return Err(Error::ParameterOutOfRange(format!(
                "modulus must have degree {m} ({} coefficients, got {})",
                m + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::ParameterOutOfRange(
                "modulus coefficients must be residues mod p".into(),
            ));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::ParameterOutOfRange("modulus must be monic".into()));
        }
        if m > 1 && !is_irreducible(&modulus, p) {
            return Err(Error::ParameterOutOfRange(format!(
                "modulus {modulus:?} is reducible over GF({p})"
            )));
        }
        Ok(Field(Arc::new(FieldInner { p, m, q, modulus })))
    }

    /// Parse "p", "p^m", optionally followed by ",modulus=[c0,c1,...,1]".
    pub fn parse(s: &str) -> Result<Field> {
        let s = s.trim();
        let (head, modulus) = match s.split_once(",modulus=") {
            Some((h, tail)) => {
                let tail = tail.trim();
                let inner = tail
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| Error::Parse(format!("modulus must be a [c0,c1,...] list, got '{tail}'")))?;
                let coeffs = inner
                    .split(',')
                    .map(|c| c.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad modulus coefficient '{c}'"))))
                    .collect::<Result<Vec<u64>>>()?;
                (h.trim(), Some(coeffs))
            }
            None => (s, None),
        };
        let (p, m) = match head.split_once('^') {
            Some((ps, ms)) => {
                let p = ps.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad characteristic '{ps}'")))?;
                let m = ms.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad extension degree '{ms}'")))?;
                (p, m)
            }
            None => {
                let p = head.parse::<u64>().map_err(|_| Error::Parse(format!("bad field '{head}'")))?;
                (p, 1)
            }
        };
        match modulus {
            Some(coeffs) => Field::with_modulus(p, m, coeffs),
            None => Field::new(p, m),
        }
    }

    /// GF(q) for a prime power q, with the deterministic minimal modulus.
    pub fn of_order(q: u64) -> Result<Field> {
        if q < 2 {
            return Err(Error::NonPrimeCharacteristic(q));
        }
        let p = (2..=q).find(|&d| q % d == 0).expect("q >= 2 has a least divisor");
        let mut m = 0u32;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            m += 1;
        }
        if rest != 1 {
            return Err(Error::NonPrimeCharacteristic(q));
        }
        Field::new(p, m)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn m(&self) -> u32 {
        self.0.m
    }

    /// q = p^m.
    pub fn order(&self) -> u64 {
        self.0.q
    }

    /// Modulus coefficients, low-to-high (degree m, monic).
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// The element with the given integer code in [0, q).
    pub fn elem(&self, code: u64) -> Result<FieldElement> {
        if code >= self.0.q {
            return Err(Error::ParameterOutOfRange(format!(
                "element code {code} is not below the field order {}",
                self.0.q
            )));
        }
        Ok(FieldElement { field: self.clone(), code })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), code: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { field: self.clone(), code: 1 }
    }

    /// All q elements in code order.
    pub fn elems(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(move |c| FieldElement { field: self.clone(), code: c })
    }

    /// The image of the binomial coefficient C(i, j) in this field, by Lucas'
    /// theorem on base-p digits; 0 unless 0 <= j <= i.
    pub fn binom_char(&self, i: u64, j: u64) -> FieldElement {
        FieldElement { field: self.clone(), code: self.binom_code(i, j) }
    }

    pub(crate) fn binom_code(&self, mut i: u64, mut j: u64) -> u64 {
        let p = self.0.p;
        if j > i {
            return 0;
        }
        let mut acc = 1u64;
        while j > 0 || i > 0 {
            let di = i % p;
            let dj = j % p;
            if dj > di {
                return 0;
            }
            acc = (acc * binom_mod_p(di, dj, p)) % p;
            if acc == 0 {
                return 0;
            }
            i /= p;
            j /= p;
        }
        acc
    }

    // --- code-level arithmetic (crate-internal hot paths) ---

    pub(crate) fn add_code(&self, a: u64, b: u64) -> u64 {
        let p = self.0.p;
        if self.0.m == 1 {
            return (a + b) % p;
        }
        let mut out = 0u64;
        let (mut a, mut b, mut place) = (a, b, 1u64);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub(crate) fn neg_code(&self, a: u64) -> u64 {
        let p = self.0.p;
        if self.0.m == 1 {
            return (p - a % p) % p;
        }
        let mut out = 0u64;
        let (mut a, mut place) = (a, 1u64);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub(crate) fn sub_code(&self, a: u64, b: u64) -> u64 {
        self.add_code(a, self.neg_code(b))
    }

    pub(crate) fn mul_code(&self, a: u64, b: u64) -> u64 {
        let p = self.0.p;
        if self.0.m == 1 {
            return (a * b) % p;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let da = digits(a, p, self.0.m as usize);
        let db = digits(b, p, self.0.m as usize);
        let prod = pmul(&da, &db, p);
        recomp(&prem(&prod, &self.0.modulus, p), p)
    }

    pub(crate) fn inv_code(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let p = self.0.p;
        if self.0.m == 1 {
            return Ok(int_inverse_mod(a, p));
        }
        // extended gcd of the residue against the modulus in GF(p)[x]
        let mut r0: Vec<u64> = self.0.modulus.clone();
        let mut r1 = digits(a, p, self.0.m as usize);
        ptrim(&mut r1);
        let mut s0: Vec<u64> = Vec::new();
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (quot, rem) = pdivmod(&r0, &r1, p);
            let t = psub(&s0, &pmul(&quot, &s1, p), p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, t);
        }
        debug_assert_eq!(r0.len(), 1, "modulus is irreducible, gcd must be a unit");
        let scale = int_inverse_mod(r0[0], p);
        let inv: Vec<u64> = s0.iter().map(|&c| (c * scale) % p).collect();
        Ok(recomp(&prem(&inv, &self.0.modulus, p), p))
    }

    pub(crate) fn div_code(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul_code(a, self.inv_code(b)?))
    }

    pub(crate) fn pow_code(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_code(acc, base);
            }
            base = self.mul_code(base, base);
            e >>= 1;
        }
        acc
    }
}

/// C(i, j) mod p for 0 <= j <= i < p, by the multiplicative formula.
fn binom_mod_p(i: u64, j: u64, p: u64) -> u64 {
    let j = j.min(i - j);
    let mut num = 1u64;
    let mut den = 1u64;
    for x in 1..=j {
        num = (num * ((i - j + x) % p)) % p;
        den = (den * (x % p)) % p;
    }
    (num * int_inverse_mod(den, p)) % p
}

fn int_inverse_mod(a: u64, p: u64) -> u64 {
    // extended gcd; p prime and a not divisible by p
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(p as i64) as u64
}

fn psub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    ptrim(&mut out);
    out
}

/// Division with remainder in GF(p)[x]; the divisor need not be monic.
fn pdivmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    ptrim(&mut r);
    let db = b.len() - 1;
    let lead_inv = int_inverse_mod(b[db], p);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut quot = vec![0u64; r.len() - db];
    while r.len() > db {
        let c = (r[r.len() - 1] * lead_inv) % p;
        let shift = r.len() - 1 - db;
        quot[shift] = c;
        for (k, &bk) in b.iter().enumerate() {
            let idx = shift + k;
            r[idx] = (r[idx] + p * p - (c * bk) % p) % p;
        }
        ptrim(&mut r);
        if r.len() <= db {
            break;
        }
    }
    ptrim(&mut quot);
    (quot, r)
}

/// An element of a [`Field`], carrying its field for mixed-field detection.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    code: u64,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Integer code: sum of coeffs[i] * p^i.
    pub fn code(&self) -> u64 {
        self.code
    }

    /// Residue coefficients mod p, low-to-high, length m.
    pub fn coeffs(&self) -> Vec<u64> {
        digits(self.code, self.field.p(), self.field.m() as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn guard(&self, rhs: &FieldElement) -> Result<()> {
        if self.field == rhs.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn checked_add(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.guard(rhs)?;
        Ok(FieldElement { field: self.field.clone(), code: self.field.add_code(self.code, rhs.code) })
    }

    pub fn checked_sub(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.guard(rhs)?;
        Ok(FieldElement { field: self.field.clone(), code: self.field.sub_code(self.code, rhs.code) })
    }

    pub fn checked_mul(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.guard(rhs)?;
        Ok(FieldElement { field: self.field.clone(), code: self.field.mul_code(self.code, rhs.code) })
    }

    pub fn checked_div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.guard(rhs)?;
        Ok(FieldElement { field: self.field.clone(), code: self.field.div_code(self.code, rhs.code)? })
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        Ok(FieldElement { field: self.field.clone(), code: self.field.inv_code(self.code)? })
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement { field: self.field.clone(), code: self.field.neg_code(self.code) }
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement { field: self.field.clone(), code: self.field.pow_code(self.code, e) }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.code == other.code
    }
}
impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self.code, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.checked_add(rhs).expect("mixed fields")
    }
}

impl std::ops::Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.checked_sub(rhs).expect("mixed fields")
    }
}

impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.checked_mul(rhs).expect("mixed fields")
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FieldRepr { p: self.0.p, m: self.0.m, modulus: self.0.modulus.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Field, D::Error> {
        let repr = FieldRepr::deserialize(deserializer)?;
        Field::with_modulus(repr.p, repr.m, repr.modulus).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    p: u64,
    m: u32,
    modulus: Vec<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_selection_is_minimal_by_integer_value() {
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::new(5, 1).unwrap().modulus(), &[0, 1]);
    }

    #[test]
    fn division_helpers() {
        // x^3 + 2x + 1 = (x + 1)(x^2 + 4x + 3) + 3 over GF(5); remainder = a(-1) = 3
        let a = vec![1, 2, 0, 1];
        let b = vec![1, 1];
        let (q, r) = pdivmod(&a, &b, 5);
        assert_eq!(q, vec![3, 4, 1]);
        assert_eq!(r, vec![3]);
        assert_eq!(prem(&a, &b, 5), vec![3]);
        let qb = pmul(&q, &b, 5);
        assert_eq!(qb, vec![3, 2, 0, 1]);
    }
}
