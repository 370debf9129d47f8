//! Univariate polynomials over GF(p^m).
//!
//! Coefficients are stored low-to-high with no trailing zeros; the zero
//! polynomial is the empty sequence and reports degree `None`. The j-th
//! hyperderivative of sum f_i z^i is sum C(i,j) f_i z^{i-j} with the binomial
//! reduced in characteristic p; this (not the iterated ordinary derivative,
//! which dies for j >= p) is what makes Taylor expansions work over GF(p^m).

use std::fmt;

use crate::gf::{Field, FieldElement};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<u64>,
}

impl Polynomial {
    pub fn new(field: &Field, coeffs: &[FieldElement]) -> Result<Polynomial> {
        for c in coeffs {
            if c.field() != field {
                return Err(Error::MixedFields);
            }
        }
        Ok(Self::from_raw(field.clone(), coeffs.iter().map(|c| c.code()).collect()))
    }

    /// Coefficients given as integer element codes, low-to-high.
    pub fn from_codes(field: &Field, codes: &[u64]) -> Result<Polynomial> {
        for &c in codes {
            if c >= field.order() {
                return Err(Error::ParameterOutOfRange(format!(
                    "coefficient code {c} is not below the field order {}",
                    field.order()
                )));
            }
        }
        Ok(Self::from_raw(field.clone(), codes.to_vec()))
    }

    pub(crate) fn from_raw(field: Field, mut coeffs: Vec<u64>) -> Polynomial {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Polynomial { field, coeffs }
    }

    pub fn zero(field: &Field) -> Polynomial {
        Polynomial { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(c: &FieldElement) -> Polynomial {
        Self::from_raw(c.field().clone(), vec![c.code()])
    }

    /// c * z^k.
    pub fn monomial(c: &FieldElement, k: usize) -> Polynomial {
        let mut coeffs = vec![0u64; k + 1];
        coeffs[k] = c.code();
        Self::from_raw(c.field().clone(), coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.field.elem(self.coeffs.get(i).copied().unwrap_or(0)).unwrap()
    }

    pub fn coeff_codes(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn eval(&self, alpha: &FieldElement) -> Result<FieldElement> {
        if alpha.field() != &self.field {
            return Err(Error::MixedFields);
        }
        self.field.elem(self.eval_code(alpha.code()))
    }

    pub(crate) fn eval_code(&self, alpha: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = self.field.add_code(self.field.mul_code(acc, alpha), c);
        }
        acc
    }

    pub fn hyperderivative(&self, j: usize) -> Polynomial {
        if j >= self.coeffs.len() {
            return Polynomial::zero(&self.field);
        }
        let out = (j..self.coeffs.len())
            .map(|i| {
                let b = self.field.binom_code(i as u64, j as u64);
                self.field.mul_code(b, self.coeffs[i])
            })
            .collect();
        Self::from_raw(self.field.clone(), out)
    }

    /// (∂^0 f(α), ..., ∂^{count-1} f(α)), by repeated synthetic division; these
    /// are the coefficients of f in powers of (z - α).
    pub fn taylor_coeffs(&self, alpha: &FieldElement, count: usize) -> Result<Vec<FieldElement>> {
        if alpha.field() != &self.field {
            return Err(Error::MixedFields);
        }
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            if work.is_empty() {
                out.push(self.field.zero());
            } else {
                let rem = synth_div(&self.field, &mut work, alpha.code());
                out.push(self.field.elem(rem)?);
            }
        }
        Ok(out)
    }

    /// Smallest j with ∂^j f(α) != 0; `None` (infinite) for the zero polynomial.
    pub fn vanishing_order(&self, alpha: &FieldElement) -> Result<Option<usize>> {
        if alpha.field() != &self.field {
            return Err(Error::MixedFields);
        }
        if self.is_zero() {
            return Ok(None);
        }
        let mut work = self.coeffs.clone();
        let mut j = 0usize;
        while !work.is_empty() {
            let rem = synth_div(&self.field, &mut work, alpha.code());
            if rem != 0 {
                return Ok(Some(j));
            }
            j += 1;
        }
        Err(Error::Invariant("nonzero polynomial with all Taylor coefficients zero".into()))
    }

    pub fn checked_add(&self, rhs: &Polynomial) -> Result<Polynomial> {
        if self.field != rhs.field {
            return Err(Error::MixedFields);
        }
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let out = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = rhs.coeffs.get(i).copied().unwrap_or(0);
                self.field.add_code(a, b)
            })
            .collect();
        Ok(Self::from_raw(self.field.clone(), out))
    }

    pub fn checked_sub(&self, rhs: &Polynomial) -> Result<Polynomial> {
        if self.field != rhs.field {
            return Err(Error::MixedFields);
        }
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let out = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = rhs.coeffs.get(i).copied().unwrap_or(0);
                self.field.sub_code(a, b)
            })
            .collect();
        Ok(Self::from_raw(self.field.clone(), out))
    }

    pub fn checked_mul(&self, rhs: &Polynomial) -> Result<Polynomial> {
        if self.field != rhs.field {
            return Err(Error::MixedFields);
        }
        if self.is_zero() || rhs.is_zero() {
            return Ok(Polynomial::zero(&self.field));
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = self.field.add_code(out[i + j], self.field.mul_code(a, b));
            }
        }
        Ok(Self::from_raw(self.field.clone(), out))
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Polynomial> {
        if c.field() != &self.field {
            return Err(Error::MixedFields);
        }
        let out = self.coeffs.iter().map(|&a| self.field.mul_code(a, c.code())).collect();
        Ok(Self::from_raw(self.field.clone(), out))
    }

    pub fn pow(&self, e: usize) -> Polynomial {
        let mut acc = Self::from_raw(self.field.clone(), vec![1]);
        for _ in 0..e {
            acc = acc.checked_mul(self).unwrap();
        }
        acc
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divmod(&self, den: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        if self.field != den.field {
            return Err(Error::MixedFields);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let db = den.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Polynomial::zero(&self.field), Self::from_raw(self.field.clone(), rem)));
        }
        let lead_inv = self.field.inv_code(den.coeffs[db])?;
        let mut quot = vec![0u64; rem.len() - db];
        while rem.len() > db {
            let c = self.field.mul_code(*rem.last().unwrap(), lead_inv);
            let shift = rem.len() - 1 - db;
            quot[shift] = c;
            for (k, &dk) in den.coeffs.iter().enumerate() {
                let idx = shift + k;
                rem[idx] = self.field.sub_code(rem[idx], self.field.mul_code(c, dk));
            }
            while rem.last() == Some(&0) {
                rem.pop();
            }
            if rem.len() <= db {
                break;
            }
        }
        Ok((
            Self::from_raw(self.field.clone(), quot),
            Self::from_raw(self.field.clone(), rem),
        ))
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        if a.field != b.field {
            return Err(Error::MixedFields);
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        while !r1.is_zero() {
            let (_, rem) = r0.divmod(&r1)?;
            r0 = std::mem::replace(&mut r1, rem);
        }
        r0.into_monic()
    }

    /// Scaled so the leading coefficient is 1 (zero stays zero).
    pub fn into_monic(self) -> Result<Polynomial> {
        match self.coeffs.last() {
            None | Some(1) => Ok(self),
            Some(&lead) => {
                let inv = self.field.inv_code(lead)?;
                let out = self.coeffs.iter().map(|&c| self.field.mul_code(c, inv)).collect();
                Ok(Self::from_raw(self.field.clone(), out))
            }
        }
    }

    /// Accepts the coefficient-list form "[c0,c1,...]" (low-to-high codes) or
    /// the display form "4x^3 + 3x^2 + x" (also with 'z' as the variable).
    pub fn parse(field: &Field, s: &str) -> Result<Polynomial> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("unterminated coefficient list '{s}'")))?;
            let inner = inner.trim();
            if inner.is_empty() {
                return Ok(Polynomial::zero(field));
            }
            let codes = inner
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad coefficient '{}'", c.trim())))
                })
                .collect::<Result<Vec<u64>>>()?;
            return Polynomial::from_codes(field, &codes);
        }
        parse_pretty(field, s)
    }

    /// Display form: descending powers, e.g. "4x^3 + 3x^2 + x"; "0" when zero.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".into(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            };
            terms.push(term);
        }
        terms.join(" + ")
    }

    /// Coefficient-list form "[c0,c1,...]", low-to-high codes; "[]" when zero.
    pub fn code_list(&self) -> String {
        let inner: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("[{}]", inner.join(","))
    }
}

/// Divide by (z - alpha) in place (codes low-to-high, nonempty); returns the
/// remainder f(alpha) and leaves the quotient in `work`.
fn synth_div(field: &Field, work: &mut Vec<u64>, alpha: u64) -> u64 {
    let mut carry = 0u64;
    for i in (0..work.len()).rev() {
        let cur = field.add_code(work[i], field.mul_code(carry, alpha));
        work[i] = carry;
        carry = cur;
    }
    while work.last() == Some(&0) {
        work.pop();
    }
    carry
}

fn parse_pretty(field: &Field, s: &str) -> Result<Polynomial> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // split into sign-prefixed terms
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut chars = compact.chars().peekable();
    if chars.peek() == Some(&'-') {
        neg = true;
        chars.next();
    } else if chars.peek() == Some(&'+') {
        chars.next();
    }
    for ch in chars {
        if ch == '+' || ch == '-' {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    terms.push((neg, cur));

    let mut coeffs: Vec<u64> = Vec::new();
    for (neg, term) in terms {
        if term.is_empty() {
            return Err(Error::Parse(format!("dangling sign in '{s}'")));
        }
        let (coeff_str, var_part) = match term.find(|c| c == 'x' || c == 'z') {
            Some(pos) => (&term[..pos], &term[pos + 1..]),
            None => (&term[..], ""),
        };
        let has_var = term.contains('x') || term.contains('z');
        let code: u64 = if coeff_str.is_empty() {
            if has_var {
                1
            } else {
                return Err(Error::Parse(format!("empty term in '{s}'")));
            }
        } else {
            coeff_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient '{coeff_str}'")))?
        };
        if code >= field.order() {
            return Err(Error::ParameterOutOfRange(format!(
                "coefficient code {code} is not below the field order {}",
                field.order()
            )));
        }
        let k: usize = if !has_var {
            0
        } else if var_part.is_empty() {
            1
        } else {
            let exp = var_part
                .strip_prefix('^')
                .ok_or_else(|| Error::Parse(format!("bad exponent syntax '{term}'")))?;
            exp.parse().map_err(|_| Error::Parse(format!("bad exponent '{exp}'")))?
        };
        if coeffs.len() <= k {
            coeffs.resize(k + 1, 0);
        }
        let signed = if neg { field.neg_code(code) } else { code };
        coeffs[k] = field.add_code(coeffs[k], signed);
    }
    Ok(Polynomial::from_raw(field.clone(), coeffs))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({} over GF({}))", self.code_list(), self.field)
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("mixed fields")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("mixed fields")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("mixed fields")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_trimming() {
        let f5 = Field::new(5, 1).unwrap();
        let p = Polynomial::from_codes(&f5, &[1, 2, 0, 0]).unwrap();
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.coeff_codes(), &[1, 2]);
        assert_eq!(Polynomial::zero(&f5).degree(), None);
    }

    #[test]
    fn synthetic_division_matches_divmod() {
        let f7 = Field::new(7, 1).unwrap();
        let f = Polynomial::from_codes(&f7, &[3, 1, 0, 5, 2]).unwrap();
        let alpha = f7.elem(4).unwrap();
        let lin = Polynomial::from_codes(&f7, &[f7.neg_code(4), 1]).unwrap();
        let (q, r) = f.divmod(&lin).unwrap();
        let mut work = f.coeff_codes().to_vec();
        let rem = synth_div(&f7, &mut work, 4);
        assert_eq!(rem, r.coeff_codes().first().copied().unwrap_or(0));
        assert_eq!(work, q.coeff_codes());
        assert_eq!(rem, f.eval(&alpha).unwrap().code());
    }
}
