//! Genus-0 function-field codes on the projective line: divisors, rational
//! functions with exact gcd reduction, Riemann-Roch bases, local Laurent
//! expansions, the coefficient-matrix encoding into the bottleneck poset,
//! and an exact big-integer checker for the MDS parameter inequality.

use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{pow_within, Basis, Code, CodeSpec, SweepRow, SweepStatus};
use crate::gf::{Field, FieldElement};
use crate::linalg;
use crate::poly::Polynomial;
use crate::poset::{BottleneckShape, MatrixWord};
use crate::{Error, Result};

/// A rational place of the function field GF(q)(x): a finite point given by
/// its element code, or the point at infinity. The local parameter is x - α
/// at Finite(α) and 1/x at Infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Place {
    Finite(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(c) => write!(f, "P{c}"),
            Place::Infinity => write!(f, "Pinf"),
        }
    }
}

/// A divisor: a finite formal sum of places with integer coefficients,
/// stored normalized (duplicates merged, zeros dropped, places sorted).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<(Place, i64)>", into = "Vec<(Place, i64)>")]
pub struct Divisor {
    coeffs: Vec<(Place, i64)>,
}

impl Divisor {
    pub fn new(pairs: &[(Place, i64)]) -> Divisor {
        let mut coeffs: Vec<(Place, i64)> = Vec::new();
        for &(place, n) in pairs {
            match coeffs.iter_mut().find(|(p, _)| *p == place) {
                Some((_, acc)) => *acc += n,
                None => coeffs.push((place, n)),
            }
        }
        coeffs.retain(|&(_, n)| n != 0);
        coeffs.sort_unstable_by_key(|&(p, _)| p);
        Divisor { coeffs }
    }

    pub fn zero() -> Divisor {
        Divisor { coeffs: Vec::new() }
    }

    /// Sum of coefficients (every rational place has degree one).
    pub fn degree(&self) -> i64 {
        self.coeffs.iter().map(|&(_, n)| n).sum()
    }

    pub fn coeff(&self, place: Place) -> i64 {
        self.coeffs
            .iter()
            .find(|&&(p, _)| p == place)
            .map_or(0, |&(_, n)| n)
    }

    pub fn support(&self) -> Vec<Place> {
        self.coeffs.iter().map(|&(p, _)| p).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Place, i64)> + '_ {
        self.coeffs.iter().copied()
    }
}

impl From<Vec<(Place, i64)>> for Divisor {
    fn from(pairs: Vec<(Place, i64)>) -> Divisor {
        Divisor::new(&pairs)
    }
}

impl From<Divisor> for Vec<(Place, i64)> {
    fn from(d: Divisor) -> Vec<(Place, i64)> {
        d.coeffs
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, &(place, n)) in self.coeffs.iter().enumerate() {
            let mag = n.unsigned_abs();
            if i == 0 {
                if n < 0 {
                    write!(f, "-")?;
                }
            } else if n < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            write!(f, "{place}")?;
        }
        Ok(())
    }
}

/// `count` consecutive coefficients of a function's expansion in the local
/// parameter at `place`, beginning at exponent `start`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSlice {
    pub place: Place,
    pub start: i64,
    pub coeffs: Vec<FieldElement>,
}

/// A rational function num/den over GF(q), kept reduced (gcd 1) with monic
/// denominator; the zero function is 0/1.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFn {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<RationalFn> {
        if num.field() != den.field() {
            return Err(Error::MixedFields);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = num.field().clone();
        if num.is_zero() {
            return Ok(RationalFn {
                num,
                den: Polynomial::constant(&field.one()),
            });
        }
        let g = Polynomial::gcd(&num, &den)?;
        let (num, _) = num.divmod(&g)?;
        let (den, _) = den.divmod(&g)?;
        let lead = *den.coeff_codes().last().expect("reduced denominator is nonzero");
        let inv = field.elem(field.inv_code(lead)?)?;
        Ok(RationalFn { num: num.scale(&inv)?, den: den.scale(&inv)? })
    }

    pub fn from_poly(num: Polynomial) -> RationalFn {
        let one = Polynomial::constant(&num.field().one());
        RationalFn { num, den: one }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn checked_add(&self, rhs: &RationalFn) -> Result<RationalFn> {
        let a = self.num.checked_mul(&rhs.den)?;
        let b = rhs.num.checked_mul(&self.den)?;
        RationalFn::new(a.checked_add(&b)?, self.den.checked_mul(&rhs.den)?)
    }

    pub fn checked_sub(&self, rhs: &RationalFn) -> Result<RationalFn> {
        let a = self.num.checked_mul(&rhs.den)?;
        let b = rhs.num.checked_mul(&self.den)?;
        RationalFn::new(a.checked_sub(&b)?, self.den.checked_mul(&rhs.den)?)
    }

    pub fn scale(&self, c: &FieldElement) -> Result<RationalFn> {
        RationalFn::new(self.num.scale(c)?, self.den.clone())
    }

    /// Value at a finite point where the denominator does not vanish.
    pub fn eval(&self, alpha: &FieldElement) -> Result<FieldElement> {
        let dv = self.den.eval(alpha)?;
        if dv.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let nv = self.num.eval(alpha)?;
        nv.checked_div(&dv)
    }

    /// Order of vanishing at the place (negative at a pole); `None` for the
    /// zero function.
    pub fn valuation(&self, place: Place) -> Result<Option<i64>> {
        if self.is_zero() {
            return Ok(None);
        }
        let v = match place {
            Place::Finite(c) => {
                let alpha = self.field().elem(c)?;
                let vn = self
                    .num
                    .vanishing_order(&alpha)?
                    .expect("numerator of a nonzero function is nonzero");
                let vd = self
                    .den
                    .vanishing_order(&alpha)?
                    .expect("denominator is nonzero");
                vn as i64 - vd as i64
            }
            Place::Infinity => {
                let dn = self.num.degree().expect("nonzero numerator") as i64;
                let dd = self.den.degree().expect("nonzero denominator") as i64;
                dd - dn
            }
        };
        Ok(Some(v))
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.coeff_codes() == [1] {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Parameters of a function-field code: r distinct evaluation places, a
/// divisor G with r - 1 <= deg G <= rs - r + 1, and s rows of expansion
/// coefficients per place.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AgCodeSpecRepr", into = "AgCodeSpecRepr")]
pub struct AgCodeSpec {
    field: Field,
    places: Vec<Place>,
    divisor: Divisor,
    s: usize,
}

#[derive(Serialize, Deserialize, Clone)]
struct AgCodeSpecRepr {
    field: Field,
    places: Vec<Place>,
    divisor: Divisor,
    s: usize,
}

impl TryFrom<AgCodeSpecRepr> for AgCodeSpec {
    type Error = Error;
    fn try_from(raw: AgCodeSpecRepr) -> Result<AgCodeSpec> {
        AgCodeSpec::new(&raw.field, &raw.places, raw.divisor, raw.s)
    }
}

impl From<AgCodeSpec> for AgCodeSpecRepr {
    fn from(spec: AgCodeSpec) -> AgCodeSpecRepr {
        AgCodeSpecRepr {
            field: spec.field,
            places: spec.places,
            divisor: spec.divisor,
            s: spec.s,
        }
    }
}

impl AgCodeSpec {
    pub fn new(
        field: &Field,
        places: &[Place],
        divisor: Divisor,
        s: usize,
    ) -> Result<AgCodeSpec> {
        let r = places.len();
        if r < 2 {
            return Err(Error::ParameterOutOfRange(
                "at least two evaluation places".into(),
            ));
        }
        if s < 2 {
            return Err(Error::ParameterOutOfRange("s must be >= 2".into()));
        }
        let mut sorted = places.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoints);
        }
        for place in places.iter().chain(divisor.support().iter()) {
            if let Place::Finite(c) = place {
                field.elem(*c)?;
            }
        }
        let deg = divisor.degree();
        let lo = r as i64 - 1;
        let hi = (r * s) as i64 - r as i64 + 1;
        if deg < lo || deg > hi {
            return Err(Error::ParameterOutOfRange(format!(
                "divisor degree must satisfy r - 1 = {lo} <= deg = {deg} <= rs - r + 1 = {hi}"
            )));
        }
        Ok(AgCodeSpec {
            field: field.clone(),
            places: places.to_vec(),
            divisor,
            s,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn r(&self) -> usize {
        self.places.len()
    }

    pub fn s(&self) -> usize {
        self.s
    }
}

fn linear_factor(field: &Field, alpha: u64) -> Polynomial {
    Polynomial::from_raw(field.clone(), vec![field.neg_code(alpha), 1])
}

/// Product of (x - α)^{n_α} over finite places with positive coefficient:
/// the common denominator every function with divisor-bounded poles divides
/// into.
fn common_denominator(field: &Field, g: &Divisor) -> Result<Polynomial> {
    let mut d = Polynomial::constant(&field.one());
    for (place, n) in g.iter() {
        if let (Place::Finite(c), true) = (place, n > 0) {
            field.elem(c)?;
            d = d.checked_mul(&linear_factor(field, c).pow(n as usize))?;
        }
    }
    Ok(d)
}

/// The functions of a Riemann-Roch space over one common denominator D:
/// every member is numerators[i]-combination / D, unreduced.
struct RrSpace {
    den: Polynomial,
    numerators: Vec<Polynomial>,
}

fn rr_space(field: &Field, g: &Divisor) -> Result<RrSpace> {
    for place in g.support() {
        if let Place::Finite(c) = place {
            field.elem(c)?;
        }
    }
    let deg = g.degree();
    let den = common_denominator(field, g)?;
    if deg < 0 {
        return Ok(RrSpace { den, numerators: Vec::new() });
    }
    let max_deg = den.degree().expect("denominator is nonzero") as i64 + g.coeff(Place::Infinity);
    let numerators = if max_deg < 0 {
        Vec::new()
    } else {
        let ncols = max_deg as usize + 1;
        let mut rows = Vec::new();
        for (place, n) in g.iter() {
            if let (Place::Finite(alpha), true) = (place, n < 0) {
                for j in 0..n.unsigned_abs() {
                    let row = (0..ncols as u64)
                        .map(|l| {
                            let b = field.binom_code(l, j);
                            if b == 0 {
                                0
                            } else {
                                field.mul_code(b, field.pow_code(alpha, l - j))
                            }
                        })
                        .collect();
                    rows.push(row);
                }
            }
        }
        linalg::nullspace(field, rows, ncols)
            .into_iter()
            .map(|v| Polynomial::from_raw(field.clone(), v))
            .collect()
    };
    if numerators.len() as i64 != deg + 1 {
        return Err(Error::Invariant(format!(
            "Riemann-Roch space of a degree-{deg} divisor has dimension {}, want {}",
            numerators.len(),
            deg + 1
        )));
    }
    Ok(RrSpace { den, numerators })
}

/// Basis of L(G) = { f : div(f) + G >= 0 }: dimension deg G + 1 when
/// deg G >= 0 (genus zero), empty when deg G < 0.
pub fn rr_basis(field: &Field, g: &Divisor) -> Result<Vec<RationalFn>> {
    let space = rr_space(field, g)?;
    space
        .numerators
        .into_iter()
        .map(|p| RationalFn::new(p, space.den.clone()))
        .collect()
}

/// w[k] = (u[k] - Σ_{i<k} w[i] v[k-i]) / v[0]: the power-series quotient u/v
/// to n terms, requiring v[0] != 0.
fn series_div(field: &Field, u: &[u64], v: &[u64], n: usize) -> Result<Vec<u64>> {
    let v0_inv = field.inv_code(v[0])?;
    let mut w = vec![0u64; n];
    for k in 0..n {
        let mut acc = u.get(k).copied().unwrap_or(0);
        for i in 0..k {
            let vk = v.get(k - i).copied().unwrap_or(0);
            acc = field.sub_code(acc, field.mul_code(w[i], vk));
        }
        w[k] = field.mul_code(acc, v0_inv);
    }
    Ok(w)
}

/// Coefficients of f at exponents start, ..., start + count - 1 in the local
/// parameter of `place`. Exponents below the valuation are zero; a valuation
/// below `start` is an error (the function has a deeper pole than the slice
/// admits).
pub fn local_expansion(
    f: &RationalFn,
    place: Place,
    start: i64,
    count: usize,
) -> Result<LaurentSlice> {
    let field = f.field().clone();
    if f.is_zero() {
        return Ok(LaurentSlice { place, start, coeffs: vec![field.zero(); count] });
    }
    let (nu, unit_num, unit_den): (i64, Vec<u64>, Vec<u64>) = match place {
        Place::Finite(c) => {
            let alpha = field.elem(c)?;
            let vn = f.num().vanishing_order(&alpha)?.expect("nonzero numerator");
            let vd = f.den().vanishing_order(&alpha)?.expect("nonzero denominator");
            let nu = vn as i64 - vd as i64;
            if nu < start {
                return Err(Error::PoleDeeperThanStart { pole: nu, start });
            }
            let needed = (start + count as i64 - nu).max(0) as usize;
            if needed == 0 {
                return Ok(LaurentSlice { place, start, coeffs: vec![field.zero(); count] });
            }
            let shift = linear_factor(&field, c);
            let (u, _) = f.num().divmod(&shift.pow(vn))?;
            let (v, _) = f.den().divmod(&shift.pow(vd))?;
            let ut = u.taylor_coeffs(&alpha, needed)?.iter().map(|e| e.code()).collect();
            let vt = v.taylor_coeffs(&alpha, needed)?.iter().map(|e| e.code()).collect();
            (nu, ut, vt)
        }
        Place::Infinity => {
            let dn = f.num().degree().expect("nonzero numerator");
            let dd = f.den().degree().expect("nonzero denominator");
            let nu = dd as i64 - dn as i64;
            if nu < start {
                return Err(Error::PoleDeeperThanStart { pole: nu, start });
            }
            // substituting x = 1/t turns each polynomial into t^{-deg} times
            // its coefficient-reversal, a unit power series in t
            let ut = f.num().coeff_codes().iter().rev().copied().collect();
            let vt = f.den().coeff_codes().iter().rev().copied().collect();
            (nu, ut, vt)
        }
    };
    let needed = (start + count as i64 - nu).max(0) as usize;
    if needed == 0 {
        return Ok(LaurentSlice { place, start, coeffs: vec![field.zero(); count] });
    }
    let w = series_div(&field, &unit_num, &unit_den, needed)?;
    let coeffs = (0..count)
        .map(|k| {
            let idx = start - nu + k as i64;
            let code = if idx < 0 { 0 } else { w[idx as usize] };
            field.elem(code)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LaurentSlice { place, start, coeffs })
}

/// The s×r matrix of f: column i holds the expansion coefficients of f at
/// place P_i starting at exponent -n_i, lowest order in row 1. Errors unless
/// div(f) + G >= 0.
pub fn coeff_matrix(f: &RationalFn, spec: &AgCodeSpec) -> Result<MatrixWord> {
    let field = spec.field();
    if f.field() != field {
        return Err(Error::MixedFields);
    }
    let (s, r) = (spec.s(), spec.r());
    if f.is_zero() {
        return MatrixWord::from_codes(field, s, r, &vec![0; s * r]);
    }
    let g = spec.divisor();
    let d = common_denominator(field, g)?;
    let (_, rem) = d.divmod(f.den())?;
    if !rem.is_zero() {
        return Err(Error::NotInRiemannRochSpace(format!(
            "denominator {} has a pole the divisor does not allow",
            f.den()
        )));
    }
    let deg_num = f.num().degree().expect("nonzero numerator") as i64;
    let deg_den = f.den().degree().expect("nonzero denominator") as i64;
    let n_inf = g.coeff(Place::Infinity);
    if deg_num - deg_den > n_inf {
        return Err(Error::NotInRiemannRochSpace(format!(
            "pole of order {} at Pinf exceeds the allowed {}",
            deg_num - deg_den,
            n_inf.max(0)
        )));
    }
    for (place, n) in g.iter() {
        if n >= 0 {
            continue;
        }
        let order = match place {
            Place::Finite(c) => {
                let alpha = field.elem(c)?;
                f.num().vanishing_order(&alpha)?.expect("nonzero numerator") as i64
            }
            Place::Infinity => deg_den - deg_num,
        };
        if order < -n {
            return Err(Error::NotInRiemannRochSpace(format!(
                "required zero of order {} at {place} is missing (found order {order})",
                -n
            )));
        }
    }
    let mut entries = vec![0u64; s * r];
    for (j, &place) in spec.places().iter().enumerate() {
        let n_j = g.coeff(place);
        let slice = local_expansion(f, place, -n_j, s)?;
        for (i, c) in slice.coeffs.iter().enumerate() {
            entries[i * r + j] = c.code();
        }
    }
    MatrixWord::from_codes(field, s, r, &entries)
}

/// Per-column diagnostic min{s, a_i + n_i}, where a_i is the pole order of f
/// at P_i (negative when f vanishes there) and n_i the divisor coefficient;
/// defined for nonzero f only.
pub fn clipped_weights(f: &RationalFn, spec: &AgCodeSpec) -> Result<Vec<i64>> {
    if f.field() != spec.field() {
        return Err(Error::MixedFields);
    }
    if f.is_zero() {
        return Err(Error::ParameterOutOfRange(
            "the zero function has no pole orders".into(),
        ));
    }
    spec.places()
        .iter()
        .map(|&place| {
            let nu = f.valuation(place)?.expect("nonzero function");
            let a = -nu;
            Ok((spec.s() as i64).min(a + spec.divisor().coeff(place)))
        })
        .collect()
}

/// Basis of the subspace of L(G) whose lowest-order expansion coefficients
/// agree across all r places: r - 1 linear conditions on a Riemann-Roch
/// basis, dimension deg G - r + 2.
pub fn constrained_rr_basis(spec: &AgCodeSpec) -> Result<Vec<RationalFn>> {
    let field = spec.field();
    let g = spec.divisor();
    let space = rr_space(field, g)?;
    let dim0 = space.numerators.len();
    let reduced: Vec<RationalFn> = space
        .numerators
        .iter()
        .map(|p| RationalFn::new(p.clone(), space.den.clone()))
        .collect::<Result<_>>()?;
    let mut leads = vec![vec![0u64; spec.r()]; dim0];
    for (k, f) in reduced.iter().enumerate() {
        for (i, &place) in spec.places().iter().enumerate() {
            let n_i = g.coeff(place);
            leads[k][i] = local_expansion(f, place, -n_i, 1)?.coeffs[0].code();
        }
    }
    let rows: Vec<Vec<u64>> = (1..spec.r())
        .map(|i| (0..dim0).map(|k| field.sub_code(leads[k][0], leads[k][i])).collect())
        .collect();
    let combos = linalg::nullspace(field, rows, dim0);
    let want = g.degree() - spec.r() as i64 + 2;
    if combos.len() as i64 != want {
        return Err(Error::Invariant(format!(
            "constrained subspace has dimension {}, want deg G - r + 2 = {want}",
            combos.len()
        )));
    }
    combos
        .into_iter()
        .map(|x| {
            let mut num = Polynomial::zero(field);
            for (xk, p) in x.iter().zip(&space.numerators) {
                num = num.checked_add(&p.scale(&field.elem(*xk)?)?)?;
            }
            RationalFn::new(num, space.den.clone())
        })
        .collect()
}

pub(crate) fn encode_basis(
    spec: &AgCodeSpec,
    fns: &[RationalFn],
    constrained: bool,
) -> Result<Vec<MatrixWord>> {
    let shape = BottleneckShape::new(spec.s(), spec.r(), 1)?;
    fns.iter()
        .map(|f| {
            let w = coeff_matrix(f, spec)?;
            if constrained {
                w.with_shape(shape)
            } else {
                Ok(w)
            }
        })
        .collect()
}

/// The code { coeff_matrix(f) : f in the constrained subspace } in the
/// bottleneck metric U(s, r, 1).
pub fn build_ag_code(spec: &AgCodeSpec) -> Result<Code> {
    let basis = constrained_rr_basis(spec)?;
    let words = encode_basis(spec, &basis, true)?;
    Code::from_parts(CodeSpec::Ag(spec.clone()), Basis::Rational(basis), words)
}

/// The code { coeff_matrix(f) : f in L(G) } with no constraint, in the plain
/// NRT metric on the full s×r matrix.
pub fn build_ag_code_unconstrained(spec: &AgCodeSpec) -> Result<Code> {
    let basis = rr_basis(spec.field(), spec.divisor())?;
    let words = encode_basis(spec, &basis, false)?;
    Code::from_parts(CodeSpec::AgUnconstrained(spec.clone()), Basis::Rational(basis), words)
}

/// Inputs to the parameter inequality C(r+s+k-g, r-1) · A_k < h: genus g,
/// code shape (r, s), degree offset k, divisor class number h, and the count
/// A_k of positive divisors of degree k. h and A_k are caller-supplied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdsInequalityParams {
    pub g: u64,
    pub r: u64,
    pub s: u64,
    pub k: u64,
    pub h: BigUint,
    pub a_k: BigUint,
}

/// Outcome of the inequality check: exact sides, verdict, the parameter
/// bounds implied when it holds, and any precondition violations (reported,
/// never fatal).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdsReport {
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
    /// d >= s - g + 2 + k when the inequality holds.
    pub dist_bound: i64,
    /// dim >= rs - r + 1 - s, the headline form of the dimension bound.
    pub dim_bound: i64,
    /// dim >= rs - 2r - s + 1, what dim >= deg G - g - r + 2 gives at
    /// deg G = rs - r - s + g - 1; differs from `dim_bound` by r.
    pub dim_bound_alt: i64,
    /// g = k - 1: a holding inequality then makes the code MDS.
    pub mds_case: bool,
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

fn binom_big(n: i64, k: u64) -> BigUint {
    if n < 0 || (n as u64) < k {
        return BigUint::from(0u32);
    }
    let n = n as u64;
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

pub fn mds_inequality(params: &MdsInequalityParams) -> MdsReport {
    let MdsInequalityParams { g, r, s, k, ref h, ref a_k } = *params;
    let mut violations = Vec::new();
    if g < 1 {
        violations.push("g must be >= 1".into());
    }
    for (name, v) in [("r", r), ("s", s), ("k", k)] {
        if v < 1 {
            violations.push(format!("{name} must be >= 1"));
        }
    }
    let (gi, ri, si, ki) = (g as i64, r as i64, s as i64, k as i64);
    if 2 * ri + si - gi > ri * si {
        violations.push(format!("2r + s - g = {} exceeds rs = {}", 2 * ri + si - gi, ri * si));
    }
    if ki - 1 > gi {
        violations.push(format!("k - 1 = {} exceeds g = {gi}", ki - 1));
    }
    if gi > ri {
        violations.push(format!("g = {gi} exceeds r = {ri}"));
    }
    if gi - 1 > si {
        violations.push(format!("g - 1 = {} exceeds s = {si}", gi - 1));
    }

    let lhs = binom_big(ri + si + ki - gi, r.saturating_sub(1)) * a_k;
    let holds = lhs < *h;
    let mds_case = k == g + 1;
    let mut notes = vec![format!(
        "dim_bound = rs - r + 1 - s and dim_bound_alt = rs - 2r - s + 1 differ by r = {r}; \
         the alt value follows from dim >= deg G - g - r + 2 at deg G = rs - r - s + g - 1, \
         so both are reported"
    )];
    if mds_case {
        notes.push(
            "g = k - 1: when the inequality holds, dim + d meets the Singleton bound (MDS)"
                .into(),
        );
    }
    if g == 1 {
        notes.push(
            "g = 1: the near-MDS reading would need k = 0, which conflicts with k >= 1; \
             both constraints are surfaced rather than resolved"
                .into(),
        );
    }
    MdsReport {
        lhs,
        rhs: h.clone(),
        holds,
        dist_bound: si - gi + 2 + ki,
        dim_bound: ri * si - ri + 1 - si,
        dim_bound_alt: ri * si - 2 * ri - si + 1,
        mds_case,
        violations,
        notes,
    }
}

/// One point of the function-field sweep: evaluation places 0..r-1 and the
/// divisor Σ coeffs[i]·P_i + coeffs[r]·Pinf.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgSweepPoint {
    pub q: u64,
    pub r: usize,
    pub s: usize,
    pub coeffs: Vec<i64>,
}

impl AgSweepPoint {
    pub fn deg_g(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    fn spec(&self) -> Result<AgCodeSpec> {
        let field = Field::of_order(self.q)?;
        if self.coeffs.len() != self.r + 1 {
            return Err(Error::LengthMismatch { want: self.r + 1, got: self.coeffs.len() });
        }
        let places: Vec<Place> = (0..self.r as u64).map(Place::Finite).collect();
        let mut pairs: Vec<(Place, i64)> =
            places.iter().copied().zip(self.coeffs.iter().copied()).collect();
        pairs.push((Place::Infinity, self.coeffs[self.r]));
        AgCodeSpec::new(&field, &places, Divisor::new(&pairs), self.s)
    }
}

/// The function-field sweep grid: q in {5, 7, 8}, r and s in {2, 3},
/// divisors supported on the evaluation places and Pinf with coefficients in
/// [-3, 3] (lexicographic) and degree in [r-1, rs-r+1], keeping points whose
/// constrained dimension deg G - r + 2 is enumerable within `budget`.
pub fn ag_grid(budget: u64) -> Vec<AgSweepPoint> {
    let mut out = Vec::new();
    for q in [5u64, 7, 8] {
        for r in [2usize, 3] {
            for s in [2usize, 3] {
                let digits = r + 1;
                for code in 0..7u64.pow(digits as u32) {
                    let coeffs: Vec<i64> = (0..digits)
                        .map(|i| ((code / 7u64.pow((digits - 1 - i) as u32)) % 7) as i64 - 3)
                        .collect();
                    let deg: i64 = coeffs.iter().sum();
                    if deg < r as i64 - 1 || deg > (r * s) as i64 - r as i64 + 1 {
                        continue;
                    }
                    if pow_within(q, deg - r as i64 + 2, budget) {
                        out.push(AgSweepPoint { q, r, s, coeffs });
                    }
                }
            }
        }
    }
    out
}

/// Verify that every point's code meets its bounds: for the constrained
/// family dim >= deg G - r + 2, d >= rs - deg G, and dim + d at the Singleton
/// value (MDS); for the unconstrained family dim = deg G + 1 exactly and
/// d >= rs - deg G. Rows come back in input order.
pub fn run_ag_sweep(points: &[AgSweepPoint], budget: u64, constrained: bool) -> Vec<SweepRow> {
    points
        .par_iter()
        .map(|pt| ag_sweep_row(pt, budget, constrained))
        .collect()
}

fn ag_sweep_row(pt: &AgSweepPoint, budget: u64, constrained: bool) -> SweepRow {
    let deg = pt.deg_g();
    let (ri, si) = (pt.r as i64, pt.s as i64);
    let mut row = SweepRow {
        family: if constrained { "ag".into() } else { "ag-nrt".into() },
        q: pt.q,
        r: pt.r,
        s: pt.s,
        b_row: constrained.then_some(1),
        t: None,
        deg_g: Some(deg),
        expected_dim: if constrained { deg - ri + 2 } else { deg + 1 },
        observed_dim: None,
        expected_dist: ri * si - deg,
        observed_dist: None,
        status: SweepStatus::Pass,
        detail: String::new(),
    };
    let spec = match pt.spec() {
        Ok(s) => s,
        Err(e) => {
            row.status = SweepStatus::ParameterOutOfRange;
            row.detail = e.to_string();
            return row;
        }
    };
    let built = if constrained { build_ag_code(&spec) } else { build_ag_code_unconstrained(&spec) };
    let code = match built {
        Ok(c) => c,
        Err(e) => {
            row.status = SweepStatus::Fail;
            row.detail = format!("build failed: {e}");
            return row;
        }
    };
    row.observed_dim = Some(code.dim() as u64);
    let dim = code.dim() as i64;
    if constrained {
        if dim < row.expected_dim {
            row.status = SweepStatus::Fail;
            row.detail = format!("dimension {dim} below the bound {}", row.expected_dim);
            return row;
        }
    } else if dim != row.expected_dim {
        row.status = SweepStatus::Fail;
        row.detail = format!("dimension {dim} differs from the claimed {}", row.expected_dim);
        return row;
    }
    match code.min_distance(budget) {
        Ok(d) => {
            row.observed_dist = Some(d as u64);
            let d = d as i64;
            if d < row.expected_dist {
                row.status = SweepStatus::Fail;
                row.detail = format!("distance {d} below the bound {}", row.expected_dist);
            } else if constrained && dim + d < ri * si - ri + 2 {
                row.status = SweepStatus::Fail;
                row.detail = format!(
                    "dim + d = {} misses the Singleton value {}",
                    dim + d,
                    ri * si - ri + 2
                );
            }
        }
        Err(Error::BudgetExceeded { needed, budget }) => {
            row.status = SweepStatus::BudgetExceeded;
            row.detail = format!("{needed} codewords exceed the budget of {budget}");
        }
        Err(e) => {
            row.status = SweepStatus::Fail;
            row.detail = format!("enumeration failed: {e}");
        }
    }
    row
}
