//! Evaluation codes in the NRT and bottleneck metrics: constrained polynomial
//! spaces, code construction, exhaustive weight enumeration, minimum distance,
//! Singleton/MDS reporting, metric comparison tables, and parameter sweeps.

use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agcodes::{AgCodeSpec, RationalFn};
use crate::gf::{Field, FieldElement};
use crate::linalg;
use crate::poly::Polynomial;
use crate::poset::{
    bottleneck, bottleneck_weight_nz, chain_union, nrt_weight_nz, BottleneckShape, MatrixWord,
    Poset,
};
use crate::{Error, Result};

/// The poset metric a code's words are weighed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Nrt { s: usize, r: usize },
    Bottleneck(BottleneckShape),
}

impl Metric {
    pub fn s(&self) -> usize {
        match *self {
            Metric::Nrt { s, .. } => s,
            Metric::Bottleneck(sh) => sh.s(),
        }
    }

    pub fn r(&self) -> usize {
        match *self {
            Metric::Nrt { r, .. } => r,
            Metric::Bottleneck(sh) => sh.r(),
        }
    }

    /// Number of poset vertices = code length.
    pub fn length(&self) -> usize {
        match *self {
            Metric::Nrt { s, r } => s * r,
            Metric::Bottleneck(sh) => sh.vertex_count(),
        }
    }

    /// The underlying poset (generic weight oracle lives there).
    pub fn poset(&self) -> Poset {
        match *self {
            Metric::Nrt { s, r } => chain_union(s, r).expect("metric dims validated"),
            Metric::Bottleneck(sh) => bottleneck(sh),
        }
    }

    /// Weight of a matrix word in this metric.
    pub fn weight(&self, w: &MatrixWord) -> Result<usize> {
        if w.s() != self.s() || w.r() != self.r() {
            return Err(Error::LengthMismatch { want: self.s() * self.r(), got: w.s() * w.r() });
        }
        match *self {
            Metric::Nrt { .. } => Ok(w.nrt_weight()),
            Metric::Bottleneck(sh) => {
                let codes = w.entry_codes();
                let row = &codes[(sh.b_row() - 1) * sh.r()..sh.b_row() * sh.r()];
                if row.iter().any(|&c| c != row[0]) {
                    return Err(Error::NotConstantRow { row: sh.b_row() });
                }
                Ok(bottleneck_weight_nz(sh.s(), sh.r(), sh.b_row(), |i, j| {
                    codes[i * sh.r() + j] != 0
                }))
            }
        }
    }

    fn weight_of_buf(&self, buf: &[u64]) -> usize {
        let r = self.r();
        match *self {
            Metric::Nrt { s, .. } => nrt_weight_nz(s, r, |i, j| buf[i * r + j] != 0),
            Metric::Bottleneck(sh) => {
                bottleneck_weight_nz(sh.s(), r, sh.b_row(), |i, j| buf[i * r + j] != 0)
            }
        }
    }
}

/// Parameters of an evaluation code on polynomials: r distinct points, s
/// derivative rows, messages from the polynomials of degree < t, and an
/// optional constant-row constraint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RsCodeSpecRepr", into = "RsCodeSpecRepr")]
pub struct RsCodeSpec {
    field: Field,
    points: Vec<u64>,
    s: usize,
    t: usize,
    b_row: Option<usize>,
}

#[derive(Serialize, Deserialize, Clone)]
struct RsCodeSpecRepr {
    field: Field,
    points: Vec<u64>,
    s: usize,
    t: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b_row: Option<usize>,
}

impl TryFrom<RsCodeSpecRepr> for RsCodeSpec {
    type Error = Error;
    fn try_from(raw: RsCodeSpecRepr) -> Result<Self> {
        RsCodeSpec::from_point_codes(&raw.field, &raw.points, raw.s, raw.t, raw.b_row)
    }
}

impl From<RsCodeSpec> for RsCodeSpecRepr {
    fn from(spec: RsCodeSpec) -> Self {
        RsCodeSpecRepr {
            field: spec.field,
            points: spec.points,
            s: spec.s,
            t: spec.t,
            b_row: spec.b_row,
        }
    }
}

impl RsCodeSpec {
    pub fn new(
        field: &Field,
        points: &[FieldElement],
        s: usize,
        t: usize,
        b_row: Option<usize>,
    ) -> Result<RsCodeSpec> {
        for pt in points {
            if pt.field() != field {
                return Err(Error::MixedFields);
            }
        }
        let codes: Vec<u64> = points.iter().map(|p| p.code()).collect();
        Self::from_point_codes(field, &codes, s, t, b_row)
    }

    /// Points given as integer element codes.
    pub fn from_point_codes(
        field: &Field,
        point_codes: &[u64],
        s: usize,
        t: usize,
        b_row: Option<usize>,
    ) -> Result<RsCodeSpec> {
        if point_codes.is_empty() {
            return Err(Error::ParameterOutOfRange("at least one evaluation point".into()));
        }
        for &c in point_codes {
            field.elem(c)?;
        }
        let mut sorted = point_codes.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoints);
        }
        let r = point_codes.len();
        if s < 1 {
            return Err(Error::ParameterOutOfRange("s must be >= 1".into()));
        }
        if t < 1 || t > r * s {
            return Err(Error::ParameterOutOfRange(format!(
                "t must satisfy 1 <= t <= rs = {}, got {t}",
                r * s
            )));
        }
        if let Some(b) = b_row {
            if b < 1 || b > s {
                return Err(Error::ParameterOutOfRange(format!(
                    "b_row must satisfy 1 <= b_row <= s = {s}, got {b}"
                )));
            }
            if r < 2 {
                return Err(Error::ParameterOutOfRange(
                    "constant-row codes need r >= 2 points".into(),
                ));
            }
            if t < r * (b - 1) + 1 {
                return Err(Error::ParameterOutOfRange(format!(
                    "t must satisfy r(b_row - 1) + 1 = {} <= t <= rs, got {t}",
                    r * (b - 1) + 1
                )));
            }
        }
        Ok(RsCodeSpec { field: field.clone(), points: point_codes.to_vec(), s, t, b_row })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn points(&self) -> Vec<FieldElement> {
        self.points.iter().map(|&c| self.field.elem(c).unwrap()).collect()
    }

    pub fn point_codes(&self) -> &[u64] {
        &self.points
    }

    pub fn r(&self) -> usize {
        self.points.len()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn b_row(&self) -> Option<usize> {
        self.b_row
    }

    pub fn metric(&self) -> Metric {
        match self.b_row {
            Some(b) => Metric::Bottleneck(
                BottleneckShape::new(self.s, self.r(), b).expect("validated on construction"),
            ),
            None => Metric::Nrt { s: self.s, r: self.r() },
        }
    }
}

/// Provenance of a built code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeSpec {
    Rs(RsCodeSpec),
    Ag(AgCodeSpec),
    AgUnconstrained(AgCodeSpec),
}

impl CodeSpec {
    pub fn field(&self) -> &Field {
        match self {
            CodeSpec::Rs(s) => s.field(),
            CodeSpec::Ag(s) | CodeSpec::AgUnconstrained(s) => s.field(),
        }
    }

    pub fn metric(&self) -> Metric {
        match self {
            CodeSpec::Rs(s) => s.metric(),
            CodeSpec::Ag(s) => Metric::Bottleneck(
                BottleneckShape::new(s.s(), s.r(), 1).expect("validated on construction"),
            ),
            CodeSpec::AgUnconstrained(s) => Metric::Nrt { s: s.s(), r: s.r() },
        }
    }
}

/// Message basis of a code: polynomials for point-evaluation codes, rational
/// functions for the function-field construction.
#[derive(Clone, Debug, PartialEq)]
pub enum Basis {
    Poly(Vec<Polynomial>),
    Rational(Vec<RationalFn>),
}

impl Basis {
    pub fn len(&self) -> usize {
        match self {
            Basis::Poly(v) => v.len(),
            Basis::Rational(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A linear code given by an independent message basis together with its
/// encoded generator words; immutable once built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CodeRepr", into = "CodeRepr")]
pub struct Code {
    spec: CodeSpec,
    metric: Metric,
    basis: Basis,
    words: Vec<MatrixWord>,
}

#[derive(Serialize, Deserialize, Clone)]
struct CodeRepr {
    spec: CodeSpec,
    metric: Metric,
    length: usize,
    dim: usize,
    basis: Vec<BasisFnRepr>,
}

#[derive(Serialize, Deserialize, Clone)]
struct BasisFnRepr {
    num: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    den: Option<Vec<u64>>,
}

impl TryFrom<CodeRepr> for Code {
    type Error = Error;
    fn try_from(repr: CodeRepr) -> Result<Code> {
        let field = repr.spec.field().clone();
        let code = match &repr.spec {
            CodeSpec::Rs(spec) => {
                let basis = repr
                    .basis
                    .iter()
                    .map(|b| {
                        if b.den.as_deref().is_some_and(|d| d != [1]) {
                            return Err(Error::Parse(
                                "point-evaluation basis entries must be polynomials".into(),
                            ));
                        }
                        Polynomial::from_codes(&field, &b.num)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let words = encode_poly_basis(spec, &basis)?;
                Code::from_parts(repr.spec.clone(), Basis::Poly(basis), words)?
            }
            CodeSpec::Ag(spec) | CodeSpec::AgUnconstrained(spec) => {
                let fns = repr
                    .basis
                    .iter()
                    .map(|b| {
                        let num = Polynomial::from_codes(&field, &b.num)?;
                        let den = match &b.den {
                            Some(d) => Polynomial::from_codes(&field, d)?,
                            None => Polynomial::constant(&field.one()),
                        };
                        RationalFn::new(num, den)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let constrained = matches!(repr.spec, CodeSpec::Ag(_));
                let words = crate::agcodes::encode_basis(spec, &fns, constrained)?;
                Code::from_parts(repr.spec.clone(), Basis::Rational(fns), words)?
            }
        };
        if code.length() != repr.length || code.dim() != repr.dim || code.metric != repr.metric {
            return Err(Error::Parse(
                "code file is inconsistent with its own spec".into(),
            ));
        }
        Ok(code)
    }
}

impl From<Code> for CodeRepr {
    fn from(code: Code) -> CodeRepr {
        let basis = match &code.basis {
            Basis::Poly(polys) => polys
                .iter()
                .map(|p| BasisFnRepr { num: p.coeff_codes().to_vec(), den: None })
                .collect(),
            Basis::Rational(fns) => fns
                .iter()
                .map(|f| BasisFnRepr {
                    num: f.num().coeff_codes().to_vec(),
                    den: Some(f.den().coeff_codes().to_vec()),
                })
                .collect(),
        };
        CodeRepr {
            metric: code.metric,
            length: code.length(),
            dim: code.dim(),
            spec: code.spec,
            basis,
        }
    }
}

impl Code {
    pub(crate) fn from_parts(
        spec: CodeSpec,
        basis: Basis,
        words: Vec<MatrixWord>,
    ) -> Result<Code> {
        let metric = spec.metric();
        if words.len() != basis.len() {
            return Err(Error::Invariant(format!(
                "{} basis functions but {} generator words",
                basis.len(),
                words.len()
            )));
        }
        let cells = metric.s() * metric.r();
        for w in &words {
            if w.s() != metric.s() || w.r() != metric.r() {
                return Err(Error::Invariant("generator word has wrong dimensions".into()));
            }
            if let Metric::Bottleneck(sh) = metric {
                if w.shape() != Some(sh) {
                    return Err(Error::Invariant(
                        "generator word of a constant-row code is untagged".into(),
                    ));
                }
            }
        }
        let rows: Vec<Vec<u64>> = words.iter().map(|w| w.entry_codes().to_vec()).collect();
        if linalg::rank(spec.field(), rows, cells) != words.len() {
            return Err(Error::Invariant(
                "basis words are linearly dependent; encoding would not be injective".into(),
            ));
        }
        Ok(Code { spec, metric, basis, words })
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn field(&self) -> &Field {
        self.spec.field()
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    /// Encoded generator words, one per basis function.
    pub fn basis_words(&self) -> &[MatrixWord] {
        &self.words
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn length(&self) -> usize {
        self.metric.length()
    }

    /// Number of codewords, if it fits in u128.
    pub fn size(&self) -> u128 {
        (self.field().order() as u128)
            .checked_pow(self.dim() as u32)
            .unwrap_or(u128::MAX)
    }

    /// Encode a message (coordinates in the basis) to its matrix word.
    pub fn encode(&self, message: &[FieldElement]) -> Result<MatrixWord> {
        if message.len() != self.dim() {
            return Err(Error::LengthMismatch { want: self.dim(), got: message.len() });
        }
        let field = self.field();
        for c in message {
            if c.field() != field {
                return Err(Error::MixedFields);
            }
        }
        match (&self.spec, &self.basis) {
            (CodeSpec::Rs(spec), Basis::Poly(polys)) => {
                let mut f = Polynomial::zero(field);
                for (c, b) in message.iter().zip(polys) {
                    f = f.checked_add(&b.scale(c)?)?;
                }
                let w = hyper_matrix(&f, &spec.points(), spec.s())?;
                match spec.b_row() {
                    Some(b) => w.with_shape(BottleneckShape::new(spec.s(), spec.r(), b)?),
                    None => Ok(w),
                }
            }
            (CodeSpec::Ag(spec), Basis::Rational(fns))
            | (CodeSpec::AgUnconstrained(spec), Basis::Rational(fns)) => {
                let mut f = RationalFn::from_poly(Polynomial::zero(field));
                for (c, b) in message.iter().zip(fns) {
                    f = f.checked_add(&b.scale(c)?)?;
                }
                let w = crate::agcodes::coeff_matrix(&f, spec)?;
                match self.metric {
                    Metric::Bottleneck(sh) => w.with_shape(sh),
                    Metric::Nrt { .. } => Ok(w),
                }
            }
            _ => Err(Error::Invariant("basis kind does not match code spec".into())),
        }
    }

    /// The subcode spanned by the given basis indices.
    pub fn subcode(&self, keep: &[usize]) -> Result<Code> {
        let mut seen = vec![false; self.dim()];
        for &i in keep {
            if i >= self.dim() {
                return Err(Error::ParameterOutOfRange(format!(
                    "basis index {i} out of range for dimension {}",
                    self.dim()
                )));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::ParameterOutOfRange(format!("duplicate basis index {i}")));
            }
        }
        let basis = match &self.basis {
            Basis::Poly(v) => Basis::Poly(keep.iter().map(|&i| v[i].clone()).collect()),
            Basis::Rational(v) => Basis::Rational(keep.iter().map(|&i| v[i].clone()).collect()),
        };
        let words = keep.iter().map(|&i| self.words[i].clone()).collect();
        Code::from_parts(self.spec.clone(), basis, words)
    }

    /// Exhaustive weight tally over all q^dim codewords. Deterministic for a
    /// given code regardless of worker count.
    pub fn weight_enumerator(&self, budget: u64) -> Result<WeightEnumerator> {
        let needed = self.size();
        if needed > u128::from(budget) {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let total = needed as u64;
        let field = self.field().clone();
        let p = field.p();
        let m = field.m() as usize;
        let cells = self.metric.s() * self.metric.r();
        let n_counts = self.length() + 1;

        // one word per base-p digit of the message vector: basis word i scaled
        // by the element p^l, so stepping any digit is a single word addition
        let mut scaled: Vec<Vec<u64>> = Vec::with_capacity(self.dim() * m);
        for w in &self.words {
            let codes = w.entry_codes();
            let mut unit = 1u64;
            for _ in 0..m {
                scaled.push(codes.iter().map(|&c| field.mul_code(c, unit)).collect());
                unit *= p;
            }
        }

        let nchunks = total.min(256);
        let metric = self.metric;
        let counts = (0..nchunks)
            .into_par_iter()
            .map(|ci| {
                let start = ((ci as u128 * total as u128) / nchunks as u128) as u64;
                let end = (((ci + 1) as u128 * total as u128) / nchunks as u128) as u64;
                chunk_tally(&field, &scaled, metric, cells, n_counts, start, end)
            })
            .reduce(
                || vec![0u64; n_counts],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(&b) {
                        *x += y;
                    }
                    a
                },
            );
        Ok(WeightEnumerator { counts })
    }

    /// Minimum weight of a nonzero codeword, by exhaustive enumeration.
    pub fn min_distance(&self, budget: u64) -> Result<usize> {
        if self.dim() == 0 {
            return Err(Error::ParameterOutOfRange(
                "minimum distance of a zero-dimensional code".into(),
            ));
        }
        self.weight_enumerator(budget)?
            .min_nonzero_weight()
            .ok_or_else(|| Error::Invariant("nonzero code with no nonzero-weight word".into()))
    }

    pub fn singleton_report(&self, d: usize) -> SingletonReport {
        let n = self.length();
        let k = self.dim();
        let slack = n as i64 - k as i64 + 1 - d as i64;
        SingletonReport { n, k, d, slack, mds: slack == 0 }
    }
}

/// Enumerate the message block [start, end) (base-p odometer), tallying
/// metric weights. A digit stepping p-1 -> 0 still adds its word once more:
/// p equal additions cancel in characteristic p, which restores the word
/// before the carry moves on.
fn chunk_tally(
    field: &Field,
    scaled: &[Vec<u64>],
    metric: Metric,
    cells: usize,
    n_counts: usize,
    start: u64,
    end: u64,
) -> Vec<u64> {
    let mut counts = vec![0u64; n_counts];
    if start >= end {
        return counts;
    }
    let p = field.p();
    let mut digits = vec![0u64; scaled.len()];
    let mut g = start;
    for d in digits.iter_mut() {
        *d = g % p;
        g /= p;
    }
    let mut word = vec![0u64; cells];
    for (j, &dj) in digits.iter().enumerate() {
        if dj != 0 {
            for (c, w) in word.iter_mut().zip(&scaled[j]) {
                *c = field.add_code(*c, field.mul_code(*w, dj));
            }
        }
    }
    let mut idx = start;
    loop {
        counts[metric.weight_of_buf(&word)] += 1;
        idx += 1;
        if idx >= end {
            break;
        }
        let mut j = 0;
        loop {
            for (c, w) in word.iter_mut().zip(&scaled[j]) {
                *c = field.add_code(*c, *w);
            }
            digits[j] += 1;
            if digits[j] < p {
                break;
            }
            digits[j] = 0;
            j += 1;
        }
    }
    counts
}

/// counts[w] = number of codewords of weight w, for w in 0..=length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEnumerator {
    counts: Vec<u64>,
}

impl WeightEnumerator {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, w: usize) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| u128::from(c)).sum()
    }

    pub fn min_nonzero_weight(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&w| self.counts[w] != 0)
    }

    /// Generating polynomial in ascending powers, e.g. "1 + 4x^3 + 20x^4".
    pub fn poly_string(&self) -> String {
        let terms: Vec<String> = self
            .counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(w, &c)| match (w, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".into(),
                (1, c) => format!("{c}x"),
                (w, 1) => format!("x^{w}"),
                (w, c) => format!("{c}x^{w}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly_string())
    }
}

/// Code parameters against the Singleton bound d <= n - k + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingletonReport {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// n - k + 1 - d; zero exactly for MDS codes.
    pub slack: i64,
    pub mds: bool,
}

/// Basis of { f of degree < t : the order-`deriv_order` hyperderivative takes
/// one shared value at every point }, via the nullspace of the augmented
/// system with the shared value as one extra unknown.
pub fn constrained_basis(
    field: &Field,
    points: &[FieldElement],
    t: usize,
    deriv_order: usize,
) -> Result<Vec<Polynomial>> {
    if t < 1 {
        return Err(Error::ParameterOutOfRange("t must be >= 1".into()));
    }
    if points.is_empty() {
        return Err(Error::ParameterOutOfRange("at least one evaluation point".into()));
    }
    let mut sorted: Vec<u64> = Vec::with_capacity(points.len());
    for pt in points {
        if pt.field() != field {
            return Err(Error::MixedFields);
        }
        sorted.push(pt.code());
    }
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicatePoints);
    }

    let mut rows = Vec::with_capacity(points.len());
    for pt in points {
        let a = pt.code();
        let mut row = Vec::with_capacity(t + 1);
        for l in 0..t {
            if l < deriv_order {
                row.push(0);
            } else {
                let b = field.binom_code(l as u64, deriv_order as u64);
                let pw = field.pow_code(a, (l - deriv_order) as u64);
                row.push(field.mul_code(b, pw));
            }
        }
        row.push(field.neg_code(1)); // minus the shared value
        rows.push(row);
    }
    let basis = linalg::nullspace(field, rows, t + 1)
        .into_iter()
        .map(|v| Polynomial::from_raw(field.clone(), v[..t].to_vec()))
        .collect();
    Ok(basis)
}

/// H(f): the s×r matrix with entry (i, j) the order-(i-1) hyperderivative of
/// f at the j-th point.
pub fn hyper_matrix(f: &Polynomial, points: &[FieldElement], s: usize) -> Result<MatrixWord> {
    if s < 1 || points.is_empty() {
        return Err(Error::ParameterOutOfRange("hyperderivative matrix must be nonempty".into()));
    }
    let field = f.field();
    let r = points.len();
    let mut entries = vec![0u64; s * r];
    for (j, pt) in points.iter().enumerate() {
        let col = f.taylor_coeffs(pt, s)?;
        for (i, c) in col.iter().enumerate() {
            entries[i * r + j] = c.code();
        }
    }
    MatrixWord::from_codes(field, s, r, &entries)
}

fn encode_poly_basis(spec: &RsCodeSpec, basis: &[Polynomial]) -> Result<Vec<MatrixWord>> {
    let points = spec.points();
    basis
        .iter()
        .map(|b| {
            let w = hyper_matrix(b, &points, spec.s())?;
            match spec.b_row() {
                Some(br) => w.with_shape(BottleneckShape::new(spec.s(), spec.r(), br)?),
                None => Ok(w),
            }
        })
        .collect()
}

/// Build the evaluation code for a spec: with a constant-row constraint the
/// metric is the bottleneck poset and the basis is the constrained space;
/// without it the metric is the chain union and the basis is 1, z, ..., z^{t-1}.
pub fn build_code(spec: &RsCodeSpec) -> Result<Code> {
    let field = spec.field();
    let basis = match spec.b_row() {
        Some(b) => constrained_basis(field, &spec.points(), spec.t(), b - 1)?,
        None => (0..spec.t()).map(|k| Polynomial::monomial(&field.one(), k)).collect(),
    };
    let words = encode_poly_basis(spec, &basis)?;
    Code::from_parts(CodeSpec::Rs(spec.clone()), Basis::Poly(basis), words)
}

/// One side of a metric comparison table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSummary {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub rate: Ratio<u64>,
    pub relative_distance: Ratio<u64>,
}

/// The plain NRT code and the constant-top-row bottleneck code on the same
/// points, side by side: same distance, shorter length, higher relative
/// distance for the bottleneck construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricComparison {
    pub q: u64,
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub nrt: CodeSummary,
    pub bottleneck: CodeSummary,
    pub bottleneck_advantage: bool,
}

pub fn compare_metrics(
    field: &Field,
    points: &[FieldElement],
    s: usize,
    t: usize,
    budget: u64,
) -> Result<MetricComparison> {
    let r = points.len();
    if t < r {
        return Err(Error::ParameterOutOfRange(format!(
            "comparison needs t >= r = {r} so both codes are nontrivial, got t = {t}"
        )));
    }
    let c1 = build_code(&RsCodeSpec::new(field, points, s, t, None)?)?;
    let c2 = build_code(&RsCodeSpec::new(field, points, s, t, Some(1))?)?;
    let d1 = c1.min_distance(budget)?;
    let d2 = c2.min_distance(budget)?;

    let closed_d = r * s - t + 1;
    if c1.dim() != t || c2.dim() != t - r + 1 || d1 != closed_d || d2 != closed_d {
        return Err(Error::Invariant(format!(
            "comparison parameters disagree with closed forms: dims {}/{} want {}/{}, distances {}/{} want {}",
            c1.dim(), c2.dim(), t, t - r + 1, d1, d2, closed_d
        )));
    }

    let summary = |c: &Code, d: usize| CodeSummary {
        n: c.length(),
        k: c.dim(),
        d,
        rate: Ratio::new(c.dim() as u64, c.length() as u64),
        relative_distance: Ratio::new(d as u64, c.length() as u64),
    };
    let nrt = summary(&c1, d1);
    let bott = summary(&c2, d2);
    let advantage = bott.relative_distance > nrt.relative_distance;
    Ok(MetricComparison {
        q: field.order(),
        r,
        s,
        t,
        nrt,
        bottleneck: bott,
        bottleneck_advantage: advantage,
    })
}

/// One point of a sweep over code parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsSweepPoint {
    pub q: u64,
    pub r: usize,
    pub s: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_row: Option<usize>,
    pub t: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepStatus {
    Pass,
    Fail,
    BudgetExceeded,
    ParameterOutOfRange,
}

impl fmt::Display for SweepStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SweepStatus::Pass => "PASS",
            SweepStatus::Fail => "FAIL",
            SweepStatus::BudgetExceeded => "BUDGET_EXCEEDED",
            SweepStatus::ParameterOutOfRange => "PARAMETER_OUT_OF_RANGE",
        };
        write!(f, "{s}")
    }
}

/// One verified parameter point. For the exact families (`bottleneck`, `nrt`)
/// expected values are claims that must match exactly; for the function-field
/// families (`ag`, `ag-nrt`) they are lower bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub q: u64,
    pub r: usize,
    pub s: usize,
    pub b_row: Option<usize>,
    pub t: Option<usize>,
    pub deg_g: Option<i64>,
    pub expected_dim: i64,
    pub observed_dim: Option<u64>,
    pub expected_dist: i64,
    pub observed_dist: Option<u64>,
    pub status: SweepStatus,
    pub detail: String,
}

/// Field orders every default sweep grid ranges over.
pub const SWEEP_FIELD_ORDERS: [u64; 6] = [3, 4, 5, 7, 8, 9];

pub(crate) fn pow_within(q: u64, e: i64, budget: u64) -> bool {
    if e <= 0 {
        return true;
    }
    match (q as u128).checked_pow(e as u32) {
        Some(v) => v <= u128::from(budget),
        None => false,
    }
}

/// The constant-row sweep grid: all (q, r, s, b_row, t) with q in
/// `SWEEP_FIELD_ORDERS`, 2 <= r <= min(q, 4), 2 <= s <= 4, 1 <= b_row <= s,
/// r(b_row-1)+1 <= t <= rs, keeping points whose claimed dimension is
/// enumerable within `budget`.
pub fn bottleneck_grid(budget: u64) -> Vec<RsSweepPoint> {
    let mut out = Vec::new();
    for &q in &SWEEP_FIELD_ORDERS {
        for r in 2..=(q.min(4) as usize) {
            for s in 2..=4 {
                for b_row in 1..=s {
                    for t in (r * (b_row - 1) + 1)..=(r * s) {
                        if pow_within(q, t as i64 - r as i64 + 1, budget) {
                            out.push(RsSweepPoint { q, r, s, b_row: Some(b_row), t });
                        }
                    }
                }
            }
        }
    }
    out
}

/// The unconstrained sweep grid: same (q, r, s) ranges, 1 <= t <= rs, keeping
/// points with q^t within `budget`.
pub fn nrt_grid(budget: u64) -> Vec<RsSweepPoint> {
    let mut out = Vec::new();
    for &q in &SWEEP_FIELD_ORDERS {
        for r in 2..=(q.min(4) as usize) {
            for s in 2..=4 {
                for t in 1..=(r * s) {
                    if pow_within(q, t as i64, budget) {
                        out.push(RsSweepPoint { q, r, s, b_row: None, t });
                    }
                }
            }
        }
    }
    out
}

/// Verify each point: build the code, compare its dimension with the claim,
/// then (only if the dimension is right) enumerate the minimum distance and
/// compare with rs - t + 1. Rows come back in input order.
pub fn run_rs_sweep(points: &[RsSweepPoint], budget: u64) -> Vec<SweepRow> {
    points.par_iter().map(|pt| rs_sweep_row(pt, budget)).collect()
}

fn rs_sweep_row(pt: &RsSweepPoint, budget: u64) -> SweepRow {
    let expected_dim = match pt.b_row {
        Some(_) => pt.t as i64 - pt.r as i64 + 1,
        None => pt.t as i64,
    };
    let mut row = SweepRow {
        family: if pt.b_row.is_some() { "bottleneck".into() } else { "nrt".into() },
        q: pt.q,
        r: pt.r,
        s: pt.s,
        b_row: pt.b_row,
        t: Some(pt.t),
        deg_g: None,
        expected_dim,
        observed_dim: None,
        expected_dist: (pt.r * pt.s) as i64 - pt.t as i64 + 1,
        observed_dist: None,
        status: SweepStatus::Pass,
        detail: String::new(),
    };
    let spec = Field::of_order(pt.q).and_then(|field| {
        let codes: Vec<u64> = (0..pt.r as u64).collect();
        RsCodeSpec::from_point_codes(&field, &codes, pt.s, pt.t, pt.b_row)
    });
    let spec = match spec {
        Ok(s) => s,
        Err(e) => {
            row.status = SweepStatus::ParameterOutOfRange;
            row.detail = e.to_string();
            return row;
        }
    };
    let code = match build_code(&spec) {
        Ok(c) => c,
        Err(e) => {
            row.status = SweepStatus::Fail;
            row.detail = format!("build failed: {e}");
            return row;
        }
    };
    row.observed_dim = Some(code.dim() as u64);
    if code.dim() as i64 != row.expected_dim {
        row.status = SweepStatus::Fail;
        row.detail = format!(
            "dimension {} differs from the claimed {}",
            code.dim(),
            row.expected_dim
        );
        return row;
    }
    match code.min_distance(budget) {
        Ok(d) => {
            row.observed_dist = Some(d as u64);
            if d as i64 != row.expected_dist {
                row.status = SweepStatus::Fail;
                row.detail =
                    format!("distance {d} differs from the claimed {}", row.expected_dist);
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
