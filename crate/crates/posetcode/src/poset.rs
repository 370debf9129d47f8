//! Finite graded posets, the chain-union and bottleneck families, and the
//! poset weights they induce on vectors and on derivative matrices.
//!
//! Conventions used throughout:
//! - Levels are 1-indexed from the bottom; stored ranks are 0-indexed, so a
//!   vertex at level l has rank l - 1.
//! - A derivative matrix has row 1 (index 0) holding the order-0 values, which
//!   sit at the TOP rank; matrix row i corresponds to level s - i + 1.
//! - `b_row` is the 1-indexed matrix row that is constant across columns; the
//!   derivative order it pins down is b_row - 1.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::gf::{Field, FieldElement};
use crate::{Error, Result};

/// A finite poset with labeled vertices and a graded rank function
/// (every covering pair increases rank by exactly 1, minimal elements at 0).
#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<u64>,
    /// leq[i][j] is true when vertex i <= vertex j.
    leq: Vec<Vec<bool>>,
    rank: Vec<usize>,
}

impl Poset {
    /// Build from vertex labels and covering pairs (low, high). The relation
    /// generated must be a partial order admitting a graded rank function.
    pub fn from_covers(labels: &[u64], covers: &[(u64, u64)]) -> Result<Poset> {
        let n = labels.len();
        let mut index: HashMap<u64, usize> = HashMap::with_capacity(n);
        for (i, &l) in labels.iter().enumerate() {
            if index.insert(l, i).is_some() {
                return Err(Error::ParameterOutOfRange(format!("duplicate vertex label {l}")));
            }
        }
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in covers {
            let (&i, &j) = match (index.get(&a), index.get(&b)) {
                (Some(i), Some(j)) => (i, j),
                _ => {
                    return Err(Error::ParameterOutOfRange(format!(
                        "covering pair ({a}, {b}) references an unknown label"
                    )))
                }
            };
            if i == j {
                return Err(Error::ParameterOutOfRange(format!("self-loop at label {a}")));
            }
            if !up[i].contains(&j) {
                up[i].push(j);
            }
        }

        // Kahn's algorithm: a leftover vertex means a cycle.
        let mut indeg = vec![0usize; n];
        for outs in &up {
            for &j in outs {
                indeg[j] += 1;
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(i) = queue.pop() {
            topo.push(i);
            for &j in &up[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push(j);
                }
            }
        }
        if topo.len() != n {
            return Err(Error::ParameterOutOfRange(
                "covering relation contains a cycle".into(),
            ));
        }

        // Reachability closure, reflexive.
        let mut leq = vec![vec![false; n]; n];
        for &i in topo.iter().rev() {
            leq[i][i] = true;
            for &j in &up[i] {
                let row_j = leq[j].clone();
                for (k, &v) in row_j.iter().enumerate() {
                    if v {
                        leq[i][k] = true;
                    }
                }
            }
        }

        // Covering pairs of the generated order (transitive reduction), then
        // the unique candidate rank function, checked for consistency.
        let reduction = transitive_reduction(&leq);
        let mut rank = vec![usize::MAX; n];
        for &v in &topo {
            let mut cand: Option<usize> = None;
            for &(lo, hi) in &reduction {
                if hi == v {
                    let want = rank[lo] + 1;
                    match cand {
                        None => cand = Some(want),
                        Some(c) if c != want => {
                            return Err(Error::ParameterOutOfRange(format!(
                                "no graded rank function: vertex {} is covered at two different ranks",
                                labels[v]
                            )))
                        }
                        Some(_) => {}
                    }
                }
            }
            rank[v] = cand.unwrap_or(0);
        }

        Ok(Poset { labels: labels.to_vec(), leq, rank })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn index_of(&self, label: u64) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Rank by vertex index, 0 on minimal elements.
    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn is_maximal(&self, i: usize) -> bool {
        (0..self.n()).all(|j| j == i || !self.leq[i][j])
    }

    /// Covering pairs (low label, high label) of the order, sorted.
    pub fn covers(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = transitive_reduction(&self.leq)
            .into_iter()
            .map(|(i, j)| (self.labels[i], self.labels[j]))
            .collect();
        out.sort_unstable();
        out
    }

    /// |lower order ideal generated by the support of v|, v aligned
    /// positionally with `labels()`. The generic weight oracle.
    pub fn p_weight(&self, v: &[FieldElement]) -> Result<usize> {
        if v.len() != self.n() {
            return Err(Error::LengthMismatch { want: self.n(), got: v.len() });
        }
        let mut in_ideal = vec![false; self.n()];
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                for (j, flag) in in_ideal.iter_mut().enumerate() {
                    *flag |= self.leq[j][i];
                }
            }
        }
        Ok(in_ideal.iter().filter(|&&b| b).count())
    }

    /// Hasse diagram in DOT format, drawn bottom-up.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph poset {\n  rankdir = BT;\n");
        let max_rank = self.rank.iter().copied().max().unwrap_or(0);
        for r in 0..=max_rank {
            let level: Vec<String> = (0..self.n())
                .filter(|&i| self.rank[i] == r)
                .map(|i| self.labels[i].to_string())
                .collect();
            if !level.is_empty() {
                s.push_str(&format!("  {{ rank = same; {}; }}\n", level.join("; ")));
            }
        }
        for (a, b) in self.covers() {
            s.push_str(&format!("  {a} -> {b};\n"));
        }
        s.push_str("}\n");
        s
    }

    /// JSON object with labels, ranks, and the Hasse edge list.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Repr<'a> {
            n: usize,
            labels: &'a [u64],
            ranks: &'a [usize],
            covers: Vec<(u64, u64)>,
        }
        serde_json::to_string_pretty(&Repr {
            n: self.n(),
            labels: &self.labels,
            ranks: &self.rank,
            covers: self.covers(),
        })
        .expect("poset serializes")
    }
}

fn transitive_reduction(leq: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = leq.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !leq[i][j] {
                continue;
            }
            let skipped = (0..n)
                .any(|k| k != i && k != j && leq[i][k] && leq[k][j]);
            if !skipped {
                out.push((i, j));
            }
        }
    }
    out
}

/// r disjoint chains of s vertices; labels 1..rs assigned level-by-level
/// bottom-up, left-to-right, so vertex v covers v - r whenever v > r.
pub fn chain_union(s: usize, r: usize) -> Result<Poset> {
    if s < 1 || r < 1 {
        return Err(Error::ParameterOutOfRange(format!(
            "chain union needs s >= 1 and r >= 1, got s = {s}, r = {r}"
        )));
    }
    let labels: Vec<u64> = (1..=(r * s) as u64).collect();
    let covers: Vec<(u64, u64)> = ((r + 1)..=r * s)
        .map(|v| ((v - r) as u64, v as u64))
        .collect();
    Poset::from_covers(&labels, &covers)
}

/// Row/column/constant-row parameters of a bottleneck poset and of the matrix
/// words living on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawShape", into = "RawShape")]
pub struct BottleneckShape {
    s: usize,
    r: usize,
    b_row: usize,
}

#[derive(Serialize, Deserialize, Clone)]
struct RawShape {
    s: usize,
    r: usize,
    b_row: usize,
}

impl TryFrom<RawShape> for BottleneckShape {
    type Error = Error;
    fn try_from(raw: RawShape) -> Result<Self> {
        BottleneckShape::new(raw.s, raw.r, raw.b_row)
    }
}

impl From<BottleneckShape> for RawShape {
    fn from(s: BottleneckShape) -> RawShape {
        RawShape { s: s.s, r: s.r, b_row: s.b_row }
    }
}

impl BottleneckShape {
    pub fn new(s: usize, r: usize, b_row: usize) -> Result<Self> {
        if s < 1 || r < 2 || b_row < 1 || b_row > s {
            return Err(Error::ParameterOutOfRange(format!(
                "bottleneck shape needs s >= 1, r >= 2, 1 <= b_row <= s; got s = {s}, r = {r}, b_row = {b_row}"
            )));
        }
        Ok(BottleneckShape { s, r, b_row })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// 1-indexed matrix row that must be constant.
    pub fn b_row(&self) -> usize {
        self.b_row
    }

    /// The derivative order whose values the constant row holds.
    pub fn deriv_order(&self) -> usize {
        self.b_row - 1
    }

    /// 1-indexed level (from the bottom) collapsed to a single vertex.
    pub fn collapsed_level(&self) -> usize {
        self.s - self.b_row + 1
    }

    pub fn vertex_count(&self) -> usize {
        self.r * self.s - self.r + 1
    }

    /// Label of the collapsed vertex.
    pub fn collapsed_label(&self) -> u64 {
        ((self.s - self.b_row) * self.r + 1) as u64
    }
}

impl fmt::Display for BottleneckShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U({}, {}, {})", self.s, self.r, self.b_row)
    }
}

/// Collapse level s - b_row + 1 of the chain union into one vertex. Vertices
/// keep their chain-union labels; of the collapsed level only the first label
/// survives, the other r - 1 labels of that level are omitted.
pub fn bottleneck(shape: BottleneckShape) -> Poset {
    let (s, r) = (shape.s, shape.r);
    let level_collapsed = shape.collapsed_level();
    let col_label = shape.collapsed_label();

    let mut labels: Vec<u64> = Vec::with_capacity(shape.vertex_count());
    for level in 1..=s {
        if level == level_collapsed {
            labels.push(col_label);
        } else {
            let base = ((level - 1) * r) as u64;
            labels.extend((1..=r as u64).map(|j| base + j));
        }
    }

    let label_at = |level: usize, j: usize| -> u64 {
        if level == level_collapsed {
            col_label
        } else {
            ((level - 1) * r + j) as u64
        }
    };
    let mut covers = Vec::new();
    for level in 2..=s {
        for j in 1..=r {
            let hi = label_at(level, j);
            for jj in 1..=r {
                let lo = label_at(level - 1, jj);
                if !covers.contains(&(lo, hi)) {
                    // chains only join across the collapsed level
                    if level == level_collapsed || level - 1 == level_collapsed || j == jj {
                        covers.push((lo, hi));
                    }
                }
            }
        }
    }
    Poset::from_covers(&labels, &covers).expect("bottleneck posets are graded")
}

/// An s×r grid of derivative values: row 1 (index 0) holds the order-0
/// values and sits at the top rank. Optionally tagged with a
/// [`BottleneckShape`], which pins row `b_row` to be constant.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixWord {
    field: Field,
    s: usize,
    r: usize,
    shape: Option<BottleneckShape>,
    /// Row-major element codes, s*r of them.
    entries: Vec<u64>,
}

impl MatrixWord {
    pub fn new(field: &Field, rows: &[Vec<FieldElement>]) -> Result<MatrixWord> {
        let s = rows.len();
        if s == 0 || rows[0].is_empty() {
            return Err(Error::ParameterOutOfRange("matrix must be nonempty".into()));
        }
        let r = rows[0].len();
        let mut entries = Vec::with_capacity(s * r);
        for row in rows {
            if row.len() != r {
                return Err(Error::LengthMismatch { want: r, got: row.len() });
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::MixedFields);
                }
                entries.push(x.code());
            }
        }
        Ok(MatrixWord { field: field.clone(), s, r, shape: None, entries })
    }

    /// Row-major element codes, top row first.
    pub fn from_codes(field: &Field, s: usize, r: usize, codes: &[u64]) -> Result<MatrixWord> {
        if s == 0 || r == 0 {
            return Err(Error::ParameterOutOfRange("matrix must be nonempty".into()));
        }
        if codes.len() != s * r {
            return Err(Error::LengthMismatch { want: s * r, got: codes.len() });
        }
        for &c in codes {
            field.elem(c)?;
        }
        Ok(MatrixWord { field: field.clone(), s, r, shape: None, entries: codes.to_vec() })
    }

    /// Tag with a shape, enforcing that row `b_row` is constant.
    pub fn with_shape(self, shape: BottleneckShape) -> Result<MatrixWord> {
        if shape.s != self.s || shape.r != self.r {
            return Err(Error::LengthMismatch { want: shape.s * shape.r, got: self.s * self.r });
        }
        let row = &self.entries[(shape.b_row - 1) * self.r..shape.b_row * self.r];
        if row.iter().any(|&c| c != row[0]) {
            return Err(Error::NotConstantRow { row: shape.b_row });
        }
        Ok(MatrixWord { shape: Some(shape), ..self })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn shape(&self) -> Option<BottleneckShape> {
        self.shape
    }

    /// 0-indexed; row 0 is the top (order-0) row.
    pub fn entry(&self, i: usize, j: usize) -> FieldElement {
        self.field.elem(self.entries[i * self.r + j]).unwrap()
    }

    pub fn entry_codes(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&c| c == 0)
    }

    /// Sum over nonzero columns of s - i + 1 where i is the 1-indexed first
    /// nonzero row from the top; the weight induced by the chain union.
    pub fn nrt_weight(&self) -> usize {
        nrt_weight_nz(self.s, self.r, |i, j| self.entries[i * self.r + j] != 0)
    }

    /// The weight induced by the bottleneck poset of the tagged shape; always
    /// equals `p_weight(bottleneck(shape), flatten(A))`.
    pub fn bottleneck_weight(&self) -> Result<usize> {
        let shape = self.shape.ok_or_else(|| {
            Error::ParameterOutOfRange("matrix has no bottleneck shape tag".into())
        })?;
        Ok(bottleneck_weight_nz(self.s, self.r, shape.b_row, |i, j| {
            self.entries[i * self.r + j] != 0
        }))
    }

    /// The length rs - r + 1 vector on the vertices of `bottleneck(shape)`,
    /// in label order; the collapsed vertex takes the constant row's value.
    pub fn flatten(&self) -> Result<Vec<FieldElement>> {
        let shape = self.shape.ok_or_else(|| {
            Error::ParameterOutOfRange("matrix has no bottleneck shape tag".into())
        })?;
        let mut out = Vec::with_capacity(shape.vertex_count());
        for level in 1..=self.s {
            let row = self.s - level; // 0-indexed matrix row for this level
            if level == shape.collapsed_level() {
                out.push(self.entry(shape.b_row - 1, 0));
            } else {
                out.extend((0..self.r).map(|j| self.entry(row, j)));
            }
        }
        Ok(out)
    }

    /// The length rs vector on the vertices of `chain_union(s, r)`, in label
    /// order (level l takes matrix row s - l + 1).
    pub fn nrt_flatten(&self) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.s * self.r);
        for level in 1..=self.s {
            let row = self.s - level;
            out.extend((0..self.r).map(|j| self.entry(row, j)));
        }
        out
    }
}

impl fmt::Display for MatrixWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.s {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.r {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.entries[i * self.r + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// NRT weight from a nonzero test on (row, col), rows 0-indexed from the top.
pub(crate) fn nrt_weight_nz<F: Fn(usize, usize) -> bool>(s: usize, r: usize, nz: F) -> usize {
    let mut w = 0;
    for j in 0..r {
        if let Some(i) = (0..s).find(|&i| nz(i, j)) {
            w += s - i;
        }
    }
    w
}

/// Bottleneck weight from a nonzero test, via the three-case shortcut:
/// support strictly above the constant row pays the full lower set of the
/// collapsed vertex plus a chain-union weight on the rows above; support
/// reaching only the constant row pays the lower set alone; support strictly
/// below reduces to the plain NRT weight.
pub(crate) fn bottleneck_weight_nz<F: Fn(usize, usize) -> bool>(
    s: usize,
    r: usize,
    b_row: usize,
    nz: F,
) -> usize {
    let below_collapsed = (s - b_row) * r + 1;
    if (0..b_row - 1).any(|i| (0..r).any(|j| nz(i, j))) {
        return nrt_weight_nz(b_row - 1, r, &nz) + below_collapsed;
    }
    if (0..r).any(|j| nz(b_row - 1, j)) {
        return below_collapsed;
    }
    nrt_weight_nz(s, r, nz)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_rejects_bad_input() {
        assert!(Poset::from_covers(&[1, 1], &[]).is_err());
        assert!(Poset::from_covers(&[1, 2], &[(1, 3)]).is_err());
        assert!(Poset::from_covers(&[1, 2], &[(1, 2), (2, 1)]).is_err());
        assert!(Poset::from_covers(&[1], &[(1, 1)]).is_err());
        // chain a < b < c plus minimal d < c: c would need rank 1 and 2
        assert!(Poset::from_covers(&[1, 2, 3, 4], &[(1, 2), (2, 3), (4, 3)]).is_err());
    }

    #[test]
    fn redundant_cover_edges_are_harmless() {
        let p = Poset::from_covers(&[1, 2, 3], &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(p.covers(), vec![(1, 2), (2, 3)]);
        assert_eq!(p.rank(p.index_of(3).unwrap()), 2);
    }

    #[test]
    fn shape_validation() {
        assert!(BottleneckShape::new(3, 3, 2).is_ok());
        assert!(BottleneckShape::new(0, 3, 1).is_err());
        assert!(BottleneckShape::new(3, 1, 1).is_err());
        assert!(BottleneckShape::new(3, 3, 0).is_err());
        assert!(BottleneckShape::new(3, 3, 4).is_err());
        let sh = BottleneckShape::new(3, 3, 2).unwrap();
        assert_eq!(sh.deriv_order(), 1);
        assert_eq!(sh.collapsed_level(), 2);
        assert_eq!(sh.vertex_count(), 7);
        assert_eq!(sh.collapsed_label(), 4);
    }
}
