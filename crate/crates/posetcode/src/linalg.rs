//! Row reduction over GF(p^m), on raw element codes.

use crate::gf::Field;

/// Reduce `rows` (each of width `ncols`) to reduced row echelon form in place
/// and return the pivot columns in ascending order. Zero rows sink to the
/// bottom.
pub(crate) fn rref(field: &Field, rows: &mut [Vec<u64>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv_code(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul_code(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    let sub = field.mul_code(f, rows[r][j]);
                    rows[i][j] = field.sub_code(rows[i][j], sub);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn rank(field: &Field, mut rows: Vec<Vec<u64>>, ncols: usize) -> usize {
    rref(field, &mut rows, ncols).len()
}

/// Basis of the right nullspace of the matrix, one vector per free column in
/// ascending column order (the "special solutions": free variable set to 1,
/// pivot variables solved for). Deterministic for a given input matrix.
pub(crate) fn nullspace(field: &Field, mut rows: Vec<Vec<u64>>, ncols: usize) -> Vec<Vec<u64>> {
    let pivots = rref(field, &mut rows, ncols);
    let mut out = Vec::with_capacity(ncols - pivots.len());
    for f in 0..ncols {
        if pivots.binary_search(&f).is_ok() {
            continue;
        }
        let mut v = vec![0u64; ncols];
        v[f] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = field.neg_code(rows[i][f]);
        }
        out.push(v);
    }
    out
}
