//! The worked reference example shipped with the crate: the [4,2,3] code
//! over GF(5) on points (1,3,4) with s = 2, t = 4 and a constant value row.
//! A golden CSV lists all 25 codewords (polynomial, first hyperderivative,
//! matrix word, weight); `check` regenerates the table from scratch and
//! compares it field by field, reporting the first divergence.

use serde::{Deserialize, Serialize};

use crate::codes::{build_code, hyper_matrix, RsCodeSpec, WeightEnumerator};
use crate::gf::Field;
use crate::poly::Polynomial;
use crate::poset::BottleneckShape;
use crate::{Error, Result, DEFAULT_BUDGET};

const GOLDEN_CSV: &str = include_str!("../../../assets/example_table.csv");

/// The reference table in its source CSV form.
pub fn golden_csv() -> &'static str {
    GOLDEN_CSV
}

/// One recomputed row of the reference table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleRow {
    pub poly: String,
    pub deriv: String,
    pub codeword: String,
    pub weight: usize,
}

/// Where a golden table diverged from the recomputation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GoldenMismatch {
    /// A single cell differs: the file holds `golden`, recomputation gives
    /// `computed`. Rows count from 1 in table order.
    Row { row: usize, column: String, golden: String, computed: String },
    /// A table-level property differs (row count, codeword multiset,
    /// parameters, or the weight enumerator).
    Table { detail: String },
}

/// Outcome of regenerating the reference table: the recomputed rows, the
/// code parameters, the weight enumerator, and the first mismatch if the
/// golden table disagrees.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExampleReport {
    pub rows: Vec<ExampleRow>,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub enumerator: WeightEnumerator,
    pub mismatch: Option<GoldenMismatch>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Regenerate the reference table and compare it to the embedded golden CSV.
pub fn check() -> Result<ExampleReport> {
    check_against(GOLDEN_CSV)
}

/// Regenerate the reference table and compare it to the given golden CSV.
pub fn check_against(golden: &str) -> Result<ExampleReport> {
    let field = Field::new(5, 1)?;
    let spec = RsCodeSpec::from_point_codes(&field, &[1, 3, 4], 2, 4, Some(1))?;
    let points = spec.points();
    let code = build_code(&spec)?;
    let shape = BottleneckShape::new(2, 3, 1)?;

    let enumerator = code.weight_enumerator(DEFAULT_BUDGET)?;
    let d = enumerator
        .min_nonzero_weight()
        .ok_or_else(|| Error::Invariant("reference code has no nonzero word".into()))?;
    let mut report = ExampleReport {
        rows: Vec::new(),
        n: code.length(),
        k: code.dim(),
        d,
        enumerator,
        mismatch: None,
    };

    let mut rdr = csv::ReaderBuilder::new().from_reader(golden.as_bytes());
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["poly", "deriv", "codeword", "weight"] {
        report.mismatch = Some(GoldenMismatch::Table {
            detail: format!("header is {:?}, want poly,deriv,codeword,weight", headers),
        });
        return Ok(report);
    }
    let mut golden_rows: Vec<[String; 4]> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.len() != 4 {
            report.mismatch = Some(GoldenMismatch::Table {
                detail: format!("a row has {} fields, want 4", rec.len()),
            });
            return Ok(report);
        }
        golden_rows.push([
            rec[0].trim().to_string(),
            rec[1].trim().to_string(),
            rec[2].trim().to_string(),
            rec[3].trim().to_string(),
        ]);
    }

    let expected_rows = (field.order() as usize).pow(code.dim() as u32);
    if golden_rows.len() != expected_rows {
        report.mismatch = Some(GoldenMismatch::Table {
            detail: format!("table has {} rows, want {expected_rows}", golden_rows.len()),
        });
        return Ok(report);
    }

    for (idx, g) in golden_rows.iter().enumerate() {
        let row_no = idx + 1;
        let diverge = |column: &str, golden: &str, computed: String| {
            GoldenMismatch::Row {
                row: row_no,
                column: column.to_string(),
                golden: golden.to_string(),
                computed,
            }
        };
        let f = match Polynomial::parse(&field, &g[0]) {
            Ok(f) => f,
            Err(e) => {
                report.mismatch = Some(diverge("poly", &g[0], format!("unparseable: {e}")));
                return Ok(report);
            }
        };
        let poly_s = f.to_string();
        if poly_s != g[0] {
            report.mismatch = Some(diverge("poly", &g[0], poly_s));
            return Ok(report);
        }
        let deriv_s = f.hyperderivative(1).to_string();
        if deriv_s != g[1] {
            report.mismatch = Some(diverge("deriv", &g[1], deriv_s));
            return Ok(report);
        }
        let word = hyper_matrix(&f, &points, 2)?;
        let word_s = word.to_string();
        if word_s != g[2] {
            report.mismatch = Some(diverge("codeword", &g[2], word_s));
            return Ok(report);
        }
        let weight = match word.with_shape(shape) {
            Ok(tagged) => tagged.bottleneck_weight()?,
            Err(_) => {
                report.mismatch =
                    Some(diverge("weight", &g[3], "value row is not constant".into()));
                return Ok(report);
            }
        };
        if weight.to_string() != g[3] {
            report.mismatch = Some(diverge("weight", &g[3], weight.to_string()));
            return Ok(report);
        }
        report.rows.push(ExampleRow {
            poly: poly_s,
            deriv: deriv_s,
            codeword: word_s,
            weight,
        });
    }

    // the table must list exactly the codewords, each once
    let mut golden_words: Vec<&str> = golden_rows.iter().map(|g| g[2].as_str()).collect();
    golden_words.sort_unstable();
    let mut all_words: Vec<String> = Vec::with_capacity(expected_rows);
    let q = field.order();
    for mut idx in 0..expected_rows as u64 {
        let msg: Vec<_> = (0..code.dim())
            .map(|_| {
                let c = idx % q;
                idx /= q;
                field.elem(c).expect("code below order")
            })
            .collect();
        all_words.push(code.encode(&msg)?.to_string());
    }
    all_words.sort_unstable();
    if let Some((g, c)) = golden_words
        .iter()
        .zip(&all_words)
        .find(|(g, c)| **g != **c)
    {
        report.mismatch = Some(GoldenMismatch::Table {
            detail: format!("codeword multiset differs: table has {g}, code has {c}"),
        });
        return Ok(report);
    }

    let mut tally = vec![0u64; code.length() + 1];
    for row in &report.rows {
        tally[row.weight] += 1;
    }
    if report.enumerator.counts() != tally {
        report.mismatch = Some(GoldenMismatch::Table {
            detail: format!(
                "weight tallies differ: table gives {tally:?}, enumeration gives {:?}",
                report.enumerator.counts()
            ),
        });
        return Ok(report);
    }
    if (report.n, report.k, report.d) != (4, 2, 3) {
        report.mismatch = Some(GoldenMismatch::Table {
            detail: format!(
                "parameters are [{}, {}, {}], want [4, 2, 3]",
                report.n, report.k, report.d
            ),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_golden_table_passes() {
        let report = check().unwrap();
        assert!(report.passed(), "{:?}", report.mismatch);
        assert_eq!(report.rows.len(), 25);
        assert_eq!((report.n, report.k, report.d), (4, 2, 3));
        assert_eq!(report.enumerator.poly_string(), "1 + 4x^3 + 20x^4");
    }
}
