use posetcode::example::{check, check_against, golden_csv, GoldenMismatch};

#[test]
fn embedded_table_regenerates_exactly() {
    let report = check().unwrap();
    assert!(report.passed(), "unexpected mismatch: {:?}", report.mismatch);
    assert_eq!(report.rows.len(), 25);
    assert_eq!((report.n, report.k, report.d), (4, 2, 3));
    assert_eq!(report.enumerator.poly_string(), "1 + 4x^3 + 20x^4");
    assert_eq!(report.enumerator.counts(), [1, 0, 0, 4, 20]);

    // spot-check two known rows
    let zero = &report.rows[0];
    assert_eq!(zero.poly, "0");
    assert_eq!(zero.codeword, "[[0,0,0],[0,0,0]]");
    assert_eq!(zero.weight, 0);
    let hit = report
        .rows
        .iter()
        .find(|r| r.poly == "4x^3 + 3x^2 + x")
        .expect("known codeword polynomial is listed");
    assert_eq!(hit.deriv, "2x^2 + x + 1");
    assert_eq!(hit.codeword, "[[3,3,3],[4,2,2]]");
    assert_eq!(hit.weight, 4);

    // every weight is one the enumerator allows
    assert!(report.rows.iter().all(|r| matches!(r.weight, 0 | 3 | 4)));

    // reports serialize for machine consumption
    let json = serde_json::to_string(&report).unwrap();
    assert!(json.contains("\"mismatch\":null"));
}

#[test]
fn tampering_with_a_cell_is_detected_with_row_and_column() {
    let golden = golden_csv();

    // flip one weight: row 2 of the table has weight 4
    let tampered = golden.replacen("4x^3 + 3x^2 + x,2x^2 + x + 1,\"[[3,3,3],[4,2,2]]\",4", "4x^3 + 3x^2 + x,2x^2 + x + 1,\"[[3,3,3],[4,2,2]]\",3", 1);
    assert_ne!(tampered, golden);
    let report = check_against(&tampered).unwrap();
    match report.mismatch {
        Some(GoldenMismatch::Row { row, ref column, ref golden, ref computed }) => {
            assert_eq!(row, 2);
            assert_eq!(column, "weight");
            assert_eq!(golden, "3");
            assert_eq!(computed, "4");
        }
        other => panic!("want a row mismatch on the weight column, got {other:?}"),
    }

    // corrupt a derivative
    let tampered = golden.replacen("2x^2 + x + 1", "2x^2 + x + 2", 1);
    let report = check_against(&tampered).unwrap();
    match report.mismatch {
        Some(GoldenMismatch::Row { ref column, .. }) => assert_eq!(column, "deriv"),
        other => panic!("want a row mismatch on the deriv column, got {other:?}"),
    }

    // swap the polynomial for one outside the code: the recomputed
    // codeword no longer matches the listed one
    let tampered = golden.replacen("4x^3 + 3x^2 + x,", "x^2,", 1);
    let report = check_against(&tampered).unwrap();
    match report.mismatch {
        Some(GoldenMismatch::Row { row, ref column, .. }) => {
            assert_eq!(row, 2);
            assert!(column == "deriv" || column == "codeword");
        }
        other => panic!("want a row mismatch, got {other:?}"),
    }
}

#[test]
fn self_consistent_but_wrong_tables_are_detected() {
    let golden = golden_csv();
    let lines: Vec<&str> = golden.lines().collect();

    // duplicating a data row keeps every row self-consistent but breaks
    // the codeword multiset
    let mut dup = lines.clone();
    dup[3] = dup[2];
    let report = check_against(&dup.join("\n")).unwrap();
    match report.mismatch {
        Some(GoldenMismatch::Table { ref detail }) => {
            assert!(detail.contains("multiset"), "detail: {detail}");
        }
        other => panic!("want a table mismatch, got {other:?}"),
    }

    // dropping a row changes the row count
    let shorter = lines[..lines.len() - 1].join("\n");
    let report = check_against(&shorter).unwrap();
    match report.mismatch {
        Some(GoldenMismatch::Table { ref detail }) => {
            assert!(detail.contains("rows"), "detail: {detail}");
        }
        other => panic!("want a table mismatch, got {other:?}"),
    }

    // a wrong header never reaches the row checks
    let report = check_against(&golden.replacen("poly,deriv", "poly,derivative", 1)).unwrap();
    assert!(matches!(report.mismatch, Some(GoldenMismatch::Table { .. })));
}
