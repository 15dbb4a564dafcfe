//! The shipped column schema must describe exactly what the code emits.

use std::path::Path;

use regraph::harness::column_schema;

#[test]
fn shipped_schema_matches_the_code() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report-columns.json");
    let expected = serde_json::to_string_pretty(&column_schema()).unwrap() + "\n";
    if std::env::var_os("REGRAPH_WRITE_SCHEMA").is_some() {
        std::fs::write(&path, &expected).unwrap();
    }
    let shipped = std::fs::read_to_string(&path).unwrap();
    assert_eq!(shipped, expected, "schema/report-columns.json is stale; rerun with REGRAPH_WRITE_SCHEMA=1");
}
