
use cdloops::catalog;
use cdloops::io::{read_loop, write_loop, FormatError};

#[test]
fn corpus_round_trips_through_the_file_format() {
    for e in catalog::corpus() {
        let text = write_loop(&e.table, Some(&e.star));
        let (l, s) = read_loop(&text).unwrap();
        assert_eq!(l, e.table, "{}", e.name);
        assert_eq!(s.as_ref(), Some(&e.star), "{}", e.name);
        assert_eq!(write_loop(&l, s.as_ref()), text, "{}", e.name);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["order"], e.table.order());
        assert_eq!(v["table"].as_array().unwrap().len(), e.table.order());
    }
}

#[test]
fn mismatched_lengths_name_the_field() {
    let bad = r#"{"order": 2, "names": ["1", "a"], "table": [[0, 1]]}"#;
    match read_loop(bad) {
        Err(FormatError::OrderMismatch { field, len, order }) => assert_eq!((field, len, order), ("table", 1, 2)),
        other => panic!("{other:?}"),
    }
    let bad = r#"{"order": 2, "names": ["1", "a"], "table": [[0, 1], [1, 0]], "involution": [0]}"#;
    assert!(matches!(read_loop(bad), Err(FormatError::OrderMismatch { field: "involution", .. })));
}
