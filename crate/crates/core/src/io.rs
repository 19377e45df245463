//! The loop exchange format: a JSON document with `order`, `names`,
//! `table` and an optional `involution`, identity at index 0.

use serde::Deserialize;
use thiserror::Error;

use crate::involution::{Involution, InvolutionError};
use crate::loops::{LoopError, LoopTable};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed loop file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("order is {order} but {field} has length {len}")]
    OrderMismatch { order: usize, field: &'static str, len: usize },
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Involution(#[from] InvolutionError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LoopFile {
    order: usize,
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    involution: Option<Vec<usize>>,
}

/// Parses and validates a loop file.
pub fn read_loop(text: &str) -> Result<(LoopTable, Option<Involution>), FormatError> {
    let f: LoopFile = serde_json::from_str(text)?;
    let mismatch = |field, len| FormatError::OrderMismatch { order: f.order, field, len };
    if f.names.len() != f.order {
        return Err(mismatch("names", f.names.len()));
    }
    if f.table.len() != f.order {
        return Err(mismatch("table", f.table.len()));
    }
    if let Some(inv) = &f.involution {
        if inv.len() != f.order {
            return Err(mismatch("involution", inv.len()));
        }
    }
    let l = LoopTable::new(f.table, f.names)?;
    let inv = f.involution.map(|p| Involution::new(&l, p)).transpose()?;
    Ok((l, inv))
}

/// Canonical serialisation: fields in fixed order, one table row per line.
pub fn write_loop(l: &LoopTable, inv: Option<&Involution>) -> String {
    let list = |xs: &[usize]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    let names: Vec<String> = l.names().iter().map(|s| serde_json::to_string(s).expect("string")).collect();
    let rows: Vec<String> = l.rows().iter().map(|r| format!("    [{}]", list(r))).collect();
    let mut out = format!(
        "{{\n  \"order\": {},\n  \"names\": [{}],\n  \"table\": [\n{}\n  ]",
        l.order(),
        names.join(", "),
        rows.join(",\n")
    );
    if let Some(s) = inv {
        out.push_str(&format!(",\n  \"involution\": [{}]", list(s.perm())));
    }
    out.push_str("\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn round_trip() {
        let (q2, inv) = catalog::qn(2);
        let text = write_loop(&q2, Some(&inv));
        assert!(text.starts_with("{\n  \"order\": 8,\n  \"names\": [\"1\", \"-1\""));
        let (l, s) = read_loop(&text).unwrap();
        assert_eq!(l, q2);
        assert_eq!(s.unwrap(), inv);
        assert_eq!(write_loop(&l, Some(&inv)), text);
        let plain = write_loop(&q2, None);
        assert!(read_loop(&plain).unwrap().1.is_none());
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(read_loop("{"), Err(FormatError::Json(_))));
        let bad = r#"{"order": 2, "names": ["1"], "table": [[0,1],[1,0]]}"#;
        assert!(matches!(read_loop(bad), Err(FormatError::OrderMismatch { field: "names", .. })));
        let bad = r#"{"order": 2, "names": ["1","a"], "table": [[0,1],[1,1]]}"#;
        assert!(matches!(read_loop(bad), Err(FormatError::Loop(_))));
        let bad = r#"{"order": 2, "names": ["1","a"], "table": [[0,1],[1,0]], "involution": [1,0]}"#;
        assert!(matches!(read_loop(bad), Err(FormatError::Involution(_))));
        let bad = r#"{"order": 1, "names": ["1"], "table": [[0]], "extra": 1}"#;
        assert!(read_loop(bad).is_err());
    }
}
