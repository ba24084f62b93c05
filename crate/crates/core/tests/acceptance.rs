mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> common::Check); 6] = [
        ("exact fixtures", common::criterion1),
        ("cross-method agreement", common::criterion2),
        ("worked examples", common::criterion3),
        ("height tables", common::criterion4),
        ("property suites", common::criterion5),
        ("l = 101 by series", common::criterion6),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        // written to the raw handle so the lines survive output capture
        let line = match outcome {
            Ok(detail) => format!("criterion {n} ({name}): PASS: {detail}"),
            Err(detail) => {
                failed.push(n);
                format!("criterion {n} ({name}): FAIL: {detail}")
            }
        };
        let _ = writeln!(std::io::stderr().lock(), "{line}");
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
