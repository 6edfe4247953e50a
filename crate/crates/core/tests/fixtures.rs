//! Every shipped fixture parses and passes all of its cross-checks.

use std::path::PathBuf;

use selfsim_homology::input::InputDocument;
use selfsim_homology::pipeline::check;

fn fixtures() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

#[test]
fn all_fixtures_pass_their_checks() {
    let mut failures = Vec::new();
    for path in fixtures() {
        let doc =
            InputDocument::from_path(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        match check(&doc, 8, 6) {
            Ok(outcomes) => {
                for o in outcomes.iter().filter(|o| !o.passed) {
                    failures.push(format!("{}: {} {}", path.display(), o.name, o.detail));
                }
            }
            Err(e) => failures.push(format!("{}: error {e}", path.display())),
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
