mod common;

use common::{check_golden, load_goldens};

#[test]
fn recorded_invocations_reproduce() {
    let goldens = load_goldens();
    assert_eq!(goldens.len(), 3);
    for g in &goldens {
        check_golden(g).unwrap();
    }
}

#[test]
fn usage_errors_stay_off_stdout() {
    for g in load_goldens().iter().filter(|g| g.exit == 2) {
        assert!(g.stdout.is_empty(), "{}", g.name);
    }
}
