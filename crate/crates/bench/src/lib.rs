//! Shared inputs for the criterion benches.

use pathfusion::{PathWord, Signature};

pub fn rank2() -> Signature {
    Signature::new(2).expect("rank 2 is valid")
}

/// Generator sets used by the closure benches, sparse first.
pub fn generator_sets() -> Vec<(&'static str, Vec<PathWord>)> {
    let sig = rank2();
    let parse = |ws: &[&str]| ws.iter().map(|w| PathWord::parse(sig, w).expect("fixture word")).collect();
    vec![
        ("loop", parse(&["a1.A1"])),
        ("conjugated", parse(&["a2.a1.A2"])),
        ("cyclic", parse(&["a1"])),
        ("free", parse(&["a1", "a2"])),
    ]
}
