use std::collections::BTreeSet;

use updag::feasibility::analyze_with_edge;
use updag::oracle::{brute_feasible_set, random_small_dag, DEFAULT_BUDGET};
use updag::outerplanar::outerplane_embedding;
use updag::{AngleLabel, Dag};

fn tester_pairs(d: &Dag, e: u32) -> BTreeSet<(AngleLabel, AngleLabel)> {
    let a = analyze_with_edge(d, e).unwrap();
    match a.root_set() {
        Some(s) => s.pairs.iter().map(|p| (p.mu, p.nu)).collect(),
        None => BTreeSet::new(),
    }
}

#[test]
fn random_small_graphs_match() {
    let mut bad = 0;
    for seed in 0..3000 {
        let d = random_small_dag(seed, 10);
        let o = outerplane_embedding(&d).unwrap();
        for e in o.outer_edges() {
            let brute = brute_feasible_set(&d, e, DEFAULT_BUDGET).unwrap().pairs;
            let got = tester_pairs(&d, e);
            if brute != got {
                bad += 1;
                if bad < 6 {
                    eprintln!("seed {seed} edge {e}: brute {brute:?} tester {got:?}\n{d}");
                }
            }
        }
    }
    assert_eq!(bad, 0);
}
