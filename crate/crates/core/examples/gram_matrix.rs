//! Full pipeline: primitive Gram matrix of a W-graph representation, its
//! statistics row and the basis observations.
//!
//! cargo run --release --example gram_matrix [wgraph coxeter [J]]

use hecke_gram::gram::{compute_gram, diagnostics, gram_stats, GramStats};
use hecke_gram::hecke::{CoxeterSystem, WGraph};
use hecke_gram::polyring_linear::LiftConfig;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (wpath, cpath, subset) = match args.as_slice() {
        [w, c] => (w.clone(), c.clone(), None),
        [w, c, j] => (w.clone(), c.clone(), Some(j.split(',').map(|s| s.trim().parse::<usize>().unwrap() - 1).collect::<Vec<_>>())),
        _ => (format!("{dir}/e6_10s.wgraph"), format!("{dir}/e6.coxeter"), Some(vec![0, 1, 2, 4, 5])),
    };
    let g = WGraph::parse(&std::fs::read_to_string(&wpath).unwrap()).unwrap();
    let cox = CoxeterSystem::parse(&std::fs::read_to_string(&cpath).unwrap()).unwrap();
    let cfg = LiftConfig::default();
    let t = std::time::Instant::now();
    let run = compute_gram(&g, &cox, subset.as_deref(), &cfg).unwrap();
    println!("J = {:?}, seed vertex {}", run.subset.iter().map(|s| s + 1).collect::<Vec<_>>(), run.vertex + 1);
    println!("row exponents {:?}", run.basis.row_exponents);
    println!("Q = {} * P, P palindromic of exponent {}", run.gcd_q.to_text(), run.m_p);
    print!("{}", run.p.to_dense_text());
    println!("{}\n{}", GramStats::csv_header(), gram_stats(&run.p).csv_row("rep"));
    for o in diagnostics(&run, &cfg) {
        println!("{}: {}", o.name, if o.holds { "holds" } else { "fails" });
    }
    println!("{:?}", t.elapsed());
}
