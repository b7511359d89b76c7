//! Validate a W-graph, list its Benson-Curtis subsets and print the
//! Schreier tree of the standard basis at v = 1.
//!
//! cargo run --example wgraph_tree [wgraph coxeter]

use hecke_gram::hecke::{benson_curtis_subsets, specialized_schreier_tree, validate_wgraph, CoxeterSystem, WGraph};

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (wpath, cpath) = match args.as_slice() {
        [w, c] => (w.clone(), c.clone()),
        _ => (format!("{dir}/e6_10s.wgraph"), format!("{dir}/e6.coxeter")),
    };
    let g = WGraph::parse(&std::fs::read_to_string(&wpath).unwrap()).unwrap();
    let cox = CoxeterSystem::parse(&std::fs::read_to_string(&cpath).unwrap()).unwrap();
    let report = validate_wgraph(&g, &cox);
    println!("{wpath}: dimension {}, valid {}", g.dim(), report.is_valid());
    for v in &report.violations {
        println!("  {v}");
    }

    let subsets = benson_curtis_subsets(&g);
    println!("{} Benson-Curtis subsets", subsets.len());
    for (j, vertex) in subsets.iter().take(5) {
        let j: Vec<usize> = j.iter().map(|s| s + 1).collect();
        println!("  J = {j:?} at vertex {}", vertex + 1);
    }
    let Some((j, _)) = subsets.iter().min_by_key(|(j, _)| std::cmp::Reverse(j.len())) else { return };
    let t = specialized_schreier_tree(&g, j, 1).unwrap();
    println!("tree for J = {:?}: {:?}", j.iter().map(|s| s + 1).collect::<Vec<_>>(), t.tree.entries());
    println!("lengths {:?}", t.lengths);
}
