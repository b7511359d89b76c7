//! Gram matrices of small Weyl groups two ways: by summing over the group
//! and by the specialize-and-lift pipeline.

use hecke_gram::gram::{compute_gram, proportional};
use hecke_gram::hecke::{bruteforce_p0, enumerate_group, CoxeterSystem, WGraph, GROUP_CAP};
use hecke_gram::polyring_linear::LiftConfig;

fn main() {
    let cfg = LiftConfig::default();
    for (name, cox) in [
        ("A1", CoxeterSystem::type_a(1)),
        ("A2", CoxeterSystem::type_a(2)),
        ("B2", CoxeterSystem::type_b(2)),
        ("A3", CoxeterSystem::type_a(3)),
    ] {
        let order = enumerate_group(&cox, GROUP_CAP).unwrap().len();
        let g = WGraph::reflection(&cox).unwrap();
        let p0 = bruteforce_p0(&g, &cox, GROUP_CAP).unwrap();
        let run = compute_gram(&g, &cox, None, &cfg).unwrap();
        println!("{name}: |W| = {order}, sum over W proportional to P: {}", proportional(&run.p, &p0));
        print!("{}", run.p.to_dense_text());
    }
}
