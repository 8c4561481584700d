use uproj::groupconj::{conj_projector, MatrixAlgebra, Options};

#[test]
fn n2_and_n3() {
    let alg = MatrixAlgebra::new(2).unwrap();
    let v = alg.universe().vars().to_vec();
    let r = &alg.root_system().positive_roots()[0];
    assert_eq!(alg.d(1).to_text(&v), "s_2_1");
    assert_eq!(alg.c_beta(r).to_text(&v), "s_2_2");
    assert_eq!(alg.d_beta(r).to_text(&v), "-s_1_1");
    for n in [2, 3] {
        let t = std::time::Instant::now();
        let (_, g) = conj_projector(n, &Options::default()).unwrap();
        eprintln!("n={n} {:?}", t.elapsed());
        for x in &g.generators { eprintln!("  {} = {}", x.name, x.elem); }
        for f in g.report.checks.iter() { eprintln!("  {} {:?} {:?}", f.name, f.status, f.residue); }
        assert!(g.report.passed());
    }
}
