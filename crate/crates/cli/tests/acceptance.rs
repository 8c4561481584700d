//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uproj::adjoint::{self, adjoint_generators, adjoint_projector, Adjoint};
use uproj::genrep::{self, rep_projector, RepInput};
use uproj::genset::GeneratorSet;
use uproj::groupconj::{self, conj_projector, MatrixAlgebra};
use uproj::liealg::ChevalleyBasis;
use uproj::linalg::QMatrix;
use uproj::projector_core::{cross_section_check, regular_points, Derivation, Projector};
use uproj::rational::{q, Q};
use uproj::report::Status;
use uproj::rootsystem::{RootSystem, Series};
use uproj::symfield::{parse, DenominatorSet, LocElem, Monomial, Poly};

type Outcome = Result<String, String>;

const SYSTEMS: [(Series, usize); 5] = [(Series::A, 1), (Series::A, 2), (Series::A, 3), (Series::B, 2), (Series::G, 2)];

fn basis(s: Series, r: usize) -> ChevalleyBasis {
    ChevalleyBasis::new(&RootSystem::new(s, r).unwrap()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn uproj(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_uproj")).args(args).output().expect("run uproj");
    (out.status.code(), out.stdout)
}

fn texts(stdout: &[u8]) -> Vec<String> {
    let v: serde_json::Value = serde_json::from_slice(stdout).expect("json");
    v["generators"].as_array().unwrap().iter().map(|g| g["text"].as_str().unwrap().to_string()).collect()
}

/// Every projector the suite exercises, labelled.
fn projectors() -> Vec<(String, Projector)> {
    let mut out = Vec::new();
    for (s, r) in SYSTEMS {
        out.push((format!("adjoint {s}{r}"), adjoint_projector(&basis(s, r)).unwrap().1));
    }
    let reps = [
        ("defining A1", RepInput::sl_defining(1).unwrap()),
        ("defining A2", RepInput::sl_defining(2).unwrap()),
        ("coadjoint A1", RepInput::coadjoint(&basis(Series::A, 1)).unwrap()),
        ("coadjoint A2", RepInput::coadjoint(&basis(Series::A, 2)).unwrap()),
    ];
    for (name, rep) in reps {
        out.push((format!("rep {name}"), rep_projector(&rep, &genrep::Options::default()).unwrap().0));
    }
    for n in [2, 3] {
        out.push((format!("conj n={n}"), MatrixAlgebra::new(n).unwrap().projector().unwrap()));
    }
    out
}

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, max_deg: usize) -> Poly {
    let terms = (0..rng.gen_range(1..=3)).map(|_| {
        let mut e = vec![0u16; nvars];
        for _ in 0..rng.gen_range(0..=max_deg) {
            e[rng.gen_range(0..nvars)] += 1;
        }
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-5..=5);
        }
        (Monomial::from_exponents(e), q(c))
    });
    Poly::from_terms(nvars, terms)
}

fn gradients(funcs: &[LocElem], pt: &[Q]) -> Option<Vec<Vec<Q>>> {
    funcs.iter().map(|f| f.gradient_at(pt).ok()).collect()
}

fn rank(rows: Vec<Vec<Q>>) -> usize {
    if rows.is_empty() {
        0
    } else {
        QMatrix::from_rows(rows).rank()
    }
}

fn c1_sl2_exact() -> Outcome {
    let t = Instant::now();
    let (code, out) = uproj(&["generators", "adjoint", "--type", "A", "--rank", "1"]);
    let el = t.elapsed();
    ensure(code == Some(0), || format!("exit {code:?}"))?;
    let mut got = texts(&out);
    got.sort();
    let set = DenominatorSet::new(vec!["E1".into(), "H1".into(), "F1".into()]);
    let want_f = parse("F1 + 1/4*H1^2*E1^-1", &set).unwrap();
    let got_f = parse(&got[0], &set).unwrap();
    ensure(got.len() == 2 && got[1] == "E1", || format!("got {got:?}"))?;
    ensure(got_f.try_sub(&want_f).unwrap().is_zero(), || format!("{} != F + H^2/(4E)", got[0]))?;
    ensure(el < Duration::from_secs(1), || format!("took {el:?}"))?;
    Ok(format!("{{{}}} in {el:?}", got.join(", ")))
}

fn c2_casimir() -> Outcome {
    let t = Instant::now();
    let (adj, p) = adjoint_projector(&basis(Series::A, 1)).unwrap();
    let c = parse("H1^2 + 4*E1*F1", adj.universe()).unwrap();
    ensure(p.apply(&c).unwrap() == c, || "sl2 Casimir moved".into())?;
    let (adj, p) = adjoint_projector(&basis(Series::A, 2)).unwrap();
    let c = adj.casimir();
    ensure(c.total_degree() == 2, || "A2 Casimir is not quadratic".into())?;
    ensure(p.apply(&c).unwrap() == c, || format!("A2 Casimir moved: {c}"))?;
    let el = t.elapsed();
    ensure(el < Duration::from_secs(5), || format!("took {el:?}"))?;
    Ok(format!("A1 and A2 fixed in {el:?}"))
}

fn simple_family(adj: &Adjoint) -> Vec<&Derivation> {
    adj.simple_derivations()
}

fn c3_invariance() -> Outcome {
    let mut notes = Vec::new();
    for (s, r) in SYSTEMS {
        let b = basis(s, r);
        let t = Instant::now();
        let g = adjoint_generators(&b, &adjoint::Options::default()).map_err(|e| e.to_string())?;
        let adj = Adjoint::new(&b).unwrap();
        for x in &g.generators {
            for d in simple_family(&adj) {
                let res = d.apply(&x.elem);
                ensure(res.is_zero(), || format!("{s}{r}: {} under {} leaves {res}", x.name, d.label()))?;
            }
        }
        let el = t.elapsed();
        let limit = if matches!(s, Series::G | Series::B) { 300 } else { 60 };
        ensure(el < Duration::from_secs(limit), || format!("{s}{r} took {el:?}"))?;
        notes.push(format!("{s}{r} {:.2}s", el.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn c4_counting() -> Outcome {
    let mut notes = Vec::new();
    for (s, r) in SYSTEMS {
        let b = basis(s, r);
        let g = adjoint_generators(&b, &adjoint::Options::default()).map_err(|e| e.to_string())?;
        let want = b.root_system().num_positive() + r;
        ensure(g.generators.len() == want, || format!("{s}{r}: {} generators, want {want}", g.generators.len()))?;
        let elems = g.elems();
        let pts = regular_points(&g.universe(), 3, 7).map_err(|e| e.to_string())?;
        for pt in &pts {
            let rows = gradients(&elems, pt).ok_or("singular sample")?;
            let k = rank(rows);
            ensure(k == want, || format!("{s}{r}: rank {k} at {pt:?}, want {want}"))?;
        }
        notes.push(format!("{s}{r}={want}"));
    }
    Ok(notes.join(" "))
}

fn c5_homomorphism() -> Outcome {
    let mut total = 0;
    let mut notes = Vec::new();
    for (s, r) in SYSTEMS {
        let t = Instant::now();
        let (adj, p) = adjoint_projector(&basis(s, r)).unwrap();
        let set = adj.universe();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = LocElem::from_poly(set, random_poly(&mut rng, set.nvars(), 3));
            let b = LocElem::from_poly(set, random_poly(&mut rng, set.nvars(), 3));
            let lhs = p.apply(&a.try_mul(&b).unwrap()).map_err(|e| e.to_string())?;
            let rhs = p.apply(&a).unwrap().try_mul(&p.apply(&b).unwrap()).unwrap();
            ensure(lhs.try_sub(&rhs).unwrap().is_zero(), || format!("{s}{r}: P(ab) != P(a)P(b) for a = {a}, b = {b}"))?;
            total += 1;
        }
        notes.push(format!("{s}{r} {:.1}s", t.elapsed().as_secs_f64()));
    }
    Ok(format!("{total} pairs: {}", notes.join(", ")))
}

/// Indexing follows the composition P = S_1 ∘ S_2 ∘ ⋯ ∘ S_N, so S_N acts first.
fn c6_triangularity() -> Outcome {
    let mut pairs = 0;
    let all = projectors();
    for (name, p) in &all {
        let st = p.stages();
        let n = st.len();
        // composition index of application position i is n - i
        for (i, s) in st.iter().enumerate() {
            let ds = &s.derivation;
            let one = LocElem::one(s.pair.q.set());
            ensure(ds.apply(&s.pair.q) == one, || format!("{name}: D(Q) != 1 at stage {}", n - i))?;
            for (j, t) in st.iter().enumerate() {
                // composition indices: s_idx = n - i, t_idx = n - j; s_idx > t_idx iff i < j
                if i < j {
                    let res = ds.apply(&t.pair.q);
                    ensure(res.is_zero(), || format!("{name}: D_{}(Q_{}) = {res}", n - i, n - j))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{} projectors, {pairs} off-diagonal pairs", all.len()))
}

fn unitriangular(rng: &mut ChaCha8Rng, n: usize) -> QMatrix {
    let mut rows = vec![vec![q(0); n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = q(1);
        for x in row.iter_mut().skip(i + 1) {
            *x = q(rng.gen_range(-4..=4));
        }
    }
    QMatrix::from_rows(rows)
}

fn flat(m: &QMatrix) -> Vec<Q> {
    (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect()
}

fn conj_set(n: usize, seed: u64) -> Result<GeneratorSet, String> {
    let opts = groupconj::Options { seed, ..Default::default() };
    conj_projector(n, &opts).map(|x| x.1).map_err(|e| e.to_string())
}

fn c7_conjugation() -> Outcome {
    let t = Instant::now();
    let (code, out) = uproj(&["generators", "conj", "--n", "2"]);
    let el2 = t.elapsed();
    ensure(code == Some(0), || format!("exit {code:?}"))?;
    let got = texts(&out);
    ensure(got == ["s_2_1", "s_1_1 + s_2_2"], || format!("got {got:?}"))?;
    ensure(el2 < Duration::from_secs(1), || format!("n=2 took {el2:?}"))?;

    let g = conj_set(2, 0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut done = 0;
    while done < 25 {
        let s = QMatrix::from_rows((0..2).map(|_| (0..2).map(|_| q(rng.gen_range(-6..=6))).collect()).collect());
        let u = unitriangular(&mut rng, 2);
        let conj = u.inverse().unwrap().mul(&s).mul(&u);
        let vals: Option<Vec<(Q, Q)>> = g
            .generators
            .iter()
            .map(|x| Some((x.elem.evaluate(&flat(&s)).ok()?, x.elem.evaluate(&flat(&conj)).ok()?)))
            .collect();
        let Some(vals) = vals else { continue };
        ensure(vals.iter().all(|(a, b)| a == b), || format!("not conjugation invariant at {s:?}"))?;
        done += 1;
    }

    let t = Instant::now();
    let g = conj_set(3, 0)?;
    ensure(g.generators.len() == 5, || format!("n=3: {} generators", g.generators.len()))?;
    let alg = MatrixAlgebra::new(3).unwrap();
    for x in &g.generators {
        for d in alg.simple_derivations() {
            ensure(d.apply(&x.elem).is_zero(), || format!("n=3: {} not killed by {}", x.name, d.label()))?;
        }
    }
    let elems = g.elems();
    for pt in regular_points(&g.universe(), 3, 3).map_err(|e| e.to_string())? {
        let k = rank(gradients(&elems, &pt).ok_or("singular sample")?);
        ensure(k == 5, || format!("n=3: Jacobian rank {k}"))?;
    }
    let el3 = t.elapsed();
    ensure(el3 < Duration::from_secs(60), || format!("n=3 took {el3:?}"))?;
    Ok(format!("n=2 in {el2:?} with 25 group pairs; n=3 rank 5 in {el3:?}"))
}

fn c8_cross_pipeline() -> Outcome {
    let mut notes = Vec::new();
    for r in [1, 2] {
        let b = basis(Series::A, r);
        let a = adjoint_generators(&b, &adjoint::Options::default()).map_err(|e| e.to_string())?;
        let rep = RepInput::coadjoint(&b).unwrap();
        let (_, g) = rep_projector(&rep, &genrep::Options::default()).map_err(|e| e.to_string())?;
        ensure(rep.coords() == b.symbols().as_slice(), || "coadjoint coordinates differ from basis symbols".into())?;
        let (ea, eg) = (a.elems(), g.elems());
        let mut seed = 0;
        let mut checked = 0;
        while checked < 3 {
            seed += 1;
            ensure(seed < 200, || "no common regular points".into())?;
            let pt = regular_points(&a.universe(), 1, seed).map_err(|e| e.to_string())?.remove(0);
            let (Some(ra), Some(rg)) = (gradients(&ea, &pt), gradients(&eg, &pt)) else { continue };
            let (ka, kg) = (rank(ra.clone()), rank(rg.clone()));
            let both = rank(ra.into_iter().chain(rg).collect());
            ensure(ka == kg && kg == both, || format!("A{r}: ranks {ka}, {kg}, joint {both}"))?;
            checked += 1;
        }
        notes.push(format!("A{r} equal row spaces"));
    }
    Ok(notes.join(", "))
}

fn c9_cross_section() -> Outcome {
    let b = basis(Series::A, 1);
    let (adj, p) = adjoint_projector(&b).unwrap();
    let set: &Arc<DenominatorSet> = adj.universe();
    let (ie, ih) = (set.var_index("E1").unwrap(), set.var_index("H1").unwrap());
    let elems: Vec<LocElem> = (0..3).map(|i| LocElem::var(set, i)).collect();
    let images: Vec<LocElem> = elems.iter().map(|x| p.apply(x).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut points = 0;
    while points < 10 {
        let mut pt: Vec<Q> = (0..3).map(|_| q(rng.gen_range(-6..=6))).collect();
        pt[ih] = q(0);
        if pt[ie] == q(0) {
            continue;
        }
        for (x, px) in elems.iter().zip(&images) {
            let (a, b) = (x.evaluate(&pt).unwrap(), px.evaluate(&pt).unwrap());
            ensure(a == b, || format!("{x} = {a} but P({x}) = {b} at {pt:?}"))?;
        }
        points += 1;
    }
    let rep = cross_section_check(&p, &p.witnesses(), &elems, 10, 0).map_err(|e| e.to_string())?;
    ensure(rep.checks.iter().all(|c| c.status == Status::Pass), || format!("{:?}", rep.checks))?;

    let mut stages = 0;
    for (name, p) in projectors() {
        for st in p.stages() {
            let a1 = match st.pair.numerator() {
                Some(a1) => a1.clone(),
                None => LocElem::from_poly(st.pair.q.set(), st.pair.q.numerator().clone()),
            };
            let img = p.apply(&a1).map_err(|e| e.to_string())?;
            ensure(img.is_zero(), || format!("{name}: P(a1) = {img} for stage {}", st.derivation.label()))?;
            stages += 1;
        }
    }
    Ok(format!("10 sigma points; P(a1) = 0 on {stages} stages"))
}

fn c10_determinism() -> Outcome {
    let file = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sl2_defining.json");
    let runs: Vec<Vec<&str>> = vec![
        vec!["cascade", "--type", "B", "--rank", "3"],
        vec!["generators", "adjoint", "--type", "A", "--rank", "1"],
        vec!["generators", "adjoint", "--type", "A", "--rank", "2", "--seed", "3"],
        vec!["generators", "adjoint", "--type", "G", "--rank", "2"],
        vec!["generators", "conj", "--n", "2"],
        vec!["generators", "conj", "--n", "3", "--seed", "11"],
        vec!["generators", "rep", "--file", file],
        vec!["verify", "--type", "A", "--rank", "1", "E1", "F1"],
        vec!["eval", "--n", "2", "s_1_1", "--at", "1,2,3,4"],
    ];
    for args in &runs {
        let (_, a) = uproj(args);
        let (_, b) = uproj(args);
        ensure(!a.is_empty() && a == b, || format!("output differs for {args:?}"))?;
    }
    let (_, a) = uproj(&["verify", "--n", "3", "--jobs", "1", "s_3_1", "s_1_1", "s_2_2"]);
    let (_, b) = uproj(&["verify", "--n", "3", "--jobs", "4", "s_3_1", "s_1_1", "s_2_2"]);
    ensure(a == b, || "output depends on --jobs".into())?;
    Ok(format!("{} commands byte-identical", runs.len() + 1))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("sl2 adjoint exactness", c1_sl2_exact),
        ("Casimir fixed point", c2_casimir),
        ("invariance suites", c3_invariance),
        ("counting law and Jacobian rank", c4_counting),
        ("homomorphism property", c5_homomorphism),
        ("triangularity ledgers", c6_triangularity),
        ("conjugation n=2 and n=3", c7_conjugation),
        ("cross-pipeline consistency", c8_cross_pipeline),
        ("cross-section machinery", c9_cross_section),
        ("determinism", c10_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match res {
            Ok(note) => println!("criterion {:>2} PASS  {name} ({note}) [{:.2}s]", i + 1, t.elapsed().as_secs_f64()),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
