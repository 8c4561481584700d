//! U-projector for the conjugation action of GL_n on its coordinate ring.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::genset::{GeneratorSet, NamedElem};
use crate::linalg::QMatrix;
use crate::projector_core::{cross_section_check, verify_invariance, Derivation, Projector, SlicePair, Stage};
use crate::rational::{q, Q};
use crate::report::{Check, Report};
use crate::rootsystem::{RootSystem, Series};
use crate::symfield::{DenominatorSet, LocElem, Poly};

type Wedge = BTreeMap<Vec<usize>, Q>;

pub struct MatrixAlgebra {
    n: usize,
    rs: RootSystem,
    universe: Arc<DenominatorSet>,
}

/// `Σ` over the positive root ε_a − ε_b (a < b, zero-based).
fn ends(root: &[i64]) -> (usize, usize) {
    let a = root.iter().position(|&c| c != 0).expect("nonzero root");
    let b = root.iter().rposition(|&c| c != 0).expect("nonzero root") + 1;
    (a, b)
}

fn insert(w: &mut Wedge, k: Vec<usize>, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = w.entry(k.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        w.remove(&k);
    }
}

/// Sorts a wedge index with sign; `None` on a repeated index.
fn normalize(mut idx: Vec<usize>) -> Option<(Vec<usize>, bool)> {
    let mut odd = false;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                odd = !odd;
            } else if idx[j] == idx[j + 1] {
                return None;
            }
        }
    }
    if idx.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((idx, odd))
}

/// Matrix unit `E_{ab}` (e_b ↦ e_a) acting on a wedge vector.
fn unit_on_wedge(a: usize, b: usize, w: &Wedge) -> Wedge {
    let mut out = Wedge::new();
    for (idx, c) in w {
        for k in 0..idx.len() {
            if idx[k] == b {
                let mut j = idx.clone();
                j[k] = a;
                if let Some((j, odd)) = normalize(j) {
                    insert(&mut out, j, if odd { -c.clone() } else { c.clone() });
                }
            }
        }
    }
    out
}

/// Dual action `(x l)(v) = -l(x v)` of `E_{ab}`: on coordinates, `e_J^* ↦ -(E_{ba}-image)`.
fn unit_on_dual(a: usize, b: usize, l: &Wedge) -> Wedge {
    let mut out = Wedge::new();
    for (i_idx, c) in l {
        // (x l)(e_J) = -Σ_I l_I (x e_J)_I; x e_J hits e_I when J = I with a ↦ b
        for k in 0..i_idx.len() {
            if i_idx[k] == a {
                let mut j = i_idx.clone();
                j[k] = b;
                if let Some((j, odd)) = normalize(j) {
                    insert(&mut out, j, if odd { c.clone() } else { -c.clone() });
                }
            }
        }
    }
    out
}

impl MatrixAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDatum {
                series: 'A',
                rank: n.saturating_sub(1),
                reason: "conjugation needs n >= 2".into(),
            });
        }
        let vars = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| format!("s_{i}_{j}")))
            .collect();
        Ok(MatrixAlgebra {
            n,
            rs: RootSystem::new(Series::A, n - 1)?,
            universe: DenominatorSet::new(vars),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn universe(&self) -> &Arc<DenominatorSet> {
        &self.universe
    }

    fn var(&self, i: usize, j: usize) -> Poly {
        Poly::var(self.n * self.n, i * self.n + j)
    }

    /// `D_x(s) = s x − x s` for `x = E_{ab}`.
    pub fn derivation(&self, a: usize, b: usize) -> Derivation {
        let n = self.n;
        let images = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let mut p = Poly::zero(n * n);
                if j == b {
                    p = p.add(&self.var(i, a));
                }
                if i == a {
                    p = p.sub(&self.var(b, j));
                }
                p
            })
            .collect();
        Derivation::new(format!("E_{}_{}", a + 1, b + 1), images)
    }

    pub fn simple_derivations(&self) -> Vec<Derivation> {
        (0..self.n - 1).map(|i| self.derivation(i, i + 1)).collect()
    }

    pub fn root_derivation(&self, root: &[i64]) -> Derivation {
        let (a, b) = ends(root);
        self.derivation(a, b)
    }

    fn det(&self, rows: &[usize], cols: &[usize]) -> Poly {
        if rows.len() == 1 {
            return self.var(rows[0], cols[0]);
        }
        let mut acc = Poly::zero(self.n * self.n);
        for (k, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = self.var(rows[0], c).mul(&self.det(&rows[1..], &rest));
            acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    /// `(g w, l)` in Λ^i.
    fn pairing(&self, w: &Wedge, l: &Wedge) -> Poly {
        let mut acc = Poly::zero(self.n * self.n);
        for (i_idx, lc) in l {
            for (j_idx, wc) in w {
                acc = acc.add(&self.det(i_idx, j_idx).scale(&(lc * wc)));
            }
        }
        acc
    }

    fn highest(&self, i: usize) -> Wedge {
        Wedge::from([((0..i).collect(), Q::one())])
    }

    fn dual_highest(&self, i: usize) -> Wedge {
        Wedge::from([((self.n - i..self.n).collect(), Q::one())])
    }

    /// `d_i`, 1 ≤ i ≤ n−1: minor on the last i rows and first i columns.
    pub fn d(&self, i: usize) -> Poly {
        self.pairing(&self.highest(i), &self.dual_highest(i))
    }

    /// Smallest simple index ν with β − α_ν a positive root or zero (one-based).
    pub fn nu(&self, root: &[i64]) -> usize {
        (0..self.rs.rank())
            .find(|&i| {
                let d = crate::rootsystem::sub(root, &self.rs.simple_root(i));
                d.iter().all(|&c| c == 0) || self.rs.positive_index(&d).is_some()
            })
            .expect("every positive root has a simple predecessor")
            + 1
    }

    /// Exterior power used for β: the one whose dual highest vector has weight φ_ν.
    pub fn rep_index(&self, root: &[i64]) -> usize {
        self.n - self.nu(root)
    }

    /// `d_β = (g v⁺, E_{−β} l⁺)`.
    pub fn d_beta(&self, root: &[i64]) -> Poly {
        let i = self.rep_index(root);
        let (a, b) = ends(root);
        self.pairing(&self.highest(i), &unit_on_dual(b, a, &self.dual_highest(i)))
    }

    /// `c_β = (g E_{−β} v⁺, l⁺)` in Λ^ν, where the highest weight is φ_ν.
    pub fn c_beta(&self, root: &[i64]) -> Poly {
        let i = self.nu(root);
        let (a, b) = ends(root);
        self.pairing(&unit_on_wedge(b, a, &self.highest(i)), &self.dual_highest(i))
    }

    /// `Q_β = d_β / D_β(d_β)`; checks `D_β(d_β) = φ_ν(H_β) d_{n−ν}`.
    pub fn q_beta(&self, root: &[i64]) -> Result<SlicePair> {
        self.q_beta_in(root, &self.universe)
    }

    fn q_beta_in(&self, root: &[i64], set: &Arc<DenominatorSet>) -> Result<SlicePair> {
        let d = self.root_derivation(root);
        let db = self.d_beta(root);
        let img = d.apply_poly(&db);
        let nu = self.nu(root);
        let i = self.rep_index(root);
        let coeff = q(root[nu - 1]);
        if img.is_zero() || img != self.d(i).scale(&coeff) {
            return Err(Error::Internal(format!(
                "D_beta(d_beta) = {} is not phi(H_beta) d_{i}",
                img.to_text(self.universe.vars())
            )));
        }
        SlicePair::from_witness(&d, LocElem::from_poly(set, db), LocElem::from_poly(set, img))
    }

    /// `P = S_{β_1} ∘ ⋯ ∘ S_{β_m}`: the highest root acts first.
    pub fn projector(&self) -> Result<Projector> {
        let mut stages = Vec::new();
        let mut set = self.universe.clone();
        for root in self.rs.positive_roots().iter().rev() {
            let pair = self.q_beta_in(root, &set)?;
            set = pair.q.set().clone();
            stages.push(Stage {
                derivation: Arc::new(self.root_derivation(root)),
                pair,
            });
        }
        Projector::compose(&self.universe, stages)
    }
}

fn rand_matrix(rng: &mut ChaCha8Rng, n: usize, unipotent: bool) -> QMatrix {
    let mut m = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = if !unipotent {
                q(rng.gen_range(-5..=5))
            } else if i == j {
                q(1)
            } else if i < j {
                q(rng.gen_range(-3..=3))
            } else {
                q(0)
            };
        }
    }
    m
}

fn flatten(m: &QMatrix) -> Vec<Q> {
    (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect()
}

/// Finite check `f(u⁻¹ s u) = f(s)` for random unitriangular `u`.
pub fn group_invariance_check(n: usize, gens: &[NamedElem], trials: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x636f_6e6a);
    let mut report = Report::new();
    let mut bad = Vec::new();
    let mut done = 0;
    let mut attempts = 0;
    while done < trials && attempts < trials * 20 {
        attempts += 1;
        let s = rand_matrix(&mut rng, n, false);
        let u = rand_matrix(&mut rng, n, true);
        let ui = u.inverse().expect("unitriangular");
        let t = ui.mul(&s).mul(&u);
        let (ps, pt) = (flatten(&s), flatten(&t));
        let mut ok = true;
        let mut vals = Vec::new();
        for g in gens {
            match (g.elem.evaluate(&ps), g.elem.evaluate(&pt)) {
                (Ok(a), Ok(b)) => vals.push((g.name.clone(), a, b)),
                _ => ok = false,
            }
        }
        if !ok {
            continue;
        }
        done += 1;
        for (name, a, b) in vals {
            if a != b {
                bad.push(format!("{name}: {a} != {b}"));
            }
        }
    }
    if done == 0 {
        report.push(Check::inconclusive("group invariance", "no regular sample"));
    } else if bad.is_empty() {
        report.push(Check::pass("group invariance").with_note(format!("{done} pairs")));
    } else {
        report.push(Check::fail("group invariance", bad.join("; ")));
    }
    report
}

#[derive(Clone, Debug)]
pub struct Options {
    pub iter_cap: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub check: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            iter_cap: None,
            trials: 25,
            seed: 0,
            check: true,
        }
    }
}

pub fn conj_projector(n: usize, opts: &Options) -> Result<(Projector, GeneratorSet)> {
    let alg = MatrixAlgebra::new(n)?;
    let p = alg.projector()?.with_iteration_cap(opts.iter_cap);
    let set = alg.universe().clone();
    let mut generators = Vec::new();
    for i in 1..n {
        generators.push(NamedElem {
            name: format!("d{i}"),
            elem: LocElem::from_poly(&set, alg.d(i)),
        });
    }
    let mut candidates = Vec::new();
    for root in alg.root_system().positive_roots() {
        let c = LocElem::from_poly(&set, alg.c_beta(root));
        let (a, b) = ends(root);
        generators.push(NamedElem {
            name: format!("P(c_{}_{})", a + 1, b + 1),
            elem: p.apply(&c)?,
        });
        candidates.push(c);
    }
    let mut report = Report::new();
    if opts.check {
        let simple = alg.simple_derivations();
        let fam: Vec<&Derivation> = simple.iter().collect();
        for g in &generators {
            report.extend(verify_invariance(&g.name, &g.elem, &fam));
        }
        report.extend(cross_section_check(&p, &p.witnesses(), &candidates, opts.trials, opts.seed)?);
        report.extend(group_invariance_check(n, &generators, opts.trials, opts.seed));
    }
    let gs = GeneratorSet {
        kind: "conj".into(),
        source: serde_json::json!({ "n": n }),
        generators,
        projector: p.clone(),
        cascade: None,
        report,
    };
    Ok((p, gs))
}
