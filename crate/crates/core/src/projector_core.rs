//! Locally nilpotent derivations, S-maps and composed projectors.

use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::{factorial, q, Q};
use crate::report::{Check, Report};
use crate::symfield::{DenominatorSet, LocElem, Monomial, Poly};

/// A derivation given by the images of the coordinate functions.
#[derive(Debug)]
pub struct Derivation {
    label: String,
    images: Vec<Poly>,
    cache: Mutex<GenCache>,
}

#[derive(Debug, Default)]
struct GenCache {
    gens: Vec<Arc<Poly>>,
    images: Arc<Vec<Poly>>,
}

impl Clone for Derivation {
    fn clone(&self) -> Self {
        Derivation::new(self.label.clone(), self.images.clone())
    }
}

impl Derivation {
    pub fn new(label: impl Into<String>, images: Vec<Poly>) -> Self {
        Derivation {
            label: label.into(),
            images,
            cache: Mutex::new(GenCache::default()),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    fn gen_images(&self, set: &DenominatorSet) -> Arc<Vec<Poly>> {
        let gens = set.gens();
        let mut c = self.cache.lock().expect("cache poisoned");
        let agrees = c.gens.len() <= gens.len()
            && c.gens.iter().zip(gens).all(|(a, b)| Arc::ptr_eq(a, b));
        if !agrees {
            return Arc::new(gens.iter().map(|g| g.derive(&self.images)).collect());
        }
        if c.gens.len() < gens.len() {
            let mut imgs = (*c.images).clone();
            for g in &gens[c.gens.len()..] {
                imgs.push(g.derive(&self.images));
            }
            c.gens = gens.to_vec();
            c.images = Arc::new(imgs);
        }
        c.images.clone()
    }

    pub fn apply(&self, a: &LocElem) -> LocElem {
        if a.is_polynomial() {
            return LocElem::from_poly(a.set(), a.numerator().derive(&self.images));
        }
        let g = self.gen_images(a.set());
        a.derive(&self.images, Some(&g))
    }

    pub fn apply_poly(&self, p: &Poly) -> Poly {
        p.derive(&self.images)
    }

    pub fn kills(&self, a: &LocElem) -> bool {
        self.apply(a).is_zero()
    }
}

/// `q` with `D(q) = 1`, optionally with the pair it was built from.
#[derive(Clone, Debug)]
pub struct SlicePair {
    pub q: LocElem,
    pub witness: Option<(LocElem, LocElem)>,
}

impl SlicePair {
    pub fn new(d: &Derivation, q: LocElem) -> Result<Self> {
        let got = d.apply(&q).reduced();
        if got.as_constant() != Some(Q::one()) {
            return Err(Error::SliceCondition {
                label: d.label().to_string(),
                got: got.to_text(),
            });
        }
        Ok(SlicePair { q, witness: None })
    }

    /// `q = a1 / a0` where `D(a1) = a0`.
    pub fn from_witness(d: &Derivation, a1: LocElem, a0: LocElem) -> Result<Self> {
        let inv = a0.inverse_declaring()?;
        let q = a1.try_mul(&inv)?.reduced();
        let mut sp = SlicePair::new(d, q)?;
        sp.witness = Some((a1.in_set(sp.q.set())?, a0.in_set(sp.q.set())?));
        Ok(sp)
    }

    pub fn numerator(&self) -> Option<&LocElem> {
        self.witness.as_ref().map(|w| &w.0)
    }
}

pub fn default_iteration_cap(a: &LocElem) -> usize {
    10 * a.total_degree() as usize + 16
}

/// `Σ (-1)^k D^k(a) q^k / k!`.
pub fn smap(d: &Derivation, sp: &SlicePair, a: &LocElem) -> Result<LocElem> {
    smap_capped(d, sp, a, None)
}

pub fn smap_capped(d: &Derivation, sp: &SlicePair, a: &LocElem, cap: Option<usize>) -> Result<LocElem> {
    let cap = cap.unwrap_or_else(|| default_iteration_cap(a));
    let mut acc = a.clone();
    let mut cur = a.clone();
    let mut qk = LocElem::one(sp.q.set());
    for k in 1..=cap {
        cur = d.apply(&cur);
        if cur.is_zero() {
            return Ok(acc.reduced());
        }
        qk = qk.try_mul(&sp.q)?;
        let mut c = factorial(k).recip();
        if k % 2 == 1 {
            c = -c;
        }
        acc = acc.try_add(&cur.try_mul(&qk)?.scale(&c))?;
    }
    if d.apply(&cur).is_zero() {
        return Ok(acc.reduced());
    }
    Err(Error::NotNilpotent {
        label: d.label().to_string(),
        cap,
    })
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub derivation: Arc<Derivation>,
    pub pair: SlicePair,
}

/// Stages in application order: `stages[0]` acts first.
#[derive(Clone, Debug)]
pub struct Projector {
    stages: Vec<Stage>,
    denominators: Arc<DenominatorSet>,
    iter_cap: Option<usize>,
}

impl Projector {
    pub fn identity(set: &Arc<DenominatorSet>) -> Self {
        Projector {
            stages: Vec::new(),
            denominators: set.clone(),
            iter_cap: None,
        }
    }

    /// Checks `D_s(Q_s) = 1` and that every stage's derivation kills the
    /// `Q` of each stage applied after it.
    pub fn compose(set: &Arc<DenominatorSet>, stages: Vec<Stage>) -> Result<Self> {
        let mut den = set.clone();
        for s in &stages {
            let got = s.derivation.apply(&s.pair.q).reduced();
            if got.as_constant() != Some(Q::one()) {
                return Err(Error::SliceCondition {
                    label: s.derivation.label().to_string(),
                    got: got.to_text(),
                });
            }
            den = DenominatorSet::join(&den, s.pair.q.set())?;
        }
        for (t, earlier) in stages.iter().enumerate() {
            for (s, later) in stages.iter().enumerate().skip(t + 1) {
                let r = earlier.derivation.apply(&later.pair.q).reduced();
                if !r.is_zero() {
                    return Err(Error::Triangularity {
                        earlier: t,
                        later: s,
                        earlier_label: earlier.derivation.label().to_string(),
                        later_label: later.derivation.label().to_string(),
                        residue: r.to_text(),
                    });
                }
            }
        }
        Ok(Projector {
            stages,
            denominators: den,
            iter_cap: None,
        })
    }

    pub fn with_iteration_cap(mut self, cap: Option<usize>) -> Self {
        self.iter_cap = cap;
        self
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn denominators(&self) -> &Arc<DenominatorSet> {
        &self.denominators
    }

    pub fn apply(&self, a: &LocElem) -> Result<LocElem> {
        let mut cur = a.clone();
        for s in &self.stages {
            cur = smap_capped(&s.derivation, &s.pair, &cur, self.iter_cap)?;
        }
        Ok(cur)
    }

    pub fn derivations(&self) -> Vec<Arc<Derivation>> {
        self.stages.iter().map(|s| s.derivation.clone()).collect()
    }

    pub fn witnesses(&self) -> Vec<LocElem> {
        self.stages
            .iter()
            .filter_map(|s| s.pair.numerator().cloned())
            .collect()
    }
}

/// Monomials of total degree `1..=d` in `n` variables.
fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i == n {
            if cur.iter().any(|&e| e > 0) {
                out.push(Monomial::from_exponents(cur.clone()));
            }
            return;
        }
        for e in 0..=left {
            cur[i] = e as u16;
            rec(n, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(n, 0, d, &mut vec![0; n], &mut out);
    out.sort();
    out
}

fn coefficient_matrix(polys: &[Poly]) -> (QMatrix, Vec<Monomial>) {
    let rows: BTreeSet<Monomial> = polys
        .iter()
        .flat_map(|p| p.terms().iter().map(|(m, _)| m.clone()))
        .collect();
    let rows: Vec<Monomial> = rows.into_iter().collect();
    let mut m = QMatrix::zeros(rows.len(), polys.len());
    for (j, p) in polys.iter().enumerate() {
        for (mon, c) in p.terms() {
            let i = rows.binary_search(mon).expect("collected above");
            m[(i, j)] = c.clone();
        }
    }
    (m, rows)
}

fn combine(basis: &[Poly], coeffs: &[Q], n: usize) -> Poly {
    let mut acc = Poly::zero(n);
    for (p, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = acc.add(&p.scale(c));
        }
    }
    acc
}

/// Searches for `a1` of degree at most `degree_cap` with `a0 = D(a1) != 0`
/// killed by every derivation of `family`. Lowest degree wins; `a0` is monic.
pub fn find_slice_pair(
    set: &Arc<DenominatorSet>,
    family: &[&Derivation],
    d: &Derivation,
    degree_cap: u32,
) -> Result<SlicePair> {
    let n = set.nvars();
    for deg in 1..=degree_cap {
        let mons = monomials_up_to(n, deg);
        let basis: Vec<Poly> = mons
            .iter()
            .map(|m| Poly::from_terms(n, [(m.clone(), Q::one())]))
            .collect();
        let images: Vec<Poly> = basis.iter().map(|p| d.apply_poly(p)).collect();
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for y in family {
            let second: Vec<Poly> = images.iter().map(|p| y.apply_poly(p)).collect();
            let (m, _) = coefficient_matrix(&second);
            for i in 0..m.rows() {
                rows.push(m.row(i).to_vec());
            }
        }
        let kernel = if rows.is_empty() {
            (0..basis.len())
                .map(|j| (0..basis.len()).map(|i| if i == j { q(1) } else { q(0) }).collect())
                .collect()
        } else {
            QMatrix::from_rows(rows).kernel()
        };
        let mut best: Option<(Poly, Poly)> = None;
        for v in &kernel {
            let a0 = combine(&images, v, n);
            if a0.is_zero() {
                continue;
            }
            let a1 = combine(&basis, v, n);
            let better = match &best {
                None => true,
                Some((b0, _)) => {
                    let (lm, _) = a0.leading().expect("nonzero");
                    let (bm, _) = b0.leading().expect("nonzero");
                    (a0.total_degree(), a0.len(), lm) < (b0.total_degree(), b0.len(), bm)
                }
            };
            if better {
                best = Some((a0, a1));
            }
        }
        if let Some((a0, a1)) = best {
            let c = a0.leading().expect("nonzero").1.recip();
            let a0 = LocElem::from_poly(set, a0.scale(&c));
            let a1 = LocElem::from_poly(set, a1.scale(&c));
            return SlicePair::from_witness(d, a1, a0);
        }
    }
    Err(Error::NoSlicePair {
        cap: degree_cap as usize,
    })
}

pub fn verify_invariance(name: &str, a: &LocElem, family: &[&Derivation]) -> Report {
    let mut r = Report::new();
    for d in family {
        let res = d.apply(a).reduced();
        let check = format!("{name} invariant under {}", d.label());
        if res.is_zero() {
            r.push(Check::pass(check));
        } else {
            r.push(Check::fail(check, res.to_text()));
        }
    }
    r
}

pub fn jacobian_rank(funcs: &[LocElem], point: &[Q]) -> Result<usize> {
    let rows = funcs
        .iter()
        .map(|f| f.gradient_at(point))
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(QMatrix::from_rows(rows).rank())
}

fn proportional(a: &LocElem, b: &LocElem) -> bool {
    let lead = |e: &LocElem| e.reduced().numerator().leading().map(|t| t.1.clone());
    match (lead(a), lead(b)) {
        (Some(x), Some(y)) => a.scale(&x.recip()) == b.scale(&y.recip()),
        _ => false,
    }
}

const BOX: i64 = 6;

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    (0..n).map(|_| q(rng.gen_range(-BOX..=BOX))).collect()
}

fn nonsingular(gens: &[Arc<Poly>], pt: &[Q]) -> bool {
    gens.iter().all(|g| !g.evaluate(pt).is_zero())
}

/// `count` seeded integer points in [-6, 6]^n where no declared denominator
/// vanishes. Gives up after 1000 draws per point.
pub fn regular_points(set: &DenominatorSet, count: usize, seed: u64) -> Result<Vec<Vec<Q>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let pt = (0..1000)
            .map(|_| random_point(&mut rng, set.nvars()))
            .find(|pt| nonsingular(set.gens(), pt))
            .ok_or_else(|| Error::Internal("no regular point found".into()))?;
        out.push(pt);
    }
    Ok(out)
}

/// Tries to move `pt` onto the common zero set of `witnesses` by repeatedly
/// solving unsatisfied witnesses for a variable they depend on affinely,
/// preferring variables shared with few other witnesses and refusing moves
/// that make a denominator vanish.
fn solve_onto(witnesses: &[Poly], gens: &[Arc<Poly>], pt: &mut [Q], rng: &mut ChaCha8Rng) -> bool {
    let n = pt.len();
    let occurs = |w: &Poly, v: usize| w.terms().iter().any(|(m, _)| m.exponents()[v] > 0);
    let shared: Vec<usize> = (0..n)
        .map(|v| witnesses.iter().filter(|w| occurs(w, v)).count())
        .collect();
    for _ in 0..witnesses.len() + 2 {
        let mut clean = true;
        for w in witnesses {
            if w.evaluate(pt).is_zero() {
                continue;
            }
            clean = false;
            let mut vars: Vec<usize> = (0..n)
                .filter(|&v| occurs(w, v) && w.terms().iter().all(|(m, _)| m.exponents()[v] <= 1))
                .collect();
            // random tie-breaks so repeated trials explore different solutions
            for i in (1..vars.len()).rev() {
                vars.swap(i, rng.gen_range(0..=i));
            }
            if rng.gen_bool(0.5) {
                vars.sort_by_key(|&v| shared[v]);
            }
            for v in vars {
                let mut at = pt.to_vec();
                at[v] = Q::zero();
                let s = w.partial(v).evaluate(&at);
                if s.is_zero() {
                    continue;
                }
                at[v] = -w.evaluate(&at) / s;
                if nonsingular(gens, &at) {
                    pt[v] = at[v].clone();
                    break;
                }
            }
        }
        if clean {
            return true;
        }
    }
    witnesses.iter().all(|w| w.evaluate(pt).is_zero())
}

/// Necessary conditions for `{P(b)} ∪ denominators` to freely generate the
/// invariant field: the restriction identity on sampled points of the
/// witness locus, and a Jacobian rank count at a generic point.
pub fn cross_section_check(
    p: &Projector,
    witnesses: &[LocElem],
    candidates: &[LocElem],
    trials: usize,
    seed: u64,
) -> Result<Report> {
    let mut report = Report::new();
    if candidates.is_empty() {
        report.push(Check::pass("jacobian rank").with_note("rank 0 of 0 (no candidates)"));
        return Ok(report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = p.denominators().clone();
    for c in candidates.iter().chain(witnesses) {
        set = DenominatorSet::join(&set, c.set())?;
    }
    let projected = candidates
        .iter()
        .map(|b| p.apply(b))
        .collect::<Result<Vec<_>>>()?;
    for b in &projected {
        set = DenominatorSet::join(&set, b.set())?;
    }
    let gens = set.gens().to_vec();
    let n = set.nvars();
    let wpolys: Vec<Poly> = witnesses.iter().map(|w| w.reduced().numerator().clone()).collect();

    let mut hits = 0usize;
    let mut mismatches = Vec::new();
    for _ in 0..trials {
        let mut pt = random_point(&mut rng, n);
        if !solve_onto(&wpolys, &gens, &mut pt, &mut rng) || !nonsingular(&gens, &pt) {
            continue;
        }
        hits += 1;
        for (i, (b, pb)) in candidates.iter().zip(&projected).enumerate() {
            let lhs = pb.evaluate(&pt)?;
            let rhs = b.evaluate(&pt)?;
            if lhs != rhs {
                mismatches.push(format!("candidate {i}: {lhs} != {rhs}"));
            }
        }
    }
    if hits == 0 {
        report.push(Check::inconclusive(
            "restriction identity",
            format!("no point of the witness locus found in {trials} trials"),
        ));
    } else if mismatches.is_empty() {
        report.push(Check::pass("restriction identity").with_note(format!("{hits} points")));
    } else {
        report.push(Check::fail("restriction identity", mismatches.join("; ")));
    }

    let mut funcs: Vec<LocElem> = Vec::new();
    for f in projected.iter().cloned().chain(gens.iter().map(|g| LocElem::from_poly(&set, (**g).clone()))) {
        let f = f.in_set(&set)?;
        if f.as_constant().is_none() && !funcs.iter().any(|g| proportional(g, &f)) {
            funcs.push(f);
        }
    }
    let expected = funcs.len();
    let mut best = None;
    for _ in 0..trials.max(1) {
        let pt = random_point(&mut rng, n);
        if !nonsingular(&gens, &pt) {
            continue;
        }
        let r = jacobian_rank(&funcs, &pt)?;
        best = Some(best.map_or(r, |b: usize| b.max(r)));
        if r == expected {
            break;
        }
    }
    match best {
        None => report.push(Check::inconclusive("jacobian rank", "no regular point found")),
        Some(r) if r == expected => {
            report.push(Check::pass("jacobian rank").with_note(format!("rank {r} of {expected}")))
        }
        Some(r) => report.push(Check::fail("jacobian rank", format!("rank {r} of {expected}"))),
    }
    Ok(report)
}
