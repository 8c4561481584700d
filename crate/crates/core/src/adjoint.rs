//! U-projector and invariant generators for the adjoint action.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::genset::{GeneratorSet, NamedElem};
use crate::liealg::{ChevalleyBasis, LieElement};
use crate::linalg::QMatrix;
use crate::projector_core::{cross_section_check, verify_invariance, Derivation, Projector, SlicePair, Stage};
use crate::rational::{q, qf, Q};
use crate::report::{Check, Report};
use crate::rootsystem::Cascade;
use crate::symfield::{linear_poly, DenominatorSet, LocElem, PoissonStructure};

#[derive(Clone, Debug)]
pub struct LevelData {
    pub index: usize,
    /// Positive-root index of ξ_i.
    pub xi: usize,
    /// (α, α′) over Γ_i⁰.
    pub pairing: Vec<(usize, usize)>,
    /// Lift of E_ξ through the earlier levels.
    pub denominator: LocElem,
    /// Lift of the coroot H_ξ through the earlier levels.
    pub coroot: LocElem,
}

type Key = (usize, Vec<(usize, Q)>);

pub struct Adjoint {
    basis: ChevalleyBasis,
    poisson: PoissonStructure,
    cascade: Cascade,
    derivations: Vec<Arc<Derivation>>,
    levels: Vec<LevelData>,
    current: Arc<DenominatorSet>,
    inverses: Vec<LocElem>,
    memo: HashMap<Key, LocElem>,
}

fn key(level: usize, x: &LieElement) -> Key {
    (level, x.iter().map(|(i, c)| (i, c.clone())).collect())
}

impl Adjoint {
    pub fn new(basis: &ChevalleyBasis) -> Result<Self> {
        let rs = basis.root_system();
        let poisson = PoissonStructure::new(basis);
        let derivations = (0..rs.num_positive())
            .map(|a| {
                let i = basis.e(a);
                Arc::new(Derivation::new(basis.symbol(i), poisson.hamiltonian_images(i).to_vec()))
            })
            .collect();
        let mut adj = Adjoint {
            basis: basis.clone(),
            poisson,
            cascade: rs.kostant_cascade(),
            derivations,
            levels: Vec::new(),
            current: DenominatorSet::new(basis.symbols()),
            inverses: Vec::new(),
            memo: HashMap::new(),
        };
        for i in 0..adj.cascade.levels.len() {
            adj.build_level(i)?;
        }
        Ok(adj)
    }

    pub fn basis(&self) -> &ChevalleyBasis {
        &self.basis
    }

    pub fn cascade(&self) -> &Cascade {
        &self.cascade
    }

    pub fn levels(&self) -> &[LevelData] {
        &self.levels
    }

    pub fn poisson(&self) -> &PoissonStructure {
        &self.poisson
    }

    pub fn universe(&self) -> &Arc<DenominatorSet> {
        &self.current
    }

    /// `D_{E_α} = {E_α, ·}` for the positive root with index `a`.
    pub fn derivation(&self, a: usize) -> &Arc<Derivation> {
        &self.derivations[a]
    }

    pub fn simple_derivations(&self) -> Vec<&Derivation> {
        let rs = self.basis.root_system();
        (0..rs.rank())
            .map(|i| &*self.derivations[rs.positive_index(&rs.simple_root(i)).expect("simple")])
            .collect()
    }

    pub fn all_derivations(&self) -> Vec<&Derivation> {
        self.derivations.iter().map(|d| &**d).collect()
    }

    fn e_elem(&self, a: usize) -> LieElement {
        self.basis.element(self.basis.e(a))
    }

    /// Coefficients c_{ab} (a ≤ b over Γ_j⁰) of the correction term for `x` at level `j`.
    fn correction(&self, j: usize, x: &LieElement) -> Result<Vec<((usize, usize), Q)>> {
        let lvl = &self.cascade.levels[j];
        let rs = self.basis.root_system();
        let g0: Vec<usize> = lvl.gamma0().collect();
        let mut rhs = Vec::with_capacity(g0.len() * g0.len());
        let mut trivial = true;
        for &gamma in &g0 {
            let br = self.basis.bracket(x, &self.e_elem(gamma))?;
            let mut row = vec![Q::zero(); g0.len()];
            for (i, c) in br.iter() {
                let hit = (0..g0.len()).find(|&k| self.basis.e(g0[k]) == i);
                match hit {
                    Some(k) => row[k] = c.clone(),
                    None => {
                        return Err(Error::Internal(format!(
                            "[{}, E] leaves the Heisenberg algebra of level {}",
                            self.describe(x),
                            j + 1
                        )))
                    }
                }
                trivial = false;
            }
            rhs.extend(row);
        }
        if trivial {
            return Ok(Vec::new());
        }
        let pairs: Vec<(usize, usize)> = (0..g0.len())
            .flat_map(|a| (a..g0.len()).map(move |b| (a, b)))
            .collect();
        let xi = &rs.positive_roots()[lvl.xi];
        let n_with = |a: usize, gamma: usize| -> Q {
            let ra = &rs.positive_roots()[g0[a]];
            let rg = &rs.positive_roots()[g0[gamma]];
            if crate::rootsystem::add(ra, rg) == *xi {
                q(self.basis.structure_constant(ra, rg).expect("root sum"))
            } else {
                Q::zero()
            }
        };
        let mut m = QMatrix::zeros(g0.len() * g0.len(), pairs.len());
        for (col, &(a, b)) in pairs.iter().enumerate() {
            for gamma in 0..g0.len() {
                // {e_a e_b / e_ξ, e_γ} = N_{aγ} e_b + N_{bγ} e_a
                let na = n_with(a, gamma);
                if !na.is_zero() {
                    m[(gamma * g0.len() + b, col)] += na;
                }
                let nb = n_with(b, gamma);
                if !nb.is_zero() {
                    m[(gamma * g0.len() + a, col)] += nb;
                }
            }
        }
        let sol = m.solve(&rhs).ok_or_else(|| {
            Error::Internal(format!("no Heisenberg correction for {} at level {}", self.describe(x), j + 1))
        })?;
        Ok(pairs
            .into_iter()
            .zip(sol)
            .filter(|(_, c)| !c.is_zero())
            .map(|((a, b), c)| ((g0[a], g0[b]), c))
            .collect())
    }

    fn describe(&self, x: &LieElement) -> String {
        linear_poly(x).to_text(&self.basis.symbols())
    }

    /// Lift of `x` through levels `0..k`.
    pub fn lift(&mut self, k: usize, x: &LieElement) -> Result<LocElem> {
        if k == 0 {
            return Ok(LocElem::from_poly(&self.current, linear_poly(x)));
        }
        let kk = key(k, x);
        if let Some(e) = self.memo.get(&kk) {
            return Ok(e.clone());
        }
        let j = k - 1;
        let prev = self.lift(j, x)?;
        let corr = self.correction(j, x)?;
        let mut out = prev;
        if !corr.is_empty() {
            let inv = self.inverses[j].clone();
            let mut sum = LocElem::zero(&self.current);
            for ((a, b), c) in corr {
                let ea = self.lift(j, &self.e_elem(a))?;
                let eb = self.lift(j, &self.e_elem(b))?;
                sum = sum.try_add(&ea.try_mul(&eb)?.scale(&c))?;
            }
            out = out.try_sub(&sum.try_mul(&inv)?)?.reduced();
        }
        self.memo.insert(kk, out.clone());
        Ok(out)
    }

    fn build_level(&mut self, i: usize) -> Result<()> {
        let lvl = self.cascade.levels[i].clone();
        let rs = self.basis.root_system().clone();
        let xi_root = rs.positive_roots()[lvl.xi].clone();
        let den = self.lift(i, &self.e_elem(lvl.xi))?.in_set(&self.current)?;
        let inv = den.inverse_declaring()?;
        self.current = inv.set().clone();
        let den = den.in_set(&self.current)?;
        self.inverses.push(inv);
        let h = self.basis.coroot(&xi_root)?;
        let coroot = self.lift(i, &h)?;
        self.levels.push(LevelData {
            index: i,
            xi: lvl.xi,
            pairing: lvl.pairing.clone(),
            denominator: den,
            coroot,
        });
        Ok(())
    }

    fn q_xi(&self, i: usize) -> Result<SlicePair> {
        let l = &self.levels[i];
        let d = &self.derivations[l.xi];
        let a1 = l.coroot.scale(&qf(-1, 2));
        SlicePair::from_witness(d, a1, l.denominator.clone())
            .map_err(|e| Error::Internal(format!("level {} slice for ξ: {e}", i + 1)))
    }

    fn q_alpha(&mut self, i: usize, alpha: usize, partner: usize) -> Result<SlicePair> {
        let rs = self.basis.root_system().clone();
        let n = self
            .basis
            .structure_constant(&rs.positive_roots()[alpha], &rs.positive_roots()[partner])
            .ok_or_else(|| Error::Internal("partner roots do not sum to ξ".into()))?;
        let ep = self.lift(i, &self.e_elem(partner))?;
        let den = self.levels[i].denominator.clone();
        let d = self.derivations[alpha].clone();
        let base = ep.scale(&qf(-1, n));
        match SlicePair::from_witness(&d, base.clone(), den.clone()) {
            Ok(sp) => Ok(sp),
            Err(Error::SliceCondition { .. }) => SlicePair::from_witness(&d, base.neg(), den)
                .map_err(|e| Error::Internal(format!("level {} slice for {}: {e}", i + 1, d.label()))),
            Err(e) => Err(e),
        }
    }

    /// Stages level by level; within a level S_ξ first, then Γ⁰ in `order`.
    pub fn projector_with_order(&mut self, reorder: impl Fn(usize, &mut Vec<(usize, usize)>)) -> Result<Projector> {
        let mut stages = Vec::new();
        for i in 0..self.levels.len() {
            stages.push(Stage {
                derivation: self.derivations[self.levels[i].xi].clone(),
                pair: self.q_xi(i)?,
            });
            let mut pairs = self.levels[i].pairing.clone();
            reorder(i, &mut pairs);
            for (a, b) in pairs {
                stages.push(Stage {
                    derivation: self.derivations[a].clone(),
                    pair: self.q_alpha(i, a, b)?,
                });
            }
        }
        Projector::compose(&self.current, stages)
    }

    pub fn projector(&mut self) -> Result<Projector> {
        self.projector_with_order(|_, _| {})
    }

    /// Cartan elements with ξ_j(H) = 0 for every cascade root.
    pub fn cartan_complement(&self) -> Vec<LieElement> {
        let rs = self.basis.root_system();
        let rows: Vec<Vec<Q>> = self
            .levels
            .iter()
            .map(|l| {
                let xi = &rs.positive_roots()[l.xi];
                (0..rs.rank()).map(|k| q(rs.pairing(xi, &rs.simple_root(k)))).collect()
            })
            .collect();
        QMatrix::from_rows(rows)
            .kernel()
            .into_iter()
            .map(|v| {
                let mut h = LieElement::zero(self.basis.dim());
                for (k, c) in v.iter().enumerate() {
                    h.add_term(self.basis.h(k), c);
                }
                h
            })
            .collect()
    }

    /// Degree-two invariant from the invariant form.
    pub fn casimir(&self) -> LocElem {
        let b = &self.basis;
        let rs = b.root_system();
        let r = rs.rank();
        let g = QMatrix::from_rows(
            (0..r)
                .map(|i| (0..r).map(|j| b.invariant_form(b.h(i), b.h(j))).collect())
                .collect(),
        );
        let gi = g.inverse().expect("nondegenerate form");
        let set = &self.current;
        let mut acc = LocElem::zero(set);
        for i in 0..r {
            for j in 0..r {
                let t = LocElem::var(set, b.h(i)).try_mul(&LocElem::var(set, b.h(j))).expect("same set");
                acc = acc.try_add(&t.scale(&gi[(i, j)])).expect("same set");
            }
        }
        for (a, root) in rs.positive_roots().iter().enumerate() {
            let c = q(rs.inner(root, root));
            let t = LocElem::var(set, b.e(a)).try_mul(&LocElem::var(set, b.f(a))).expect("same set");
            acc = acc.try_add(&t.scale(&c)).expect("same set");
        }
        acc
    }
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

pub fn adjoint_projector(basis: &ChevalleyBasis) -> Result<(Adjoint, Projector)> {
    let mut adj = Adjoint::new(basis)?;
    let p = adj.projector()?;
    Ok((adj, p))
}

pub fn adjoint_generators(basis: &ChevalleyBasis, opts: &Options) -> Result<GeneratorSet> {
    let (adj, p) = adjoint_projector(basis)?;
    let p = p.with_iteration_cap(opts.iter_cap);
    let rs = basis.root_system();
    let syms = basis.symbols();
    let set = adj.universe().clone();
    let mut sources: Vec<(String, LocElem)> = Vec::new();
    for a in 0..rs.num_positive() {
        let i = basis.f(a);
        sources.push((format!("P({})", syms[i]), LocElem::var(&set, i)));
    }
    for h in adj.cartan_complement() {
        let lp = linear_poly(&h);
        sources.push((format!("P({})", lp.to_text(&syms)), LocElem::from_poly(&set, lp)));
    }
    let mut generators = Vec::new();
    for (name, b) in &sources {
        generators.push(NamedElem {
            name: name.clone(),
            elem: p.apply(b)?,
        });
    }
    for l in adj.levels() {
        generators.push(NamedElem {
            name: format!("xi{}", l.index + 1),
            elem: l.denominator.clone(),
        });
    }
    let mut report = Report::new();
    let expected = rs.num_positive() + rs.rank();
    if generators.len() == expected {
        report.push(Check::pass("generator count").with_note(format!("{expected}")));
    } else {
        report.push(Check::fail(
            "generator count",
            format!("{} generators, expected {expected}", generators.len()),
        ));
    }
    if opts.check {
        let simple = adj.simple_derivations();
        for g in &generators {
            report.extend(verify_invariance(&g.name, &g.elem, &simple));
        }
        let candidates: Vec<LocElem> = sources.into_iter().map(|s| s.1).collect();
        report.extend(cross_section_check(&p, &p.witnesses(), &candidates, opts.trials, opts.seed)?);
    }
    Ok(GeneratorSet {
        kind: "adjoint".into(),
        source: serde_json::json!({"type": rs.series().to_string(), "rank": rs.rank()}),
        generators,
        cascade: Some(rs.cascade_json(adj.cascade())),
        projector: p,
        report,
    })
}

