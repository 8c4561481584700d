//! U-projector for a finite-dimensional representation given by matrices.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genset::{GeneratorSet, NamedElem};
use crate::liealg::{BasisKind, ChevalleyBasis};
use crate::linalg::{extend_basis, rank_of_rows, QMatrix};
use crate::projector_core::{cross_section_check, verify_invariance, Derivation, Projector, SlicePair, Stage};
use crate::rational::{self, q, Q};
use crate::report::{Check, Report};
use crate::rootsystem::{RootSystem, Series};
use crate::symfield::{DenominatorSet, LocElem, Poly};

#[derive(Clone, Debug)]
pub struct RepInput {
    basis: ChevalleyBasis,
    rho: Vec<QMatrix>,
    weights: Vec<Vec<i64>>,
    coords: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepFile {
    #[serde(rename = "type")]
    pub series: String,
    pub rank: usize,
    pub dim: usize,
    pub matrices: BTreeMap<String, Vec<Vec<String>>>,
    pub weights: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<String>>,
}

fn commutator(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.mul(b).sub(&b.mul(a))
}

impl RepInput {
    /// Builds the full representation from the simple generators `E_i, F_i, H_i`
    /// and checks it is a homomorphism with the declared weights.
    pub fn new(
        basis: &ChevalleyBasis,
        simple: &[(QMatrix, QMatrix, QMatrix)],
        weights: Vec<Vec<i64>>,
        coords: Option<Vec<String>>,
    ) -> Result<Self> {
        let rs = basis.root_system();
        let r = rs.rank();
        if basis.center_dim() != 0 {
            return Err(Error::Representation("central elements are not supported".into()));
        }
        if simple.len() != r {
            return Err(Error::Representation(format!("{} generator triples for rank {r}", simple.len())));
        }
        let dim = weights.len();
        for (i, (e, f, h)) in simple.iter().enumerate() {
            for (m, s) in [(e, "E"), (f, "F"), (h, "H")] {
                if m.rows() != dim || m.cols() != dim {
                    return Err(Error::Representation(format!(
                        "{s}{} is {}x{}, expected {dim}x{dim}",
                        i + 1,
                        m.rows(),
                        m.cols()
                    )));
                }
            }
        }
        if weights.iter().any(|w| w.len() != r) {
            return Err(Error::Representation("weight vectors must have one entry per simple root".into()));
        }
        let coords = coords.unwrap_or_else(|| (1..=dim).map(|i| format!("x_{i}")).collect());
        if coords.len() != dim {
            return Err(Error::Representation(format!("{} coordinate names for dimension {dim}", coords.len())));
        }
        let n = rs.num_positive();
        let mut rho: Vec<Option<QMatrix>> = vec![None; basis.dim()];
        for (i, (e, f, h)) in simple.iter().enumerate() {
            let a = rs.positive_index(&rs.simple_root(i)).expect("simple root");
            rho[basis.e(a)] = Some(e.clone());
            rho[basis.f(a)] = Some(f.clone());
            rho[basis.h(i)] = Some(h.clone());
        }
        for g in 0..n {
            let gamma = rs.positive_roots()[g].clone();
            if rho[basis.e(g)].is_some() {
                continue;
            }
            let (i, d) = (0..r)
                .find_map(|i| {
                    let delta = crate::rootsystem::sub(&gamma, &rs.simple_root(i));
                    rs.positive_index(&delta).map(|d| (i, d))
                })
                .expect("non-simple positive root has a simple predecessor");
            let ai = rs.simple_root(i);
            let delta = rs.positive_roots()[d].clone();
            let ei = rs.positive_index(&ai).expect("simple");
            let ne = basis.structure_constant(&ai, &delta).expect("root sum");
            let nf = basis
                .structure_constant(&crate::rootsystem::neg(&ai), &crate::rootsystem::neg(&delta))
                .expect("root sum");
            let e = commutator(rho[basis.e(ei)].as_ref().unwrap(), rho[basis.e(d)].as_ref().unwrap())
                .scale(&Q::new(1.into(), ne.into()));
            let f = commutator(rho[basis.f(ei)].as_ref().unwrap(), rho[basis.f(d)].as_ref().unwrap())
                .scale(&Q::new(1.into(), nf.into()));
            rho[basis.e(g)] = Some(e);
            rho[basis.f(g)] = Some(f);
        }
        let rho: Vec<QMatrix> = rho.into_iter().map(|m| m.expect("all filled")).collect();
        let rep = RepInput {
            basis: basis.clone(),
            rho,
            weights,
            coords,
        };
        rep.check()?;
        Ok(rep)
    }

    fn check(&self) -> Result<()> {
        let b = &self.basis;
        let syms = b.symbols();
        let dim = self.dim();
        for i in 0..b.rank() {
            let h = &self.rho[b.h(i)];
            for r in 0..dim {
                for c in 0..dim {
                    let want = if r == c { q(self.weights[r][i]) } else { Q::zero() };
                    if h[(r, c)] != want {
                        return Err(Error::Representation(format!(
                            "H{} entry ({r},{c}) is {}, declared weight gives {}",
                            i + 1,
                            rational::to_string(&h[(r, c)]),
                            rational::to_string(&want)
                        )));
                    }
                }
            }
        }
        for x in 0..b.dim() {
            for y in (x + 1)..b.dim() {
                let br = b.bracket_basis(x, y);
                let mut lhs = QMatrix::zeros(dim, dim);
                for (k, c) in br.iter() {
                    lhs = lhs.add(&self.rho[k].scale(c));
                }
                let rhs = commutator(&self.rho[x], &self.rho[y]);
                if lhs != rhs {
                    return Err(Error::Representation(format!(
                        "rho([{}, {}]) != [rho({}), rho({})]",
                        syms[x], syms[y], syms[x], syms[y]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn from_file(file: &RepFile) -> Result<Self> {
        let series = file
            .series
            .chars()
            .next()
            .and_then(Series::from_char)
            .filter(|_| file.series.len() == 1)
            .ok_or_else(|| Error::Representation(format!("unknown type {:?}", file.series)))?;
        let rs = RootSystem::new(series, file.rank)?;
        let basis = ChevalleyBasis::new(&rs)?;
        let get = |name: String| -> Result<QMatrix> {
            let rows = file
                .matrices
                .get(&name)
                .ok_or_else(|| Error::Representation(format!("missing matrix {name}")))?;
            if rows.len() != file.dim || rows.iter().any(|r| r.len() != file.dim) {
                return Err(Error::Representation(format!("matrix {name} is not {0}x{0}", file.dim)));
            }
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok(QMatrix::from_rows(rows))
        };
        let mut simple = Vec::new();
        for i in 1..=file.rank {
            simple.push((get(format!("E{i}"))?, get(format!("F{i}"))?, get(format!("H{i}"))?));
        }
        if file.weights.len() != file.dim {
            return Err(Error::Representation(format!(
                "{} weights for dimension {}",
                file.weights.len(),
                file.dim
            )));
        }
        RepInput::new(&basis, &simple, file.weights.clone(), file.coords.clone())
    }

    pub fn to_file(&self) -> RepFile {
        let rs = self.basis.root_system();
        let mut matrices = BTreeMap::new();
        let text = |m: &QMatrix| -> Vec<Vec<String>> {
            (0..m.rows())
                .map(|r| m.row(r).iter().map(rational::to_string).collect())
                .collect()
        };
        for i in 0..rs.rank() {
            let a = rs.positive_index(&rs.simple_root(i)).expect("simple");
            matrices.insert(format!("E{}", i + 1), text(&self.rho[self.basis.e(a)]));
            matrices.insert(format!("F{}", i + 1), text(&self.rho[self.basis.f(a)]));
            matrices.insert(format!("H{}", i + 1), text(&self.rho[self.basis.h(i)]));
        }
        RepFile {
            series: rs.series().to_string(),
            rank: rs.rank(),
            dim: self.dim(),
            matrices,
            weights: self.weights.clone(),
            coords: Some(self.coords.clone()),
        }
    }

    /// Defining representation of sl_{n}, n = rank + 1.
    pub fn sl_defining(rank: usize) -> Result<Self> {
        let rs = RootSystem::new(Series::A, rank)?;
        let basis = ChevalleyBasis::new(&rs)?;
        let n = rank + 1;
        let unit = |i: usize, j: usize| {
            let mut m = QMatrix::zeros(n, n);
            m[(i, j)] = q(1);
            m
        };
        let simple = (0..rank)
            .map(|i| (unit(i, i + 1), unit(i + 1, i), unit(i, i).sub(&unit(i + 1, i + 1))))
            .collect::<Vec<_>>();
        let weights = (0..n)
            .map(|k| {
                (0..rank)
                    .map(|i| i64::from(k == i) - i64::from(k == i + 1))
                    .collect()
            })
            .collect();
        RepInput::new(&basis, &simple, weights, None)
    }

    /// Coadjoint representation `x ↦ -ad(x)^T`; its coordinate ring is S(g)
    /// with the Lie–Poisson action, coordinates named by the basis symbols.
    pub fn coadjoint(basis: &ChevalleyBasis) -> Result<Self> {
        let dim = basis.dim();
        let ad = |x: usize| {
            let mut m = QMatrix::zeros(dim, dim);
            for j in 0..dim {
                for (k, c) in basis.bracket_basis(x, j).iter() {
                    m[(k, j)] = c.clone();
                }
            }
            m
        };
        let rs = basis.root_system();
        let minus = q(-1);
        let simple = (0..rs.rank())
            .map(|i| {
                let a = rs.positive_index(&rs.simple_root(i)).expect("simple");
                (
                    ad(basis.e(a)).transpose().scale(&minus),
                    ad(basis.f(a)).transpose().scale(&minus),
                    ad(basis.h(i)).transpose().scale(&minus),
                )
            })
            .collect::<Vec<_>>();
        let weights = (0..dim)
            .map(|j| match basis.kind(j) {
                BasisKind::Root(_) => (0..rs.rank())
                        .map(|i| {
                            let c = ad(basis.h(i))[(j, j)].clone();
                        -c.to_integer().try_into().unwrap_or(0i64)
                    })
                    .collect(),
                _ => vec![0; rs.rank()],
            })
            .collect();
        RepInput::new(basis, &simple, weights, Some(basis.symbols()))
    }

    pub fn basis(&self) -> &ChevalleyBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn matrix(&self, basis_index: usize) -> &QMatrix {
        &self.rho[basis_index]
    }

    /// `D_x(x_j) = -Σ_k ρ(x)_{jk} x_k`.
    pub fn derivation(&self, basis_index: usize) -> Derivation {
        let m = &self.rho[basis_index];
        let images = (0..self.dim())
            .map(|j| Poly::linear(&m.row(j).iter().map(|c| -c.clone()).collect::<Vec<_>>()))
            .collect();
        Derivation::new(self.basis.symbol(basis_index), images)
    }

    pub fn simple_derivations(&self) -> Vec<Derivation> {
        let rs = self.basis.root_system();
        (0..rs.rank())
            .map(|i| self.derivation(self.basis.e(rs.positive_index(&rs.simple_root(i)).expect("simple"))))
            .collect()
    }

    /// Rank of `v ↦ (ρ(E_α) v)_α` at `v`.
    pub fn orbit_dimension_at(&self, v: &[Q]) -> usize {
        let n = self.basis.root_system().num_positive();
        let rows: Vec<Vec<Q>> = (0..n).map(|a| self.rho[self.basis.e(a)].mul_vec(v)).collect();
        rank_of_rows(&rows)
    }
}

#[derive(Clone, Debug)]
struct WVec {
    v: Vec<Q>,
    wt: Vec<i64>,
}

/// Weight order: height in simple-root coordinates, then those coordinates lexicographically.
fn weight_key(cartan_t_inv: &QMatrix, wt: &[i64]) -> (Q, Vec<Q>) {
    let c = cartan_t_inv.mul_vec(&wt.iter().map(|&x| q(x)).collect::<Vec<_>>());
    let h = c.iter().fold(Q::zero(), |a, b| a + b);
    (h, c)
}

#[derive(Clone, Debug)]
pub struct StageData {
    pub index: usize,
    pub lowest: Vec<Q>,
    pub lowest_weight: Vec<i64>,
    /// Simple roots of the next Levi subalgebra.
    pub levi: Vec<usize>,
    /// Positive-root indices spanning the nilradical m, in height order.
    pub nilradical: Vec<usize>,
    /// Dual forms ω_0, …, ω_k.
    pub forms: Vec<Poly>,
}

pub struct RepConstruction {
    rep: RepInput,
    universe: Arc<DenominatorSet>,
    stages: Vec<StageData>,
    final_forms: Vec<Poly>,
    /// Number of leading `final_forms` that are stage lowest forms.
    lowest_count: usize,
    cartan_t_inv: QMatrix,
}

impl RepConstruction {
    pub fn new(rep: &RepInput) -> Result<Self> {
        let rs = rep.basis.root_system();
        let r = rs.rank();
        let ct = QMatrix::from_rows(
            (0..r)
                .map(|i| (0..r).map(|j| q(rs.pairing(&rs.simple_root(j), &rs.simple_root(i)))).collect())
                .collect(),
        );
        let cartan_t_inv = ct.inverse().expect("Cartan matrix invertible");
        let dim = rep.dim();
        let mut c = RepConstruction {
            rep: rep.clone(),
            universe: DenominatorSet::new(rep.coords.clone()),
            stages: Vec::new(),
            final_forms: Vec::new(),
            lowest_count: 0,
            cartan_t_inv,
        };
        let mut space: Vec<WVec> = (0..dim)
            .map(|i| WVec {
                v: (0..dim).map(|k| q(i64::from(k == i))).collect(),
                wt: rep.weights[i].clone(),
            })
            .collect();
        let mut simple: Vec<usize> = (0..r).collect();
        let mut discarded: Vec<Vec<Q>> = Vec::new();
        let mut fixed: Vec<WVec> = Vec::new();
        loop {
            let mut irr = c.decompose(&space, &simple);
            let Some(pos) = irr.iter().position(|w| w.len() > 1) else {
                break;
            };
            let w0 = irr.remove(pos);
            let v0 = w0[0].clone();
            let g: Vec<usize> = (0..rs.num_positive())
                .filter(|&a| rs.positive_roots()[a].iter().enumerate().all(|(i, &x)| x == 0 || simple.contains(&i)))
                .collect();
            let m: Vec<usize> = g
                .iter()
                .copied()
                .filter(|&a| !rep.rho[rep.basis.e(a)].mul_vec(&v0.v).iter().all(Q::is_zero))
                .collect();
            let levi: Vec<usize> = simple
                .iter()
                .copied()
                .filter(|&i| {
                    let a = rs.positive_index(&rs.simple_root(i)).expect("simple");
                    !m.contains(&a)
                })
                .collect();
            if m.is_empty() {
                // p⁻ = g: the summand carries no stage
                return Err(Error::Internal("irreducible summand of dim > 1 with trivial nilradical".into()));
            }
            let mv: Vec<WVec> = m
                .iter()
                .map(|&a| WVec {
                    v: rep.rho[rep.basis.e(a)].mul_vec(&v0.v),
                    wt: add_wt(&v0.wt, &root_labels(rs, &rs.positive_roots()[a])),
                })
                .collect();
            let mut s_rows: Vec<Vec<Q>> = vec![v0.v.clone()];
            s_rows.extend(mv.iter().map(|w| w.v.clone()));
            if rank_of_rows(&s_rows) != s_rows.len() {
                return Err(Error::Internal("m·v0 vectors are dependent".into()));
            }
            let mut s_space = vec![v0.clone()];
            s_space.extend(mv.iter().cloned());
            let complement = c.complement(&w0, &s_space, &levi);
            let rest: Vec<WVec> = irr.into_iter().flatten().collect();
            // full basis of V: discarded, then v0, m v0, complement, rest
            let mut full: Vec<Vec<Q>> = discarded.clone();
            let off = full.len();
            full.push(v0.v.clone());
            full.extend(mv.iter().map(|w| w.v.clone()));
            full.extend(complement.iter().map(|w| w.v.clone()));
            full.extend(rest.iter().map(|w| w.v.clone()));
            let forms = dual_forms(&full)?;
            c.stages.push(StageData {
                index: c.stages.len(),
                lowest: v0.v.clone(),
                lowest_weight: v0.wt.clone(),
                levi: levi.clone(),
                nilradical: m.clone(),
                forms: forms[off..=off + m.len()].to_vec(),
            });
            discarded.extend(mv.into_iter().map(|w| w.v));
            fixed.push(v0);
            space = complement.into_iter().chain(rest).collect();
            simple = levi;
        }
        // final V_s basis: the lowest lines first, then the rest
        let mut full: Vec<Vec<Q>> = discarded.clone();
        let off = full.len();
        full.extend(fixed.iter().map(|w| w.v.clone()));
        let rest: Vec<WVec> = space
            .into_iter()
            .filter(|w| !fixed.iter().any(|f| f.v == w.v))
            .collect();
        full.extend(rest.iter().map(|w| w.v.clone()));
        let forms = dual_forms(&full)?;
        c.final_forms = forms[off..].to_vec();
        c.lowest_count = fixed.len();
        Ok(c)
    }

    /// Irreducible summands for the Levi with simple roots `simple`; each
    /// summand lists its lowest vector first. Sorted by lowest weight.
    fn decompose(&self, space: &[WVec], simple: &[usize]) -> Vec<Vec<WVec>> {
        let mut by_wt: BTreeMap<Vec<i64>, Vec<Vec<Q>>> = BTreeMap::new();
        for w in space {
            by_wt.entry(w.wt.clone()).or_default().push(w.v.clone());
        }
        let mut lowest: Vec<WVec> = Vec::new();
        for (wt, vecs) in &by_wt {
            for u in self.lowest_in(vecs, simple) {
                lowest.push(WVec { v: u, wt: wt.clone() });
            }
        }
        lowest.sort_by_key(|a| weight_key(&self.cartan_t_inv, &a.wt));
        lowest.into_iter().map(|u| self.generate(u, simple)).collect()
    }

    /// Vectors in the span of `vecs` killed by every simple F of the Levi.
    fn lowest_in(&self, vecs: &[Vec<Q>], simple: &[usize]) -> Vec<Vec<Q>> {
        let rs = self.rep.basis.root_system();
        let dim = self.rep.dim();
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for &i in simple {
            let a = rs.positive_index(&rs.simple_root(i)).expect("simple");
            let f = &self.rep.rho[self.rep.basis.f(a)];
            let imgs: Vec<Vec<Q>> = vecs.iter().map(|v| f.mul_vec(v)).collect();
            for r in 0..dim {
                rows.push(imgs.iter().map(|im| im[r].clone()).collect());
            }
        }
        let coeffs: Vec<Vec<Q>> = if rows.is_empty() {
            (0..vecs.len())
                .map(|j| (0..vecs.len()).map(|i| q(i64::from(i == j))).collect())
                .collect()
        } else {
            QMatrix::from_rows(rows).kernel()
        };
        coeffs
            .into_iter()
            .map(|c| {
                let mut u = vec![Q::zero(); dim];
                for (v, ci) in vecs.iter().zip(&c) {
                    if !ci.is_zero() {
                        for (x, y) in u.iter_mut().zip(v) {
                            *x += ci * y;
                        }
                    }
                }
                u
            })
            .collect()
    }

    /// Submodule generated by a lowest vector under the Levi's simple E's.
    fn generate(&self, u: WVec, simple: &[usize]) -> Vec<WVec> {
        let rs = self.rep.basis.root_system();
        let mut out = vec![u];
        let mut i = 0;
        while i < out.len() {
            for &s in simple {
                let a = rs.positive_index(&rs.simple_root(s)).expect("simple");
                let y = self.rep.rho[self.rep.basis.e(a)].mul_vec(&out[i].v);
                if y.iter().all(Q::is_zero) {
                    continue;
                }
                let wt = add_wt(&out[i].wt, &root_labels(rs, &rs.simple_root(s)));
                let mut same: Vec<Vec<Q>> = out.iter().filter(|w| w.wt == wt).map(|w| w.v.clone()).collect();
                let before = same.len();
                same.push(y.clone());
                if rank_of_rows(&same) > before {
                    out.push(WVec { v: y, wt });
                }
            }
            i += 1;
        }
        out
    }

    /// Levi-invariant complement of `sub` inside the module `w0`.
    fn complement(&self, w0: &[WVec], sub: &[WVec], levi: &[usize]) -> Vec<WVec> {
        let mut by_wt: BTreeMap<Vec<i64>, (Vec<Vec<Q>>, Vec<Vec<Q>>)> = BTreeMap::new();
        for w in w0 {
            by_wt.entry(w.wt.clone()).or_default().0.push(w.v.clone());
        }
        for w in sub {
            by_wt.entry(w.wt.clone()).or_default().1.push(w.v.clone());
        }
        let mut seeds = Vec::new();
        for (wt, (all, part)) in &by_wt {
            let low_all = self.lowest_in(all, levi);
            let low_part = if part.is_empty() { Vec::new() } else { self.lowest_in(part, levi) };
            for k in extend_basis(&low_part, &low_all) {
                seeds.push(WVec {
                    v: low_all[k].clone(),
                    wt: wt.clone(),
                });
            }
        }
        seeds.sort_by_key(|a| weight_key(&self.cartan_t_inv, &a.wt));
        seeds.into_iter().flat_map(|s| self.generate(s, levi)).collect()
    }

    pub fn stages(&self) -> &[StageData] {
        &self.stages
    }

    pub fn rep(&self) -> &RepInput {
        &self.rep
    }

    pub fn universe(&self) -> &Arc<DenominatorSet> {
        &self.universe
    }

    /// Dual forms of the final diagonal space; the first `lowest_count` are the
    /// stage lowest forms.
    pub fn final_forms(&self) -> (&[Poly], usize) {
        (&self.final_forms, self.lowest_count)
    }

    /// Stages in application order: stage blocks in sequence, each block
    /// applying α_k first down to α_1.
    pub fn projector(&self) -> Result<Projector> {
        let mut sofar = Projector::identity(&self.universe);
        let mut stages: Vec<Stage> = Vec::new();
        for st in &self.stages {
            let w0 = sofar.apply(&LocElem::from_poly(&self.universe, st.forms[0].clone()))?;
            let mut block = Vec::new();
            for j in (1..st.forms.len()).rev() {
                let d = Arc::new(self.rep.derivation(self.rep.basis.e(st.nilradical[j - 1])));
                let wj = sofar.apply(&LocElem::from_poly(&self.universe, st.forms[j].clone()))?;
                let sp = SlicePair::from_witness(&d, wj.neg(), w0.clone())?;
                block.push(Stage { derivation: d, pair: sp });
            }
            stages.extend(block);
            let mut set = self.universe.clone();
            for s in &stages {
                set = DenominatorSet::join(&set, s.pair.q.set())?;
            }
            sofar = Projector::compose(&set, stages.clone())?;
        }
        Ok(sofar)
    }
}

fn root_labels(rs: &RootSystem, root: &[i64]) -> Vec<i64> {
    (0..rs.rank()).map(|i| rs.pairing(root, &rs.simple_root(i))).collect()
}

fn add_wt(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Rows of the inverse of the matrix whose columns are `basis`, as linear forms.
fn dual_forms(basis: &[Vec<Q>]) -> Result<Vec<Poly>> {
    let m = QMatrix::from_rows(basis.to_vec()).transpose();
    let inv = m
        .inverse()
        .ok_or_else(|| Error::Internal("stage basis does not span V".into()))?;
    Ok((0..inv.rows()).map(|i| Poly::linear(inv.row(i))).collect())
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

pub fn rep_projector(rep: &RepInput, opts: &Options) -> Result<(Projector, GeneratorSet)> {
    let c = RepConstruction::new(rep)?;
    let p = c.projector()?.with_iteration_cap(opts.iter_cap);
    let set = c.universe().clone();
    let (forms, nlow) = c.final_forms();
    let mut generators = Vec::new();
    let mut candidates = Vec::new();
    for (i, f) in forms.iter().enumerate() {
        let b = LocElem::from_poly(&set, f.clone());
        let name = if i < nlow {
            format!("lambda{i}")
        } else {
            format!("P(f{})", i - nlow + 1)
        };
        generators.push(NamedElem {
            name,
            elem: p.apply(&b)?,
        });
        candidates.push(b);
    }
    let mut report = Report::new();
    if opts.check {
        let simple = rep.simple_derivations();
        let fam: Vec<&Derivation> = simple.iter().collect();
        for g in &generators {
            report.extend(verify_invariance(&g.name, &g.elem, &fam));
        }
        report.extend(cross_section_check(&p, &p.witnesses(), &candidates, opts.trials, opts.seed)?);
        let expected = generic_quotient_dimension(rep, opts.trials, opts.seed);
        if expected == generators.len() {
            report.push(Check::pass("generator count").with_note(format!("{expected} = dim V - generic orbit dim")));
        } else {
            report.push(Check::fail(
                "generator count",
                format!("{} generators, dim V - generic orbit dim = {expected}", generators.len()),
            ));
        }
    }
    let gs = GeneratorSet {
        kind: "rep".into(),
        source: serde_json::to_value(rep.to_file()).expect("serializable"),
        generators,
        projector: p.clone(),
        cascade: None,
        report,
    };
    Ok((p, gs))
}

/// dim V minus the largest orbit dimension seen at sampled points.
pub fn generic_quotient_dimension(rep: &RepInput, trials: usize, seed: u64) -> usize {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x006f_7262_6974);
    let mut best = 0;
    for _ in 0..trials.max(3) {
        let v: Vec<Q> = (0..rep.dim()).map(|_| q(rng.gen_range(-9..=9))).collect();
        best = best.max(rep.orbit_dimension_at(&v));
    }
    rep.dim() - best
}
