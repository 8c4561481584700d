//! Chevalley basis of the split semisimple Lie algebra attached to a root
//! system, with an optional abelian center.
//!
//! Basis order: `E_β` for the positive roots, `H_1..H_r` (simple coroots),
//! `F_β = E_{-β}` for the positive roots, then central `Z_1..Z_c`.
//! Structure constants are fixed by taking `N = +(p+1)` on every
//! extraspecial pair and propagating through the usual quadruple and
//! triple relations.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{q, qf, Q};
use crate::rootsystem::{self, Root, RootSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKind {
    /// Root vector; index into the signed root list (`< N` positive, `>= N` negative).
    Root(usize),
    Cartan(usize),
    Center(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement {
    dim: usize,
    coeffs: BTreeMap<usize, Q>,
}

impl LieElement {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut e = Self::zero(dim);
        e.coeffs.insert(i, Q::one());
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn add_term(&mut self, i: usize, c: &Q) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(i).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (i, c) in other.iter() {
            out.add_term(i, c);
        }
        out
    }

    pub fn scale(&self, c: &Q) -> LieElement {
        let mut out = LieElement::zero(self.dim);
        for (i, v) in self.iter() {
            out.add_term(i, &(v * c));
        }
        out
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        self.add(&other.scale(&-Q::one()))
    }
}

#[derive(Clone, Debug)]
pub struct ChevalleyBasis {
    rs: RootSystem,
    center: usize,
    /// N_{x,y} over signed root indices, for every pair with x + y a root.
    constants: HashMap<(usize, usize), i64>,
    /// Coroot of each positive root in the simple-coroot basis.
    coroots: Vec<Vec<Q>>,
    signed_index: HashMap<Root, usize>,
}

impl ChevalleyBasis {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        Self::with_center(rs, 0)
    }

    pub fn with_center(rs: &RootSystem, center: usize) -> Result<Self> {
        let n = rs.num_positive();
        let roots = rs.roots();
        let signed_index: HashMap<Root, usize> =
            roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let coroots = rs
            .positive_roots()
            .iter()
            .map(|a| {
                let aa = rs.inner(a, a);
                (0..rs.rank())
                    .map(|i| qf(a[i] * rs.gram()[i][i], aa))
                    .collect()
            })
            .collect();
        let mut basis = ChevalleyBasis {
            rs: rs.clone(),
            center,
            constants: HashMap::new(),
            coroots,
            signed_index,
        };
        let special = basis.special_constants()?;
        let mut constants = HashMap::new();
        for x in 0..2 * n {
            for y in 0..2 * n {
                let s = rootsystem::add(&roots[x], &roots[y]);
                if basis.signed_index.contains_key(&s) {
                    constants.insert((x, y), basis.reduce_constant(&special, x, y));
                }
            }
        }
        basis.constants = constants;
        basis.check_consistency()?;
        Ok(basis)
    }

    fn signed_root(&self, x: usize) -> Root {
        let n = self.rs.num_positive();
        if x < n {
            self.rs.positive_roots()[x].clone()
        } else {
            rootsystem::neg(&self.rs.positive_roots()[x - n])
        }
    }

    fn sq(&self, r: &[i64]) -> i64 {
        self.rs.inner(r, r)
    }

    /// N on special pairs (α ≺ β positive, α + β a root), keyed by positive indices.
    fn special_constants(&self) -> Result<HashMap<(usize, usize), i64>> {
        let rs = &self.rs;
        let pos = rs.positive_roots();
        let mut table: HashMap<(usize, usize), i64> = HashMap::new();
        for (xi_idx, xi) in pos.iter().enumerate() {
            let pairs: Vec<(usize, usize)> = (0..pos.len())
                .filter_map(|a| {
                    let b = rs.positive_index(&rootsystem::sub(xi, &pos[a]))?;
                    (a < b).then_some((a, b))
                })
                .collect();
            let Some(&(ea, eb)) = pairs.first() else { continue };
            let p = rs.string_down(&pos[ea], &pos[eb]);
            table.insert((ea, eb), p + 1);
            let n_extra = p + 1;
            for &(a, b) in &pairs[1..] {
                let (ra, rb, rea) = (&pos[a], &pos[b], &pos[ea]);
                let n = pos.len();
                let neg = |i: usize| i + n;
                // quadruple (a, b, -a', -b')
                let mut t = Q::zero();
                let d1 = rootsystem::sub(rb, rea);
                if rs.is_root(&d1) {
                    let v = self.lookup(&table, b, neg(ea)) * self.lookup(&table, a, neg(eb));
                    t -= qf(v, self.sq(&d1));
                }
                let d2 = rootsystem::sub(ra, rea);
                if rs.is_root(&d2) {
                    let v = self.lookup(&table, neg(ea), a) * self.lookup(&table, b, neg(eb));
                    t -= qf(v, self.sq(&d2));
                }
                let val = t * q(self.sq(xi)) / q(-n_extra);
                if !val.is_integer() {
                    return Err(Error::Internal(format!("non-integral structure constant at root {xi_idx}")));
                }
                let v: i64 = val.to_integer().try_into().map_err(|_| Error::Internal("overflow".into()))?;
                table.insert((a, b), v);
            }
        }
        Ok(table)
    }

    fn lookup(&self, table: &HashMap<(usize, usize), i64>, x: usize, y: usize) -> i64 {
        self.reduce_constant(table, x, y)
    }

    /// N_{x,y} for signed indices with x + y a root, from the special-pair table.
    fn reduce_constant(&self, table: &HashMap<(usize, usize), i64>, x: usize, y: usize) -> i64 {
        let n = self.rs.num_positive();
        let (xp, yp) = (x < n, y < n);
        if xp && yp {
            return if x < y { table[&(x, y)] } else { -table[&(y, x)] };
        }
        if !xp && !yp {
            return -self.reduce_constant(table, x - n, y - n);
        }
        let rx = self.signed_root(x);
        let ry = self.signed_root(y);
        let rz = rootsystem::neg(&rootsystem::add(&rx, &ry));
        let z = self.signed_index[&rz];
        let zp = z < n;
        // N_{x,y}/|z|² = N_{y,z}/|x|² = N_{z,x}/|y|²
        let (num, den) = if yp == zp {
            (self.sq(&rz) * self.reduce_constant(table, y, z), self.sq(&rx))
        } else {
            (self.sq(&rz) * self.reduce_constant(table, z, x), self.sq(&ry))
        };
        debug_assert_eq!(num % den, 0);
        num / den
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn center_dim(&self) -> usize {
        self.center
    }

    pub fn dim(&self) -> usize {
        2 * self.rs.num_positive() + self.rs.rank() + self.center
    }

    pub fn kind(&self, i: usize) -> BasisKind {
        let n = self.rs.num_positive();
        let r = self.rs.rank();
        if i < n {
            BasisKind::Root(i)
        } else if i < n + r {
            BasisKind::Cartan(i - n)
        } else if i < 2 * n + r {
            BasisKind::Root(i - r)
        } else {
            BasisKind::Center(i - 2 * n - r)
        }
    }

    /// Basis index of the root vector for a signed root index.
    pub fn root_vector_index(&self, signed: usize) -> usize {
        let n = self.rs.num_positive();
        if signed < n {
            signed
        } else {
            signed + self.rs.rank()
        }
    }

    pub fn e(&self, positive: usize) -> usize {
        positive
    }

    pub fn f(&self, positive: usize) -> usize {
        self.rs.num_positive() + self.rs.rank() + positive
    }

    pub fn h(&self, i: usize) -> usize {
        self.rs.num_positive() + i
    }

    pub fn z(&self, i: usize) -> usize {
        2 * self.rs.num_positive() + self.rs.rank() + i
    }

    pub fn root_vector(&self, root: &[i64]) -> Result<usize> {
        self.signed_index
            .get(root)
            .map(|&s| self.root_vector_index(s))
            .ok_or_else(|| Error::NotARoot(root.to_vec()))
    }

    pub fn symbol(&self, i: usize) -> String {
        let digits = |r: &[i64]| r.iter().map(|c| c.abs().to_string()).collect::<String>();
        match self.kind(i) {
            BasisKind::Root(s) => {
                let r = self.signed_root(s);
                let sign = if s < self.rs.num_positive() { "E" } else { "F" };
                format!("{sign}{}", digits(&r))
            }
            BasisKind::Cartan(j) => format!("H{}", j + 1),
            BasisKind::Center(j) => format!("Z{}", j + 1),
        }
    }

    pub fn symbols(&self) -> Vec<String> {
        (0..self.dim()).map(|i| self.symbol(i)).collect()
    }

    pub fn element(&self, i: usize) -> LieElement {
        LieElement::basis(self.dim(), i)
    }

    pub fn structure_constant(&self, a: &[i64], b: &[i64]) -> Option<i64> {
        let x = *self.signed_index.get(a)?;
        let y = *self.signed_index.get(b)?;
        self.constants.get(&(x, y)).copied()
    }

    /// Weight α(H) of root vector `signed` against simple coroot `j`.
    fn root_on_coroot(&self, signed: usize, j: usize) -> i64 {
        self.rs.pairing(&self.signed_root(signed), &self.rs.simple_root(j))
    }

    /// Coroot H_α with α(H_α) = 2, in the simple-coroot basis.
    pub fn coroot(&self, root: &[i64]) -> Result<LieElement> {
        let s = *self
            .signed_index
            .get(root)
            .ok_or_else(|| Error::NotARoot(root.to_vec()))?;
        Ok(self.coroot_signed(s))
    }

    fn coroot_signed(&self, s: usize) -> LieElement {
        let n = self.rs.num_positive();
        let (p, sign) = if s < n { (s, Q::one()) } else { (s - n, -Q::one()) };
        let mut out = LieElement::zero(self.dim());
        for (j, c) in self.coroots[p].iter().enumerate() {
            out.add_term(self.h(j), &(c * &sign));
        }
        out
    }

    /// Evaluates a root on a Cartan element.
    pub fn root_on(&self, root: &[i64], h: &LieElement) -> Q {
        let mut v = Q::zero();
        for (i, c) in h.iter() {
            if let BasisKind::Cartan(j) = self.kind(i) {
                v += c * q(self.rs.pairing(root, &self.rs.simple_root(j)));
            }
        }
        v
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> LieElement {
        let dim = self.dim();
        let mut out = LieElement::zero(dim);
        match (self.kind(i), self.kind(j)) {
            (BasisKind::Center(_), _) | (_, BasisKind::Center(_)) => {}
            (BasisKind::Cartan(_), BasisKind::Cartan(_)) => {}
            (BasisKind::Cartan(a), BasisKind::Root(s)) => {
                out.add_term(j, &q(self.root_on_coroot(s, a)));
            }
            (BasisKind::Root(s), BasisKind::Cartan(a)) => {
                out.add_term(i, &q(-self.root_on_coroot(s, a)));
            }
            (BasisKind::Root(x), BasisKind::Root(y)) => {
                let sum = rootsystem::add(&self.signed_root(x), &self.signed_root(y));
                if sum.iter().all(|&c| c == 0) {
                    return self.coroot_signed(x);
                }
                if let Some(&nc) = self.constants.get(&(x, y)) {
                    let z = self.signed_index[&sum];
                    out.add_term(self.root_vector_index(z), &q(nc));
                }
            }
        }
        out
    }

    pub fn bracket(&self, a: &LieElement, b: &LieElement) -> Result<LieElement> {
        if a.dim() != self.dim() || b.dim() != self.dim() {
            return Err(Error::BasisMismatch(format!(
                "elements of dimension {} and {} against a basis of dimension {}",
                a.dim(),
                b.dim(),
                self.dim()
            )));
        }
        let mut out = LieElement::zero(self.dim());
        for (i, ca) in a.iter() {
            for (j, cb) in b.iter() {
                let c = ca * cb;
                for (k, v) in self.bracket_basis(i, j).iter() {
                    out.add_term(k, &(v * &c));
                }
            }
        }
        Ok(out)
    }

    fn check_consistency(&self) -> Result<()> {
        let n = self.rs.num_positive();
        for (&(x, y), &v) in &self.constants {
            if self.constants.get(&(y, x)) != Some(&-v) {
                return Err(Error::Internal(format!("antisymmetry fails at ({x},{y})")));
            }
            let p = self.rs.string_down(&self.signed_root(x), &self.signed_root(y));
            if v.abs() != p + 1 {
                return Err(Error::Internal(format!("|N| = {} but p + 1 = {} at ({x},{y})", v.abs(), p + 1)));
            }
        }
        let dim = 2 * n + self.rs.rank();
        let triples: Vec<(usize, usize, usize)> = if self.rs.rank() <= 4 {
            (0..dim)
                .flat_map(|i| (i..dim).flat_map(move |j| (j..dim).map(move |k| (i, j, k))))
                .collect()
        } else {
            // deterministic sample
            let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % dim as u64) as usize
            };
            (0..20_000).map(|_| (next(), next(), next())).collect()
        };
        for (i, j, k) in triples {
            let jac = self.jacobiator(i, j, k);
            if !jac.is_zero() {
                return Err(Error::Internal(format!(
                    "Jacobi identity fails on ({}, {}, {})",
                    self.symbol(i),
                    self.symbol(j),
                    self.symbol(k)
                )));
            }
        }
        Ok(())
    }

    fn jacobiator(&self, i: usize, j: usize, k: usize) -> LieElement {
        let e = |t| self.element(t);
        let br = |a: &LieElement, b: &LieElement| self.bracket(a, b).expect("same basis");
        let t1 = br(&e(i), &br(&e(j), &e(k)));
        let t2 = br(&e(j), &br(&e(k), &e(i)));
        let t3 = br(&e(k), &br(&e(i), &e(j)));
        t1.add(&t2).add(&t3)
    }

    /// Invariant symmetric form normalized by (E_α, E_{-α}) = 2/(α,α).
    pub fn invariant_form(&self, i: usize, j: usize) -> Q {
        let n = self.rs.num_positive();
        match (self.kind(i), self.kind(j)) {
            (BasisKind::Root(x), BasisKind::Root(y)) if (x < n) != (y < n) && x % n == y % n => {
                let r = self.signed_root(x);
                qf(2, self.sq(&r))
            }
            (BasisKind::Cartan(a), BasisKind::Cartan(b)) => {
                // (α_a^∨, α_b^∨) = 4(α_a, α_b)/((α_a,α_a)(α_b,α_b))
                let g = self.rs.gram();
                qf(4 * g[a][b], g[a][a] * g[b][b])
            }
            _ => Q::zero(),
        }
    }

    pub fn constants_json(&self) -> StructureConstantsJson {
        let mut entries: Vec<StructureConstantJson> = self
            .constants
            .iter()
            .map(|(&(x, y), &v)| StructureConstantJson {
                a: self.signed_root(x),
                b: self.signed_root(y),
                n: v,
            })
            .collect();
        entries.sort_by_key(|p| (p.a.clone(), p.b.clone()));
        StructureConstantsJson {
            series: self.rs.series().to_string(),
            rank: self.rs.rank(),
            symbols: self.symbols(),
            constants: entries,
        }
    }

    pub fn is_compatible(&self, other: &ChevalleyBasis) -> bool {
        self.rs == other.rs && self.center == other.center
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct StructureConstantJson {
    pub a: Root,
    pub b: Root,
    pub n: i64,
}

#[derive(Serialize, Debug, Clone)]
pub struct StructureConstantsJson {
    pub series: String,
    pub rank: usize,
    pub symbols: Vec<String>,
    pub constants: Vec<StructureConstantJson>,
}
