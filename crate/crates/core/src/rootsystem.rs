//! Root systems of the split simple Lie algebras, realized in simple-root
//! coordinates, together with the Kostant cascade and its Heisenberg
//! partitions.

use std::cmp::Reverse;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn from_char(c: char) -> Option<Series> {
        Some(match c.to_ascii_uppercase() {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return None,
        })
    }

    pub fn as_char(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A root written in the basis of simple roots.
pub type Root = Vec<i64>;

#[derive(Clone, Debug, PartialEq)]
pub struct RootSystem {
    series: Series,
    rank: usize,
    /// Gram matrix of the simple roots; short roots have squared length 2.
    gram: Vec<Vec<i64>>,
    /// Positive roots sorted by height, ties broken by descending coefficient vector.
    positive: Vec<Root>,
    index: HashMap<Root, usize>,
}

fn invalid(series: Series, rank: usize, reason: &str) -> Error {
    Error::InvalidDatum {
        series: series.as_char(),
        rank,
        reason: reason.to_string(),
    }
}

/// Gram matrix of the simple roots in Bourbaki numbering.
fn gram_matrix(series: Series, rank: usize) -> Result<Vec<Vec<i64>>> {
    let ok = match series {
        Series::A => rank >= 1,
        Series::B | Series::C => rank >= 2,
        Series::D => rank >= 4,
        Series::E => (6..=8).contains(&rank),
        Series::F => rank == 4,
        Series::G => rank == 2,
    };
    if !ok {
        return Err(invalid(series, rank, "no irreducible root system of this type and rank"));
    }
    let n = rank;
    let mut g = vec![vec![0i64; n]; n];
    let link = |g: &mut Vec<Vec<i64>>, a: usize, b: usize, v: i64| {
        g[a][b] = v;
        g[b][a] = v;
    };
    match series {
        Series::A => {
            for i in 0..n {
                g[i][i] = 2;
            }
            for i in 1..n {
                link(&mut g, i - 1, i, -1);
            }
        }
        Series::B => {
            for i in 0..n - 1 {
                g[i][i] = 4;
            }
            g[n - 1][n - 1] = 2;
            for i in 1..n {
                link(&mut g, i - 1, i, -2);
            }
        }
        Series::C => {
            for i in 0..n - 1 {
                g[i][i] = 2;
            }
            g[n - 1][n - 1] = 4;
            for i in 1..n - 1 {
                link(&mut g, i - 1, i, -1);
            }
            link(&mut g, n - 2, n - 1, -2);
        }
        Series::D => {
            for i in 0..n {
                g[i][i] = 2;
            }
            for i in 1..n - 1 {
                link(&mut g, i - 1, i, -1);
            }
            link(&mut g, n - 3, n - 1, -1);
        }
        Series::E => {
            for i in 0..n {
                g[i][i] = 2;
            }
            // 1-3-4-5-6-7-8 with 2 attached to 4 (Bourbaki).
            link(&mut g, 0, 2, -1);
            link(&mut g, 1, 3, -1);
            for i in 3..n {
                link(&mut g, i - 1, i, -1);
            }
        }
        Series::F => {
            g[0][0] = 4;
            g[1][1] = 4;
            g[2][2] = 2;
            g[3][3] = 2;
            link(&mut g, 0, 1, -2);
            link(&mut g, 1, 2, -2);
            link(&mut g, 2, 3, -1);
        }
        Series::G => {
            g[0][0] = 2;
            g[1][1] = 6;
            link(&mut g, 0, 1, -3);
        }
    }
    Ok(g)
}

/// Classical root count |Δ| for an irreducible datum.
pub fn classical_root_count(series: Series, rank: usize) -> usize {
    let n = rank;
    match series {
        Series::A => n * (n + 1),
        Series::B | Series::C => 2 * n * n,
        Series::D => 2 * n * (n - 1),
        Series::E => match n {
            6 => 72,
            7 => 126,
            _ => 240,
        },
        Series::F => 48,
        Series::G => 12,
    }
}

impl RootSystem {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let gram = gram_matrix(series, rank)?;
        let positive = generate_positive(&gram);
        let index = positive.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let rs = RootSystem {
            series,
            rank,
            gram,
            positive,
            index,
        };
        if 2 * rs.positive.len() != classical_root_count(series, rank) {
            return Err(Error::Internal(format!(
                "{series}{rank}: generated {} roots",
                2 * rs.positive.len()
            )));
        }
        Ok(rs)
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn simple_root(&self, i: usize) -> Root {
        let mut r = vec![0; self.rank];
        r[i] = 1;
        r
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        (0..self.rank).map(|i| self.simple_root(i)).collect()
    }

    /// All roots: positive ones in order, then their negatives in the same order.
    pub fn roots(&self) -> Vec<Root> {
        let mut all = self.positive.clone();
        all.extend(self.positive.iter().map(|r| neg(r)));
        all
    }

    pub fn positive_index(&self, r: &[i64]) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn is_root(&self, r: &[i64]) -> bool {
        r.len() == self.rank && (self.index.contains_key(r) || self.index.contains_key(&neg(r)))
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += a[i] * self.gram[i][j] * b[j];
            }
        }
        s
    }

    /// The Cartan integer <a, b^∨> = 2(a,b)/(b,b).
    pub fn pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        let bb = self.inner(b, b);
        let ab = 2 * self.inner(a, b);
        debug_assert_eq!(ab % bb, 0);
        ab / bb
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| 2 * self.gram[i][j] / self.gram[j][j]).collect())
            .collect()
    }

    pub fn reflect(&self, i: usize, v: &[i64]) -> Root {
        let c = self.pairing(v, &self.simple_root(i));
        let mut out = v.to_vec();
        out[i] -= c;
        out
    }

    pub fn highest_root(&self) -> Root {
        self.positive.last().cloned().expect("nonempty")
    }

    /// Largest p with `beta - p*alpha` a root.
    pub fn string_down(&self, alpha: &[i64], beta: &[i64]) -> i64 {
        let mut p = 0;
        let mut cur = sub(beta, alpha);
        while self.is_root(&cur) {
            p += 1;
            cur = sub(&cur, alpha);
        }
        p
    }

    /// Highest root of the sub-root-system generated by the simple roots in `support`.
    /// The highest root of an irreducible component is unique; this is asserted.
    pub fn highest_root_of(&self, support: &[usize]) -> Root {
        let inside: Vec<&Root> = self
            .positive
            .iter()
            .filter(|r| in_support(r, support))
            .collect();
        let maximal: Vec<&Root> = inside
            .iter()
            .filter(|r| {
                support.iter().all(|&j| {
                    let mut up = (**r).clone();
                    up[j] += 1;
                    !self.index.contains_key(&up)
                })
            })
            .copied()
            .collect();
        assert_eq!(maximal.len(), 1, "maximal root of component {support:?} is not unique");
        maximal[0].clone()
    }

    /// Splits a set of simple-root indices into connected Dynkin components,
    /// each sorted, ordered by lowest index.
    pub fn components(&self, support: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.rank];
        let mut comps = Vec::new();
        let mut sorted = support.to_vec();
        sorted.sort_unstable();
        for &s in &sorted {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                let a = comp[k];
                for &b in &sorted {
                    if !seen[b] && self.gram[a][b] != 0 {
                        seen[b] = true;
                        comp.push(b);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort();
        comps
    }

    pub fn kostant_cascade(&self) -> Cascade {
        let mut pending: Vec<Vec<usize>> = vec![(0..self.rank).collect()];
        let mut levels = Vec::new();
        while !pending.is_empty() {
            pending.sort();
            let comp = pending.remove(0);
            let xi = self.highest_root_of(&comp);
            let gamma: Vec<usize> = self
                .positive
                .iter()
                .enumerate()
                .filter(|(_, r)| in_support(r, &comp) && self.inner(r, &xi) > 0)
                .map(|(i, _)| i)
                .collect();
            let xi_index = self.index[&xi];
            let mut pairing = Vec::new();
            for &a in &gamma {
                if a == xi_index {
                    continue;
                }
                let partner = sub(&xi, &self.positive[a]);
                let b = self.index[&partner];
                pairing.push((a, b));
            }
            let orth: Vec<usize> = comp
                .iter()
                .copied()
                .filter(|&j| self.inner(&self.simple_root(j), &xi) == 0)
                .collect();
            pending.extend(self.components(&orth));
            levels.push(CascadeLevel {
                xi: xi_index,
                component: comp,
                gamma,
                pairing,
            });
        }
        Cascade { levels }
    }

    /// Γ_i and the involution α ↦ α′ on Γ_i⁰ for a cascade level (0-based).
    pub fn heisenberg_partition<'c>(&self, cascade: &'c Cascade, level: usize) -> Option<&'c CascadeLevel> {
        cascade.levels.get(level)
    }

    pub fn root_name(&self, r: &[i64]) -> String {
        let digits: Vec<String> = r.iter().map(|c| c.abs().to_string()).collect();
        digits.join("_")
    }
}

fn in_support(r: &[i64], support: &[usize]) -> bool {
    r.iter().enumerate().all(|(i, &c)| c == 0 || support.contains(&i))
}

pub fn neg(r: &[i64]) -> Root {
    r.iter().map(|c| -c).collect()
}

pub fn add(a: &[i64], b: &[i64]) -> Root {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Root {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn height(r: &[i64]) -> i64 {
    r.iter().sum()
}

/// Positive roots by height, extending along α_i-strings:
/// β + α_i is a root iff p − <β, α_i^∨> > 0.
fn generate_positive(gram: &[Vec<i64>]) -> Vec<Root> {
    let n = gram.len();
    let inner = |a: &[i64], b: &[i64]| -> i64 {
        let mut s = 0;
        for i in 0..n {
            for j in 0..n {
                s += a[i] * gram[i][j] * b[j];
            }
        }
        s
    };
    let simple: Vec<Root> = (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect();
    let mut all: Vec<Root> = simple.clone();
    let mut known: std::collections::HashSet<Root> = all.iter().cloned().collect();
    let mut layer = simple.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for (i, a) in simple.iter().enumerate() {
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let c = 2 * inner(beta, a) / gram[i][i];
                if p - c > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.sort_by_key(|r| (height(r), Reverse(r.clone())));
    all
}

/// One step of the cascade: the maximal root ξ_i of its component and
/// Γ_i = {α > 0 in the component : (α, ξ_i) > 0}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CascadeLevel {
    /// Index of ξ_i among the positive roots.
    pub xi: usize,
    /// Simple roots generating the irreducible component Δ_i.
    pub component: Vec<usize>,
    /// Positive-root indices of Γ_i (includes ξ_i).
    pub gamma: Vec<usize>,
    /// (α, α′) with α + α′ = ξ_i, for every α ∈ Γ_i⁰, in the order of `gamma`.
    pub pairing: Vec<(usize, usize)>,
}

impl CascadeLevel {
    pub fn gamma0(&self) -> impl Iterator<Item = usize> + '_ {
        self.gamma.iter().copied().filter(move |&a| a != self.xi)
    }

    pub fn partner(&self, alpha: usize) -> Option<usize> {
        self.pairing.iter().find(|(a, _)| *a == alpha).map(|(_, b)| *b)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cascade {
    pub levels: Vec<CascadeLevel>,
}

impl Cascade {
    pub fn entries(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.xi).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RootSystemJson {
    pub series: String,
    pub rank: usize,
    pub simple_roots: Vec<Root>,
    pub roots: Vec<Root>,
    pub form: Vec<Vec<RationalJson>>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct CascadeLevelJson {
    pub xi: Root,
    pub gamma: Vec<Root>,
    pub pairing: Vec<(Root, Root)>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct CascadeJson {
    pub series: String,
    pub rank: usize,
    pub entries: Vec<Root>,
    pub levels: Vec<CascadeLevelJson>,
}

impl RootSystem {
    pub fn to_json(&self) -> RootSystemJson {
        RootSystemJson {
            series: self.series.to_string(),
            rank: self.rank,
            simple_roots: self.simple_roots(),
            roots: self.roots(),
            form: self
                .gram
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| RationalJson {
                            num: v.to_string(),
                            den: "1".into(),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn cascade_json(&self, cascade: &Cascade) -> CascadeJson {
        let pos = |i: usize| self.positive[i].clone();
        CascadeJson {
            series: self.series.to_string(),
            rank: self.rank,
            entries: cascade.levels.iter().map(|l| pos(l.xi)).collect(),
            levels: cascade
                .levels
                .iter()
                .map(|l| CascadeLevelJson {
                    xi: pos(l.xi),
                    gamma: l.gamma.iter().map(|&g| pos(g)).collect(),
                    pairing: l.pairing.iter().map(|&(a, b)| (pos(a), pos(b))).collect(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Brute-force oracle: orbit of the simple roots under simple reflections.
    fn reflection_closure(rs: &RootSystem) -> HashSet<Root> {
        let mut set: HashSet<Root> = rs.simple_roots().into_iter().collect();
        let mut frontier: Vec<Root> = set.iter().cloned().collect();
        while let Some(r) = frontier.pop() {
            for i in 0..rs.rank() {
                let s = rs.reflect(i, &r);
                if set.insert(s.clone()) {
                    frontier.push(s);
                }
            }
        }
        set
    }

    fn all_systems() -> Vec<(Series, usize)> {
        let mut v = Vec::new();
        for n in 1..=6 {
            v.push((Series::A, n));
        }
        for n in 2..=6 {
            v.push((Series::B, n));
            v.push((Series::C, n));
        }
        for n in 4..=6 {
            v.push((Series::D, n));
        }
        v.extend([(Series::E, 6), (Series::E, 7), (Series::F, 4), (Series::G, 2)]);
        v
    }

    #[test]
    fn a1_and_a2_positive_roots() {
        let a1 = RootSystem::new(Series::A, 1).unwrap();
        assert_eq!(a1.positive_roots(), &[vec![1]]);
        let a2 = RootSystem::new(Series::A, 2).unwrap();
        let oracle: HashSet<Root> = reflection_closure(&a2).into_iter().filter(|r| r.iter().all(|&c| c >= 0)).collect();
        let got: HashSet<Root> = a2.positive_roots().iter().cloned().collect();
        assert_eq!(got, oracle);
        assert_eq!(a2.positive_roots(), &[vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn g2_highest_root() {
        let g2 = RootSystem::new(Series::G, 2).unwrap();
        assert_eq!(g2.num_positive(), 6);
        assert_eq!(g2.highest_root(), vec![3, 2]);
        let a1 = g2.simple_root(0);
        let a2 = g2.simple_root(1);
        assert!(g2.inner(&a1, &a1) < g2.inner(&a2, &a2));
    }

    #[test]
    fn invalid_data_rejected() {
        assert!(matches!(RootSystem::new(Series::G, 3), Err(Error::InvalidDatum { .. })));
        assert!(RootSystem::new(Series::E, 5).is_err());
        assert!(RootSystem::new(Series::D, 3).is_err());
        assert!(RootSystem::new(Series::A, 0).is_err());
    }

    #[test]
    fn invariants_all_types() {
        for (s, n) in all_systems() {
            let rs = RootSystem::new(s, n).unwrap();
            let closure = reflection_closure(&rs);
            let all: HashSet<Root> = rs.roots().into_iter().collect();
            assert_eq!(closure, all, "{s}{n}");
            assert_eq!(all.len(), classical_root_count(s, n));
            for r in rs.positive_roots() {
                assert!(r.iter().all(|&c| c >= 0));
                for i in 0..n {
                    assert!(all.contains(&rs.reflect(i, r)));
                }
            }
        }
    }

    #[test]
    fn cascade_examples() {
        let a1 = RootSystem::new(Series::A, 1).unwrap();
        let c = a1.kostant_cascade();
        assert_eq!(c.entries(), vec![0]);
        assert!(c.levels[0].pairing.is_empty());

        let a2 = RootSystem::new(Series::A, 2).unwrap();
        let c = a2.kostant_cascade();
        assert_eq!(c.levels.len(), 1);
        assert_eq!(a2.positive_roots()[c.levels[0].xi], vec![1, 1]);
        assert_eq!(c.levels[0].gamma.len(), 3);
        let p = a2.positive_index(&[1, 0]).unwrap();
        assert_eq!(a2.positive_roots()[c.levels[0].partner(p).unwrap()], vec![0, 1]);

        let a3 = RootSystem::new(Series::A, 3).unwrap();
        let c = a3.kostant_cascade();
        let e: Vec<Root> = c.entries().iter().map(|&i| a3.positive_roots()[i].clone()).collect();
        assert_eq!(e, vec![vec![1, 1, 1], vec![0, 1, 0]]);
        assert_eq!(c.levels[1].gamma.len(), 1);
        assert!(c.levels[1].pairing.is_empty());
        assert_eq!(c.levels[0].gamma.len(), 5);
    }

    #[test]
    fn cascade_partition_and_orthogonality() {
        for (s, n) in all_systems() {
            let rs = RootSystem::new(s, n).unwrap();
            let c = rs.kostant_cascade();
            let mut seen = HashSet::new();
            for lvl in &c.levels {
                let xi = &rs.positive_roots()[lvl.xi];
                for &g in &lvl.gamma {
                    assert!(seen.insert(g), "{s}{n}: Γ not disjoint");
                    assert!(rs.inner(&rs.positive_roots()[g], xi) > 0);
                }
                assert_eq!(lvl.pairing.len() + 1, lvl.gamma.len());
                for &(a, b) in &lvl.pairing {
                    assert_ne!(a, b);
                    assert_eq!(add(&rs.positive_roots()[a], &rs.positive_roots()[b]), *xi);
                    assert_eq!(lvl.partner(b), Some(a));
                }
            }
            assert_eq!(seen.len(), rs.num_positive(), "{s}{n}");
            let xs = c.entries();
            for i in 0..xs.len() {
                for j in 0..i {
                    assert_eq!(rs.inner(&rs.positive_roots()[xs[i]], &rs.positive_roots()[xs[j]]), 0);
                }
            }
        }
    }

    #[test]
    fn d4_cascade_processes_components_in_order() {
        let d4 = RootSystem::new(Series::D, 4).unwrap();
        let c = d4.kostant_cascade();
        let comps: Vec<Vec<usize>> = c.levels.iter().map(|l| l.component.clone()).collect();
        assert_eq!(comps, vec![vec![0, 1, 2, 3], vec![0], vec![2], vec![3]]);
    }
}
