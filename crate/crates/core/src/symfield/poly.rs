use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::{self, Q};

/// Exponent vector, ordered graded reverse-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u16]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e.into_boxed_slice())
    }

    pub fn from_exponents(e: Vec<u16>) -> Self {
        Monomial(e.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(other.0.iter()).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with exact rational coefficients; terms sorted with the
/// leading (grevlex-largest) monomial first and no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: Vec<(Monomial, Q)>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Poly {
            nvars,
            terms: vec![(Monomial::one(nvars), c)],
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Poly {
            nvars,
            terms: vec![(Monomial::var(nvars, i), Q::one())],
        }
    }

    /// Linear form Σ c_i x_i.
    pub fn linear(coeffs: &[Q]) -> Self {
        let n = coeffs.len();
        Self::from_terms(
            n,
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (Monomial::var(n, i), c.clone())),
        )
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.0.len(), nvars);
            *acc.entry(m).or_insert_with(Q::zero) += c;
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, acc: HashMap<Monomial, Q>) -> Self {
        let mut terms: Vec<(Monomial, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.as_slice() {
            [] => Some(Q::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// The variable index when the polynomial is exactly `x_i`.
    pub fn as_variable(&self) -> Option<usize> {
        match self.terms.as_slice() {
            [(m, c)] if c.is_one() && m.degree() == 1 => m.0.iter().position(|&e| e == 1),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&(Monomial, Q)> {
        self.terms.first()
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Scaled so the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Q::one())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable universes differ");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { nvars: self.nvars, terms: out }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable universes differ");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.nvars);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        // multiply over the integers and divide once per term; rational
        // products would take a gcd for every pair
        let (ia, la) = self.integer_terms();
        let (ib, lb) = other.integer_terms();
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &ia {
            for (mb, cb) in &ib {
                *acc.entry(ma.mul(mb)).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        let den = la * lb;
        let mut terms: Vec<(Monomial, Q)> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, Q::new(c, den.clone())))
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly { nvars: self.nvars, terms }
    }

    /// Terms scaled by the lcm of the denominators, with that lcm.
    fn integer_terms(&self) -> (Vec<(&Monomial, BigInt)>, BigInt) {
        let l = self.terms.iter().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
        let terms = self.terms.iter().map(|(m, c)| (m, c.numer() * (&l / c.denom()))).collect();
        (terms, l)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }


    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero(self.nvars));
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if d.total_degree() > self.total_degree() {
            return None;
        }
        let (ld, lc) = d.leading().cloned().expect("nonzero");
        let lc_inv = lc.recip();
        // remainder keyed by monomial so each step only touches |d| entries
        let mut rem: BTreeMap<Monomial, Q> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Monomial, Q)> = Vec::new();
        while let Some((lr, cr)) = rem.pop_last() {
            if !ld.divides(&lr) {
                return None;
            }
            let m = lr.div(&ld);
            let c = &cr * &lc_inv;
            for (md, cd) in &d.terms[1..] {
                let v = &c * cd;
                match rem.entry(md.mul(&m)) {
                    Entry::Occupied(mut o) => {
                        *o.get_mut() -= v;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                    Entry::Vacant(e) => {
                        e.insert(-v);
                    }
                }
            }
            quot.push((m, c));
        }
        Some(Poly::from_terms(self.nvars, quot))
    }

    pub fn partial(&self, i: usize) -> Poly {
        let terms = self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
            let mut e = m.0.to_vec();
            let k = e[i];
            e[i] -= 1;
            (Monomial::from_exponents(e), c * Q::from_integer(k.into()))
        });
        Poly::from_terms(self.nvars, terms)
    }

    /// Applies the derivation sending `x_j` to `images[j]`.
    pub fn derive(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        for (m, c) in &self.terms {
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 || images[j].is_zero() {
                    continue;
                }
                let mut ex = m.0.to_vec();
                ex[j] -= 1;
                let base = Monomial::from_exponents(ex);
                let f = c * Q::from_integer(e.into());
                for (mi, ci) in &images[j].terms {
                    *acc.entry(base.mul(mi)).or_insert_with(Q::zero) += &f * ci;
                }
            }
        }
        Self::from_map(self.nvars, acc)
    }

    pub fn evaluate(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars);
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Substitutes `values[j]` for `x_j`.
    pub fn substitute(&self, values: &[Poly]) -> Poly {
        assert_eq!(values.len(), self.nvars);
        let nv = values.first().map_or(self.nvars, |v| v.nvars);
        let mut out = Poly::zero(nv);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(nv, c.clone());
            for (j, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&values[j].pow(e as u32));
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn to_text(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = rational::is_negative(c);
            let abs = if negative { -c.clone() } else { c.clone() };
            if k == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(rational::to_string(&abs));
            }
            for (j, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[j].clone()),
                    _ => factors.push(format!("{}^{}", names[j], e)),
                }
            }
            let _ = write!(s, "{}", factors.join("*"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn grevlex_order() {
        // x0 > x1 > x2; x1^2 > x0*x2 in grevlex
        let a = Monomial::from_exponents(vec![0, 2, 0]);
        let b = Monomial::from_exponents(vec![1, 0, 1]);
        assert!(a > b);
        assert!(Monomial::var(3, 0) > Monomial::var(3, 1));
        assert!(Monomial::from_exponents(vec![0, 0, 2]) > Monomial::var(3, 0));
    }

    #[test]
    fn exact_division() {
        let (a, b) = (x(2, 0), x(2, 1));
        let num = a.mul(&a).sub(&b.mul(&b));
        let d = a.sub(&b);
        assert_eq!(num.div_exact(&d), Some(a.add(&b)));
        assert_eq!(num.add(&Poly::one(2)).div_exact(&d), None);
        assert_eq!(num.div_exact(&Poly::constant(2, q(2))), Some(num.scale(&qf(1, 2))));
    }

    #[test]
    fn derivation_and_partials() {
        // D(x0) = x1, D(x1) = 0: D(x0^2 x1) = 2 x0 x1^2
        let images = vec![x(2, 1), Poly::zero(2)];
        let p = x(2, 0).pow(2).mul(&x(2, 1));
        assert_eq!(p.derive(&images), x(2, 0).mul(&x(2, 1).pow(2)).scale(&q(2)));
        assert_eq!(p.partial(0), x(2, 0).mul(&x(2, 1)).scale(&q(2)));
        assert_eq!(p.evaluate(&[q(3), q(-2)]), q(-18));
    }

    #[test]
    fn text_form() {
        let names: Vec<String> = ["E1", "H1", "F1"].iter().map(|s| s.to_string()).collect();
        let p = x(3, 1).pow(2).scale(&qf(1, 4)).add(&x(3, 0).mul(&x(3, 2))).sub(&Poly::constant(3, q(3)));
        assert_eq!(p.to_text(&names), "1/4*H1^2 + E1*F1 - 3");
        assert_eq!(Poly::zero(3).to_text(&names), "0");
        assert_eq!(x(3, 0).neg().to_text(&names), "-E1");
    }

    #[test]
    fn substitution() {
        let p = x(2, 0).mul(&x(2, 1));
        let s = p.substitute(&[x(2, 1), x(2, 1).add(&Poly::one(2))]);
        assert_eq!(s, x(2, 1).pow(2).add(&x(2, 1)));
    }
}
