use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// Variable names plus an append-only list of declared invertible polynomials.
#[derive(Debug, PartialEq, Eq)]
pub struct DenominatorSet {
    vars: Arc<[String]>,
    gens: Vec<Arc<Poly>>,
}

impl DenominatorSet {
    pub fn new(vars: Vec<String>) -> Arc<Self> {
        Arc::new(DenominatorSet {
            vars: vars.into(),
            gens: Vec::new(),
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn gens(&self) -> &[Arc<Poly>] {
        &self.gens
    }

    pub fn gen(&self, i: usize) -> &Poly {
        &self.gens[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Declares `g` invertible; returns the extended set and the index of `g`.
    /// Constant multiples of an existing generator are not added twice.
    pub fn extend(self: &Arc<Self>, g: &Poly) -> Result<(Arc<Self>, usize)> {
        if g.is_constant() {
            return Err(Error::NotInvertible(format!("constant {g:?} is not a generator")));
        }
        let monic = g.monic();
        if let Some(i) = self.gens.iter().position(|h| **h == monic) {
            return Ok((self.clone(), i));
        }
        let mut gens = self.gens.clone();
        gens.push(Arc::new(monic));
        let idx = gens.len() - 1;
        Ok((
            Arc::new(DenominatorSet {
                vars: self.vars.clone(),
                gens,
            }),
            idx,
        ))
    }

    fn is_prefix_of(&self, other: &DenominatorSet) -> bool {
        (Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars)
            && self.gens.len() <= other.gens.len()
            && self
                .gens
                .iter()
                .zip(&other.gens)
                .all(|(a, b)| Arc::ptr_eq(a, b) || a == b)
    }

    /// The larger of two compatible sets.
    pub fn join(a: &Arc<Self>, b: &Arc<Self>) -> Result<Arc<Self>> {
        if Arc::ptr_eq(a, b) || b.is_prefix_of(a) {
            Ok(a.clone())
        } else if a.is_prefix_of(b) {
            Ok(b.clone())
        } else {
            Err(Error::Universe(format!(
                "denominator sets with {} and {} generators are not nested",
                a.gens.len(),
                b.gens.len()
            )))
        }
    }
}

/// `num / Π gens[i]^den[i]`.
#[derive(Clone, Debug)]
pub struct LocElem {
    num: Poly,
    den: Vec<u32>,
    set: Arc<DenominatorSet>,
}

impl LocElem {
    pub fn from_poly(set: &Arc<DenominatorSet>, num: Poly) -> Self {
        assert_eq!(num.nvars(), set.nvars());
        LocElem {
            num,
            den: Vec::new(),
            set: set.clone(),
        }
    }

    pub fn new(set: &Arc<DenominatorSet>, num: Poly, den: Vec<u32>) -> Result<Self> {
        if den.len() > set.gens.len() {
            return Err(Error::Universe(format!(
                "denominator refers to generator {} of {}",
                den.len() - 1,
                set.gens.len()
            )));
        }
        let mut e = LocElem {
            num,
            den,
            set: set.clone(),
        };
        e.trim();
        Ok(e)
    }

    pub fn zero(set: &Arc<DenominatorSet>) -> Self {
        Self::from_poly(set, Poly::zero(set.nvars()))
    }

    pub fn one(set: &Arc<DenominatorSet>) -> Self {
        Self::constant(set, Q::one())
    }

    pub fn constant(set: &Arc<DenominatorSet>, c: Q) -> Self {
        Self::from_poly(set, Poly::constant(set.nvars(), c))
    }

    pub fn var(set: &Arc<DenominatorSet>, i: usize) -> Self {
        Self::from_poly(set, Poly::var(set.nvars(), i))
    }

    /// `1 / gens[i]`.
    pub fn gen_inverse(set: &Arc<DenominatorSet>, i: usize) -> Self {
        let mut den = vec![0; i + 1];
        den[i] = 1;
        LocElem {
            num: Poly::one(set.nvars()),
            den,
            set: set.clone(),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &[u32] {
        &self.den
    }

    pub fn set(&self) -> &Arc<DenominatorSet> {
        &self.set
    }

    pub fn nvars(&self) -> usize {
        self.set.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else if self.num.is_zero() {
            Some(Q::zero())
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.num.total_degree()
    }

    fn trim(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
        }
        while self.den.last() == Some(&0) {
            self.den.pop();
        }
    }

    /// Re-homes the element onto a compatible (larger) set.
    pub fn in_set(&self, set: &Arc<DenominatorSet>) -> Result<LocElem> {
        let joined = DenominatorSet::join(&self.set, set)?;
        if !Arc::ptr_eq(&joined, set) && joined.gens.len() != set.gens.len() {
            return Err(Error::Universe("target set is smaller than the element's set".into()));
        }
        Ok(LocElem {
            num: self.num.clone(),
            den: self.den.clone(),
            set: set.clone(),
        })
    }

    fn gen_power(&self, set: &DenominatorSet, exps: &[u32]) -> Poly {
        let mut p = Poly::one(set.nvars());
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                p = p.mul(&set.gens[i].pow(e));
            }
        }
        p
    }

    pub fn try_add(&self, other: &LocElem) -> Result<LocElem> {
        let set = DenominatorSet::join(&self.set, &other.set)?;
        if self.is_zero() {
            return Ok(other.with_set(&set));
        }
        if other.is_zero() {
            return Ok(self.with_set(&set));
        }
        let len = self.den.len().max(other.den.len());
        let get = |d: &[u32], i: usize| d.get(i).copied().unwrap_or(0);
        let common: Vec<u32> = (0..len).map(|i| get(&self.den, i).max(get(&other.den, i))).collect();
        let fa: Vec<u32> = (0..len).map(|i| common[i] - get(&self.den, i)).collect();
        let fb: Vec<u32> = (0..len).map(|i| common[i] - get(&other.den, i)).collect();
        let na = self.num.mul(&self.gen_power(&set, &fa));
        let nb = other.num.mul(&self.gen_power(&set, &fb));
        let mut out = LocElem {
            num: na.add(&nb),
            den: common,
            set,
        };
        out.trim();
        Ok(out)
    }

    fn with_set(&self, set: &Arc<DenominatorSet>) -> LocElem {
        LocElem {
            num: self.num.clone(),
            den: self.den.clone(),
            set: set.clone(),
        }
    }

    pub fn try_mul(&self, other: &LocElem) -> Result<LocElem> {
        let set = DenominatorSet::join(&self.set, &other.set)?;
        let len = self.den.len().max(other.den.len());
        let get = |d: &[u32], i: usize| d.get(i).copied().unwrap_or(0);
        let mut out = LocElem {
            num: self.num.mul(&other.num),
            den: (0..len).map(|i| get(&self.den, i) + get(&other.den, i)).collect(),
            set,
        };
        out.trim();
        Ok(out)
    }

    pub fn try_sub(&self, other: &LocElem) -> Result<LocElem> {
        self.try_add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> LocElem {
        let mut out = LocElem {
            num: self.num.scale(c),
            den: self.den.clone(),
            set: self.set.clone(),
        };
        out.trim();
        out
    }

    pub fn neg(&self) -> LocElem {
        self.scale(&-Q::one())
    }

    pub fn pow(&self, k: u32) -> LocElem {
        LocElem {
            num: self.num.pow(k),
            den: self.den.iter().map(|e| e * k).collect(),
            set: self.set.clone(),
        }
    }

    /// Cancels denominator generators that divide the numerator.
    pub fn reduced(&self) -> LocElem {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for (i, e) in den.iter_mut().enumerate() {
            while *e > 0 {
                match num.div_exact(&self.set.gens[i]) {
                    Some(qt) => {
                        num = qt;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        let mut out = LocElem {
            num,
            den,
            set: self.set.clone(),
        };
        out.trim();
        out
    }

    /// Strips every declared generator from the numerator: `self = rest * Π g^f / den`.
    fn split_numerator(&self) -> (Poly, Vec<u32>) {
        let mut rest = self.num.clone();
        let mut f = vec![0u32; self.set.gens.len()];
        for (i, g) in self.set.gens.iter().enumerate() {
            while let Some(qt) = rest.div_exact(g) {
                if qt.is_zero() {
                    break;
                }
                rest = qt;
                f[i] += 1;
            }
        }
        (rest, f)
    }

    fn inverse_from_split(&self, set: &Arc<DenominatorSet>, c: Q, extra: Option<usize>, f: &[u32]) -> LocElem {
        // (rest * Π g^f / den)^-1 = den / (c * [h] * Π g^f)
        let mut num = self.gen_power(set, &self.den).scale(&c.recip());
        num = Poly::from_terms(set.nvars(), num.terms().iter().cloned());
        let mut den: Vec<u32> = f.to_vec();
        if let Some(i) = extra {
            if den.len() <= i {
                den.resize(i + 1, 0);
            }
            den[i] += 1;
        }
        let mut out = LocElem {
            num,
            den,
            set: set.clone(),
        };
        out.trim();
        out.reduced()
    }

    /// Inverse within the current set; fails unless the numerator is a unit.
    pub fn try_inverse(&self) -> Result<LocElem> {
        if self.is_zero() {
            return Err(Error::NotInvertible("0".into()));
        }
        let (rest, f) = self.split_numerator();
        match rest.as_constant() {
            Some(c) => Ok(self.inverse_from_split(&self.set, c, None, &f)),
            None => Err(Error::NotInvertible(self.to_string())),
        }
    }

    /// Inverse, declaring the non-unit part of the numerator as a new generator.
    pub fn inverse_declaring(&self) -> Result<LocElem> {
        if self.is_zero() {
            return Err(Error::NotInvertible("0".into()));
        }
        let (rest, f) = self.split_numerator();
        if let Some(c) = rest.as_constant() {
            return Ok(self.inverse_from_split(&self.set, c, None, &f));
        }
        let (set, idx) = self.set.extend(&rest)?;
        let c = rest.leading().expect("nonzero").1.clone();
        Ok(self.inverse_from_split(&set, c, Some(idx), &f))
    }

    /// Applies the derivation with variable images `images`; `gen_images`
    /// optionally supplies precomputed images of the denominator generators.
    pub fn derive(&self, images: &[Poly], gen_images: Option<&[Poly]>) -> LocElem {
        let top = LocElem {
            num: self.num.derive(images),
            den: self.den.clone(),
            set: self.set.clone(),
        };
        let mut out = top;
        for (i, &e) in self.den.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let dg = match gen_images.and_then(|g| g.get(i)) {
                Some(p) => p.clone(),
                None => self.set.gens[i].derive(images),
            };
            if dg.is_zero() {
                continue;
            }
            let mut den = self.den.clone();
            den[i] += 1;
            let term = LocElem {
                num: self.num.mul(&dg).scale(&q(-(e as i64))),
                den,
                set: self.set.clone(),
            };
            out = out.try_add(&term).expect("same set");
        }
        out.trim();
        out
    }

    pub fn partial(&self, var: usize) -> LocElem {
        let n = self.nvars();
        let images: Vec<Poly> = (0..n)
            .map(|j| if j == var { Poly::one(n) } else { Poly::zero(n) })
            .collect();
        self.derive(&images, None)
    }

    pub fn evaluate(&self, point: &[Q]) -> Result<Q> {
        if point.len() != self.nvars() {
            return Err(Error::Universe(format!(
                "point has {} coordinates, universe has {} variables",
                point.len(),
                self.nvars()
            )));
        }
        let mut den = Q::one();
        for (i, &e) in self.den.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let v = self.set.gens[i].evaluate(point);
            if v.is_zero() {
                return Err(Error::SingularPoint { gen: i });
            }
            den *= num_traits::pow(v, e as usize);
        }
        Ok(self.num.evaluate(point) / den)
    }

    /// Exact gradient at a point where the denominator does not vanish.
    pub fn gradient_at(&self, point: &[Q]) -> Result<Vec<Q>> {
        let n = self.nvars();
        let value = self.evaluate(point)?;
        let mut den = Q::one();
        let mut log_grad = vec![Q::zero(); n];
        for (i, &e) in self.den.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let g = &self.set.gens[i];
            let gv = g.evaluate(point);
            den *= num_traits::pow(gv.clone(), e as usize);
            for (j, lg) in log_grad.iter_mut().enumerate() {
                let d = g.partial(j).evaluate(point);
                if !d.is_zero() {
                    *lg += Q::from_integer((e as i64).into()) * d / &gv;
                }
            }
        }
        Ok((0..n)
            .map(|j| self.num.partial(j).evaluate(point) / &den - &value * &log_grad[j])
            .collect())
    }

    pub fn to_text(&self) -> String {
        let names = self.set.vars();
        let e = self.reduced();
        let num = e.num.to_text(names);
        if e.den.is_empty() {
            return num;
        }
        let mut factors = Vec::new();
        for (i, &p) in e.den.iter().enumerate() {
            if p == 0 {
                continue;
            }
            let g = &self.set.gens[i];
            let base = match g.as_variable() {
                Some(v) => names[v].clone(),
                None => format!("({})", g.to_text(names)),
            };
            factors.push(if p == 1 { base } else { format!("{base}^{p}") });
        }
        let num_part = if e.num.len() == 1 && !num.contains(' ') {
            num
        } else {
            format!("({num})")
        };
        if factors.len() == 1 {
            format!("{num_part}/{}", factors[0])
        } else {
            format!("{num_part}/({})", factors.join("*"))
        }
    }
}

impl fmt::Display for LocElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl PartialEq for LocElem {
    fn eq(&self, other: &Self) -> bool {
        match self.try_sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&LocElem> for &LocElem {
            type Output = LocElem;
            fn $m(self, rhs: &LocElem) -> LocElem {
                self.$f(rhs).expect("mismatched universes")
            }
        }
        impl std::ops::$tr<LocElem> for LocElem {
            type Output = LocElem;
            fn $m(self, rhs: LocElem) -> LocElem {
                self.$f(&rhs).expect("mismatched universes")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &LocElem {
    type Output = LocElem;
    fn neg(self) -> LocElem {
        LocElem::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn setup() -> (Arc<DenominatorSet>, LocElem, LocElem) {
        let set = DenominatorSet::new(vec!["x".into(), "y".into()]);
        let x = LocElem::var(&set, 0);
        let y = LocElem::var(&set, 1);
        (set, x, y)
    }

    #[test]
    fn additive_identity_and_products() {
        let (set, x, y) = setup();
        assert_eq!(&x + &LocElem::zero(&set), x);
        let (set, d) = set.extend(&(x.numerator().add(y.numerator()))).unwrap();
        let dinv = LocElem::gen_inverse(&set, d);
        let p = &(&x * &dinv) * &(&y * &dinv);
        assert_eq!(p.denominator(), &[2]);
        assert_eq!(p.numerator(), (&x * &y).numerator());
    }

    #[test]
    fn cancellation_against_generator() {
        let (set, x, y) = setup();
        let diff = x.numerator().sub(y.numerator());
        let (set, i) = set.extend(&diff).unwrap();
        let num = x.numerator().pow(2).sub(&y.numerator().pow(2));
        let e = LocElem::new(&set, num, vec![0; i].into_iter().chain([1]).collect()).unwrap();
        let r = e.reduced();
        assert!(r.is_polynomial());
        assert_eq!(r.numerator(), &x.numerator().add(y.numerator()));
    }

    #[test]
    fn inverse_and_evaluate() {
        let (set, x, y) = setup();
        let xy2 = (&x * &y).scale(&q(2));
        let inv = xy2.inverse_declaring().unwrap();
        let prod = (&inv * &xy2).reduced();
        assert_eq!(prod.as_constant(), Some(q(1)));
        assert_eq!(inv.evaluate(&[q(1), q(4)]).unwrap(), qf(1, 8));
        assert!(matches!(inv.evaluate(&[q(0), q(4)]), Err(Error::SingularPoint { .. })));
        assert!(x.try_inverse().is_err());
        assert_eq!(LocElem::constant(&set, q(5)).evaluate(&[q(7), q(9)]).unwrap(), q(5));
    }

    #[test]
    fn quotient_rule_matches_gradient() {
        let (set, x, y) = setup();
        let (set, i) = set.extend(&x.numerator().add(&Poly::one(2))).unwrap();
        let e = &(&(&x * &x) * &y) * &LocElem::gen_inverse(&set, i).pow(2);
        let pt = [qf(1, 2), q(3)];
        let grad = e.gradient_at(&pt).unwrap();
        for j in 0..2 {
            assert_eq!(e.partial(j).evaluate(&pt).unwrap(), grad[j]);
        }
    }

    #[test]
    fn unrelated_sets_rejected() {
        let (set, x, _) = setup();
        let (a, _) = set.extend(&x.numerator().add(&Poly::one(2))).unwrap();
        let (b, _) = set.extend(&x.numerator().sub(&Poly::one(2))).unwrap();
        let ea = LocElem::gen_inverse(&a, 0);
        let eb = LocElem::gen_inverse(&b, 0);
        assert!(matches!(ea.try_add(&eb), Err(Error::Universe(_))));
    }
}
