//! Generator sets and their JSON form.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projector_core::Projector;
use crate::rational::{self, Q};
use crate::report::Report;
use crate::rootsystem::CascadeJson;
use crate::symfield::{DenominatorSet, LocElem, Monomial, Poly};

#[derive(Clone, Debug)]
pub struct NamedElem {
    pub name: String,
    pub elem: LocElem,
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub kind: String,
    pub source: serde_json::Value,
    pub generators: Vec<NamedElem>,
    pub projector: Projector,
    pub cascade: Option<CascadeJson>,
    pub report: Report,
}

impl GeneratorSet {
    pub fn universe(&self) -> Arc<DenominatorSet> {
        let mut set = self.projector.denominators().clone();
        for g in &self.generators {
            set = DenominatorSet::join(&set, g.elem.set()).expect("one universe");
        }
        set
    }

    pub fn elems(&self) -> Vec<LocElem> {
        self.generators.iter().map(|g| g.elem.clone()).collect()
    }

    pub fn to_json(&self) -> GeneratorSetJson {
        let set = self.universe();
        GeneratorSetJson {
            kind: self.kind.clone(),
            source: self.source.clone(),
            vars: set.vars().to_vec(),
            denominators: set.gens().iter().map(|g| g.to_text(set.vars())).collect(),
            generators: self
                .generators
                .iter()
                .map(|g| NamedElemJson {
                    name: g.name.clone(),
                    text: g.elem.to_text(),
                    value: LocElemJson::from_elem(&g.elem),
                })
                .collect(),
            cascade: self.cascade.clone(),
            stages: self
                .projector
                .stages()
                .iter()
                .map(|s| StageJson {
                    derivation: s.derivation.label().to_string(),
                    q: s.pair.q.to_text(),
                })
                .collect(),
            report: self.report.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u16>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenomFactorJson {
    pub gen_index: usize,
    pub power: u32,
}

/// `{vars, terms, denom}` with the generator polynomials listed alongside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocElemJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
    pub denom: Vec<DenomFactorJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gens: Vec<Vec<TermJson>>,
}

fn poly_terms(p: &Poly) -> Vec<TermJson> {
    p.terms()
        .iter()
        .map(|(m, c)| TermJson {
            exp: m.exponents().to_vec(),
            num: c.numer().to_string(),
            den: c.denom().to_string(),
        })
        .collect()
}

fn poly_from_terms(nvars: usize, terms: &[TermJson]) -> Result<Poly> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        if t.exp.len() != nvars {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("exponent vector of length {} for {nvars} variables", t.exp.len()),
            });
        }
        let c: Q = rational::parse(&format!("{}/{}", t.num, t.den))?;
        out.push((Monomial::from_exponents(t.exp.clone()), c));
    }
    Ok(Poly::from_terms(nvars, out))
}

impl LocElemJson {
    pub fn from_elem(e: &LocElem) -> Self {
        let r = e.reduced();
        let set = r.set();
        let used = r.denominator().len();
        LocElemJson {
            vars: set.vars().to_vec(),
            terms: poly_terms(r.numerator()),
            denom: r
                .denominator()
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| DenomFactorJson { gen_index: i, power: p })
                .collect(),
            gens: set.gens()[..used].iter().map(|g| poly_terms(g)).collect(),
        }
    }

    /// Rebuilds the element; generators are declared into `set` in order.
    pub fn to_elem(&self, set: &Arc<DenominatorSet>) -> Result<LocElem> {
        if set.vars() != self.vars.as_slice() {
            return Err(Error::Universe("variable names differ".into()));
        }
        let n = self.vars.len();
        let mut set = set.clone();
        let mut index = Vec::new();
        for g in &self.gens {
            let p = poly_from_terms(n, g)?;
            let (s, i) = set.extend(&p)?;
            set = s;
            index.push(i);
        }
        let num = poly_from_terms(n, &self.terms)?;
        let mut e = LocElem::from_poly(&set, num);
        for f in &self.denom {
            let &i = index.get(f.gen_index).ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!("denominator generator {} not listed", f.gen_index),
            })?;
            // declared generators are monic; rescale by the stored leading coefficient
            let stored = poly_from_terms(n, &self.gens[f.gen_index])?;
            let lc = stored.leading().map(|t| t.1.clone()).unwrap_or_else(|| rational::q(1));
            let inv = LocElem::gen_inverse(&set, i).scale(&lc.recip());
            e = e.try_mul(&inv.pow(f.power))?;
        }
        Ok(e)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedElemJson {
    pub name: String,
    pub text: String,
    pub value: LocElemJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageJson {
    pub derivation: String,
    pub q: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorSetJson {
    pub kind: String,
    pub source: serde_json::Value,
    pub vars: Vec<String>,
    pub denominators: Vec<String>,
    pub generators: Vec<NamedElemJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cascade: Option<CascadeJson>,
    pub stages: Vec<StageJson>,
    pub report: Report,
}
