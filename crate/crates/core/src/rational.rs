//! Arbitrary-precision rationals and their string form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `"-3/4"`, `"5"`; denominators of one are omitted.
pub fn to_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse {
        pos: 0,
        msg: format!("bad rational {s:?}"),
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn factorial(k: usize) -> Q {
    let mut f = BigInt::one();
    for i in 2..=k {
        f *= BigInt::from(i);
    }
    Q::from_integer(f)
}

pub fn is_negative(x: &Q) -> bool {
    x.is_negative()
}
