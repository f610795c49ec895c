use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Probability that `n^2` i.i.d. continuous heights are increasing along rows
/// and columns: `prod_{j=0}^{n-1} j! / (n+j)!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationConstant {
    n: usize,
    value: BigRational,
}

impl NormalizationConstant {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    /// Nearest double, computed from the logarithm so it does not overflow the
    /// intermediate big integers.
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or_else(|| self.ln().exp())
    }

    pub fn ln(&self) -> f64 {
        ln_normalization(self.n)
    }
}

impl fmt::Display for NormalizationConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for NormalizationConstant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("NormalizationConstant", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("exact", &self.value.to_string())?;
        st.serialize_field("value", &self.to_f64())?;
        st.end()
    }
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn normalization_constant(n: usize) -> Result<NormalizationConstant> {
    if n == 0 {
        return Err(Error::invalid("normalization constant needs n >= 1"));
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..n {
        num *= factorial(j);
        den *= factorial(n + j);
    }
    Ok(NormalizationConstant {
        n,
        value: BigRational::new(num, den),
    })
}

/// `1 / prod(hook lengths)` of the `n x n` square diagram.
pub fn hook_length_constant(n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::invalid("hook-length product needs n >= 1"));
    }
    let mut prod = BigInt::one();
    for i in 0..n {
        for j in 0..n {
            prod *= BigInt::from((n - i) + (n - j) - 1);
        }
    }
    Ok(BigRational::new(BigInt::one(), prod))
}

/// `ln C(n)` in double precision.
pub(crate) fn ln_normalization(n: usize) -> f64 {
    use statrs::function::gamma::ln_gamma;
    (0..n)
        .map(|j| ln_gamma(j as f64 + 1.0) - ln_gamma((n + j) as f64 + 1.0))
        .sum()
}
