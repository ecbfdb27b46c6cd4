use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::poly::HomogeneousPolynomial;
use crate::error::{Error, Result};

/// One monomial in the JSON interchange format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermFile {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

/// JSON interchange form of a homogeneous polynomial; terms are lexicographically sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialFile {
    pub vars: usize,
    pub degree: u32,
    pub terms: Vec<TermFile>,
}

impl From<&HomogeneousPolynomial> for PolynomialFile {
    fn from(f: &HomogeneousPolynomial) -> Self {
        Self {
            vars: f.num_vars(),
            degree: f.degree(),
            terms: f
                .terms()
                .map(|(e, c)| TermFile { exp: e.clone(), num: c.numer().to_string(), den: c.denom().to_string() })
                .collect(),
        }
    }
}

impl TryFrom<&PolynomialFile> for HomogeneousPolynomial {
    type Error = Error;

    fn try_from(file: &PolynomialFile) -> Result<Self> {
        let mut terms = Vec::with_capacity(file.terms.len());
        for t in &file.terms {
            let num: Integer = t.num.parse().map_err(|_| Error::Parse(format!("bad numerator {:?}", t.num)))?;
            let den: Integer = t.den.parse().map_err(|_| Error::Parse(format!("bad denominator {:?}", t.den)))?;
            if den == 0 {
                return Err(Error::InvalidPolynomial("zero denominator".into()));
            }
            terms.push((t.exp.clone(), Rational::from((num, den))));
        }
        HomogeneousPolynomial::from_terms(file.vars, file.degree, terms)
    }
}

impl HomogeneousPolynomial {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolynomialFile::from(self)).expect("polynomial serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PolynomialFile = serde_json::from_str(text)?;
        Self::try_from(&file)
    }
}
