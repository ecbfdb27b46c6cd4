use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Complex, Integer, Rational};

use crate::error::{Error, Result};

/// Exponent vector of a monomial, one entry per variable.
pub type Exponent = Vec<u32>;

/// Homogeneous polynomial with exact rational coefficients in `x_0, ..., x_M`.
///
/// Terms are kept in lexicographic exponent order; zero coefficients are never stored.
/// The zero polynomial still carries a degree tag, which arithmetic ignores.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousPolynomial {
    num_vars: usize,
    degree: u32,
    terms: BTreeMap<Exponent, Rational>,
}

impl HomogeneousPolynomial {
    pub fn zero(num_vars: usize, degree: u32) -> Self {
        Self { num_vars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, c: impl Into<Rational>) -> Self {
        let mut p = Self::zero(num_vars, 0);
        let c = c.into();
        if c != 0 {
            p.terms.insert(vec![0; num_vars], c);
        }
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Self::monomial(e, Rational::from(1))
    }

    pub fn monomial(exp: Exponent, c: Rational) -> Self {
        let num_vars = exp.len();
        let degree = exp.iter().sum();
        let mut p = Self::zero(num_vars, degree);
        if c != 0 {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Builds a polynomial from terms, merging repeated exponents.
    pub fn from_terms<I>(num_vars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        if num_vars < 2 {
            return Err(Error::InvalidPolynomial("need at least two variables".into()));
        }
        let mut p = Self::zero(num_vars, degree);
        for (exp, c) in terms {
            if exp.len() != num_vars {
                return Err(Error::InvalidPolynomial(format!(
                    "exponent {exp:?} has {} entries, expected {num_vars}",
                    exp.len()
                )));
            }
            let d: u32 = exp.iter().sum();
            if d != degree {
                return Err(Error::InvalidPolynomial(format!(
                    "monomial {exp:?} has degree {d}, expected {degree}"
                )));
            }
            p.add_term(exp, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exp: Exponent, c: Rational) {
        if c == 0 {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(v) => {
                *v += c;
                if *v == 0 {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Projective dimension `M` of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.num_vars - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Leading monomial for the lexicographic order with `x_M > ... > x_0`.
    pub fn leading_term(&self) -> Option<(&Exponent, &Rational)> {
        self.terms.iter().max_by(|a, b| a.0.iter().rev().cmp(b.0.iter().rev()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if *c == 0 {
            return Self::zero(self.num_vars, self.degree);
        }
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), Rational::from(v * c))).collect();
        Self { num_vars: self.num_vars, degree: self.degree, terms }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.num_vars, 1);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `x_var`.
    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero(self.num_vars, self.degree.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[var] -= 1;
            out.add_term(f, Rational::from(c * e[var]));
        }
        out
    }

    pub fn eval_rational(&self, x: &[Rational]) -> Rational {
        let mut s = Rational::new();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= Rational::from(rug::ops::Pow::pow(xi, k));
                }
            }
            s += t;
        }
        s
    }

    pub fn eval_complex(&self, x: &[Complex]) -> Complex {
        let prec = x.first().map(|z| z.prec().0).unwrap_or(crate::num::DEFAULT_PRECISION);
        let powers: Vec<Vec<Complex>> = x
            .iter()
            .enumerate()
            .map(|(i, xi)| {
                let maxk = self.degree_in(i) as usize;
                let mut v = Vec::with_capacity(maxk + 1);
                v.push(Complex::with_val(prec, 1));
                for k in 1..=maxk {
                    let next = Complex::with_val(prec, &v[k - 1] * xi);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut s = Complex::new(prec);
        for (e, c) in &self.terms {
            let mut t = Complex::with_val(prec, (c, 0));
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= &powers[i][k as usize];
                }
            }
            s += t;
        }
        s
    }

    /// Substitutes `x_i = sum_j matrix[i][j] * y_j`, producing a polynomial in `matrix[0].len()` variables.
    pub fn substitute_linear(&self, matrix: &[Vec<Rational>]) -> Self {
        let new_vars = matrix.first().map(|r| r.len()).unwrap_or(0);
        let forms: Vec<Self> = matrix
            .iter()
            .map(|row| {
                let mut f = Self::zero(new_vars, 1);
                for (j, c) in row.iter().enumerate() {
                    let mut e = vec![0; new_vars];
                    e[j] = 1;
                    f.add_term(e, c.clone());
                }
                f
            })
            .collect();
        let powers: Vec<Vec<Self>> = forms
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let mut v = vec![Self::constant(new_vars, 1)];
                for k in 1..=self.degree_in(i) as usize {
                    let next = &v[k - 1] * f;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(new_vars, self.degree);
        for (e, c) in &self.terms {
            let mut t = Self::constant(new_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            out = &out + &t;
        }
        out.degree = self.degree;
        out
    }

    /// Renames variable `i` to `var_map[i]` inside a ring with `new_num_vars` variables.
    pub fn embed(&self, new_num_vars: usize, var_map: &[usize]) -> Self {
        let mut out = Self::zero(new_num_vars, self.degree);
        for (e, c) in &self.terms {
            let mut f = vec![0; new_num_vars];
            for (i, &k) in e.iter().enumerate() {
                f[var_map[i]] += k;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Coefficients of `x_var^j`, as polynomials of degree `D - j` not involving `x_var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let top = self.degree_in(var);
        let mut out: Vec<Self> =
            (0..=top).map(|j| Self::zero(self.num_vars, self.degree - j)).collect();
        for (e, c) in &self.terms {
            let j = e[var];
            let mut f = e.clone();
            f[var] = 0;
            out[j as usize].add_term(f, c.clone());
        }
        out
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients.
    pub fn content(&self) -> Rational {
        let mut num = Integer::new();
        let mut den = Integer::from(1);
        for c in self.terms.values() {
            num.gcd_mut(c.numer());
            den.lcm_mut(c.denom());
        }
        if num == 0 {
            return Rational::from(1);
        }
        Rational::from((num, den))
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading_term().map(|(_, v)| *v < 0).unwrap_or(false) {
            c = -c;
        }
        self.scale(&Rational::from(c.recip_ref()))
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| *c.denom() == 1)
    }

    /// Largest absolute value of a coefficient.
    pub fn max_abs_coeff(&self) -> Rational {
        self.terms.values().map(|c| Rational::from(c.abs_ref())).max().unwrap_or_default()
    }

    /// Parses expressions such as `"x0^2 - 3/2*x1*x2 + x2^2"`.
    pub fn parse(num_vars: usize, text: &str) -> Result<Self> {
        let mut terms: Vec<(Exponent, Rational)> = Vec::new();
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut pieces = Vec::new();
        let mut current = String::new();
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !current.ends_with('^') {
                pieces.push(std::mem::take(&mut current));
            }
            current.push(ch);
        }
        pieces.push(current);
        for piece in pieces {
            let (sign, body) = match piece.strip_prefix('-') {
                Some(b) => (-1, b.to_string()),
                None => (1, piece.strip_prefix('+').unwrap_or(&piece).to_string()),
            };
            let mut coeff = Rational::from(sign);
            let mut exp = vec![0u32; num_vars];
            for factor in body.split('*') {
                if let Some(rest) = factor.strip_prefix('x') {
                    let (idx, power) = match rest.split_once('^') {
                        Some((a, b)) => (a, b.parse::<u32>().map_err(|_| Error::Parse(format!("bad power in {factor:?}")))?),
                        None => (rest, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| Error::Parse(format!("bad variable in {factor:?}")))?;
                    if idx >= num_vars {
                        return Err(Error::Parse(format!("variable x{idx} out of range")));
                    }
                    exp[idx] += power;
                } else {
                    let (v, _) = crate::num::parse_rational(factor)?;
                    coeff *= v;
                }
            }
            terms.push((exp, coeff));
        }
        let degree = terms.first().map(|(e, _)| e.iter().sum()).unwrap_or(0);
        Self::from_terms(num_vars, degree, terms)
    }
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = *c < 0;
            let a = Rational::from(c.abs_ref());
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("x{i}") } else { format!("x{i}^{p}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a == 1 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a HomogeneousPolynomial> for &'a HomogeneousPolynomial {
    type Output = HomogeneousPolynomial;
    fn add(self, rhs: &HomogeneousPolynomial) -> HomogeneousPolynomial {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        debug_assert_eq!(self.degree, rhs.degree, "adding polynomials of different degree");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a HomogeneousPolynomial> for &'a HomogeneousPolynomial {
    type Output = HomogeneousPolynomial;
    fn sub(self, rhs: &HomogeneousPolynomial) -> HomogeneousPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &HomogeneousPolynomial {
    type Output = HomogeneousPolynomial;
    fn neg(self) -> HomogeneousPolynomial {
        self.scale(&Rational::from(-1))
    }
}

impl<'a> Mul<&'a HomogeneousPolynomial> for &'a HomogeneousPolynomial {
    type Output = HomogeneousPolynomial;
    fn mul(self, rhs: &HomogeneousPolynomial) -> HomogeneousPolynomial {
        let mut out = HomogeneousPolynomial::zero(self.num_vars, self.degree + rhs.degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, Rational::from(c1 * c2));
            }
        }
        out
    }
}

/// Product of two homogeneous polynomials.
pub fn poly_mul(f: &HomogeneousPolynomial, g: &HomogeneousPolynomial) -> Result<HomogeneousPolynomial> {
    if f.num_vars != g.num_vars {
        return Err(Error::DimensionMismatch { expected: f.num_vars, got: g.num_vars });
    }
    Ok(f * g)
}
