use rug::{Integer, Rational};

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    a.iter().zip(b).map(|(x, y)| Integer::from(x * y)).sum()
}

/// Exact LLL reduction (`delta = 3/4`) of the rows of an integer basis.
pub fn lll_reduce(mut basis: Vec<Vec<Integer>>) -> Vec<Vec<Integer>> {
    let n = basis.len();
    if n < 2 {
        return basis;
    }
    let delta = Rational::from((3, 4));
    let (mut mu, mut b_star) = gram_schmidt(&basis);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = mu[k][j].clone().round();
            if q != 0 {
                let qi = q.numer().clone();
                for c in 0..basis[k].len() {
                    let t = Integer::from(&qi * &basis[j][c]);
                    basis[k][c] -= t;
                }
                for l in 0..=j {
                    let t = if l == j { Rational::from(1) } else { mu[j][l].clone() };
                    mu[k][l] -= Rational::from(&q * &t);
                }
            }
        }
        let lhs = b_star[k].clone();
        let rhs = (delta.clone() - Rational::from(mu[k][k - 1].square_ref())) * &b_star[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let gs = gram_schmidt(&basis);
            mu = gs.0;
            b_star = gs.1;
            k = k.saturating_sub(1).max(1);
        }
    }
    basis
}

fn gram_schmidt(basis: &[Vec<Integer>]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = basis.len();
    let mut mu = vec![vec![Rational::new(); n]; n];
    let mut b_star = vec![Rational::new(); n];
    let mut star: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v: Vec<Rational> = basis[i].iter().map(|c| Rational::from(c.clone())).collect();
        for j in 0..i {
            if b_star[j] == 0 {
                continue;
            }
            let num: Rational = basis[i].iter().zip(&star[j]).map(|(a, b)| Rational::from(a * b)).sum();
            mu[i][j] = num / &b_star[j];
            for (vc, sc) in v.iter_mut().zip(&star[j]) {
                *vc -= Rational::from(&mu[i][j] * sc);
            }
        }
        b_star[i] = v.iter().map(|c| Rational::from(c.square_ref())).sum();
        star.push(v);
    }
    (mu, b_star)
}

/// Squared Euclidean norm.
pub fn norm_sq(v: &[Integer]) -> Integer {
    dot(v, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_classic_example() {
        let b = vec![
            vec![Integer::from(1), Integer::from(1), Integer::from(1)],
            vec![Integer::from(-1), Integer::from(0), Integer::from(2)],
            vec![Integer::from(3), Integer::from(5), Integer::from(6)],
        ];
        let r = lll_reduce(b);
        assert_eq!(r[0], vec![Integer::from(0), Integer::from(1), Integer::from(0)]);
        assert!(norm_sq(&r[1]) <= 2);
    }

    #[test]
    fn finds_integer_relation() {
        // 1 * 2 + 3 * 5 - 17 = 0 hidden behind a large scale
        let k = Integer::from(1_000_000_000_000i64);
        let b = vec![
            vec![Integer::from(1), Integer::from(0), Integer::from(0), Integer::from(2) * &k],
            vec![Integer::from(0), Integer::from(1), Integer::from(0), Integer::from(5) * &k],
            vec![Integer::from(0), Integer::from(0), Integer::from(1), Integer::from(-17) * &k],
        ];
        let r = lll_reduce(b);
        assert!(r.iter().any(|v| v[3] == 0 && norm_sq(&v[..3]) <= 14));
    }
}
