use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            (!d.is_zero()).then(|| Rational::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(Rational::from_integer),
    }
}

/// Exact vector of rationals; dimension 2, 3 or 5 depending on context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalVec(pub Vec<Rational>);

impl RationalVec {
    pub fn from_ints(v: &[i64]) -> Self {
        RationalVec(v.iter().map(|&x| int(x)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        RationalVec(vec![Rational::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &RationalVec) -> Rational {
        assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &RationalVec) -> RationalVec {
        RationalVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalVec) -> RationalVec {
        RationalVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Rational) -> RationalVec {
        RationalVec(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> RationalVec {
        RationalVec(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl Index<usize> for RationalVec {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Display for RationalVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for RationalVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(|x| x.to_string()))
    }
}

pub fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn det3(a: &RationalVec, b: &RationalVec, c: &RationalVec) -> Rational {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// Solves the square system `m x = rhs`; `None` when singular.
pub fn solve(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let inv = m[col][col].recip();
        for j in col..n {
            m[col][j] = &m[col][j] * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..n {
                    let v = &f * &m[col][j];
                    m[r][j] -= v;
                }
                let v = &f * &rhs[col];
                rhs[r] -= v;
            }
        }
    }
    Some(rhs)
}

/// Basis of `{x : m x = 0}` from the reduced row echelon form.
pub fn null_space(rows: &[RationalVec], cols: usize) -> Vec<RationalVec> {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.0.clone()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][free].clone();
            }
            RationalVec(v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-4"), Some(int(-4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn solve_and_kernel() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        assert_eq!(solve(m, vec![int(3), int(4)]), Some(vec![int(1), int(1)]));
        assert_eq!(solve(vec![vec![int(1), int(2)], vec![int(2), int(4)]], vec![int(0), int(0)]), None);
        let rows = [RationalVec::from_ints(&[1, 1, 0]), RationalVec::from_ints(&[0, 1, 1])];
        let k = null_space(&rows, 3);
        assert_eq!(k.len(), 1);
        assert!(rows.iter().all(|r| r.dot(&k[0]).is_zero()));
    }

    #[test]
    fn determinant() {
        let e = |i| {
            let mut v = RationalVec::zeros(3);
            v.0[i] = int(1);
            v
        };
        assert_eq!(det3(&e(0), &e(1), &e(2)), int(1));
        assert_eq!(det3(&e(1), &e(0), &e(2)), int(-1));
    }
}
