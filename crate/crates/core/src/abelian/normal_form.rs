//! Smith and Hermite normal forms over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Result of [`smith_normal_form`]: `p * a * q == d`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: IntMatrix,
    pub p: IntMatrix,
    pub q: IntMatrix,
}

impl Smith {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Computes `D = P A Q` with `D` diagonal, `d_i | d_{i+1}`, all `d_i >= 0`,
/// and `P`, `Q` unimodular. Pivots are chosen by smallest absolute value.
pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut p = IntMatrix::identity(rows);
    let mut q = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_entry(&d, t) else {
                return Smith { d, p, q };
            };
            d.swap_rows(t, pi);
            p.swap_rows(t, pi);
            d.swap_cols(t, pj);
            q.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let f = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &f);
                p.add_row_multiple(i, t, &f);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let f = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &f);
                q.add_col_multiple(j, t, &f);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide the remaining block; otherwise fold an offending
            // row into row t and go again.
            let pivot = d[(t, t)].clone();
            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    p.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            p.negate_row(t);
        }
    }
    Smith { d, p, q }
}

fn smallest_entry(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let v = &m[(i, j)];
            if v.is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => v.abs() < m[b].abs(),
            };
            if better {
                best = Some((i, j));
                if v.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Row-style Hermite normal form of the row lattice: echelon form with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped, so two matrices span the same lattice iff their
/// forms are equal.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let rows = h.rows();
    let mut r = 0;
    for c in 0..h.cols() {
        if r == rows {
            break;
        }
        loop {
            let pivot = (r..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&x, &y| h[(x, c)].abs().cmp(&h[(y, c)].abs()));
            let Some(pi) = pivot else { break };
            h.swap_rows(r, pi);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let f = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &f);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
        }
        let pv = h[(r, c)].clone();
        for i in 0..r {
            let f = -h[(i, c)].div_floor(&pv);
            h.add_row_multiple(i, r, &f);
        }
        r += 1;
    }
    let kept: Vec<Vec<BigInt>> = (0..r).map(|i| h.row(i).to_vec()).collect();
    IntMatrix::from_rows(h.cols(), &kept)
}

/// Whether the rows of `a` and `b` generate the same subgroup of `Z^cols`.
pub fn row_spans_equal(a: &IntMatrix, b: &IntMatrix) -> bool {
    assert_eq!(a.cols(), b.cols(), "row_spans_equal needs equal column counts");
    hermite_normal_form(a) == hermite_normal_form(b)
}

/// Whether `v` is an integer combination of the rows of `a`.
///
/// Goes through the Smith form rather than the Hermite form: with
/// `P A Q = D`, `x A = v` is solvable iff `y D = v Q` is, coordinate-wise.
pub fn row_span_contains(a: &IntMatrix, v: &[BigInt]) -> bool {
    assert_eq!(a.cols(), v.len());
    let smith = smith_normal_form(a);
    let w = smith.q.left_mul_vec(v);
    let diag = smith.diagonal();
    w.iter().enumerate().all(|(j, wj)| match diag.get(j) {
        Some(dj) if !dj.is_zero() => wj.is_multiple_of(dj),
        _ => wj.is_zero(),
    })
}
