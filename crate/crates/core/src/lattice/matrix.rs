//! Integer matrix normal forms.

pub type IMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn zeros(m: usize, n: usize) -> IMatrix {
    vec![vec![0; n]; m]
}

pub fn transpose(a: &IMatrix, cols: usize) -> IMatrix {
    (0..cols).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn matmul(a: &IMatrix, b: &IMatrix, inner: usize, cols: usize) -> IMatrix {
    a.iter().map(|row| (0..cols).map(|j| (0..inner).map(|t| row[t] * b[t][j]).sum()).collect()).collect()
}

/// Determinant of a square matrix by fraction-free elimination.
pub fn det(a: &IMatrix) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    (sign * m[n - 1][n - 1]) as i64
}

/// Smith normal form `U * A * V = D` of an `m x n` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IMatrix,
    pub d: IMatrix,
    pub v: IMatrix,
    pub rank: usize,
}

impl Snf {
    /// Nonzero diagonal entries, each dividing the next.
    pub fn invariants(&self) -> Vec<i64> {
        (0..self.rank).map(|i| self.d[i][i]).collect()
    }
}

pub fn smith_normal_form(a: &IMatrix, cols: usize) -> Snf {
    let m = a.len();
    let n = cols;
    let mut d = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut rank = 0;
    for t in 0..m.min(n) {
        loop {
            let pivot = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| d[i][j] != 0)
                .min_by_key(|&(i, j)| d[i][j].abs());
            let Some((pi, pj)) = pivot else {
                return Snf { u, d, v, rank };
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let p = d[t][t];
            let mut clean = true;
            for i in t + 1..m {
                let q = d[i][t] / p;
                if q != 0 {
                    add_row(&mut d, i, t, -q);
                    add_row(&mut u, i, t, -q);
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..n {
                let q = d[t][j] / p;
                if q != 0 {
                    add_col(&mut d, j, t, -q);
                    add_col(&mut v, j, t, -q);
                }
                clean &= d[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| d[i][j] % p != 0));
            if let Some(i) = bad {
                add_row(&mut d, t, i, 1);
                add_row(&mut u, t, i, 1);
                continue;
            }
            if p < 0 {
                for x in d[t].iter_mut() {
                    *x = -*x;
                }
                for x in u[t].iter_mut() {
                    *x = -*x;
                }
            }
            rank = t + 1;
            break;
        }
    }
    Snf { u, d, v, rank }
}

fn swap_cols(a: &mut IMatrix, i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// `row[dst] += c * row[src]`.
fn add_row(a: &mut IMatrix, dst: usize, src: usize, c: i64) {
    let s = a[src].clone();
    for (x, y) in a[dst].iter_mut().zip(s) {
        *x += c * y;
    }
}

/// `col[dst] += c * col[src]`.
fn add_col(a: &mut IMatrix, dst: usize, src: usize, c: i64) {
    for row in a.iter_mut() {
        row[dst] += c * row[src];
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows` in `Z^k`.
///
/// Rows are echelon with positive pivots and entries above each pivot reduced
/// into `[0, pivot)`; zero rows are dropped. The result depends only on the span.
pub fn hermite_normal_form(rows: &[Vec<i64>], k: usize) -> IMatrix {
    let mut a: IMatrix = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut top = 0;
    for c in 0..k {
        if top == a.len() {
            break;
        }
        loop {
            let best = (top..a.len()).filter(|&i| a[i][c] != 0).min_by_key(|&i| a[i][c].abs());
            let Some(b) = best else { break };
            a.swap(top, b);
            let p = a[top][c];
            let mut done = true;
            for i in top + 1..a.len() {
                let q = a[i][c] / p;
                if q != 0 {
                    add_row(&mut a, i, top, -q);
                }
                done &= a[i][c] == 0;
            }
            if done {
                break;
            }
        }
        if top < a.len() && a[top][c] != 0 {
            if a[top][c] < 0 {
                for x in a[top].iter_mut() {
                    *x = -*x;
                }
            }
            let p = a[top][c];
            for i in 0..top {
                let q = a[i][c].div_euclid(p);
                if q != 0 {
                    add_row(&mut a, i, top, -q);
                }
            }
            top += 1;
        }
    }
    a.truncate(top);
    a
}

/// Basis (as rows) of `{x in Z^n : A x = 0}`.
pub fn integer_kernel(a: &IMatrix, cols: usize) -> IMatrix {
    let snf = smith_normal_form(a, cols);
    let basis: IMatrix = (snf.rank..cols).map(|j| snf.v.iter().map(|row| row[j]).collect()).collect();
    hermite_normal_form(&basis, cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_of_diag_2_3() {
        let a = vec![vec![2, 0], vec![0, 3]];
        let s = smith_normal_form(&a, 2);
        assert_eq!(s.d, vec![vec![1, 0], vec![0, 6]]);
        assert_eq!(matmul(&matmul(&s.u, &a, 2, 2), &s.v, 2, 2), s.d);
        assert_eq!(det(&s.u).abs(), 1);
        assert_eq!(det(&s.v).abs(), 1);
    }

    #[test]
    fn snf_of_zero_and_rectangular() {
        let s = smith_normal_form(&zeros(2, 3), 3);
        assert_eq!(s.rank, 0);
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12]];
        let s = smith_normal_form(&a, 3);
        assert_eq!(s.invariants(), vec![2, 6]);
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hermite_normal_form(&[vec![2, 0], vec![0, 1]], 2);
        let b = hermite_normal_form(&[vec![2, 1], vec![4, 3], vec![0, 5]], 2);
        assert_eq!(a, vec![vec![2, 0], vec![0, 1]]);
        assert_eq!(b, a);
        assert_eq!(hermite_normal_form(&[vec![0, 0]], 2), IMatrix::new());
        assert_eq!(hermite_normal_form(&[vec![0, -3]], 2), vec![vec![0, 3]]);
    }

    #[test]
    fn kernel_of_row() {
        let k = integer_kernel(&vec![vec![1, 1, 1]], 3);
        assert_eq!(k.len(), 2);
        for r in &k {
            assert_eq!(r.iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn det_small() {
        assert_eq!(det(&vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det(&vec![vec![2, 3, 1], vec![4, 1, 0], vec![1, 1, 1]]), -7);
    }
}
