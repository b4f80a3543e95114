//! Small dense linear algebra over the rationals, for subspace bookkeeping.
//!
//! Vectors are `Vec<Rational>` of a fixed ambient dimension; subspaces are
//! given by spanning lists.

use super::Rational;

pub type DVec = Vec<Rational>;

/// Reduced row echelon form of the given rows; returns the nonzero rows and
/// their pivot columns.
pub fn rref(rows: &[DVec], ncols: usize) -> (Vec<DVec>, Vec<usize>) {
    let mut m: Vec<DVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for k in 0..m.len() {
            if k != r && !m[k][c].is_zero() {
                let f = m[k][c].clone();
                for col in 0..ncols {
                    let t = &f * &m[r][col];
                    m[k][col] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[DVec], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows over `ncols` unknowns.
pub fn nullspace(rows: &[DVec], ncols: usize) -> Vec<DVec> {
    let (m, pivots) = rref(rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::ZERO; ncols];
        v[free] = Rational::ONE;
        for (row, pc) in m.iter().zip(&pivots) {
            v[*pc] = -&row[free];
        }
        basis.push(v);
    }
    basis
}

/// Coefficients `c` with `Σ c_k basis[k] = v`, if `v` lies in the span of
/// the (linearly independent) `basis`.
pub fn solve(basis: &[DVec], v: &DVec) -> Option<DVec> {
    let n = v.len();
    let k = basis.len();
    // Columns are the basis vectors, augmented with v.
    let rows: Vec<DVec> = (0..n)
        .map(|r| {
            let mut row: DVec = basis.iter().map(|b| b[r].clone()).collect();
            row.push(v[r].clone());
            row
        })
        .collect();
    let (m, pivots) = rref(&rows, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![Rational::ZERO; k];
    for (row, pc) in m.iter().zip(&pivots) {
        c[*pc] = row[k].clone();
    }
    Some(c)
}

/// Vectors from `space` that extend a basis of `sub` to a basis of
/// `sub + space`. Assumes `sub ⊆ span(space)` when used as a complement.
pub fn complement(sub: &[DVec], space: &[DVec], ncols: usize) -> Vec<DVec> {
    let mut acc: Vec<DVec> = rref(sub, ncols).0;
    let mut current = acc.len();
    let mut out = Vec::new();
    for v in space {
        acc.push(v.clone());
        let r = rank(&acc, ncols);
        if r > current {
            current = r;
            out.push(v.clone());
        } else {
            acc.pop();
        }
    }
    out
}

/// Basis of `span(a) ∩ span(b)`.
pub fn intersection(a: &[DVec], b: &[DVec], ncols: usize) -> Vec<DVec> {
    let a = rref(a, ncols).0;
    let b = rref(b, ncols).0;
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Solve Σ x_k a_k - Σ y_l b_l = 0.
    let unknowns = a.len() + b.len();
    let rows: Vec<DVec> = (0..ncols)
        .map(|c| {
            a.iter()
                .map(|v| v[c].clone())
                .chain(b.iter().map(|v| -&v[c]))
                .collect::<Vec<_>>()
        })
        .collect();
    let ns = nullspace(&rows, unknowns);
    let vs: Vec<DVec> = ns
        .iter()
        .map(|x| {
            let mut v = vec![Rational::ZERO; ncols];
            for (k, ak) in a.iter().enumerate() {
                if !x[k].is_zero() {
                    for c in 0..ncols {
                        let t = &x[k] * &ak[c];
                        v[c] += &t;
                    }
                }
            }
            v
        })
        .collect();
    rref(&vs, ncols).0
}

/// `Σ c_k vs[k]`.
pub fn combine(c: &[Rational], vs: &[DVec], ncols: usize) -> DVec {
    let mut out = vec![Rational::ZERO; ncols];
    for (ck, v) in c.iter().zip(vs) {
        if ck.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            let t = ck * x;
            *o += &t;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> DVec {
        xs.iter().map(|x| Rational::from_integer(*x)).collect()
    }

    #[test]
    fn nullspace_and_solve() {
        let a = vec![v(&[1, 1, 0]), v(&[0, 1, 1])];
        let ns = nullspace(&a, 3);
        assert_eq!(ns, vec![v(&[1, -1, 1])]);
        let basis = vec![v(&[1, 0, 1]), v(&[0, 1, 0])];
        assert_eq!(solve(&basis, &v(&[2, 3, 2])), Some(v(&[2, 3])));
        assert_eq!(solve(&basis, &v(&[1, 0, 0])), None);
    }

    #[test]
    fn intersections_and_complements() {
        let a = vec![v(&[1, 0, 0]), v(&[0, 1, 0])];
        let b = vec![v(&[0, 1, 0]), v(&[0, 0, 1])];
        assert_eq!(intersection(&a, &b, 3), vec![v(&[0, 1, 0])]);
        assert_eq!(complement(&a, &b, 3), vec![v(&[0, 0, 1])]);
    }
}
