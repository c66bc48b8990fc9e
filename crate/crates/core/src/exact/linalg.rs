//! Dense linear algebra over Q on plain coordinate vectors.

use num_traits::Zero;

use super::rat::Rat;

/// Solves `Σ x_j · columns[j] = target`; `None` when inconsistent.
/// Free variables are set to zero.
pub fn solve_rational(columns: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let rows = target.len();
    let cols = columns.len();
    let mut a: Vec<Vec<Rat>> = (0..rows)
        .map(|i| {
            let mut r: Vec<Rat> = columns.iter().map(|c| c[i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let pivots = rref_in_place(&mut a, cols);
    for row in a.iter().skip(pivots.len()) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][cols].clone();
    }
    Some(x)
}

/// Row-reduces the first `ncols` columns of `a` in place; returns pivot columns.
pub fn rref_in_place(a: &mut [Vec<Rat>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    #[test]
    fn solves_small_system() {
        let cols = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        let x = solve_rational(&cols, &[rat(3), rat(1)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
        let dep = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert!(solve_rational(&dep, &[rat(1), rat(0)]).is_none());
    }
}
