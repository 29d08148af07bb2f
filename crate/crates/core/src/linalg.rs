//! Dense Gaussian elimination over a [`Field`].

use crate::gf::Field;

/// Reduces `rows` in place to reduced row echelon form. Returns the pivot
/// columns; their count is the rank. Zero rows are moved to the bottom.
pub fn reduce(field: &Field, rows: &mut [Vec<u32>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = field.inv(rows[r][col]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let factor = row[col];
            if i != r && factor != 0 {
                for (x, &p) in row.iter_mut().zip(&pivot) {
                    *x = field.sub(*x, field.mul(factor, p));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(field: &Field, rows: &[Vec<u32>]) -> usize {
    let mut rows = rows.to_vec();
    reduce(field, &mut rows).len()
}

/// Finds some `x` with `a · x = b`, setting free variables to zero.
pub fn solve(field: &Field, a: &[Vec<u32>], b: &[u32]) -> Option<Vec<u32>> {
    let nvars = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<u32>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let pivots = reduce(field, &mut aug);
    if pivots.last() == Some(&nvars) {
        return None;
    }
    let mut x = vec![0; nvars];
    for (row, &col) in aug.iter().zip(&pivots) {
        x[col] = row[nvars];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_solve_gf4() {
        let f = Field::new(2, 2).unwrap();
        let a = vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]];
        assert_eq!(rank(&f, &a), 2);
        let dup = vec![vec![1, 2], vec![2, 3]]; // second row = 2 * first
        assert_eq!(rank(&f, &dup), 1);
        let sys = vec![vec![1, 1], vec![1, 2]];
        let x = solve(&f, &sys, &[3, 1]).unwrap();
        for (row, rhs) in sys.iter().zip([3, 1]) {
            let lhs = f.add(f.mul(row[0], x[0]), f.mul(row[1], x[1]));
            assert_eq!(lhs, rhs);
        }
        assert!(solve(&f, &dup, &[1, 1]).is_none());
    }
}
