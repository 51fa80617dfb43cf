use thiserror::Error;

use super::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("dimension mismatch: {rows} rows but right-hand side of length {rhs}")]
    DimensionMismatch { rows: usize, rhs: usize },
}

/// Affine solution set `particular + span(nullspace)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolution<F> {
    pub particular: Vec<F>,
    pub nullspace: Vec<Vec<F>>,
}

/// Solve `m * v = rhs` exactly.
///
/// Elimination is fraction free: row updates are `p*a_ij - a_ic*a_pj` divided
/// by the previous pivot, so field inverses are only taken during
/// back-substitution. Free variables are set to zero in the particular
/// solution and to unit vectors in the nullspace basis.
pub fn solve_linear<F: Field>(m: &[Vec<F>], rhs: &[F]) -> Result<LinearSolution<F>, LinearError> {
    if m.len() != rhs.len() {
        return Err(LinearError::DimensionMismatch {
            rows: m.len(),
            rhs: rhs.len(),
        });
    }
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<F>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let rows = a.len();

    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = F::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..rows {
            let f = a[i][c].clone();
            // rows i and r are both read; an iterator would need split borrows
            #[allow(clippy::needless_range_loop)]
            for j in c..=cols {
                let v = piv.clone() * a[i][j].clone() - f.clone() * a[r][j].clone();
                a[i][j] = v.exact_div(&prev);
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }

    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return Err(LinearError::Inconsistent);
    }

    let back_substitute = |target: &[F], free_values: &[(usize, F)]| -> Vec<F> {
        let mut x = vec![F::zero(); cols];
        for (i, v) in free_values {
            x[*i] = v.clone();
        }
        for (row, &pc) in pivots.iter().enumerate().rev() {
            let mut acc = target[row].clone();
            for j in pc + 1..cols {
                if !a[row][j].is_zero() && !x[j].is_zero() {
                    acc = acc - a[row][j].clone() * x[j].clone();
                }
            }
            x[pc] = acc / a[row][pc].clone();
        }
        x
    };

    let b: Vec<F> = a.iter().map(|row| row[cols].clone()).collect();
    let particular = back_substitute(&b, &[]);
    let zeros = vec![F::zero(); rows];
    let nullspace = (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| back_substitute(&zeros, &[(free, F::one())]))
        .collect();
    Ok(LinearSolution {
        particular,
        nullspace,
    })
}
