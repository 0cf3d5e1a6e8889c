use nalgebra::DMatrix;

use super::{Graph, GraphError, WeightVector};

/// `L(w) = D(w) - A(w)`. `None` means unit weights.
pub fn laplacian(g: &Graph, w: Option<&WeightVector>) -> Result<DMatrix<f64>, GraphError> {
    if let Some(w) = w {
        if w.len() != g.m() {
            return Err(GraphError::WeightLengthMismatch {
                expected: g.m(),
                found: w.len(),
            });
        }
    }
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    for (k, &(i, j)) in g.edges().iter().enumerate() {
        let wk = w.map_or(1.0, |w| w.as_slice()[k]);
        l[(i, j)] -= wk;
        l[(j, i)] -= wk;
        l[(i, i)] += wk;
        l[(j, j)] += wk;
    }
    Ok(l)
}

pub fn unit_laplacian(g: &Graph) -> DMatrix<f64> {
    laplacian(g, None).expect("unit weights always match")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog;

    #[test]
    fn path_4() {
        let l = unit_laplacian(&catalog("path_4").unwrap());
        #[rustfmt::skip]
        let expected = DMatrix::from_row_slice(4, 4, &[
             1.0, -1.0,  0.0,  0.0,
            -1.0,  2.0, -1.0,  0.0,
             0.0, -1.0,  2.0, -1.0,
             0.0,  0.0, -1.0,  1.0,
        ]);
        assert_eq!(l, expected);
    }

    #[test]
    fn weighted_rows_sum_to_zero() {
        let g = catalog("petersen").unwrap();
        let w = WeightVector::new((0..g.m()).map(|k| (k % 4) as f64 * 0.7).collect()).unwrap();
        let l = laplacian(&g, Some(&w)).unwrap();
        for r in 0..g.n() {
            assert!(l.row(r).sum().abs() < 1e-12);
        }
        assert_eq!(l, l.transpose());
    }

    #[test]
    fn zero_weights_give_zero_matrix() {
        let g = catalog("cycle_5").unwrap();
        let w = WeightVector::new(vec![0.0; 5]).unwrap();
        assert_eq!(laplacian(&g, Some(&w)).unwrap(), DMatrix::zeros(5, 5));
    }

    #[test]
    fn length_mismatch() {
        let g = catalog("cycle_5").unwrap();
        let w = WeightVector::unit(4);
        assert_eq!(
            laplacian(&g, Some(&w)),
            Err(GraphError::WeightLengthMismatch {
                expected: 5,
                found: 4
            })
        );
    }
}
