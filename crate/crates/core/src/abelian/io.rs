use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::matrix::IntMatrix;

#[derive(Debug, Error)]
pub enum MatrixIoError {
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow { row: usize, expected: usize, got: usize },
    #[error("entry at ({row}, {col}) does not fit in a 64-bit JSON integer")]
    Overflow { row: usize, col: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// JSON exchange format for relation matrices: `{"cols": [...], "rows": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationMatrix {
    pub cols: Vec<String>,
    pub rows: Vec<Vec<i64>>,
}

impl RelationMatrix {
    pub fn from_matrix(cols: Vec<String>, m: &IntMatrix) -> Result<Self, MatrixIoError> {
        assert_eq!(cols.len(), m.cols());
        let rows = (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .map(|(j, x)| x.to_i64().ok_or(MatrixIoError::Overflow { row: i, col: j }))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Ok(RelationMatrix { cols, rows })
    }

    pub fn to_matrix(&self) -> Result<IntMatrix, MatrixIoError> {
        let n = self.cols.len();
        if let Some((row, r)) = self.rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(MatrixIoError::RaggedRow { row, expected: n, got: r.len() });
        }
        let rows: Vec<Vec<BigInt>> =
            self.rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Ok(IntMatrix::from_rows(n, &rows))
    }

    pub fn from_json(text: &str) -> Result<Self, MatrixIoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("relation matrix serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let text = r#"{"cols":["H^1_0","Q^2_0"],"rows":[[2,0],[0,2]]}"#;
        let rm = RelationMatrix::from_json(text).unwrap();
        let m = rm.to_matrix().unwrap();
        assert_eq!(m, IntMatrix::from_rows(2, &[vec![2, 0], vec![0, 2]]));
        assert_eq!(RelationMatrix::from_matrix(rm.cols.clone(), &m).unwrap().to_json(), text);
    }

    #[test]
    fn ragged_rows_rejected() {
        let rm = RelationMatrix::from_json(r#"{"cols":["a","b"],"rows":[[1]]}"#).unwrap();
        assert!(matches!(rm.to_matrix(), Err(MatrixIoError::RaggedRow { row: 0, .. })));
        assert!(RelationMatrix::from_json("{").is_err());
    }
}
