use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

/// Dense `k × k` matrix of `f64`, row-major.
///
/// Serialized as an array of rows so report files stay readable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SquareMatrix {
    order: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            data: vec![0.0; order * order],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, NotSquare> {
        let order = rows.len();
        let mut data = Vec::with_capacity(order * order);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != order {
                return Err(NotSquare {
                    row: i,
                    expected: order,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { order, data })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        if self.order == 0 {
            return Vec::new();
        }
        self.data.chunks(self.order).map(<[f64]>::to_vec).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self[(i, j)]).sum())
            .collect()
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self[(i, i)]).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.order);
        for i in 0..self.order {
            for j in 0..self.order {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Entrywise sum. Panics if orders differ.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "matrix order mismatch");
        Self {
            order: self.order,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.order && j < self.order, "index out of range");
        &self.data[i * self.order + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(i < self.order && j < self.order, "index out of range");
        &mut self.data[i * self.order + j]
    }
}

impl TryFrom<Vec<Vec<f64>>> for SquareMatrix {
    type Error = NotSquare;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self, NotSquare> {
        Self::from_rows(rows)
    }
}

impl From<SquareMatrix> for Vec<Vec<f64>> {
    fn from(m: SquareMatrix) -> Self {
        m.rows()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotSquare {
    pub row: usize,
    pub expected: usize,
    pub found: usize,
}

impl fmt::Display for NotSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "matrix is not square: row {} has {} entries, expected {}",
            self.row, self.found, self.expected
        )
    }
}

impl std::error::Error for NotSquare {}
