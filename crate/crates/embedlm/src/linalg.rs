//! Minimal dense linear algebra for the recurrent model and the embedding
//! trainer. Row-major `f64` storage; nothing here is clever, the point is
//! predictable arithmetic order so seeded runs reproduce bitwise.

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// y = A x
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec: input length != cols");
        let mut y = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            y.push(dot(self.row(r), x));
        }
        y
    }

    /// y = Aᵀ x
    pub fn tr_matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows, "tr_matvec: input length != rows");
        let mut y = vec![0.0; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            for (yc, rc) in y.iter_mut().zip(self.row(r)) {
                *yc += rc * xr;
            }
        }
        y
    }

    /// A += u vᵀ
    pub fn add_outer(&mut self, u: &[f64], v: &[f64]) {
        assert_eq!(u.len(), self.rows, "add_outer: u length != rows");
        assert_eq!(v.len(), self.cols, "add_outer: v length != cols");
        for (r, &ur) in u.iter().enumerate() {
            for (cell, vc) in self.row_mut(r).iter_mut().zip(v) {
                *cell += ur * vc;
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dot: length mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}
