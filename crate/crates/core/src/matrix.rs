//! Dense matrices over a [`FieldSpec`].

use crate::gf::{FieldElement, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FieldMatrix {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        FieldMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// The first `count` rows.
    pub fn top_rows(&self, count: usize) -> FieldMatrix {
        FieldMatrix {
            rows: count,
            cols: self.cols,
            data: self.data[..count * self.cols].to_vec(),
        }
    }

    pub fn mul(&self, field: &FieldSpec, rhs: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = FieldMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = field.add(out.get(i, j), field.mul(a, rhs.get(t, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self, field: &FieldSpec) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(pivot) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            let inv = field.inv(m.get(rank, col)).expect("pivot is nonzero");
            for r in rank + 1..m.rows {
                let factor = field.mul(m.get(r, col), inv);
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = field.sub(m.get(r, c), field.mul(factor, m.get(rank, c)));
                    m.set(r, c, v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Determinant of a square matrix by elimination.
    pub fn det(&self, field: &FieldSpec) -> FieldElement {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = FieldElement::ONE;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return FieldElement::ZERO;
            };
            if pivot != col {
                m.swap_rows(col, pivot);
                det = field.neg(det);
            }
            let p = m.get(col, col);
            det = field.mul(det, p);
            let inv = field.inv(p).expect("pivot is nonzero");
            for r in col + 1..n {
                let factor = field.mul(m.get(r, col), inv);
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = field.sub(m.get(r, c), field.mul(factor, m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_new;

    fn m(f: &FieldSpec, rows: &[&[u64]]) -> FieldMatrix {
        FieldMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| f.element(v).unwrap()).collect())
                .collect(),
        )
    }

    #[test]
    fn det_and_rank_small() {
        let f = field_new(5, 1, None).unwrap();
        let a = m(&f, &[&[3, 4], &[0, 1]]);
        assert_eq!(a.det(&f).value(), 3);
        assert_eq!(a.rank(&f), 2);
        let s = m(&f, &[&[1, 2], &[2, 4]]);
        assert_eq!(s.det(&f), FieldElement::ZERO);
        assert_eq!(s.rank(&f), 1);
        // Row swap flips the sign: det [[0,1],[1,0]] = -1 = 4.
        let p = m(&f, &[&[0, 1], &[1, 0]]);
        assert_eq!(p.det(&f).value(), 4);
    }

    #[test]
    fn product_shape() {
        let f = field_new(7, 1, None).unwrap();
        let a = m(&f, &[&[1, 2]]);
        let b = m(&f, &[&[3, 0, 1], &[1, 1, 1]]);
        let c = a.mul(&f, &b);
        assert_eq!(
            c.to_rows()[0].iter().map(|e| e.value()).collect::<Vec<_>>(),
            vec![5, 2, 3]
        );
    }
}
