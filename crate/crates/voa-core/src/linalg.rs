//! Small exact linear algebra: dense integer and rational matrices, integer
//! row echelon forms, and rank computations. Everything is arbitrary
//! precision; there are no floating-point code paths.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense square matrix over `i64`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct IntMatrix {
    pub n: usize,
    pub data: Vec<i64>,
}

fn to_i64(x: i128) -> i64 {
    i64::try_from(x).expect("integer overflow in exact matrix arithmetic")
}

impl IntMatrix {
    pub fn zero(n: usize) -> Self {
        IntMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(
                "matrix rows must be square".into(),
            ));
        }
        Ok(IntMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    acc += self.at(i, k) as i128 * other.at(k, j) as i128;
                }
                out.set(i, j, to_i64(acc));
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.at(i, j));
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.n, v.len(), "matrix/vector size mismatch");
        (0..self.n)
            .map(|i| {
                to_i64(
                    (0..self.n)
                        .map(|j| self.at(i, j) as i128 * v[j] as i128)
                        .sum(),
                )
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn det(&self) -> BigInt {
        rat_det(&self.to_rational())
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        }
    }
}

/// Dense square matrix over arbitrary-precision rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatMatrix {
    pub n: usize,
    pub data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zero(n: usize) -> Self {
        RatMatrix {
            n,
            data: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigRational::zero();
                for k in 0..n {
                    if !self.at(i, k).is_zero() && !other.at(k, j).is_zero() {
                        acc += self.at(i, k) * other.at(k, j);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        let one = BigRational::one();
        for i in 0..self.n {
            for j in 0..self.n {
                let want_one = i == j;
                let e = self.at(i, j);
                if want_one && *e != one {
                    return false;
                }
                if !want_one && !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Gauss-Jordan inverse. Errors if singular.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.at(r, col).is_zero())
                .ok_or_else(|| Error::DimensionMismatch("singular matrix has no inverse".into()))?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot * n + j);
                    inv.data.swap(col * n + j, pivot * n + j);
                }
            }
            let p = a.at(col, col).clone();
            for j in 0..n {
                let v = a.at(col, j) / &p;
                a.set(col, j, v);
                let v = inv.at(col, j) / &p;
                inv.set(col, j, v);
            }
            for r in 0..n {
                if r != col && !a.at(r, col).is_zero() {
                    let f = a.at(r, col).clone();
                    for j in 0..n {
                        let v = a.at(r, j) - &f * a.at(col, j);
                        a.set(r, j, v);
                        let v = inv.at(r, j) - &f * inv.at(col, j);
                        inv.set(r, j, v);
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Entries must all be integers; panics otherwise.
    pub fn to_integer(&self) -> IntMatrix {
        IntMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .map(|x| {
                    assert!(x.is_integer(), "matrix entry {} is not an integer", x);
                    to_i64(i128::try_from(x.to_integer()).expect("entry too large"))
                })
                .collect(),
        }
    }
}

fn rat_det(m: &RatMatrix) -> BigInt {
    let n = m.n;
    let mut a = m.clone();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a.at(r, col).is_zero()) {
            Some(p) => p,
            None => return BigInt::zero(),
        };
        if pivot != col {
            for j in 0..n {
                a.data.swap(col * n + j, pivot * n + j);
            }
            det = -det;
        }
        let p = a.at(col, col).clone();
        det *= &p;
        for r in col + 1..n {
            if !a.at(r, col).is_zero() {
                let f = a.at(r, col) / &p;
                for j in col..n {
                    let v = a.at(r, j) - &f * a.at(col, j);
                    a.set(r, j, v);
                }
            }
        }
    }
    assert!(
        det.is_integer(),
        "determinant of an integer matrix must be integral"
    );
    det.to_integer()
}

/// Integer row echelon form: pivot rows with positive leading entries in
/// strictly increasing columns. The row span over the integers is preserved,
/// which is all the membership test needs.
#[derive(Clone, Debug)]
pub struct IntEchelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivot_cols: Vec<usize>,
    pub ncols: usize,
}

pub fn int_echelon(rows: Vec<Vec<BigInt>>, ncols: usize) -> IntEchelon {
    let mut active: Vec<Vec<BigInt>> = rows
        .into_iter()
        .filter(|r| !r.iter().all(Zero::is_zero))
        .collect();
    for r in &active {
        assert_eq!(r.len(), ncols, "echelon row length mismatch");
    }
    let mut out_rows: Vec<Vec<BigInt>> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    for col in 0..ncols {
        loop {
            let mut nonzero: Vec<usize> = (0..active.len())
                .filter(|&i| !active[i][col].is_zero())
                .collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                let mut row = active.swap_remove(nonzero[0]);
                if row[col].is_negative() {
                    for x in row.iter_mut() {
                        *x = -std::mem::take(x);
                    }
                }
                out_rows.push(row);
                pivot_cols.push(col);
                break;
            }
            // Reduce every other row by the one with the smallest |entry|;
            // absolute values strictly decrease, so this terminates.
            nonzero.sort_by_key(|&i| active[i][col].abs());
            let pivot_idx = nonzero[0];
            let pivot_val = active[pivot_idx][col].clone();
            let pivot_row = active[pivot_idx].clone();
            for &i in &nonzero[1..] {
                let q = &active[i][col] / &pivot_val;
                if !q.is_zero() {
                    for j in 0..ncols {
                        let delta = &q * &pivot_row[j];
                        active[i][j] -= delta;
                    }
                }
            }
            active.retain(|r| !r.iter().all(Zero::is_zero));
        }
    }
    IntEchelon {
        rows: out_rows,
        pivot_cols,
        ncols,
    }
}

/// Does `target` lie in the integer row span?
pub fn echelon_contains(ech: &IntEchelon, target: &[BigInt]) -> bool {
    assert_eq!(target.len(), ech.ncols, "target length mismatch");
    let mut t = target.to_vec();
    for (ri, &col) in ech.pivot_cols.iter().enumerate() {
        if t[col].is_zero() {
            continue;
        }
        let p = &ech.rows[ri][col];
        if (&t[col] % p) != BigInt::zero() {
            return false;
        }
        let q = &t[col] / p;
        for j in 0..ech.ncols {
            let delta = &q * &ech.rows[ri][j];
            t[j] -= delta;
        }
    }
    t.iter().all(Zero::is_zero)
}

/// Rank of a rational matrix given as rows (not necessarily square).
pub fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = match (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        rows.swap(rank, pivot);
        let p = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &p;
                for j in col..ncols {
                    let delta = &f * &rows[rank][j];
                    rows[r][j] -= delta;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn det_and_inverse_roundtrip() {
        let g = IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(g.det(), bi(3));
        let inv = g.to_rational().inverse().unwrap();
        assert!(g.to_rational().mul(&inv).is_identity());
    }

    #[test]
    fn echelon_membership_basic() {
        // Span of (2,0) and (0,3): (2,3) is in, (1,0) is not.
        let ech = int_echelon(vec![vec![bi(2), bi(0)], vec![bi(0), bi(3)]], 2);
        assert!(echelon_contains(&ech, &[bi(2), bi(3)]));
        assert!(!echelon_contains(&ech, &[bi(1), bi(0)]));
    }

    #[test]
    fn echelon_membership_needs_combination() {
        // Rows (1,1) and (1,-1) span an index-2 sublattice of Z^2 containing (2,0).
        let ech = int_echelon(vec![vec![bi(1), bi(1)], vec![bi(1), bi(-1)]], 2);
        assert!(echelon_contains(&ech, &[bi(2), bi(0)]));
        assert!(echelon_contains(&ech, &[bi(0), bi(2)]));
        assert!(!echelon_contains(&ech, &[bi(1), bi(0)]));
    }

    #[test]
    fn rank_of_dependent_rows() {
        let one = || BigRational::one();
        let rows = vec![vec![one(), one()], vec![one() + one(), one() + one()]];
        assert_eq!(rational_rank(rows), 1);
    }
}
