use thiserror::Error;

use crate::laurent::{Polynomial, RelationConfig};

/// Largest dimension accepted by [`SymMatrix::det`].
pub const MAX_DET_DIM: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("determinant unsupported for m = {0} (limit {MAX_DET_DIM})")]
    DetTooLarge(usize),
    #[error("{op} expects {expected} argument(s), got {got}")]
    Arity { op: &'static str, expected: usize, got: usize },
    #[error("relation config mismatch between matrices")]
    RelationMismatch,
}

/// Square matrix of polynomials sharing one relation config.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrix {
    m: usize,
    entries: Vec<Polynomial>,
    rel: RelationConfig,
}

impl SymMatrix {
    pub fn identity(m: usize, rel: RelationConfig) -> Self {
        let mut out = Self::zeros(m, rel);
        for k in 0..m {
            out.entries[k * m + k] = Polynomial::one(rel);
        }
        out
    }

    pub fn zeros(m: usize, rel: RelationConfig) -> Self {
        SymMatrix { m, entries: vec![Polynomial::zero(rel); m * m], rel }
    }

    pub fn diagonal(diag: Vec<Polynomial>, rel: RelationConfig) -> Self {
        let m = diag.len();
        let mut out = Self::zeros(m, rel);
        for (k, d) in diag.into_iter().enumerate() {
            out.entries[k * m + k] = d;
        }
        out
    }

    /// Row-major construction; panics if `entries.len() != m * m`.
    pub fn from_rows(m: usize, entries: Vec<Polynomial>, rel: RelationConfig) -> Self {
        assert_eq!(entries.len(), m * m, "expected {m}x{m} entries");
        SymMatrix { m, entries, rel }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn rel(&self) -> RelationConfig {
        self.rel
    }

    pub fn get(&self, row: usize, col: usize) -> &Polynomial {
        &self.entries[row * self.m + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Polynomial) {
        self.entries[row * self.m + col] = value;
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn column(&self, col: usize) -> Vec<Polynomial> {
        (0..self.m).map(|r| self.get(r, col).clone()).collect()
    }

    /// Total number of terms across entries.
    pub fn term_count(&self) -> usize {
        self.entries.iter().map(Polynomial::len).sum()
    }

    pub fn mul(&self, other: &SymMatrix) -> Result<SymMatrix, MatrixError> {
        if self.m != other.m {
            return Err(MatrixError::DimensionMismatch(self.m, other.m));
        }
        if self.rel != other.rel {
            return Err(MatrixError::RelationMismatch);
        }
        let m = self.m;
        let mut out = Self::zeros(m, self.rel);
        for r in 0..m {
            for k in 0..m {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..m {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    let slot = &mut out.entries[r * m + c];
                    *slot = &*slot + &prod;
                }
            }
        }
        Ok(out)
    }

    pub fn conj_transpose(&self) -> SymMatrix {
        let m = self.m;
        let mut out = Self::zeros(m, self.rel);
        for r in 0..m {
            for c in 0..m {
                out.entries[c * m + r] = self.get(r, c).conj();
            }
        }
        out
    }

    /// Determinant by cofactor expansion with memoized minors.
    ///
    /// Expands row by row over column subsets, so every Leibniz term is
    /// produced exactly once without division.
    pub fn det(&self) -> Result<Polynomial, MatrixError> {
        let m = self.m;
        if m > MAX_DET_DIM {
            return Err(MatrixError::DetTooLarge(m));
        }
        // minors[mask] = det of rows 0..popcount(mask) restricted to columns in mask
        let mut minors: Vec<Option<Polynomial>> = vec![None; 1 << m];
        minors[0] = Some(Polynomial::one(self.rel));
        for row in 0..m {
            for mask in 0usize..(1 << m) {
                if mask.count_ones() as usize != row + 1 {
                    continue;
                }
                let mut acc = Polynomial::zero(self.rel);
                for (pos, col) in (0..m).filter(|c| mask & (1 << c) != 0).enumerate() {
                    let entry = self.get(row, col);
                    if entry.is_zero() {
                        continue;
                    }
                    let Some(minor) = &minors[mask & !(1 << col)] else { continue };
                    if minor.is_zero() {
                        continue;
                    }
                    let term = entry * minor;
                    acc = if (row + pos) % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                minors[mask] = Some(acc);
            }
        }
        Ok(minors[(1 << m) - 1].take().expect("full minor computed"))
    }

    /// Determinant by the Leibniz permutation sum.
    pub fn det_leibniz(&self) -> Result<Polynomial, MatrixError> {
        let m = self.m;
        if m > MAX_DET_DIM {
            return Err(MatrixError::DetTooLarge(m));
        }
        let mut perm: Vec<usize> = (0..m).collect();
        let mut acc = Polynomial::zero(self.rel);
        let mut stack = vec![0usize; m];
        let mut sign = 1i64;
        let add_term = |perm: &[usize], sign: i64, acc: &mut Polynomial| {
            let mut t = Polynomial::int(sign, self.rel);
            for (r, &c) in perm.iter().enumerate() {
                let e = self.get(r, c);
                if e.is_zero() {
                    return;
                }
                t = &t * e;
            }
            *acc = &*acc + &t;
        };
        add_term(&perm, sign, &mut acc);
        // Heap's algorithm; each swap flips the sign.
        let mut i = 1;
        while i < m {
            if stack[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(stack[i], i);
                }
                sign = -sign;
                add_term(&perm, sign, &mut acc);
                stack[i] += 1;
                i = 1;
            } else {
                stack[i] = 0;
                i += 1;
            }
        }
        Ok(acc)
    }

    /// Re-normalizes every entry under another config.
    pub fn with_rel(&self, rel: RelationConfig) -> SymMatrix {
        SymMatrix {
            m: self.m,
            entries: self.entries.iter().map(|p| p.with_rel(rel)).collect(),
            rel,
        }
    }

    /// First `(row, col, self - other)` where the entries differ.
    pub fn first_mismatch(&self, other: &SymMatrix) -> Option<(usize, usize, Polynomial)> {
        first_mismatch(&self.entries, &other.entries, self.m)
    }
}

/// Entrywise comparison of two row-major grids with `cols` columns.
pub fn first_mismatch(
    lhs: &[Polynomial],
    rhs: &[Polynomial],
    cols: usize,
) -> Option<(usize, usize, Polynomial)> {
    lhs.iter().zip(rhs).enumerate().find_map(|(idx, (a, b))| {
        (a != b).then(|| (idx / cols, idx % cols, a - b))
    })
}

/// Operations accepted by [`mat_op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatOp {
    Mul,
    ConjTranspose,
    Det,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatOpOutput {
    Matrix(SymMatrix),
    Scalar(Polynomial),
}

/// `Mul` multiplies all arguments left to right (at least one).
pub fn mat_op(op: MatOp, args: &[SymMatrix]) -> Result<MatOpOutput, MatrixError> {
    match op {
        MatOp::Mul => {
            let (first, rest) = args.split_first().ok_or(MatrixError::Arity {
                op: "mul",
                expected: 1,
                got: 0,
            })?;
            let mut acc = first.clone();
            for m in rest {
                acc = acc.mul(m)?;
            }
            Ok(MatOpOutput::Matrix(acc))
        }
        MatOp::ConjTranspose | MatOp::Det => {
            let [only] = args else {
                return Err(MatrixError::Arity {
                    op: if op == MatOp::Det { "det" } else { "conj_transpose" },
                    expected: 1,
                    got: args.len(),
                });
            };
            if op == MatOp::Det {
                only.det().map(MatOpOutput::Scalar)
            } else {
                Ok(MatOpOutput::Matrix(only.conj_transpose()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::SymbolId;
    use crate::rational::GaussianRational;

    fn sym(s: SymbolId) -> Polynomial {
        Polynomial::symbol(s, RelationConfig::FULL)
    }

    fn generic(m: usize) -> SymMatrix {
        let rel = RelationConfig::FULL;
        let entries = (0..m * m)
            .map(|k| {
                let a = sym(SymbolId::vparam(k % m + 1, k / m));
                &a + &Polynomial::constant(GaussianRational::from_int((k % 3) as i64), rel)
            })
            .collect();
        SymMatrix::from_rows(m, entries, rel)
    }

    #[test]
    fn det_routes_agree() {
        for m in 1..=4 {
            let g = generic(m);
            assert_eq!(g.det().unwrap(), g.det_leibniz().unwrap(), "m = {m}");
        }
    }

    #[test]
    fn det_of_identity_and_limit() {
        let id = SymMatrix::identity(5, RelationConfig::FULL);
        assert!(id.det().unwrap().is_one());
        let big = SymMatrix::identity(8, RelationConfig::FULL);
        assert_eq!(big.det(), Err(MatrixError::DetTooLarge(8)));
        assert_eq!(big.det_leibniz(), Err(MatrixError::DetTooLarge(8)));
    }

    #[test]
    fn det_is_multiplicative() {
        let a = generic(3);
        let b = SymMatrix::diagonal(
            vec![sym(SymbolId::circle("z")), sym(SymbolId::circle_conj("z")), sym(SymbolId::radial(1, 0))],
            RelationConfig::FULL,
        );
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
    }

    #[test]
    fn mat_op_errors() {
        let a = SymMatrix::identity(2, RelationConfig::FULL);
        let b = SymMatrix::identity(3, RelationConfig::FULL);
        assert_eq!(mat_op(MatOp::Mul, &[a.clone(), b]), Err(MatrixError::DimensionMismatch(2, 3)));
        assert!(matches!(mat_op(MatOp::Det, &[]), Err(MatrixError::Arity { .. })));
        assert!(matches!(mat_op(MatOp::Mul, &[]), Err(MatrixError::Arity { .. })));
        let c = SymMatrix::identity(2, RelationConfig::FREE);
        assert_eq!(a.mul(&c), Err(MatrixError::RelationMismatch));
    }

    #[test]
    fn diagonal_product_multiplies_entries() {
        let rel = RelationConfig::FULL;
        let z = sym(SymbolId::circle("z"));
        let w = sym(SymbolId::circle("zp"));
        let d1 = SymMatrix::diagonal(vec![z.conj().pow(2), z.clone(), z.clone()], rel);
        let d2 = SymMatrix::diagonal(vec![w.conj().pow(2), w.clone(), w.clone()], rel);
        let MatOpOutput::Matrix(p) = mat_op(MatOp::Mul, &[d1, d2]).unwrap() else { panic!() };
        let zw = &z * &w;
        let expected = SymMatrix::diagonal(vec![zw.conj().pow(2), zw.clone(), zw], rel);
        assert_eq!(p, expected);
    }
}
