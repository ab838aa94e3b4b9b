//! Builders for the rotation, diagonal and product matrix families.
//!
//! Indices follow the 1-based convention of the construction: `0 <= j <= m-2`,
//! `1 <= i <= m_j` with `m_j = m - j - 1`, and the 2x2 rotation block of
//! `R_{i;j}` sits on rows/columns `j+1` and `j+1+i`. Internally rows are
//! 0-based, so the block occupies `j` and `j+i`.

use thiserror::Error;

use super::matrix::SymMatrix;
use crate::laurent::{Polynomial, RelationConfig, SymbolId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("dimension m = {m} out of range: {bound}")]
    Dimension { m: usize, bound: &'static str },
    #[error("index {name} = {value} violates {bound} (m = {m})")]
    Index { name: &'static str, value: usize, bound: String, m: usize },
    #[error("expected {expected} per-factor parameters, got {got}")]
    FactorCount { expected: usize, got: usize },
}

/// `m_j = m - j - 1`, the number of rotations in block `j`.
pub fn block_len(m: usize, j: usize) -> usize {
    m - j - 1
}

fn check_m(m: usize) -> Result<(), BuildError> {
    if m < 2 {
        return Err(BuildError::Dimension { m, bound: "m >= 2" });
    }
    Ok(())
}

fn check_j(m: usize, j: usize) -> Result<(), BuildError> {
    check_m(m)?;
    if j > m - 2 {
        return Err(BuildError::Index { name: "j", value: j, bound: format!("0 <= j <= {}", m - 2), m });
    }
    Ok(())
}

fn check_ij(m: usize, i: usize, j: usize) -> Result<(), BuildError> {
    check_j(m, j)?;
    let mj = block_len(m, j);
    if i < 1 || i > mj {
        return Err(BuildError::Index { name: "i", value: i, bound: format!("1 <= i <= m_j = {mj}"), m });
    }
    Ok(())
}

/// Largest torus index `k` for dimension `m`: `floor(m/2) - 1`.
pub fn torus_count(m: usize) -> usize {
    (m / 2).saturating_sub(1)
}

fn check_k(m: usize, k: usize) -> Result<(), BuildError> {
    check_m(m)?;
    let kmax = torus_count(m);
    if k < 1 || k > kmax {
        return Err(BuildError::Index { name: "k", value: k, bound: format!("1 <= k <= m/2 - 1 = {kmax}"), m });
    }
    Ok(())
}

/// Canonical symbol names used by the default builders and identity checks.
pub mod names {
    use super::*;

    pub fn r(i: usize, j: usize, rel: RelationConfig) -> Polynomial {
        Polynomial::symbol(SymbolId::radial(i, j), rel)
    }

    pub fn v(i: usize, j: usize, rel: RelationConfig) -> Polynomial {
        Polynomial::symbol(SymbolId::vparam(i, j), rel)
    }

    pub fn circle(name: &str, rel: RelationConfig) -> Polynomial {
        Polynomial::symbol(SymbolId::circle(name), rel)
    }

    /// The fibre variable `z`.
    pub fn z(rel: RelationConfig) -> Polynomial {
        circle("z", rel)
    }

    /// Per-factor circle variable `z_i`.
    pub fn zi(i: usize, rel: RelationConfig) -> Polynomial {
        circle(&format!("z{i}"), rel)
    }

    /// Per-factor extra circle variable `z'_i` (also `z'_k` in the twisted product).
    pub fn zpi(i: usize, rel: RelationConfig) -> Polynomial {
        circle(&format!("zp{i}"), rel)
    }

    /// Single extra circle variable `z'`.
    pub fn zp(rel: RelationConfig) -> Polynomial {
        circle("zp", rel)
    }

    /// Torus coordinate `z_idx` (`idx = 2k-1` or `2k`).
    pub fn tz(idx: usize, rel: RelationConfig) -> Polynomial {
        circle(&format!("tz{idx}"), rel)
    }

    /// Torus coordinate `zeta_idx`.
    pub fn zeta(idx: usize, rel: RelationConfig) -> Polynomial {
        circle(&format!("zeta{idx}"), rel)
    }
}

/// `R(alpha, v) = [[alpha, v], [-conj(v), conj(alpha)]]`.
pub fn rot2(alpha: &Polynomial, v: &Polynomial) -> SymMatrix {
    let rel = alpha.rel();
    SymMatrix::from_rows(2, vec![alpha.clone(), v.clone(), -&v.conj(), alpha.conj()], rel)
}

/// `R_{i;j}` with diagonal entry `alpha` (e.g. `r z`) and off-diagonal `v`.
pub fn rot_ij(m: usize, i: usize, j: usize, alpha: &Polynomial, v: &Polynomial) -> Result<SymMatrix, BuildError> {
    check_ij(m, i, j)?;
    let rel = alpha.rel();
    let (p, q) = (j, j + i);
    let mut out = SymMatrix::identity(m, rel);
    out.set(p, p, alpha.clone());
    out.set(p, q, v.clone());
    out.set(q, p, -&v.conj());
    out.set(q, q, alpha.conj());
    Ok(out)
}

/// `d(z) = diag(conj(z)^(m-1), z, ..., z)`.
pub fn d_small(m: usize, z: &Polynomial) -> Result<SymMatrix, BuildError> {
    check_m(m)?;
    let mut diag = vec![z.clone(); m];
    diag[0] = z.conj().pow(m as u32 - 1);
    Ok(SymMatrix::diagonal(diag, z.rel()))
}

/// `d_j(z) = diag(1 (j times), conj(z)^(m_j), z, ..., z)`.
pub fn d_j_small(m: usize, j: usize, z: &Polynomial) -> Result<SymMatrix, BuildError> {
    check_j(m, j)?;
    let rel = z.rel();
    let mut diag = vec![Polynomial::one(rel); j];
    diag.push(z.conj().pow(block_len(m, j) as u32));
    diag.extend(std::iter::repeat_n(z.clone(), m - j - 1));
    Ok(SymMatrix::diagonal(diag, rel))
}

/// `D_0(z) = I`, `D_j(z) = diag(z^(m-1), conj(z) (j-1 times), conj(z)^(m-j), 1, ..., 1)`.
pub fn d_j_cap(m: usize, j: usize, z: &Polynomial) -> Result<SymMatrix, BuildError> {
    check_j(m, j)?;
    let rel = z.rel();
    if j == 0 {
        return Ok(SymMatrix::identity(m, rel));
    }
    let zb = z.conj();
    let mut diag = vec![z.pow(m as u32 - 1)];
    diag.extend(std::iter::repeat_n(zb.clone(), j - 1));
    diag.push(zb.pow((m - j) as u32));
    diag.extend(std::iter::repeat_n(Polynomial::one(rel), m - j - 1));
    Ok(SymMatrix::diagonal(diag, rel))
}

/// `R^{i}_j(r z, v)`: the block-`j` product with every factor except the
/// `i`-th degenerated to `R_{s;j}(z, 0)`, followed by `D_j(z)`.
pub fn r_hat(
    m: usize,
    i: usize,
    j: usize,
    r: &Polynomial,
    z: &Polynomial,
    v: &Polynomial,
) -> Result<SymMatrix, BuildError> {
    check_ij(m, i, j)?;
    let rel = z.rel();
    let zero = Polynomial::zero(rel);
    let mut acc = SymMatrix::identity(m, rel);
    for s in 1..=block_len(m, j) {
        let factor = if s == i { rot_ij(m, s, j, &(r * z), v)? } else { rot_ij(m, s, j, z, &zero)? };
        acc = acc.mul(&factor).expect("same dimension");
    }
    Ok(acc.mul(&d_j_cap(m, j, z)?).expect("same dimension"))
}

/// Per-factor parameters `(r_i, z_i, v_i)` of one `R^{i}_j` factor.
#[derive(Debug, Clone)]
pub struct FactorParams {
    pub r: Polynomial,
    pub z: Polynomial,
    pub v: Polynomial,
}

/// `R_j = prod_i R^{i}_j(r_i z_i, v_i)`, ascending in `i`.
pub fn r_j(m: usize, j: usize, factors: &[FactorParams]) -> Result<SymMatrix, BuildError> {
    check_j(m, j)?;
    let mj = block_len(m, j);
    if factors.len() != mj {
        return Err(BuildError::FactorCount { expected: mj, got: factors.len() });
    }
    let mut acc = SymMatrix::identity(m, factors[0].z.rel());
    for (idx, f) in factors.iter().enumerate() {
        acc = acc.mul(&r_hat(m, idx + 1, j, &f.r, &f.z, &f.v)?).expect("same dimension");
    }
    Ok(acc)
}

/// Default factor parameters for block `j`: `(r[i,j], z_i, v[i,j])`.
pub fn default_factors(m: usize, j: usize, rel: RelationConfig) -> Vec<FactorParams> {
    (1..=block_len(m, j))
        .map(|i| FactorParams { r: names::r(i, j, rel), z: names::zi(i, rel), v: names::v(i, j, rel) })
        .collect()
}

/// `prod_j R_j` with default symbols, `z_i` shared across blocks.
pub fn r_full(m: usize, rel: RelationConfig) -> Result<SymMatrix, BuildError> {
    check_m(m)?;
    let mut acc = SymMatrix::identity(m, rel);
    for j in 0..=m - 2 {
        acc = acc.mul(&r_j(m, j, &default_factors(m, j, rel))?).expect("same dimension");
    }
    Ok(acc)
}

/// `D(a, b) = diag(1 (2k-1 times), a, conj(a) b, conj(b), 1, ..., 1)`.
pub fn d_pair(m: usize, k: usize, a: &Polynomial, b: &Polynomial) -> Result<SymMatrix, BuildError> {
    check_k(m, k)?;
    let rel = a.rel();
    let mut diag = vec![Polynomial::one(rel); m];
    diag[2 * k - 1] = a.clone();
    diag[2 * k] = &a.conj() * b;
    diag[2 * k + 1] = b.conj();
    Ok(SymMatrix::diagonal(diag, rel))
}

/// `R~ = prod_j R_j * prod_k D(z_{2k-1}, z'_k z_{2k}) d(conj(z'_k))`.
pub fn r_tilde(m: usize, rel: RelationConfig) -> Result<SymMatrix, BuildError> {
    let mut acc = r_full(m, rel)?;
    for k in 1..=torus_count(m) {
        let zpk = names::zpi(k, rel);
        let d = d_pair(m, k, &names::tz(2 * k - 1, rel), &(&zpk * &names::tz(2 * k, rel)))?;
        acc = acc.mul(&d).expect("same dimension");
        acc = acc.mul(&d_small(m, &zpk.conj())?).expect("same dimension");
    }
    Ok(acc)
}

/// Closed form of `prod_i R_{i;j}(r_{i;j} z, v_{i;j})` assembled from the
/// entry formulas (first column `a`, first row `b`, upper-Hessenberg `c`).
pub fn closed_form_block(m: usize, j: usize, rel: RelationConfig) -> Result<SymMatrix, BuildError> {
    check_j(m, j)?;
    let mj = block_len(m, j);
    let r = |s: usize| names::r(s, j, rel);
    let v = |s: usize| names::v(s, j, rel);
    let z = names::z(rel);
    let r_range = |lo: usize, hi: usize| {
        (lo..=hi).fold(Polynomial::one(rel), |acc, s| &acc * &r(s))
    };
    let mut out = SymMatrix::identity(m, rel);
    let at = |s: usize| j + s;

    // a_{0;j} and a_{s;j}
    out.set(at(0), at(0), &r_range(1, mj) * &z.pow(mj as u32));
    for s in 1..=mj {
        let a = &(&r_range(s + 1, mj) * &z.pow((mj - s) as u32)) * &v(s).conj();
        out.set(at(s), at(0), -&a);
    }
    // b_{s;j}
    for s in 1..=mj {
        out.set(at(0), at(s), &(&r_range(1, s - 1) * &z.pow(s as u32 - 1)) * &v(s));
    }
    // c_{s,t;j}
    for s in 1..=mj {
        for t in 1..=mj {
            let entry = if s > t {
                Polynomial::zero(rel)
            } else if s == t {
                &r(s) * &z.conj()
            } else {
                let c = &(&r_range(s + 1, t - 1) * &z.pow((t - s - 1) as u32)) * &(&v(s).conj() * &v(t));
                -&c
            };
            out.set(at(s), at(t), entry);
        }
    }
    Ok(out)
}

/// Matrix families addressable by tag, built with the default symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    /// `R(r[1,0] z, v[1,0])`.
    Rot2,
    /// `R_{i;j}(r[i,j] z, v[i,j])`.
    RIj { m: usize, i: usize, j: usize },
    /// `d(z)`.
    DSmall { m: usize },
    /// `d_j(z)`.
    DJSmall { m: usize, j: usize },
    /// `D_j(z)`.
    DJCap { m: usize, j: usize },
    /// `R^{i}_j(r[i,j] z, v[i,j])`.
    RHatIj { m: usize, i: usize, j: usize },
    /// `R_j(r[i,j] z_i, v[i,j])`.
    RJ { m: usize, j: usize },
    RFull { m: usize },
    /// `D(tz_{2k-1}, z tz_{2k})`.
    DPair { m: usize, k: usize },
    RTilde { m: usize },
}

impl MatrixKind {
    pub fn tag(&self) -> &'static str {
        match self {
            MatrixKind::Rot2 => "ROT2",
            MatrixKind::RIj { .. } => "R_IJ",
            MatrixKind::DSmall { .. } => "D_SMALL",
            MatrixKind::DJSmall { .. } => "D_J_SMALL",
            MatrixKind::DJCap { .. } => "D_J_CAP",
            MatrixKind::RHatIj { .. } => "R_HAT_IJ",
            MatrixKind::RJ { .. } => "R_J",
            MatrixKind::RFull { .. } => "R_FULL",
            MatrixKind::DPair { .. } => "D_PAIR",
            MatrixKind::RTilde { .. } => "R_TILDE",
        }
    }

    pub fn params(&self) -> String {
        match *self {
            MatrixKind::Rot2 => "m=2".into(),
            MatrixKind::RIj { m, i, j } | MatrixKind::RHatIj { m, i, j } => format!("m={m},i={i},j={j}"),
            MatrixKind::DJSmall { m, j } | MatrixKind::DJCap { m, j } | MatrixKind::RJ { m, j } => {
                format!("m={m},j={j}")
            }
            MatrixKind::DSmall { m } | MatrixKind::RFull { m } | MatrixKind::RTilde { m } => format!("m={m}"),
            MatrixKind::DPair { m, k } => format!("m={m},k={k}"),
        }
    }

    /// Every valid kind for dimension `m` (ROT2 only when `m == 2`).
    pub fn all_for(m: usize) -> Vec<MatrixKind> {
        let mut out = Vec::new();
        if m == 2 {
            out.push(MatrixKind::Rot2);
        }
        out.push(MatrixKind::DSmall { m });
        for j in 0..=m - 2 {
            out.push(MatrixKind::DJSmall { m, j });
            out.push(MatrixKind::DJCap { m, j });
            for i in 1..=block_len(m, j) {
                out.push(MatrixKind::RIj { m, i, j });
                out.push(MatrixKind::RHatIj { m, i, j });
            }
            out.push(MatrixKind::RJ { m, j });
        }
        out.push(MatrixKind::RFull { m });
        for k in 1..=torus_count(m) {
            out.push(MatrixKind::DPair { m, k });
        }
        if torus_count(m) > 0 {
            out.push(MatrixKind::RTilde { m });
        }
        out
    }
}

/// Builds a tagged matrix family with the default symbol choices.
pub fn build_matrix(kind: &MatrixKind, rel: RelationConfig) -> Result<SymMatrix, BuildError> {
    use names::*;
    match *kind {
        MatrixKind::Rot2 => Ok(rot2(&(&r(1, 0, rel) * &z(rel)), &v(1, 0, rel))),
        MatrixKind::RIj { m, i, j } => rot_ij(m, i, j, &(&r(i, j, rel) * &z(rel)), &v(i, j, rel)),
        MatrixKind::DSmall { m } => d_small(m, &z(rel)),
        MatrixKind::DJSmall { m, j } => d_j_small(m, j, &z(rel)),
        MatrixKind::DJCap { m, j } => d_j_cap(m, j, &z(rel)),
        MatrixKind::RHatIj { m, i, j } => r_hat(m, i, j, &r(i, j, rel), &z(rel), &v(i, j, rel)),
        MatrixKind::RJ { m, j } => {
            check_j(m, j)?;
            r_j(m, j, &default_factors(m, j, rel))
        }
        MatrixKind::RFull { m } => r_full(m, rel),
        MatrixKind::DPair { m, k } => {
            check_k(m, k)?;
            d_pair(m, k, &tz(2 * k - 1, rel), &(&z(rel) * &tz(2 * k, rel)))
        }
        MatrixKind::RTilde { m } => r_tilde(m, rel),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    const FULL: RelationConfig = RelationConfig::FULL;

    #[test]
    fn rot2_matches_definition() {
        let m = build_matrix(&MatrixKind::Rot2, FULL).unwrap();
        let rz = &names::r(1, 0, FULL) * &names::z(FULL);
        let v = names::v(1, 0, FULL);
        assert_eq!(m.get(0, 0), &rz);
        assert_eq!(m.get(0, 1), &v);
        assert_eq!(m.get(1, 0), &(-&v.conj()));
        assert_eq!(m.get(1, 1), &(&names::r(1, 0, FULL) * &names::z(FULL).conj()));
    }

    #[test]
    fn d_small_m3() {
        let d = d_small(3, &names::z(FULL)).unwrap();
        let z = names::z(FULL);
        assert_eq!(d, SymMatrix::diagonal(vec![z.conj().pow(2), z.clone(), z], FULL));
    }

    #[test]
    fn degenerate_rotation_is_diagonal() {
        // r = 1 forces v = 0 under the unit-norm relation
        let one = Polynomial::one(FULL);
        let z = names::z(FULL);
        let m = rot_ij(3, 1, 0, &(&one * &z), &Polynomial::zero(FULL)).unwrap();
        assert_eq!(m, SymMatrix::diagonal(vec![z.clone(), z.conj(), one], FULL));
    }

    #[test]
    fn index_errors_name_the_bound() {
        let e = build_matrix(&MatrixKind::RIj { m: 3, i: 3, j: 0 }, FULL).unwrap_err();
        assert!(e.to_string().contains("m_j = 2"), "{e}");
        let e = build_matrix(&MatrixKind::DJCap { m: 4, j: 3 }, FULL).unwrap_err();
        assert!(e.to_string().contains("j <= 2"), "{e}");
        let e = build_matrix(&MatrixKind::DPair { m: 5, k: 2 }, FULL).unwrap_err();
        assert!(e.to_string().contains("k <= m/2 - 1 = 1"), "{e}");
        assert!(matches!(d_small(1, &names::z(FULL)), Err(BuildError::Dimension { .. })));
        assert!(matches!(r_j(4, 1, &[]), Err(BuildError::FactorCount { expected: 2, got: 0 })));
    }

    #[test]
    fn closed_form_m2_is_rot2() {
        let block = closed_form_block(2, 0, FULL).unwrap();
        assert_eq!(block, build_matrix(&MatrixKind::Rot2, FULL).unwrap());
    }

    #[test]
    fn closed_form_named_entries() {
        let m3 = closed_form_block(3, 0, FULL).unwrap();
        let expected = -&(&(&names::r(2, 0, FULL) * &names::z(FULL)) * &names::v(1, 0, FULL).conj());
        assert_eq!(m3.get(1, 0), &expected);

        let m5 = closed_form_block(5, 1, FULL).unwrap();
        let c13 = -&(&(&names::r(2, 1, FULL) * &names::z(FULL)) * &(&names::v(1, 1, FULL).conj() * &names::v(3, 1, FULL)));
        // c_{1,3;1} sits at 1-based (1+1+1, 3+1+1) = (3, 5)
        assert_eq!(m5.get(2, 4), &c13);
    }

    #[test]
    fn closed_form_is_upper_hessenberg() {
        for m in 2..=6 {
            for j in 0..=m - 2 {
                let b = closed_form_block(m, j, FULL).unwrap();
                for s in 1..=block_len(m, j) {
                    for t in 1..s {
                        assert!(b.get(j + s, j + t).is_zero(), "m={m} j={j} s={s} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn d_j_cap_times_d_is_d_j() {
        for m in 2..=6 {
            for j in 0..=m - 2 {
                let z = names::z(FULL);
                let lhs = d_j_cap(m, j, &z).unwrap().mul(&d_small(m, &z).unwrap()).unwrap();
                assert_eq!(lhs, d_j_small(m, j, &z).unwrap(), "m={m} j={j}");
            }
        }
    }

    #[test]
    fn conj_transpose_rot2_is_inverse() {
        let r = build_matrix(&MatrixKind::Rot2, FULL).unwrap();
        let prod = r.conj_transpose().mul(&r).unwrap();
        assert_eq!(prod, SymMatrix::identity(2, FULL));
        assert!(r.det().unwrap().is_one());
    }

    #[test]
    fn all_kinds_build() {
        for m in 2..=5 {
            for kind in MatrixKind::all_for(m) {
                let built = build_matrix(&kind, FULL).unwrap();
                assert_eq!(built.dim(), if kind == MatrixKind::Rot2 { 2 } else { m });
                assert!(built.entries().iter().all(Polynomial::is_normal));
            }
        }
    }
}
