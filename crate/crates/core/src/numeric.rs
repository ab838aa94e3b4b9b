//! Floating-point cell maps into `SU(m)`, coset comparison modulo the
//! circle subgroups, coordinate recovery, and sampling trials.

use std::f64::consts::TAU;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Unitarity and determinant tolerance for [`UnitaryMatrix`].
pub const UNITARY_TOL: f64 = 1e-10;
/// Smallest `r` product the recovery divides by.
pub const RECOVERY_MIN_PRODUCT: f64 = 1e-8;
/// Residual accepted after peeling every block off a canonical representative.
pub const RECOVERY_RESIDUAL_TOL: f64 = 1e-8;
/// Coset tolerance used by collision trials.
pub const COLLISION_TOL: f64 = 1e-6;
/// Radial floor for roundtrip trials.
pub const ROUNDTRIP_R_FLOOR: f64 = 0.3;
/// Radial floor for collision trials.
pub const COLLISION_R_FLOOR: f64 = 1e-3;
/// Minimum arc between `z_{2k-1}` and `1` on open torus cells.
pub const TORUS_ARC_FLOOR: f64 = 1e-3;

const UNIT_NORM_TOL: f64 = 1e-12;

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn c1() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("matrix is not in SU({m}): unitarity residual {unitary:e}, det residual {det:e}")]
    NotUnitary { m: usize, unitary: f64, det: f64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("subgroup S x C needs odd m >= 3, got m = {0}")]
    OddDimensionRequired(usize),
    #[error("{map} needs {requirement}, got m = {m}")]
    MapPrecondition { map: &'static str, requirement: &'static str, m: usize },
    #[error("invalid cell point: {0}")]
    InvalidPoint(String),
    #[error("ill-conditioned recovery at block j = {j}: r product {product:e} below {RECOVERY_MIN_PRODUCT:e}")]
    IllConditioned { j: usize, product: f64 },
    #[error("not a canonical representative: residual {residual:e} after peeling all blocks")]
    NotCanonical { residual: f64 },
}

/// One sphere coordinate `(r, w)` of the factor `R_{i;j}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereCoord {
    pub i: usize,
    pub j: usize,
    pub r: f64,
    pub w: Complex64,
}

/// One torus coordinate `(z_{2k-1}, zeta_{2k})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusCoord {
    pub k: usize,
    pub z_odd: Complex64,
    pub zeta_even: Complex64,
}

/// A point of `(S^2)^{(m^2-m)/2}`, optionally times `T^{n-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellPoint {
    pub m: usize,
    /// Ordered by `j`, then `i`.
    pub sphere: Vec<SphereCoord>,
    pub torus: Option<Vec<TorusCoord>>,
}

impl CellPoint {
    /// Every `r = 1`, `w = 0`.
    pub fn base(m: usize) -> Self {
        CellPoint { m, sphere: sphere_indices(m).map(|(i, j)| SphereCoord { i, j, r: 1.0, w: c0() }).collect(), torus: None }
    }

    pub fn without_torus(mut self) -> Self {
        self.torus = None;
        self
    }

    pub fn coord(&self, i: usize, j: usize) -> Option<&SphereCoord> {
        self.sphere.iter().find(|c| c.i == i && c.j == j)
    }

    /// Number of real parameters: two per sphere and two per torus factor.
    pub fn real_dimension(&self) -> usize {
        2 * self.sphere.len() + 2 * self.torus.as_ref().map_or(0, Vec::len)
    }

    pub fn validate(&self) -> Result<(), NumericError> {
        let expected: Vec<_> = sphere_indices(self.m).collect();
        let got: Vec<_> = self.sphere.iter().map(|c| (c.i, c.j)).collect();
        if expected != got {
            return Err(NumericError::InvalidPoint(format!("sphere indices {got:?} do not match m = {}", self.m)));
        }
        for c in &self.sphere {
            if !(0.0..=1.0).contains(&c.r) || (c.r * c.r + c.w.norm_sqr() - 1.0).abs() > UNIT_NORM_TOL {
                return Err(NumericError::InvalidPoint(format!("({}, {}) has r = {}, |w| = {}", c.i, c.j, c.r, c.w.norm())));
            }
        }
        if let Some(t) = &self.torus {
            if t.len() != torus_len(self.m) || t.iter().enumerate().any(|(idx, c)| c.k != idx + 1) {
                return Err(NumericError::InvalidPoint("torus indices must be 1..=n-1".into()));
            }
            for c in t {
                if (c.z_odd.norm() - 1.0).abs() > UNIT_NORM_TOL || (c.zeta_even.norm() - 1.0).abs() > UNIT_NORM_TOL {
                    return Err(NumericError::InvalidPoint(format!("torus coordinate k = {} is off the circle", c.k)));
                }
            }
        }
        Ok(())
    }

    /// Largest coordinatewise distance to another point of the same shape.
    pub fn distance(&self, other: &CellPoint) -> f64 {
        let s = self
            .sphere
            .iter()
            .zip(&other.sphere)
            .map(|(a, b)| (a.r - b.r).abs().max((a.w - b.w).norm()))
            .fold(0.0, f64::max);
        let t = match (&self.torus, &other.torus) {
            (Some(a), Some(b)) => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x.z_odd - y.z_odd).norm().max((x.zeta_even - y.zeta_even).norm()))
                .fold(0.0, f64::max),
            _ => 0.0,
        };
        s.max(t)
    }
}

/// `(i, j)` pairs in block order.
pub fn sphere_indices(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m.saturating_sub(1)).flat_map(move |j| (1..m - j).map(move |i| (i, j)))
}

/// `n - 1` for `m = 2n` or `2n + 1`.
pub fn torus_len(m: usize) -> usize {
    (m / 2).saturating_sub(1)
}

/// Real dimension of `G/S` for even `m`, of `G/(S x C)` for odd `m`.
pub fn quotient_dimension(m: usize) -> usize {
    if m.is_multiple_of(2) {
        m * m - 2
    } else {
        m * m - 3
    }
}

/// Real parameter count of the full cell `(S^2)^{(m^2-m)/2} x T^{n-1}`.
pub fn cell_dimension(m: usize) -> usize {
    (m * m - m) + 2 * torus_len(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(DMatrix<Complex64>);

impl UnitaryMatrix {
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self, NumericError> {
        let (unitary, det) = su_residuals(&mat);
        if unitary > UNITARY_TOL || det > UNITARY_TOL {
            return Err(NumericError::NotUnitary { m: mat.nrows(), unitary, det });
        }
        Ok(UnitaryMatrix(mat))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn adjoint(&self) -> DMatrix<Complex64> {
        self.0.adjoint()
    }

    /// `(max |U U* - I|, |det U - 1|)`.
    pub fn residuals(&self) -> (f64, f64) {
        su_residuals(&self.0)
    }
}

fn su_residuals(mat: &DMatrix<Complex64>) -> (f64, f64) {
    let m = mat.nrows();
    if mat.ncols() != m {
        return (f64::INFINITY, f64::INFINITY);
    }
    let gram = mat * mat.adjoint() - DMatrix::identity(m, m);
    let unitary = gram.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let det = (mat.clone().determinant() - c1()).norm();
    (unitary, det)
}

/// `d(z) = diag(conj(z)^(m-1), z, ..., z)`.
pub fn d_small_matrix(m: usize, z: Complex64) -> DMatrix<Complex64> {
    let mut diag = vec![z; m];
    diag[0] = z.conj().powu(m as u32 - 1);
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
}

/// `diag(1, ..., 1, zeta, conj(zeta))`.
pub fn c_matrix(m: usize, zeta: Complex64) -> DMatrix<Complex64> {
    let mut out = DMatrix::identity(m, m);
    out[(m - 2, m - 2)] = zeta;
    out[(m - 1, m - 1)] = zeta.conj();
    out
}

/// `D(a, b) = diag(1 (2k-1 times), a, conj(a) b, conj(b), 1, ...)`.
pub fn d_pair_matrix(m: usize, k: usize, a: Complex64, b: Complex64) -> DMatrix<Complex64> {
    let mut out = DMatrix::identity(m, m);
    out[(2 * k - 1, 2 * k - 1)] = a;
    out[(2 * k, 2 * k)] = a.conj() * b;
    out[(2 * k + 1, 2 * k + 1)] = b.conj();
    out
}

/// `R_{i;j}(r, w)` with real `r`: block `[[r, w], [-conj w, r]]` on rows `j`, `j + i`.
pub fn rotation_matrix(m: usize, i: usize, j: usize, r: f64, w: Complex64) -> DMatrix<Complex64> {
    let mut out = DMatrix::identity(m, m);
    let (p, q) = (j, j + i);
    out[(p, p)] = Complex64::new(r, 0.0);
    out[(p, q)] = w;
    out[(q, p)] = -w.conj();
    out[(q, q)] = Complex64::new(r, 0.0);
    out
}

/// `prod_i R_{i;j}(r_i, w_i)` for one block.
fn block_product(m: usize, j: usize, coords: &[SphereCoord]) -> DMatrix<Complex64> {
    coords
        .iter()
        .filter(|c| c.j == j)
        .fold(DMatrix::identity(m, m), |acc, c| acc * rotation_matrix(m, c.i, j, c.r, c.w))
}

/// Representative `prod_j prod_i R_{i;j}(r, w) prod_k D(z_{2k-1}, zeta_{2k})`.
pub fn eval_cell_map(x: &CellPoint) -> Result<UnitaryMatrix, NumericError> {
    x.validate()?;
    let m = x.m;
    let mut acc = (0..m - 1).fold(DMatrix::identity(m, m), |acc, j| acc * block_product(m, j, &x.sphere));
    if let Some(t) = &x.torus {
        for c in t {
            acc *= d_pair_matrix(m, c.k, c.z_odd, c.zeta_even);
        }
    }
    UnitaryMatrix::new(acc)
}

fn random_unit(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..TAU))
}

fn sample_sphere(rng: &mut impl Rng, i: usize, j: usize, open_only: bool, r_floor: f64) -> SphereCoord {
    let r: f64 = if open_only {
        loop {
            let r = rng.random_range(r_floor..=1.0);
            if r > 0.0 {
                break r;
            }
        }
    } else {
        rng.random_range(0.0..=1.0)
    };
    let w = if r == 0.0 { c1() } else { Complex64::from_polar((1.0 - r * r).max(0.0).sqrt(), rng.random_range(0.0..TAU)) };
    SphereCoord { i, j, r, w }
}

fn sample_with(rng: &mut impl Rng, m: usize, open_only: bool, r_floor: f64) -> CellPoint {
    let sphere = sphere_indices(m).map(|(i, j)| sample_sphere(rng, i, j, open_only, r_floor)).collect();
    let torus = (m >= 4).then(|| {
        (1..=torus_len(m))
            .map(|k| {
                let eta = if open_only {
                    rng.random_range(TORUS_ARC_FLOOR..=TAU - TORUS_ARC_FLOOR)
                } else {
                    rng.random_range(0.0..TAU)
                };
                TorusCoord { k, z_odd: Complex64::from_polar(1.0, eta), zeta_even: random_unit(rng) }
            })
            .collect()
    });
    CellPoint { m, sphere, torus }
}

/// Seeded sample; torus coordinates are included when `m >= 4`.
pub fn sample_cell(m: usize, seed: u64, open_only: bool, r_floor: f64) -> CellPoint {
    assert!((0.0..1.0).contains(&r_floor), "r_floor must lie in [0, 1)");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(&mut rng, m, open_only, r_floor)
}

/// Which circle subgroup to quotient by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subgroup {
    S,
    STimesC,
}

/// How far `g* h` is from the subgroup pattern; `0` for an exact coset match.
pub fn coset_distance(g: &UnitaryMatrix, h: &UnitaryMatrix, subgroup: Subgroup) -> Result<f64, NumericError> {
    let m = g.dim();
    if h.dim() != m {
        return Err(NumericError::DimensionMismatch(m, h.dim()));
    }
    if subgroup == Subgroup::STimesC && (m < 3 || m.is_multiple_of(2)) {
        return Err(NumericError::OddDimensionRequired(m));
    }
    let k = g.adjoint() * h.matrix();
    let mut off = 0.0f64;
    for r in 0..m {
        for c in 0..m {
            if r != c {
                off = off.max(k[(r, c)].norm());
            }
        }
    }
    let d: Vec<Complex64> = (0..m).map(|i| k[(i, i)]).collect();
    let pattern = |z: Complex64, zeta: Option<Complex64>| -> f64 {
        let mut expected = vec![z; m];
        expected[0] = z.conj().powu(m as u32 - 1);
        if let Some(zeta) = zeta {
            expected[m - 2] = z * zeta;
            expected[m - 1] = z * zeta.conj();
        }
        d.iter().zip(&expected).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    };
    let diag = match subgroup {
        Subgroup::S => pattern(unitize(d[1]), None),
        Subgroup::STimesC if m >= 5 => {
            let z = unitize(d[1]);
            pattern(z, Some(unitize(d[m - 2] * z.conj())))
        }
        Subgroup::STimesC => {
            // m = 3: z^2 = d_1 d_2, both roots describe the same element
            let root = (d[1] * d[2]).sqrt();
            [root, -root]
                .into_iter()
                .map(|z| {
                    let z = unitize(z);
                    pattern(z, Some(unitize(d[1] * z.conj())))
                })
                .fold(f64::INFINITY, f64::min)
        }
    };
    Ok(off.max(diag))
}

fn unitize(z: Complex64) -> Complex64 {
    if z.norm() < 1e-300 {
        c1()
    } else {
        z / z.norm()
    }
}

/// Whether `g` and `h` lie in the same right coset of the subgroup.
pub fn coset_equal(g: &UnitaryMatrix, h: &UnitaryMatrix, subgroup: Subgroup, tol: f64) -> Result<bool, NumericError> {
    Ok(coset_distance(g, h, subgroup)? <= tol)
}

/// Elements of `S` that also lie in `C`, found among the `(m-1)`-th roots of unity.
pub fn s_cap_c_elements(m: usize) -> Vec<DMatrix<Complex64>> {
    assert!(m >= 3, "C needs m >= 3");
    (0..m - 1)
        .map(|t| Complex64::from_polar(1.0, TAU * t as f64 / (m - 1) as f64))
        .map(|z| d_small_matrix(m, z))
        .filter(|d| {
            let zeta = d[(m - 2, m - 2)];
            (d - c_matrix(m, zeta)).iter().all(|e| e.norm() < 1e-12)
        })
        .collect()
}

/// Reads the sphere coordinates back off `prod_j R_j(r, w)`.
///
/// Works block by block: the first column of the remaining product holds
/// `r_1...r_{m_j}` on the diagonal and `-r_{s+1}...r_{m_j} conj(w_s)` below it,
/// so `w` is recovered from the bottom up and the block is peeled off.
pub fn recover_cell(g: &UnitaryMatrix, m: usize) -> Result<CellPoint, NumericError> {
    if g.dim() != m {
        return Err(NumericError::DimensionMismatch(m, g.dim()));
    }
    let mut rest = g.matrix().clone();
    let mut sphere = Vec::new();
    for j in 0..m - 1 {
        let mj = m - j - 1;
        let mut coords = vec![SphereCoord { i: 0, j, r: 0.0, w: c0() }; mj];
        let mut tail = 1.0f64;
        for s in (1..=mj).rev() {
            if tail < RECOVERY_MIN_PRODUCT {
                return Err(NumericError::IllConditioned { j, product: tail });
            }
            let a = rest[(j + s, j)];
            let w = -a.conj() / tail;
            let r = (1.0 - w.norm_sqr()).max(0.0).sqrt();
            coords[s - 1] = SphereCoord { i: s, j, r, w };
            tail *= r;
        }
        rest = block_product(m, j, &coords).adjoint() * rest;
        sphere.extend(coords);
    }
    let residual = (rest - DMatrix::identity(m, m)).iter().map(|c| c.norm()).fold(0.0, f64::max);
    if residual > RECOVERY_RESIDUAL_TOL {
        return Err(NumericError::NotCanonical { residual });
    }
    Ok(CellPoint { m, sphere, torus: None })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trials: usize,
    pub failures: usize,
    /// Roundtrip: largest coordinate error. Collision: smallest coset distance seen.
    pub worst_error: f64,
    pub seed: u64,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Independent generator for trial `t` of a seeded run.
fn trial_rng(seed: u64, t: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t as u64);
    rng
}

/// Samples open cells with `r >= 0.3`, evaluates, recovers and compares.
pub fn roundtrip_trial(m: usize, trials: usize, seed: u64, tol: f64) -> TrialReport {
    assert!(m >= 2, "m must be at least 2");
    let started = Instant::now();
    let outcomes: Vec<(f64, Option<String>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let x = sample_with(&mut trial_rng(seed, t), m, true, ROUNDTRIP_R_FLOOR).without_torus();
            let result = eval_cell_map(&x).and_then(|g| recover_cell(&g, m));
            match result {
                Ok(y) => (x.distance(&y), None),
                Err(e) => (f64::INFINITY, Some(format!("trial {t}: {e}"))),
            }
        })
        .collect();
    let failures = outcomes.iter().filter(|(e, _)| *e > tol).count();
    let worst_error = outcomes.iter().map(|(e, _)| *e).fold(0.0, f64::max);
    let witness = outcomes.iter().find_map(|(_, w)| w.clone()).or_else(|| {
        outcomes.iter().position(|(e, _)| *e > tol).map(|t| format!("trial {t}: error {:e}", outcomes[t].0))
    });
    TrialReport { trials, failures, worst_error, seed, elapsed_ms: started.elapsed().as_millis() as u64, witness }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    Phi,
    Psi,
    PsiModC,
}

impl MapKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MapKind::Phi => "phi",
            MapKind::Psi => "psi",
            MapKind::PsiModC => "psi-mod-c",
        }
    }

    fn subgroup(self) -> Subgroup {
        match self {
            MapKind::PsiModC => Subgroup::STimesC,
            _ => Subgroup::S,
        }
    }

    fn check(self, m: usize) -> Result<(), NumericError> {
        let (ok, requirement) = match self {
            MapKind::Phi => (m >= 2, "m >= 2"),
            MapKind::Psi => (m >= 4, "m >= 4 (torus coordinates)"),
            MapKind::PsiModC => (m >= 3 && m % 2 == 1, "odd m >= 3"),
        };
        if ok {
            Ok(())
        } else {
            Err(NumericError::MapPrecondition { map: self.as_str(), requirement, m })
        }
    }

    fn prepare(self, x: CellPoint) -> CellPoint {
        match self {
            MapKind::Phi => x.without_torus(),
            _ => x,
        }
    }
}

impl std::str::FromStr for MapKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "phi" => Ok(MapKind::Phi),
            "psi" => Ok(MapKind::Psi),
            "psi-mod-c" => Ok(MapKind::PsiModC),
            other => Err(format!("unknown map {other:?} (expected phi, psi or psi-mod-c)")),
        }
    }
}

/// Coset distance between the images of two points under `map`.
pub fn image_distance(x: &CellPoint, y: &CellPoint, map: MapKind) -> Result<f64, NumericError> {
    map.check(x.m)?;
    let g = eval_cell_map(&map.prepare(x.clone()))?;
    let h = eval_cell_map(&map.prepare(y.clone()))?;
    coset_distance(&g, &h, map.subgroup())
}

/// Whether two points collide under `map` at [`COLLISION_TOL`].
pub fn detect_collision(x: &CellPoint, y: &CellPoint, map: MapKind) -> Result<bool, NumericError> {
    Ok(image_distance(x, y, map)? <= COLLISION_TOL)
}

/// Samples `trials` pairs of distinct open-cell points and counts coset collisions.
pub fn collision_trial(m: usize, trials: usize, seed: u64, map: MapKind) -> Result<TrialReport, NumericError> {
    map.check(m)?;
    let started = Instant::now();
    let outcomes: Vec<Result<(f64, bool), NumericError>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let x = sample_with(&mut rng, m, true, COLLISION_R_FLOOR);
            let y = sample_with(&mut rng, m, true, COLLISION_R_FLOOR);
            let distinct = map.prepare(x.clone()).distance(&map.prepare(y.clone())) > 0.0;
            Ok((image_distance(&x, &y, map)?, distinct))
        })
        .collect();
    let mut failures = 0;
    let mut closest = f64::INFINITY;
    let mut witness = None;
    for (t, o) in outcomes.into_iter().enumerate() {
        let (d, distinct) = o?;
        closest = closest.min(d);
        if distinct && d <= COLLISION_TOL {
            failures += 1;
            witness.get_or_insert_with(|| format!("trial {t}: coset distance {d:e}"));
        }
    }
    Ok(TrialReport {
        trials,
        failures,
        worst_error: closest,
        seed,
        elapsed_ms: started.elapsed().as_millis() as u64,
        witness,
    })
}
