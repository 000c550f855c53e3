//! Eigenvalue curve families in the (Tsallis-2, von Neumann) plane, the entropy versus
//! largest-eigenvalue boundary, and the state-dependent entropic uncertainty bound.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::entropy::{shannon_entropy, spectrum_entropy, tsallis2_spectrum, EntropyConfig};
use crate::error::{Error, Result};
use crate::hermitian::{CMatrix, ComplexMatrix, DensityMatrix, Spectrum};
use crate::states::haar_unitary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// `(λ₁, 1-λ₁, 0, …)`
    QubitLower,
    /// `d-2` equal leading entries, one smaller entry, one zero.
    LowerIntermediate,
    /// `d-1` equal leading entries and one smaller entry.
    LowerUpper,
    /// One leading entry, `d-2` equal entries, one zero.
    MiddleIntermediate,
    /// One leading entry and `d-1` equal entries.
    UpperDegenerate,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::QubitLower,
        FamilyKind::LowerIntermediate,
        FamilyKind::LowerUpper,
        FamilyKind::MiddleIntermediate,
        FamilyKind::UpperDegenerate,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            FamilyKind::QubitLower => "qubit_lower",
            FamilyKind::LowerIntermediate => "lower_intermediate",
            FamilyKind::LowerUpper => "lower_upper",
            FamilyKind::MiddleIntermediate => "middle_intermediate",
            FamilyKind::UpperDegenerate => "upper_degenerate",
        }
    }

    pub fn min_dim(&self) -> usize {
        match self {
            FamilyKind::LowerIntermediate | FamilyKind::MiddleIntermediate => 4,
            _ => 2,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        FamilyKind::ALL
            .iter()
            .copied()
            .find(|k| k.label() == s)
            .ok_or_else(|| format!("unknown curve family `{s}`"))
    }
}

/// A curve family bound to a dimension; the intermediate families use `m = n = d - 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurveFamily {
    pub kind: FamilyKind,
    pub dim: usize,
}

impl CurveFamily {
    pub fn new(kind: FamilyKind, dim: usize) -> Result<Self> {
        if dim < kind.min_dim() {
            return Err(Error::FamilyInvalidForDim {
                family: kind.label().into(),
                dim,
            });
        }
        Ok(Self { kind, dim })
    }

    /// Every family defined for `d`, in canonical order.
    pub fn all_for(dim: usize) -> Vec<CurveFamily> {
        FamilyKind::ALL
            .iter()
            .filter_map(|&k| CurveFamily::new(k, dim).ok())
            .collect()
    }

    /// The `m` (or `n`) index of the intermediate families.
    pub fn intermediate_index(&self) -> Option<usize> {
        match self.kind {
            FamilyKind::LowerIntermediate | FamilyKind::MiddleIntermediate => Some(self.dim - 3),
            _ => None,
        }
    }
}

/// Spectrum at parameter `t ∈ [0, 1]`: `t = 0` is the most uniform end, `t = 1` the most peaked.
pub fn family_spectrum(f: &CurveFamily, t: f64) -> Result<Spectrum> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange { value: t, lo: 0.0, hi: 1.0 });
    }
    let d = f.dim;
    let df = d as f64;
    let mut v = vec![0.0; d];
    match f.kind {
        FamilyKind::QubitLower => {
            let l1 = 0.5 + 0.5 * t;
            v[0] = l1;
            v[1] = 1.0 - l1;
        }
        FamilyKind::LowerIntermediate => {
            // (d-2) λ_e + λ_{d-1} = 1, λ_{d-1} from λ_e down to 0
            let small = (1.0 - t) / (df - 1.0);
            let equal = (1.0 - small) / (df - 2.0);
            v[..d - 2].fill(equal);
            v[d - 2] = small;
        }
        FamilyKind::LowerUpper => {
            let small = (1.0 - t) / df;
            let equal = (1.0 - small) / (df - 1.0);
            v[..d - 1].fill(equal);
            v[d - 1] = small;
        }
        FamilyKind::MiddleIntermediate => {
            let lo = 1.0 / (df - 1.0);
            let l1 = lo + t * (1.0 - lo);
            let equal = (1.0 - l1) / (df - 2.0);
            v[0] = l1;
            v[1..d - 1].fill(equal);
        }
        FamilyKind::UpperDegenerate => {
            let lo = 1.0 / df;
            let l1 = lo + t * (1.0 - lo);
            v[0] = l1;
            v[1..].fill((1.0 - l1) / (df - 1.0));
        }
    }
    Spectrum::new(v)
}

/// Point in the `(S₂, S_vN)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanePoint {
    pub s2: f64,
    pub svn: f64,
}

pub fn plane_point(lambda: &Spectrum, cfg: &EntropyConfig) -> PlanePoint {
    PlanePoint {
        s2: tsallis2_spectrum(lambda),
        svn: spectrum_entropy(lambda, cfg),
    }
}

/// `count` uniformly spaced parameters `t_i = i/(count-1)` mapped into the plane.
pub fn boundary_samples(f: &CurveFamily, count: usize, cfg: &EntropyConfig) -> Result<Vec<(f64, PlanePoint)>> {
    if count < 2 {
        return Err(Error::OutOfRange {
            value: count as f64,
            lo: 2.0,
            hi: f64::INFINITY,
        });
    }
    (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            Ok((t, plane_point(&family_spectrum(f, t)?, cfg)))
        })
        .collect()
}

/// Piecewise-linear `S_vN(S₂)` through boundary samples.
#[derive(Debug, Clone)]
pub struct Polyline {
    /// Sorted by `s2`.
    points: Vec<PlanePoint>,
}

impl Polyline {
    pub fn new(mut points: Vec<PlanePoint>) -> Self {
        points.sort_by(|a, b| a.s2.total_cmp(&b.s2));
        Self { points }
    }

    pub fn from_family(f: &CurveFamily, count: usize, cfg: &EntropyConfig) -> Result<Self> {
        Ok(Self::new(boundary_samples(f, count, cfg)?.into_iter().map(|(_, p)| p).collect()))
    }

    pub fn s2_range(&self) -> (f64, f64) {
        (self.points[0].s2, self.points[self.points.len() - 1].s2)
    }

    /// Interpolated `S_vN` at `s2`, or `None` outside the sampled range (with `slack`).
    pub fn svn_at(&self, s2: f64, slack: f64) -> Option<f64> {
        let (lo, hi) = self.s2_range();
        if s2 < lo - slack || s2 > hi + slack {
            return None;
        }
        let s2 = s2.clamp(lo, hi);
        let idx = self.points.partition_point(|p| p.s2 < s2);
        if idx == 0 {
            return Some(self.points[0].svn);
        }
        if idx >= self.points.len() {
            return Some(self.points[self.points.len() - 1].svn);
        }
        let (a, b) = (self.points[idx - 1], self.points[idx]);
        if b.s2 == a.s2 {
            return Some(a.svn.min(b.svn));
        }
        let w = (s2 - a.s2) / (b.s2 - a.s2);
        Some(a.svn + w * (b.svn - a.svn))
    }
}

/// Where a plane point sits relative to the qubit-lower and upper-degenerate polylines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Containment {
    /// `svn - lower(s2)`, or `None` when `s2` lies beyond the qubit curve's range.
    pub lower_margin: Option<f64>,
    /// `upper(s2) - svn`.
    pub upper_margin: f64,
}

impl Containment {
    pub fn holds(&self, slack: f64) -> bool {
        self.lower_margin.is_none_or(|m| m >= -slack) && self.upper_margin >= -slack
    }
}

/// `S_vN` on the family curve at the point where its `S₂` equals `s2`, found by bisection
/// on the family parameter. `None` when `s2` lies outside the curve's range.
pub fn family_svn_at(f: &CurveFamily, s2: f64, cfg: &EntropyConfig) -> Result<Option<f64>> {
    let at = |t: f64| family_spectrum(f, t).map(|l| plane_point(&l, cfg));
    let (first, last) = (at(0.0)?, at(1.0)?);
    if s2 > first.s2 || s2 < last.s2 {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if at(mid)?.s2 >= s2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (a, b) = (at(lo)?, at(hi)?);
    if a.s2 == b.s2 {
        return Ok(Some(a.svn.min(b.svn)));
    }
    let w = (s2 - a.s2) / (b.s2 - a.s2);
    Ok(Some(a.svn + w * (b.svn - a.svn)))
}

/// The qubit-lower and upper-degenerate curves in dimension `d`, with sampled polylines for output.
#[derive(Debug, Clone)]
pub struct PlaneEnvelope {
    pub lower: Polyline,
    pub upper: Polyline,
    lower_family: CurveFamily,
    upper_family: CurveFamily,
    cfg: EntropyConfig,
}

impl PlaneEnvelope {
    pub fn new(d: usize, samples: usize, cfg: &EntropyConfig) -> Result<Self> {
        let lower_family = CurveFamily::new(FamilyKind::QubitLower, d)?;
        let upper_family = CurveFamily::new(FamilyKind::UpperDegenerate, d)?;
        Ok(Self {
            lower: Polyline::from_family(&lower_family, samples, cfg)?,
            upper: Polyline::from_family(&upper_family, samples, cfg)?,
            lower_family,
            upper_family,
            cfg: *cfg,
        })
    }

    /// Margins against the exact curves (not the sampled polylines).
    pub fn locate(&self, p: PlanePoint) -> Containment {
        let eval = |f: &CurveFamily, s2: f64| family_svn_at(f, s2, &self.cfg).ok().flatten();
        let (_, top) = self.upper.s2_range();
        Containment {
            lower_margin: eval(&self.lower_family, p.s2).map(|l| p.svn - l),
            upper_margin: (p.s2 <= top + 1e-12)
                .then(|| eval(&self.upper_family, p.s2.min(top)))
                .flatten()
                .map_or(f64::NEG_INFINITY, |u| u - p.svn),
        }
    }
}

/// `(x, y) = (-[a log a + (1-a) log((1-a)/(d-1))], 1 - a)` for `a ∈ [1/d, 1]`.
pub fn eur_curve_point(d: usize, a: f64, cfg: &EntropyConfig) -> Result<(f64, f64)> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let lo = 1.0 / d as f64;
    if !(a >= lo - 1e-15 && a <= 1.0) {
        return Err(Error::OutOfRange { value: a, lo, hi: 1.0 });
    }
    let rest = 1.0 - a;
    let x = cfg.surprisal_term(a) + if rest > 0.0 {
        -rest * cfg.log(rest / (d as f64 - 1.0))
    } else {
        0.0
    };
    Ok((x.max(0.0), rest))
}

/// `S_vN(ρ) - (1 - λ_max(ρ))`.
pub fn entropy_lambda_gap(rho: &DensityMatrix, cfg: &EntropyConfig) -> Result<f64> {
    let spec = rho.spectrum()?;
    Ok(spectrum_entropy(&spec, cfg) - (1.0 - spec.max()))
}

/// Orthonormal measurement basis stored as the columns of a unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    vectors: CMatrix,
    label: String,
}

pub const BASIS_TOL: f64 = 1e-8;

impl MeasurementBasis {
    pub fn new(vectors: CMatrix, label: impl Into<String>) -> Result<Self> {
        let (r, c) = vectors.shape();
        if r != c || r == 0 {
            return Err(Error::NotSquare { rows: r, cols: c });
        }
        let gram = vectors.adjoint() * &vectors - CMatrix::identity(r, r);
        let dev = gram.camax();
        if dev > BASIS_TOL {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Self {
            vectors,
            label: label.into(),
        })
    }

    pub fn computational(d: usize) -> Self {
        Self {
            vectors: CMatrix::identity(d, d),
            label: "computational".into(),
        }
    }

    /// `F_jk = e^{2πi jk/d}/√d`; the Hadamard basis for `d = 2`.
    pub fn fourier(d: usize) -> Self {
        let norm = (d as f64).sqrt();
        let vectors = CMatrix::from_fn(d, d, |j, k| {
            let angle = 2.0 * std::f64::consts::PI * ((j * k) % d) as f64 / d as f64;
            Complex64::from_polar(1.0 / norm, angle)
        });
        Self {
            vectors,
            label: "fourier".into(),
        }
    }

    pub fn haar<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        Self {
            vectors: haar_unitary(d, rng),
            label: "haar".into(),
        }
    }

    /// Columns of a matrix in the JSON matrix format, validated for orthonormality.
    pub fn from_matrix(m: &ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        Self::new(m.inner().clone(), label)
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    /// `max_{i,k} |⟨x_i|z_k⟩|`.
    pub fn max_overlap(&self, other: &MeasurementBasis) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(self.dim(), other.dim()));
        }
        Ok((self.vectors.adjoint() * &other.vectors)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }
}

/// `p_i = ⟨b_i|ρ|b_i⟩`.
pub fn measurement_probs(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<Vec<f64>> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimMismatch(rho.dim(), basis.dim()));
    }
    let rotated = basis.vectors.adjoint() * rho.matrix() * &basis.vectors;
    Ok((0..rho.dim()).map(|i| rotated[(i, i)].re.max(0.0)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EurReport {
    pub labels: Vec<String>,
    pub entropies: Vec<f64>,
    pub max_probs: Vec<f64>,
    pub lhs: f64,
    /// `N - Σ_j λ_max^j`
    pub refined_rhs: f64,
    /// `-2 log c`, two bases only.
    pub mu_rhs: Option<f64>,
    /// `Σ_j (1 - λ_max^j)^{1/n}` when a root order is requested; reported, not asserted.
    pub root_rhs: Option<f64>,
    pub holds: bool,
    pub refined_tighter: bool,
}

/// Entropic uncertainty of `rho` across `bases` against the largest-outcome bound and, for two
/// bases, the overlap bound.
pub fn refined_eur_report(
    rho: &DensityMatrix,
    bases: &[MeasurementBasis],
    root_order: Option<u32>,
    cfg: &EntropyConfig,
) -> Result<EurReport> {
    if bases.len() < 2 {
        return Err(Error::TooFewBases(bases.len()));
    }
    let mut entropies = Vec::with_capacity(bases.len());
    let mut max_probs = Vec::with_capacity(bases.len());
    for b in bases {
        let p = measurement_probs(rho, b)?;
        let total: f64 = p.iter().sum();
        let p: Vec<f64> = p.into_iter().map(|x| x / total).collect();
        entropies.push(shannon_entropy(&p, cfg)?);
        max_probs.push(p.iter().copied().fold(0.0, f64::max));
    }
    let lhs: f64 = entropies.iter().sum();
    let refined_rhs = bases.len() as f64 - max_probs.iter().sum::<f64>();
    let mu_rhs = if bases.len() == 2 {
        let c = bases[0].max_overlap(&bases[1])?;
        Some((-2.0 * cfg.log(c)).max(0.0))
    } else {
        None
    };
    let root_rhs = root_order.filter(|&n| n >= 1).map(|n| {
        max_probs
            .iter()
            .map(|&m| (1.0 - m).max(0.0).powf(1.0 / n as f64))
            .sum()
    });
    Ok(EurReport {
        labels: bases.iter().map(|b| b.label.clone()).collect(),
        entropies,
        max_probs,
        lhs,
        refined_rhs,
        mu_rhs,
        root_rhs,
        holds: lhs >= refined_rhs - 1e-9,
        refined_tighter: mu_rhs.is_some_and(|mu| refined_rhs > mu),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{validate_density, ComplexMatrix};

    const LOG2_6: f64 = 2.584962500721156;

    #[test]
    fn family_endpoints() {
        let f = CurveFamily::new(FamilyKind::UpperDegenerate, 4).unwrap();
        assert_eq!(family_spectrum(&f, 1.0).unwrap().values(), &[1.0, 0.0, 0.0, 0.0]);
        let s = family_spectrum(&f, 0.0).unwrap();
        assert!(s.values().iter().all(|&v| (v - 0.25).abs() < 1e-15));
        assert_eq!(s.rank(1e-12), 4);

        let q = CurveFamily::new(FamilyKind::QubitLower, 4).unwrap();
        let s = family_spectrum(&q, 0.0).unwrap();
        assert_eq!(s.values(), &[0.5, 0.5, 0.0, 0.0]);
        assert_eq!(s.rank(1e-12), 2);
    }

    #[test]
    fn family_constraints_hold_along_the_curve() {
        for d in 4..=7 {
            for f in CurveFamily::all_for(d) {
                for i in 0..=20 {
                    let s = family_spectrum(&f, i as f64 / 20.0).unwrap();
                    let v = s.values();
                    assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                    match f.kind {
                        FamilyKind::QubitLower => assert!(v[2..].iter().all(|&x| x == 0.0)),
                        FamilyKind::LowerIntermediate => {
                            let m = f.intermediate_index().unwrap();
                            assert!(v[..=m].iter().all(|&x| (x - v[0]).abs() < 1e-15));
                            assert!(v[m + 1] <= v[0] + 1e-15);
                            assert_eq!(v[d - 1], 0.0);
                        }
                        FamilyKind::LowerUpper => {
                            assert!(v[..d - 1].iter().all(|&x| (x - v[0]).abs() < 1e-15))
                        }
                        FamilyKind::MiddleIntermediate => {
                            assert!(v[1..d - 1].iter().all(|&x| (x - v[1]).abs() < 1e-15));
                            assert_eq!(v[d - 1], 0.0);
                        }
                        FamilyKind::UpperDegenerate => {
                            assert!(v[1..].iter().all(|&x| (x - v[1]).abs() < 1e-15))
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn intermediate_families_need_d4() {
        assert!(matches!(
            CurveFamily::new(FamilyKind::LowerIntermediate, 3),
            Err(Error::FamilyInvalidForDim { .. })
        ));
        assert_eq!(CurveFamily::all_for(3).len(), 3);
        assert_eq!(CurveFamily::all_for(4).len(), 5);
    }

    #[test]
    fn plane_point_examples() {
        let cfg = EntropyConfig::default();
        let p = plane_point(&Spectrum::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap(), &cfg);
        assert_eq!((p.s2, p.svn), (0.0, 0.0));
        let p = plane_point(&Spectrum::new(vec![0.25; 4]).unwrap(), &cfg);
        assert!((p.s2 - 0.75).abs() < 1e-15 && (p.svn - 2.0).abs() < 1e-15);
        let p = plane_point(&Spectrum::new(vec![0.75, 0.25, 0.0, 0.0]).unwrap(), &cfg);
        assert!((p.s2 - 0.375).abs() < 1e-15);
        assert!((p.svn - 0.811278124459133).abs() < 1e-12);
    }

    #[test]
    fn boundary_sample_ranges() {
        let cfg = EntropyConfig::default();
        let up = boundary_samples(&CurveFamily::new(FamilyKind::UpperDegenerate, 4).unwrap(), 64, &cfg).unwrap();
        assert_eq!(up.len(), 64);
        assert!((up[0].1.svn - 2.0).abs() < 1e-12);
        assert_eq!(up[63].1.svn, 0.0);
        let q = boundary_samples(&CurveFamily::new(FamilyKind::QubitLower, 4).unwrap(), 64, &cfg).unwrap();
        assert!(q.iter().all(|(_, p)| p.svn <= 1.0 + 1e-12));
        assert!(boundary_samples(&CurveFamily::new(FamilyKind::QubitLower, 4).unwrap(), 1, &cfg).is_err());
    }

    #[test]
    fn eur_curve_examples() {
        let cfg = EntropyConfig::default();
        assert_eq!(eur_curve_point(4, 1.0, &cfg).unwrap(), (0.0, 0.0));
        let (x, y) = eur_curve_point(4, 0.25, &cfg).unwrap();
        assert!((x - 2.0).abs() < 1e-12 && (y - 0.75).abs() < 1e-15);
        let (x, y) = eur_curve_point(4, 0.5, &cfg).unwrap();
        assert!((x - (0.5 + 0.5 * LOG2_6)).abs() < 1e-12);
        assert!((x - 1.792481).abs() < 1e-6);
        assert_eq!(y, 0.5);
        let p = plane_point(&Spectrum::new(vec![0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0]).unwrap(), &cfg);
        assert!((p.svn - x).abs() < 1e-12);
        assert!(matches!(eur_curve_point(4, 0.2, &cfg), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn entropy_gap_examples() {
        let cfg = EntropyConfig::default();
        let pure = DensityMatrix::pure(&[1.0.into(), 0.5.into()]).unwrap();
        assert!(entropy_lambda_gap(&pure, &cfg).unwrap().abs() < 1e-12);
        assert!((entropy_lambda_gap(&DensityMatrix::maximally_mixed(4), &cfg).unwrap() - 1.25).abs() < 1e-12);
        let m = ComplexMatrix::from_real_rows(&[&[0.5, 0.25], &[0.25, 0.5]]);
        let rho = validate_density(&m, 1e-10).unwrap();
        assert!((entropy_lambda_gap(&rho, &cfg).unwrap() - 0.561278124459133).abs() < 1e-9);
    }

    #[test]
    fn measurement_prob_examples() {
        let m = ComplexMatrix::from_real_rows(&[&[0.5, 0.25], &[0.25, 0.5]]);
        let rho = validate_density(&m, 1e-10).unwrap();
        assert_eq!(measurement_probs(&rho, &MeasurementBasis::computational(2)).unwrap(), vec![0.5, 0.5]);
        let p = measurement_probs(&DensityMatrix::maximally_mixed(3), &MeasurementBasis::fourier(3)).unwrap();
        assert!(p.iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
        let plus = DensityMatrix::pure(&[1.0.into(), 1.0.into()]).unwrap();
        let p = measurement_probs(&plus, &MeasurementBasis::fourier(2)).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-15 && p[1].abs() < 1e-15);
    }

    #[test]
    fn eur_report_examples() {
        let cfg = EntropyConfig::default();
        let bases = [MeasurementBasis::computational(2), MeasurementBasis::fourier(2)];

        let r = refined_eur_report(&DensityMatrix::maximally_mixed(2), &bases, None, &cfg).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-12);
        assert!((r.refined_rhs - 1.0).abs() < 1e-12);
        assert!((r.mu_rhs.unwrap() - 1.0).abs() < 1e-12);
        assert!(r.holds && !r.refined_tighter);

        let zero = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let r = refined_eur_report(&zero, &bases, Some(2), &cfg).unwrap();
        assert!(r.entropies[0].abs() < 1e-12 && (r.entropies[1] - 1.0).abs() < 1e-12);
        assert!((r.refined_rhs - 0.5).abs() < 1e-12);
        assert!((r.mu_rhs.unwrap() - 1.0).abs() < 1e-12);
        assert!(r.holds && !r.refined_tighter);
        assert!((r.root_rhs.unwrap() - 0.5f64.sqrt()).abs() < 1e-12);

        let same = [MeasurementBasis::fourier(2), MeasurementBasis::fourier(2)];
        let m = ComplexMatrix::from_real_rows(&[&[0.5, 0.25], &[0.25, 0.5]]);
        let rho = validate_density(&m, 1e-10).unwrap();
        let r = refined_eur_report(&rho, &same, None, &cfg).unwrap();
        assert!(r.mu_rhs.unwrap().abs() < 1e-12);
        assert!(r.refined_rhs > 0.0 && r.refined_tighter);

        assert_eq!(
            refined_eur_report(&rho, &bases[..1], None, &cfg).unwrap_err(),
            Error::TooFewBases(1)
        );
        let three = [
            MeasurementBasis::computational(2),
            MeasurementBasis::fourier(2),
            MeasurementBasis::computational(2),
        ];
        assert!(refined_eur_report(&rho, &three, None, &cfg).unwrap().mu_rhs.is_none());
    }

    #[test]
    fn basis_validation() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(matches!(MeasurementBasis::new(m, "bad"), Err(Error::NotOrthonormal(_))));
        assert!(MeasurementBasis::new(MeasurementBasis::fourier(5).vectors().clone(), "f").is_ok());
        let rho = DensityMatrix::maximally_mixed(3);
        assert!(matches!(
            measurement_probs(&rho, &MeasurementBasis::computational(2)),
            Err(Error::DimMismatch(3, 2))
        ));
    }

    #[test]
    fn polyline_interpolation() {
        let line = Polyline::new(vec![
            PlanePoint { s2: 1.0, svn: 2.0 },
            PlanePoint { s2: 0.0, svn: 0.0 },
        ]);
        assert_eq!(line.svn_at(0.5, 0.0), Some(1.0));
        assert_eq!(line.svn_at(1.5, 0.0), None);
    }
}
