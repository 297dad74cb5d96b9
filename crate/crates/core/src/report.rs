//! Machine-readable reports shared by the command-line tool and the web demo.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp_laurent::{ExponentVec, LaurentPoly, PolyJson};
use crate::mixing_analysis::{frobenius_certificate, mixing_bounds, MixingBounds, Tightness};
use crate::newton_polytope::hull;
use crate::parallel_redraw::{redraw_space, Skeleton};
use crate::sequence_geometry::{detect_redrawing, snap_to_homothety, RedrawMatch, SnappedTuple};

pub const DEFAULT_K_MAX: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolytopeSummary {
    pub vertex_count: usize,
    pub affine_dim: usize,
    pub vertices: Vec<ExponentVec>,
    pub edges: Vec<[usize; 2]>,
    pub tightness: Tightness,
    /// Dimension of the parallel-redrawing space, when computed.
    pub redraw_dimension: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateSummary {
    pub k_max: u32,
    pub verified_k: Vec<u32>,
    pub frobenius_family: bool,
    /// Largest exponent appearing in the last verified relation.
    pub largest_exponent: ExponentVec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub input: String,
    pub polynomial: PolyJson,
    pub support: Vec<ExponentVec>,
    pub polytope: PolytopeSummary,
    pub bounds: MixingBounds,
    pub certificate: CertificateSummary,
    pub warnings: Vec<String>,
}

/// Support, hull, tightness, bounds and a Frobenius certificate up to `k_max`.
pub fn analyze(f: &LaurentPoly, k_max: u32) -> Result<AnalysisReport> {
    let bounds = mixing_bounds(f)?;
    let support = f.support();
    let poly = hull(&support)?;
    let redraw_dimension = if poly.affine_dim <= 3 {
        Some(redraw_space(&Skeleton::from_polytope(&poly)?)?.dimension)
    } else {
        None
    };
    let cert = frobenius_certificate(f, k_max)?;
    let largest_exponent = f
        .frobenius_power(k_max)
        .max_exponents()
        .ok_or(Error::ZeroPolynomial)?;
    let mut warnings = vec!["irreducibility of f is assumed by the caller and not verified".to_string()];
    if bounds.polytope_tight == Tightness::Undetermined {
        warnings.push(format!(
            "tightness undetermined: Newton polytope has affine dimension {}",
            poly.affine_dim
        ));
    }
    Ok(AnalysisReport {
        input: f.to_string(),
        polynomial: PolyJson::from(f),
        support: support.iter().cloned().collect(),
        polytope: PolytopeSummary {
            vertex_count: poly.vertex_count(),
            affine_dim: poly.affine_dim,
            vertices: poly.vertices.clone(),
            edges: poly.edges.iter().map(|&(a, b)| [a, b]).collect(),
            tightness: bounds.polytope_tight,
            redraw_dimension,
        },
        bounds,
        certificate: CertificateSummary {
            k_max,
            verified_k: cert.verified_k,
            frobenius_family: cert.frobenius_family,
            largest_exponent,
        },
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DetectReport {
    #[serde(rename = "match")]
    pub found: Option<RedrawMatch>,
    pub snapped: Option<SnappedTuple>,
    /// Why snapping failed, when a redrawing was found but is not a homothety.
    pub snap_failure: Option<String>,
}

/// Detector run followed by an attempt to snap the match to a homothety.
pub fn detect_report(f: &LaurentPoly, tuple: &[ExponentVec], tolerance: u32) -> Result<DetectReport> {
    let found = detect_redrawing(f, tuple, tolerance)?;
    let (snapped, snap_failure) = match &found {
        None => (None, None),
        Some(m) => match snap_to_homothety(m, tuple, f) {
            Ok(s) => (Some(s), None),
            Err(e @ Error::NotHomothetic) => (None, Some(e.to_string())),
            Err(e) => return Err(e),
        },
    };
    Ok(DetectReport { found, snapped, snap_failure })
}

/// Polynomial from its JSON form `{"p", "d", "terms": [{"e", "c"}]}`.
pub fn parse_poly_json(text: &str) -> Result<LaurentPoly> {
    let j: PolyJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    LaurentPoly::try_from(j)
}

/// Process exit code for an error: 1 malformed input, 2 degenerate or
/// trivial input, 3 budget exceeded.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::NotPrime(_)
        | Error::ModulusTooLarge(_)
        | Error::ZeroDimension
        | Error::DimensionMismatch { .. }
        | Error::FieldMismatch(..) => 1,
        Error::BudgetExceeded(_) => 3,
        Error::ZeroPolynomial
        | Error::TrivialQuotient
        | Error::Degenerate(_)
        | Error::NotHomothetic
        | Error::Invalid(_)
        | Error::Internal(_) => 2,
    }
}

/// Pretty JSON; field order follows the struct definitions, so output is
/// byte-identical across runs.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}
