//! Potentials `V ∈ L∞(ℝ)` used by both solvers.
//!
//! The workhorse type is [`PiecewiseConstantPotential`]: finitely many
//! constant steps on half-open intervals `[a, b)`, zero elsewhere, hence
//! compactly supported. The transfer-matrix solver requires this form.
//! [`AnalyticPotential`] adds exact closed forms — zero, quadratic
//! `coeff·x²`, and `sin(x)/x` — used by the oracle tests and the
//! exploratory non-compact sweep; the quadratic and sinc forms are not
//! compactly supported and are rejected by operations that need a support
//! radius.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Validation and support errors for potential construction and queries.
#[derive(Debug, Error, PartialEq)]
pub enum PotentialError {
    /// Pieces must satisfy `a_i < b_i ≤ a_{i+1}`.
    #[error("piece {index} starting at {a} overlaps or precedes previous piece ending at {prev_b}")]
    UnsortedPieces { index: usize, a: f64, prev_b: f64 },
    /// A piece with `b ≤ a` covers no interval.
    #[error("piece {index} has empty or inverted interval [{a}, {b})")]
    EmptyPiece { index: usize, a: f64, b: f64 },
    /// Endpoints and values must be finite numbers.
    #[error("piece {index} has a non-finite endpoint or value")]
    NonFinitePiece { index: usize },
    /// `V(x) = 0·x²` is the zero potential, not a quadratic one.
    #[error("quadratic coefficient must be nonzero and finite")]
    BadQuadraticCoefficient,
    /// Raised when an operation needs compact support (e.g. a support
    /// radius for the transfer-matrix solver) but the potential has none.
    #[error("potential does not have compact support")]
    NonCompactSupport,
}

/// One constant step: value `v` on the half-open interval `[a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    /// Left endpoint (inclusive).
    pub a: f64,
    /// Right endpoint (exclusive).
    pub b: f64,
    /// Potential value on the interval.
    pub v: f64,
}

/// Compactly supported piecewise-constant potential.
///
/// Pieces are kept sorted and non-overlapping (`a_i < b_i ≤ a_{i+1}`);
/// the potential is zero on gaps between pieces and outside all of them.
/// The empty list is the zero potential with support radius 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PiecewiseConstantPotential {
    pieces: Vec<Piece>,
}

impl PiecewiseConstantPotential {
    /// Validates ordering, disjointness, and finiteness of `pieces`.
    pub fn new(pieces: Vec<Piece>) -> Result<Self, PotentialError> {
        for (index, piece) in pieces.iter().enumerate() {
            if !(piece.a.is_finite() && piece.b.is_finite() && piece.v.is_finite()) {
                return Err(PotentialError::NonFinitePiece { index });
            }
            if piece.b <= piece.a {
                return Err(PotentialError::EmptyPiece {
                    index,
                    a: piece.a,
                    b: piece.b,
                });
            }
            if index > 0 {
                let prev_b = pieces[index - 1].b;
                if piece.a < prev_b {
                    return Err(PotentialError::UnsortedPieces {
                        index,
                        a: piece.a,
                        prev_b,
                    });
                }
            }
        }
        Ok(Self { pieces })
    }

    /// Convenience constructor from `(a, b, v)` triples.
    pub fn from_triples(triples: &[(f64, f64, f64)]) -> Result<Self, PotentialError> {
        Self::new(
            triples
                .iter()
                .map(|&(a, b, v)| Piece { a, b, v })
                .collect(),
        )
    }

    /// The validated pieces, in increasing order.
    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// `V(x)` with the half-open convention: the piece containing `x` in
    /// `[a, b)` wins; zero on gaps and outside the support.
    pub fn evaluate(&self, x: f64) -> f64 {
        for piece in &self.pieces {
            if piece.a <= x && x < piece.b {
                return piece.v;
            }
        }
        0.0
    }

    /// Smallest `r` with `V ≡ 0` outside `[−r, r]`: the largest endpoint
    /// magnitude, or 0 for the empty potential.
    pub fn support_radius(&self) -> f64 {
        self.pieces
            .iter()
            .flat_map(|p| [p.a.abs(), p.b.abs()])
            .fold(0.0, f64::max)
    }

    /// Sorted union of all piece endpoints with consecutive duplicates
    /// removed. Between consecutive breakpoints the potential is constant.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut points: Vec<f64> = self
            .pieces
            .iter()
            .flat_map(|p| [p.a, p.b])
            .collect();
        points.sort_by(|x, y| x.partial_cmp(y).expect("finite endpoints"));
        points.dedup();
        points
    }
}

impl<'de> Deserialize<'de> for PiecewiseConstantPotential {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let pieces = Vec::<Piece>::deserialize(deserializer)?;
        Self::new(pieces).map_err(serde::de::Error::custom)
    }
}

/// Exact analytic potential forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticPotential {
    /// `V ≡ 0` — the free problem and the pure rotated-oscillator runs.
    Zero,
    /// `V(x) = coeff·x²` with `coeff ≠ 0` of either sign.
    Quadratic { coeff: f64 },
    /// `V(x) = sin(x)/x` (value 1 at the origin): bounded, not compactly
    /// supported, and excluded from the transfer-matrix solver.
    SincLike,
}

impl AnalyticPotential {
    /// Pointwise evaluation.
    pub fn evaluate(&self, x: f64) -> f64 {
        match *self {
            AnalyticPotential::Zero => 0.0,
            AnalyticPotential::Quadratic { coeff } => coeff * x * x,
            AnalyticPotential::SincLike => {
                if x.abs() < 1e-8 {
                    // Series keeps the removable singularity smooth to
                    // machine precision for |x| below the crossover.
                    1.0 - x * x / 6.0
                } else {
                    x.sin() / x
                }
            }
        }
    }
}

/// A potential accepted by the assembly and harness layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PotentialRepr", into = "PotentialRepr")]
pub enum Potential {
    /// Compactly supported steps; the only form the direct solver accepts.
    Piecewise(PiecewiseConstantPotential),
    /// Closed analytic form for oracle and exploratory runs.
    Analytic(AnalyticPotential),
}

impl Potential {
    /// The zero potential (as an analytic form).
    pub fn zero() -> Self {
        Potential::Analytic(AnalyticPotential::Zero)
    }

    /// `V(x) = coeff·x²`; `coeff` must be nonzero and finite.
    pub fn quadratic(coeff: f64) -> Result<Self, PotentialError> {
        if coeff == 0.0 || !coeff.is_finite() {
            return Err(PotentialError::BadQuadraticCoefficient);
        }
        Ok(Potential::Analytic(AnalyticPotential::Quadratic { coeff }))
    }

    /// `V(x) = sin(x)/x`.
    pub fn sinc_like() -> Self {
        Potential::Analytic(AnalyticPotential::SincLike)
    }

    /// Pointwise evaluation `V(x)`.
    pub fn evaluate(&self, x: f64) -> f64 {
        match self {
            Potential::Piecewise(p) => p.evaluate(x),
            Potential::Analytic(a) => a.evaluate(x),
        }
    }

    /// Smallest `r` with `V ≡ 0` outside `[−r, r]`, when one exists.
    ///
    /// The zero potential reports 0; quadratic and sinc forms have no
    /// compact support and return [`PotentialError::NonCompactSupport`].
    pub fn support_radius(&self) -> Result<f64, PotentialError> {
        match self {
            Potential::Piecewise(p) => Ok(p.support_radius()),
            Potential::Analytic(AnalyticPotential::Zero) => Ok(0.0),
            Potential::Analytic(_) => Err(PotentialError::NonCompactSupport),
        }
    }

    /// Content hash of the potential (hex SHA-256 of its canonical JSON),
    /// stamped into assembled matrices and resonance sets so artifacts can
    /// be traced back to their input.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("potential serializes");
        let mut hasher = Sha256::new();
        hasher.update(json.as_bytes());
        hex_string(&hasher.finalize())
    }
}

/// Lowercase-hex rendering of a digest.
pub(crate) fn hex_string(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(2 * bytes.len());
    for b in bytes {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Serialized form: `{"type": "piecewise", "pieces": [...]}`,
/// `{"type": "quadratic", "coeff": c}`, `{"type": "sinc"}`,
/// `{"type": "zero"}`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum PotentialRepr {
    Piecewise { pieces: Vec<Piece> },
    Quadratic { coeff: f64 },
    Sinc,
    Zero,
}

impl TryFrom<PotentialRepr> for Potential {
    type Error = PotentialError;

    fn try_from(repr: PotentialRepr) -> Result<Self, Self::Error> {
        match repr {
            PotentialRepr::Piecewise { pieces } => Ok(Potential::Piecewise(
                PiecewiseConstantPotential::new(pieces)?,
            )),
            PotentialRepr::Quadratic { coeff } => Potential::quadratic(coeff),
            PotentialRepr::Sinc => Ok(Potential::sinc_like()),
            PotentialRepr::Zero => Ok(Potential::zero()),
        }
    }
}

impl From<Potential> for PotentialRepr {
    fn from(p: Potential) -> Self {
        match p {
            Potential::Piecewise(p) => PotentialRepr::Piecewise {
                pieces: p.pieces,
            },
            Potential::Analytic(AnalyticPotential::Zero) => PotentialRepr::Zero,
            Potential::Analytic(AnalyticPotential::Quadratic { coeff }) => {
                PotentialRepr::Quadratic { coeff }
            }
            Potential::Analytic(AnalyticPotential::SincLike) => PotentialRepr::Sinc,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn barrier() -> PiecewiseConstantPotential {
        PiecewiseConstantPotential::from_triples(&[(-1.0, 1.0, 10.0)]).unwrap()
    }

    #[test]
    fn evaluate_inside_single_piece() {
        assert_eq!(barrier().evaluate(0.0), 10.0);
    }

    #[test]
    fn evaluate_outside_support_is_zero() {
        assert_eq!(barrier().evaluate(2.0), 0.0);
    }

    #[test]
    fn evaluate_quadratic() {
        let p = Potential::quadratic(4.0).unwrap();
        assert_eq!(p.evaluate(3.0), 36.0);
    }

    #[test]
    fn half_open_convention_at_breakpoints() {
        let p =
            PiecewiseConstantPotential::from_triples(&[(-1.0, 0.0, 2.0), (0.0, 1.0, 5.0)]).unwrap();
        assert_eq!(p.evaluate(0.0), 5.0);
        assert_eq!(p.evaluate(-1.0), 2.0);
        assert_eq!(p.evaluate(1.0), 0.0);
    }

    #[test]
    fn support_radius_single_piece() {
        assert_eq!(barrier().support_radius(), 1.0);
    }

    #[test]
    fn support_radius_is_max_endpoint_magnitude() {
        let p = PiecewiseConstantPotential::from_triples(&[(-2.0, -1.0, 3.0), (0.0, 3.0, -5.0)])
            .unwrap();
        assert_eq!(p.support_radius(), 3.0);
    }

    #[test]
    fn support_radius_rejects_sinc() {
        assert_eq!(
            Potential::sinc_like().support_radius(),
            Err(PotentialError::NonCompactSupport)
        );
    }

    #[test]
    fn support_radius_zero_potential() {
        assert_eq!(Potential::zero().support_radius(), Ok(0.0));
        let empty = PiecewiseConstantPotential::new(vec![]).unwrap();
        assert_eq!(empty.support_radius(), 0.0);
    }

    #[test]
    fn breakpoints_merge_shared_endpoints() {
        let p =
            PiecewiseConstantPotential::from_triples(&[(-1.0, 0.0, 2.0), (0.0, 1.0, 5.0)]).unwrap();
        assert_eq!(p.breakpoints(), vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn breakpoints_of_empty_potential() {
        let p = PiecewiseConstantPotential::new(vec![]).unwrap();
        assert!(p.breakpoints().is_empty());
    }

    #[test]
    fn breakpoints_with_gap() {
        let p = PiecewiseConstantPotential::from_triples(&[(-2.0, -1.0, 3.0), (0.0, 3.0, -5.0)])
            .unwrap();
        assert_eq!(p.breakpoints(), vec![-2.0, -1.0, 0.0, 3.0]);
    }

    #[test]
    fn overlapping_pieces_rejected() {
        let err = PiecewiseConstantPotential::from_triples(&[(-1.0, 1.0, 2.0), (0.5, 2.0, 1.0)])
            .unwrap_err();
        assert!(matches!(err, PotentialError::UnsortedPieces { index: 1, .. }));
    }

    #[test]
    fn inverted_interval_rejected() {
        let err = PiecewiseConstantPotential::from_triples(&[(1.0, -1.0, 2.0)]).unwrap_err();
        assert!(matches!(err, PotentialError::EmptyPiece { index: 0, .. }));
    }

    #[test]
    fn zero_quadratic_coefficient_rejected() {
        assert_eq!(
            Potential::quadratic(0.0).unwrap_err(),
            PotentialError::BadQuadraticCoefficient
        );
    }

    #[test]
    fn config_forms_parse() {
        let p: Potential =
            serde_json::from_str(r#"{"type":"piecewise","pieces":[{"a":-1.0,"b":1.0,"v":10.0}]}"#)
                .unwrap();
        assert_eq!(p.evaluate(0.0), 10.0);
        let q: Potential = serde_json::from_str(r#"{"type":"quadratic","coeff":1.0}"#).unwrap();
        assert_eq!(q.evaluate(2.0), 4.0);
        let s: Potential = serde_json::from_str(r#"{"type":"sinc"}"#).unwrap();
        assert!((s.evaluate(0.0) - 1.0).abs() < 1e-15);
        let z: Potential = serde_json::from_str(r#"{"type":"zero"}"#).unwrap();
        assert_eq!(z.evaluate(5.0), 0.0);
    }

    #[test]
    fn invalid_config_rejected_at_parse() {
        let bad = r#"{"type":"piecewise","pieces":[{"a":1.0,"b":-1.0,"v":2.0}]}"#;
        assert!(serde_json::from_str::<Potential>(bad).is_err());
    }

    #[test]
    fn digest_distinguishes_potentials() {
        let a = Potential::Piecewise(barrier());
        let b = Potential::quadratic(1.0).unwrap();
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest(), a.digest());
    }

    /// Strategy for valid sorted piece lists.
    fn pieces_strategy() -> impl Strategy<Value = Vec<Piece>> {
        prop::collection::vec((-10.0f64..10.0, 0.01f64..3.0, -20.0f64..20.0), 0..5).prop_map(
            |raw| {
                let mut cursor = -30.0;
                raw.into_iter()
                    .map(|(gap, len, v)| {
                        let a = cursor + gap.abs();
                        let b = a + len;
                        cursor = b;
                        Piece { a, b, v }
                    })
                    .collect()
            },
        )
    }

    proptest! {
        #[test]
        fn serde_round_trip(pieces in pieces_strategy()) {
            let p = Potential::Piecewise(PiecewiseConstantPotential::new(pieces).unwrap());
            let json = serde_json::to_string(&p).unwrap();
            let back: Potential = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(p, back);
        }

        #[test]
        fn zero_beyond_support_radius(pieces in pieces_strategy(), x in 0.0f64..100.0) {
            let p = PiecewiseConstantPotential::new(pieces).unwrap();
            let r0 = p.support_radius();
            prop_assert_eq!(p.evaluate(r0 + x + 1e-9), 0.0);
            prop_assert_eq!(p.evaluate(-r0 - x - 1e-9), 0.0);
        }

        #[test]
        fn support_radius_matches_breakpoints(pieces in pieces_strategy()) {
            let p = PiecewiseConstantPotential::new(pieces).unwrap();
            let expected = p
                .breakpoints()
                .iter()
                .fold(0.0f64, |acc, x| acc.max(x.abs()));
            prop_assert_eq!(p.support_radius(), expected);
        }
    }
}
