//! Direct resonance computation for piecewise-constant potentials.
//!
//! This module is the independent ground truth against which the CAP
//! route is verified. Resonances are poles of the meromorphically
//! continued resolvent of `−d²/dx² + V`; in one dimension with compactly
//! supported `V` they are exactly the zeros (with `Im k < 0`) of an
//! entire matching function `f(k)`: start the solution that behaves as
//! `e^{−ikx}` on the left of the support, propagate across the pieces,
//! and measure at the right edge how much incoming wave `e^{−ikx}` the
//! solution contains — `f(k) = ik·u(r₀) − u'(r₀)` vanishes precisely when
//! the solution is purely outgoing on both sides. Zeros with `Im k > 0`
//! (on the positive imaginary axis for real `V`) are bound states and are
//! reported too, flagged separately. The energy variable is `z = k²`.
//!
//! Propagation uses the fundamental system `cos(√w·ℓ)` and `sin(√w·ℓ)/√w`
//! in `w = k² − v`, both entire in `w`; no square-root branch cut ever
//! enters, so `f` is analytic and winding numbers are globally
//! well-defined. Multiplicities are certified by the argument principle:
//! continuous phase tracking of `f` along rectangle and circle contours,
//! adaptively refined until each phase step is below π/2, yields exact
//! integer zero counts. The threshold `k = 0` is excluded by a small disk:
//! the multiplicity formula breaks down at the threshold, so the solver
//! refuses to certify zeros there.

use crate::potentials::PiecewiseConstantPotential;
use crate::C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Zeros with `|k|` at or below this radius are outside the solver's
/// contract; search regions must stay clear of this disk around `k = 0`.
pub const THRESHOLD_EXCLUSION_RADIUS: f64 = 1e-3;

/// Default Newton stopping tolerance on the step size (relative to 1+|k|).
pub const DEFAULT_NEWTON_TOL: f64 = 1e-12;

/// Hard cap on recursive bisection depth before giving up.
const MAX_SUBDIVISION_DEPTH: usize = 48;

/// Cells with diagonal below this (times 1+|center|) stop subdividing;
/// a residual winding m > 1 there is reported as one m-fold pole.
const MIN_CELL_DIAG: f64 = 1e-7;

/// Split fractions tried in turn when a subdivision line grazes a zero.
const SPLIT_FRACTIONS: [f64; 5] = [0.5, 0.55, 0.45, 0.6, 0.4];

/// Adaptive phase-tracking recursion limit per initial contour segment.
const MAX_PHASE_DEPTH: usize = 48;

/// Direct-solver failures.
#[derive(Debug, Error)]
pub enum ResonanceError {
    /// The matching function is not defined at the threshold `k = 0`.
    #[error("matching function undefined at k = 0")]
    ZeroWavenumber,
    /// A zero of the matching function lies on or too near an integration
    /// contour; the caller must shrink or shift the rectangle.
    #[error("a zero of the matching function lies on or too near the integration contour")]
    BoundaryTooCloseToZero,
    /// Phase tracking did not close up to an integer multiple of 2π.
    #[error("phase tracking produced a non-integer winding; the contour likely grazes a zero")]
    PhaseTrackingInconsistent,
    /// Recursive bisection exceeded the depth budget.
    #[error("subdivision depth {depth} exceeded the budget")]
    BudgetExceeded { depth: usize },
    /// Malformed or inadmissible search region.
    #[error("invalid search region: {0}")]
    InvalidRegion(String),
}

/// Axis-aligned search rectangle in the complex k-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KRectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl KRectangle {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        KRectangle {
            re_min,
            re_max,
            im_min,
            im_max,
        }
    }

    /// Check ordering and finiteness of the bounds.
    pub fn validate(&self) -> Result<(), ResonanceError> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.re_min >= self.re_max || self.im_min >= self.im_max {
            return Err(ResonanceError::InvalidRegion(format!(
                "rectangle [{}, {}] × [{}, {}] must have increasing finite bounds",
                self.re_min, self.re_max, self.im_min, self.im_max
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> C64 {
        C64::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    /// Closed-rectangle membership.
    pub fn contains(&self, k: C64) -> bool {
        (self.re_min..=self.re_max).contains(&k.re) && (self.im_min..=self.im_max).contains(&k.im)
    }

    /// Distance from the rectangle (as a closed set) to the origin.
    pub fn distance_to_origin(&self) -> f64 {
        let re = 0.0f64.clamp(self.re_min, self.re_max);
        let im = 0.0f64.clamp(self.im_min, self.im_max);
        re.hypot(im)
    }

    /// Rectangle grown by `margin` times its own size on every side.
    fn inflate(&self, margin: f64) -> KRectangle {
        let dw = margin * self.width();
        let dh = margin * self.height();
        KRectangle::new(
            self.re_min - dw,
            self.re_max + dw,
            self.im_min - dh,
            self.im_max + dh,
        )
    }

    /// Split the longer side at the given fraction.
    fn split(&self, frac: f64) -> (KRectangle, KRectangle) {
        if self.width() >= self.height() {
            let mid = self.re_min + frac * self.width();
            (
                KRectangle::new(self.re_min, mid, self.im_min, self.im_max),
                KRectangle::new(mid, self.re_max, self.im_min, self.im_max),
            )
        } else {
            let mid = self.im_min + frac * self.height();
            (
                KRectangle::new(self.re_min, self.re_max, self.im_min, mid),
                KRectangle::new(self.re_min, self.re_max, mid, self.im_max),
            )
        }
    }

    /// Counterclockwise boundary parameterization over t ∈ [0, 1).
    fn boundary_point(&self, t: f64) -> C64 {
        let t = t.rem_euclid(1.0) * 4.0;
        let side = t.floor().min(3.0);
        let s = t - side;
        match side as usize {
            0 => C64::new(self.re_min + s * self.width(), self.im_min),
            1 => C64::new(self.re_max, self.im_min + s * self.height()),
            2 => C64::new(self.re_max - s * self.width(), self.im_max),
            _ => C64::new(self.re_min, self.im_max - s * self.height()),
        }
    }
}

/// Classification of a matching-function zero by half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResonanceKind {
    /// `Im k < 0`: pole of the continued resolvent.
    Resonance,
    /// `Im k > 0` (on iℝ₊ for real potentials): genuine eigenvalue z < 0.
    BoundState,
}

impl ResonanceKind {
    /// Stable lowercase label used in CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            ResonanceKind::Resonance => "resonance",
            ResonanceKind::BoundState => "bound_state",
        }
    }
}

/// One certified zero of the matching function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    /// Energy-plane location, `z = k²`.
    pub z: C64,
    /// Wavenumber-plane location.
    pub k: C64,
    /// Argument-principle zero count on the certifying contour.
    pub multiplicity: usize,
    /// Whether a clean winding certificate was obtained.
    pub certified: bool,
    /// Resonance or bound state, by the sign of `Im k`.
    pub kind: ResonanceKind,
}

/// All zeros found in a search region, in spectrum order
/// (descending `Im z`, ties by ascending `Re z`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResonanceSet {
    pub poles: Vec<Resonance>,
    pub search_region: KRectangle,
    pub potential_digest: String,
}

impl ResonanceSet {
    /// Total zero count (with multiplicity) in the region.
    pub fn total_multiplicity(&self) -> usize {
        self.poles.iter().map(|p| p.multiplicity).sum()
    }
}

/// `cos(√w·ℓ)` and `sin(√w·ℓ)/√w`, evaluated as entire functions of `w`.
///
/// For `|w|ℓ²` below 1e−4 the truncated power series in `z = wℓ²` is used;
/// its tail is below 1e−20, and it avoids the 0/0 of the closed form at
/// `w = 0`.
fn cs_pair(w: C64, len: f64) -> (C64, C64) {
    let z = w * (len * len);
    if z.norm() < 1e-4 {
        let one = C64::new(1.0, 0.0);
        let c = one - z * 0.5 * (one - z / 12.0 * (one - z / 30.0));
        let s_over_len = one - z / 6.0 * (one - z / 20.0 * (one - z / 42.0));
        (c, s_over_len * len)
    } else {
        let root = w.sqrt();
        let arg = root * len;
        (arg.cos(), arg.sin() / root)
    }
}

/// Propagate `(u, u')` across one constant-potential interval:
/// solves `−u'' + v·u = k²·u` over length `len`. With `w = k² − v`,
/// `u ↦ u·cos(√w·ℓ) + u'·sin(√w·ℓ)/√w` and
/// `u' ↦ −u·w·sin(√w·ℓ)/√w + u'·cos(√w·ℓ)`, branch-free and analytic in k.
pub fn propagate_piece(u: C64, du: C64, v: f64, k: C64, len: f64) -> (C64, C64) {
    debug_assert!(len >= 0.0, "piece length must be nonnegative");
    let w = k * k - v;
    let (c, s) = cs_pair(w, len);
    (u * c + du * s, -u * w * s + du * c)
}

/// Outgoing-matching function over the potential's own support radius.
/// Zeros with `Im k < 0` are resonances; zeros on iℝ₊ are bound states.
pub fn matching_function(p: &PiecewiseConstantPotential, k: C64) -> Result<C64, ResonanceError> {
    matching_function_with_radius(p, k, p.support_radius())
}

/// Outgoing-matching function with an explicit matching radius
/// `r0 ≥ support_radius`. Enlarging the radius multiplies `f` by
/// `e^{−ik·(extra length)}` and moves no zeros; the free potential gives
/// the closed form `f(k) = 2ik·e^{−ikr0}`.
pub fn matching_function_with_radius(
    p: &PiecewiseConstantPotential,
    k: C64,
    r0: f64,
) -> Result<C64, ResonanceError> {
    if k == C64::new(0.0, 0.0) {
        return Err(ResonanceError::ZeroWavenumber);
    }
    if r0 < p.support_radius() {
        return Err(ResonanceError::InvalidRegion(format!(
            "matching radius {r0} smaller than the support radius {}",
            p.support_radius()
        )));
    }
    // Left-outgoing initial data: u(x) = e^{−ikx} at x = −r0.
    let i = C64::new(0.0, 1.0);
    let mut u = (i * k * r0).exp();
    let mut du = -i * k * u;
    let mut x = -r0;
    for piece in p.pieces() {
        if piece.a > x {
            let (nu, ndu) = propagate_piece(u, du, 0.0, k, piece.a - x);
            u = nu;
            du = ndu;
        }
        let (nu, ndu) = propagate_piece(u, du, piece.v, k, piece.b - piece.a);
        u = nu;
        du = ndu;
        x = piece.b;
    }
    if x < r0 {
        let (nu, ndu) = propagate_piece(u, du, 0.0, k, r0 - x);
        u = nu;
        du = ndu;
    }
    Ok(i * k * u - du)
}

/// Continuous-phase increment of `f` along a contour segment, refined by
/// midpoint insertion until every step is below π/2.
fn phase_step<F, G>(
    f: &mut F,
    path: &G,
    ta: f64,
    fa: C64,
    tb: f64,
    fb: C64,
    depth: usize,
) -> Result<f64, ResonanceError>
where
    F: FnMut(C64) -> Result<C64, ResonanceError>,
    G: Fn(f64) -> C64,
{
    let step = (fb / fa).arg();
    if step.is_finite() && step.abs() < std::f64::consts::FRAC_PI_2 {
        return Ok(step);
    }
    if depth == 0 {
        return Err(ResonanceError::BoundaryTooCloseToZero);
    }
    let tm = 0.5 * (ta + tb);
    let fm = f(path(tm))?;
    if !fm.is_finite() || fm.norm() < 1e-280 {
        return Err(ResonanceError::BoundaryTooCloseToZero);
    }
    Ok(phase_step(f, path, ta, fa, tm, fm, depth - 1)?
        + phase_step(f, path, tm, fm, tb, fb, depth - 1)?)
}

/// Argument-principle winding of `f` around the closed contour
/// `path: [0,1) → ℂ`, with `initial_samples` seed points.
fn contour_winding<F, G>(
    mut f: F,
    path: G,
    initial_samples: usize,
) -> Result<usize, ResonanceError>
where
    F: FnMut(C64) -> Result<C64, ResonanceError>,
    G: Fn(f64) -> C64,
{
    let n = initial_samples.max(8);
    let mut samples = Vec::with_capacity(n + 1);
    for j in 0..n {
        let t = j as f64 / n as f64;
        let value = f(path(t))?;
        if !value.is_finite() || value.norm() < 1e-280 {
            return Err(ResonanceError::BoundaryTooCloseToZero);
        }
        samples.push((t, value));
    }
    samples.push((1.0, samples[0].1)); // close the contour

    let mut total = 0.0;
    for pair in samples.windows(2) {
        let (ta, fa) = pair[0];
        let (tb, fb) = pair[1];
        total += phase_step(&mut f, &path, ta, fa, tb, fb, MAX_PHASE_DEPTH)?;
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let winding = (total / two_pi).round();
    if (total - winding * two_pi).abs() > 0.25 || winding < 0.0 {
        return Err(ResonanceError::PhaseTrackingInconsistent);
    }
    Ok(winding as usize)
}

/// Exact count (with multiplicity) of matching-function zeros inside the
/// rectangle, by the argument principle. Fails if a zero sits on or too
/// near the boundary; callers should shrink or shift the rectangle.
pub fn winding_number(
    p: &PiecewiseConstantPotential,
    rect: &KRectangle,
    samples_per_side: usize,
) -> Result<usize, ResonanceError> {
    rect.validate()?;
    contour_winding(
        |k| matching_function(p, k),
        |t| rect.boundary_point(t),
        samples_per_side.max(2) * 4,
    )
}

/// Winding of `f` on a circle; the multiplicity certificate for one root.
fn circle_winding(
    p: &PiecewiseConstantPotential,
    center: C64,
    radius: f64,
) -> Result<usize, ResonanceError> {
    contour_winding(
        |k| matching_function(p, k),
        |t| center + C64::from_polar(radius, 2.0 * std::f64::consts::PI * t),
        16,
    )
}

/// Newton iteration from the cell center, with the derivative by central
/// differences of step `1e−6·(1+|k|)`. Returns the refined root if the
/// iteration converges inside the cell; `None` sends the caller back to
/// bisection.
fn newton_refine(
    p: &PiecewiseConstantPotential,
    cell: &KRectangle,
    tol: f64,
) -> Result<Option<C64>, ResonanceError> {
    let guard = cell.inflate(0.5);
    let mut k = cell.center();
    for _ in 0..60 {
        let h = 1e-6 * (1.0 + k.norm());
        let fk = matching_function(p, k)?;
        let fp = matching_function(p, k + h)?;
        let fm = matching_function(p, k - h)?;
        let derivative = (fp - fm) / (2.0 * h);
        if derivative.norm() == 0.0 {
            return Ok(None);
        }
        let step = fk / derivative;
        k -= step;
        if !k.is_finite() || !guard.contains(k) {
            return Ok(None);
        }
        if step.norm() <= tol * (1.0 + k.norm()) {
            return Ok(cell.contains(k).then_some(k));
        }
    }
    Ok(None)
}

fn make_resonance(k: C64, multiplicity: usize, certified: bool) -> Resonance {
    Resonance {
        z: k * k,
        k,
        multiplicity,
        certified,
        kind: if k.im > 0.0 {
            ResonanceKind::BoundState
        } else {
            ResonanceKind::Resonance
        },
    }
}

fn process_cell(
    p: &PiecewiseConstantPotential,
    cell: &KRectangle,
    newton_tol: f64,
    depth: usize,
) -> Result<Vec<Resonance>, ResonanceError> {
    if depth > MAX_SUBDIVISION_DEPTH {
        return Err(ResonanceError::BudgetExceeded { depth });
    }
    let count = winding_number(p, cell, 16)?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let resolved = cell.diagonal() <= MIN_CELL_DIAG * (1.0 + cell.center().norm());
    if count == 1 && !resolved {
        if let Some(root) = newton_refine(p, cell, newton_tol)? {
            let radius = (100.0 * newton_tol).max(1e-6) * (1.0 + root.norm());
            let certified = matches!(circle_winding(p, root, radius), Ok(1));
            return Ok(vec![make_resonance(root, 1, certified)]);
        }
        // Newton escaped: the zero hugs the cell edge; keep bisecting.
    }
    if resolved {
        // Unresolvable cluster: the winding count itself is the
        // certificate; report the centroid as one m-fold pole.
        return Ok(vec![make_resonance(cell.center(), count, true)]);
    }
    for frac in SPLIT_FRACTIONS {
        let (left, right) = cell.split(frac);
        let left_out = match process_cell(p, &left, newton_tol, depth + 1) {
            Ok(v) => v,
            Err(
                ResonanceError::BoundaryTooCloseToZero | ResonanceError::PhaseTrackingInconsistent,
            ) => continue, // the split line grazed a zero; shift it
            Err(e) => return Err(e),
        };
        let right_out = match process_cell(p, &right, newton_tol, depth + 1) {
            Ok(v) => v,
            Err(
                ResonanceError::BoundaryTooCloseToZero | ResonanceError::PhaseTrackingInconsistent,
            ) => continue,
            Err(e) => return Err(e),
        };
        let mut out = left_out;
        out.extend(right_out);
        return Ok(out);
    }
    Err(ResonanceError::BoundaryTooCloseToZero)
}

/// Find every zero of the matching function in `rect` by recursive
/// bisection driven by winding numbers, Newton refinement of isolated
/// roots, and argument-principle certification.
///
/// The rectangle must stay clear of the threshold exclusion disk around
/// `k = 0` ([`THRESHOLD_EXCLUSION_RADIUS`]).
pub fn find_resonances(
    p: &PiecewiseConstantPotential,
    rect: &KRectangle,
    newton_tol: f64,
) -> Result<ResonanceSet, ResonanceError> {
    rect.validate()?;
    if !(newton_tol > 0.0) || !newton_tol.is_finite() {
        return Err(ResonanceError::InvalidRegion(format!(
            "newton tolerance {newton_tol} must be positive"
        )));
    }
    if rect.distance_to_origin() <= THRESHOLD_EXCLUSION_RADIUS {
        return Err(ResonanceError::InvalidRegion(format!(
            "rectangle reaches within {THRESHOLD_EXCLUSION_RADIUS} of the excluded threshold k = 0"
        )));
    }
    let mut poles = process_cell(p, rect, newton_tol, 0)?;
    poles.sort_by(|a, b| {
        b.z.im
            .total_cmp(&a.z.im)
            .then_with(|| a.z.re.total_cmp(&b.z.re))
    });
    Ok(ResonanceSet {
        poles,
        search_region: *rect,
        potential_digest: crate::potentials::Potential::Piecewise(p.clone()).digest(),
    })
}
