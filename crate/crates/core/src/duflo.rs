//! Duflo–Moore estimation and the checks built on it.
//!
//! `D⁻¹ = Σ_g w_g Δ(g)⁻¹ (g·x)` for a positive `x` with `τ(x) = 1`. Finite groups are
//! unimodular, so `Δ ≡ 1`. A second test element gives an independent estimate whose
//! distance from the first is recorded as the cross-check residual.

use serde::Serialize;

use crate::actions::Action;
use crate::algebra::{AlgebraElement, C64};
use crate::bracket::{bracket, bracket_values};
use crate::error::{Error, Result};
use crate::groups::HaarModel;
use crate::report::CheckReport;

/// Relative off-scalar residual below which `D` is reported as a multiple of `1`.
pub const SCALAR_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct DufloEstimate {
    pub d_inverse: AlgebraElement,
    pub d: AlgebraElement,
    /// `Some(d)` when `D = d·1` within [`SCALAR_TOL`].
    pub scalar: Option<f64>,
    /// `‖D⁻¹(x) − D⁻¹(x')‖∞ / ‖D⁻¹‖∞` for the two test elements.
    pub cross_check_residual: f64,
    pub min_eigenvalue: f64,
    /// `‖D·D⁻¹ − 1‖∞`.
    pub inverse_defect: f64,
}

/// Summary suitable for printing.
#[derive(Clone, Debug, Serialize)]
pub struct DufloSummary {
    pub block_spectra: Vec<Vec<f64>>,
    pub scalar: Option<f64>,
    pub scalar_inverse: Option<f64>,
    pub off_scalar_residual: f64,
    pub cross_check_residual: f64,
    pub min_eigenvalue: f64,
}

impl DufloEstimate {
    pub fn summary(&self) -> DufloSummary {
        DufloSummary {
            block_spectra: self.d.eigh().into_iter().map(|(v, _)| v).collect(),
            scalar: self.scalar,
            scalar_inverse: self.scalar.map(|d| 1.0 / d),
            off_scalar_residual: self.d.off_scalar_residual() / self.d.op_norm(),
            cross_check_residual: self.cross_check_residual,
            min_eigenvalue: self.min_eigenvalue,
        }
    }

    /// `D^t` for real `t`.
    pub fn d_power(&self, t: f64) -> Result<AlgebraElement> {
        self.d.positive_power(t)
    }

    /// Errors when the two test elements disagree by more than `tol`.
    pub fn require_consistent(&self, tol: f64) -> Result<()> {
        if self.cross_check_residual > tol {
            return Err(Error::Estimator(format!(
                "cross-check residual {:.3e} exceeds {tol:.1e}",
                self.cross_check_residual
            )));
        }
        Ok(())
    }
}

/// `Σ_g w_g (g·x)` after normalizing `x` to unit trace.
pub fn duflo_inverse_from(action: &Action, haar: &HaarModel, x: &AlgebraElement) -> Result<AlgebraElement> {
    if !x.is_positive() {
        return Err(Error::NotPositive {
            min_eigenvalue: x.min_eigenvalue(),
            tolerance: crate::algebra::EPS_PSD,
        });
    }
    let t = x.trace().re;
    if t <= 0.0 {
        return Err(Error::Estimator("test element has zero trace".into()));
    }
    let x = x.scale_re(1.0 / t);
    let mut acc = AlgebraElement::zeros(action.shape());
    for (g, &w) in haar.weights().iter().enumerate() {
        acc = &acc + &action.try_apply(g, &x)?.scale_re(w);
    }
    Ok(acc.hermitian_part())
}

pub fn estimate_duflo(action: &Action, haar: &HaarModel, x_test: &AlgebraElement, x_check: &AlgebraElement) -> Result<DufloEstimate> {
    if haar.weights().len() != action.group().order() {
        return Err(Error::Shape("Haar model does not match the group".into()));
    }
    let d_inverse = duflo_inverse_from(action, haar, x_test)?;
    let other = duflo_inverse_from(action, haar, x_check)?;
    let norm = d_inverse.op_norm();
    let min_eigenvalue = d_inverse.min_eigenvalue();
    if !(min_eigenvalue > 1e-8 * norm) {
        return Err(Error::Estimator(format!(
            "estimated D⁻¹ is not positive definite (min eigenvalue {min_eigenvalue:.3e}, norm {norm:.3e}); the action is not ergodic or not integrable"
        )));
    }
    let d = d_inverse.positive_inverse()?;
    let cross_check_residual = (&d_inverse - &other).op_norm() / norm;
    let one = AlgebraElement::identity(action.shape());
    let inverse_defect = (&(&d * &d_inverse) - &one).op_norm();
    let scalar = (d.off_scalar_residual() <= SCALAR_TOL * d.op_norm())
        .then(|| d.as_scalar(f64::INFINITY).map(|z| z.re))
        .flatten();
    Ok(DufloEstimate {
        d_inverse,
        d,
        scalar,
        cross_check_residual,
        min_eigenvalue,
        inverse_defect,
    })
}

/// `τ(D^{-1/2} y D^{-1/2})`.
pub fn duflo_weight(est: &DufloEstimate, y: &AlgebraElement) -> Result<C64> {
    let r = est.d_power(-0.5)?;
    Ok((&(&r * y) * &r).trace())
}

/// `∫⟨x|y⟩ = τ(x)·conj τ(D^{-1/2} y D^{-1/2})`. For positive `y` the conjugate is inert.
pub fn check_orthogonality(
    action: &Action,
    haar: &HaarModel,
    est: &DufloEstimate,
    x: &AlgebraElement,
    y: &AlgebraElement,
    tol_abs: f64,
    tol_rel: f64,
) -> Result<CheckReport> {
    let lhs = bracket(action, haar, x, y)?.integrate();
    let rhs = x.trace() * duflo_weight(est, y)?.conj();
    Ok(CheckReport::equality("orthogonality", "orthogonality-relation", lhs, rhs, tol_abs, tol_rel))
}

/// `max_g ‖g·D − Δ(g)⁻¹ D‖∞ / ‖D‖∞` over generators (`Δ ≡ 1`).
pub fn check_semi_invariance(action: &Action, est: &DufloEstimate, tol: f64) -> CheckReport {
    let norm = est.d.op_norm();
    let defect = action
        .group()
        .generators()
        .into_iter()
        .map(|g| (&action.apply(g, &est.d) - &est.d).op_norm())
        .fold(0.0, f64::max);
    CheckReport::defect("semi-invariance", "semi-invariance-of-D", defect, norm, 0.0, tol)
}

/// Both weight identities for a positive `y`: `τ_{D⁻¹}(y) = τ(D^{-1/2}yD^{-1/2})` and
/// `τ_D(D^{-1/2}yD^{-1/2}) = τ(y)`. Returns the value and the two reports.
pub fn check_admissibility(est: &DufloEstimate, y: &AlgebraElement, tol_rel: f64) -> Result<(C64, [CheckReport; 2])> {
    if !y.is_positive() {
        return Err(Error::NotPositive {
            min_eigenvalue: y.min_eigenvalue(),
            tolerance: crate::algebra::EPS_PSD,
        });
    }
    let kernel_path = est.d_inverse.trace_product(y)?;
    let sandwich = duflo_weight(est, y)?;
    let r = est.d_power(-0.5)?;
    let inner = &(&r * y) * &r;
    let round_trip = est.d.trace_product(&inner)?;
    Ok((
        sandwich,
        [
            CheckReport::equality("admissibility-weight", "weight-sandwich-identity", kernel_path, sandwich, 0.0, tol_rel),
            CheckReport::equality("admissibility-round-trip", "weight-round-trip", round_trip, y.trace(), 0.0, tol_rel),
        ],
    ))
}

/// `∫|⟨x|D^{1/2}yD^{1/2}⟩| ≤ τ(|x|)τ(|y|)` and `∫⟨x|D^{1/2}yD^{1/2}⟩ = τ(x)·conj τ(y)`.
pub fn check_l1(
    action: &Action,
    haar: &HaarModel,
    est: &DufloEstimate,
    x: &AlgebraElement,
    y: &AlgebraElement,
    tol_rel: f64,
) -> Result<[CheckReport; 2]> {
    let r = est.d_power(0.5)?;
    let ym = &(&r * y) * &r;
    let b = bracket(action, haar, x, &ym)?;
    let abs_integral = b.p_norm(1.0)?;
    let bound = x.p_norm(1.0)? * y.p_norm(1.0)?;
    let equality_rhs = x.trace() * y.trace().conj();
    Ok([
        CheckReport::upper_bound("l1-bound", "l1-bracket-bound", abs_integral, bound, 0.0, tol_rel),
        CheckReport::equality("l1-equality", "l1-bracket-integral", b.integrate(), equality_rhs, 0.0, tol_rel),
    ])
}

fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Validates `1/p + 1/q = 1 + 1/r` and `1 ≤ p, q ≤ r < ∞`.
pub fn validate_young_exponents(p: f64, q: f64, r: f64) -> Result<()> {
    if !(p >= 1.0 && q >= 1.0 && r.is_finite() && p <= r && q <= r) {
        return Err(Error::Parameter(format!("Young exponents need 1 <= p, q <= r < inf; got ({p}, {q}, {r})")));
    }
    if !approx_eq(1.0 / p + 1.0 / q, 1.0 + 1.0 / r) {
        return Err(Error::Parameter(format!("Young exponents need 1/p + 1/q = 1 + 1/r; got ({p}, {q}, {r})")));
    }
    Ok(())
}

/// `‖⟨x|D^{1/(2r)}yD^{1/(2r)}⟩‖_{L^r(G)} ≤ ‖x‖_p ‖y‖_q` for `y` commuting with `D`.
#[allow(clippy::too_many_arguments)]
pub fn check_young(
    action: &Action,
    haar: &HaarModel,
    est: &DufloEstimate,
    x: &AlgebraElement,
    y: &AlgebraElement,
    (p, q, r): (f64, f64, f64),
    tol_rel: f64,
) -> Result<CheckReport> {
    validate_young_exponents(p, q, r)?;
    let commutator = (&(y * &est.d) - &(&est.d * y)).op_norm();
    if commutator > 1e-9 * y.op_norm() * est.d.op_norm() {
        return Err(Error::Parameter(format!("y does not commute with D (‖[y,D]‖ = {commutator:.3e})")));
    }
    let s = est.d_power(1.0 / (2.0 * r))?;
    let ym = &(&s * y) * &s;
    let lhs = bracket(action, haar, x, &ym)?.p_norm(r)?;
    let rhs = x.p_norm(p)? * y.p_norm(q)?;
    Ok(CheckReport::upper_bound(
        &format!("young(p={},q={},r={})", fmt_exp(p), fmt_exp(q), fmt_exp(r)),
        "young-inequality",
        lhs,
        rhs,
        0.0,
        tol_rel,
    ))
}

/// `‖⟨x|y⟩‖_p ≤ ‖x‖_p ‖y‖_1^{1/q} ‖D^{-1/2}yD^{-1/2}‖_1^{1/p}` with `1/p + 1/q = 1`, `p < ∞`.
pub fn check_interpolation(
    action: &Action,
    haar: &HaarModel,
    est: &DufloEstimate,
    x: &AlgebraElement,
    y: &AlgebraElement,
    p: f64,
    tol_rel: f64,
) -> Result<CheckReport> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("interpolation exponent needs 1 <= p < inf, got {p}")));
    }
    let inv_q = 1.0 - 1.0 / p;
    let r = est.d_power(-0.5)?;
    let yd = &(&r * y) * &r;
    let lhs = bracket(action, haar, x, y)?.p_norm(p)?;
    let rhs = x.p_norm(p)? * y.p_norm(1.0)?.powf(inv_q) * yd.p_norm(1.0)?.powf(1.0 / p);
    Ok(CheckReport::upper_bound(
        &format!("interpolation(p={})", fmt_exp(p)),
        "interpolation-inequality",
        lhs,
        rhs,
        0.0,
        tol_rel,
    ))
}

/// Endpoint `sup_g |⟨x|y⟩(g)| ≤ ‖x‖∞ ‖y‖₁`.
pub fn check_interpolation_endpoint(action: &Action, x: &AlgebraElement, y: &AlgebraElement, tol_rel: f64) -> Result<CheckReport> {
    let lhs = bracket_values(action, x, y)?.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let rhs = x.op_norm() * y.p_norm(1.0)?;
    Ok(CheckReport::upper_bound(
        "interpolation(p=inf)",
        "interpolation-endpoint",
        lhs,
        rhs,
        0.0,
        tol_rel,
    ))
}

/// `‖xy‖_r ≤ ‖x‖_p ‖y‖_q` with `1/r = 1/p + 1/q`.
pub fn check_holder(x: &AlgebraElement, y: &AlgebraElement, p: f64, q: f64, tol_rel: f64) -> Result<CheckReport> {
    let inv_r = 1.0 / p + 1.0 / q;
    if !(p >= 1.0 && q >= 1.0 && inv_r <= 1.0 + 1e-15) {
        return Err(Error::Parameter(format!("Hölder exponents need 1/p + 1/q <= 1; got ({p}, {q})")));
    }
    let r = if inv_r == 0.0 { f64::INFINITY } else { 1.0 / inv_r };
    let lhs = x.try_mul(y)?.p_norm(r)?;
    let rhs = x.p_norm(p)? * y.p_norm(q)?;
    Ok(CheckReport::upper_bound(
        &format!("holder(p={},q={})", fmt_exp(p), fmt_exp(q)),
        "holder-inequality",
        lhs,
        rhs,
        0.0,
        tol_rel,
    ))
}

/// `τ((bab)^r) ≤ τ(b^r a^r b^r)` for positive `a, b` and integer `r ≥ 1`.
pub fn check_araki_lieb_thirring(a: &AlgebraElement, b: &AlgebraElement, r: u32, tol_rel: f64) -> Result<CheckReport> {
    if r == 0 {
        return Err(Error::Parameter("Araki-Lieb-Thirring needs r >= 1".into()));
    }
    let bab = (&(b * a) * b).hermitian_part();
    let lhs = bab.positive_power(r as f64)?.trace().re;
    let br = b.positive_power(r as f64)?;
    let ar = a.positive_power(r as f64)?;
    let rhs = (&(&br * &ar) * &br).trace().re;
    Ok(CheckReport::upper_bound(
        &format!("alt(r={r})"),
        "araki-lieb-thirring",
        lhs,
        rhs,
        0.0,
        tol_rel,
    ))
}

pub(crate) fn fmt_exp(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else if (p - 4.0 / 3.0).abs() < 1e-12 {
        "4/3".into()
    } else if p.fract() == 0.0 {
        format!("{}", p as i64)
    } else {
        format!("{p:.4}")
    }
}

/// `(p, q, r)` from `p, q ∈ {1, 4/3, 2, 4}` with `1/p + 1/q = 1 + 1/r` and `p, q ≤ r < ∞`.
pub fn young_grid() -> Vec<(f64, f64, f64)> {
    let ps = [1.0, 4.0 / 3.0, 2.0, 4.0];
    let mut out = Vec::new();
    for &p in &ps {
        for &q in &ps {
            let inv_r = 1.0 / p + 1.0 / q - 1.0;
            if inv_r <= 1e-12 {
                continue;
            }
            let r = 1.0 / inv_r;
            if p <= r + 1e-12 && q <= r + 1e-12 {
                out.push((p, q, r));
            }
        }
    }
    out
}

pub fn interpolation_grid() -> Vec<f64> {
    vec![1.0, 4.0 / 3.0, 2.0, 4.0]
}

/// Pairs with `p, q ∈ {1, 4/3, 2, 4, ∞}` and `1/p + 1/q ≤ 1`.
pub fn holder_grid() -> Vec<(f64, f64)> {
    let ps = [1.0, 4.0 / 3.0, 2.0, 4.0, f64::INFINITY];
    let mut out = Vec::new();
    for &p in &ps {
        for &q in &ps {
            if 1.0 / p + 1.0 / q <= 1.0 + 1e-12 {
                out.push((p, q));
            }
        }
    }
    out
}
