//! Affine group acting on `B(L²(ℝ₊))` through the wavelet representation, discretized
//! on a log-frequency grid and integrated by quadrature.
//!
//! On the Fourier side `(U(a,b)ψ)^(ξ) = √a e^{−2πibξ} ψ̂(aξ)`. A grid vector
//! `φ_j = √h e^{u_j/2} ψ̂(e^{u_j})` on `u_j = u_0 + jh` turns dilation by `a = e^{kh}` into an
//! index shift, so `(U(a,b)φ)_j = e^{−2πibξ_j} φ_{j+k}` with zero fill past the grid ends.
//!
//! Everything is evaluated on rank-one elements. With `x = ab*` and `y = cd*`,
//! `⟨x|y⟩(g) = ⟨Uc, a⟩⟨b, Ud⟩` and the Duflo–Moore form is estimated as
//! `d*D⁻¹c ≈ Σ_g w_g Δ(g)⁻¹ ⟨d, Uη⟩⟨Uη, c⟩` for a unit vector `η`. The exact operator is
//! multiplication by `1/ξ`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::algebra::{Mat, C64};
use crate::error::{Error, Result};
use crate::groups::{AffinePoint, QuadratureGroup};
use crate::linalg::{nullity, NULLSPACE_THRESHOLD};
use crate::report::CheckReport;

/// Log-frequency grid carrying the discretized wavelet representation.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveletRep {
    u_min: f64,
    h: f64,
    n: usize,
}

impl WaveletRep {
    pub fn new(u_min: f64, u_max: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && u_min < u_max && u_min.is_finite() && u_max.is_finite()) {
            return Err(Error::Parameter(format!("bad log-frequency grid [{u_min}, {u_max}] step {h}")));
        }
        let n = ((u_max - u_min) / h).round() as usize + 1;
        Ok(Self { u_min, h, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn u(&self, j: usize) -> f64 {
        self.u_min + j as f64 * self.h
    }

    pub fn xi(&self, j: usize) -> f64 {
        self.u(j).exp()
    }

    /// `k` with `a = e^{kh}`; errors when `a` is off the grid.
    pub fn dilation_index(&self, a: f64) -> Result<isize> {
        if !(a > 0.0) {
            return Err(Error::Parameter(format!("dilation must be positive, got {a}")));
        }
        let s = a.ln() / self.h;
        let k = s.round();
        if (s - k).abs() > 1e-6 {
            return Err(Error::Parameter(format!(
                "dilation {a} is not a whole number of grid steps (ln a / h = {s})"
            )));
        }
        Ok(k as isize)
    }

    /// `(U(a,b)φ)_j = e^{−2πibξ_j} φ_{j+k}`.
    pub fn apply(&self, p: AffinePoint, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.n {
            return Err(Error::Shape(format!("vector of length {} on grid of {}", v.len(), self.n)));
        }
        let k = self.dilation_index(p[0])?;
        Ok((0..self.n)
            .map(|j| {
                let src = j as isize + k;
                if src < 0 || src >= self.n as isize {
                    C64::new(0.0, 0.0)
                } else {
                    C64::from_polar(1.0, -2.0 * PI * p[1] * self.xi(j)) * v[src as usize]
                }
            })
            .collect())
    }

    pub fn matrix(&self, p: AffinePoint) -> Result<Mat> {
        let mut m = DMatrix::<C64>::zeros(self.n, self.n);
        for j in 0..self.n {
            let mut e = vec![C64::new(0.0, 0.0); self.n];
            e[j] = C64::new(1.0, 0.0);
            m.set_column(j, &nalgebra::DVector::from_vec(self.apply(p, &e)?));
        }
        Ok(m)
    }

    /// Unit vector `∝ exp(−(u−c)²/(2s²) + iβ(u−c)²)`.
    pub fn gaussian(&self, center: f64, width: f64, chirp: f64) -> Vec<C64> {
        let v: Vec<C64> = (0..self.n)
            .map(|j| {
                let t = self.u(j) - center;
                C64::from_polar((-(t * t) / (2.0 * width * width)).exp(), chirp * t * t)
            })
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / norm).collect()
    }

    /// Exact `d* D⁻¹ c` for `D⁻¹` = multiplication by `1/ξ`.
    pub fn inverse_frequency_form(&self, c: &[C64], d: &[C64]) -> C64 {
        (0..self.n).map(|j| d[j].conj() * c[j] / self.xi(j)).sum()
    }
}

pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Resolution and range parameters of one discretization level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WaveletGrid {
    pub level: u32,
    pub u_half_width: f64,
    pub u_step: f64,
    /// Dilation nodes are spaced by this many grid steps.
    pub dilation_stride: usize,
    pub log_a_half_width: f64,
    pub b_half_width: f64,
    pub b_step: f64,
}

impl WaveletGrid {
    /// Level `L` refines the default grid: resolutions scale by `1.5^{-L}`, ranges by `1.15^L`.
    pub fn level(level: u32) -> Self {
        let fine = 1.5f64.powi(level as i32);
        let wide = 1.15f64.powi(level as i32);
        Self {
            level,
            u_half_width: 4.0 * wide,
            u_step: 0.03 / fine,
            dilation_stride: 4,
            log_a_half_width: 2.0 * wide,
            b_half_width: 3.0 * wide,
            b_step: 0.25 / fine,
        }
    }
}

/// The quadrature model: rep, affine nodes and precomputed modulation phases.
#[derive(Clone, Debug)]
pub struct AffineWavelet {
    grid: WaveletGrid,
    rep: WaveletRep,
    group: QuadratureGroup,
    shifts: Vec<isize>,
    b_values: Vec<f64>,
    phases: Vec<Vec<C64>>,
}

impl AffineWavelet {
    pub fn new(grid: WaveletGrid) -> Result<Self> {
        let rep = WaveletRep::new(-grid.u_half_width, grid.u_half_width, grid.u_step)?;
        let log_a_step = grid.dilation_stride as f64 * rep.step();
        let m = (grid.log_a_half_width / log_a_step).ceil() as usize;
        let a_max = (m as f64 * log_a_step).exp();
        let n_b = 2 * (grid.b_half_width / grid.b_step).ceil() as usize + 1;
        let b_max = (n_b - 1) as f64 / 2.0 * grid.b_step;
        let group = QuadratureGroup::affine(1.0 / a_max, a_max, 2 * m + 1, -b_max, b_max, n_b)?;
        let (n_a, n_b) = group.grid_size();
        let shifts = (0..n_a)
            .map(|i| rep.dilation_index(group.nodes()[i * n_b][0]))
            .collect::<Result<Vec<_>>>()?;
        let b_values: Vec<f64> = (0..n_b).map(|j| group.nodes()[j][1]).collect();
        let phases = b_values
            .iter()
            .map(|&b| (0..rep.len()).map(|j| C64::from_polar(1.0, -2.0 * PI * b * rep.xi(j))).collect())
            .collect();
        Ok(Self {
            grid,
            rep,
            group,
            shifts,
            b_values,
            phases,
        })
    }

    pub fn grid(&self) -> &WaveletGrid {
        &self.grid
    }

    pub fn rep(&self) -> &WaveletRep {
        &self.rep
    }

    pub fn group(&self) -> &QuadratureGroup {
        &self.group
    }

    /// `⟨v, U_g w⟩` at every node, in node order.
    pub fn coefficients(&self, v: &[C64], w: &[C64]) -> Vec<C64> {
        let n = self.rep.len();
        let mut out = Vec::with_capacity(self.group.len());
        for &k in &self.shifts {
            let prod: Vec<(usize, C64)> = (0..n)
                .filter_map(|j| {
                    let src = j as isize + k;
                    (src >= 0 && src < n as isize).then(|| (j, v[j].conj() * w[src as usize]))
                })
                .filter(|(_, z)| z.norm_sqr() > 0.0)
                .collect();
            for phase in &self.phases {
                out.push(prod.iter().map(|&(j, z)| z * phase[j]).sum());
            }
        }
        out
    }

    /// `∫⟨ab*|cd*⟩ dm = Σ_g w_g ⟨Uc, a⟩⟨b, Ud⟩`.
    pub fn bracket_integral(&self, a: &[C64], b: &[C64], c: &[C64], d: &[C64]) -> C64 {
        let ac = self.coefficients(a, c);
        let bd = self.coefficients(b, d);
        self.group
            .haar()
            .weights()
            .iter()
            .zip(ac.iter().zip(&bd))
            .map(|(&w, (x, y))| x.conj() * y * w)
            .sum()
    }

    /// `d* D⁻¹ c ≈ Σ_g w_g Δ(g)⁻¹ ⟨d, Uη⟩⟨Uη, c⟩` for a unit vector `η`.
    pub fn duflo_form(&self, eta: &[C64], c: &[C64], d: &[C64]) -> C64 {
        let dc = self.coefficients(d, eta);
        let cc = self.coefficients(c, eta);
        self.group
            .haar()
            .weights()
            .iter()
            .zip(self.group.nodes())
            .zip(dc.iter().zip(&cc))
            .map(|((&w, p), (x, y))| x * y.conj() * (w / QuadratureGroup::modular(*p)))
            .sum()
    }

    /// Test vectors used by the suite.
    pub fn test_vectors(&self) -> [Vec<C64>; 4] {
        [
            self.rep.gaussian(0.0, 0.4, 0.0),
            self.rep.gaussian(0.3, 0.35, 0.8),
            self.rep.gaussian(-0.25, 0.45, -0.5),
            self.rep.gaussian(0.1, 0.5, 0.3),
        ]
    }

    pub fn node_b(&self) -> &[f64] {
        &self.b_values
    }
}

/// Ergodicity proxy: on a small cyclic grid, the commutant of one cyclic dilation shift
/// and a few modulations is `ℂ·1`.
pub fn sampled_ergodicity_dimension(points: usize) -> usize {
    let n = points;
    let mut gens: Vec<Mat> = Vec::new();
    let mut shift = DMatrix::<C64>::zeros(n, n);
    for j in 0..n {
        shift[(j, (j + 1) % n)] = C64::new(1.0, 0.0);
    }
    gens.push(shift);
    for b in [0.37, 1.1] {
        gens.push(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::from_polar(1.0, -2.0 * PI * b * (0.1 * i as f64 - 0.5).exp())
            } else {
                C64::new(0.0, 0.0)
            }
        }));
    }
    // X ↦ U X U* − X in column-major vec coordinates
    let dim = n * n;
    let mut stacked = DMatrix::<C64>::zeros(gens.len() * dim, dim);
    for (gi, u) in gens.iter().enumerate() {
        for col in 0..dim {
            let mut e = DMatrix::<C64>::zeros(n, n);
            e[(col % n, col / n)] = C64::new(1.0, 0.0);
            let img = u * &e * u.adjoint() - &e;
            for (r, z) in img.iter().enumerate() {
                stacked[(gi * dim + r, col)] = *z;
            }
        }
    }
    nullity(&stacked, NULLSPACE_THRESHOLD)
}

/// Residuals of one discretization level.
#[derive(Clone, Debug, Serialize)]
pub struct RefinementRow {
    pub level: u32,
    pub nodes: usize,
    pub grid_points: usize,
    pub orthogonality_residual: f64,
    pub semi_invariance_residual: f64,
    pub duflo_residual: f64,
    pub cross_check_residual: f64,
}

/// All quadrature checks at one level, with relative tolerance `tol_rel`.
pub fn affine_suite(model: &AffineWavelet, tol_rel: f64) -> Result<(Vec<CheckReport>, RefinementRow)> {
    let rep = model.rep();
    let [eta, eta2, psi, chi] = model.test_vectors();
    let mut reports = Vec::new();

    // representation sanity on on-grid nodes
    let log_step = model.grid().dilation_stride as f64 * rep.step();
    let g1: AffinePoint = [(3.0 * log_step).exp(), 0.4];
    let g2: AffinePoint = [(-5.0 * log_step).exp(), -0.7];
    let norm_defect = [g1, g2]
        .iter()
        .map(|&g| -> Result<f64> { Ok((inner(&rep.apply(g, &psi)?, &rep.apply(g, &psi)?).re.sqrt() - 1.0).abs()) })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    reports.push(CheckReport::defect("wavelet-isometry", "unitary-representation", norm_defect, 1.0, 1e-10, 0.0));
    let lhs = rep.apply(g1, &rep.apply(g2, &psi)?)?;
    let rhs = rep.apply(QuadratureGroup::compose(g1, g2), &psi)?;
    let comp = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    reports.push(CheckReport::defect("wavelet-composition", "representation-homomorphism", comp, 1.0, 1e-10, 0.0));

    let fixed = sampled_ergodicity_dimension(8);
    reports.push(
        CheckReport::equality_re("sampled-ergodicity", "ergodicity", fixed as f64, 1.0, 0.0, 0.0)
            .with_note("cyclic 8-point proxy with one dilation and two modulations"),
    );

    // Duflo–Moore form on y = ψψ*, two independent η, and against 1/ξ
    let exact = rep.inverse_frequency_form(&psi, &psi);
    let est = model.duflo_form(&eta, &psi, &psi);
    let est2 = model.duflo_form(&eta2, &psi, &psi);
    let duflo_residual = (est - exact).norm() / exact.norm();
    let cross = (est - est2).norm() / est.norm();
    reports.push(
        CheckReport::equality("duflo-expected", "inverse-frequency-multiplier", est, exact, 0.0, tol_rel)
            .with_note("quadrature estimate of τ(D^{-1/2}ψψ*D^{-1/2}) vs ∫|ψ̂|²/ξ"),
    );
    reports.push(CheckReport::defect("duflo-cross-check", "estimator-uniqueness", cross, 1.0, 0.0, tol_rel));

    // orthogonality: positive rank-one and general rank-one
    let lhs_pos = model.bracket_integral(&chi, &chi, &psi, &psi);
    let rhs_pos = inner(&chi, &chi) * est;
    let r_pos = CheckReport::equality("orthogonality", "orthogonality-relation", lhs_pos, rhs_pos, 0.0, tol_rel);
    let lhs_gen = model.bracket_integral(&chi, &eta2, &psi, &eta);
    let rhs_gen = inner(&eta2, &chi) * model.duflo_form(&eta, &psi, &eta).conj();
    let r_gen = CheckReport::equality("orthogonality-general", "orthogonality-relation", lhs_gen, rhs_gen, 0.0, tol_rel)
        .with_note("x = χη₂*, y = ψη*");
    let orth = r_pos.rel_err.max(r_gen.rel_err);
    reports.push(r_pos);
    reports.push(r_gen);

    // semi-invariance: τ_{D⁻¹}(h·y) = Δ(h)⁻¹ τ_{D⁻¹}(y)
    let mut semi: f64 = 0.0;
    for h in [[(2.0 * log_step).exp(), 0.25], [(-3.0 * log_step).exp(), -0.4]] {
        let moved = rep.apply(h, &psi)?;
        let lhs = model.duflo_form(&eta, &moved, &moved);
        let rhs = est / QuadratureGroup::modular(h);
        semi = semi.max((lhs - rhs).norm() / rhs.norm());
    }
    reports.push(CheckReport::defect("semi-invariance", "semi-invariance-of-D", semi, 1.0, 0.0, tol_rel));

    let row = RefinementRow {
        level: model.grid().level,
        nodes: model.group().len(),
        grid_points: rep.len(),
        orthogonality_residual: orth,
        semi_invariance_residual: semi,
        duflo_residual,
        cross_check_residual: cross,
    };
    Ok((reports, row))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_isometry() {
        let rep = WaveletRep::new(-3.0, 3.0, 0.05).unwrap();
        let v = rep.gaussian(0.2, 0.4, 0.5);
        let same = rep.apply(QuadratureGroup::identity(), &v).unwrap();
        assert_eq!(same, v);
        let g = [(0.05f64 * 7.0).exp(), 1.3];
        let w = rep.apply(g, &v).unwrap();
        assert!((inner(&w, &w).re - 1.0).abs() < 1e-10);
        assert!(rep.apply([1.234, 0.0], &v).is_err());
    }

    #[test]
    fn composition_on_grid() {
        let rep = WaveletRep::new(-3.0, 3.0, 0.05).unwrap();
        let v = rep.gaussian(0.0, 0.3, 0.2);
        let g = [(0.05f64 * 4.0).exp(), 0.3];
        let h = [(-0.05f64 * 6.0).exp(), -1.1];
        let lhs = rep.apply(g, &rep.apply(h, &v).unwrap()).unwrap();
        let rhs = rep.apply(QuadratureGroup::compose(g, h), &v).unwrap();
        assert!(lhs.iter().zip(&rhs).all(|(a, b)| (a - b).norm() < 1e-10));
    }

    #[test]
    fn ergodicity_proxy() {
        assert_eq!(sampled_ergodicity_dimension(8), 1);
    }
}
