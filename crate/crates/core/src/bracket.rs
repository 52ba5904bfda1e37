//! The bracket `⟨x|y⟩(g) = τ((g·y)* x)` as a sampled function on a finite group,
//! its Haar integral and `Lʳ(G)` norms, and convolution of weights by functions.

use std::fmt::Write as _;

use crate::actions::Action;
use crate::algebra::{AlgebraElement, WeightKernel, C64};
use crate::error::{Error, Result};
use crate::groups::HaarModel;

/// Values of a function on the group's nodes together with the Haar weights used to
/// integrate it.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketFunction {
    values: Vec<C64>,
    weights: Vec<f64>,
    labels: Vec<String>,
    provenance: String,
}

impl BracketFunction {
    pub fn new(values: Vec<C64>, haar: &HaarModel, labels: Vec<String>, provenance: impl Into<String>) -> Result<Self> {
        if values.len() != haar.weights().len() || labels.len() != values.len() {
            return Err(Error::Shape(format!(
                "{} values for {} nodes",
                values.len(),
                haar.weights().len()
            )));
        }
        Ok(Self {
            values,
            weights: haar.weights().to_vec(),
            labels,
            provenance: provenance.into(),
        })
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn value(&self, node: usize) -> C64 {
        self.values[node]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// `Σ_i w_i v_i`, summed in node order.
    pub fn integrate(&self) -> C64 {
        self.values
            .iter()
            .zip(&self.weights)
            .fold(C64::new(0.0, 0.0), |acc, (v, &w)| acc + v * w)
    }

    /// `(Σ_i w_i |v_i|^r)^{1/r}`; `r = ∞` gives `max |v_i|`.
    pub fn p_norm(&self, r: f64) -> Result<f64> {
        if r.is_nan() || r < 1.0 {
            return Err(Error::Parameter(format!("L^r norm needs r >= 1, got {r}")));
        }
        if r.is_infinite() {
            return Ok(self.values.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
        let s: f64 = self
            .values
            .iter()
            .zip(&self.weights)
            .map(|(v, &w)| w * v.norm().powf(r))
            .sum();
        Ok(s.powf(1.0 / r))
    }

    /// Two tab-separated columns: node label and value `re+imi`.
    pub fn to_table(&self) -> String {
        let mut out = String::from("node\tvalue\n");
        for (l, v) in self.labels.iter().zip(&self.values) {
            let _ = writeln!(out, "{l}\t{:.15e}{:+.15e}i", v.re, v.im);
        }
        out
    }
}

/// `g ↦ τ((g·y)* x)` on every group element.
pub fn bracket_values(action: &Action, x: &AlgebraElement, y: &AlgebraElement) -> Result<Vec<C64>> {
    check_shapes(action, x, y)?;
    Ok(action
        .group()
        .elements()
        .map(|g| action.apply(g, y).adjoint().trace_product(x).expect("shapes checked"))
        .collect())
}

pub fn bracket(action: &Action, haar: &HaarModel, x: &AlgebraElement, y: &AlgebraElement) -> Result<BracketFunction> {
    let values = bracket_values(action, x, y)?;
    let labels = action
        .group()
        .elements()
        .map(|g| action.group().element_label(g).to_string())
        .collect();
    BracketFunction::new(values, haar, labels, format!("bracket on {}", action.label()))
}

/// `∫_G ⟨x|y⟩ dm`.
pub fn integrate_bracket(action: &Action, haar: &HaarModel, x: &AlgebraElement, y: &AlgebraElement) -> Result<C64> {
    Ok(bracket(action, haar, x, y)?.integrate())
}

fn check_shapes(action: &Action, x: &AlgebraElement, y: &AlgebraElement) -> Result<()> {
    for e in [x, y] {
        if e.shape().block_dims() != action.shape().block_dims() {
            return Err(Error::Shape(format!("element of shape {} for action on {}", e.shape(), action.shape())));
        }
    }
    Ok(())
}

/// For positive `x, y`: `max_g |τ((g·y)* x) − τ(x^{1/2} (g·y) x^{1/2})|`.
pub fn path_pair_defect(action: &Action, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    let direct = bracket_values(action, x, y)?;
    let root = x.positive_sqrt()?;
    let mut worst: f64 = 0.0;
    for (g, d) in direct.iter().enumerate() {
        let sandwiched = (&(&root * &action.apply(g, y)) * &root).trace();
        worst = worst.max((d - sandwiched).norm());
    }
    Ok(worst)
}

/// `max_g |⟨x|y⟩(g⁻¹) − ⟨y|x⟩(g)|` for positive `x, y`.
pub fn symmetry_defect(action: &Action, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    let xy = bracket_values(action, x, y)?;
    let yx = bracket_values(action, y, x)?;
    let grp = action.group();
    Ok(grp
        .elements()
        .map(|g| (xy[grp.inv(g)] - yx[g]).norm())
        .fold(0.0, f64::max))
}

/// Kernel of `f * φ_K`: `Σ_g w_g f(g) (g·K)`, so that `(f*φ)(x) = ∫ f(g) φ(g⁻¹x) dg`.
pub fn convolve_kernel(action: &Action, haar: &HaarModel, f: &[C64], kernel: &AlgebraElement) -> Result<AlgebraElement> {
    if f.len() != action.group().order() {
        return Err(Error::Shape(format!("function has {} values for group of order {}", f.len(), action.group().order())));
    }
    let mut acc = AlgebraElement::zeros(action.shape());
    for (g, (&fg, &w)) in f.iter().zip(haar.weights()).enumerate() {
        if fg != C64::new(0.0, 0.0) {
            acc = &acc + &action.try_apply(g, kernel)?.scale(fg * w);
        }
    }
    Ok(acc)
}

/// `f * φ` for a positive function `f`; fails if the result is not a positive kernel.
pub fn convolve_weight(action: &Action, haar: &HaarModel, f: &[f64], weight: &WeightKernel) -> Result<WeightKernel> {
    if f.iter().any(|&v| v < 0.0) {
        return Err(Error::Parameter("weight convolution needs a nonnegative function".into()));
    }
    let fc: Vec<C64> = f.iter().map(|&v| C64::new(v, 0.0)).collect();
    let k = convolve_kernel(action, haar, &fc, weight.kernel())?;
    WeightKernel::new(k.hermitian_part())
}
