//! Twisted group algebras of `ℤ/n × ℤ/n` and the dual action of the character group.
//!
//! For `σ_m((a,b),(c,d)) = e^{2πi·m·b·c/n}` let `g = gcd(m, n)`, `d₀ = n/g`, `m' = m/g`.
//! The algebra spanned by `λ_σ(a,b)` splits into `g²` blocks `M_{d₀}`:
//! `λ(a,b) ↦ ⊕_{s,t ∈ ℤ/g} χ_{s,t}(a,b)·T^a M^{m'b}` with `χ_{s,t}(a,b) = e^{2πi(sa+tb)/n}`,
//! `T` the cyclic shift and `M` the modulation by `e^{2πi/d₀}` on `ℂ^{d₀}`. Trace weights
//! `1/(d₀g²)` give the Plancherel trace `τ(λ(f)) = f(e)`.

use nalgebra::DMatrix;

use crate::actions::{Action, ActionKind, Transform};
use crate::algebra::{AlgebraElement, AlgebraShape, Mat, C64};
use crate::error::{Error, Result};
use crate::groups::{root_of_unity, CharacterTable, FiniteGroup};
use crate::reps::Cocycle;

/// Residual above which an element is reported as outside the span of the `λ_σ(g)`.
pub const SYMBOL_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct TwistedAlgebra {
    n: usize,
    m: usize,
    group: FiniteGroup,
    cocycle: Cocycle,
    shape: AlgebraShape,
    lambda: Vec<AlgebraElement>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl TwistedAlgebra {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Parameter("twisted algebra needs n >= 1".into()));
        }
        let m = m % n;
        let g = gcd(m, n);
        let d0 = n / g;
        let mp = m / g;
        let c = FiniteGroup::cyclic(n)?;
        let group = FiniteGroup::product(&c, &c)?;
        let cocycle = Cocycle::heisenberg(&group, n, m)?;
        let weight = 1.0 / (d0 * g * g) as f64;
        let shape = AlgebraShape::new(vec![d0; g * g], vec![weight; g * g])?;
        let shift_mod = |a: usize, j: usize| -> Mat {
            // T^a M^j on ℂ^{d₀}: (T^a M^j ξ)(s) = ω^{j(s−a)} ξ(s−a)
            let mut mat = DMatrix::<C64>::zeros(d0, d0);
            for s in 0..d0 {
                mat[((s + a) % d0, s)] = root_of_unity(j * s, d0);
            }
            mat
        };
        let lambda = group
            .elements()
            .map(|x| {
                let (a, b) = (x / n, x % n);
                let core = shift_mod(a % d0, (mp * b) % d0);
                let blocks = (0..g * g)
                    .map(|st| {
                        let (s, t) = (st / g, st % g);
                        &core * root_of_unity(s * a + t * b, n)
                    })
                    .collect();
                AlgebraElement::from_blocks(&shape, blocks)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            m,
            group,
            cocycle,
            shape,
            lambda,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn lambda(&self, g: usize) -> &AlgebraElement {
        &self.lambda[g]
    }

    /// `f(g) = τ(λ(g)* x)`.
    pub fn symbol(&self, x: &AlgebraElement) -> Result<Vec<C64>> {
        self.lambda.iter().map(|l| l.adjoint().trace_product(x)).collect()
    }

    /// `λ(f) = Σ_g f(g) λ(g)`.
    pub fn from_symbol(&self, f: &[C64]) -> AlgebraElement {
        let mut acc = AlgebraElement::zeros(&self.shape);
        for (l, &c) in self.lambda.iter().zip(f) {
            acc = &acc + &l.scale(c);
        }
        acc
    }

    /// `‖x − λ(symbol(x))‖_∞`.
    pub fn symbol_residual(&self, x: &AlgebraElement) -> Result<f64> {
        let f = self.symbol(x)?;
        Ok((x - &self.from_symbol(&f)).op_norm())
    }

    /// The dual group `Ĝ ≅ ℤ/n × ℤ/n` acting by `ω·λ(f) = λ(ωf)`.
    pub fn dual_action(&self) -> Result<(Action, CharacterTable)> {
        let chars = self.group.dual_group()?;
        let c = FiniteGroup::cyclic(self.n)?;
        let dual = FiniteGroup::product(&c, &c)?;
        let basis = self.shape.basis();
        for b in &basis {
            let r = self.symbol_residual(b)?;
            if r > SYMBOL_TOL {
                return Err(Error::Action(format!("symbol recovery residual {r:.3e}")));
            }
        }
        let transforms = (0..chars.len())
            .map(|k| {
                Transform::from_fn(&self.shape, |x| {
                    let f = self.symbol(x)?;
                    let wf: Vec<C64> = f.iter().zip(chars.character(k)).map(|(a, w)| a * w).collect();
                    Ok(self.from_symbol(&wf))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let action = Action::new(
            format!("twisted-dual:{}:{}", self.n, self.m),
            ActionKind::TwistedDual,
            self.shape.clone(),
            dual,
            transforms,
        )?;
        Ok((action, chars))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_is_projective_with_the_heisenberg_cocycle() {
        for (n, m) in [(2, 1), (3, 1), (4, 2), (4, 0), (6, 4)] {
            let t = TwistedAlgebra::new(n, m).unwrap();
            let g = t.group();
            for a in g.elements() {
                for b in g.elements() {
                    let lhs = t.lambda(a) * t.lambda(b);
                    let rhs = t.lambda(g.mul(a, b)).scale(t.cocycle().get(a, b));
                    assert!((&lhs - &rhs).max_abs_entry() < 1e-12, "n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn plancherel_trace() {
        for (n, m) in [(3, 1), (4, 2), (8, 0)] {
            let t = TwistedAlgebra::new(n, m).unwrap();
            for x in t.group().elements() {
                let expect = if x == 0 { 1.0 } else { 0.0 };
                assert!((t.lambda(x).trace() - C64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn untwisted_case_is_commutative() {
        let t = TwistedAlgebra::new(8, 0).unwrap();
        assert!(t.shape().is_commutative());
        assert_eq!(t.shape().num_blocks(), 64);
    }

    #[test]
    fn dual_action_properties() {
        let t = TwistedAlgebra::new(4, 0).unwrap();
        let (a, _) = t.dual_action().unwrap();
        // trivial character acts trivially
        let x = crate::random::random_element(&mut crate::random::rng(2), t.shape());
        assert!((&a.apply(0, &x) - &x).max_abs_entry() < 1e-12);
        // τ(ω·x) = τ(x)
        for w in a.group().elements() {
            assert!((a.apply(w, &x).trace() - x.trace()).norm() < 1e-12);
        }
        assert_eq!(a.fixed_point_dimension(), 1);
        assert!(a.homomorphism_defect(0) < 1e-10);
    }

    #[test]
    fn dual_action_on_nondegenerate_twist_is_ergodic() {
        let t = TwistedAlgebra::new(3, 1).unwrap();
        let (a, _) = t.dual_action().unwrap();
        assert_eq!(a.fixed_point_dimension(), 1);
        assert!(a.automorphism_defect(1, 5) < 1e-10);
    }
}
