//! Actions of finite groups on finite-dimensional tracial algebras.

use std::fmt;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraShape, Mat, C64};
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::linalg::{null_space, NULLSPACE_THRESHOLD};
use crate::random;
use crate::report::CheckReport;
use crate::reps::UnitaryRep;

/// How a single group element acts.
#[derive(Clone, Debug)]
pub enum Transform {
    /// `x ↦ U x U*` blockwise.
    Conjugation(Vec<Mat>),
    /// On a diagonal algebra: `(g·x)(t) = x(src[t])`.
    Permutation(Vec<usize>),
    /// Matrix acting on [`AlgebraElement::to_vector`] coordinates.
    Linear(DMatrix<C64>),
}

impl Transform {
    /// Linearizes an arbitrary map by evaluating it on the matrix-unit basis.
    pub fn from_fn(shape: &AlgebraShape, f: impl Fn(&AlgebraElement) -> Result<AlgebraElement>) -> Result<Self> {
        let basis = shape.basis();
        let dim = basis.len();
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for (j, e) in basis.iter().enumerate() {
            let image = f(e)?;
            m.set_column(j, &image.to_vector());
        }
        Ok(Self::Linear(m))
    }

    fn apply(&self, shape: &AlgebraShape, x: &AlgebraElement) -> AlgebraElement {
        match self {
            Self::Conjugation(us) => {
                let blocks = x
                    .blocks()
                    .iter()
                    .zip(us)
                    .map(|(b, u)| u * b * u.adjoint())
                    .collect();
                AlgebraElement::from_blocks(shape, blocks).expect("shape checked")
            }
            Self::Permutation(src) => {
                let blocks = src.iter().map(|&s| x.block(s).clone()).collect();
                AlgebraElement::from_blocks(shape, blocks).expect("shape checked")
            }
            Self::Linear(m) => AlgebraElement::from_vector(shape, &(m * x.to_vector())).expect("shape checked"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionKind {
    Conjugation,
    Permutation,
    TwistedDual,
    Induced,
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Conjugation => "conjugation",
            Self::Permutation => "permutation",
            Self::TwistedDual => "twisted-dual",
            Self::Induced => "induced",
        })
    }
}

/// `(g, x) ↦ g·x` for a finite group acting on an algebra of fixed shape.
#[derive(Clone, Debug)]
pub struct Action {
    label: String,
    kind: ActionKind,
    shape: AlgebraShape,
    group: FiniteGroup,
    transforms: Vec<Transform>,
}

impl Action {
    /// Checks arity and that the identity element acts trivially.
    pub fn new(
        label: impl Into<String>,
        kind: ActionKind,
        shape: AlgebraShape,
        group: FiniteGroup,
        transforms: Vec<Transform>,
    ) -> Result<Self> {
        if transforms.len() != group.order() {
            return Err(Error::Action(format!(
                "{} transforms for a group of order {}",
                transforms.len(),
                group.order()
            )));
        }
        let dim = shape.dimension();
        for t in &transforms {
            let ok = match t {
                Transform::Conjugation(us) => {
                    us.len() == shape.num_blocks()
                        && us.iter().zip(shape.block_dims()).all(|(u, &n)| u.nrows() == n && u.ncols() == n)
                }
                Transform::Permutation(src) => {
                    shape.block_dims().iter().all(|&n| n == 1)
                        && src.len() == shape.num_blocks()
                        && src.iter().all(|&s| s < src.len())
                }
                Transform::Linear(m) => m.nrows() == dim && m.ncols() == dim,
            };
            if !ok {
                return Err(Error::Action("transform does not match the algebra shape".into()));
            }
        }
        let action = Self {
            label: label.into(),
            kind,
            shape,
            group,
            transforms,
        };
        let e = action.group.identity();
        let defect = action
            .shape
            .basis()
            .iter()
            .map(|b| (&action.apply(e, b) - b).max_abs_entry())
            .fold(0.0, f64::max);
        if defect > 1e-10 {
            return Err(Error::Action(format!("identity acts nontrivially (defect {defect:.3e})")));
        }
        Ok(action)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> ActionKind {
        self.kind
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn transform(&self, g: usize) -> &Transform {
        &self.transforms[g]
    }

    /// `g·x`. Panics if `x` has a different block structure.
    pub fn apply(&self, g: usize, x: &AlgebraElement) -> AlgebraElement {
        assert_eq!(
            x.shape().block_dims(),
            self.shape.block_dims(),
            "element shape does not match the action's algebra"
        );
        self.transforms[g].apply(&self.shape, x)
    }

    pub fn try_apply(&self, g: usize, x: &AlgebraElement) -> Result<AlgebraElement> {
        if x.shape().block_dims() != self.shape.block_dims() {
            return Err(Error::Shape(format!(
                "element of shape {} in action on {}",
                x.shape(),
                self.shape
            )));
        }
        Ok(self.transforms[g].apply(&self.shape, x))
    }

    /// Matrix of `x ↦ g·x` in `to_vector` coordinates.
    pub fn linear_map(&self, g: usize) -> DMatrix<C64> {
        if let Transform::Linear(m) = &self.transforms[g] {
            return m.clone();
        }
        let basis = self.shape.basis();
        let mut m = DMatrix::<C64>::zeros(basis.len(), basis.len());
        for (j, e) in basis.iter().enumerate() {
            m.set_column(j, &self.apply(g, e).to_vector());
        }
        m
    }

    /// Basis of the fixed-point algebra, from the joint nullspace of `(g·) − id` over generators.
    pub fn fixed_points(&self) -> Vec<AlgebraElement> {
        let dim = self.shape.dimension();
        let gens = self.group.generators();
        let mut stacked = DMatrix::<C64>::zeros(gens.len().max(1) * dim, dim);
        for (i, &g) in gens.iter().enumerate() {
            let m = self.linear_map(g) - DMatrix::<C64>::identity(dim, dim);
            stacked.view_mut((i * dim, 0), (dim, dim)).copy_from(&m);
        }
        null_space(&stacked, NULLSPACE_THRESHOLD)
            .iter()
            .map(|v| AlgebraElement::from_vector(&self.shape, v).expect("dimension matches"))
            .collect()
    }

    pub fn fixed_point_dimension(&self) -> usize {
        self.fixed_points().len()
    }

    /// Ergodic ⇔ only scalars are fixed.
    pub fn is_ergodic(&self) -> bool {
        self.fixed_point_dimension() == 1
    }

    /// `max |τ(g·x) − τ(x)|` over generators `g` and the matrix-unit basis.
    pub fn trace_preservation(&self, tol: f64) -> CheckReport {
        let basis = self.shape.basis();
        let mut defect: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for b in &basis {
            scale = scale.max(b.trace().norm());
        }
        for g in self.group.generators() {
            for b in &basis {
                defect = defect.max((self.apply(g, b).trace() - b.trace()).norm());
            }
        }
        CheckReport::defect("trace-preservation", "trace-invariance", defect, scale, tol, 0.0)
    }

    /// `max ‖g·(h·x) − (gh)·x‖` over all pairs (order ≤ 16) or 256 seeded pairs.
    pub fn homomorphism_defect(&self, seed: u64) -> f64 {
        let n = self.group.order();
        let maps: Vec<DMatrix<C64>> = self.group.elements().map(|g| self.linear_map(g)).collect();
        let pairs: Vec<(usize, usize)> = if n <= 16 {
            (0..n).flat_map(|g| (0..n).map(move |h| (g, h))).collect()
        } else {
            let mut rng = random::rng(seed);
            (0..256).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
        };
        pairs
            .into_iter()
            .map(|(g, h)| {
                let d = &maps[g] * &maps[h] - &maps[self.group.mul(g, h)];
                d.iter().map(|z| z.norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Relative defects of multiplicativity, `*`-preservation and unitality on seeded inputs.
    pub fn automorphism_defect(&self, seed: u64, trials: usize) -> f64 {
        let mut rng = random::rng(seed);
        let one = AlgebraElement::identity(&self.shape);
        let mut worst: f64 = 0.0;
        for g in self.group.elements() {
            worst = worst.max((&self.apply(g, &one) - &one).op_norm());
        }
        for _ in 0..trials {
            let g = rng.gen_range(0..self.group.order());
            let x = random::random_element(&mut rng, &self.shape);
            let y = random::random_element(&mut rng, &self.shape);
            let scale = x.op_norm() * y.op_norm();
            let mult = (&self.apply(g, &(&x * &y)) - &(&self.apply(g, &x) * &self.apply(g, &y))).op_norm();
            let star = (&self.apply(g, &x.adjoint()) - &self.apply(g, &x).adjoint()).op_norm();
            worst = worst.max(mult / scale).max(star / x.op_norm());
        }
        worst
    }

    /// `max_g |‖g·x‖_p − ‖x‖_p| / ‖x‖_p` on seeded inputs.
    pub fn isometry_defect(&self, p: f64, seed: u64, trials: usize) -> Result<f64> {
        let mut rng = random::rng(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..trials {
            let x = random::random_element(&mut rng, &self.shape);
            let base = x.p_norm(p)?;
            for g in self.group.generators() {
                worst = worst.max((self.apply(g, &x).p_norm(p)? - base).abs() / base);
            }
        }
        Ok(worst)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} action {} of {} on {}", self.kind, self.label, self.group, self.shape)
    }
}

/// `g·x = U_g x U_g*` on `M_d` with the standard trace. Cocycle phases cancel.
pub fn conjugation_action(rep: &UnitaryRep) -> Result<Action> {
    let shape = AlgebraShape::full_matrix(rep.dim())?;
    let transforms = rep
        .matrices()
        .iter()
        .map(|u| Transform::Conjugation(vec![u.clone()]))
        .collect();
    Action::new(rep.label(), ActionKind::Conjugation, shape, rep.group().clone(), transforms)
}

/// `ℓ^∞(T)` with `(g·x)(t) = x(g⁻¹t)`, where `point_map[g][t] = g·t`, and trace weights `μ`.
/// Rejects maps that are not group actions and measures that are not invariant.
pub fn permutation_action(group: FiniteGroup, point_map: Vec<Vec<usize>>, mu: Vec<f64>) -> Result<Action> {
    validate_point_action(&group, &point_map)?;
    for g in group.elements() {
        for (t, &gt) in point_map[g].iter().enumerate() {
            if (mu[gt] - mu[t]).abs() > 1e-12 * mu[t].abs().max(1.0) {
                return Err(Error::NonInvariantMeasure {
                    point: t,
                    mass: mu[t],
                    image_mass: mu[gt],
                });
            }
        }
    }
    permutation_action_unchecked(group, point_map, mu)
}

/// Same as [`permutation_action`] but keeps a non-invariant measure, so the
/// trace-preservation check can be seen to fail.
pub fn permutation_action_unchecked(group: FiniteGroup, point_map: Vec<Vec<usize>>, mu: Vec<f64>) -> Result<Action> {
    validate_point_action(&group, &point_map)?;
    if mu.len() != point_map[0].len() {
        return Err(Error::Shape("measure length differs from point count".into()));
    }
    let shape = AlgebraShape::diagonal(mu)?;
    let transforms = group
        .elements()
        .map(|g| Transform::Permutation(point_map[group.inv(g)].clone()))
        .collect();
    Action::new("permutation", ActionKind::Permutation, shape, group, transforms)
}

fn validate_point_action(group: &FiniteGroup, point_map: &[Vec<usize>]) -> Result<()> {
    if point_map.len() != group.order() || point_map.is_empty() {
        return Err(Error::Action("one point map per group element required".into()));
    }
    let npts = point_map[0].len();
    if npts == 0 || point_map.iter().any(|m| m.len() != npts || m.iter().any(|&t| t >= npts)) {
        return Err(Error::Action("point maps must be functions on a common point set".into()));
    }
    if point_map[group.identity()].iter().enumerate().any(|(t, &s)| t != s) {
        return Err(Error::Action("identity must fix every point".into()));
    }
    for g in group.elements() {
        for h in group.elements() {
            let gh = group.mul(g, h);
            if (0..npts).any(|t| point_map[g][point_map[h][t]] != point_map[gh][t]) {
                return Err(Error::Action(format!("point maps violate (gh)·t = g·(h·t) at g={g}, h={h}")));
            }
        }
    }
    Ok(())
}

/// Left translation of `G` on itself with counting measure.
pub fn translation_action(group: FiniteGroup) -> Result<Action> {
    let maps = group.elements().map(|g| group.elements().map(|t| group.mul(g, t)).collect()).collect();
    let mu = vec![1.0; group.order()];
    let mut a = permutation_action(group, maps, mu)?;
    a.label = format!("translation:{}", a.group.label());
    Ok(a)
}

/// `G` acting on left cosets `G/H` (indexed by coset representatives) with counting measure.
pub fn coset_action(group: FiniteGroup, subgroup: &[usize]) -> Result<Action> {
    let reps = group.coset_representatives(subgroup)?;
    let maps = group
        .elements()
        .map(|g| {
            reps.iter()
                .map(|&r| group.coset_decompose(group.mul(g, r), &reps, subgroup).0)
                .collect()
        })
        .collect();
    let mu = vec![1.0; reps.len()];
    let mut a = permutation_action(group, maps, mu)?;
    a.label = format!("cosets:{}", a.group.label());
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_rep_gives_identity_action() {
        let rep = UnitaryRep::trivial(FiniteGroup::cyclic(3).unwrap(), 2).unwrap();
        let a = conjugation_action(&rep).unwrap();
        let x = random::random_element(&mut random::rng(1), a.shape());
        for g in a.group().elements() {
            assert_eq!(a.apply(g, &x), x);
        }
        assert_eq!(a.fixed_point_dimension(), 4);
    }

    #[test]
    fn pauli_action_is_ergodic() {
        let a = conjugation_action(&UnitaryRep::pauli().unwrap()).unwrap();
        assert_eq!(a.fixed_point_dimension(), 1);
        let one = AlgebraElement::identity(a.shape());
        for g in a.group().elements() {
            assert!((&a.apply(g, &one) - &one).max_abs_entry() < 1e-15);
        }
        assert!(a.homomorphism_defect(0) < 1e-12);
        assert!(a.automorphism_defect(0, 10) < 1e-12);
    }

    #[test]
    fn translation_and_coset_actions() {
        let t = translation_action(FiniteGroup::cyclic(5).unwrap()).unwrap();
        assert_eq!(t.fixed_point_dimension(), 1);
        let c6 = FiniteGroup::cyclic(6).unwrap();
        let c = coset_action(c6, &[0, 2, 4]).unwrap();
        assert_eq!(c.shape().num_blocks(), 2);
        assert_eq!(c.fixed_point_dimension(), 1);
        assert!(c.trace_preservation(1e-12).pass);
    }

    #[test]
    fn translation_moves_indicator_forward() {
        // (g·δ_t) = δ_{g t}
        let g = FiniteGroup::cyclic(4).unwrap();
        let a = translation_action(g).unwrap();
        let mut v = vec![C64::new(0.0, 0.0); 4];
        v[1] = C64::new(1.0, 0.0);
        let x = AlgebraElement::from_diagonal(a.shape(), &v).unwrap();
        let y = a.apply(1, &x);
        assert_eq!(y.block(2)[(0, 0)], C64::new(1.0, 0.0));
    }

    #[test]
    fn trivial_group_on_two_points() {
        let g = FiniteGroup::cyclic(1).unwrap();
        let a = permutation_action(g, vec![vec![0, 1]], vec![1.0, 2.0]).unwrap();
        assert_eq!(a.fixed_point_dimension(), 2);
        assert!(!a.is_ergodic());
    }

    #[test]
    fn non_invariant_measure() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let maps = vec![vec![0, 1], vec![1, 0]];
        assert!(matches!(
            permutation_action(g.clone(), maps.clone(), vec![1.0, 2.0]),
            Err(Error::NonInvariantMeasure { .. })
        ));
        let a = permutation_action_unchecked(g, maps, vec![1.0, 2.0]).unwrap();
        assert!(!a.trace_preservation(1e-10).pass);
    }

    #[test]
    fn rejects_non_action_point_maps() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let maps = vec![vec![0, 1, 2], vec![1, 0, 2], vec![1, 0, 2]];
        assert!(permutation_action(g, maps, vec![1.0; 3]).is_err());
    }

    #[test]
    fn isometry_on_lp() {
        let a = conjugation_action(&UnitaryRep::symmetric_irrep(3, "std").unwrap()).unwrap();
        for p in [1.0, 2.0, 3.0, f64::INFINITY] {
            assert!(a.isometry_defect(p, 4, 5).unwrap() < 1e-9);
        }
    }
}
