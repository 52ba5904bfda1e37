//! Induced actions from a subgroup.
//!
//! `M = {x : G → N | x(g h⁻¹) = h·x(g)}` is stored by its values at coset representatives
//! `g_1 = e, g_2, …`, so `M ≅ N^{[G:H]}` with trace `τ(x) = Σ_n κ(x(g_n))`.
//! Writing `g⁻¹g_n = g_m h` gives `(g·x)(g_n) = h⁻¹·x(g_m)`.

use crate::actions::{Action, ActionKind, Transform};
use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;

#[derive(Clone, Debug)]
pub struct InducedAction {
    action: Action,
    inner: Action,
    embed: Vec<usize>,
    reps: Vec<usize>,
}

impl InducedAction {
    /// `embed[h]` is the image in `group` of element `h` of the inner group.
    pub fn new(inner: Action, group: FiniteGroup, embed: Vec<usize>) -> Result<Self> {
        group.check_embedding(inner.group(), &embed)?;
        if !inner.trace_preservation(1e-10).pass {
            return Err(Error::Action("inner action is not trace-preserving".into()));
        }
        if !inner.is_ergodic() {
            return Err(Error::Action("inner action is not ergodic".into()));
        }
        let reps = group.coset_representatives(&embed)?;
        let shape = inner.shape().repeat(reps.len())?;
        let h_index = |g: usize| embed.iter().position(|&e| e == g).expect("element of H");
        let transforms = group
            .elements()
            .map(|g| {
                Transform::from_fn(&shape, |x| {
                    let parts = split(&inner, &shape, x, reps.len());
                    let out = reps
                        .iter()
                        .map(|&gn| {
                            let (m, h) = group.coset_decompose(group.mul(group.inv(g), gn), &reps, &embed);
                            inner.apply(inner.group().inv(h_index(h)), &parts[m])
                        })
                        .collect::<Vec<_>>();
                    assemble(&shape, out)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let label = format!("induced:{}:{}:{}", group.label(), inner.group().label(), inner.label());
        let action = Action::new(label, ActionKind::Induced, shape, group, transforms)?;
        Ok(Self {
            action,
            inner,
            embed,
            reps,
        })
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn inner(&self) -> &Action {
        &self.inner
    }

    pub fn embedding(&self) -> &[usize] {
        &self.embed
    }

    pub fn coset_representatives(&self) -> &[usize] {
        &self.reps
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }

    /// `y(g_n)` for every coset representative.
    pub fn components(&self, y: &AlgebraElement) -> Vec<AlgebraElement> {
        split(&self.inner, self.action.shape(), y, self.reps.len())
    }

    pub fn from_components(&self, parts: Vec<AlgebraElement>) -> Result<AlgebraElement> {
        assemble(self.action.shape(), parts)
    }
}

fn split(inner: &Action, _shape: &AlgebraShape, x: &AlgebraElement, copies: usize) -> Vec<AlgebraElement> {
    let b = inner.shape().num_blocks();
    (0..copies)
        .map(|n| {
            let blocks = x.blocks()[n * b..(n + 1) * b].to_vec();
            AlgebraElement::from_blocks(inner.shape(), blocks).expect("repeated shape")
        })
        .collect()
}

fn assemble(shape: &AlgebraShape, parts: Vec<AlgebraElement>) -> Result<AlgebraElement> {
    let blocks = parts.into_iter().flat_map(|p| p.into_blocks()).collect();
    AlgebraElement::from_blocks(shape, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::conjugation_action;
    use crate::reps::UnitaryRep;

    fn pauli_induced() -> InducedAction {
        let inner = conjugation_action(&UnitaryRep::pauli().unwrap()).unwrap();
        let g = FiniteGroup::from_name("c2xc4").unwrap();
        let embed = g.canonical_embedding(inner.group()).unwrap();
        InducedAction::new(inner, g, embed).unwrap()
    }

    #[test]
    fn pauli_induced_to_c2xc4() {
        let ind = pauli_induced();
        let a = ind.action();
        assert_eq!(a.shape().block_dims(), &[2, 2]);
        assert_eq!(ind.index(), 2);
        assert_eq!(ind.coset_representatives()[0], 0);
        assert_eq!(a.fixed_point_dimension(), 1);
        assert!(a.trace_preservation(1e-12).pass);
        assert!(a.homomorphism_defect(0) < 1e-12);
        assert!(a.automorphism_defect(0, 10) < 1e-12);
        // τ(1) = [G:H]·κ(1)
        let one = AlgebraElement::identity(a.shape());
        assert!((one.trace().re - 2.0 * 2.0).abs() < 1e-12);
    }

    #[test]
    fn trivial_induction_recovers_inner() {
        let inner = conjugation_action(&UnitaryRep::pauli().unwrap()).unwrap();
        let g = inner.group().clone();
        let embed: Vec<usize> = g.elements().collect();
        let ind = InducedAction::new(inner.clone(), g, embed).unwrap();
        let x = crate::random::random_element(&mut crate::random::rng(9), inner.shape());
        for h in inner.group().elements() {
            let lhs = ind.action().apply(h, &x);
            assert!((&lhs - &inner.apply(h, &x)).max_abs_entry() < 1e-13);
        }
    }

    #[test]
    fn subgroup_elements_act_on_first_component_by_inner_action() {
        // for h ∈ H: (h·x)(e) = x(h⁻¹) = h·x(e)
        let ind = pauli_induced();
        let x = crate::random::random_element(&mut crate::random::rng(3), ind.action().shape());
        for (hi, &hg) in ind.embedding().iter().enumerate() {
            let lhs = ind.components(&ind.action().apply(hg, &x))[0].clone();
            let rhs = ind.inner().apply(hi, &ind.components(&x)[0]);
            assert!((&lhs - &rhs).max_abs_entry() < 1e-13);
        }
    }

    #[test]
    fn rejects_non_ergodic_inner() {
        let rep = UnitaryRep::trivial(FiniteGroup::cyclic(2).unwrap(), 2).unwrap();
        let inner = conjugation_action(&rep).unwrap();
        let g = FiniteGroup::cyclic(4).unwrap();
        let embed = g.canonical_embedding(inner.group()).unwrap();
        assert!(InducedAction::new(inner, g, embed).is_err());
    }
}
