//! Projective unitary representations of finite groups and their 2-cocycles.


use nalgebra::DMatrix;

use crate::algebra::{Mat, C64};
use crate::error::{Error, Result};
use crate::groups::{self, FiniteGroup};

/// Unitarity tolerance for representation matrices.
pub const UNITARY_TOL: f64 = 1e-11;
/// Tolerance for the cocycle identity and for `U_g U_h = σ(g,h) U_{gh}`.
pub const COCYCLE_TOL: f64 = 1e-10;

/// A 2-cocycle `σ: G×G → 𝕋` stored as a row-major `N×N` table.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle {
    order: usize,
    table: Vec<C64>,
}

impl Cocycle {
    pub fn trivial(group: &FiniteGroup) -> Self {
        let n = group.order();
        Self {
            order: n,
            table: vec![C64::new(1.0, 0.0); n * n],
        }
    }

    /// Validates `|σ| = 1`, `σ(e,e) = 1` and `σ(g,h)σ(gh,k) = σ(g,hk)σ(h,k)`.
    pub fn new(group: &FiniteGroup, f: impl Fn(usize, usize) -> C64) -> Result<Self> {
        let n = group.order();
        let table: Vec<C64> = (0..n * n).map(|i| f(i / n, i % n)).collect();
        let c = Self { order: n, table };
        c.validate(group)?;
        Ok(c)
    }

    /// `σ_m((a,b),(c,d)) = exp(2πi·m·b·c/n)` on `ℤ/n × ℤ/n`.
    pub fn heisenberg(group: &FiniteGroup, n: usize, m: usize) -> Result<Self> {
        if group.cyclic_factors() != Some(&[n, n][..]) {
            return Err(Error::Group(format!("Heisenberg cocycle needs c{n}xc{n}, got {}", group.label())));
        }
        Self::new(group, |g, h| {
            let (b, c) = (g % n, h / n);
            groups::root_of_unity(m * b * c, n)
        })
    }

    fn validate(&self, group: &FiniteGroup) -> Result<()> {
        let e = group.identity();
        if let Some(i) = self.table.iter().position(|z| (z.norm() - 1.0).abs() > COCYCLE_TOL) {
            return Err(Error::Cocycle {
                g: i / self.order,
                h: i % self.order,
                k: e,
                defect: (self.table[i].norm() - 1.0).abs(),
            });
        }
        let ee = (self.get(e, e) - 1.0).norm();
        if ee > COCYCLE_TOL {
            return Err(Error::Cocycle { g: e, h: e, k: e, defect: ee });
        }
        for g in group.elements() {
            for h in group.elements() {
                for k in group.elements() {
                    let lhs = self.get(g, h) * self.get(group.mul(g, h), k);
                    let rhs = self.get(g, group.mul(h, k)) * self.get(h, k);
                    let defect = (lhs - rhs).norm();
                    if defect > COCYCLE_TOL {
                        return Err(Error::Cocycle { g, h, k, defect });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, g: usize, h: usize) -> C64 {
        self.table[g * self.order + h]
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|z| (z - 1.0).norm() <= COCYCLE_TOL)
    }
}

/// `g ↦ U_g` with `U_g U_h = σ(g,h) U_{gh}`.
#[derive(Clone, Debug)]
pub struct UnitaryRep {
    label: String,
    group: FiniteGroup,
    dim: usize,
    matrices: Vec<Mat>,
    cocycle: Cocycle,
}

impl UnitaryRep {
    /// Validates unitarity and extracts the cocycle from `U_g U_h U_{gh}^*`.
    pub fn new(label: impl Into<String>, group: FiniteGroup, matrices: Vec<Mat>) -> Result<Self> {
        let n = group.order();
        if matrices.len() != n {
            return Err(Error::Shape(format!("{} matrices for a group of order {n}", matrices.len())));
        }
        let dim = matrices[0].nrows();
        if dim == 0 || matrices.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::Shape("representation matrices must be square of equal size".into()));
        }
        let id = DMatrix::<C64>::identity(dim, dim);
        for (g, u) in matrices.iter().enumerate() {
            let defect = max_entry(&(u.adjoint() * u - &id));
            if defect > UNITARY_TOL {
                return Err(Error::NonUnitary { element: g, defect });
            }
        }
        let d = dim as f64;
        let cocycle_fn = |g: usize, h: usize| -> C64 {
            // ⟨U_{gh}, U_g U_h⟩_HS / d
            (matrices[group.mul(g, h)].adjoint() * &matrices[g] * &matrices[h]).trace() / d
        };
        let table: Vec<C64> = (0..n * n).map(|i| cocycle_fn(i / n, i % n)).collect();
        for g in 0..n {
            for h in 0..n {
                let s = table[g * n + h];
                let defect = max_entry(&(&matrices[g] * &matrices[h] - &matrices[group.mul(g, h)] * s));
                if defect > COCYCLE_TOL || (s.norm() - 1.0).abs() > COCYCLE_TOL {
                    return Err(Error::Cocycle {
                        g,
                        h,
                        k: group.identity(),
                        defect: defect.max((s.norm() - 1.0).abs()),
                    });
                }
            }
        }
        let cocycle = Cocycle { order: n, table };
        cocycle.validate(&group)?;
        Ok(Self {
            label: label.into(),
            group,
            dim,
            matrices,
            cocycle,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &Mat {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[Mat] {
        &self.matrices
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn trivial(group: FiniteGroup, dim: usize) -> Result<Self> {
        let m = vec![DMatrix::identity(dim, dim); group.order()];
        Self::new("trivial", group, m)
    }

    /// One-dimensional character `g ↦ exp(2πi·k·g/n)` of `ℤ/n`.
    pub fn cyclic_character(n: usize, k: usize) -> Result<Self> {
        let group = FiniteGroup::cyclic(n)?;
        let m = (0..n)
            .map(|g| DMatrix::from_element(1, 1, groups::root_of_unity(k * g, n)))
            .collect();
        Self::new(format!("chi{k}"), group, m)
    }

    /// Irreducible representations of `S_n`: `trivial`, `sign` and `std` (the
    /// `(n−1)`-dimensional standard representation on the orthogonal complement of
    /// `(1,…,1)`, written in the Helmert basis).
    pub fn symmetric_irrep(n: usize, kind: &str) -> Result<Self> {
        let group = FiniteGroup::symmetric(n)?;
        let perms = groups::permutations(n);
        let perm_matrix = |p: &[usize]| {
            let mut m = DMatrix::<C64>::zeros(n, n);
            for (i, &pi) in p.iter().enumerate() {
                m[(pi, i)] = C64::new(1.0, 0.0);
            }
            m
        };
        let matrices: Vec<Mat> = match kind {
            "trivial" => vec![DMatrix::identity(1, 1); perms.len()],
            "sign" => perms
                .iter()
                .map(|p| DMatrix::from_element(1, 1, C64::new(permutation_sign(p), 0.0)))
                .collect(),
            "std" => {
                if n < 2 {
                    return Err(Error::Parameter("standard representation needs n >= 2".into()));
                }
                let b = helmert_basis(n);
                perms.iter().map(|p| b.adjoint() * perm_matrix(p) * &b).collect()
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown S{n} representation '{other}'; valid: trivial, sign, std"
                )))
            }
        };
        Self::new(kind, group, matrices)
    }

    /// `π(k,l) = T^k M^l` on `ℂⁿ`, with `(Tξ)(s) = ξ(s−1)` and `(Mξ)(s) = e^{2πis/n}ξ(s)`,
    /// indexed on `ℤ/n × ℤ/n` by `k·n + l`. Its cocycle is `σ((k,l),(k',l')) = e^{2πi·l·k'/n}`.
    pub fn finite_weyl_heisenberg(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("Weyl-Heisenberg needs n >= 2, got {n}")));
        }
        let c = FiniteGroup::cyclic(n)?;
        let group = FiniteGroup::product(&c, &c)?;
        let shift = |k: usize| {
            let mut m = DMatrix::<C64>::zeros(n, n);
            for s in 0..n {
                m[((s + k) % n, s)] = C64::new(1.0, 0.0);
            }
            m
        };
        let modulation = |l: usize| {
            DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    groups::root_of_unity(l * i, n)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        };
        let matrices = group.elements().map(|g| shift(g / n) * modulation(g % n)).collect();
        Self::new(format!("wh{n}"), group, matrices)
    }

    /// Pauli representation of `ℤ/2 × ℤ/2` on `ℂ²`: `I, Z, X, XZ`.
    pub fn pauli() -> Result<Self> {
        let mut rep = Self::finite_weyl_heisenberg(2)?;
        rep.label = "pauli".into();
        Ok(rep)
    }

    /// `(λ_σ(g)ξ)(h) = σ(g, g⁻¹h) ξ(g⁻¹h)` on `ℓ²(G)`.
    pub fn twisted_regular(group: FiniteGroup, cocycle: &Cocycle) -> Result<Self> {
        let n = group.order();
        let matrices = group
            .elements()
            .map(|g| {
                let mut m = DMatrix::<C64>::zeros(n, n);
                for k in group.elements() {
                    m[(group.mul(g, k), k)] = cocycle.get(g, k);
                }
                m
            })
            .collect();
        let rep = Self::new("twisted-regular", group, matrices)?;
        let defect = (0..n * n)
            .map(|i| (rep.cocycle.table[i] - cocycle.table[i]).norm())
            .fold(0.0, f64::max);
        if defect > COCYCLE_TOL {
            return Err(Error::Cocycle {
                g: 0,
                h: 0,
                k: 0,
                defect,
            });
        }
        Ok(rep)
    }
}

pub(crate) fn max_entry(m: &Mat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn permutation_sign(p: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `n × (n−1)` isometry onto `(1,…,1)^⊥`; column `k` is `(1,…,1,−k,0,…)/√(k(k+1))`.
fn helmert_basis(n: usize) -> Mat {
    DMatrix::from_fn(n, n - 1, |i, j| {
        let k = j + 1;
        let norm = ((k * (k + 1)) as f64).sqrt();
        let v = match i.cmp(&k) {
            std::cmp::Ordering::Less => 1.0,
            std::cmp::Ordering::Equal => -(k as f64),
            std::cmp::Ordering::Greater => 0.0,
        };
        C64::new(v / norm, 0.0)
    })
}
