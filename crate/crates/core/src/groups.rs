//! Group models with Haar integration.
//!
//! Finite groups are stored by multiplication table. The continuous affine group
//! `{(a, b) : a > 0}` is represented by a quadrature rule: exact parameter maps for
//! composition and inversion, plus a finite node set carrying left Haar weights.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::C64;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    identity: usize,
    labels: Vec<String>,
    /// Orders of the cyclic factors when the group was built as a product of cyclic
    /// groups; element indices are then mixed-radix digits (first factor most significant).
    cyclic_factors: Option<Vec<usize>>,
}

impl FiniteGroup {
    /// Builds a group from a row-major multiplication table `table[a*N + b] = a·b`.
    pub fn from_table(label: impl Into<String>, order: usize, table: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        let label = label.into();
        if order == 0 {
            return Err(Error::Group("group must have at least one element".into()));
        }
        if table.len() != order * order || labels.len() != order {
            return Err(Error::Group(format!("table/labels do not match order {order}")));
        }
        if table.iter().any(|&v| v >= order) {
            return Err(Error::Group("table entry out of range".into()));
        }
        // Latin square
        for a in 0..order {
            let mut row = vec![false; order];
            let mut col = vec![false; order];
            for b in 0..order {
                row[table[a * order + b]] = true;
                col[table[b * order + a]] = true;
            }
            if row.iter().chain(col.iter()).any(|seen| !seen) {
                return Err(Error::Group(format!("{label}: table is not a Latin square")));
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| table[e * order + a] == a && table[a * order + e] == a))
            .ok_or_else(|| Error::Group(format!("{label}: no identity element")))?;
        let mut inverse = vec![0; order];
        for a in 0..order {
            inverse[a] = (0..order)
                .find(|&b| table[a * order + b] == identity)
                .expect("Latin square has a solution");
            if table[inverse[a] * order + a] != identity {
                return Err(Error::Group(format!("{label}: left and right inverses differ")));
            }
        }
        let g = Self {
            label,
            order,
            table,
            inverse,
            identity,
            labels,
            cyclic_factors: None,
        };
        g.check_associativity()?;
        Ok(g)
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        let triples: Box<dyn Iterator<Item = (usize, usize, usize)>> = if n <= 24 {
            Box::new((0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))))
        } else {
            // deterministic sample of ~20k triples
            let mut state = 0x9e37_79b9_7f4a_7c15u64;
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % n as u64) as usize
            };
            Box::new((0..20_000).map(move |_| (next(), next(), next())))
        };
        for (a, b, c) in triples {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::Group(format!(
                    "{}: associativity fails at ({a}, {b}, {c})",
                    self.label
                )));
            }
        }
        Ok(())
    }

    /// `ℤ/n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Group("cyclic group order must be positive".into()));
        }
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let labels = (0..n).map(|k| k.to_string()).collect();
        let mut g = Self::from_table(format!("c{n}"), n, table, labels)?;
        g.cyclic_factors = Some(vec![n]);
        Ok(g)
    }

    /// Direct product; element `(a, b)` has index `a·|H| + b`.
    pub fn product(g: &Self, h: &Self) -> Result<Self> {
        let (ng, nh) = (g.order, h.order);
        let n = ng * nh;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let (xa, xb) = (x / nh, x % nh);
                let (ya, yb) = (y / nh, y % nh);
                table[x * n + y] = g.mul(xa, ya) * nh + h.mul(xb, yb);
            }
        }
        let labels = (0..n)
            .map(|x| format!("({},{})", g.labels[x / nh], h.labels[x % nh]))
            .collect();
        let mut out = Self::from_table(format!("{}x{}", g.label, h.label), n, table, labels)?;
        out.cyclic_factors = match (&g.cyclic_factors, &h.cyclic_factors) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Ok(out)
    }

    /// Symmetric group on `n ≤ 5` letters; elements are permutations in lexicographic
    /// order with `(σ·π)(i) = σ(π(i))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return Err(Error::Group(format!("symmetric group S{n} not supported (1 <= n <= 5)")));
        }
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
        let order = perms.len();
        let mut table = vec![0; order * order];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                let comp: Vec<usize> = (0..n).map(|i| pa[pb[i]]).collect();
                table[a * order + b] = index(&comp);
            }
        }
        let labels = perms
            .iter()
            .map(|p| p.iter().map(|i| (i + 1).to_string()).collect::<String>())
            .collect();
        let mut g = Self::from_table(format!("s{n}"), order, table, labels)?;
        if n <= 2 {
            g.cyclic_factors = Some(vec![order]);
        }
        Ok(g)
    }

    /// Parses `c<n>`, `c<n>xc<m>…` and `s<n>`.
    pub fn from_name(name: &str) -> Result<Self> {
        let parse_one = |part: &str| -> Result<Self> {
            let bad = || Error::Config(format!("unknown group '{part}'; valid names: c<n>, c<n>xc<m>, s<n> (n <= 5)"));
            if let Some(rest) = part.strip_prefix('c') {
                let n: usize = rest.parse().map_err(|_| bad())?;
                Self::cyclic(n).map_err(|_| bad())
            } else if let Some(rest) = part.strip_prefix('s') {
                let n: usize = rest.parse().map_err(|_| bad())?;
                Self::symmetric(n).map_err(|_| bad())
            } else {
                Err(bad())
            }
        };
        let mut parts = name.trim().split('x');
        let first = parts.next().unwrap_or_default();
        let mut g = parse_one(first)?;
        for part in parts {
            g = Self::product(&g, &parse_one(part)?)?;
        }
        Ok(g)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn element_label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn cyclic_factors(&self) -> Option<&[usize]> {
        self.cyclic_factors.as_deref()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut set = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.generated(&gens);
        for a in 0..self.order {
            if span.len() == self.order {
                break;
            }
            if !span.contains(&a) {
                gens.push(a);
                span = self.generated(&gens);
            }
        }
        gens
    }

    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        !set.is_empty()
            && set.iter().all(|&a| a < self.order)
            && set.contains(&self.identity)
            && set
                .iter()
                .all(|&a| set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// Representatives `g_n` of the left cosets `g_n H`, the first being the identity.
    pub fn coset_representatives(&self, subgroup: &[usize]) -> Result<Vec<usize>> {
        if !self.is_subgroup(subgroup) {
            return Err(Error::NotSubgroup(format!("{subgroup:?} in {}", self.label)));
        }
        let mut covered = vec![false; self.order];
        let mut reps = Vec::new();
        let mut candidates: Vec<usize> = vec![self.identity];
        candidates.extend((0..self.order).filter(|&g| g != self.identity));
        for g in candidates {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &h in subgroup {
                covered[self.mul(g, h)] = true;
            }
        }
        Ok(reps)
    }

    /// Writes `g = g_n h` with `g_n` among `reps` and `h ∈ H`; returns `(n, h)`.
    pub fn coset_decompose(&self, g: usize, reps: &[usize], subgroup: &[usize]) -> (usize, usize) {
        for (n, &r) in reps.iter().enumerate() {
            let h = self.mul(self.inv(r), g);
            if subgroup.contains(&h) {
                return (n, h);
            }
        }
        unreachable!("coset representatives cover the group")
    }

    /// Checks that `embed` (indices of `sub` → indices of `self`) is an injective homomorphism.
    pub fn check_embedding(&self, sub: &Self, embed: &[usize]) -> Result<()> {
        if embed.len() != sub.order() {
            return Err(Error::NotSubgroup("embedding has wrong length".into()));
        }
        let distinct: BTreeSet<_> = embed.iter().collect();
        if distinct.len() != embed.len() {
            return Err(Error::NotSubgroup("embedding is not injective".into()));
        }
        for a in sub.elements() {
            for b in sub.elements() {
                if embed[sub.mul(a, b)] != self.mul(embed[a], embed[b]) {
                    return Err(Error::NotSubgroup(format!(
                        "{} → {} is not a homomorphism",
                        sub.label, self.label
                    )));
                }
            }
        }
        Ok(())
    }

    /// Canonical embedding of a product of cyclic groups `H = ∏ ℤ/m_i` into
    /// `G = ∏ ℤ/n_i` with `m_i | n_i`, via `k ↦ k·(n_i/m_i)` in each factor.
    pub fn canonical_embedding(&self, sub: &Self) -> Result<Vec<usize>> {
        let (gf, hf) = match (self.cyclic_factors(), sub.cyclic_factors()) {
            (Some(g), Some(h)) if g.len() == h.len() => (g.to_vec(), h.to_vec()),
            _ => {
                return Err(Error::NotSubgroup(format!(
                    "no canonical embedding of {} into {}",
                    sub.label, self.label
                )))
            }
        };
        if gf.iter().zip(&hf).any(|(n, m)| n % m != 0) {
            return Err(Error::NotSubgroup(format!(
                "{} does not divide {} factorwise",
                sub.label, self.label
            )));
        }
        let embed: Vec<usize> = sub
            .elements()
            .map(|h| {
                let digits = mixed_radix_digits(h, &hf);
                let image: Vec<usize> = digits
                    .iter()
                    .zip(gf.iter().zip(&hf))
                    .map(|(&d, (&n, &m))| d * (n / m))
                    .collect();
                mixed_radix_index(&image, &gf)
            })
            .collect();
        self.check_embedding(sub, &embed)?;
        Ok(embed)
    }

    /// Haar measure of the requested normalization.
    pub fn haar(&self, normalization: Normalization) -> Result<HaarModel> {
        let w = match normalization {
            Normalization::Counting => 1.0,
            Normalization::Probability => 1.0 / self.order as f64,
            Normalization::Quadrature => {
                return Err(Error::Config("finite groups use counting or probability Haar measure".into()))
            }
        };
        HaarModel::new(vec![w; self.order], normalization)
    }

    /// Character table of a finite abelian group built from cyclic factors.
    pub fn dual_group(&self) -> Result<CharacterTable> {
        if !self.is_abelian() {
            return Err(Error::NotAbelian);
        }
        let factors = self
            .cyclic_factors()
            .ok_or_else(|| Error::Unsupported(format!("{} has no cyclic decomposition", self.label)))?
            .to_vec();
        let n = self.order;
        let values = (0..n)
            .map(|k| {
                let kd = mixed_radix_digits(k, &factors);
                (0..n)
                    .map(|g| {
                        let gd = mixed_radix_digits(g, &factors);
                        // common denominator n = Π m_i
                        let numerator: usize = kd
                            .iter()
                            .zip(&gd)
                            .zip(&factors)
                            .map(|((&a, &b), &m)| ((a * b) % m) * (n / m))
                            .sum();
                        root_of_unity(numerator, n)
                    })
                    .collect()
            })
            .collect();
        Ok(CharacterTable { values, factors })
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.label, self.order)
    }
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `exp(2πi·k/n)`, exact at multiples of a quarter turn.
pub fn root_of_unity(k: usize, n: usize) -> C64 {
    let k = k % n;
    if (4 * k) % n == 0 {
        return match 4 * k / n {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

pub(crate) fn mixed_radix_digits(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (d, &r) in digits.iter_mut().zip(radices).rev() {
        *d = index % r;
        index /= r;
    }
    digits
}

pub(crate) fn mixed_radix_index(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (&d, &r)| acc * r + d % r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    Counting,
    Probability,
    Quadrature,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Counting => "counting",
            Self::Probability => "probability",
            Self::Quadrature => "quadrature",
        })
    }
}

/// Haar weights per group element or quadrature node.
#[derive(Clone, Debug, PartialEq)]
pub struct HaarModel {
    weights: Vec<f64>,
    normalization: Normalization,
}

impl HaarModel {
    pub fn new(weights: Vec<f64>, normalization: Normalization) -> Result<Self> {
        if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::Parameter("Haar weights must be positive".into()));
        }
        if normalization == Normalization::Probability {
            let total: f64 = weights.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::Parameter(format!("probability Haar weights sum to {total}")));
            }
        }
        Ok(Self { weights, normalization })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// `∫_G f dm = Σ_i w_i f(g_i)`, summed in node order.
    pub fn integrate(&self, f: impl Fn(usize) -> C64) -> C64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(i, &w)| f(i) * w)
            .fold(C64::new(0.0, 0.0), |acc, v| acc + v)
    }

    pub fn integrate_values(&self, values: &[C64]) -> C64 {
        self.integrate(|i| values[i])
    }
}

/// Characters `ω_k(g)` of a finite abelian group, indexed like the group itself.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterTable {
    values: Vec<Vec<C64>>,
    factors: Vec<usize>,
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, character: usize, g: usize) -> C64 {
        self.values[character][g]
    }

    pub fn character(&self, character: usize) -> &[C64] {
        &self.values[character]
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    /// Index of the product character `ω_a ω_b`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let da = mixed_radix_digits(a, &self.factors);
        let db = mixed_radix_digits(b, &self.factors);
        let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| x + y).collect();
        mixed_radix_index(&sum, &self.factors)
    }

    /// Matrix `Σ_g ω(g) conj(ω'(g))`, equal to `N·I`.
    pub fn orthogonality_matrix(&self) -> Vec<Vec<C64>> {
        let n = self.values.len();
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        self.values[a]
                            .iter()
                            .zip(&self.values[b])
                            .map(|(x, y)| x * y.conj())
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }
}

/// A point of the affine group `x ↦ a x + b`, `a > 0`.
pub type AffinePoint = [f64; 2];

/// Quadrature model of the affine group with left Haar measure `da db / a²` and
/// modular function `Δ(a, b) = 1/a`.
///
/// Nodes sit on a log-uniform grid in `a` and a uniform grid in `b`. The node set is
/// not closed under composition; integrals only evaluate integrands at nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureGroup {
    label: String,
    nodes: Vec<AffinePoint>,
    haar: HaarModel,
    log_a_step: f64,
    b_step: f64,
    n_a: usize,
    n_b: usize,
}

impl QuadratureGroup {
    pub fn affine(a_min: f64, a_max: f64, n_a: usize, b_min: f64, b_max: f64, n_b: usize) -> Result<Self> {
        if !(a_min > 0.0 && a_min < a_max && a_max.is_finite()) {
            return Err(Error::Parameter(format!("need 0 < a_min < a_max, got [{a_min}, {a_max}]")));
        }
        if !(b_min < b_max && b_min.is_finite() && b_max.is_finite()) {
            return Err(Error::Parameter(format!("need b_min < b_max, got [{b_min}, {b_max}]")));
        }
        if n_a < 2 || n_b < 2 {
            return Err(Error::Parameter("affine grid needs at least 2 nodes per axis".into()));
        }
        let log_a_step = (a_max / a_min).ln() / (n_a - 1) as f64;
        let b_step = (b_max - b_min) / (n_b - 1) as f64;
        let mut nodes = Vec::with_capacity(n_a * n_b);
        let mut weights = Vec::with_capacity(n_a * n_b);
        for i in 0..n_a {
            let a = a_min * (log_a_step * i as f64).exp();
            for j in 0..n_b {
                let b = b_min + b_step * j as f64;
                nodes.push([a, b]);
                // Δa·Δb/a² with Δa = a·Δ(ln a)
                weights.push(log_a_step * b_step / a);
            }
        }
        Ok(Self {
            label: format!("affine[{a_min:.4},{a_max:.4}]x[{b_min:.4},{b_max:.4}]/{n_a}x{n_b}"),
            nodes,
            haar: HaarModel::new(weights, Normalization::Quadrature)?,
            log_a_step,
            b_step,
            n_a,
            n_b,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn nodes(&self) -> &[AffinePoint] {
        &self.nodes
    }

    pub fn haar(&self) -> &HaarModel {
        &self.haar
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn log_a_step(&self) -> f64 {
        self.log_a_step
    }

    pub fn b_step(&self) -> f64 {
        self.b_step
    }

    pub fn grid_size(&self) -> (usize, usize) {
        (self.n_a, self.n_b)
    }

    pub fn identity() -> AffinePoint {
        [1.0, 0.0]
    }

    /// `(a, b)(a', b') = (a a', a b' + b)`.
    pub fn compose(p: AffinePoint, q: AffinePoint) -> AffinePoint {
        [p[0] * q[0], p[0] * q[1] + p[1]]
    }

    /// `(a, b)^{-1} = (1/a, −b/a)`.
    pub fn inverse(p: AffinePoint) -> AffinePoint {
        [1.0 / p[0], -p[1] / p[0]]
    }

    /// `Δ(a, b) = 1/a`.
    pub fn modular(p: AffinePoint) -> f64 {
        1.0 / p[0]
    }

    pub fn integrate(&self, f: impl Fn(AffinePoint) -> C64) -> C64 {
        self.haar.integrate(|i| f(self.nodes[i]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_basics() {
        let t = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(t.order(), 1);
        assert_eq!(t.identity(), 0);
        let c4 = FiniteGroup::cyclic(4).unwrap();
        let row: Vec<usize> = (0..4).map(|b| c4.mul(1, b)).collect();
        assert_eq!(row, vec![1, 2, 3, 0]);
        assert!(FiniteGroup::cyclic(0).is_err());
    }

    #[test]
    fn klein_four_has_three_involutions() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let v = FiniteGroup::product(&c2, &c2).unwrap();
        let involutions = v.elements().filter(|&g| v.element_order(g) == 2).count();
        assert_eq!(involutions, 3);
        assert_eq!(v.cyclic_factors(), Some(&[2, 2][..]));
    }

    #[test]
    fn symmetric_group() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert!(matches!(s3.dual_group(), Err(Error::NotAbelian)));
        assert_eq!(s3.generated(&s3.generators()).len(), 6);
    }

    #[test]
    fn rejects_bad_tables() {
        // not a Latin square
        assert!(FiniteGroup::from_table("bad", 2, vec![0, 0, 1, 1], vec!["a".into(), "b".into()]).is_err());
        // Latin square without associativity: a quasigroup of order 3 with identity 0
        let t = vec![0, 1, 2, 1, 0, 2, 2, 2, 0];
        assert!(FiniteGroup::from_table("q", 3, t, vec!["0".into(), "1".into(), "2".into()]).is_err());
    }

    #[test]
    fn names() {
        assert_eq!(FiniteGroup::from_name("c2xc4").unwrap().order(), 8);
        assert_eq!(FiniteGroup::from_name("s3").unwrap().order(), 6);
        let err = FiniteGroup::from_name("z5").unwrap_err().to_string();
        assert!(err.contains("valid names"));
    }

    #[test]
    fn dual_of_c2_and_c4() {
        let d = FiniteGroup::cyclic(2).unwrap().dual_group().unwrap();
        assert_eq!(d.character(0), &[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        assert!((d.value(1, 1) - C64::new(-1.0, 0.0)).norm() < 1e-15);

        let d4 = FiniteGroup::cyclic(4).unwrap().dual_group().unwrap();
        assert!((d4.value(1, 1) - C64::new(0.0, 1.0)).norm() < 1e-15);
        // orthogonality by direct summation
        let m = d4.orthogonality_matrix();
        for (a, row) in m.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                let expect = if a == b { 4.0 } else { 0.0 };
                assert!((v - C64::new(expect, 0.0)).norm() < 1e-12 * 4.0);
            }
        }
    }

    #[test]
    fn product_characters_orthogonal_and_unimodular() {
        let g = FiniteGroup::from_name("c2xc3xc4").unwrap();
        let d = g.dual_group().unwrap();
        let n = g.order() as f64;
        for (a, row) in d.orthogonality_matrix().iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                let expect = if a == b { n } else { 0.0 };
                assert!((v - C64::new(expect, 0.0)).norm() < 1e-12 * n);
            }
        }
        for k in 0..d.len() {
            assert!(d.character(k).iter().all(|z| (z.norm() - 1.0).abs() < 1e-14));
        }
        // character multiplication matches pointwise product
        let c = d.mul(5, 7);
        for x in g.elements() {
            assert!((d.value(5, x) * d.value(7, x) - d.value(c, x)).norm() < 1e-12);
        }
    }

    #[test]
    fn integrate_examples() {
        let c4 = FiniteGroup::cyclic(4).unwrap();
        let one = |_| C64::new(1.0, 0.0);
        let p = c4.haar(Normalization::Probability).unwrap();
        assert!((p.integrate(one) - 1.0).norm() < 1e-15);
        let c = c4.haar(Normalization::Counting).unwrap();
        assert!((c.integrate(one) - 4.0).norm() < 1e-15);
    }

    #[test]
    fn coset_representatives_examples() {
        let c4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(c4.coset_representatives(&[0, 2]).unwrap(), vec![0, 1]);
        assert_eq!(c4.coset_representatives(&[0, 1, 2, 3]).unwrap(), vec![0]);
        assert!(matches!(c4.coset_representatives(&[0, 1]), Err(Error::NotSubgroup(_))));
    }

    #[test]
    fn quotient_integral_formula_on_c6() {
        // ∫_G f = Σ_n ∫_H f(g_n h), by direct double summation
        let g = FiniteGroup::cyclic(6).unwrap();
        let h = [0usize, 2, 4];
        let reps = g.coset_representatives(&h).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0], g.identity());
        let f = |x: usize| C64::new((x as f64).sin() + 2.0, (x * x) as f64);
        let total: C64 = g.elements().map(f).sum();
        let double: C64 = reps
            .iter()
            .flat_map(|&r| h.iter().map(move |&k| (r, k)))
            .map(|(r, k)| f(g.mul(r, k)))
            .sum();
        assert!((total - double).norm() < 1e-12);
    }

    #[test]
    fn canonical_embedding_c2xc2_in_c2xc4() {
        let g = FiniteGroup::from_name("c2xc4").unwrap();
        let h = FiniteGroup::from_name("c2xc2").unwrap();
        let e = g.canonical_embedding(&h).unwrap();
        assert!(g.is_subgroup(&e));
        assert!(g.canonical_embedding(&FiniteGroup::from_name("c3xc2").unwrap()).is_err());
    }

    #[test]
    fn affine_group_maps() {
        assert_eq!(QuadratureGroup::compose([2.0, 0.0], [1.0, 3.0]), [2.0, 6.0]);
        assert_eq!(QuadratureGroup::inverse([2.0, 6.0]), [0.5, -3.0]);
        let p = [1.7, -0.3];
        let q = [0.4, 2.2];
        let pq = QuadratureGroup::compose(p, q);
        let lhs = QuadratureGroup::modular(pq);
        let rhs = QuadratureGroup::modular(p) * QuadratureGroup::modular(q);
        assert!((lhs - rhs).abs() < 1e-12);
        assert_eq!(QuadratureGroup::modular(QuadratureGroup::identity()), 1.0);
        let id = QuadratureGroup::compose(p, QuadratureGroup::inverse(p));
        assert!((id[0] - 1.0).abs() < 1e-15 && id[1].abs() < 1e-15);
        assert!(QuadratureGroup::affine(0.0, 1.0, 4, -1.0, 1.0, 4).is_err());
        assert!(QuadratureGroup::affine(0.5, 2.0, 1, -1.0, 1.0, 4).is_err());
    }

    /// Gaussian bump in (ln a, b), integrated against the left Haar measure.
    fn bump(p: AffinePoint) -> C64 {
        let (s, b) = (p[0].ln(), p[1]);
        C64::new((-(s * s) / 0.5 - b * b / 0.8).exp(), 0.0)
    }

    #[test]
    fn affine_quadrature_grid_refinement() {
        let coarse = QuadratureGroup::affine((-4.0f64).exp(), 4.0f64.exp(), 41, -6.0, 6.0, 41).unwrap();
        let fine = QuadratureGroup::affine((-4.0f64).exp(), 4.0f64.exp(), 161, -6.0, 6.0, 161).unwrap();
        let a = coarse.integrate(bump);
        let b = fine.integrate(bump);
        assert!((a - b).norm() / b.norm() < 1e-6, "{a} vs {b}");
    }

    #[test]
    fn affine_left_invariance_proxy() {
        // Σ w_i f(h·g_i) ≈ Σ w_i f(g_i) for a smooth bump
        let q = QuadratureGroup::affine((-5.0f64).exp(), 5.0f64.exp(), 121, -9.0, 9.0, 121).unwrap();
        let h = [1.3, 0.4];
        let base = q.integrate(bump);
        let shifted = q.integrate(|g| bump(QuadratureGroup::compose(h, g)));
        assert!((base - shifted).norm() / base.norm() < 1e-3);
    }
}
