//! Finitely generated subgroups of R^n with the lexicographic order:
//! echelon normalization into Q^r, skeleton, convex subgroups and the
//! small-extension test.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalars::{AlgebraicConstant, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedGroup {
    ambient_dim: usize,
    generators: Vec<Vec<Scalar>>,
    divisible: Vec<bool>,
}

impl GeneratedGroup {
    pub fn new(ambient_dim: usize, generators: Vec<Vec<Scalar>>, divisible: Vec<bool>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::domain("ambient dimension must be positive"));
        }
        if generators.is_empty() {
            return Err(Error::domain("a group needs at least one generator"));
        }
        if generators.iter().any(|g| g.len() != ambient_dim) {
            return Err(Error::domain(format!("generators must have length {ambient_dim}")));
        }
        if divisible.len() != generators.len() {
            return Err(Error::domain("one divisibility flag per generator"));
        }
        Ok(GeneratedGroup { ambient_dim, generators, divisible })
    }

    pub fn finitely_generated(ambient_dim: usize, generators: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = generators.len();
        Self::new(ambient_dim, generators, vec![false; n])
    }

    pub fn from_rationals(ambient_dim: usize, generators: &[Vec<Rational>]) -> Result<Self> {
        Self::finitely_generated(
            ambient_dim,
            generators.iter().map(|g| g.iter().cloned().map(Scalar::from_rational).collect()).collect(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[Vec<Scalar>] {
        &self.generators
    }

    pub fn divisible_flags(&self) -> &[bool] {
        &self.divisible
    }

    fn constants(&self) -> BTreeSet<AlgebraicConstant> {
        self.generators
            .iter()
            .flatten()
            .flat_map(|s| s.irrational_terms().keys().cloned())
            .collect()
    }
}

/// Coefficient vectors of scalar vectors over a fixed constant list,
/// laid out coordinate-major: (rational part, c_1, ..., c_k) per coordinate.
fn flatten(v: &[Scalar], consts: &[AlgebraicConstant]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(v.len() * (consts.len() + 1));
    for s in v {
        out.push(s.rational_part().clone());
        for c in consts {
            out.push(s.irrational_terms().get(c).cloned().unwrap_or_else(Rational::zero));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedGroup {
    ambient_dim: usize,
    pivots: Vec<usize>,
    generators: Vec<Vec<Rational>>,
    basis: Vec<Vec<Rational>>,
    components: Vec<Rational>,
}

impl NormalizedGroup {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Image generators in Q^r.
    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    /// Echelon basis of the Q-span, projected to the leading coordinates.
    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Positive generators of the cyclic rank-one components.
    pub fn components(&self) -> &[Rational] {
        &self.components
    }

    /// Leading coordinates (0-based) kept by the embedding.
    pub fn leading_indices(&self) -> &[usize] {
        &self.pivots
    }

    pub fn embed(&self, v: &[Rational]) -> Vec<Rational> {
        self.pivots.iter().map(|&j| v[j].clone()).collect()
    }

    pub fn embedding_matrix(&self) -> Vec<Vec<u8>> {
        self.pivots
            .iter()
            .map(|&j| (0..self.ambient_dim).map(|c| u8::from(c == j)).collect())
            .collect()
    }

    pub fn as_generated(&self) -> Result<GeneratedGroup> {
        GeneratedGroup::from_rationals(self.rank().max(1), &self.generators_or_zero())
    }

    fn generators_or_zero(&self) -> Vec<Vec<Rational>> {
        if self.rank() == 0 {
            vec![vec![Rational::zero()]]
        } else {
            self.generators.clone()
        }
    }

    /// Integer combination of the image generators.
    pub fn combination(&self, coeffs: &[i64]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.rank()];
        for (g, &c) in self.generators.iter().zip(coeffs) {
            let c = Rational::from_integer(c.into());
            for (x, y) in out.iter_mut().zip(g) {
                *x += &c * y;
            }
        }
        out
    }
}

/// Projects a rational group onto its leading coordinates. The projection is
/// an order isomorphism of the Q-span onto Q^r with the lex order.
pub fn normalize(g: &GeneratedGroup) -> Result<NormalizedGroup> {
    if g.divisible.iter().any(|&d| d) {
        return Err(Error::domain("normalization needs a finitely generated group (no divisible generators)"));
    }
    let rows: Vec<Vec<Rational>> = g
        .generators
        .iter()
        .map(|v| {
            v.iter()
                .map(|s| s.as_rational().cloned().ok_or_else(|| Error::domain(format!("irrational entry {s}"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let (ech, pivots) = linalg::echelon(&rows);
    let project = |v: &Vec<Rational>| pivots.iter().map(|&j| v[j].clone()).collect::<Vec<_>>();
    let generators: Vec<Vec<Rational>> = if pivots.is_empty() {
        Vec::new()
    } else {
        rows.iter().map(project).collect()
    };
    let basis: Vec<Vec<Rational>> = ech.iter().map(project).collect();
    let components = component_generators(&generators, pivots.len());
    Ok(NormalizedGroup { ambient_dim: g.ambient_dim, pivots, generators, basis, components })
}

fn component_generators(gens: &[Vec<Rational>], r: usize) -> Vec<Rational> {
    if r == 0 {
        return Vec::new();
    }
    let d = linalg::common_denominator(gens);
    let (hnf, pivots) = linalg::integer_echelon(&linalg::scale_to_integers(gens, &d));
    debug_assert_eq!(pivots, (0..r).collect::<Vec<_>>());
    hnf.iter()
        .zip(&pivots)
        .map(|(row, &c)| Rational::new(row[c].abs(), d.clone()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub index_count: usize,
    pub components: Vec<(String, Rational)>,
}

pub fn skeleton(g: &NormalizedGroup) -> Skeleton {
    Skeleton {
        index_count: g.rank(),
        components: g.components.iter().enumerate().map(|(i, c)| (format!("C{}", i + 1), c.clone())).collect(),
    }
}

/// The convex subgroup H_S = {γ : γ_i = 0 for i ≤ cut}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexSubgroup {
    pub cut: usize,
    pub zero_coordinates: Vec<usize>,
    pub rank: usize,
    pub components: Vec<Rational>,
}

impl ConvexSubgroup {
    pub fn contains(&self, v: &[Rational]) -> bool {
        v.iter().take(self.cut).all(|x| x.is_zero())
    }
}

pub fn initseg_to_convex(g: &NormalizedGroup, cut: usize) -> Result<ConvexSubgroup> {
    if cut > g.rank() {
        return Err(Error::domain(format!("cut {cut} exceeds rank {}", g.rank())));
    }
    Ok(ConvexSubgroup {
        cut,
        zero_coordinates: (1..=cut).collect(),
        rank: g.rank() - cut,
        components: g.components[cut..].to_vec(),
    })
}

fn leading_index(v: &[Rational]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

pub fn archimedean_equivalent(g: &NormalizedGroup, beta: &[Rational], gamma: &[Rational]) -> Result<bool> {
    if beta.len() != g.rank() || gamma.len() != g.rank() {
        return Err(Error::domain(format!("elements must have length {}", g.rank())));
    }
    match (leading_index(beta), leading_index(gamma)) {
        (Some(a), Some(b)) => Ok(a == b),
        _ => Err(Error::domain("archimedean classes are defined for nonzero elements")),
    }
}

pub fn rational_rank(g: &GeneratedGroup) -> usize {
    let consts: Vec<_> = g.constants().into_iter().collect();
    let rows: Vec<_> = g.generators.iter().map(|v| flatten(v, &consts)).collect();
    linalg::rank(&rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmallKind {
    PreservesRank,
    IncreasesRankByOne,
    Commensurable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smallness {
    Small(SmallKind),
    NotSmall,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallnessReport {
    pub verdict: Smallness,
    /// rr(Λ/Γ)
    pub rational_rank_quotient: usize,
    /// Principal ranks of Γ and Λ.
    pub rank_gamma: usize,
    pub rank_lambda: usize,
}

impl SmallnessReport {
    pub fn is_small(&self) -> bool {
        matches!(self.verdict, Smallness::Small(_))
    }
}

/// Coordinates (not flattened columns) that occur as leading indices of
/// nonzero elements of the Q-span.
fn leading_coordinates(rows: &[Vec<Rational>], width: usize) -> BTreeSet<usize> {
    linalg::echelon(rows).1.into_iter().map(|c| c / width).collect()
}

pub fn is_small_extension(gamma: &GeneratedGroup, lambda: &GeneratedGroup) -> Result<SmallnessReport> {
    if gamma.ambient_dim != lambda.ambient_dim {
        return Err(Error::domain("groups live in different ambient dimensions"));
    }
    let consts: Vec<_> = gamma.constants().union(&lambda.constants()).cloned().collect();
    let width = consts.len() + 1;
    let fl = |g: &GeneratedGroup| g.generators.iter().map(|v| flatten(v, &consts)).collect::<Vec<_>>();
    let (grows, lrows) = (fl(gamma), fl(lambda));

    let ldiv: Vec<Vec<Rational>> =
        lrows.iter().zip(&lambda.divisible).filter(|(_, &d)| d).map(|(r, _)| r.clone()).collect();
    let llat: Vec<Vec<Rational>> =
        lrows.iter().zip(&lambda.divisible).filter(|(_, &d)| !d).map(|(r, _)| r.clone()).collect();

    // Λ = span_Q(D) + L; test Γ ⊂ Λ in the quotient by span_Q(D).
    let dspan = linalg::rref(&ldiv);
    let lat_red: Vec<_> = llat.iter().map(|r| linalg::reduce_mod_span(&dspan, r)).collect();
    for (g, &div) in grows.iter().zip(&gamma.divisible) {
        let red = linalg::reduce_mod_span(&dspan, g);
        let inside = if div {
            red.iter().all(|x| x.is_zero())
        } else if red.iter().all(|x| x.is_zero()) {
            true
        } else {
            let mut all = lat_red.clone();
            all.push(red.clone());
            let d = linalg::common_denominator(&all);
            let ints = linalg::scale_to_integers(&all, &d);
            let (target, lattice) = ints.split_last().expect("nonempty");
            let basis = linalg::integer_echelon(lattice);
            linalg::in_lattice(&basis, target)
        };
        if !inside {
            return Err(Error::domain("gamma is not contained in lambda"));
        }
    }

    let rr_gamma = linalg::rank(&grows);
    let rr_lambda = linalg::rank(&lrows);
    let quotient = rr_lambda - rr_gamma;
    let gspan = linalg::rref(&grows);
    let divisible_inside = ldiv
        .iter()
        .all(|d| linalg::reduce_mod_span(&gspan, d).iter().all(|x| x.is_zero()));
    let rank_gamma = leading_coordinates(&grows, width).len();
    let rank_lambda = leading_coordinates(&lrows, width).len();
    let verdict = if !divisible_inside || quotient > 1 {
        Smallness::NotSmall
    } else if quotient == 0 {
        Smallness::Small(SmallKind::Commensurable)
    } else if rank_lambda > rank_gamma {
        Smallness::Small(SmallKind::IncreasesRankByOne)
    } else {
        Smallness::Small(SmallKind::PreservesRank)
    };
    Ok(SmallnessReport { verdict, rational_rank_quotient: quotient, rank_gamma, rank_lambda })
}

/// Principal rank |Prin(Γ)| of a generated group.
pub fn principal_rank(g: &GeneratedGroup) -> usize {
    let consts: Vec<_> = g.constants().into_iter().collect();
    let rows: Vec<_> = g.generators.iter().map(|v| flatten(v, &consts)).collect();
    leading_coordinates(&rows, consts.len() + 1).len()
}

pub fn leading_coordinate_set(g: &GeneratedGroup) -> BTreeSet<usize> {
    let consts: Vec<_> = g.constants().into_iter().collect();
    let rows: Vec<_> = g.generators.iter().map(|v| flatten(v, &consts)).collect();
    leading_coordinates(&rows, consts.len() + 1)
}
