//! Finite matrix groups generated by closure, with Cayley and class structure.
//!
//! Elements are discovered breadth-first from `{identity} ∪ generators`,
//! multiplying each queued element on the right by every generator. Element
//! indices follow discovery order, so closing the same generator list twice
//! gives identical tables.
//!
//! Matrices are deduplicated by a canonical key (entries rounded to a fixed
//! number of decimals) and each hit is confirmed by a max-abs tolerance check.
//! Global phase is *not* quotiented: `⟨X, Z⟩` has order 8, not 4.

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{CMatrix, UnitaryMatrix};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupError {
    #[error("closure exceeded the order cap of {max_order} elements")]
    OrderCapExceeded { max_order: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("generator {index} is not unitary (residual {residual:e})")]
    NotUnitary { index: usize, residual: f64 },
    #[error("at least one generator is required")]
    NoGenerators,
    #[error("element {index} has no inverse within tolerance; tolerance too tight for the input")]
    MissingInverse { index: usize },
}

/// Parameters of the closure search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureConfig<T> {
    pub max_order: usize,
    pub tol: T,
    pub round_digits: u32,
}

impl<T: Real> Default for ClosureConfig<T> {
    fn default() -> Self {
        Self { max_order: 20_000, tol: T::lit(T::DEFAULT_TOL), round_digits: T::KEY_DIGITS }
    }
}

impl<T: Real> ClosureConfig<T> {
    pub fn with_max_order(mut self, max_order: usize) -> Self {
        self.max_order = max_order;
        self
    }
}

/// Index of an element in its group's element table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement(pub usize);

impl GroupElement {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// Partition of the group into conjugacy classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClasses {
    /// Classes ordered by their smallest element index; class 0 is `{identity}`.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

type Key = Vec<i64>;

fn canonical_key<T: Real>(m: &CMatrix<T>, digits: u32) -> Key {
    let scale = 10f64.powi(digits as i32);
    m.as_slice()
        .iter()
        .flat_map(|z| [(z.re.as_f64() * scale).round() as i64, (z.im.as_f64() * scale).round() as i64])
        .collect()
}

/// A finite group of unitary matrices closed under multiplication.
#[derive(Debug)]
pub struct FiniteMatrixGroup<T> {
    dim: usize,
    elements: Vec<UnitaryMatrix<T>>,
    generators: Vec<usize>,
    /// `right_mul[a * n_gens + j]` is the index of `elements[a] · generator_j`.
    right_mul: Vec<u32>,
    /// BFS tree: `elements[b] = elements[p] · generator_j` for `parent[b] = Some((p, j))`.
    parent: Vec<Option<(usize, usize)>>,
    inverses: Vec<usize>,
    index: HashMap<Key, usize>,
    tol: T,
    round_digits: u32,
    cayley: OnceLock<Vec<u32>>,
    classes: OnceLock<ConjugacyClasses>,
}

/// Closes `generators` under multiplication.
pub fn close_group<T: Real>(
    generators: &[UnitaryMatrix<T>],
    cfg: &ClosureConfig<T>,
) -> Result<FiniteMatrixGroup<T>, GroupError> {
    assert!(cfg.max_order >= 1, "max_order must be at least 1");
    assert!(cfg.tol > T::zero(), "tolerance must be positive");
    let first = generators.first().ok_or(GroupError::NoGenerators)?;
    let dim = first.dim();
    for (i, g) in generators.iter().enumerate() {
        if g.dim() != dim {
            return Err(GroupError::DimensionMismatch { expected: dim, found: g.dim() });
        }
        let residual = g.unitarity_residual();
        if residual > cfg.tol {
            return Err(GroupError::NotUnitary { index: i, residual: residual.as_f64() });
        }
    }

    let n_gens = generators.len();
    let mut group = FiniteMatrixGroup {
        dim,
        elements: Vec::new(),
        generators: Vec::with_capacity(n_gens),
        right_mul: Vec::new(),
        parent: Vec::new(),
        inverses: Vec::new(),
        index: HashMap::new(),
        tol: cfg.tol,
        round_digits: cfg.round_digits,
        cayley: OnceLock::new(),
        classes: OnceLock::new(),
    };

    group.insert(UnitaryMatrix::identity(dim), None);
    for (j, g) in generators.iter().enumerate() {
        let idx = match group.lookup(g.matrix()) {
            Some(idx) => idx,
            None => group.insert(g.clone(), Some((0, j))),
        };
        group.generators.push(idx);
    }
    if group.elements.len() > cfg.max_order {
        return Err(GroupError::OrderCapExceeded { max_order: cfg.max_order });
    }

    let mut queue: VecDeque<usize> = (0..group.elements.len()).collect();
    let mut right_mul: Vec<u32> = Vec::new();
    while let Some(a) = queue.pop_front() {
        debug_assert_eq!(right_mul.len(), a * n_gens);
        for (j, g) in generators.iter().enumerate() {
            let product = group.elements[a].compose(g);
            let idx = match group.lookup(product.matrix()) {
                Some(idx) => idx,
                None => {
                    if group.elements.len() >= cfg.max_order {
                        return Err(GroupError::OrderCapExceeded { max_order: cfg.max_order });
                    }
                    let idx = group.insert(product, Some((a, j)));
                    queue.push_back(idx);
                    idx
                }
            };
            right_mul.push(idx as u32);
        }
    }
    group.right_mul = right_mul;

    let mut inverses = Vec::with_capacity(group.elements.len());
    for (i, e) in group.elements.iter().enumerate() {
        let inv = group.lookup(&e.matrix().adjoint()).ok_or(GroupError::MissingInverse { index: i })?;
        inverses.push(inv);
    }
    group.inverses = inverses;
    Ok(group)
}

impl<T: Real> FiniteMatrixGroup<T> {
    fn insert(&mut self, m: UnitaryMatrix<T>, parent: Option<(usize, usize)>) -> usize {
        let idx = self.elements.len();
        self.index.insert(canonical_key(m.matrix(), self.round_digits), idx);
        self.elements.push(m);
        self.parent.push(parent);
        idx
    }

    fn lookup(&self, m: &CMatrix<T>) -> Option<usize> {
        let idx = *self.index.get(&canonical_key(m, self.round_digits))?;
        (self.elements[idx].max_abs_diff(m) <= self.tol).then_some(idx)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn tol(&self) -> T {
        self.tol
    }

    #[inline]
    pub fn identity(&self) -> GroupElement {
        GroupElement(0)
    }

    pub fn elements(&self) -> &[UnitaryMatrix<T>] {
        &self.elements
    }

    pub fn matrix(&self, g: GroupElement) -> &UnitaryMatrix<T> {
        &self.elements[g.0]
    }

    /// Element indices of the generators, in the order they were supplied.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn inverse(&self, g: GroupElement) -> GroupElement {
        GroupElement(self.inverses[g.0])
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverses
    }

    /// Index of `elements[a] · generator_j`.
    #[inline]
    pub fn right_mul(&self, a: usize, j: usize) -> usize {
        self.right_mul[a * self.generators.len() + j] as usize
    }

    pub fn bfs_parent(&self, g: GroupElement) -> Option<(GroupElement, usize)> {
        self.parent[g.0].map(|(p, j)| (GroupElement(p), j))
    }

    /// Looks up the element whose matrix matches `m` within tolerance.
    pub fn element_of(&self, m: &CMatrix<T>) -> Result<Option<GroupElement>, GroupError> {
        if m.dim() != self.dim {
            return Err(GroupError::DimensionMismatch { expected: self.dim, found: m.dim() });
        }
        Ok(self.lookup(m).map(GroupElement))
    }

    /// Full multiplication table, built on first use from the BFS tree:
    /// `a · b = (a · parent(b)) · generator`, so no matrix products are needed.
    pub fn cayley(&self) -> &[u32] {
        self.cayley.get_or_init(|| {
            let n = self.order();
            let mut table = vec![0u32; n * n];
            for a in 0..n {
                let row = &mut table[a * n..(a + 1) * n];
                row[0] = a as u32;
                for b in 1..n {
                    let (p, j) = self.parent[b].expect("non-identity elements have a BFS parent");
                    row[b] = self.right_mul[row[p] as usize * self.generators.len() + j];
                }
            }
            table
        })
    }

    #[inline]
    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        GroupElement(self.cayley()[a.0 * self.order() + b.0] as usize)
    }

    #[inline]
    pub(crate) fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.cayley()[a * self.order() + b] as usize
    }

    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| {
            let n = self.order();
            let mut class_of = vec![usize::MAX; n];
            let mut classes = Vec::new();
            for a in 0..n {
                if class_of[a] != usize::MAX {
                    continue;
                }
                let id = classes.len();
                let mut members = Vec::new();
                for g in 0..n {
                    let conj = self.mul_idx(self.mul_idx(g, a), self.inverses[g]);
                    if class_of[conj] == usize::MAX {
                        class_of[conj] = id;
                        members.push(conj);
                    }
                }
                members.sort_unstable();
                classes.push(members);
            }
            ConjugacyClasses { classes, class_of }
        })
    }

    pub fn class_of(&self, g: GroupElement) -> usize {
        self.conjugacy_classes().class_of[g.0]
    }

    /// Center of the group and whether the group is abelian.
    pub fn center_and_abelian(&self) -> (Vec<GroupElement>, bool) {
        let n = self.order();
        let center: Vec<GroupElement> =
            (0..n).filter(|&z| (0..n).all(|g| self.mul_idx(z, g) == self.mul_idx(g, z))).map(GroupElement).collect();
        let abelian = center.len() == n;
        (center, abelian)
    }

    pub fn is_abelian(&self) -> bool {
        // Commuting generators suffice.
        let gens = &self.generators;
        gens.iter().enumerate().all(|(i, &a)| {
            gens[i + 1..].iter().all(|&b| {
                let ab = self.elements[a].compose(&self.elements[b]);
                let ba = self.elements[b].compose(&self.elements[a]);
                ab.max_abs_diff(&ba) <= self.tol
            })
        })
    }

    /// Serializable view of the group.
    pub fn dump(&self) -> GroupDump {
        GroupDump {
            dim: self.dim,
            order: self.order(),
            elements: self
                .elements
                .iter()
                .map(|m| m.as_slice().iter().map(|z| [z.re.as_f64(), z.im.as_f64()]).collect())
                .collect(),
            generators: self.generators.clone(),
            classes: self.conjugacy_classes().classes.clone(),
        }
    }
}

/// JSON dump of a group: row-major `[re, im]` pairs per element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDump {
    pub dim: usize,
    pub order: usize,
    pub elements: Vec<Vec<[f64; 2]>>,
    pub generators: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}
