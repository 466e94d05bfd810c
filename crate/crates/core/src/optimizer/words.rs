use std::collections::VecDeque;

use crate::group::{FiniteMatrixGroup, GroupElement};
use crate::scalar::Real;

/// Shortest generator words for every element of a group.
///
/// A word `[j1, …, jL]` denotes the product `g_{j1} · … · g_{jL}`. Among words
/// of minimal length the lexicographically smallest is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordTable {
    words: Vec<Vec<usize>>,
}

impl WordTable {
    /// BFS from the identity over right multiplication, generators tried in index order.
    pub fn build<T: Real>(group: &FiniteMatrixGroup<T>) -> Self {
        let order = group.order();
        let n_gens = group.generators().len();
        let mut words: Vec<Option<Vec<usize>>> = vec![None; order];
        words[group.identity().index()] = Some(Vec::new());
        let mut queue = VecDeque::from([group.identity().index()]);
        while let Some(a) = queue.pop_front() {
            for j in 0..n_gens {
                let b = group.right_mul(a, j);
                if words[b].is_none() {
                    let mut w = words[a].clone().expect("visited");
                    w.push(j);
                    words[b] = Some(w);
                    queue.push_back(b);
                }
            }
        }
        Self { words: words.into_iter().map(|w| w.expect("group is generated by its generators")).collect() }
    }

    pub fn word(&self, g: GroupElement) -> &[usize] {
        &self.words[g.index()]
    }

    pub fn word_length(&self, g: GroupElement) -> usize {
        self.words[g.index()].len()
    }

    /// Largest word length, the BFS eccentricity of the identity.
    pub fn max_length(&self) -> usize {
        self.words.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}
