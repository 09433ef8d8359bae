//! Minimal Product-of-Sums synthesis.
//!
//! Prime implicates come from Quine-McCluskey merging over the false rows of
//! the table. A minimum cover of the false rows is then found with Petrick's
//! method, evaluated as a depth-first branch and bound over the cyclic core
//! instead of multiplying out the full product term.
//!
//! Cost order: fewest sum terms, then fewest literals, then the sorted list
//! of term keys compared lexicographically (slot canonical order, positive
//! before negated).

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{MintermTable, PosExpression, Slot};

/// A product cube over table positions: `value` is meaningful only where
/// `care` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Cube {
    care: u32,
    value: u32,
}

impl Cube {
    fn contains(&self, row: u32) -> bool {
        row & self.care == self.value
    }
}

type TermKey = Vec<(usize, bool)>;

/// Returns the minimum POS expression equivalent to `table`.
pub fn minimize_pos(table: &MintermTable) -> PosExpression {
    let slots = table.slots();
    let zeros = table.maxterm_indices();
    let primes = prime_implicates(slots.len(), &zeros);
    let keys: Vec<TermKey> = primes.iter().map(|c| term_key(slots, c)).collect();
    let chosen = PetrickSearch::new(&zeros, &primes, &keys).solve();

    let mut terms: Vec<&TermKey> = chosen.iter().map(|&p| &keys[p]).collect();
    terms.sort();
    PosExpression::from_clauses(terms.into_iter().map(|key| {
        key.iter()
            .map(|&(slot, negated)| (Slot::ALL[slot], negated))
    }))
    .expect("prime implicates mention each slot at most once")
}

/// Maximal cubes containing only false rows.
fn prime_implicates(n: usize, zeros: &[u32]) -> Vec<Cube> {
    let full = (1u32 << n) - 1;
    let mut current: BTreeSet<Cube> = zeros
        .iter()
        .map(|&r| Cube {
            care: full,
            value: r,
        })
        .collect();
    let mut primes = Vec::new();
    while !current.is_empty() {
        let mut next = BTreeSet::new();
        let mut merged = BTreeSet::new();
        for cube in &current {
            let mut care = cube.care;
            while care != 0 {
                let bit = care & care.wrapping_neg();
                care &= care - 1;
                let partner = Cube {
                    care: cube.care,
                    value: cube.value ^ bit,
                };
                if current.contains(&partner) {
                    merged.insert(*cube);
                    next.insert(Cube {
                        care: cube.care & !bit,
                        value: cube.value & !bit,
                    });
                }
            }
        }
        primes.extend(current.iter().filter(|c| !merged.contains(*c)).copied());
        current = next;
    }
    primes
}

/// A cube that is zero exactly on its rows is the sum term with a positive
/// literal where the cube fixes 0 and a negated literal where it fixes 1.
fn term_key(slots: &[Slot], cube: &Cube) -> TermKey {
    let mut key: TermKey = slots
        .iter()
        .enumerate()
        .filter(|(i, _)| cube.care >> i & 1 == 1)
        .map(|(i, slot)| (slot.index(), cube.value >> i & 1 == 1))
        .collect();
    key.sort();
    key
}

#[derive(Clone, PartialEq, Eq)]
struct RowSet(Vec<u64>);

impl RowSet {
    fn empty(len: usize) -> Self {
        RowSet(vec![0; len.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn minus(&self, other: &RowSet) -> RowSet {
        RowSet(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64)
                .filter(move |b| word >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }
}

struct Best {
    terms: usize,
    literals: u32,
    keys: Vec<TermKey>,
    chosen: Vec<usize>,
}

struct PetrickSearch<'a> {
    covers: Vec<RowSet>,
    literals: Vec<u32>,
    keys: &'a [TermKey],
    /// For each false row, the primes covering it, cheapest first.
    candidates: Vec<Vec<usize>>,
    excluded: Vec<bool>,
    best: Option<Best>,
}

impl<'a> PetrickSearch<'a> {
    fn new(zeros: &[u32], primes: &[Cube], keys: &'a [TermKey]) -> Self {
        let literals: Vec<u32> = primes.iter().map(|c| c.care.count_ones()).collect();
        let mut covers = vec![RowSet::empty(zeros.len()); primes.len()];
        let mut candidates = vec![Vec::new(); zeros.len()];
        for (p, cube) in primes.iter().enumerate() {
            for (r, &row) in zeros.iter().enumerate() {
                if cube.contains(row) {
                    covers[p].insert(r);
                    candidates[r].push(p);
                }
            }
        }
        for list in &mut candidates {
            list.sort_by(|&a, &b| (literals[a], &keys[a]).cmp(&(literals[b], &keys[b])));
        }
        PetrickSearch {
            covers,
            literals,
            keys,
            candidates,
            excluded: vec![false; primes.len()],
            best: None,
        }
    }

    fn solve(mut self) -> Vec<usize> {
        let mut all = RowSet::empty(self.candidates.len());
        for r in 0..self.candidates.len() {
            all.insert(r);
        }
        let mut chosen = Vec::new();
        self.search(&all, &mut chosen, 0);
        self.best.map(|b| b.chosen).unwrap_or_default()
    }

    fn available(&self, row: usize) -> impl Iterator<Item = usize> + '_ {
        self.candidates[row]
            .iter()
            .copied()
            .filter(|&p| !self.excluded[p])
    }

    /// Rows with pairwise-disjoint candidate sets each need their own term.
    fn lower_bound(&self, uncovered: &RowSet) -> Option<(usize, u32)> {
        let mut rows: Vec<(usize, usize)> = Vec::new();
        for r in uncovered.iter() {
            let n = self.available(r).count();
            if n == 0 {
                return None;
            }
            rows.push((n, r));
        }
        rows.sort();
        let mut used = vec![false; self.covers.len()];
        let (mut count, mut lits) = (0, 0);
        for (_, r) in rows {
            if self.available(r).any(|p| used[p]) {
                continue;
            }
            let mut cheapest = u32::MAX;
            for p in self.available(r) {
                used[p] = true;
                cheapest = cheapest.min(self.literals[p]);
            }
            count += 1;
            lits += cheapest;
        }
        Some((count, lits))
    }

    fn search(&mut self, uncovered: &RowSet, chosen: &mut Vec<usize>, literals: u32) {
        if uncovered.is_empty() {
            self.offer(chosen, literals);
            return;
        }
        let Some((lb_terms, lb_lits)) = self.lower_bound(uncovered) else {
            return;
        };
        if let Some(best) = &self.best {
            let terms = chosen.len() + lb_terms;
            if terms > best.terms || (terms == best.terms && literals + lb_lits > best.literals) {
                return;
            }
        }
        let row = uncovered
            .iter()
            .min_by_key(|&r| self.available(r).count())
            .expect("uncovered is non-empty");
        let branches: Vec<usize> = self.available(row).collect();
        for &p in &branches {
            chosen.push(p);
            let rest = uncovered.minus(&self.covers[p]);
            self.search(&rest, chosen, literals + self.literals[p]);
            chosen.pop();
            self.excluded[p] = true;
        }
        for &p in &branches {
            self.excluded[p] = false;
        }
    }

    fn offer(&mut self, chosen: &[usize], literals: u32) {
        let mut keys: Vec<TermKey> = chosen.iter().map(|&p| self.keys[p].clone()).collect();
        keys.sort();
        let better = match &self.best {
            None => true,
            Some(best) => (chosen.len(), literals, &keys) < (best.terms, best.literals, &best.keys),
        };
        if better {
            self.best = Some(Best {
                terms: chosen.len(),
                literals,
                keys,
                chosen: chosen.to_vec(),
            });
        }
    }
}
