use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{LogicError, Slot, MAX_TABLE_SLOTS};

/// One row of a truth table: a bit per selected slot, in slot-list order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment(bits)
    }

    /// Row `index` of an `n`-variable table; bit `i` of the index is slot `i`.
    pub fn from_index(index: u32, n: usize) -> Self {
        Assignment((0..n).map(|i| index >> i & 1 == 1).collect())
    }

    pub fn to_index(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &bit)| acc | (u32::from(bit) << i))
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses a string of `0`/`1` characters, first character = first slot.
    pub fn parse(text: &str) -> Option<Self> {
        text.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Assignment)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &bit in &self.0 {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// The true rows of a non-constant boolean function over a list of slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MintermTable {
    slots: Vec<Slot>,
    minterms: BTreeSet<Assignment>,
}

impl MintermTable {
    /// Accepts 1 to 10 distinct slots and a non-empty, non-full set of
    /// distinct rows. The 2 to 6 slot bound of generated queries is enforced
    /// by the generator.
    pub fn new(slots: Vec<Slot>, minterms: Vec<Assignment>) -> Result<Self, LogicError> {
        let malformed = |reason: String| Err(LogicError::MalformedTable(reason));
        if slots.is_empty() || slots.len() > MAX_TABLE_SLOTS {
            return malformed(format!(
                "{} slots, expected 1..={MAX_TABLE_SLOTS}",
                slots.len()
            ));
        }
        let distinct: BTreeSet<Slot> = slots.iter().copied().collect();
        if distinct.len() != slots.len() {
            return malformed("duplicate slot".into());
        }
        if minterms.is_empty() {
            return malformed("empty minterm set".into());
        }
        let rows = 1usize << slots.len();
        let mut set = BTreeSet::new();
        for row in minterms {
            if row.len() != slots.len() {
                return malformed(format!(
                    "row {row} has {} bits, expected {}",
                    row.len(),
                    slots.len()
                ));
            }
            let text = format!("{row}");
            if !set.insert(row) {
                return malformed(format!("duplicate row {text}"));
            }
        }
        if set.len() >= rows {
            return malformed("full minterm set (constant true)".into());
        }
        Ok(MintermTable {
            slots,
            minterms: set,
        })
    }

    pub fn from_indices(slots: Vec<Slot>, indices: &[u32]) -> Result<Self, LogicError> {
        let n = slots.len();
        let rows = indices
            .iter()
            .map(|&i| Assignment::from_index(i, n))
            .collect();
        MintermTable::new(slots, rows)
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn minterms(&self) -> &BTreeSet<Assignment> {
        &self.minterms
    }

    pub fn minterm_indices(&self) -> Vec<u32> {
        self.minterms.iter().map(Assignment::to_index).collect()
    }

    /// Rows on which the function is false.
    pub fn maxterm_indices(&self) -> Vec<u32> {
        let ones: BTreeSet<u32> = self.minterm_indices().into_iter().collect();
        (0..1u32 << self.slots.len())
            .filter(|i| !ones.contains(i))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const AB: [Slot; 2] = [Slot::Airline, Slot::TicketClass];

    #[test]
    fn index_round_trip() {
        for i in 0..16 {
            assert_eq!(Assignment::from_index(i, 4).to_index(), i);
        }
        assert_eq!(
            Assignment::parse("10").unwrap(),
            Assignment::from_index(1, 2)
        );
    }

    #[test]
    fn rejects_constant_and_duplicate_tables() {
        assert!(MintermTable::from_indices(AB.to_vec(), &[]).is_err());
        assert!(MintermTable::from_indices(AB.to_vec(), &[0, 1, 2, 3]).is_err());
        assert!(MintermTable::from_indices(AB.to_vec(), &[1, 1]).is_err());
        assert!(MintermTable::new(AB.to_vec(), vec![Assignment::parse("1").unwrap()]).is_err());
        assert!(MintermTable::from_indices(vec![Slot::Price, Slot::Price], &[1]).is_err());
        assert!(MintermTable::from_indices(vec![], &[0]).is_err());
        assert!(MintermTable::from_indices(Slot::ALL.to_vec(), &[0]).is_err());
    }

    #[test]
    fn maxterms_complement_minterms() {
        let table = MintermTable::from_indices(AB.to_vec(), &[1, 2]).unwrap();
        assert_eq!(table.maxterm_indices(), vec![0, 3]);
    }
}
