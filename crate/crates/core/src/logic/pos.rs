use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{Assignment, LogicError, Slot, MAX_ENUMERATION_SLOTS};

/// One occurrence of a slot inside a POS expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub slot: Slot,
    pub negated: bool,
    /// Position of this occurrence, counted left to right over the whole
    /// expression.
    pub occurrence_id: usize,
}

/// An OR-clause. Holds at most one literal per slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumTerm {
    literals: Vec<Literal>,
}

impl SumTerm {
    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn slots(&self) -> impl Iterator<Item = Slot> + '_ {
        self.literals.iter().map(|l| l.slot)
    }
}

/// AND of OR-clauses. The empty product is constant true.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PosExpression {
    terms: Vec<SumTerm>,
}

impl PosExpression {
    /// Builds an expression from `(slot, negated)` clauses and numbers the
    /// occurrences left to right.
    pub fn from_clauses<I, T>(clauses: I) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = (Slot, bool)>,
    {
        let mut terms = Vec::new();
        let mut next_id = 0;
        for clause in clauses {
            let mut seen = BTreeSet::new();
            let mut literals = Vec::new();
            for (slot, negated) in clause {
                if !seen.insert(slot) {
                    return Err(LogicError::MalformedExpression(format!(
                        "slot {slot} appears twice in one sum term"
                    )));
                }
                literals.push(Literal {
                    slot,
                    negated,
                    occurrence_id: next_id,
                });
                next_id += 1;
            }
            if literals.is_empty() {
                return Err(LogicError::MalformedExpression("empty sum term".into()));
            }
            terms.push(SumTerm { literals });
        }
        Ok(PosExpression { terms })
    }

    pub fn terms(&self) -> &[SumTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn literals(&self) -> impl Iterator<Item = &Literal> + '_ {
        self.terms.iter().flat_map(|t| t.literals.iter())
    }

    pub fn occurrence_count(&self) -> usize {
        self.terms.iter().map(|t| t.literals.len()).sum()
    }

    pub fn slots(&self) -> BTreeSet<Slot> {
        self.literals().map(|l| l.slot).collect()
    }

    /// Evaluates the expression with a caller-supplied truth value per
    /// literal occurrence (the literal's polarity is the caller's concern).
    pub fn eval_occurrences<F>(&self, mut holds: F) -> bool
    where
        F: FnMut(&Literal) -> bool,
    {
        self.terms.iter().all(|t| t.literals.iter().any(&mut holds))
    }

    /// Parses the canonical text form, e.g. `(price | ~ticket_class) & (airline)`.
    pub fn parse(text: &str) -> Result<Self, LogicError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(PosExpression::default());
        }
        let bad = |reason: String| LogicError::MalformedExpression(reason);
        let mut clauses = Vec::new();
        for term in text.split(" & ") {
            let inner = term
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| bad(format!("sum term {term:?} is not parenthesized")))?;
            let mut clause = Vec::new();
            for lit in inner.split(" | ") {
                let (negated, name) = match lit.strip_prefix('~') {
                    Some(name) => (true, name),
                    None => (false, lit),
                };
                let slot =
                    Slot::from_name(name).ok_or_else(|| bad(format!("unknown slot {name:?}")))?;
                clause.push((slot, negated));
            }
            clauses.push(clause);
        }
        PosExpression::from_clauses(clauses)
    }
}

impl fmt::Display for PosExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            f.write_str("(")?;
            for (j, lit) in term.literals.iter().enumerate() {
                if j > 0 {
                    f.write_str(" | ")?;
                }
                if lit.negated {
                    f.write_str("~")?;
                }
                f.write_str(lit.slot.name())?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Evaluates `expr` on an assignment over `slots`.
pub fn eval_pos(expr: &PosExpression, slots: &[Slot], a: &Assignment) -> Result<bool, LogicError> {
    if a.len() != slots.len() {
        return Err(LogicError::ArityMismatch {
            expected: slots.len(),
            actual: a.len(),
        });
    }
    let mut positions = [usize::MAX; Slot::ALL.len()];
    for (i, slot) in slots.iter().enumerate() {
        positions[slot.index()] = i;
    }
    if let Some(lit) = expr
        .literals()
        .find(|l| positions[l.slot.index()] == usize::MAX)
    {
        return Err(LogicError::MissingSlot(lit.slot));
    }
    let bits = a.bits();
    Ok(expr.eval_occurrences(|lit| bits[positions[lit.slot.index()]] != lit.negated))
}

/// Every assignment over `slots` on which `expr` is true, by exhaustive walk.
pub fn enumerate_satisfying(
    expr: &PosExpression,
    slots: &[Slot],
) -> Result<BTreeSet<Assignment>, LogicError> {
    if slots.len() > MAX_ENUMERATION_SLOTS {
        return Err(LogicError::TooManySlots(slots.len()));
    }
    let mut out = BTreeSet::new();
    for index in 0..1u32 << slots.len() {
        let a = Assignment::from_index(index, slots.len());
        if eval_pos(expr, slots, &a)? {
            out.insert(a);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    const A: Slot = Slot::Airline;
    const B: Slot = Slot::TicketClass;

    fn xor() -> PosExpression {
        PosExpression::from_clauses([vec![(A, false), (B, false)], vec![(A, true), (B, true)]])
            .unwrap()
    }

    fn bits(a: bool, b: bool) -> Assignment {
        Assignment::new(vec![a, b])
    }

    #[test]
    fn empty_expression_is_true() {
        let empty = PosExpression::default();
        assert!(eval_pos(&empty, &[A, B], &bits(false, true)).unwrap());
        assert_eq!(enumerate_satisfying(&empty, &[A, B]).unwrap().len(), 4);
    }

    #[test]
    fn xor_semantics() {
        let e = xor();
        assert!(eval_pos(&e, &[A, B], &bits(true, false)).unwrap());
        assert!(!eval_pos(&e, &[A, B], &bits(true, true)).unwrap());
    }

    #[test]
    fn single_literal_enumeration() {
        let e = PosExpression::from_clauses([vec![(A, false)]]).unwrap();
        let sat = enumerate_satisfying(&e, &[A]).unwrap();
        assert_eq!(
            sat.into_iter().collect::<Vec<_>>(),
            vec![Assignment::new(vec![true])]
        );
    }

    #[test]
    fn arity_and_coverage_errors() {
        let e = xor();
        assert_eq!(
            eval_pos(&e, &[A, B], &Assignment::new(vec![true])),
            Err(LogicError::ArityMismatch {
                expected: 2,
                actual: 1
            })
        );
        assert_eq!(
            eval_pos(&e, &[A], &Assignment::new(vec![true])),
            Err(LogicError::MissingSlot(B))
        );
        let many = [Slot::Price; 21];
        assert_eq!(
            enumerate_satisfying(&e, &many),
            Err(LogicError::TooManySlots(21))
        );
    }

    #[test]
    fn occurrence_ids_are_contiguous() {
        let ids: Vec<_> = xor().literals().map(|l| l.occurrence_id).collect();
        assert_eq!(ids, vec![0, 1, 2, 3]);
    }

    #[test]
    fn canonical_text_round_trip() {
        let text = "(price | ~ticket_class) & (departure_time)";
        let e = PosExpression::parse(text).unwrap();
        assert_eq!(e.to_string(), text);
        assert_eq!(
            xor().to_string(),
            "(airline | ticket_class) & (~airline | ~ticket_class)"
        );
        assert!(PosExpression::parse("(price | price)").is_err());
        assert!(PosExpression::parse("price").is_err());
        assert!(PosExpression::parse("(aircraft)").is_err());
        assert!(PosExpression::from_clauses([Vec::<(Slot, bool)>::new()]).is_err());
    }
}
