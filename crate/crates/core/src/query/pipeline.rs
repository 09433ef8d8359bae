use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use rand::seq::{index, SliceRandom};
use rand::Rng;

use super::{GeneratedQuery, QueryConfig, QueryError, Sample, OPTIONS_PER_SAMPLE};
use crate::analytics::{complexity_metrics, option_entropy};
use crate::constraint::{generate_primitive, satisfies, Operand, Primitive};
use crate::flight::{FlightOption, RouteContext};
use crate::logic::{Assignment, MintermTable, PosExpression, Slot};

/// `k` distinct slots in canonical order.
pub fn select_slots<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Result<Vec<Slot>, QueryError> {
    if !(2..=6).contains(&k) {
        return Err(QueryError::BadSlotCount(k));
    }
    let mut picked: Vec<Slot> = index::sample(rng, Slot::ALL.len(), k)
        .into_iter()
        .map(|i| Slot::ALL[i])
        .collect();
    picked.sort();
    Ok(picked)
}

/// `m` distinct random rows over `slots`.
pub fn generate_minterms<R: Rng + ?Sized>(
    slots: Vec<Slot>,
    m: usize,
    rng: &mut R,
) -> Result<MintermTable, QueryError> {
    let k = slots.len();
    if !(2..=6).contains(&k) {
        return Err(QueryError::BadSlotCount(k));
    }
    if !(2..=3).contains(&m) {
        return Err(QueryError::BadMintermCount(m));
    }
    if m >= 1 << k {
        return Err(QueryError::FullTable {
            slots: k,
            minterms: m,
        });
    }
    let mut rows: Vec<u32> = index::sample(rng, 1 << k, m)
        .into_iter()
        .map(|i| i as u32)
        .collect();
    rows.sort();
    let rows = rows
        .into_iter()
        .map(|r| Assignment::from_index(r, k))
        .collect();
    MintermTable::new(slots, rows).map_err(|e| QueryError::BadGrid(format!("{e}")))
}

/// One primitive per literal occurrence; occurrences of the same slot get
/// distinct operands, negated literals get the negated member.
pub fn bind_primitives<R: Rng + ?Sized>(
    pos: &PosExpression,
    rng: &mut R,
    ctx: &RouteContext,
) -> Result<BTreeMap<usize, Primitive>, QueryError> {
    let mut taken: BTreeMap<Slot, Vec<Operand>> = BTreeMap::new();
    let mut bindings = BTreeMap::new();
    for lit in pos.literals() {
        let used = taken.entry(lit.slot).or_default();
        let pair = generate_primitive(lit.slot, rng, ctx, used)?;
        used.push(pair.positive.operand().clone());
        bindings.insert(lit.occurrence_id, pair.for_polarity(lit.negated).clone());
    }
    Ok(bindings)
}

/// POS semantics lifted to primitive satisfaction.
pub fn requirement_satisfied(q: &GeneratedQuery, f: &FlightOption) -> Result<bool, QueryError> {
    if let Some(lit) = q
        .pos
        .literals()
        .find(|l| !q.bindings.contains_key(&l.occurrence_id))
    {
        return Err(QueryError::UnboundOccurrence(lit.occurrence_id));
    }
    Ok(q.pos
        .eval_occurrences(|lit| satisfies(&q.bindings[&lit.occurrence_id], f)))
}

/// Splits `pool` into matching and non-matching flights and checks the
/// quotas of `config`.
pub fn feasibility_check(
    q: &GeneratedQuery,
    pool: &[FlightOption],
    config: &QueryConfig,
) -> Result<(Vec<FlightOption>, Vec<FlightOption>), QueryError> {
    if pool.is_empty() {
        return Err(QueryError::Flight(crate::flight::FlightError::EmptyPool));
    }
    let (mut positives, mut negatives) = (Vec::new(), Vec::new());
    for f in pool {
        if requirement_satisfied(q, f)? {
            positives.push(f.clone());
        } else {
            negatives.push(f.clone());
        }
    }
    if positives.len() < config.min_positives.max(1) || negatives.len() < config.min_negatives {
        return Err(QueryError::Infeasible {
            positives: positives.len(),
            negatives: negatives.len(),
        });
    }
    Ok((positives, negatives))
}

/// Builds up to `max_subsets` samples of one positive and four negatives.
/// Neither positives nor negatives are reused across a query's samples.
pub fn assemble_samples<R: Rng + ?Sized>(
    q: &GeneratedQuery,
    positives: &[FlightOption],
    negatives: &[FlightOption],
    rng: &mut R,
    max_subsets: usize,
) -> Result<Vec<Sample>, QueryError> {
    let per = OPTIONS_PER_SAMPLE - 1;
    if positives.is_empty() {
        return Err(QueryError::InsufficientPositives);
    }
    if negatives.len() < per {
        return Err(QueryError::InsufficientNegatives {
            available: negatives.len(),
            needed: per,
        });
    }
    let metrics = complexity_metrics(&q.pos).map_err(|_| QueryError::UnboundOccurrence(0))?;
    let mut pos_order: Vec<usize> = (0..positives.len()).collect();
    let mut neg_order: Vec<usize> = (0..negatives.len()).collect();
    pos_order.shuffle(rng);
    neg_order.shuffle(rng);
    let count = max_subsets.min(positives.len()).min(negatives.len() / per);
    let base = q.id.strip_prefix('q').unwrap_or(&q.id);
    let mut samples = Vec::with_capacity(count);
    for j in 0..count {
        let mut options: Vec<(bool, &FlightOption)> = Vec::with_capacity(OPTIONS_PER_SAMPLE);
        options.push((true, &positives[pos_order[j]]));
        options.extend(
            neg_order[j * per..(j + 1) * per]
                .iter()
                .map(|&i| (false, &negatives[i])),
        );
        options.shuffle(rng);
        let gold = options
            .iter()
            .position(|(is_gold, _)| *is_gold)
            .expect("one positive per sample");
        let gold_entropy = option_entropy(q, options[gold].1)
            .map_err(|_| QueryError::UnboundOccurrence(0))?
            .entropy;
        samples.push(Sample {
            sample_id: format!("s{base}-{j}"),
            query_id: q.id.clone(),
            query: q.clone(),
            options: options.into_iter().map(|(_, f)| f.clone()).collect(),
            gold,
            metrics,
            gold_entropy,
        });
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::Relation;
    use crate::flight::tests::sample_flight;
    use crate::flight::{Airport, Route, TicketClass};
    use crate::rng::unit_stream;
    use alloc::collections::BTreeSet;
    use alloc::string::String;
    use alloc::vec;

    fn price_below(v: u32) -> Primitive {
        Primitive::new(Slot::Price, Relation::LessThan, Operand::Dollars(v), false).unwrap()
    }

    fn class_is(c: TicketClass, negated: bool) -> Primitive {
        Primitive::new(
            Slot::TicketClass,
            Relation::Equals,
            Operand::Class(c),
            negated,
        )
        .unwrap()
    }

    fn route() -> Route {
        Route {
            source: Airport::from_code("JFK").unwrap(),
            destination: Airport::from_code("DEL").unwrap(),
            travel_date: sample_flight().travel_date,
        }
    }

    fn query(pos: &str, primitives: Vec<Primitive>) -> GeneratedQuery {
        let pos = PosExpression::parse(pos).unwrap();
        let slots: Vec<Slot> = pos.slots().into_iter().collect();
        let k = slots.len();
        GeneratedQuery {
            id: String::from("q2x2-0"),
            num_slots: k,
            num_minterms: 1,
            table: MintermTable::from_indices(slots, &[0]).unwrap(),
            pos,
            bindings: primitives.into_iter().enumerate().collect(),
            text: String::new(),
            atypical: false,
            route: route(),
        }
    }

    fn pool(prices: &[u32]) -> Vec<FlightOption> {
        prices
            .iter()
            .map(|&price| FlightOption {
                price,
                ..sample_flight()
            })
            .collect()
    }

    #[test]
    fn slot_selection() {
        let mut rng = unit_stream(1, 1);
        let six = select_slots(6, &mut rng).unwrap();
        assert_eq!(six.iter().collect::<BTreeSet<_>>().len(), 6);
        assert!(six.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(
            select_slots(12, &mut rng),
            Err(QueryError::BadSlotCount(12))
        );
        assert_eq!(
            select_slots(2, &mut unit_stream(3, 4)),
            select_slots(2, &mut unit_stream(3, 4))
        );
    }

    #[test]
    fn minterm_generation() {
        let mut rng = unit_stream(1, 2);
        let t = generate_minterms(vec![Slot::Airline, Slot::Price], 2, &mut rng).unwrap();
        assert_eq!(t.minterms().len(), 2);
        let full = generate_minterms(vec![Slot::Airline, Slot::Price], 4, &mut rng);
        assert_eq!(full, Err(QueryError::BadMintermCount(4)));
        let four = vec![
            Slot::Airline,
            Slot::TicketClass,
            Slot::Price,
            Slot::NumLayovers,
        ];
        let t = generate_minterms(four.clone(), 3, &mut rng).unwrap();
        let pos = crate::logic::minimize_pos(&t);
        assert_eq!(
            &crate::logic::enumerate_satisfying(&pos, &four).unwrap(),
            t.minterms()
        );
    }

    #[test]
    fn full_two_slot_table_rejected() {
        assert_eq!(QueryConfig::new(2, 3).map(|c| c.num_minterms), Ok(3));
        // 2^1 rows cannot hold 2 minterms without being constant.
        let mut rng = unit_stream(0, 0);
        assert!(matches!(
            generate_minterms(vec![Slot::Price], 2, &mut rng),
            Err(QueryError::BadSlotCount(1))
        ));
    }

    #[test]
    fn binding_polarity_and_uniqueness() {
        let ctx = RouteContext::new(route(), pool(&[100, 200, 300, 400, 500, 600])).unwrap();
        let pos = PosExpression::parse("(price | ~ticket_class) & (price | airline)").unwrap();
        let b = bind_primitives(&pos, &mut unit_stream(5, 5), &ctx).unwrap();
        assert_eq!(b.len(), 4);
        assert!(b[&1].negated() && b[&1].slot() == Slot::TicketClass);
        assert!(!b[&0].negated() && !b[&2].negated());
        assert_ne!(b[&0].operand(), b[&2].operand());
    }

    #[test]
    fn or_and_semantics() {
        let f = sample_flight();
        let q = query(
            "(price | ticket_class)",
            vec![price_below(500), class_is(TicketClass::First, false)],
        );
        assert_eq!(requirement_satisfied(&q, &f), Ok(true));
        let q = query(
            "(price) & (ticket_class)",
            vec![price_below(500), class_is(TicketClass::First, false)],
        );
        assert_eq!(requirement_satisfied(&q, &f), Ok(false));
        let mut q = query("(price) & (ticket_class)", vec![price_below(500)]);
        assert_eq!(
            requirement_satisfied(&q, &f),
            Err(QueryError::UnboundOccurrence(1))
        );
        q.bindings.insert(1, class_is(TicketClass::First, true));
        assert_eq!(requirement_satisfied(&q, &f), Ok(true));
    }

    #[test]
    fn feasibility_partition() {
        let q = query("(price)", vec![price_below(250)]);
        let cfg = QueryConfig::new(2, 2).unwrap();
        let all_match = pool(&[100; 5]);
        assert_eq!(
            feasibility_check(&q, &all_match, &cfg),
            Err(QueryError::Infeasible {
                positives: 5,
                negatives: 0
            })
        );
        let (p, n) = feasibility_check(&q, &pool(&[100, 300, 400, 500, 600]), &cfg).unwrap();
        assert_eq!((p.len(), n.len()), (1, 4));
        assert!(matches!(
            feasibility_check(&q, &[], &cfg),
            Err(QueryError::Flight(_))
        ));
    }

    #[test]
    fn subset_counts() {
        let q = query("(price)", vec![price_below(250)]);
        let mut rng = unit_stream(9, 9);
        let positives = pool(&[100, 110, 120]);
        let negatives = pool(&(300..312).collect::<Vec<_>>());
        let s = assemble_samples(&q, &positives, &negatives, &mut rng, 3).unwrap();
        assert_eq!(s.len(), 3);
        let used: BTreeSet<u32> = s
            .iter()
            .flat_map(|x| x.options.iter().map(|o| o.price))
            .filter(|&p| p >= 300)
            .collect();
        assert_eq!(used.len(), 12);
        for x in &s {
            assert_eq!(x.options.len(), 5);
            assert!(x.options[x.gold].price < 250);
            assert_eq!(x.metrics.sum_terms, 1);
        }
        assert_eq!(s[2].sample_id, "s2x2-0-2");
        assert_eq!(
            assemble_samples(&q, &pool(&[1]), &pool(&[300, 301, 302, 303]), &mut rng, 8)
                .unwrap()
                .len(),
            1
        );
        assert_eq!(
            assemble_samples(&q, &pool(&[1]), &pool(&[300, 301, 302]), &mut rng, 8),
            Err(QueryError::InsufficientNegatives {
                available: 3,
                needed: 4
            })
        );
    }
}
